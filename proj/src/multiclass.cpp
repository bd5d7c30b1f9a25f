#include "mebo/multiclass.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "mebo/rgd.hpp"

namespace mebo {

void validate_class_spec(const ClassSpec& spec, double gamma) {
    if (spec.fractions.empty()) {
        throw Error(ErrorCode::spec_infeasible, "at least one class is required");
    }
    if (!(gamma >= 0.0 && gamma < 1.0)) {
        throw Error(ErrorCode::invalid_params, "gamma must lie in [0,1) for peeling");
    }
    double total = gamma;
    for (double f : spec.fractions) {
        if (!(f > 0.0) || !std::isfinite(f)) {
            throw Error(ErrorCode::spec_infeasible, "class fractions must be positive");
        }
        total += f;
    }
    if (total > 1.0 + 1e-9) {
        std::ostringstream os;
        os << "class fractions plus gamma sum to " << total << ", above 1";
        throw Error(ErrorCode::spec_infeasible, os.str());
    }
}

std::vector<ClassFit> peel(const Dataset& ds, const ClassSpec& spec, const Params& p) {
    validate_knobs(p);
    validate_class_spec(spec, p.gamma);

    const std::size_t n = ds.size();
    const std::size_t height = ceil_count(2.0 / p.epsilon) + 1;
    const std::size_t meb_iters = p.meb_iters > 0 ? p.meb_iters : default_meb_iters(p.epsilon);
    const std::size_t sample_size =
        std::max<std::size_t>(1, ceil_count((1.0 + 1.0 / p.delta) * std::log(static_cast<double>(height) / p.mu)));

    IndexList remaining(n);
    std::iota(remaining.begin(), remaining.end(), Index{0});
    std::vector<ClassFit> fits;
    for (std::size_t j = 0; j < spec.fractions.size(); ++j) {
        const std::size_t n_j = remaining.size();
        if (n_j == 0) {
            throw Error(ErrorCode::spec_infeasible, "no points left for class " + std::to_string(j + 1));
        }
        const std::size_t m_j = std::min(n_j, ceil_count(spec.fractions[j] * static_cast<double>(n)));
        if (m_j == 0) {
            throw Error(ErrorCode::spec_infeasible, "class " + std::to_string(j + 1) + " has no points");
        }

        DerivedParams dp;
        dp.height = height;
        dp.top_k = n_j - m_j;
        dp.sample_size = sample_size;
        dp.inliers = m_j;
        dp.meb_iters = meb_iters;

        Params pj = p;
        pj.seed = p.seed + j;
        pj.forest_size = std::min(p.forest_size, n_j);
        const Dataset sub = ds.subset(remaining);
        RecognitionResult r = recognize(sub, pj, dp);

        ClassFit fit;
        fit.ball = std::move(r.ball);
        fit.score = r.score;
        fit.candidates_evaluated = r.candidates_evaluated;
        fit.derived = dp;
        fit.members.reserve(m_j);
        std::vector<char> taken(n_j, 0);
        for (Index local : r.inliers) {
            fit.members.push_back(remaining[local]);
            taken[local] = 1;
        }
        std::sort(fit.members.begin(), fit.members.end());
        IndexList rest;
        rest.reserve(n_j - m_j);
        for (std::size_t i = 0; i < n_j; ++i) {
            if (!taken[i]) rest.push_back(remaining[i]);
        }
        remaining = std::move(rest);
        fits.push_back(std::move(fit));
    }
    return fits;
}

}  // namespace mebo
