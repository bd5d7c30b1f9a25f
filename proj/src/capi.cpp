#include "mebo/mebo.h"

#include <new>
#include <string>

#include "mebo/core.hpp"
#include "mebo/csv.hpp"
#include "mebo/metrics.hpp"
#include "mebo/multiclass.hpp"
#include "mebo/rgd.hpp"
#include "mebo/synth.hpp"

struct mebo_dataset {
    mebo::Dataset value;
};

struct mebo_labels {
    std::vector<int32_t> value;
};

struct mebo_result {
    mebo::Ball ball;
    mebo::IndexList inliers;
    double score = 0.0;
    std::size_t candidates = 0;
    mebo::DerivedParams derived;
};

struct mebo_peel_result {
    std::vector<mebo_result> classes;
};

namespace {

thread_local std::string last_error;

mebo_status to_status(mebo::ErrorCode code) {
    using mebo::ErrorCode;
    switch (code) {
        case ErrorCode::invalid_params: return MEBO_ERR_INVALID_PARAMS;
        case ErrorCode::degenerate_dataset: return MEBO_ERR_DEGENERATE_DATASET;
        case ErrorCode::empty_subset: return MEBO_ERR_EMPTY_SUBSET;
        case ErrorCode::out_of_range: return MEBO_ERR_OUT_OF_RANGE;
        case ErrorCode::instance_too_large: return MEBO_ERR_INSTANCE_TOO_LARGE;
        case ErrorCode::spec_infeasible: return MEBO_ERR_SPEC_INFEASIBLE;
        case ErrorCode::invalid_argument: return MEBO_ERR_INVALID_ARGUMENT;
        case ErrorCode::parse_error: return MEBO_ERR_PARSE;
        case ErrorCode::io_error: return MEBO_ERR_IO;
    }
    return MEBO_ERR_INTERNAL;
}

template <class Fn>
mebo_status guarded(Fn&& fn) {
    try {
        fn();
        last_error.clear();
        return MEBO_OK;
    } catch (const mebo::Error& e) {
        last_error = e.what();
        return to_status(e.code());
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return MEBO_ERR_INTERNAL;
    } catch (const std::exception& e) {
        last_error = e.what();
        return MEBO_ERR_INTERNAL;
    } catch (...) {
        last_error = "unknown error";
        return MEBO_ERR_INTERNAL;
    }
}

void require(bool ok, const char* what) {
    if (!ok) throw mebo::Error(mebo::ErrorCode::invalid_argument, what);
}

mebo::Params to_params(const mebo_params* p) {
    require(p != nullptr, "params must not be null");
    mebo::Params out;
    out.gamma = p->gamma;
    out.epsilon = p->epsilon;
    out.delta = p->delta;
    out.mu = p->mu;
    out.meb_iters = p->meb_iters;
    out.forest_size = p->forest_size;
    out.sequential_rounds = p->sequential_rounds;
    out.seed = p->seed;
    out.threads = p->threads;
    return out;
}

mebo_derived to_c(const mebo::DerivedParams& dp) {
    return {dp.height, dp.top_k, dp.sample_size, dp.inliers, dp.meb_iters};
}

mebo_f1 to_c(const mebo::F1Score& s) { return {s.precision, s.recall, s.f1, s.empty_prediction ? 1 : 0}; }

void emit(mebo::LabeledData data, mebo_dataset** points, mebo_labels** labels) {
    require(points != nullptr && labels != nullptr, "output pointers must not be null");
    auto ds = new mebo_dataset{std::move(data.points)};
    auto lb = new (std::nothrow) mebo_labels{{data.labels.begin(), data.labels.end()}};
    if (!lb) {
        delete ds;
        throw std::bad_alloc();
    }
    *points = ds;
    *labels = lb;
}

}  // namespace

extern "C" {

const char* mebo_version(void) { return "1.0.0"; }

const char* mebo_status_string(mebo_status status) {
    switch (status) {
        case MEBO_OK: return "ok";
        case MEBO_ERR_INVALID_PARAMS: return "invalid parameters";
        case MEBO_ERR_DEGENERATE_DATASET: return "degenerate dataset";
        case MEBO_ERR_EMPTY_SUBSET: return "empty subset";
        case MEBO_ERR_OUT_OF_RANGE: return "out of range";
        case MEBO_ERR_INSTANCE_TOO_LARGE: return "instance too large";
        case MEBO_ERR_SPEC_INFEASIBLE: return "class specification infeasible";
        case MEBO_ERR_INVALID_ARGUMENT: return "invalid argument";
        case MEBO_ERR_PARSE: return "parse error";
        case MEBO_ERR_IO: return "i/o error";
        case MEBO_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* mebo_last_error(void) { return last_error.c_str(); }

void mebo_params_init(mebo_params* params) {
    if (!params) return;
    const mebo::Params d;
    *params = {d.gamma, d.epsilon, d.delta, d.mu, d.meb_iters, d.forest_size, d.sequential_rounds, d.seed, d.threads};
}

mebo_status mebo_params_validate(const mebo_params* params, int for_peeling) {
    return guarded([&] {
        const mebo::Params p = to_params(params);
        mebo::validate_knobs(p);
        if (for_peeling) {
            if (!(p.gamma >= 0.0 && p.gamma < 1.0)) {
                throw mebo::Error(mebo::ErrorCode::invalid_params, "gamma must lie in [0,1) for peeling");
            }
        } else {
            if (!(p.gamma > 0.0 && p.gamma < 1.0)) {
                throw mebo::Error(mebo::ErrorCode::invalid_params, "gamma must lie in (0,1)");
            }
            if ((1.0 + p.delta) * p.gamma >= 1.0) {
                throw mebo::Error(mebo::ErrorCode::invalid_params, "(1+delta)*gamma must be below 1");
            }
        }
    });
}

mebo_status mebo_derive_params(const mebo_params* params, size_t n, mebo_derived* out) {
    return guarded([&] {
        require(out != nullptr, "output must not be null");
        *out = to_c(mebo::derive_params(to_params(params), n));
    });
}

mebo_status mebo_dataset_create(const double* values, size_t n, size_t d, mebo_dataset** out) {
    return guarded([&] {
        require(out != nullptr, "output must not be null");
        require(values != nullptr || n * d == 0, "values must not be null");
        std::vector<double> copy(values, values + n * d);
        *out = new mebo_dataset{mebo::Dataset(n, d, std::move(copy))};
    });
}

mebo_status mebo_dataset_read_csv(const char* path, mebo_dataset** out) {
    return guarded([&] {
        require(path != nullptr && out != nullptr, "path and output must not be null");
        *out = new mebo_dataset{mebo::read_points_csv(path)};
    });
}

mebo_status mebo_dataset_write_csv(const mebo_dataset* ds, const char* path) {
    return guarded([&] {
        require(ds != nullptr && path != nullptr, "dataset and path must not be null");
        mebo::write_points_csv(ds->value, path);
    });
}

size_t mebo_dataset_size(const mebo_dataset* ds) { return ds ? ds->value.size() : 0; }
size_t mebo_dataset_dim(const mebo_dataset* ds) { return ds ? ds->value.dim() : 0; }
const double* mebo_dataset_values(const mebo_dataset* ds) { return ds ? ds->value.values().data() : nullptr; }
void mebo_dataset_free(mebo_dataset* ds) { delete ds; }

mebo_status mebo_labels_create(const int32_t* values, size_t n, mebo_labels** out) {
    return guarded([&] {
        require(out != nullptr, "output must not be null");
        require(values != nullptr || n == 0, "values must not be null");
        *out = new mebo_labels{{values, values + n}};
    });
}

mebo_status mebo_labels_read_csv(const char* path, mebo_labels** out) {
    return guarded([&] {
        require(path != nullptr && out != nullptr, "path and output must not be null");
        const auto labels = mebo::read_labels_csv(path);
        *out = new mebo_labels{{labels.begin(), labels.end()}};
    });
}

mebo_status mebo_labels_write_csv(const mebo_labels* labels, const char* path) {
    return guarded([&] {
        require(labels != nullptr && path != nullptr, "labels and path must not be null");
        mebo::write_labels_csv({labels->value.begin(), labels->value.end()}, path);
    });
}

size_t mebo_labels_size(const mebo_labels* labels) { return labels ? labels->value.size() : 0; }
const int32_t* mebo_labels_values(const mebo_labels* labels) { return labels ? labels->value.data() : nullptr; }
void mebo_labels_free(mebo_labels* labels) { delete labels; }

mebo_status mebo_generate_toy2d(uint64_t seed, mebo_dataset** points, mebo_labels** labels) {
    return guarded([&] { emit(mebo::gen_toy_2d(seed), points, labels); });
}

mebo_status mebo_generate_highdim(size_t n, size_t d, double gamma, uint64_t seed, mebo_dataset** points,
                                  mebo_labels** labels) {
    return guarded([&] { emit(mebo::gen_highdim(n, d, gamma, seed), points, labels); });
}

mebo_status mebo_generate_multiclass(size_t n, size_t d, const double* fractions, size_t classes, double gamma,
                                     uint64_t seed, mebo_dataset** points, mebo_labels** labels) {
    return guarded([&] {
        require(fractions != nullptr || classes == 0, "fractions must not be null");
        std::vector<double> f(fractions, fractions + classes);
        emit(mebo::gen_multiclass(n, d, f, gamma, seed), points, labels);
    });
}

mebo_status mebo_recognize(const mebo_dataset* ds, const mebo_params* params, mebo_result** out) {
    return guarded([&] {
        require(ds != nullptr && out != nullptr, "dataset and output must not be null");
        mebo::RecognitionResult r = mebo::recognize(ds->value, to_params(params));
        *out = new mebo_result{std::move(r.ball), std::move(r.inliers), r.score, r.candidates_evaluated, r.derived};
    });
}

size_t mebo_result_dim(const mebo_result* r) { return r ? r->ball.center.size() : 0; }
const double* mebo_result_center(const mebo_result* r) { return r ? r->ball.center.data() : nullptr; }
double mebo_result_radius(const mebo_result* r) { return r ? r->ball.radius : 0.0; }
size_t mebo_result_inlier_count(const mebo_result* r) { return r ? r->inliers.size() : 0; }
const size_t* mebo_result_inliers(const mebo_result* r) { return r ? r->inliers.data() : nullptr; }
double mebo_result_score(const mebo_result* r) { return r ? r->score : 0.0; }
size_t mebo_result_candidates(const mebo_result* r) { return r ? r->candidates : 0; }
void mebo_result_derived(const mebo_result* r, mebo_derived* out) {
    if (r && out) *out = to_c(r->derived);
}
void mebo_result_free(mebo_result* r) { delete r; }

mebo_status mebo_peel(const mebo_dataset* ds, const double* fractions, size_t classes, const mebo_params* params,
                      mebo_peel_result** out) {
    return guarded([&] {
        require(ds != nullptr && out != nullptr, "dataset and output must not be null");
        require(fractions != nullptr || classes == 0, "fractions must not be null");
        mebo::ClassSpec spec{{fractions, fractions + classes}};
        auto fits = mebo::peel(ds->value, spec, to_params(params));
        auto result = new mebo_peel_result;
        for (auto& f : fits) {
            result->classes.push_back({std::move(f.ball), std::move(f.members), f.score, f.candidates_evaluated, f.derived});
        }
        *out = result;
    });
}

size_t mebo_peel_result_classes(const mebo_peel_result* r) { return r ? r->classes.size() : 0; }

const mebo_result* mebo_peel_result_class(const mebo_peel_result* r, size_t j) {
    return r && j < r->classes.size() ? &r->classes[j] : nullptr;
}

void mebo_peel_result_free(mebo_peel_result* r) { delete r; }

mebo_status mebo_f1_score(const size_t* predicted, size_t predicted_count, const size_t* truth, size_t truth_count,
                          size_t n, mebo_f1* out) {
    return guarded([&] {
        require(out != nullptr, "output must not be null");
        require(predicted != nullptr || predicted_count == 0, "predicted must not be null");
        require(truth != nullptr || truth_count == 0, "truth must not be null");
        *out = to_c(mebo::f1_score({predicted, predicted_count}, {truth, truth_count}, n));
    });
}

mebo_status mebo_match_classes(const size_t* const* predicted, const size_t* sizes, size_t classes,
                               const mebo_labels* labels, int32_t* matched_label, mebo_f1* per_class,
                               double* average_f1) {
    return guarded([&] {
        require(labels != nullptr, "labels must not be null");
        require(classes == 0 || (predicted != nullptr && sizes != nullptr), "predicted sets must not be null");
        std::vector<mebo::IndexList> sets;
        for (size_t j = 0; j < classes; ++j) {
            require(predicted[j] != nullptr || sizes[j] == 0, "predicted set must not be null");
            sets.emplace_back(predicted[j], predicted[j] + sizes[j]);
        }
        const mebo::ClassMatch m = mebo::match_classes(sets, {labels->value.begin(), labels->value.end()});
        for (size_t j = 0; j < classes; ++j) {
            if (matched_label) matched_label[j] = m.label[j];
            if (per_class) per_class[j] = to_c(m.per_class[j]);
        }
        if (average_f1) *average_f1 = m.average_f1;
    });
}

}  // extern "C"
