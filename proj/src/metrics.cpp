#include "mebo/metrics.hpp"

#include <algorithm>
#include <numeric>

#include "mebo/synth.hpp"

namespace mebo {

namespace {

std::vector<char> membership(std::span<const Index> rows, std::size_t n, std::size_t& distinct) {
    std::vector<char> mark(n, 0);
    distinct = 0;
    for (Index i : rows) {
        if (i >= n) throw Error(ErrorCode::out_of_range, "index outside [0, n)");
        if (!mark[i]) {
            mark[i] = 1;
            ++distinct;
        }
    }
    return mark;
}

}  // namespace

F1Score f1_score(std::span<const Index> predicted, std::span<const Index> truth, std::size_t n) {
    std::size_t pred_size = 0;
    std::size_t true_size = 0;
    const auto pred = membership(predicted, n, pred_size);
    const auto real = membership(truth, n, true_size);
    std::size_t hit = 0;
    for (std::size_t i = 0; i < n; ++i) hit += (pred[i] && real[i]) ? 1 : 0;

    F1Score s;
    s.empty_prediction = pred_size == 0;
    s.precision = pred_size ? static_cast<double>(hit) / static_cast<double>(pred_size) : 0.0;
    s.recall = true_size ? static_cast<double>(hit) / static_cast<double>(true_size) : 0.0;
    const double sum = s.precision + s.recall;
    s.f1 = sum > 0.0 ? 2.0 * s.precision * s.recall / sum : 0.0;
    return s;
}

ClassMatch match_classes(const std::vector<IndexList>& predicted, const std::vector<int>& labels) {
    const std::size_t n = labels.size();
    const int max_label = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end());
    const std::size_t classes = predicted.size();
    const std::size_t truths = static_cast<std::size_t>(std::max(0, max_label));

    // scores[j][t] = F1 of predicted class j against truth label t+1
    std::vector<std::vector<F1Score>> scores(classes, std::vector<F1Score>(truths));
    for (std::size_t t = 0; t < truths; ++t) {
        const IndexList truth = rows_with_label(labels, static_cast<int>(t + 1));
        for (std::size_t j = 0; j < classes; ++j) scores[j][t] = f1_score(predicted[j], truth, n);
    }

    ClassMatch out;
    out.label.assign(classes, 0);
    out.per_class.assign(classes, F1Score{});
    if (truths == 0 || classes == 0) return out;

    // Slot list: truth labels plus "unmatched" fillers when there are more predictions.
    std::vector<int> slots(std::max(classes, truths));
    std::iota(slots.begin(), slots.end(), 0);
    auto value_of = [&](const std::vector<int>& perm) {
        double total = 0.0;
        for (std::size_t j = 0; j < classes; ++j) {
            if (static_cast<std::size_t>(perm[j]) < truths) total += scores[j][perm[j]].f1;
        }
        return total;
    };

    std::vector<int> best = slots;
    if (slots.size() <= 8) {
        double best_value = -1.0;
        std::vector<int> perm = slots;
        do {
            const double v = value_of(perm);
            if (v > best_value) {
                best_value = v;
                best = perm;
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
    } else {
        std::vector<char> used(truths, 0);
        for (std::size_t j = 0; j < classes; ++j) {
            int pick = -1;
            for (std::size_t t = 0; t < truths; ++t) {
                if (!used[t] && (pick < 0 || scores[j][t].f1 > scores[j][pick].f1)) pick = static_cast<int>(t);
            }
            best[j] = pick < 0 ? static_cast<int>(truths) : pick;
            if (pick >= 0) used[pick] = 1;
        }
    }

    double sum = 0.0;
    for (std::size_t j = 0; j < classes; ++j) {
        if (static_cast<std::size_t>(best[j]) < truths) {
            out.label[j] = best[j] + 1;
            out.per_class[j] = scores[j][best[j]];
        }
        sum += out.per_class[j].f1;
    }
    out.average_f1 = sum / static_cast<double>(classes);
    return out;
}

}  // namespace mebo
