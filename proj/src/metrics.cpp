#include "tsr/metrics.hpp"

#include <string>

#include "tsr/error.hpp"

namespace tsr {

std::uint64_t ConfusionMatrix::total() const noexcept {
    std::uint64_t t = 0;
    for (auto c : counts) t += c;
    return t;
}

std::uint64_t ConfusionMatrix::trace() const noexcept {
    std::uint64_t t = 0;
    for (std::size_t i = 0; i < k; ++i) t += counts[i * k + i];
    return t;
}

ConfusionMatrix confusion(std::span<const int> truth, std::span<const int> predicted, std::size_t k) {
    if (truth.size() != predicted.size())
        throw Error(ErrorCode::LengthMismatch, std::to_string(truth.size()) + " truths vs " +
                                                   std::to_string(predicted.size()) + " predictions");
    ConfusionMatrix cm{k, std::vector<std::uint64_t>(k * k, 0)};
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const int t = truth[i], p = predicted[i];
        if (t < 0 || p < 0 || static_cast<std::size_t>(t) >= k || static_cast<std::size_t>(p) >= k)
            throw Error(ErrorCode::LabelOutOfRange, "label outside [0, " + std::to_string(k) + ") at sample " +
                                                        std::to_string(i));
        ++cm.counts[static_cast<std::size_t>(t) * k + static_cast<std::size_t>(p)];
    }
    return cm;
}

Scores scores(const ConfusionMatrix& cm) {
    const std::uint64_t total = cm.total();
    if (total == 0) throw Error(ErrorCode::EmptyMatrix, "no scored samples");
    Scores s;
    s.accuracy = static_cast<double>(cm.trace()) / static_cast<double>(total);
    s.per_class.resize(cm.k);

    std::size_t supported = 0;
    for (std::size_t c = 0; c < cm.k; ++c) {
        std::uint64_t row = 0, col = 0;
        for (std::size_t j = 0; j < cm.k; ++j) {
            row += cm.at(c, j);
            col += cm.at(j, c);
        }
        const double tp = static_cast<double>(cm.at(c, c));
        ClassScores& cs = s.per_class[c];
        cs.support = row;
        cs.precision = col == 0 ? 0.0 : tp / static_cast<double>(col);
        cs.recall = row == 0 ? 0.0 : tp / static_cast<double>(row);
        cs.f1 = cs.precision + cs.recall == 0.0 ? 0.0 : 2.0 * cs.precision * cs.recall / (cs.precision + cs.recall);
        if (row == 0) continue;
        ++supported;
        s.macro_precision += cs.precision;
        s.macro_recall += cs.recall;
        s.macro_f1 += cs.f1;
        const double w = static_cast<double>(row) / static_cast<double>(total);
        s.weighted_precision += w * cs.precision;
        s.weighted_recall += w * cs.recall;
        s.weighted_f1 += w * cs.f1;
    }
    s.macro_precision /= static_cast<double>(supported);
    s.macro_recall /= static_cast<double>(supported);
    s.macro_f1 /= static_cast<double>(supported);
    return s;
}

}  // namespace tsr
