#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace tsr {

/// Rows are true classes, columns predicted classes.
struct ConfusionMatrix {
    std::size_t k = 0;
    std::vector<std::uint64_t> counts;

    std::uint64_t at(std::size_t truth, std::size_t pred) const { return counts[truth * k + pred]; }
    std::uint64_t total() const noexcept;
    std::uint64_t trace() const noexcept;
};

ConfusionMatrix confusion(std::span<const int> truth, std::span<const int> predicted, std::size_t k);

struct ClassScores {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::uint64_t support = 0;
};

struct Scores {
    double accuracy = 0.0;
    double macro_precision = 0.0;
    double macro_recall = 0.0;
    double macro_f1 = 0.0;
    /// Support-weighted counterparts of the macro scores.
    double weighted_precision = 0.0;
    double weighted_recall = 0.0;
    double weighted_f1 = 0.0;
    std::vector<ClassScores> per_class;
};

/// Accuracy plus per-class and averaged precision/recall/F1. 0/0 counts as
/// 0; classes without support are left out of the averages.
Scores scores(const ConfusionMatrix& cm);

}  // namespace tsr
