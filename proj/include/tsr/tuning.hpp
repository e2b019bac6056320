#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "tsr/svm.hpp"

namespace tsr {

struct SearchStage {
    double c_low = 0.5, c_high = 50.0;
    double gamma_low = 0.01, gamma_high = 1.0;
    int samples_per_axis = 10;
    int iterations = 10;
    int folds = 5;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Wide first stage: 0.5 < C < 50, 0.01 < gamma < 1, 5 folds.
SearchStage wide_stage(std::uint64_t seed);
/// Narrow second stage: 5 < C < 25, 0.05 < gamma < 0.35, 3 folds.
SearchStage narrow_stage(std::uint64_t seed);

/// Seeded shuffle of 0..n-1 dealt into k folds; the first n % k folds get
/// one extra index.
std::vector<std::vector<std::size_t>> kfold_indices(std::size_t n, std::size_t k, std::uint64_t seed);

struct CvOptions {
    double tol = 1e-3;
    unsigned threads = 0;
};

/// Mean held-out accuracy over k folds of one-vs-one training.
double cv_score(std::span<const FeatureVector> features, std::span<const int> labels, double c, double gamma,
                std::size_t k, std::uint64_t seed, const CvOptions& opts = {});

struct Candidate {
    double c = 0.0;
    double gamma = 0.0;
    double score = 0.0;
};

/// Candidate grid of a stage: samples_per_axis uniform C draws by
/// samples_per_axis log-uniform gamma draws, row-major (C outer).
std::vector<Candidate> candidate_grid(const SearchStage& stage);

struct SearchResult {
    Candidate best;
    /// Every evaluated candidate in evaluation order.
    std::vector<Candidate> evaluated;
};

/// Called after each candidate evaluation with the stage it belongs to.
using CandidateObserver = std::function<void(const SearchStage&, const Candidate&)>;

/// Evaluates `iterations` distinct grid cells drawn without replacement
/// and returns the best by CV score (ties: smaller C, then smaller gamma).
SearchResult random_search(std::span<const FeatureVector> features, std::span<const int> labels,
                           const SearchStage& stage, const CvOptions& opts = {},
                           const CandidateObserver& observer = {});

struct TwoStageResult {
    SearchResult stage1;
    SearchResult stage2;
};

/// Wide 5-fold stage then narrow 3-fold stage; the answer is stage 2's best.
/// Stage 2 uses seed + 1 so the two stages draw independent candidates.
TwoStageResult two_stage_search(std::span<const FeatureVector> features, std::span<const int> labels,
                                std::uint64_t seed, const CvOptions& opts = {},
                                const CandidateObserver& observer = {});

}  // namespace tsr
