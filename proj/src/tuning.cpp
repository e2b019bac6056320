#include "tsr/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tsr/error.hpp"
#include "tsr/rng.hpp"

namespace tsr {

void SearchStage::validate() const {
    if (!(c_low < c_high) || !(gamma_low < gamma_high) || !(c_low > 0.0) || !(gamma_low > 0.0) ||
        samples_per_axis < 1 || iterations < 1 || iterations > samples_per_axis * samples_per_axis || folds < 2)
        throw Error(ErrorCode::InvalidConfig, "invalid search stage");
}

SearchStage wide_stage(std::uint64_t seed) { return {0.5, 50.0, 0.01, 1.0, 10, 10, 5, seed}; }

SearchStage narrow_stage(std::uint64_t seed) { return {5.0, 25.0, 0.05, 0.35, 10, 10, 3, seed}; }

std::vector<std::vector<std::size_t>> kfold_indices(std::size_t n, std::size_t k, std::uint64_t seed) {
    if (k < 2) throw Error(ErrorCode::InvalidConfig, "k-fold needs k >= 2");
    if (n < k)
        throw Error(ErrorCode::TooFewSamples,
                    std::to_string(n) + " samples cannot fill " + std::to_string(k) + " folds");
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    XorShift64Star rng(seed);
    shuffle(std::span<std::size_t>(order), rng);

    std::vector<std::vector<std::size_t>> folds(k);
    std::size_t pos = 0;
    for (std::size_t f = 0; f < k; ++f) {
        const std::size_t size = n / k + (f < n % k ? 1 : 0);
        folds[f].assign(order.begin() + static_cast<std::ptrdiff_t>(pos),
                        order.begin() + static_cast<std::ptrdiff_t>(pos + size));
        pos += size;
    }
    return folds;
}

double cv_score(std::span<const FeatureVector> features, std::span<const int> labels, double c, double gamma,
                std::size_t k, std::uint64_t seed, const CvOptions& opts) {
    if (features.size() != labels.size())
        throw Error(ErrorCode::LengthMismatch, "features and labels differ in length");
    const auto folds = kfold_indices(features.size(), k, seed);
    TrainConfig cfg;
    cfg.c = c;
    cfg.gamma = gamma;
    cfg.tol = opts.tol;

    std::vector<int> fold_of(features.size());
    for (std::size_t f = 0; f < folds.size(); ++f)
        for (std::size_t i : folds[f]) fold_of[i] = static_cast<int>(f);

    double total = 0.0;
    for (std::size_t f = 0; f < folds.size(); ++f) {
        std::vector<FeatureVector> x;
        std::vector<int> y;
        for (std::size_t i = 0; i < features.size(); ++i)
            if (fold_of[i] != static_cast<int>(f)) {
                x.push_back(features[i]);
                y.push_back(labels[i]);
            }
        const MulticlassSvmModel model = train_multiclass(x, y, cfg, opts.threads).model;
        const Predictor predictor(model);
        std::size_t correct = 0;
        for (std::size_t i : folds[f])
            if (predictor.predict(features[i]) == labels[i]) ++correct;
        total += static_cast<double>(correct) / static_cast<double>(folds[f].size());
    }
    return total / static_cast<double>(folds.size());
}

std::vector<Candidate> candidate_grid(const SearchStage& stage) {
    stage.validate();
    XorShift64Star rng(stage.seed);
    const auto n = static_cast<std::size_t>(stage.samples_per_axis);
    std::vector<double> cs(n), gammas(n);
    // Ranges are open; redraw the (measure-zero) lower endpoint.
    auto draw = [&rng](double lo, double hi) {
        double v = rng.uniform(lo, hi);
        while (v <= lo) v = rng.uniform(lo, hi);
        return v;
    };
    for (double& c : cs) c = draw(stage.c_low, stage.c_high);
    const double lg0 = std::log(stage.gamma_low), lg1 = std::log(stage.gamma_high);
    for (double& g : gammas) g = std::clamp(std::exp(draw(lg0, lg1)), std::nextafter(stage.gamma_low, 1e300),
                                            std::nextafter(stage.gamma_high, 0.0));

    std::vector<Candidate> grid;
    grid.reserve(n * n);
    for (double c : cs)
        for (double g : gammas) grid.push_back({c, g, 0.0});
    return grid;
}

SearchResult random_search(std::span<const FeatureVector> features, std::span<const int> labels,
                           const SearchStage& stage, const CvOptions& opts, const CandidateObserver& observer) {
    std::vector<Candidate> grid = candidate_grid(stage);
    // Cell picks use their own stream so candidate_grid alone reproduces the grid.
    XorShift64Star rng(stage.seed ^ 0xA5A5A5A5A5A5A5A5ull);
    std::vector<std::size_t> cells(grid.size());
    for (std::size_t i = 0; i < cells.size(); ++i) cells[i] = i;
    const auto picks = static_cast<std::size_t>(stage.iterations);
    for (std::size_t i = 0; i < picks; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.below(cells.size() - i));
        std::swap(cells[i], cells[j]);
    }

    SearchResult result;
    for (std::size_t i = 0; i < picks; ++i) {
        Candidate cand = grid[cells[i]];
        cand.score = cv_score(features, labels, cand.c, cand.gamma, static_cast<std::size_t>(stage.folds),
                              stage.seed, opts);
        result.evaluated.push_back(cand);
        if (observer) observer(stage, cand);
        const Candidate& b = result.best;
        const bool better = result.evaluated.size() == 1 || cand.score > b.score ||
                            (cand.score == b.score && (cand.c < b.c || (cand.c == b.c && cand.gamma < b.gamma)));
        if (better) result.best = cand;
    }
    return result;
}

TwoStageResult two_stage_search(std::span<const FeatureVector> features, std::span<const int> labels,
                                std::uint64_t seed, const CvOptions& opts, const CandidateObserver& observer) {
    TwoStageResult out;
    out.stage1 = random_search(features, labels, wide_stage(seed), opts, observer);
    out.stage2 = random_search(features, labels, narrow_stage(seed + 1), opts, observer);
    return out;
}

}  // namespace tsr
