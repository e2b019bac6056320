#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "tsr/hog.hpp"

namespace tsr {

/// Hyperparameters for one binary RBF-SVM. C and gamma default to the
/// values tuned for the traffic-sign features.
struct TrainConfig {
    double c = 20.5557;
    double gamma = 0.2167;
    /// Stop once the maximal KKT violation (m - M gap) drops below this.
    double tol = 1e-3;
    /// Cap on pair updates per binary problem; 0 means 10 * N * N (ten
    /// sweeps of N updates).
    std::size_t max_iters = 0;
    /// Kernel row cache budget per binary problem.
    std::size_t cache_mb = 128;

    void validate() const;
};

struct BinaryModel {
    std::vector<FeatureVector> support_vectors;
    /// alpha_i * y_i for each support vector.
    std::vector<double> dual_coeffs;
    double bias = 0.0;
    double gamma = 0.0;

    friend bool operator==(const BinaryModel&, const BinaryModel&) = default;
};

struct TrainStats {
    std::size_t iterations = 0;
    /// m(alpha) - M(alpha) at exit.
    double kkt_gap = 0.0;
    bool converged = true;
    std::size_t support_count = 0;
};

struct BinaryTrainResult {
    BinaryModel model;
    TrainStats stats;
    /// Multipliers for every training example, in input order.
    std::vector<double> alpha;
};

double rbf_kernel(std::span<const float> x, std::span<const float> y, double gamma);

/// SMO with second-order working-set selection. `labels` are +1 / -1.
/// Deterministic: no randomness in pair selection. Throws SingleClassInput
/// and DimensionMismatch; a run that hits the iteration cap with a gap
/// above 10 * tol returns with stats.converged = false.
BinaryTrainResult smo_train(std::span<const FeatureVector> features, std::span<const int> labels,
                            const TrainConfig& cfg);

double decision_value(const BinaryModel& model, std::span<const float> x);

struct PairModel {
    int class_a = 0;  // +1 side
    int class_b = 0;  // -1 side
    BinaryModel model;

    friend bool operator==(const PairModel&, const PairModel&) = default;
};

struct MulticlassSvmModel {
    std::vector<int> classes;
    std::vector<PairModel> pairs;
    TrainConfig train_config;

    /// Field-wise comparison of what the model file stores (C and gamma
    /// from the config, everything else verbatim).
    friend bool operator==(const MulticlassSvmModel& a, const MulticlassSvmModel& b) {
        return a.classes == b.classes && a.pairs == b.pairs && a.train_config.c == b.train_config.c &&
               a.train_config.gamma == b.train_config.gamma;
    }
};

struct MulticlassTrainResult {
    MulticlassSvmModel model;
    /// One entry per pair, same order as model.pairs.
    std::vector<TrainStats> pair_stats;
};

/// One-vs-one: a binary problem per class pair (a < b), a mapped to +1.
/// Pairs train in parallel on `threads` workers (0 = all cores); results do
/// not depend on the thread count.
MulticlassTrainResult train_multiclass(std::span<const FeatureVector> features, std::span<const int> labels,
                                       const TrainConfig& cfg, unsigned threads = 0);

/// Majority vote; ties go to the largest summed |decision value| over the
/// tied class's winning pairs, then to the lowest class id.
int predict(const MulticlassSvmModel& model, std::span<const float> x);

/// Vote resolution used by predict, exposed for tests: one decision value
/// per pair in model order.
int resolve_votes(const MulticlassSvmModel& model, std::span<const double> decisions);

/// Batch predictor that evaluates each distinct support vector once per
/// query instead of once per pair. Gives the same answers as predict.
class Predictor {
public:
    explicit Predictor(const MulticlassSvmModel& model);

    int predict(std::span<const float> x) const;
    std::vector<int> predict_all(std::span<const FeatureVector> xs, unsigned threads = 0) const;

    std::size_t unique_support_vectors() const noexcept { return pool_.size(); }

private:
    const MulticlassSvmModel* model_;
    std::vector<const FeatureVector*> pool_;
    /// Per pair, pool index of each support vector.
    std::vector<std::vector<std::uint32_t>> refs_;
};

std::vector<std::uint8_t> serialize_model(const MulticlassSvmModel& model);
MulticlassSvmModel deserialize_model(std::span<const std::uint8_t> bytes);
void save_model(const MulticlassSvmModel& model, const std::filesystem::path& path);
MulticlassSvmModel load_model(const std::filesystem::path& path);

}  // namespace tsr
