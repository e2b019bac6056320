#include <algorithm>
#include <cmath>
#include <cstring>
#include <set>
#include <string>
#include <unordered_map>

#include "tsr/error.hpp"
#include "tsr/parallel.hpp"
#include "tsr/svm.hpp"

namespace tsr {

MulticlassTrainResult train_multiclass(std::span<const FeatureVector> features, std::span<const int> labels,
                                       const TrainConfig& cfg, unsigned threads) {
    cfg.validate();
    if (features.size() != labels.size())
        throw Error(ErrorCode::LengthMismatch, std::to_string(features.size()) + " feature vectors but " +
                                                   std::to_string(labels.size()) + " labels");
    const std::set<int> class_set(labels.begin(), labels.end());
    if (class_set.size() < 2)
        throw Error(ErrorCode::FewerThanTwoClasses,
                    "one-vs-one training needs at least 2 classes, got " + std::to_string(class_set.size()));

    MulticlassTrainResult out;
    out.model.classes.assign(class_set.begin(), class_set.end());
    out.model.train_config = cfg;
    const auto& classes = out.model.classes;
    for (std::size_t a = 0; a < classes.size(); ++a)
        for (std::size_t b = a + 1; b < classes.size(); ++b)
            out.model.pairs.push_back({classes[a], classes[b], {}});
    out.pair_stats.resize(out.model.pairs.size());

    parallel_for(
        out.model.pairs.size(),
        [&](std::size_t p) {
            PairModel& pm = out.model.pairs[p];
            std::vector<FeatureVector> x;
            std::vector<int> y;
            for (std::size_t i = 0; i < labels.size(); ++i) {
                if (labels[i] == pm.class_a) {
                    x.push_back(features[i]);
                    y.push_back(1);
                } else if (labels[i] == pm.class_b) {
                    x.push_back(features[i]);
                    y.push_back(-1);
                }
            }
            try {
                BinaryTrainResult r = smo_train(x, y, cfg);
                pm.model = std::move(r.model);
                out.pair_stats[p] = r.stats;
            } catch (const Error& e) {
                throw Error(e.code(), "pair (" + std::to_string(pm.class_a) + ", " + std::to_string(pm.class_b) +
                                          "): " + e.detail());
            }
        },
        threads);
    return out;
}

int resolve_votes(const MulticlassSvmModel& model, std::span<const double> decisions) {
    const std::size_t k = model.classes.size();
    std::unordered_map<int, std::size_t> slot;
    for (std::size_t i = 0; i < k; ++i) slot[model.classes[i]] = i;
    std::vector<int> votes(k, 0);
    std::vector<double> margin(k, 0.0);
    for (std::size_t p = 0; p < model.pairs.size(); ++p) {
        const double d = decisions[p];
        const std::size_t winner = slot[d > 0.0 ? model.pairs[p].class_a : model.pairs[p].class_b];
        ++votes[winner];
        margin[winner] += std::abs(d);
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < k; ++i)
        if (votes[i] > votes[best] || (votes[i] == votes[best] && margin[i] > margin[best])) best = i;
    return model.classes[best];
}

int predict(const MulticlassSvmModel& model, std::span<const float> x) {
    std::vector<double> d(model.pairs.size());
    for (std::size_t p = 0; p < model.pairs.size(); ++p) d[p] = decision_value(model.pairs[p].model, x);
    return resolve_votes(model, d);
}

Predictor::Predictor(const MulticlassSvmModel& model) : model_(&model) {
    std::unordered_map<std::string, std::uint32_t> index;
    refs_.reserve(model.pairs.size());
    for (const PairModel& pm : model.pairs) {
        std::vector<std::uint32_t> r;
        r.reserve(pm.model.support_vectors.size());
        for (const FeatureVector& sv : pm.model.support_vectors) {
            std::string key(reinterpret_cast<const char*>(sv.data()), sv.size() * sizeof(float));
            auto [it, inserted] = index.try_emplace(std::move(key), static_cast<std::uint32_t>(pool_.size()));
            if (inserted) pool_.push_back(&sv);
            r.push_back(it->second);
        }
        refs_.push_back(std::move(r));
    }
}

int Predictor::predict(std::span<const float> x) const {
    const auto& pairs = model_->pairs;
    std::vector<double> d(pairs.size());
    // Kernel values per distinct SV; a pair with its own gamma recomputes.
    const double gamma = model_->train_config.gamma;
    std::vector<double> k(pool_.size());
    for (std::size_t s = 0; s < pool_.size(); ++s) k[s] = rbf_kernel(*pool_[s], x, gamma);
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        const BinaryModel& m = pairs[p].model;
        double f = m.bias;
        if (m.gamma == gamma) {
            for (std::size_t i = 0; i < refs_[p].size(); ++i) f += m.dual_coeffs[i] * k[refs_[p][i]];
        } else {
            f = decision_value(m, x);
        }
        d[p] = f;
    }
    return resolve_votes(*model_, d);
}

std::vector<int> Predictor::predict_all(std::span<const FeatureVector> xs, unsigned threads) const {
    std::vector<int> out(xs.size());
    parallel_for(xs.size(), [&](std::size_t i) { out[i] = predict(xs[i]); }, threads);
    return out;
}

}  // namespace tsr
