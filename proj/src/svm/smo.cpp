#include <algorithm>
#include <cmath>
#include <limits>
#include <list>
#include <string>

#include "tsr/error.hpp"
#include "tsr/svm.hpp"

namespace tsr {

namespace {

constexpr double kTau = 1e-12;
constexpr double kSupportThreshold = 1e-8;

// LRU cache of kernel rows K(i, .) for one binary problem.
class KernelRows {
public:
    KernelRows(std::span<const FeatureVector> x, double gamma, std::size_t budget_bytes)
        : x_(x), gamma_(gamma), rows_(x.size()), where_(x.size()) {
        const std::size_t row_bytes = std::max<std::size_t>(1, x.size() * sizeof(double));
        capacity_ = std::max<std::size_t>(2, budget_bytes / row_bytes);
    }

    const std::vector<double>& row(std::size_t i) {
        if (!rows_[i].empty()) {
            lru_.splice(lru_.begin(), lru_, where_[i]);
            return rows_[i];
        }
        if (lru_.size() >= capacity_) {
            const std::size_t victim = lru_.back();
            lru_.pop_back();
            std::vector<double>().swap(rows_[victim]);
        }
        auto& r = rows_[i];
        r.resize(x_.size());
        for (std::size_t k = 0; k < x_.size(); ++k) r[k] = k == i ? 1.0 : rbf_kernel(x_[i], x_[k], gamma_);
        lru_.push_front(i);
        where_[i] = lru_.begin();
        return r;
    }

private:
    std::span<const FeatureVector> x_;
    double gamma_;
    std::vector<std::vector<double>> rows_;
    std::list<std::size_t> lru_;
    std::vector<std::list<std::size_t>::iterator> where_;
    std::size_t capacity_ = 2;
};

}  // namespace

void TrainConfig::validate() const {
    if (!(c > 0.0) || !(gamma > 0.0) || !(tol > 0.0))
        throw Error(ErrorCode::InvalidConfig, "C, gamma and tol must be positive");
}

double rbf_kernel(std::span<const float> x, std::span<const float> y, double gamma) {
    if (x.size() != y.size())
        throw Error(ErrorCode::DimensionMismatch,
                    "kernel arguments have dims " + std::to_string(x.size()) + " and " + std::to_string(y.size()));
    double sq = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = static_cast<double>(x[i]) - static_cast<double>(y[i]);
        sq += d * d;
    }
    return std::exp(-gamma * sq);
}

double decision_value(const BinaryModel& model, std::span<const float> x) {
    double f = model.bias;
    for (std::size_t i = 0; i < model.support_vectors.size(); ++i)
        f += model.dual_coeffs[i] * rbf_kernel(model.support_vectors[i], x, model.gamma);
    return f;
}

BinaryTrainResult smo_train(std::span<const FeatureVector> features, std::span<const int> labels,
                            const TrainConfig& cfg) {
    cfg.validate();
    const std::size_t n = features.size();
    if (labels.size() != n)
        throw Error(ErrorCode::LengthMismatch,
                    std::to_string(n) + " feature vectors but " + std::to_string(labels.size()) + " labels");
    bool has_pos = false, has_neg = false;
    for (int l : labels) {
        if (l == 1)
            has_pos = true;
        else if (l == -1)
            has_neg = true;
        else
            throw Error(ErrorCode::InvalidConfig, "binary labels must be +1 or -1");
    }
    if (!has_pos || !has_neg) throw Error(ErrorCode::SingleClassInput, "binary SVM needs both +1 and -1 examples");
    for (const auto& f : features)
        if (f.size() != features[0].size())
            throw Error(ErrorCode::DimensionMismatch, "training vectors differ in dimension");

    const double c = cfg.c;
    // Default cap: ten sweeps' worth of pair updates.
    const std::size_t max_iters = cfg.max_iters != 0 ? cfg.max_iters : 10 * n * n;
    std::vector<double> y(n), alpha(n, 0.0), grad(n, -1.0);
    for (std::size_t i = 0; i < n; ++i) y[i] = labels[i];
    KernelRows kernel(features, cfg.gamma, cfg.cache_mb << 20);

    auto at_upper = [&](std::size_t t) { return alpha[t] >= c; };
    auto at_lower = [&](std::size_t t) { return alpha[t] <= 0.0; };

    TrainStats stats;
    std::size_t iter = 0;
    double gap = std::numeric_limits<double>::infinity();
    for (;;) {
        // Working set: i maximizes -y*G over the "up" set; j minimizes the
        // second-order objective decrease over the "low" set.
        double gmax = -std::numeric_limits<double>::infinity();
        double gmax2 = -std::numeric_limits<double>::infinity();
        std::ptrdiff_t i_sel = -1, j_sel = -1;
        for (std::size_t t = 0; t < n; ++t) {
            if (y[t] > 0 ? !at_upper(t) : !at_lower(t)) {
                const double v = -y[t] * grad[t];
                if (v >= gmax) {
                    gmax = v;
                    i_sel = static_cast<std::ptrdiff_t>(t);
                }
            }
        }
        if (i_sel >= 0) {
            const auto i = static_cast<std::size_t>(i_sel);
            const std::vector<double>& ki = kernel.row(i);
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t t = 0; t < n; ++t) {
                if (!(y[t] > 0 ? !at_lower(t) : !at_upper(t))) continue;
                const double v = y[t] * grad[t];
                if (v >= gmax2) gmax2 = v;
                const double grad_diff = gmax + v;
                if (grad_diff > 0.0) {
                    const double quad = 2.0 - 2.0 * ki[t];
                    const double obj = -(grad_diff * grad_diff) / (quad > 0.0 ? quad : kTau);
                    if (obj <= best) {
                        best = obj;
                        j_sel = static_cast<std::ptrdiff_t>(t);
                    }
                }
            }
        }
        gap = gmax + gmax2;
        if (gap < cfg.tol || j_sel < 0 || i_sel < 0) break;
        if (iter >= max_iters) break;
        ++iter;

        const auto i = static_cast<std::size_t>(i_sel);
        const auto j = static_cast<std::size_t>(j_sel);
        const std::vector<double>& ki = kernel.row(i);
        const std::vector<double>& kj = kernel.row(j);
        const double kij = ki[j];
        const double old_ai = alpha[i], old_aj = alpha[j];

        if (y[i] != y[j]) {
            const double quad = std::max(2.0 + 2.0 * (y[i] * y[j] * kij), kTau);
            const double delta = (-grad[i] - grad[j]) / quad;
            const double diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if (diff > 0) {
                if (alpha[j] < 0) {
                    alpha[j] = 0;
                    alpha[i] = diff;
                }
            } else if (alpha[i] < 0) {
                alpha[i] = 0;
                alpha[j] = -diff;
            }
            if (diff > 0) {
                if (alpha[i] > c) {
                    alpha[i] = c;
                    alpha[j] = c - diff;
                }
            } else if (alpha[j] > c) {
                alpha[j] = c;
                alpha[i] = c + diff;
            }
        } else {
            const double quad = std::max(2.0 - 2.0 * kij, kTau);
            const double delta = (grad[i] - grad[j]) / quad;
            const double sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if (sum > c) {
                if (alpha[i] > c) {
                    alpha[i] = c;
                    alpha[j] = sum - c;
                }
            } else if (alpha[j] < 0) {
                alpha[j] = 0;
                alpha[i] = sum;
            }
            if (sum > c) {
                if (alpha[j] > c) {
                    alpha[j] = c;
                    alpha[i] = sum - c;
                }
            } else if (alpha[i] < 0) {
                alpha[i] = 0;
                alpha[j] = sum;
            }
        }

        // ki stays valid: row i is most recent, and the cache holds >= 2 rows.
        const double da_i = (alpha[i] - old_ai) * y[i];
        const double da_j = (alpha[j] - old_aj) * y[j];
        for (std::size_t t = 0; t < n; ++t) grad[t] += y[t] * (ki[t] * da_i + kj[t] * da_j);
    }

    // Bias: mean over free multipliers, else the midpoint of the feasible range.
    double ub = std::numeric_limits<double>::infinity();
    double lb = -std::numeric_limits<double>::infinity();
    double sum_free = 0.0;
    std::size_t n_free = 0;
    for (std::size_t t = 0; t < n; ++t) {
        const double yg = y[t] * grad[t];
        if (at_upper(t)) {
            if (y[t] < 0)
                ub = std::min(ub, yg);
            else
                lb = std::max(lb, yg);
        } else if (at_lower(t)) {
            if (y[t] > 0)
                ub = std::min(ub, yg);
            else
                lb = std::max(lb, yg);
        } else {
            ++n_free;
            sum_free += yg;
        }
    }
    const double rho = n_free > 0 ? sum_free / static_cast<double>(n_free) : (ub + lb) / 2.0;

    BinaryTrainResult out;
    out.model.gamma = cfg.gamma;
    out.model.bias = -rho;
    for (std::size_t t = 0; t < n; ++t)
        if (alpha[t] > kSupportThreshold) {
            out.model.support_vectors.push_back(features[t]);
            out.model.dual_coeffs.push_back(alpha[t] * y[t]);
        }
    stats.iterations = iter;
    stats.kkt_gap = gap;
    stats.converged = gap <= 10.0 * cfg.tol;
    stats.support_count = out.model.support_vectors.size();
    out.stats = stats;
    out.alpha = std::move(alpha);
    return out;
}

}  // namespace tsr
