#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "qp_oracle.hpp"
#include "svm_fixtures.hpp"
#include "synthetic_gtsrb.hpp"
#include "tsr/binary_io.hpp"
#include "tsr/error.hpp"
#include "tsr/svm.hpp"

using namespace tsr;

namespace {

// The gap rule bounds KKT violation, not objective error; ill-conditioned
// toy problems (C = 10, gamma = 0.1) can sit ~5e-3 above the optimum when
// stopped at 1e-3, so objective comparisons solve more tightly.
constexpr double kOracleTol = 1e-5;

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected tsr::Error");
    return ErrorCode::IoError;
}

// Gaussian blobs, one per class, in `dim` dimensions.
void blobs(int classes, int per_class, int dim, double spread, std::uint64_t seed, std::vector<FeatureVector>& x,
           std::vector<int>& y) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<float> noise(0.0f, static_cast<float>(spread));
    for (int c = 0; c < classes; ++c)
        for (int i = 0; i < per_class; ++i) {
            FeatureVector v(static_cast<std::size_t>(dim));
            for (int d = 0; d < dim; ++d) v[static_cast<std::size_t>(d)] = (d == c % dim ? 1.0f + c / dim : 0.0f) + noise(gen);
            x.push_back(v);
            y.push_back(c);
        }
}

MulticlassSvmModel random_model(std::mt19937_64& gen) {
    MulticlassSvmModel m;
    const int k = 2 + static_cast<int>(gen() % 4);
    const std::size_t dim = 1 + gen() % 6;
    for (int c = 0; c < k; ++c) m.classes.push_back(c * 3 + static_cast<int>(gen() % 3));
    m.train_config.c = std::uniform_real_distribution<double>(0.1, 50)(gen);
    m.train_config.gamma = std::uniform_real_distribution<double>(0.01, 2)(gen);
    for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b) {
            PairModel p{m.classes[static_cast<std::size_t>(a)], m.classes[static_cast<std::size_t>(b)], {}};
            p.model.gamma = m.train_config.gamma;
            p.model.bias = std::uniform_real_distribution<double>(-3, 3)(gen);
            const std::size_t n = 1 + gen() % 5;
            for (std::size_t i = 0; i < n; ++i) {
                FeatureVector v(dim);
                for (float& t : v) t = std::uniform_real_distribution<float>(-1, 1)(gen);
                p.model.support_vectors.push_back(v);
                p.model.dual_coeffs.push_back(std::uniform_real_distribution<double>(-5, 5)(gen));
            }
            m.pairs.push_back(p);
        }
    return m;
}

}  // namespace

TEST_CASE("rbf_kernel") {
    const FeatureVector a{0.3f, -1.0f, 2.0f};
    CHECK(rbf_kernel(a, a, 0.7) == 1.0);
    CHECK(rbf_kernel(FeatureVector{0.0f}, FeatureVector{1.0f}, 1.0) == doctest::Approx(std::exp(-1.0)));
    CHECK(rbf_kernel(FeatureVector{0.0f}, FeatureVector{1.0f}, 1.0) == doctest::Approx(0.367879).epsilon(1e-6));
    std::mt19937_64 gen(1);
    std::uniform_real_distribution<float> d(-3, 3);
    for (int i = 0; i < 100; ++i) {
        FeatureVector x(5), y(5);
        for (auto& t : x) t = d(gen);
        for (auto& t : y) t = d(gen);
        CHECK(rbf_kernel(x, y, 0.3) == rbf_kernel(y, x, 0.3));
    }
    CHECK(code_of([] { rbf_kernel(FeatureVector{1}, FeatureVector{1, 2}, 1.0); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("kernel matrices are positive semidefinite") {
    std::mt19937_64 gen(2);
    for (int t = 0; t < 50; ++t) {
        const auto p = testing::random_toy_problem(gen);
        const auto k = testing::kernel_matrix(p.x, p.gamma);
        for (std::size_t i = 0; i < k.size(); ++i)
            for (std::size_t j = 0; j < k.size(); ++j) CHECK(k[i][j] == k[j][i]);
        CHECK(testing::min_eigenvalue(k) >= -1e-8);
    }
    // Jacobi sanity: eigenvalues of [[2,1],[1,2]] are 1 and 3.
    CHECK(testing::min_eigenvalue({{2, 1}, {1, 2}}) == doctest::Approx(1.0));
}

TEST_CASE("two-point problem is symmetric") {
    const std::vector<FeatureVector> x{{0.0f}, {1.0f}};
    const std::vector<int> y{-1, 1};
    TrainConfig cfg;
    cfg.c = 1000.0;
    cfg.gamma = 1.0;
    const auto r = smo_train(x, y, cfg);
    CHECK(r.alpha[0] == doctest::Approx(r.alpha[1]));
    CHECK(std::abs(decision_value(r.model, FeatureVector{0.5f})) <= 1e-6);
    CHECK(decision_value(r.model, FeatureVector{1.0f}) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("four-point problem matches the dense QP oracle") {
    const std::vector<FeatureVector> x{{-2.0f}, {-1.0f}, {1.0f}, {2.0f}};
    const std::vector<int> y{1, 1, -1, -1};
    TrainConfig cfg;
    cfg.c = 1.0;
    cfg.gamma = 0.5;
    cfg.tol = kOracleTol;
    const auto r = smo_train(x, y, cfg);
    const auto o = testing::solve_dual_qp(x, y, 1.0, 0.5);
    CHECK(testing::dual_objective(r.alpha, x, y, 0.5) == doctest::Approx(o.objective).epsilon(1e-3));
    CHECK(std::abs(testing::dual_objective(r.alpha, x, y, 0.5) - o.objective) <= 1e-3);
    // Probes avoid x = 0, which the symmetric data puts exactly on the boundary.
    for (float p = -2.875f; p <= 3.0f; p += 0.25f)
        CHECK((decision_value(r.model, FeatureVector{p}) > 0) ==
              (testing::oracle_decision(o, x, y, 0.5, FeatureVector{p}) > 0));
}

TEST_CASE("random small problems: oracle agreement, KKT, equality constraint") {
    std::mt19937_64 gen(77);
    for (int t = 0; t < 60; ++t) {
        const auto p = testing::random_toy_problem(gen);
        TrainConfig cfg;
        cfg.c = p.c;
        cfg.gamma = p.gamma;
        const auto r = smo_train(p.x, p.y, cfg);
        CHECK(testing::kkt_violation(r, p) <= cfg.tol);

        TrainConfig tight = cfg;
        tight.tol = kOracleTol;
        const auto rt = smo_train(p.x, p.y, tight);
        const auto o = testing::solve_dual_qp(p.x, p.y, p.c, p.gamma);
        CHECK(std::abs(testing::dual_objective(rt.alpha, p.x, p.y, p.gamma) - o.objective) <= 1e-3);
        CHECK(r.stats.converged);
        double eq = 0.0;
        for (std::size_t i = 0; i < p.x.size(); ++i) {
            eq += r.alpha[i] * p.y[i];
            CHECK(r.alpha[i] >= 0.0);
            CHECK(r.alpha[i] <= p.c);
        }
        CHECK(std::abs(eq) <= 1e-6);
        CHECK(r.model.support_vectors.size() == r.model.dual_coeffs.size());
        CHECK(r.model.support_vectors.size() >= 1);
    }
}

TEST_CASE("separable toy set: points off the box bound are classified correctly") {
    std::vector<FeatureVector> x;
    std::vector<int> y;
    for (int i = 0; i < 10; ++i) {
        x.push_back({static_cast<float>(i) * 0.1f, 1.0f});
        y.push_back(1);
        x.push_back({static_cast<float>(i) * 0.1f, -1.0f});
        y.push_back(-1);
    }
    TrainConfig cfg;
    cfg.c = 10.0;
    cfg.gamma = 0.5;
    const auto r = smo_train(x, y, cfg);
    for (std::size_t i = 0; i < x.size(); ++i)
        if (r.alpha[i] < cfg.c) CHECK((decision_value(r.model, x[i]) > 0) == (y[i] > 0));
}

TEST_CASE("smo_train errors and flags") {
    const std::vector<FeatureVector> x{{0.0f}, {1.0f}};
    CHECK(code_of([&] { smo_train(x, std::vector<int>{1, 1}, TrainConfig{}); }) == ErrorCode::SingleClassInput);
    CHECK(code_of([&] { smo_train(std::vector<FeatureVector>{{0.0f}, {1.0f, 2.0f}}, std::vector<int>{1, -1},
                                  TrainConfig{}); }) == ErrorCode::DimensionMismatch);
    TrainConfig bad;
    bad.c = -1.0;
    CHECK(code_of([&] { smo_train(x, std::vector<int>{1, -1}, bad); }) == ErrorCode::InvalidConfig);

    // A cap of one iteration on a problem that needs more leaves the flag down.
    std::vector<FeatureVector> xs;
    std::vector<int> ys;
    std::mt19937_64 gen(4);
    for (int i = 0; i < 40; ++i) {
        xs.push_back({std::uniform_real_distribution<float>(-1, 1)(gen)});
        ys.push_back(i % 2 ? 1 : -1);
    }
    TrainConfig capped;
    capped.max_iters = 1;
    const auto r = smo_train(xs, ys, capped);
    CHECK(r.stats.iterations == 1);
    CHECK_FALSE(r.stats.converged);
    CHECK(r.stats.kkt_gap > 10 * capped.tol);
}

TEST_CASE("decision_value of a one-vector model is the kernel") {
    BinaryModel m{{{1.0f, 2.0f}}, {1.0}, 0.0, 0.4};
    const FeatureVector q{0.5f, 0.0f};
    CHECK(decision_value(m, q) == rbf_kernel(m.support_vectors[0], q, 0.4));
}

TEST_CASE("train_multiclass") {
    std::vector<FeatureVector> x;
    std::vector<int> y;
    blobs(3, 15, 3, 0.15, 1, x, y);
    TrainConfig cfg;
    cfg.gamma = 1.0;
    const auto r = train_multiclass(x, y, cfg, 1);
    REQUIRE(r.model.pairs.size() == 3);
    CHECK(r.model.classes == std::vector<int>{0, 1, 2});
    CHECK(r.model.pairs[0].class_a == 0);
    CHECK(r.model.pairs[0].class_b == 1);
    CHECK(r.model.pairs[2].class_a == 1);
    CHECK(r.pair_stats.size() == 3);

    SUBCASE("pair problems only see their own classes") {
        for (const auto& pair : r.model.pairs)
            for (const auto& sv : pair.model.support_vectors) {
                const auto it = std::find(x.begin(), x.end(), sv);
                REQUIRE(it != x.end());
                const int label = y[static_cast<std::size_t>(it - x.begin())];
                CHECK((label == pair.class_a || label == pair.class_b));
            }
    }
    SUBCASE("thread count does not matter") {
        CHECK(train_multiclass(x, y, cfg, 4).model == r.model);
    }
    SUBCASE("input order of classes does not matter for the pair set") {
        std::vector<FeatureVector> xr(x.rbegin(), x.rend());
        std::vector<int> yr(y.rbegin(), y.rend());
        const auto rr = train_multiclass(xr, yr, cfg, 2);
        REQUIRE(rr.model.pairs.size() == 3);
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(rr.model.pairs[i].class_a == r.model.pairs[i].class_a);
            CHECK(rr.model.pairs[i].class_b == r.model.pairs[i].class_b);
        }
    }
    SUBCASE("training accuracy and predictor agreement") {
        const Predictor pred(r.model);
        std::size_t right = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const int a = predict(r.model, x[i]);
            CHECK(pred.predict(x[i]) == a);
            right += a == y[i];
        }
        CHECK(right == x.size());
        CHECK(pred.predict_all(x, 3) == pred.predict_all(x, 1));
        CHECK(pred.unique_support_vectors() <= x.size());
    }
    CHECK(code_of([&] { train_multiclass(x, std::vector<int>(x.size(), 4), cfg); }) ==
          ErrorCode::FewerThanTwoClasses);
    CHECK(code_of([&] { predict(r.model, FeatureVector{1.0f}); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("43 classes give 903 pairs") {
    std::vector<FeatureVector> x;
    std::vector<int> y;
    for (int c = 0; c < 43; ++c)
        for (int i = 0; i < 2; ++i) {
            x.push_back({static_cast<float>(c), static_cast<float>(i) * 0.1f});
            y.push_back(c);
        }
    const auto r = train_multiclass(x, y, TrainConfig{}, 0);
    CHECK(r.model.pairs.size() == 903);
    const Predictor pred(r.model);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(pred.predict(x[i]) == y[i]);
}

TEST_CASE("vote resolution") {
    MulticlassSvmModel m;
    m.classes = {0, 1, 2};
    for (auto [a, b] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}}) m.pairs.push_back({a, b, {}});
    // 0 beats 1 by 0.5, 2 beats 0 by 1.0, 1 beats 2 by 2.0: one vote each,
    // margins 0.5 / 2.0 / 1.0.
    CHECK(resolve_votes(m, std::vector<double>{0.5, -1.0, 2.0}) == 1);
    // Same cycle with 2's margin largest.
    CHECK(resolve_votes(m, std::vector<double>{0.5, -3.0, 2.0}) == 2);
    // Equal margins fall back to the lowest id.
    CHECK(resolve_votes(m, std::vector<double>{1.0, -1.0, 1.0}) == 0);
    // Unanimous.
    CHECK(resolve_votes(m, std::vector<double>{-0.1, -0.1, -0.1}) == 2);
    // Zero counts as a vote for class_b.
    CHECK(resolve_votes(m, std::vector<double>{0.0, 0.0, 0.0}) == 2);

    MulticlassSvmModel two;
    two.classes = {3, 7};
    two.pairs.push_back({3, 7, {}});
    CHECK(resolve_votes(two, std::vector<double>{0.2}) == 3);
    CHECK(resolve_votes(two, std::vector<double>{-0.2}) == 7);
}

TEST_CASE("model file layout") {
    MulticlassSvmModel m;
    m.classes = {2, 5};
    m.train_config.c = 3.5;
    m.train_config.gamma = 0.25;
    m.pairs.push_back({2, 5, BinaryModel{{{1.5f, -2.0f}}, {0.75}, -0.5, 0.25}});
    const auto bytes = serialize_model(m);

    // Expected layout written out field by field.
    std::vector<std::uint8_t> want;
    auto put = [&](const void* p, std::size_t n) {
        const auto* b = static_cast<const std::uint8_t*>(p);
        want.insert(want.end(), b, b + n);
    };
    auto u32 = [&](std::uint32_t v) { put(&v, 4); };
    auto f64 = [&](double v) { put(&v, 8); };
    auto f32 = [&](float v) { put(&v, 4); };
    put("TSRM", 4);
    u32(1);
    f64(0.25);
    f64(3.5);
    u32(2);
    u32(2);
    u32(5);
    u32(1);
    u32(2);
    u32(5);
    u32(1);
    u32(2);
    f64(-0.5);
    f64(0.75);
    f32(1.5f);
    f32(-2.0f);
    u32(crc32(want));
    CHECK(bytes == want);
}

TEST_CASE("model round trip and corruption") {
    std::mt19937_64 gen(9);
    for (int t = 0; t < 100; ++t) {
        const auto m = random_model(gen);
        const auto bytes = serialize_model(m);
        const auto back = deserialize_model(bytes);
        CHECK(back == m);
        CHECK(serialize_model(back) == bytes);
    }
    const auto m = random_model(gen);
    auto bytes = serialize_model(m);
    SUBCASE("bad magic") {
        std::memcpy(bytes.data(), "XXXX", 4);
        CHECK(code_of([&] { deserialize_model(bytes); }) == ErrorCode::BadMagic);
    }
    SUBCASE("flipped payload byte") {
        bytes[bytes.size() / 2] ^= 0x40;
        CHECK(code_of([&] { deserialize_model(bytes); }) == ErrorCode::ChecksumMismatch);
    }
    SUBCASE("truncated") {
        for (std::size_t cut : {std::size_t{3}, std::size_t{10}, bytes.size() - 1}) {
            const std::vector<std::uint8_t> part(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(cut));
            const auto code = code_of([&] { deserialize_model(part); });
            CHECK((code == ErrorCode::ChecksumMismatch || code == ErrorCode::TruncatedPayload ||
                   code == ErrorCode::BadMagic));
        }
    }
    SUBCASE("wrong version with a valid checksum") {
        ByteWriter w;
        w.bytes("TSRM");
        w.u32(2);
        w.seal();
        CHECK(code_of([&] { deserialize_model(w.buffer()); }) == ErrorCode::VersionMismatch);
    }
    SUBCASE("files") {
        testing::TempDir tmp("model");
        save_model(m, tmp.path() / "m.bin");
        CHECK(load_model(tmp.path() / "m.bin") == m);
        CHECK(code_of([&] { load_model(tmp.path() / "absent.bin"); }) == ErrorCode::IoError);
    }
}
