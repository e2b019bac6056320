#include <doctest.h>

#include <fstream>
#include <iterator>
#include <sstream>

#include "synthetic_gtsrb.hpp"
#include "tsr/cli.hpp"
#include "tsr/error.hpp"

using namespace tsr;
using namespace tsr::cli;
namespace fs = std::filesystem;

namespace {

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected tsr::Error");
    return ErrorCode::IoError;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

// One synthetic tree shared by the command tests; built once per process.
const fs::path& synthetic_root() {
    static testing::TempDir dir("cli");
    static const bool written = [] {
        testing::write_synthetic_gtsrb(dir.path(), {3, 10, 4, 17, true});
        return true;
    }();
    (void)written;
    return dir.path();
}

Scores sample_scores(double a) {
    Scores s;
    s.accuracy = a;
    s.macro_f1 = a / 2;
    s.macro_precision = a / 3;
    s.macro_recall = a / 4;
    s.weighted_f1 = 0.125;
    s.weighted_precision = 0.25;
    s.weighted_recall = a;
    return s;
}

}  // namespace

TEST_CASE("report formats") {
    CHECK(parse_format("md") == ReportFormat::Markdown);
    CHECK(parse_format("csv") == ReportFormat::Csv);
    CHECK(code_of([] { parse_format("xlsx"); }) == ErrorCode::UnknownFormat);

    const std::vector<EvalRow> rows{{"HOG", sample_scores(0.9)}, {"YUV-HOG", sample_scores(0.5)}};
    const std::string csv = format_table(rows, ReportFormat::Csv);
    CHECK(csv.rfind("Method;F1 Score;Accuracy;Precision;Recall\n", 0) == 0);
    CHECK(csv.find("HOG;0.450000;0.900000;0.300000;0.225000\n") != std::string::npos);

    const auto parsed = parse_csv_table(csv);
    REQUIRE(parsed.size() == 2);
    CHECK(parsed.at("YUV-HOG") == std::array<double, 4>{0.25, 0.5, 0.166667, 0.125});

    const auto weighted = parse_csv_table(format_table(rows, ReportFormat::Csv, Averaging::Weighted));
    CHECK(weighted.at("HOG") == std::array<double, 4>{0.125, 0.9, 0.25, 0.9});

    const std::string md = format_table(rows, ReportFormat::Markdown);
    CHECK(md.find("| Method | F1 Score | Accuracy | Precision | Recall |") == 0);
    CHECK(md.find("| YUV-HOG | 0.250000 | 0.500000 | 0.166667 | 0.125000 |") != std::string::npos);

    CHECK(code_of([] { parse_csv_table("a;b\n"); }) == ErrorCode::MissingHeader);
}

TEST_CASE("resolve_layout") {
    const fs::path root = synthetic_root();
    const auto l = resolve_layout(root);
    CHECK(l.train_dir == root / "Final_Training" / "Images");
    CHECK(l.test_dir == root / "Final_Test" / "Images");
    CHECK(l.test_csv == root / "Final_Test" / "Images" / "GT-final_test.csv");

    const auto o = resolve_layout(root, {"/x/train", "", "/y/gt.csv"});
    CHECK(o.train_dir == "/x/train");
    CHECK(o.test_csv == "/y/gt.csv");

    testing::TempDir wrap("wrap");
    fs::create_directories(wrap.path() / "GTSRB" / "Final_Training" / "Images");
    CHECK(resolve_layout(wrap.path()).train_dir == wrap.path() / "GTSRB" / "Final_Training" / "Images");
}

TEST_CASE("check") {
    std::ostringstream out;
    const auto s = cmd_check(resolve_layout(synthetic_root()), out);
    CHECK(s.class_counts == std::vector<std::size_t>{10, 10, 10});
    CHECK(s.total == 30);
    CHECK(s.imbalance_ratio == 1.0);
    REQUIRE(s.test_total.has_value());
    CHECK(*s.test_total == 12);
    std::size_t hist = 0;
    for (const auto& [bucket, n] : s.size_histogram) {
        CHECK(bucket % 25 == 0);
        hist += n;
    }
    CHECK(hist == 30);
    CHECK(out.str().find("total images: 30") != std::string::npos);
}

TEST_CASE("features, train, eval") {
    testing::TempDir tmp("pipeline");
    const auto layout = resolve_layout(synthetic_root());
    const fs::path base = tmp.path() / "hog";

    const FeatureSets sets = cmd_features(layout, {PipelineKind::Hog, 3, false, 2}, base);
    CHECK(sets.train.dim == 324);
    CHECK(sets.train.labels.size() == 24);
    CHECK(sets.val.labels.size() == 6);
    CHECK(sets.test.labels.size() == 12);
    CHECK(sets.train.pipeline == "HOG");
    CHECK(sets.train.seed == 3);
    CHECK(read_cache(fs::path(base.string() + ".train")) == sets.train);

    // Same inputs, same bytes, whatever the thread count.
    const std::string first = slurp(base.string() + ".val");
    cmd_features(layout, {PipelineKind::Hog, 3, false, 1}, tmp.path() / "again");
    CHECK(slurp(tmp.path() / "again.val") == first);

    CHECK(code_of([] { parse_pipeline("FOO-HOG"); }) == ErrorCode::UnknownPipelineName);

    std::ostringstream log;
    const fs::path model = tmp.path() / "hog.model";
    const auto trained = cmd_train(base.string() + ".train", {}, model, log);
    CHECK(trained.model.train_config.c == 20.5557);
    CHECK(trained.model.train_config.gamma == 0.2167);
    CHECK(trained.model.pairs.size() == 3);
    CHECK(load_model(model) == trained.model);
    CHECK(log.str().find("trained 3 pairs") != std::string::npos);

    // Predictions on the training split itself.
    std::ostringstream report;
    const auto row = cmd_eval(model, base.string() + ".train", ReportFormat::Csv, report, tmp.path() / "r.csv");
    CHECK(row.scores.accuracy == 1.0);
    CHECK(slurp(tmp.path() / "r.csv") == report.str());
    CHECK(parse_csv_table(report.str()).at("HOG")[1] == 1.0);

    SUBCASE("dimension mismatch") {
        FeatureCache narrow = sets.test;
        narrow.dim = 4;
        for (auto& f : narrow.features) f.resize(4);
        write_cache(narrow, tmp.path() / "narrow.test");
        CHECK(code_of([&] { cmd_eval(model, tmp.path() / "narrow.test", ReportFormat::Markdown, report); }) ==
              ErrorCode::DimensionMismatch);
    }
    SUBCASE("single-class cache") {
        FeatureCache one = sets.train;
        for (int& l : one.labels) l = 1;
        write_cache(one, tmp.path() / "one.train");
        CHECK(code_of([&] { cmd_train(tmp.path() / "one.train", {}, tmp.path() / "x.model", log); }) ==
              ErrorCode::FewerThanTwoClasses);
    }
    SUBCASE("corrupted cache") {
        std::string bytes = slurp(base.string() + ".train");
        bytes[bytes.size() / 2] ^= 0x40;
        std::ofstream(tmp.path() / "bad.train", std::ios::binary) << bytes;
        CHECK(code_of([&] { cmd_train(tmp.path() / "bad.train", {}, tmp.path() / "x.model", log); }) ==
              ErrorCode::ChecksumMismatch);
    }
    SUBCASE("missing test ground truth") {
        DataLayout broken = layout;
        broken.test_csv = tmp.path() / "nope.csv";
        CHECK(code_of([&] { cmd_features(broken, {}, tmp.path() / "z"); }) == ErrorCode::IoError);
    }
}

TEST_CASE("bench") {
    const auto layout = resolve_layout(synthetic_root());
    testing::TempDir a("bench-a"), b("bench-b");
    std::ostringstream log;
    BenchOptions opts;
    opts.seed = 5;
    opts.threads = 2;
    const BenchReport r = cmd_bench(layout, opts, a.path(), log);
    CHECK(r.failures.empty());
    REQUIRE(r.validation.size() == 7);
    REQUIRE(r.test.size() == 7);
    CHECK(r.timing.size() == 7);
    for (std::size_t i = 0; i < 7; ++i) {
        CHECK(r.validation[i].method == pipeline_name(kAllPipelines[i]));
        CHECK(r.test[i].method == pipeline_name(kAllPipelines[i]));
        CHECK(r.timing[i].preprocess_s >= 0.0);
    }

    for (const char* f : {"tables-1.md", "tables-1.csv", "tables-2.md", "tables-2.csv", "tables-1-weighted.csv",
                          "tables-2-weighted.csv", "timing.md", "HOG.model", "CLAHE-HUE-YUV-HOG.test"})
        CHECK_MESSAGE(fs::exists(a.path() / f), f);
    CHECK(slurp(a.path() / "timing.md").find("| YUV-HOG |") != std::string::npos);

    const auto table2 = parse_csv_table(slurp(a.path() / "tables-2.csv"));
    for (const auto& row : r.test) {
        const auto& v = table2.at(row.method);
        CHECK(v[0] == doctest::Approx(row.scores.macro_f1).epsilon(1e-6));
        CHECK(v[1] == doctest::Approx(row.scores.accuracy).epsilon(1e-6));
        CHECK(v[2] == doctest::Approx(row.scores.macro_precision).epsilon(1e-6));
        CHECK(v[3] == doctest::Approx(row.scores.macro_recall).epsilon(1e-6));
    }

    opts.threads = 1;
    opts.pipelines = {PipelineKind::Hog, PipelineKind::ClaheHueYuvHog};
    cmd_bench(layout, opts, b.path(), log);
    const auto t2a = parse_csv_table(slurp(a.path() / "tables-2.csv"));
    const auto t2b = parse_csv_table(slurp(b.path() / "tables-2.csv"));
    CHECK(t2b.at("HOG") == t2a.at("HOG"));
    CHECK(t2b.at("CLAHE-HUE-YUV-HOG") == t2a.at("CLAHE-HUE-YUV-HOG"));
    CHECK(slurp(b.path() / "HOG.model") == slurp(a.path() / "HOG.model"));
}

TEST_CASE("tune") {
    testing::TempDir tmp("tune");
    const auto layout = resolve_layout(synthetic_root());
    const fs::path base = tmp.path() / "hog";
    cmd_features(layout, {PipelineKind::Hog, 1, false, 0}, base);

    std::ostringstream log;
    TuneOptions opts;
    opts.seed = 9;
    opts.config_out = tmp.path() / "best.json";
    const auto r = cmd_tune(base.string() + ".train", opts, log);
    CHECK(r.stage2.best.c > 5.0);
    CHECK(r.stage2.best.c < 25.0);
    CHECK(r.stage2.best.gamma > 0.05);
    CHECK(r.stage2.best.gamma < 0.35);
    const std::string json = slurp(tmp.path() / "best.json");
    CHECK(json.find("\"gamma\"") != std::string::npos);
    CHECK(json.find("\"seed\": 9") != std::string::npos);

    std::ostringstream log2;
    opts.config_out.reset();
    const auto again = cmd_tune(base.string() + ".train", opts, log2);
    CHECK(again.stage2.best.c == r.stage2.best.c);
    CHECK(again.stage2.best.gamma == r.stage2.best.gamma);

    // Three rows cannot fill five folds.
    FeatureCache tiny = read_cache(base.string() + ".test");
    tiny.labels.resize(3);
    tiny.features.resize(3);
    write_cache(tiny, tmp.path() / "tiny.train");
    CHECK(code_of([&] { cmd_tune(tmp.path() / "tiny.train", opts, log2); }) == ErrorCode::TooFewSamples);
}
