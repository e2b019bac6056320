#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "tsr/dataset.hpp"
#include "tsr/feature_cache.hpp"
#include "tsr/metrics.hpp"
#include "tsr/pipeline.hpp"
#include "tsr/svm.hpp"
#include "tsr/tuning.hpp"

namespace tsr::cli {

// --- Reports --------------------------------------------------------------

enum class ReportFormat { Markdown, Csv };

/// "md" or "csv"; anything else throws UnknownFormat.
ReportFormat parse_format(std::string_view name);

inline constexpr std::string_view kCsvHeader = "Method;F1 Score;Accuracy;Precision;Recall";

enum class Averaging { Macro, Weighted };

struct EvalRow {
    std::string method;
    Scores scores;
};

/// Table with one row per method, 6 decimal places.
std::string format_table(const std::vector<EvalRow>& rows, ReportFormat fmt, Averaging avg = Averaging::Macro);

/// Values of a CSV table produced by format_table, keyed by method, in
/// column order F1, accuracy, precision, recall.
std::map<std::string, std::array<double, 4>> parse_csv_table(const std::string& text);

// --- Dataset layout -------------------------------------------------------

struct DataLayout {
    std::filesystem::path train_dir;
    std::filesystem::path test_dir;
    std::filesystem::path test_csv;
};

/// Locates the training and test folders under a GTSRB root. Accepts the
/// official archive layout (Final_Training/Images, Final_Test/Images, with
/// GT-final_test.csv either next to the test images or at the root), a
/// GTSRB/ wrapper directory, or a root that directly holds class folders.
/// Explicit non-empty overrides win.
DataLayout resolve_layout(const std::filesystem::path& root, const DataLayout& overrides = {});

// --- Commands ---------------------------------------------------------------

struct CheckSummary {
    std::vector<std::size_t> class_counts;
    std::size_t total = 0;
    /// Images bucketed by their larger side: [0,25), [25,50), ... 25px wide.
    std::map<int, std::size_t> size_histogram;
    double imbalance_ratio = 0.0;
    std::optional<std::size_t> test_total;
};

CheckSummary cmd_check(const DataLayout& layout, std::ostream& out);

struct FeatureOptions {
    PipelineKind pipeline = PipelineKind::Hog;
    std::uint64_t seed = 0;
    bool roi_crop = false;
    unsigned threads = 0;
};

struct FeatureSets {
    FeatureCache train;
    FeatureCache val;
    FeatureCache test;
};

/// Decoded images for every split, shared across pipelines.
struct LoadedData {
    std::vector<LabeledSample> train;
    std::vector<LabeledSample> val;
    std::vector<LabeledSample> test;
};

LoadedData load_data(const DataLayout& layout, std::uint64_t seed, bool roi_crop, unsigned threads = 0);

FeatureCache extract_features(const std::vector<LabeledSample>& samples, PipelineKind pipeline,
                              std::uint64_t seed, unsigned threads = 0);

/// Writes <out>.train, <out>.val and <out>.test.
FeatureSets cmd_features(const DataLayout& layout, const FeatureOptions& opts, const std::filesystem::path& out);

struct TrainOptions {
    double c = TrainConfig{}.c;
    double gamma = TrainConfig{}.gamma;
    unsigned threads = 0;
};

MulticlassTrainResult cmd_train(const std::filesystem::path& train_cache, const TrainOptions& opts,
                                const std::filesystem::path& out_model, std::ostream& out);

/// Scores every cache row with the model. Throws DimensionMismatch when
/// the model and cache disagree on dimension.
EvalRow evaluate(const MulticlassSvmModel& model, const FeatureCache& cache, unsigned threads = 0);

EvalRow cmd_eval(const std::filesystem::path& model_path, const std::filesystem::path& cache_path,
                 ReportFormat fmt, std::ostream& out, const std::optional<std::filesystem::path>& report_path = {},
                 unsigned threads = 0);

struct BenchOptions {
    std::uint64_t seed = 0;
    double c = TrainConfig{}.c;
    double gamma = TrainConfig{}.gamma;
    bool roi_crop = false;
    unsigned threads = 0;
    std::vector<PipelineKind> pipelines{kAllPipelines.begin(), kAllPipelines.end()};
};

struct BenchTiming {
    double preprocess_s = 0.0;
    double train_s = 0.0;
    double eval_s = 0.0;
};

struct BenchReport {
    std::vector<EvalRow> validation;
    std::vector<EvalRow> test;
    std::vector<BenchTiming> timing;
    std::vector<std::size_t> nonconverged_pairs;
    /// Pipelines that failed, with the error text.
    std::vector<std::string> failures;
};

/// All requested pipelines end to end. Writes tables-1.{md,csv} (validation),
/// tables-2.{md,csv} (test), weighted-average variants, and timing.md into
/// out_dir, plus per-pipeline caches and models.
BenchReport cmd_bench(const DataLayout& layout, const BenchOptions& opts, const std::filesystem::path& out_dir,
                      std::ostream& out);

struct TuneOptions {
    std::uint64_t seed = 0;
    unsigned threads = 0;
    std::optional<std::filesystem::path> config_out;
};

TwoStageResult cmd_tune(const std::filesystem::path& train_cache, const TuneOptions& opts, std::ostream& out);

}  // namespace tsr::cli
