#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <set>

#include "tsr/cli.hpp"
#include "tsr/error.hpp"
#include "tsr/parallel.hpp"

namespace fs = std::filesystem;

namespace tsr::cli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

fs::path first_existing(std::initializer_list<fs::path> candidates) {
    for (const auto& p : candidates)
        if (fs::exists(p)) return p;
    return {};
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    f << text;
}

fs::path with_suffix(const fs::path& base, const char* suffix) { return fs::path(base.string() + suffix); }

void require_test_layout(const DataLayout& layout) {
    if (layout.test_csv.empty() || !fs::exists(layout.test_csv))
        throw Error(ErrorCode::IoError, "test ground truth not found (expected GT-final_test.csv; pass --test-csv)");
}

}  // namespace

DataLayout resolve_layout(const fs::path& root, const DataLayout& overrides) {
    DataLayout l;
    const fs::path base = fs::exists(root / "GTSRB") && !fs::exists(root / "Final_Training") ? root / "GTSRB" : root;
    l.train_dir = overrides.train_dir.empty()
                      ? (fs::exists(base / "Final_Training" / "Images") ? base / "Final_Training" / "Images" : base)
                      : overrides.train_dir;
    l.test_dir = overrides.test_dir.empty() ? first_existing({base / "Final_Test" / "Images", root / "Final_Test" / "Images"})
                                            : overrides.test_dir;
    l.test_csv = overrides.test_csv.empty()
                     ? first_existing({l.test_dir / "GT-final_test.csv", base / "GT-final_test.csv",
                                       root / "GT-final_test.csv"})
                     : overrides.test_csv;
    if (l.test_dir.empty() && !l.test_csv.empty()) l.test_dir = l.test_csv.parent_path();
    return l;
}

CheckSummary cmd_check(const DataLayout& layout, std::ostream& out) {
    CheckSummary s;
    auto bucket = [&](const Annotation& a) { ++s.size_histogram[std::max(a.width, a.height) / 25 * 25]; };
    for (const fs::path& dir : class_directories(layout.train_dir)) {
        const fs::path csv = dir / ("GT-" + dir.filename().string() + ".csv");
        if (!fs::exists(csv)) throw Error(ErrorCode::IoError, "missing annotation file " + csv.string());
        std::vector<Annotation> rows;
        if (fs::file_size(csv) > 0) rows = read_annotation_csv(csv);
        for (const auto& a : rows) {
            if (!fs::exists(dir / a.filename))
                throw Error(ErrorCode::IoError, "annotated image missing: " + (dir / a.filename).string());
            bucket(a);
        }
        s.class_counts.push_back(rows.size());
        s.total += rows.size();
    }

    std::size_t lo = 0, hi = 0;
    for (std::size_t c : s.class_counts)
        if (c > 0) {
            lo = lo == 0 ? c : std::min(lo, c);
            hi = std::max(hi, c);
        }
    s.imbalance_ratio = lo == 0 ? 0.0 : static_cast<double>(hi) / static_cast<double>(lo);

    out << "training root: " << layout.train_dir.string() << "\n";
    out << "classes: " << s.class_counts.size() << "\n";
    for (std::size_t c = 0; c < s.class_counts.size(); ++c)
        out << "  class " << std::setw(2) << c << ": " << s.class_counts[c] << "\n";
    out << "total images: " << s.total << "\n";
    out << "imbalance ratio (max/min): " << std::fixed << std::setprecision(2) << s.imbalance_ratio << "\n";
    out << "size histogram (larger side, px):\n";
    for (const auto& [b, n] : s.size_histogram) out << "  " << b << "-" << b + 24 << ": " << n << "\n";

    if (!layout.test_csv.empty() && fs::exists(layout.test_csv)) {
        s.test_total = read_annotation_csv(layout.test_csv).size();
        out << "test images: " << *s.test_total << "\n";
    } else {
        out << "test images: (ground truth not found)\n";
    }
    return s;
}

LoadedData load_data(const DataLayout& layout, std::uint64_t seed, bool roi_crop, unsigned threads) {
    require_test_layout(layout);
    const LoadOptions lo{roi_crop, threads};
    LoadedData d;
    std::tie(d.train, d.val) = shuffle_split(load_training_pool(layout.train_dir, lo), SplitConfig{0.8, seed});
    d.test = load_test_set(layout.test_dir, layout.test_csv, lo);
    return d;
}

FeatureCache extract_features(const std::vector<LabeledSample>& samples, PipelineKind pipeline, std::uint64_t seed,
                              unsigned threads) {
    FeatureCache c;
    c.pipeline = std::string(pipeline_name(pipeline));
    c.seed = seed;
    c.dim = static_cast<std::uint32_t>(HogConfig{}.descriptor_len());
    c.labels.resize(samples.size());
    c.features.resize(samples.size());
    parallel_for(
        samples.size(),
        [&](std::size_t i) {
            c.labels[i] = samples[i].label;
            c.features[i] = apply_pipeline(pipeline, samples[i].image);
        },
        threads);
    return c;
}

FeatureSets cmd_features(const DataLayout& layout, const FeatureOptions& opts, const fs::path& out) {
    const LoadedData data = load_data(layout, opts.seed, opts.roi_crop, opts.threads);
    FeatureSets sets{extract_features(data.train, opts.pipeline, opts.seed, opts.threads),
                     extract_features(data.val, opts.pipeline, opts.seed, opts.threads),
                     extract_features(data.test, opts.pipeline, opts.seed, opts.threads)};
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    write_cache(sets.train, with_suffix(out, ".train"));
    write_cache(sets.val, with_suffix(out, ".val"));
    write_cache(sets.test, with_suffix(out, ".test"));
    return sets;
}

MulticlassTrainResult cmd_train(const fs::path& train_cache, const TrainOptions& opts, const fs::path& out_model,
                                std::ostream& out) {
    const FeatureCache cache = read_cache(train_cache);
    TrainConfig cfg;
    cfg.c = opts.c;
    cfg.gamma = opts.gamma;
    const auto t0 = Clock::now();
    MulticlassTrainResult r = train_multiclass(cache.features, cache.labels, cfg, opts.threads);
    const double secs = seconds_since(t0);
    save_model(r.model, out_model);

    std::size_t bad = 0, svs = 0;
    for (std::size_t p = 0; p < r.pair_stats.size(); ++p) {
        svs += r.pair_stats[p].support_count;
        if (!r.pair_stats[p].converged) {
            ++bad;
            out << "pair (" << r.model.pairs[p].class_a << ", " << r.model.pairs[p].class_b
                << ") did not converge: KKT gap " << r.pair_stats[p].kkt_gap << " after "
                << r.pair_stats[p].iterations << " iterations\n";
        }
    }
    out << "trained " << r.model.pairs.size() << " pairs over " << r.model.classes.size() << " classes (C=" << cfg.c
        << ", gamma=" << cfg.gamma << ") in " << std::fixed << std::setprecision(2) << secs << " s; " << svs
        << " support vectors total; " << bad << " pair(s) not converged\n";
    return r;
}

EvalRow evaluate(const MulticlassSvmModel& model, const FeatureCache& cache, unsigned threads) {
    for (const auto& p : model.pairs)
        if (!p.model.support_vectors.empty() && p.model.support_vectors[0].size() != cache.dim)
            throw Error(ErrorCode::DimensionMismatch, "model dim " + std::to_string(p.model.support_vectors[0].size()) +
                                                          " vs cache dim " + std::to_string(cache.dim));
    const Predictor predictor(model);
    const std::vector<int> pred = predictor.predict_all(cache.features, threads);
    int k = 0;
    for (int l : cache.labels) k = std::max(k, l + 1);
    for (int l : pred) k = std::max(k, l + 1);
    return {cache.pipeline, scores(confusion(cache.labels, pred, static_cast<std::size_t>(k)))};
}

EvalRow cmd_eval(const fs::path& model_path, const fs::path& cache_path, ReportFormat fmt, std::ostream& out,
                 const std::optional<fs::path>& report_path, unsigned threads) {
    const MulticlassSvmModel model = load_model(model_path);
    const FeatureCache cache = read_cache(cache_path);
    EvalRow row = evaluate(model, cache, threads);
    const std::string table = format_table({row}, fmt);
    out << table;
    if (report_path) write_text(*report_path, table);
    return row;
}

BenchReport cmd_bench(const DataLayout& layout, const BenchOptions& opts, const fs::path& out_dir, std::ostream& out) {
    fs::create_directories(out_dir);
    BenchReport report;

    auto t0 = Clock::now();
    const LoadedData data = load_data(layout, opts.seed, opts.roi_crop, opts.threads);
    const double load_s = seconds_since(t0);
    out << "loaded " << data.train.size() << " train / " << data.val.size() << " validation / " << data.test.size()
        << " test images in " << std::fixed << std::setprecision(2) << load_s << " s\n";

    TrainConfig cfg;
    cfg.c = opts.c;
    cfg.gamma = opts.gamma;
    for (PipelineKind kind : opts.pipelines) {
        const std::string name(pipeline_name(kind));
        try {
            BenchTiming timing;
            t0 = Clock::now();
            FeatureSets sets{extract_features(data.train, kind, opts.seed, opts.threads),
                             extract_features(data.val, kind, opts.seed, opts.threads),
                             extract_features(data.test, kind, opts.seed, opts.threads)};
            timing.preprocess_s = seconds_since(t0);
            write_cache(sets.train, out_dir / (name + ".train"));
            write_cache(sets.val, out_dir / (name + ".val"));
            write_cache(sets.test, out_dir / (name + ".test"));

            t0 = Clock::now();
            const MulticlassTrainResult trained = train_multiclass(sets.train.features, sets.train.labels, cfg,
                                                                   opts.threads);
            timing.train_s = seconds_since(t0);
            save_model(trained.model, out_dir / (name + ".model"));
            const auto nonconverged = static_cast<std::size_t>(
                std::count_if(trained.pair_stats.begin(), trained.pair_stats.end(),
                              [](const TrainStats& s) { return !s.converged; }));

            t0 = Clock::now();
            EvalRow val = evaluate(trained.model, sets.val, opts.threads);
            EvalRow test = evaluate(trained.model, sets.test, opts.threads);
            timing.eval_s = seconds_since(t0);

            out << name << ": validation accuracy " << std::setprecision(6) << val.scores.accuracy
                << ", test accuracy " << test.scores.accuracy << std::setprecision(2) << " (preprocess "
                << timing.preprocess_s << " s, train " << timing.train_s << " s, eval " << timing.eval_s << " s)\n";
            report.validation.push_back(std::move(val));
            report.test.push_back(std::move(test));
            report.timing.push_back(timing);
            report.nonconverged_pairs.push_back(nonconverged);
        } catch (const std::exception& e) {
            report.failures.push_back(name + ": " + e.what());
            out << name << " FAILED: " << e.what() << "\n";
        }
    }

    for (auto [stem, rows] : {std::pair{"tables-1", &report.validation}, std::pair{"tables-2", &report.test}}) {
        const std::string s(stem);
        write_text(out_dir / (s + ".md"), format_table(*rows, ReportFormat::Markdown));
        write_text(out_dir / (s + ".csv"), format_table(*rows, ReportFormat::Csv));
        write_text(out_dir / (s + "-weighted.csv"), format_table(*rows, ReportFormat::Csv, Averaging::Weighted));
    }

    std::string timing = "| Method | Preprocess (s) | Train (s) | Eval (s) | Non-converged pairs |\n|---|---|---|---|---|\n";
    char buf[256];
    for (std::size_t i = 0; i < report.timing.size(); ++i) {
        std::snprintf(buf, sizeof buf, "| %s | %.2f | %.2f | %.2f | %zu |\n", report.validation[i].method.c_str(),
                      report.timing[i].preprocess_s, report.timing[i].train_s, report.timing[i].eval_s,
                      report.nonconverged_pairs[i]);
        timing += buf;
    }
    std::snprintf(buf, sizeof buf, "\nImage loading (shared): %.2f s\n", load_s);
    timing += buf;
    write_text(out_dir / "timing.md", timing);

    out << "\nValidation\n" << format_table(report.validation, ReportFormat::Markdown);
    out << "\nTest\n" << format_table(report.test, ReportFormat::Markdown);
    return report;
}

TwoStageResult cmd_tune(const fs::path& train_cache, const TuneOptions& opts, std::ostream& out) {
    const FeatureCache cache = read_cache(train_cache);
    const CvOptions cv{1e-3, opts.threads};
    auto observer = [&](const SearchStage& stage, const Candidate& c) {
        out << stage.folds << "-fold candidate C=" << std::setprecision(6) << c.c << " gamma=" << c.gamma
            << " cv accuracy=" << c.score << "\n";
    };
    TwoStageResult r = two_stage_search(cache.features, cache.labels, opts.seed, cv, observer);
    out << "stage 1 best: C=" << r.stage1.best.c << " gamma=" << r.stage1.best.gamma
        << " score=" << r.stage1.best.score << "\n";
    out << "stage 2 best: C=" << r.stage2.best.c << " gamma=" << r.stage2.best.gamma
        << " score=" << r.stage2.best.score << "\n";
    if (opts.config_out) {
        const nlohmann::json j{{"c", r.stage2.best.c},
                               {"gamma", r.stage2.best.gamma},
                               {"cv_score", r.stage2.best.score},
                               {"seed", opts.seed}};
        write_text(*opts.config_out, j.dump(2) + "\n");
    }
    return r;
}

}  // namespace tsr::cli
