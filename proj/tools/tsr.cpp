// Command-line front end: dataset checks, feature caches, training,
// evaluation, hyperparameter search and the all-pipelines benchmark.

#include <CLI11.hpp>

#include <iostream>

#include "tsr/cli.hpp"
#include "tsr/error.hpp"

namespace fs = std::filesystem;
using namespace tsr;

int main(int argc, char** argv) {
    CLI::App app{"Traffic-sign HOG-SVM preprocessing benchmark"};
    app.require_subcommand(1);

    std::string data_root, train_dir, test_dir, test_csv;
    std::string pipeline = "HOG", format = "md", out, model_path, cache_path, config_out;
    std::uint64_t seed = 0;
    double c = TrainConfig{}.c, gamma = TrainConfig{}.gamma;
    bool roi_crop = false;
    unsigned threads = 0;

    auto add_layout = [&](CLI::App* sub) {
        sub->add_option("--data-root", data_root, "GTSRB root directory")->required();
        sub->add_option("--train-dir", train_dir, "Override: folder holding the class directories");
        sub->add_option("--test-dir", test_dir, "Override: flat folder of test images");
        sub->add_option("--test-csv", test_csv, "Override: test ground-truth CSV");
    };
    auto add_threads = [&](CLI::App* sub) {
        sub->add_option("--threads", threads, "Worker threads (0 = all cores)");
    };

    auto* check = app.add_subcommand("check", "Summarize the dataset: class counts, sizes, imbalance");
    add_layout(check);

    auto* features = app.add_subcommand("features", "Extract feature caches <out>.train/.val/.test");
    add_layout(features);
    features->add_option("--pipeline", pipeline, "Pipeline name, e.g. YUV-HOG");
    features->add_option("--seed", seed, "Shuffle/split seed");
    features->add_flag("--roi-crop", roi_crop, "Crop to the annotated ROI before resizing");
    features->add_option("--out", out, "Output path prefix")->required();
    add_threads(features);

    auto* train = app.add_subcommand("train", "Train the one-vs-one RBF-SVM on a training cache");
    train->add_option("--cache", cache_path, "Training feature cache")->required();
    train->add_option("--c", c, "Box constraint C");
    train->add_option("--gamma", gamma, "RBF width gamma");
    train->add_option("--out", out, "Model output path")->required();
    add_threads(train);

    auto* eval = app.add_subcommand("eval", "Score a model on a feature cache");
    eval->add_option("--model", model_path, "Model file")->required();
    eval->add_option("--cache", cache_path, "Feature cache")->required();
    eval->add_option("--format", format, "md or csv");
    eval->add_option("--out", out, "Also write the table to this file");
    add_threads(eval);

    auto* bench = app.add_subcommand("bench", "Run all seven pipelines and write both metric tables");
    add_layout(bench);
    bench->add_option("--seed", seed, "Shuffle/split seed");
    bench->add_option("--c", c, "Box constraint C");
    bench->add_option("--gamma", gamma, "RBF width gamma");
    bench->add_flag("--roi-crop", roi_crop, "Crop to the annotated ROI before resizing");
    std::vector<std::string> only;
    bench->add_option("--pipeline", only, "Restrict to these pipelines (repeatable)");
    bench->add_option("--out", out, "Output directory")->required();
    add_threads(bench);

    auto* tune = app.add_subcommand("tune", "Two-stage randomized search for C and gamma");
    tune->add_option("--cache", cache_path, "Training feature cache")->required();
    tune->add_option("--seed", seed, "Search seed");
    tune->add_option("--out", config_out, "Write the chosen C/gamma as JSON");
    add_threads(tune);

    CLI11_PARSE(app, argc, argv);

    try {
        const cli::DataLayout layout =
            data_root.empty() ? cli::DataLayout{}
                              : cli::resolve_layout(data_root, {train_dir, test_dir, test_csv});
        if (*check) {
            cli::cmd_check(layout, std::cout);
        } else if (*features) {
            const cli::FeatureOptions opts{parse_pipeline(pipeline), seed, roi_crop, threads};
            const auto sets = cli::cmd_features(layout, opts, out);
            std::cout << "wrote " << sets.train.features.size() << " train, " << sets.val.features.size()
                      << " validation and " << sets.test.features.size() << " test rows (dim " << sets.train.dim
                      << ") to " << out << ".{train,val,test}\n";
        } else if (*train) {
            cli::cmd_train(cache_path, {c, gamma, threads}, out, std::cout);
        } else if (*eval) {
            const auto fmt = cli::parse_format(format);
            cli::cmd_eval(model_path, cache_path, fmt, std::cout,
                          out.empty() ? std::nullopt : std::optional<fs::path>(out), threads);
        } else if (*bench) {
            cli::BenchOptions opts;
            opts.seed = seed;
            opts.c = c;
            opts.gamma = gamma;
            opts.roi_crop = roi_crop;
            opts.threads = threads;
            if (!only.empty()) {
                opts.pipelines.clear();
                for (const auto& name : only) opts.pipelines.push_back(parse_pipeline(name));
            }
            const auto report = cli::cmd_bench(layout, opts, out, std::cout);
            if (!report.failures.empty()) {
                for (const auto& f : report.failures) std::cerr << "failed: " << f << "\n";
                return 1;
            }
        } else if (*tune) {
            cli::TuneOptions opts{seed, threads, config_out.empty() ? std::nullopt : std::optional<fs::path>(config_out)};
            cli::cmd_tune(cache_path, opts, std::cout);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
