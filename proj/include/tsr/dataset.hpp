#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <utility>
#include <vector>

#include "tsr/imgcore.hpp"

namespace tsr {

inline constexpr int kNumClasses = 43;
inline constexpr int kSampleSize = 32;

/// One row of a GTSRB ground-truth CSV.
struct Annotation {
    std::string filename;
    int width = 0;
    int height = 0;
    int x1 = 0, y1 = 0, x2 = 0, y2 = 0;
    int class_id = 0;

    friend bool operator==(const Annotation&, const Annotation&) = default;
};

/// Decoded 32x32 BGR image with its class id.
struct LabeledSample {
    Image image;
    int label = 0;
};

struct SplitConfig {
    double train_fraction = 0.8;
    std::uint64_t seed = 0;
};

struct LoadOptions {
    /// Crop to the annotated ROI before resizing.
    bool roi_crop = false;
    /// Decoder threads (0 = hardware concurrency).
    unsigned threads = 0;
};

/// Parses `Filename;Width;Height;Roi.X1;Roi.Y1;Roi.X2;Roi.Y2;ClassId` rows
/// after a header line.
std::vector<Annotation> parse_annotation_csv(std::istream& in);
std::vector<Annotation> read_annotation_csv(const std::filesystem::path& path);

/// Class directories 00000, 00001, ... found under a training root, in
/// ascending order. Throws NoClassDirectories when there are none and
/// MissingClassDirectory naming the first gap in the numbering.
std::vector<std::filesystem::path> class_directories(const std::filesystem::path& root);

/// Decodes and resizes every annotated image of every class directory.
/// Ordered by (class id, CSV row). Any undecodable file aborts the load
/// with DecodeFailures listing every failing path.
std::vector<LabeledSample> load_training_pool(const std::filesystem::path& root, const LoadOptions& opts = {});

/// Flat test folder plus a ground-truth CSV; samples in CSV row order.
std::vector<LabeledSample> load_test_set(const std::filesystem::path& root, const std::filesystem::path& gt_csv,
                                         const LoadOptions& opts = {});

/// Decode + optional ROI crop + resize to 32x32 BGR.
LabeledSample load_sample(const std::filesystem::path& file, const Annotation& ann, bool roi_crop);

/// Shuffles 0..n-1 with XorShift64Star(cfg.seed) and cuts it so the first
/// floor(train_fraction * n) indices form the training part. Throws
/// TooFewSamples for n < 2 and InvalidConfig for a fraction outside (0, 1).
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> shuffle_split_indices(std::size_t n,
                                                                                    const SplitConfig& cfg);

template <typename T>
std::pair<std::vector<T>, std::vector<T>> shuffle_split(std::vector<T> samples, const SplitConfig& cfg) {
    auto [train_idx, val_idx] = shuffle_split_indices(samples.size(), cfg);
    std::pair<std::vector<T>, std::vector<T>> out;
    out.first.reserve(train_idx.size());
    out.second.reserve(val_idx.size());
    for (std::size_t i : train_idx) out.first.push_back(std::move(samples[i]));
    for (std::size_t i : val_idx) out.second.push_back(std::move(samples[i]));
    return out;
}

}  // namespace tsr
