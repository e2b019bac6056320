#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "tsr/hog.hpp"

namespace tsr {

/// Extracted features of one split under one pipeline, as stored on disk:
/// "TSRF", u32 version 1, u32-length-prefixed pipeline name, u64 seed,
/// u32 dim, u32 count, then per row u32 label + f32[dim], then CRC-32.
/// All integers little-endian.
struct FeatureCache {
    std::string pipeline;
    std::uint64_t seed = 0;
    std::uint32_t dim = 0;
    std::vector<int> labels;
    std::vector<FeatureVector> features;

    friend bool operator==(const FeatureCache&, const FeatureCache&) = default;
};

std::vector<std::uint8_t> serialize_cache(const FeatureCache& cache);
FeatureCache deserialize_cache(std::span<const std::uint8_t> bytes);
void write_cache(const FeatureCache& cache, const std::filesystem::path& path);
FeatureCache read_cache(const std::filesystem::path& path);

}  // namespace tsr
