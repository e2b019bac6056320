#include "tsr/feature_cache.hpp"

#include "tsr/binary_io.hpp"
#include "tsr/error.hpp"

namespace tsr {

namespace {
constexpr std::string_view kCacheMagic = "TSRF";
constexpr std::uint32_t kCacheVersion = 1;
}  // namespace

std::vector<std::uint8_t> serialize_cache(const FeatureCache& cache) {
    if (cache.labels.size() != cache.features.size())
        throw Error(ErrorCode::LengthMismatch, "cache has mismatched label and feature counts");
    ByteWriter w;
    w.bytes(kCacheMagic);
    w.u32(kCacheVersion);
    w.u32(static_cast<std::uint32_t>(cache.pipeline.size()));
    w.bytes(cache.pipeline);
    w.u64(cache.seed);
    w.u32(cache.dim);
    w.u32(static_cast<std::uint32_t>(cache.features.size()));
    for (std::size_t i = 0; i < cache.features.size(); ++i) {
        if (cache.features[i].size() != cache.dim)
            throw Error(ErrorCode::DimensionMismatch, "row " + std::to_string(i) + " has dim " +
                                                          std::to_string(cache.features[i].size()));
        w.u32(static_cast<std::uint32_t>(cache.labels[i]));
        for (float v : cache.features[i]) w.f32(v);
    }
    w.seal();
    return w.take();
}

FeatureCache deserialize_cache(std::span<const std::uint8_t> bytes) {
    ByteReader r(verify_sealed(bytes, kCacheMagic));
    r.bytes(kCacheMagic.size());
    const std::uint32_t version = r.u32();
    if (version != kCacheVersion)
        throw Error(ErrorCode::VersionMismatch, "cache version " + std::to_string(version) + ", expected 1");
    FeatureCache c;
    c.pipeline = r.bytes(r.u32());
    c.seed = r.u64();
    c.dim = r.u32();
    const std::uint32_t count = r.u32();
    if (static_cast<std::uint64_t>(count) * (4ull + 4ull * c.dim) != r.remaining())
        throw Error(ErrorCode::TruncatedPayload, "row data does not match the header's count and dim");
    c.labels.resize(count);
    c.features.assign(count, FeatureVector(c.dim));
    for (std::uint32_t i = 0; i < count; ++i) {
        c.labels[i] = static_cast<int>(r.u32());
        for (float& v : c.features[i]) v = r.f32();
    }
    return c;
}

void write_cache(const FeatureCache& cache, const std::filesystem::path& path) {
    write_file(path, serialize_cache(cache));
}

FeatureCache read_cache(const std::filesystem::path& path) {
    try {
        return deserialize_cache(read_file(path));
    } catch (const Error& e) {
        throw Error(e.code(), path.string() + ": " + e.detail());
    }
}

}  // namespace tsr
