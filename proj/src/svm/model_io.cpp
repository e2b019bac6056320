#include <string>

#include "tsr/binary_io.hpp"
#include "tsr/error.hpp"
#include "tsr/svm.hpp"

namespace tsr {

namespace {
constexpr std::string_view kModelMagic = "TSRM";
constexpr std::uint32_t kModelVersion = 1;
}  // namespace

std::vector<std::uint8_t> serialize_model(const MulticlassSvmModel& model) {
    ByteWriter w;
    w.bytes(kModelMagic);
    w.u32(kModelVersion);
    w.f64(model.train_config.gamma);
    w.f64(model.train_config.c);
    w.u32(static_cast<std::uint32_t>(model.classes.size()));
    for (int c : model.classes) w.u32(static_cast<std::uint32_t>(c));
    w.u32(static_cast<std::uint32_t>(model.pairs.size()));
    for (const PairModel& pm : model.pairs) {
        const BinaryModel& m = pm.model;
        const std::size_t dim = m.support_vectors.empty() ? 0 : m.support_vectors[0].size();
        w.u32(static_cast<std::uint32_t>(pm.class_a));
        w.u32(static_cast<std::uint32_t>(pm.class_b));
        w.u32(static_cast<std::uint32_t>(m.support_vectors.size()));
        w.u32(static_cast<std::uint32_t>(dim));
        w.f64(m.bias);
        for (double a : m.dual_coeffs) w.f64(a);
        for (const FeatureVector& sv : m.support_vectors) {
            if (sv.size() != dim) throw Error(ErrorCode::DimensionMismatch, "support vectors differ in dimension");
            for (float v : sv) w.f32(v);
        }
    }
    w.seal();
    return w.take();
}

MulticlassSvmModel deserialize_model(std::span<const std::uint8_t> bytes) {
    ByteReader r(verify_sealed(bytes, kModelMagic));
    r.bytes(kModelMagic.size());
    const std::uint32_t version = r.u32();
    if (version != kModelVersion)
        throw Error(ErrorCode::VersionMismatch, "model version " + std::to_string(version) + ", expected 1");

    MulticlassSvmModel model;
    model.train_config.gamma = r.f64();
    model.train_config.c = r.f64();
    const std::uint32_t k = r.u32();
    for (std::uint32_t i = 0; i < k; ++i) model.classes.push_back(static_cast<int>(r.u32()));
    const std::uint32_t pairs = r.u32();
    for (std::uint32_t p = 0; p < pairs; ++p) {
        PairModel pm;
        pm.class_a = static_cast<int>(r.u32());
        pm.class_b = static_cast<int>(r.u32());
        const std::uint32_t count = r.u32();
        const std::uint32_t dim = r.u32();
        if (static_cast<std::uint64_t>(count) * (8 + 4ull * dim) > r.remaining())
            throw Error(ErrorCode::TruncatedPayload, "pair " + std::to_string(p) + " overruns the file");
        pm.model.gamma = model.train_config.gamma;
        pm.model.bias = r.f64();
        pm.model.dual_coeffs.resize(count);
        for (auto& a : pm.model.dual_coeffs) a = r.f64();
        pm.model.support_vectors.assign(count, FeatureVector(dim));
        for (auto& sv : pm.model.support_vectors)
            for (auto& v : sv) v = r.f32();
        model.pairs.push_back(std::move(pm));
    }
    if (r.remaining() != 0) throw Error(ErrorCode::MalformedHeader, "trailing bytes after the last pair");
    return model;
}

void save_model(const MulticlassSvmModel& model, const std::filesystem::path& path) {
    write_file(path, serialize_model(model));
}

MulticlassSvmModel load_model(const std::filesystem::path& path) { return deserialize_model(read_file(path)); }

}  // namespace tsr
