#pragma once

#include <array>
#include <string_view>

#include "tsr/hog.hpp"
#include "tsr/imgcore.hpp"

namespace tsr {

enum class PipelineKind { Hog, ClaheHog, YuvHog, HueHog, ClaheYuvHog, HueYuvHog, ClaheHueYuvHog };

/// All pipelines in report order.
inline constexpr std::array<PipelineKind, 7> kAllPipelines = {
    PipelineKind::Hog,         PipelineKind::ClaheHog,  PipelineKind::YuvHog,        PipelineKind::HueHog,
    PipelineKind::ClaheYuvHog, PipelineKind::HueYuvHog, PipelineKind::ClaheHueYuvHog,
};

/// Hyphenated report name, e.g. "CLAHE-YUV-HOG".
std::string_view pipeline_name(PipelineKind kind) noexcept;

/// Inverse of pipeline_name. Throws UnknownPipelineName listing the valid names.
PipelineKind parse_pipeline(std::string_view name);

/// Histogram-equalizes the hue plane (angle/2 scale) and returns to BGR.
Image hue_equalize(const Image& img);

/// The kind's color/contrast stages only, without blur or HOG.
Image preprocess(PipelineKind kind, const Image& img);

/// preprocess -> gaussian_blur_3x3 -> hog_descriptor on a 32x32 BGR image.
FeatureVector apply_pipeline(PipelineKind kind, const Image& img, const HogConfig& hog_cfg = {});

}  // namespace tsr
