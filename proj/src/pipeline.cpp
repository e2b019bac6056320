#include "tsr/pipeline.hpp"

#include <string>

#include "tsr/enhance.hpp"
#include "tsr/error.hpp"

namespace tsr {

std::string_view pipeline_name(PipelineKind kind) noexcept {
    switch (kind) {
        case PipelineKind::Hog: return "HOG";
        case PipelineKind::ClaheHog: return "CLAHE-HOG";
        case PipelineKind::YuvHog: return "YUV-HOG";
        case PipelineKind::HueHog: return "HUE-HOG";
        case PipelineKind::ClaheYuvHog: return "CLAHE-YUV-HOG";
        case PipelineKind::HueYuvHog: return "HUE-YUV-HOG";
        case PipelineKind::ClaheHueYuvHog: return "CLAHE-HUE-YUV-HOG";
    }
    return "?";
}

PipelineKind parse_pipeline(std::string_view name) {
    for (PipelineKind k : kAllPipelines)
        if (pipeline_name(k) == name) return k;
    std::string valid;
    for (PipelineKind k : kAllPipelines) {
        if (!valid.empty()) valid += ", ";
        valid += pipeline_name(k);
    }
    throw Error(ErrorCode::UnknownPipelineName,
                "unknown pipeline '" + std::string(name) + "'; valid names: " + valid);
}

Image hue_equalize(const Image& img) {
    if (img.color_space() != ColorSpace::Bgr)
        throw Error(ErrorCode::WrongColorSpace, "hue_equalize expects BGR input");
    auto planes = split(bgr_to_hsv(img));
    planes[0] = equalize_hist(planes[0]);
    return hsv_to_bgr(merge(planes, ColorSpace::Hsv));
}

Image preprocess(PipelineKind kind, const Image& img) {
    switch (kind) {
        case PipelineKind::Hog: return img;
        case PipelineKind::ClaheHog: return apply_clahe_dynamic(img);
        case PipelineKind::YuvHog: return bgr_to_yuv(img);
        case PipelineKind::HueHog: return hue_equalize(img);
        case PipelineKind::ClaheYuvHog: return bgr_to_yuv(apply_clahe_dynamic(img));
        case PipelineKind::HueYuvHog: return bgr_to_yuv(hue_equalize(img));
        case PipelineKind::ClaheHueYuvHog: return bgr_to_yuv(hue_equalize(apply_clahe_dynamic(img)));
    }
    return img;
}

FeatureVector apply_pipeline(PipelineKind kind, const Image& img, const HogConfig& hog_cfg) {
    if (img.width() != 32 || img.height() != 32)
        throw Error(ErrorCode::WrongInputSize, "pipelines take 32x32 input, got " + std::to_string(img.width()) +
                                                   "x" + std::to_string(img.height()));
    if (img.color_space() != ColorSpace::Bgr)
        throw Error(ErrorCode::WrongColorSpace, "pipelines take BGR input");
    return hog_descriptor(gaussian_blur_3x3(preprocess(kind, img)), hog_cfg);
}

}  // namespace tsr
