#include "tsr/error.hpp"

namespace tsr {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::UnsupportedMagic: return "UnsupportedMagic";
        case ErrorCode::MaxvalNot255: return "MaxvalNot255";
        case ErrorCode::TruncatedPayload: return "TruncatedPayload";
        case ErrorCode::MalformedHeader: return "MalformedHeader";
        case ErrorCode::ZeroDimension: return "ZeroDimension";
        case ErrorCode::WrongColorSpace: return "WrongColorSpace";
        case ErrorCode::NotSingleChannel: return "NotSingleChannel";
        case ErrorCode::ImageSmallerThanGrid: return "ImageSmallerThanGrid";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::WrongWindowSize: return "WrongWindowSize";
        case ErrorCode::WrongInputSize: return "WrongInputSize";
        case ErrorCode::UnknownPipelineName: return "UnknownPipelineName";
        case ErrorCode::MissingHeader: return "MissingHeader";
        case ErrorCode::BadFieldCount: return "BadFieldCount";
        case ErrorCode::NonNumericField: return "NonNumericField";
        case ErrorCode::RoiOutOfBounds: return "RoiOutOfBounds";
        case ErrorCode::MissingClassDirectory: return "MissingClassDirectory";
        case ErrorCode::NoClassDirectories: return "NoClassDirectories";
        case ErrorCode::DecodeFailures: return "DecodeFailures";
        case ErrorCode::TooFewSamples: return "TooFewSamples";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::SingleClassInput: return "SingleClassInput";
        case ErrorCode::FewerThanTwoClasses: return "FewerThanTwoClasses";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::BadMagic: return "BadMagic";
        case ErrorCode::VersionMismatch: return "VersionMismatch";
        case ErrorCode::ChecksumMismatch: return "ChecksumMismatch";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::LabelOutOfRange: return "LabelOutOfRange";
        case ErrorCode::EmptyMatrix: return "EmptyMatrix";
        case ErrorCode::UnknownFormat: return "UnknownFormat";
    }
    return "Unknown";
}

}  // namespace tsr
