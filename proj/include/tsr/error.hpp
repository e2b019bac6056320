#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tsr {

/// Failure categories raised across the toolkit. Each operation documents
/// which of these it can produce.
enum class ErrorCode {
    // imgcore
    UnsupportedMagic,
    MaxvalNot255,
    TruncatedPayload,
    MalformedHeader,
    ZeroDimension,
    WrongColorSpace,
    // enhance
    NotSingleChannel,
    ImageSmallerThanGrid,
    InvalidConfig,
    // hog / pipeline
    WrongWindowSize,
    WrongInputSize,
    UnknownPipelineName,
    // dataset
    MissingHeader,
    BadFieldCount,
    NonNumericField,
    RoiOutOfBounds,
    MissingClassDirectory,
    NoClassDirectories,
    DecodeFailures,
    TooFewSamples,
    // svm
    DimensionMismatch,
    SingleClassInput,
    FewerThanTwoClasses,
    IoError,
    BadMagic,
    VersionMismatch,
    ChecksumMismatch,
    // metrics
    LengthMismatch,
    LabelOutOfRange,
    EmptyMatrix,
    // cli
    UnknownFormat,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what) {}

    ErrorCode code() const noexcept { return code_; }
    /// Message without the code prefix, for re-wrapping with more context.
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    std::string detail_;
};

}  // namespace tsr
