#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gdba {

enum class ErrorCode {
    MissingLabelColumn,
    NonNumericCell,
    NonFiniteValue,
    InvalidLabel,
    RaggedRow,
    EmptyDataset,
    FileNotFound,
    DimensionMismatch,
    InvalidParameter,
    DenseCapExceeded,
    NoConvergence,
    ZeroVector,
    IndexOutOfRange,
    KTooLarge,
    SingleClass,
    InvalidGrid,
    UnknownDetector,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string &message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace gdba
