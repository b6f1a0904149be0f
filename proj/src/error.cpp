#include "gdba/error.hpp"

namespace gdba {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::MissingLabelColumn: return "MissingLabelColumn";
        case ErrorCode::NonNumericCell: return "NonNumericCell";
        case ErrorCode::NonFiniteValue: return "NonFiniteValue";
        case ErrorCode::InvalidLabel: return "InvalidLabel";
        case ErrorCode::RaggedRow: return "RaggedRow";
        case ErrorCode::EmptyDataset: return "EmptyDataset";
        case ErrorCode::FileNotFound: return "FileNotFound";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::InvalidParameter: return "InvalidParameter";
        case ErrorCode::DenseCapExceeded: return "DenseCapExceeded";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::ZeroVector: return "ZeroVector";
        case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorCode::KTooLarge: return "KTooLarge";
        case ErrorCode::SingleClass: return "SingleClass";
        case ErrorCode::InvalidGrid: return "InvalidGrid";
        case ErrorCode::UnknownDetector: return "UnknownDetector";
    }
    return "Unknown";
}

}  // namespace gdba
