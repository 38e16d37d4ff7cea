// SPDX-License-Identifier: Apache-2.0

#include "cpir/error.hpp"

namespace cpir {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::ZeroInverse: return "ZeroInverse";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::FieldTooSmall: return "FieldTooSmall";
    case ErrorCode::DuplicatePoints: return "DuplicatePoints";
    case ErrorCode::TooLargeToVerify: return "TooLargeToVerify";
    case ErrorCode::UnsupportedParams: return "UnsupportedParams";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::InconsistentAnswers: return "InconsistentAnswers";
    case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

} // namespace cpir
