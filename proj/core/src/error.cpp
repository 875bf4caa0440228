#include "caarl/error.hpp"

namespace caarl {

std::string_view error_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::EmptyFile: return "EmptyFile";
        case ErrorCode::RaggedRows: return "RaggedRows";
        case ErrorCode::NonNumericCell: return "NonNumericCell";
        case ErrorCode::DuplicateHeader: return "DuplicateHeader";
        case ErrorCode::IntervalTooLong: return "IntervalTooLong";
        case ErrorCode::ZeroStride: return "ZeroStride";
        case ErrorCode::EmptyCandidates: return "EmptyCandidates";
        case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorCode::TooShort: return "TooShort";
        case ErrorCode::SingularDesign: return "SingularDesign";
        case ErrorCode::SeedTooShort: return "SeedTooShort";
        case ErrorCode::EmptyCluster: return "EmptyCluster";
        case ErrorCode::TooFewIntervals: return "TooFewIntervals";
        case ErrorCode::InsufficientHistory: return "InsufficientHistory";
        case ErrorCode::Transport: return "Transport";
        case ErrorCode::ParseFailure: return "ParseFailure";
        case ErrorCode::OutOfRangeModel: return "OutOfRangeModel";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::Empty: return "Empty";
        case ErrorCode::UnstableModel: return "UnstableModel";
        case ErrorCode::GenerationFailure: return "GenerationFailure";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::Io: return "Io";
        case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message, std::optional<CellLocation> cell)
    : std::runtime_error(std::string(error_name(code)) + ": " + message),
      code_(code),
      cell_(cell) {}

}  // namespace caarl
