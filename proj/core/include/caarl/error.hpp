#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace caarl {

enum class ErrorCode {
    EmptyFile,
    RaggedRows,
    NonNumericCell,
    DuplicateHeader,
    IntervalTooLong,
    ZeroStride,
    EmptyCandidates,
    IndexOutOfRange,
    TooShort,
    SingularDesign,
    SeedTooShort,
    EmptyCluster,
    TooFewIntervals,
    InsufficientHistory,
    Transport,
    ParseFailure,
    OutOfRangeModel,
    LengthMismatch,
    Empty,
    UnstableModel,
    GenerationFailure,
    InvalidArgument,
    Io,
    SchemaMismatch,
};

/// Stable identifier used in CLI messages and JSON documents.
std::string_view error_name(ErrorCode code) noexcept;

struct CellLocation {
    std::size_t row = 0;  // 1-based, header is row 1
    std::size_t col = 0;  // 1-based, timestamp column is col 1
};

/// Domain error raised by every pipeline stage.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message,
          std::optional<CellLocation> cell = std::nullopt);

    ErrorCode code() const noexcept { return code_; }
    std::string_view name() const noexcept { return error_name(code_); }
    const std::optional<CellLocation>& cell() const noexcept { return cell_; }

private:
    ErrorCode code_;
    std::optional<CellLocation> cell_;
};

}  // namespace caarl
