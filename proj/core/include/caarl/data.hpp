#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace caarl {

/// A set of synchronized series: `values[i]` holds all N observations of series i.
struct SeriesSet {
    std::vector<std::string> series_ids;
    std::vector<std::vector<double>> values;
    /// Optional labels, one per timestamp. Empty when the source carries none.
    std::vector<std::string> timestamps;

    std::size_t series_count() const noexcept { return values.size(); }
    std::size_t length() const noexcept { return values.empty() ? 0 : values.front().size(); }

    /// Index of the series with the given id; throws IndexOutOfRange if absent.
    std::size_t index_of(const std::string& id) const;

    /// Checks every invariant (equal lengths, finite values, unique ids).
    void validate() const;

    /// Copy restricted to the first `count` timestamps.
    SeriesSet head(std::size_t count) const;
};

/// Sliding interval grid. Interval j (0-based) covers [j*stride, j*stride + interval_length).
struct TimeGrid {
    std::size_t interval_length = 0;
    std::size_t stride = 0;
    std::size_t interval_count = 0;
    std::size_t series_length = 0;

    std::size_t begin(std::size_t j) const noexcept { return j * stride; }
    std::size_t end(std::size_t j) const noexcept { return j * stride + interval_length; }
    /// First timestamp not covered by any interval.
    std::size_t covered_end() const noexcept {
        return interval_count == 0 ? 0 : end(interval_count - 1);
    }
};

struct Segment {
    std::size_t series_index = 0;
    std::size_t interval_index = 0;
    std::span<const double> values;
};

struct AutoSegmentResult {
    TimeGrid grid;
    /// False when no candidate reached the required pass fraction.
    bool stationary = false;
    double pass_fraction = 0.0;
};

/// Reads a wide CSV: header `timestamp,<id1>,<id2>,...`, one row per timestamp.
SeriesSet load_csv(const std::filesystem::path& path);
SeriesSet parse_csv(std::istream& in);

void write_csv(const SeriesSet& set, std::ostream& out);
void write_csv(const SeriesSet& set, const std::filesystem::path& path);

TimeGrid build_grid(std::size_t series_length, std::size_t interval_length, std::size_t stride);

/// Fraction of (series, interval) pairs that must pass the half-split check.
inline constexpr double kStationaryPassFraction = 0.9;

/// Two-half mean/stddev stationarity check on one segment.
bool halves_stationary(std::span<const double> segment, double threshold);

/// Picks the smallest candidate interval length whose segments are mostly stationary.
/// Stride is fixed to floor(L/2).
AutoSegmentResult auto_segment(const SeriesSet& set, std::span<const std::size_t> candidates,
                               double threshold);

Segment slice(const SeriesSet& set, const TimeGrid& grid, std::size_t series, std::size_t interval);

}  // namespace caarl
