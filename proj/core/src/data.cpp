#include "caarl/data.hpp"

#include "caarl/error.hpp"
#include "caarl/numeric.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace caarl {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

/// Splits one record; double-quoted fields may hold commas and "" escapes.
std::vector<std::string> split_row(std::string_view line) {
    line = trim(line);
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    bool was_quoted = false;
    for (std::size_t k = 0; k < line.size(); ++k) {
        const char c = line[k];
        if (quoted) {
            if (c == '"' && k + 1 < line.size() && line[k + 1] == '"') {
                cell += '"';
                ++k;
            } else if (c == '"') {
                quoted = false;
            } else {
                cell += c;
            }
        } else if (c == '"') {
            quoted = true;
            was_quoted = true;
        } else if (c == ',') {
            cells.push_back(was_quoted ? cell : std::string(trim(cell)));
            cell.clear();
            was_quoted = false;
        } else {
            cell += c;
        }
    }
    cells.push_back(was_quoted ? cell : std::string(trim(cell)));
    return cells;
}

std::string quote_if_needed(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

bool parse_real(std::string_view cell, double& out) {
    if (cell.empty()) return false;
    if (cell.front() == '+') cell.remove_prefix(1);
    const auto* last = cell.data() + cell.size();
    const auto [ptr, ec] = std::from_chars(cell.data(), last, out);
    return ec == std::errc{} && ptr == last && std::isfinite(out);
}

}  // namespace

std::size_t SeriesSet::index_of(const std::string& id) const {
    const auto it = std::find(series_ids.begin(), series_ids.end(), id);
    if (it == series_ids.end()) throw Error(ErrorCode::IndexOutOfRange, "unknown series id '" + id + "'");
    return static_cast<std::size_t>(it - series_ids.begin());
}

void SeriesSet::validate() const {
    if (series_ids.size() != values.size())
        throw Error(ErrorCode::InvalidArgument, "series id count does not match value rows");
    std::unordered_set<std::string> seen;
    for (const auto& id : series_ids)
        if (!seen.insert(id).second) throw Error(ErrorCode::DuplicateHeader, "duplicate series id '" + id + "'");
    const auto n = length();
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i].size() != n)
            throw Error(ErrorCode::RaggedRows, "series '" + series_ids[i] + "' has a different length");
        for (double v : values[i])
            if (!std::isfinite(v))
                throw Error(ErrorCode::NonNumericCell, "series '" + series_ids[i] + "' holds a non-finite value");
    }
    if (!timestamps.empty() && timestamps.size() != n)
        throw Error(ErrorCode::RaggedRows, "timestamp labels do not match series length");
}

SeriesSet SeriesSet::head(std::size_t count) const {
    SeriesSet out;
    out.series_ids = series_ids;
    count = std::min(count, length());
    out.values.reserve(values.size());
    for (const auto& row : values) out.values.emplace_back(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(count));
    if (!timestamps.empty())
        out.timestamps.assign(timestamps.begin(), timestamps.begin() + static_cast<std::ptrdiff_t>(count));
    return out;
}

SeriesSet parse_csv(std::istream& in) {
    std::string line;
    std::size_t row = 0;
    std::vector<std::string> header;
    std::string header_line;
    while (std::getline(in, header_line)) {
        ++row;
        if (!trim(header_line).empty()) break;
    }
    if (trim(header_line).empty()) throw Error(ErrorCode::EmptyFile, "no header row");

    header = split_row(header_line);
    if (header.size() < 2) throw Error(ErrorCode::EmptyFile, "header names no series columns");

    SeriesSet set;
    std::unordered_set<std::string> seen;
    for (std::size_t c = 1; c < header.size(); ++c) {
        std::string id(header[c]);
        if (!seen.insert(id).second)
            throw Error(ErrorCode::DuplicateHeader, "column '" + id + "' appears more than once",
                        CellLocation{row, c + 1});
        set.series_ids.push_back(std::move(id));
    }
    set.values.resize(set.series_ids.size());

    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        const auto cells = split_row(line);
        if (cells.size() != header.size()) {
            std::ostringstream msg;
            msg << "row " << row << " has " << cells.size() << " columns, expected " << header.size();
            throw Error(ErrorCode::RaggedRows, msg.str(), CellLocation{row, 0});
        }
        set.timestamps.emplace_back(cells[0]);
        for (std::size_t c = 1; c < cells.size(); ++c) {
            double v = 0.0;
            if (!parse_real(cells[c], v)) {
                std::ostringstream msg;
                msg << "cell '" << cells[c] << "' at row " << row << " col " << c + 1 << " is not a finite real";
                throw Error(ErrorCode::NonNumericCell, msg.str(), CellLocation{row, c + 1});
            }
            set.values[c - 1].push_back(v);
        }
    }
    if (set.timestamps.empty()) throw Error(ErrorCode::EmptyFile, "no data rows");
    return set;
}

SeriesSet load_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
    return parse_csv(in);
}

void write_csv(const SeriesSet& set, std::ostream& out) {
    out << "timestamp";
    for (const auto& id : set.series_ids) out << ',' << quote_if_needed(id);
    out << '\n';
    const auto n = set.length();
    for (std::size_t t = 0; t < n; ++t) {
        if (set.timestamps.empty()) out << t;
        else out << quote_if_needed(set.timestamps[t]);
        for (const auto& row : set.values) out << ',' << format_real(row[t]);
        out << '\n';
    }
}

void write_csv(const SeriesSet& set, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
    write_csv(set, out);
}

TimeGrid build_grid(std::size_t series_length, std::size_t interval_length, std::size_t stride) {
    if (stride == 0) throw Error(ErrorCode::ZeroStride, "stride must be positive");
    if (interval_length == 0) throw Error(ErrorCode::InvalidArgument, "interval length must be positive");
    if (interval_length > series_length) {
        std::ostringstream msg;
        msg << "interval length " << interval_length << " exceeds series length " << series_length;
        throw Error(ErrorCode::IntervalTooLong, msg.str());
    }
    TimeGrid grid;
    grid.interval_length = interval_length;
    grid.stride = stride;
    grid.series_length = series_length;
    grid.interval_count = (series_length - interval_length) / stride + 1;
    return grid;
}

bool halves_stationary(std::span<const double> segment, double threshold) {
    const auto half = segment.size() / 2;
    if (half == 0) return true;
    const auto first = segment.first(half);
    const auto second = segment.subspan(segment.size() - half);
    const double scale = std::sqrt(population_variance(segment));
    const double bound = threshold * scale;
    const double mean_gap = std::abs(mean(first) - mean(second));
    const double std_gap = std::abs(std::sqrt(population_variance(first)) - std::sqrt(population_variance(second)));
    return mean_gap <= bound && std_gap <= bound;
}

AutoSegmentResult auto_segment(const SeriesSet& set, std::span<const std::size_t> candidates, double threshold) {
    if (candidates.empty()) throw Error(ErrorCode::EmptyCandidates, "no candidate interval lengths");
    std::vector<std::size_t> sorted(candidates.begin(), candidates.end());
    std::sort(sorted.begin(), sorted.end());

    const auto n = set.length();
    AutoSegmentResult fallback;
    for (std::size_t length : sorted) {
        const auto stride = std::max<std::size_t>(1, length / 2);
        const auto grid = build_grid(n, length, stride);
        std::size_t pass = 0;
        std::size_t total = 0;
        for (std::size_t i = 0; i < set.series_count(); ++i) {
            for (std::size_t j = 0; j < grid.interval_count; ++j) {
                pass += halves_stationary(slice(set, grid, i, j).values, threshold) ? 1 : 0;
                ++total;
            }
        }
        const double fraction = total == 0 ? 1.0 : static_cast<double>(pass) / static_cast<double>(total);
        if (fraction >= kStationaryPassFraction) return {grid, true, fraction};
        fallback = {grid, false, fraction};
    }
    return fallback;
}

Segment slice(const SeriesSet& set, const TimeGrid& grid, std::size_t series, std::size_t interval) {
    if (series >= set.series_count()) throw Error(ErrorCode::IndexOutOfRange, "series index out of range");
    if (interval >= grid.interval_count) throw Error(ErrorCode::IndexOutOfRange, "interval index out of range");
    const auto& row = set.values[series];
    if (grid.end(interval) > row.size())
        throw Error(ErrorCode::IndexOutOfRange, "grid extends past the series");
    return {series, interval, std::span<const double>(row).subspan(grid.begin(interval), grid.interval_length)};
}

}  // namespace caarl
