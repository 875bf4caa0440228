#pragma once

#include "caarl/data.hpp"
#include "caarl/depgraph.hpp"
#include "caarl/identify.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace caarl {

inline constexpr std::string_view kTemplateVersion = "template_v1";
inline constexpr std::size_t kDefaultWindow = 5;
inline constexpr std::size_t kMaxListedSeries = 20;

/// One interval of a series' trajectory. Intervals are 0-based; rendered text is 1-based (T1, T2, ...).
struct NarrativeFact {
    std::size_t interval = 0;
    ModelId model = 0;
    /// Other series governed by the same model in that interval, sorted by id.
    std::vector<std::string> co_assigned;
    /// Empty for the first interval of a series, which has no predecessor.
    std::optional<bool> switched;
    std::optional<ModelId> previous_model;

    friend bool operator==(const NarrativeFact&, const NarrativeFact&) = default;
};

struct Narrative {
    std::string series_id;
    std::size_t window_begin = 0;  // first interval described
    std::size_t window_end = 0;    // last interval described (inclusive)
    std::size_t target_interval = 0;
    std::string template_version{kTemplateVersion};
    std::vector<NarrativeFact> facts;
    std::string text;
};

/// Labels and grid used to print timestamp ranges. Timestamps may be empty.
struct NarrativeContext {
    const std::vector<std::string>& series_ids;
    const std::vector<std::string>& timestamps;
    const TimeGrid& grid;
};

/// Stage one: read the q intervals before `target_interval` from the graph attributes.
std::vector<NarrativeFact> collect_facts(std::size_t series, std::size_t target_interval, std::size_t q,
                                         const TemporalGraph& graph, const AssignmentMatrix& assignments,
                                         const std::vector<std::string>& series_ids);

/// Stage two: render facts through the fixed template.
std::string render(const std::string& series_id, std::size_t target_interval, const std::vector<NarrativeFact>& facts,
                   const NarrativeContext& ctx);

/// Describes the trajectory of `series` over [target_interval - q, target_interval - 1] and asks which
/// model governs `target_interval`. target_interval may equal the interval count (the next, unseen one).
Narrative serialize(std::size_t series, std::size_t target_interval, std::size_t q, const TemporalGraph& graph,
                    const AssignmentMatrix& assignments, const NarrativeContext& ctx);

}  // namespace caarl
