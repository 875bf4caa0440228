#pragma once

#include "caarl/identify.hpp"

#include <cstddef>
#include <map>
#include <set>
#include <utility>
#include <vector>

namespace caarl {

/// Bit i is set when series i is approximated by the keyed model.
using SeriesMask = std::vector<bool>;

using Transition = std::pair<ModelId, ModelId>;

/// Bipartite state between interval j and j+1 (j is 0-based).
struct GraphState {
    std::size_t j = 0;
    std::set<Transition> edges;
    std::map<ModelId, SeriesMask> out_attrs;  // models at interval j that are edge sources
    std::map<ModelId, SeriesMask> in_attrs;   // models at interval j+1 that are edge targets

    /// Number of series realizing the transition: popcount(out[from] & in[to]).
    std::size_t multiplicity(const Transition& t) const;

    friend bool operator==(const GraphState&, const GraphState&) = default;
};

struct TemporalGraph {
    std::size_t series_count = 0;
    std::vector<GraphState> states;
    /// Set when the assignments had fewer than two intervals, so no state exists.
    bool too_few_intervals = false;

    friend bool operator==(const TemporalGraph&, const TemporalGraph&) = default;
};

std::size_t popcount(const SeriesMask& mask) noexcept;

GraphState build_state(const AssignmentMatrix& assignments, std::size_t j);

TemporalGraph build_graph(const AssignmentMatrix& assignments);

/// Appends the state linking the last two intervals of `assignments` (after append_column).
void extend_graph(TemporalGraph& graph, const AssignmentMatrix& assignments);

/// Transition multiplicities summed over the first `upto` states (1 <= upto <= states.size()).
std::map<Transition, std::size_t> transition_counts(const TemporalGraph& graph, std::size_t upto);

}  // namespace caarl
