#include "caarl/depgraph.hpp"

#include "caarl/error.hpp"

#include <algorithm>

namespace caarl {

std::size_t popcount(const SeriesMask& mask) noexcept {
    return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), true));
}

std::size_t GraphState::multiplicity(const Transition& t) const {
    const auto from = out_attrs.find(t.first);
    const auto to = in_attrs.find(t.second);
    if (from == out_attrs.end() || to == in_attrs.end()) return 0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < from->second.size(); ++i) count += (from->second[i] && to->second[i]) ? 1 : 0;
    return count;
}

GraphState build_state(const AssignmentMatrix& assignments, std::size_t j) {
    const auto n = assignments.series_count();
    if (j + 1 >= assignments.interval_count())
        throw Error(ErrorCode::IndexOutOfRange, "state index past the last interval pair");
    GraphState state;
    state.j = j;
    for (std::size_t i = 0; i < n; ++i) {
        const auto from = assignments.entries[i][j];
        const auto to = assignments.entries[i][j + 1];
        state.edges.emplace(from, to);
        auto& out = state.out_attrs.try_emplace(from, SeriesMask(n, false)).first->second;
        out[i] = true;
        auto& in = state.in_attrs.try_emplace(to, SeriesMask(n, false)).first->second;
        in[i] = true;
    }
    return state;
}

TemporalGraph build_graph(const AssignmentMatrix& assignments) {
    TemporalGraph graph;
    graph.series_count = assignments.series_count();
    const auto m = assignments.interval_count();
    if (m < 2) {
        graph.too_few_intervals = true;
        return graph;
    }
    graph.states.reserve(m - 1);
    for (std::size_t j = 0; j + 1 < m; ++j) graph.states.push_back(build_state(assignments, j));
    return graph;
}

void extend_graph(TemporalGraph& graph, const AssignmentMatrix& assignments) {
    const auto m = assignments.interval_count();
    while (graph.states.size() + 1 < m) graph.states.push_back(build_state(assignments, graph.states.size()));
    graph.too_few_intervals = m < 2;
}

std::map<Transition, std::size_t> transition_counts(const TemporalGraph& graph, std::size_t upto) {
    if (upto == 0 || upto > graph.states.size())
        throw Error(ErrorCode::IndexOutOfRange,
                    "transition window " + std::to_string(upto) + " outside 1.." + std::to_string(graph.states.size()));
    std::map<Transition, std::size_t> counts;
    for (std::size_t s = 0; s < upto; ++s)
        for (const auto& edge : graph.states[s].edges) counts[edge] += graph.states[s].multiplicity(edge);
    return counts;
}

}  // namespace caarl
