#include "caarl/narrate.hpp"

#include "caarl/error.hpp"

#include <algorithm>
#include <sstream>

namespace caarl {

namespace {

/// Attribute mask for `model` at interval j, read from the graph where a state covers it.
const SeriesMask* mask_from_graph(const TemporalGraph& graph, std::size_t j, ModelId model) {
    if (j < graph.states.size()) {
        const auto it = graph.states[j].out_attrs.find(model);
        return it == graph.states[j].out_attrs.end() ? nullptr : &it->second;
    }
    if (j >= 1 && j - 1 < graph.states.size()) {
        const auto it = graph.states[j - 1].in_attrs.find(model);
        return it == graph.states[j - 1].in_attrs.end() ? nullptr : &it->second;
    }
    return nullptr;
}

std::string range_text(std::size_t j, const NarrativeContext& ctx) {
    const auto first = ctx.grid.begin(j);
    const auto last = ctx.grid.end(j) - 1;
    std::ostringstream out;
    if (last < ctx.timestamps.size()) out << ctx.timestamps[first] << " to " << ctx.timestamps[last];
    else out << "timestamps " << first << " to " << last;
    return out.str();
}

std::string list_text(const std::vector<std::string>& ids) {
    if (ids.empty()) return "no other series";
    std::ostringstream out;
    const auto shown = std::min(ids.size(), kMaxListedSeries);
    for (std::size_t k = 0; k < shown; ++k) out << (k ? ", " : "") << ids[k];
    if (ids.size() > shown) out << " and " << ids.size() - shown << " more";
    return out.str();
}

}  // namespace

std::vector<NarrativeFact> collect_facts(std::size_t series, std::size_t target_interval, std::size_t q,
                                         const TemporalGraph& graph, const AssignmentMatrix& assignments,
                                         const std::vector<std::string>& series_ids) {
    if (q == 0) throw Error(ErrorCode::InvalidArgument, "window q must be positive");
    const auto n = assignments.series_count();
    const auto m = assignments.interval_count();
    if (series >= n) throw Error(ErrorCode::IndexOutOfRange, "series index out of range");
    if (target_interval > m) throw Error(ErrorCode::IndexOutOfRange, "target interval beyond the next unseen one");
    if (target_interval < q)
        throw Error(ErrorCode::InsufficientHistory, "need " + std::to_string(q) + " intervals of history, have " +
                                                        std::to_string(target_interval));

    std::vector<NarrativeFact> facts;
    facts.reserve(q);
    for (std::size_t j = target_interval - q; j < target_interval; ++j) {
        NarrativeFact fact;
        fact.interval = j;
        fact.model = assignments.entries[series][j];
        const SeriesMask* mask = mask_from_graph(graph, j, fact.model);
        for (std::size_t other = 0; other < n; ++other) {
            if (other == series) continue;
            const bool shared = mask ? static_cast<bool>((*mask)[other]) : assignments.entries[other][j] == fact.model;
            if (shared) fact.co_assigned.push_back(series_ids.at(other));
        }
        std::sort(fact.co_assigned.begin(), fact.co_assigned.end());
        if (j > 0) {
            fact.previous_model = assignments.entries[series][j - 1];
            fact.switched = *fact.previous_model != fact.model;
        }
        facts.push_back(std::move(fact));
    }
    return facts;
}

std::string render(const std::string& series_id, std::size_t target_interval, const std::vector<NarrativeFact>& facts,
                   const NarrativeContext& ctx) {
    std::ostringstream out;
    if (!facts.empty())
        out << "Trajectory of series " << series_id << " from interval T" << facts.front().interval + 1 << " to T"
            << facts.back().interval + 1 << ".\n";
    for (const auto& f : facts) {
        out << "During interval T" << f.interval + 1 << " (" << range_text(f.interval, ctx) << "), series "
            << series_id << " was approximated by model " << f.model
            << "; the same model also approximated: " << list_text(f.co_assigned) << '.';
        if (f.switched) {
            if (*f.switched) out << " It switched from model " << *f.previous_model << " to model " << f.model << '.';
            else out << " It remained governed by model " << f.model << '.';
        }
        out << '\n';
    }
    out << "Which model will approximate series " << series_id << " at interval T" << target_interval + 1
        << "? Answer 'no' if the current model persists, otherwise 'yes, model <id>'.";
    return out.str();
}

Narrative serialize(std::size_t series, std::size_t target_interval, std::size_t q, const TemporalGraph& graph,
                    const AssignmentMatrix& assignments, const NarrativeContext& ctx) {
    Narrative nar;
    nar.facts = collect_facts(series, target_interval, q, graph, assignments, ctx.series_ids);
    nar.series_id = ctx.series_ids.at(series);
    nar.window_begin = target_interval - q;
    nar.window_end = target_interval - 1;
    nar.target_interval = target_interval;
    nar.text = render(nar.series_id, target_interval, nar.facts, ctx);
    return nar;
}

}  // namespace caarl
