#pragma once

#include "caarl/armodel.hpp"
#include "caarl/data.hpp"
#include "caarl/depgraph.hpp"
#include "caarl/forecast.hpp"
#include "caarl/identify.hpp"
#include "caarl/narrate.hpp"
#include "caarl/synth.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <iosfwd>
#include <optional>

namespace caarl {

using Json = nlohmann::json;

inline constexpr int kStateSchemaVersion = 1;

Json to_json(const ARModel& model);
ARModel ar_model_from_json(const Json& doc);

Json to_json(const TimeGrid& grid);
TimeGrid grid_from_json(const Json& doc);

Json to_json(const ClusterConfig& cfg);
ClusterConfig cluster_config_from_json(const Json& doc);

Json to_json(const SeriesSet& set);
SeriesSet series_set_from_json(const Json& doc);

/// `{"states":[{"j":1,"edges":[[0,1]],"out_attrs":{"0":"110"},"in_attrs":{"1":"100"}}]}`; j is 1-based.
Json to_json(const TemporalGraph& graph);
TemporalGraph graph_from_json(const Json& doc);

Json to_json(const Narrative& narrative);
Json to_json(const EvalReport& report);
Json to_json(const ForecastResult& result);

/// Truth side file written next to synthetic data.
Json to_json(const SynthSpec& spec, const GroundTruth& truth);

/// Versioned pipeline state: data, holdout, grid, config, models, assignments and diagnostics.
struct StateDocument {
    SeriesSet data;            // full input, including any withheld tail
    std::size_t holdout = 0;   // trailing points withheld from identification
    std::size_t q = kDefaultWindow;
    PipelineState state;       // identified on the first data.length() - holdout points
};

Json to_json(const StateDocument& doc);
StateDocument state_from_json(const Json& doc);

/// Writes to a temporary sibling and renames it into place.
void write_text_atomic(const std::filesystem::path& path, const std::string& text);
void write_json_atomic(const std::filesystem::path& path, const Json& doc);
Json read_json(const std::filesystem::path& path);

/// `series,mae,mse,mape,skipped_mape_points`, one row per series then the aggregate row.
void write_eval_csv(const EvalReport& report, std::ostream& out);

/// `series,step,interval,timestamp_index,model,source,value` with 1-based interval labels.
void write_forecast_csv(const std::vector<ForecastResult>& results, std::ostream& out);

/// `source,target,count` for one graph state.
void write_edge_csv(const GraphState& state, std::ostream& out);

/// 0/1 string with one character per series.
std::string mask_to_string(const SeriesMask& mask);
SeriesMask mask_from_string(const std::string& bits);

}  // namespace caarl
