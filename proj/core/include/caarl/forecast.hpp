#pragma once

#include "caarl/data.hpp"
#include "caarl/depgraph.hpp"
#include "caarl/identify.hpp"
#include "caarl/narrate.hpp"
#include "caarl/select.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace caarl {

/// Output of identification plus the graph built from it.
struct PipelineState {
    TimeGrid grid;
    ClusterConfig cluster;
    ModelLibrary library;
    AssignmentMatrix assignments;
    TemporalGraph graph;
};

struct TrailEntry {
    std::size_t interval = 0;
    ModelId model = 0;
    DecisionSource source = DecisionSource::Baseline;
    bool switched = false;
};

struct ForecastResult {
    std::string series_id;
    /// Index of the first forecast timestamp (the length of the observed data).
    std::size_t start_index = 0;
    std::size_t horizon_intervals = 0;
    std::vector<TrailEntry> model_trail;
    std::vector<double> values;  // horizon_intervals * stride points
};

/// Grid derived from the data length, either fixed or chosen by auto_segment.
struct SegmentationConfig {
    std::size_t interval_length = 0;
    std::size_t stride = 0;
    bool automatic = false;
    std::vector<std::size_t> candidates;
    double threshold = 0.1;
};

struct PipelineConfig {
    SegmentationConfig segmentation;
    ClusterConfig cluster;
    std::size_t q = kDefaultWindow;
};

TimeGrid make_grid(const SeriesSet& set, const SegmentationConfig& cfg);

/// Segments, identifies and builds the graph over the whole of `set`.
PipelineState identify_pipeline(const SeriesSet& set, const PipelineConfig& cfg);

/// Closed-loop rollout of `horizon_intervals` future intervals. Series listed in `targets` use
/// `selector`; every other series is extended with the baseline so later windows stay complete.
/// Each step appends the decided column to the assignments and graph before generating `stride`
/// values per series from the last `lag` known-or-predicted values.
std::vector<ForecastResult> rollout(const PipelineState& state, const SeriesSet& observed, Selector& selector,
                                    std::span<const std::size_t> targets, std::size_t horizon_intervals,
                                    std::size_t q);

ForecastResult forecast_series(std::size_t series, std::size_t horizon_intervals, Selector& selector,
                               const PipelineState& state, const SeriesSet& observed, std::size_t q);

/// Rolls every series forward with the same selector.
std::vector<ForecastResult> forecast_all(std::size_t horizon_intervals, Selector& selector, const PipelineState& state,
                                         const SeriesSet& observed, std::size_t q);

double mae(std::span<const double> truth, std::span<const double> pred);
double mse(std::span<const double> truth, std::span<const double> pred);

struct MapeResult {
    /// Mean |y - yhat| / |y| as a fraction; empty when every truth value is zero.
    std::optional<double> value;
    std::size_t skipped = 0;  // truth points equal to zero
};

MapeResult mape(std::span<const double> truth, std::span<const double> pred);

struct SeriesMetrics {
    std::string series_id;
    double mae = 0.0;
    double mse = 0.0;
    std::optional<double> mape;
    std::size_t skipped_mape_points = 0;
};

struct EvalReport {
    std::vector<SeriesMetrics> per_series;
    /// Unweighted means across series; mape averages the series where it is defined.
    SeriesMetrics aggregate;
    std::size_t holdout_length = 0;
    std::size_t forecast_intervals = 0;
    std::vector<ForecastResult> forecasts;
};

inline constexpr std::size_t kDefaultHoldout = 45;

/// Number of future intervals needed to cover `holdout` points: ceil(holdout / stride).
std::size_t intervals_for_holdout(std::size_t holdout, std::size_t stride);

/// Scores forecasts from `state` (identified on the first N - holdout points of `full`).
EvalReport evaluate_state(const SeriesSet& full, const PipelineState& state, std::size_t holdout, Selector& selector,
                          std::size_t q);

/// Withholds the last `holdout` points, identifies on the rest, forecasts and scores.
EvalReport holdout_eval(const SeriesSet& full, std::size_t holdout, const PipelineConfig& cfg, Selector& selector);

}  // namespace caarl
