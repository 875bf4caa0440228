#include "caarl/forecast.hpp"

#include "caarl/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace caarl {

TimeGrid make_grid(const SeriesSet& set, const SegmentationConfig& cfg) {
    if (cfg.automatic) return auto_segment(set, cfg.candidates, cfg.threshold).grid;
    return build_grid(set.length(), cfg.interval_length, cfg.stride);
}

PipelineState identify_pipeline(const SeriesSet& set, const PipelineConfig& cfg) {
    set.validate();
    PipelineState state;
    state.grid = make_grid(set, cfg.segmentation);
    state.cluster = cfg.cluster;
    auto tracked = track(set, state.grid, cfg.cluster);
    state.library = std::move(tracked.library);
    state.assignments = std::move(tracked.assignments);
    state.graph = build_graph(state.assignments);
    return state;
}

std::vector<ForecastResult> rollout(const PipelineState& state, const SeriesSet& observed, Selector& selector,
                                    std::span<const std::size_t> targets, std::size_t horizon_intervals,
                                    std::size_t q) {
    const auto n = observed.series_count();
    if (state.assignments.series_count() != n)
        throw Error(ErrorCode::LengthMismatch, "state and data disagree on the number of series");
    for (auto t : targets)
        if (t >= n) throw Error(ErrorCode::IndexOutOfRange, "target series out of range");

    const auto stride = state.grid.stride;
    const auto observed_intervals = state.assignments.interval_count();
    std::vector<bool> is_target(n, false);
    for (auto t : targets) is_target[t] = true;

    AssignmentMatrix assignments = state.assignments;
    TemporalGraph graph = state.graph;
    std::vector<std::vector<double>> history = observed.values;
    BaselineSelector companion;

    std::vector<ForecastResult> results(n);
    for (std::size_t i = 0; i < n; ++i) {
        results[i].series_id = observed.series_ids[i];
        results[i].start_index = observed.length();
        results[i].horizon_intervals = horizon_intervals;
    }

    for (std::size_t step = 0; step < horizon_intervals; ++step) {
        const auto target_interval = observed_intervals + step;
        std::vector<ModelId> column(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            SelectionRequest request{i,
                                     target_interval,
                                     graph,
                                     assignments,
                                     state.library.size(),
                                     NarrativeContext{observed.series_ids, observed.timestamps, state.grid},
                                     q,
                                     observed_intervals};
            const auto decision = is_target[i] ? selector.decide(request) : companion.decide(request);
            if (decision.model >= state.library.size())
                throw Error(ErrorCode::OutOfRangeModel, "selector chose a model outside the library");
            column[i] = decision.model;
            results[i].model_trail.push_back({target_interval, decision.model, decision.source, decision.switch_model});
        }
        assignments.append_column(column);
        extend_graph(graph, assignments);

        for (std::size_t i = 0; i < n; ++i) {
            const auto& model = state.library.model(column[i]);
            const auto next = generate(model, history[i], stride);
            history[i].insert(history[i].end(), next.begin(), next.end());
            results[i].values.insert(results[i].values.end(), next.begin(), next.end());
        }
    }

    std::vector<ForecastResult> out;
    out.reserve(targets.size());
    for (auto t : targets) out.push_back(results[t]);
    return out;
}

ForecastResult forecast_series(std::size_t series, std::size_t horizon_intervals, Selector& selector,
                               const PipelineState& state, const SeriesSet& observed, std::size_t q) {
    const std::size_t targets[] = {series};
    return rollout(state, observed, selector, targets, horizon_intervals, q).front();
}

std::vector<ForecastResult> forecast_all(std::size_t horizon_intervals, Selector& selector, const PipelineState& state,
                                         const SeriesSet& observed, std::size_t q) {
    std::vector<std::size_t> targets(observed.series_count());
    std::iota(targets.begin(), targets.end(), 0);
    return rollout(state, observed, selector, targets, horizon_intervals, q);
}

namespace {

void check_pair(std::span<const double> truth, std::span<const double> pred) {
    if (truth.size() != pred.size())
        throw Error(ErrorCode::LengthMismatch, "truth has " + std::to_string(truth.size()) + " points, prediction " +
                                                   std::to_string(pred.size()));
    if (truth.empty()) throw Error(ErrorCode::Empty, "no points to score");
}

}  // namespace

double mae(std::span<const double> truth, std::span<const double> pred) {
    check_pair(truth, pred);
    double acc = 0.0;
    for (std::size_t k = 0; k < truth.size(); ++k) acc += std::abs(truth[k] - pred[k]);
    return acc / static_cast<double>(truth.size());
}

double mse(std::span<const double> truth, std::span<const double> pred) {
    check_pair(truth, pred);
    double acc = 0.0;
    for (std::size_t k = 0; k < truth.size(); ++k) acc += (truth[k] - pred[k]) * (truth[k] - pred[k]);
    return acc / static_cast<double>(truth.size());
}

MapeResult mape(std::span<const double> truth, std::span<const double> pred) {
    check_pair(truth, pred);
    MapeResult out;
    double acc = 0.0;
    std::size_t used = 0;
    for (std::size_t k = 0; k < truth.size(); ++k) {
        if (truth[k] == 0.0) {
            ++out.skipped;
            continue;
        }
        acc += std::abs(truth[k] - pred[k]) / std::abs(truth[k]);
        ++used;
    }
    if (used > 0) out.value = acc / static_cast<double>(used);
    return out;
}

std::size_t intervals_for_holdout(std::size_t holdout, std::size_t stride) {
    if (stride == 0) throw Error(ErrorCode::ZeroStride, "stride must be positive");
    return (holdout + stride - 1) / stride;
}

EvalReport evaluate_state(const SeriesSet& full, const PipelineState& state, std::size_t holdout, Selector& selector,
                          std::size_t q) {
    full.validate();
    if (holdout == 0) throw Error(ErrorCode::Empty, "holdout must be positive");
    if (holdout >= full.length())
        throw Error(ErrorCode::InvalidArgument, "holdout " + std::to_string(holdout) + " leaves no data to identify on");
    const auto observed_length = full.length() - holdout;
    if (state.grid.series_length != observed_length)
        throw Error(ErrorCode::LengthMismatch, "state was identified on " + std::to_string(state.grid.series_length) +
                                                   " points, expected " + std::to_string(observed_length));
    const auto observed = full.head(observed_length);

    EvalReport report;
    report.holdout_length = holdout;
    report.forecast_intervals = intervals_for_holdout(holdout, state.grid.stride);
    report.forecasts = forecast_all(report.forecast_intervals, selector, state, observed, q);

    double mape_sum = 0.0;
    std::size_t mape_series = 0;
    for (std::size_t i = 0; i < full.series_count(); ++i) {
        const auto truth = std::span<const double>(full.values[i]).subspan(observed_length, holdout);
        const auto pred = std::span<const double>(report.forecasts[i].values).first(holdout);
        SeriesMetrics sm;
        sm.series_id = full.series_ids[i];
        sm.mae = mae(truth, pred);
        sm.mse = mse(truth, pred);
        const auto pct = mape(truth, pred);
        sm.mape = pct.value;
        sm.skipped_mape_points = pct.skipped;
        report.aggregate.mae += sm.mae;
        report.aggregate.mse += sm.mse;
        report.aggregate.skipped_mape_points += sm.skipped_mape_points;
        if (sm.mape) {
            mape_sum += *sm.mape;
            ++mape_series;
        }
        report.per_series.push_back(std::move(sm));
    }
    const auto n = static_cast<double>(full.series_count());
    report.aggregate.series_id = "aggregate";
    report.aggregate.mae /= n;
    report.aggregate.mse /= n;
    if (mape_series > 0) report.aggregate.mape = mape_sum / static_cast<double>(mape_series);
    return report;
}

EvalReport holdout_eval(const SeriesSet& full, std::size_t holdout, const PipelineConfig& cfg, Selector& selector) {
    if (holdout >= full.length())
        throw Error(ErrorCode::InvalidArgument, "holdout " + std::to_string(holdout) + " leaves no data to identify on");
    const auto observed = full.head(full.length() - holdout);
    const auto state = identify_pipeline(observed, cfg);
    return evaluate_state(full, state, holdout, selector, cfg.q);
}

}  // namespace caarl
