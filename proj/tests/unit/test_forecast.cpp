#include "caarl/error.hpp"
#include "caarl/forecast.hpp"
#include "caarl/synth.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace caarl;

namespace {

/// Noiseless data from one persistent AR(2) regime, `intervals` blocks of `length` points.
SynthOutput single_regime(std::size_t n, std::size_t intervals, std::size_t length) {
    SynthSpec spec;
    spec.n = n;
    spec.regime_models = {ARModel{2, oracle::coefficients_from_roots({{0.99, 0.3 * std::numbers::pi}}, {}), 0.0, false}};
    spec.schedule.assign(n, std::vector<ModelId>(intervals, 0));
    spec.grid = build_grid(intervals * length, length, length);
    spec.initial_values = {1.0, 0.5};
    return generate_set(spec);
}

PipelineConfig fixed_grid(std::size_t length, std::size_t stride) {
    PipelineConfig cfg;
    cfg.segmentation.interval_length = length;
    cfg.segmentation.stride = stride;
    return cfg;
}

}  // namespace

TEST_CASE("metrics hand values") {
    const std::vector<double> t1{1, 2}, p1{1, 3};
    CHECK(mae(t1, p1) == 0.5);
    CHECK(mse(t1, p1) == 0.5);
    const std::vector<double> t2{2, 4}, p2{1, 5};
    CHECK(mape(t2, p2).value == 0.375);
    CHECK(mae(t2, t2) == 0.0);
    CHECK(mse(t2, t2) == 0.0);
    CHECK(mape(t2, t2).value == 0.0);
    const std::vector<double> t3{0, 2, 0}, p3{1, 1, 1};
    const auto z = mape(t3, p3);
    CHECK(z.skipped == 2);
    CHECK(z.value == 0.5);
    const std::vector<double> zeros{0, 0};
    CHECK_FALSE(mape(zeros, zeros).value.has_value());
    CHECK_THROWS_AS(mae(t1, t3), Error);
    CHECK_THROWS_AS(mse(std::vector<double>{}, std::vector<double>{}), Error);
}

TEST_CASE("intervals_for_holdout is a ceiling") {
    CHECK(intervals_for_holdout(45, 25) == 2);
    CHECK(intervals_for_holdout(45, 45) == 1);
    CHECK(intervals_for_holdout(45, 50) == 1);
    CHECK(intervals_for_holdout(46, 23) == 2);
}

TEST_CASE("horizon 0 yields nothing") {
    const auto gen = single_regime(2, 4, 50);
    const auto state = identify_pipeline(gen.set, fixed_grid(50, 50));
    BaselineSelector sel;
    const auto r = forecast_series(0, 0, sel, state, gen.set, 2);
    CHECK(r.values.empty());
    CHECK(r.model_trail.empty());
}

TEST_CASE("single regime continuation is exact") {
    const auto gen = single_regime(3, 8, 50);
    const auto observed = gen.set.head(300);
    const auto state = identify_pipeline(observed, fixed_grid(50, 50));
    CHECK(state.library.size() == 1);
    BaselineSelector sel;
    const auto r = forecast_series(1, 2, sel, state, observed, 5);
    REQUIRE(r.values.size() == 100);
    for (const auto& e : r.model_trail) CHECK_FALSE(e.switched);
    for (std::size_t k = 0; k < 100; ++k) CHECK(std::abs(r.values[k] - gen.set.values[1][300 + k]) < 1e-6);
    CHECK(r.start_index == 300);
}

TEST_CASE("holdout_eval truncates to the holdout") {
    const auto gen = single_regime(2, 8, 50);
    BaselineSelector sel;
    const auto report = holdout_eval(gen.set, 45, fixed_grid(50, 25), sel);
    CHECK(report.forecast_intervals == 2);
    CHECK(report.forecasts[0].values.size() == 50);
    CHECK(report.holdout_length == 45);
    CHECK(report.aggregate.mse < 1e-10);
    CHECK_THROWS_AS(holdout_eval(gen.set, gen.set.length(), fixed_grid(50, 25), sel), Error);
}

TEST_CASE("rollout extends non-target series with the baseline") {
    const auto gen = single_regime(3, 6, 50);
    const auto state = identify_pipeline(gen.set, fixed_grid(50, 50));
    ScriptedSelector forced([](std::size_t, std::size_t) { return ModelId{0}; });
    const std::size_t targets[] = {2};
    const auto out = rollout(state, gen.set, forced, targets, 3, 2);
    REQUIRE(out.size() == 1);
    CHECK(out[0].series_id == "S3");
    CHECK(out[0].model_trail.size() == 3);
    for (const auto& e : out[0].model_trail) CHECK(e.source == DecisionSource::Forced);
    CHECK(out[0].model_trail[0].interval == 6);
    CHECK(out[0].model_trail[2].interval == 8);
}

TEST_CASE("scripted selector rejects unknown ids") {
    const auto gen = single_regime(1, 4, 50);
    const auto state = identify_pipeline(gen.set, fixed_grid(50, 50));
    ScriptedSelector bad([](std::size_t, std::size_t) { return ModelId{7}; });
    CHECK_THROWS_AS(forecast_series(0, 1, bad, state, gen.set, 2), Error);
}
