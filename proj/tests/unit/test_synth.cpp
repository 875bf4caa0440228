#include "caarl/error.hpp"
#include "caarl/synth.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace caarl;

TEST_CASE("geometric recursion without noise") {
    SynthSpec spec;
    spec.n = 1;
    spec.regime_models = {ARModel{1, {0.5}, 0.0, false}};
    spec.schedule = {{0, 0}};
    spec.grid = build_grid(8, 4, 4);
    const auto gen = generate_set(spec);
    const std::vector<double> expected{1, 0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625, 0.0078125};
    CHECK(gen.set.values[0] == expected);
    CHECK(gen.set.series_ids == std::vector<std::string>{"S1"});
    CHECK(gen.truth.library.size() == 1);
}

TEST_CASE("generation is deterministic per seed") {
    const auto spec = random_spec(4, 2, 2, 4, 50, 0.1, 17);
    CHECK(generate_set(spec).set.values == generate_set(spec).set.values);
    const auto other = random_spec(4, 2, 2, 4, 50, 0.1, 18);
    CHECK(generate_set(other).set.values != generate_set(spec).set.values);
}

TEST_CASE("unstable regimes are rejected") {
    SynthSpec spec;
    spec.n = 1;
    spec.regime_models = {ARModel{1, {1.1}, 0.0, false}};
    spec.schedule = {{0}};
    spec.grid = build_grid(10, 10, 10);
    try {
        generate_set(spec);
        FAIL("no error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UnstableModel);
    }
}

TEST_CASE("random_spec properties") {
    const auto one = random_spec(5, 1, 2, 6, 20, 0.01, 1);
    for (const auto& row : one.schedule)
        for (auto v : row) CHECK(v == 0);

    const auto a = random_spec(6, 3, 2, 8, 20, 0.01, 42);
    const auto b = random_spec(6, 3, 2, 8, 20, 0.01, 42);
    CHECK(a.schedule == b.schedule);
    CHECK(a.regime_models == b.regime_models);

    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto spec = random_spec(6, 3, 2, 8, 20, 0.01, seed);
        std::set<ModelId> used;
        for (const auto& m : spec.regime_models) {
            REQUIRE(m.coefficients.size() == 2);
            CHECK(oracle::radius_ar2(m.coefficients[0], m.coefficients[1]) < 1.0);
        }
        for (std::size_t x = 0; x < spec.regime_models.size(); ++x)
            for (std::size_t y = x + 1; y < spec.regime_models.size(); ++y) {
                const auto& cx = spec.regime_models[x].coefficients;
                const auto& cy = spec.regime_models[y].coefficients;
                CHECK(std::hypot(cx[0] - cy[0], cx[1] - cy[1]) >= kRegimeSeparation);
            }
        for (const auto& row : spec.schedule) {
            // Every run of one regime spans at least two intervals.
            std::size_t run = 1;
            for (std::size_t j = 1; j <= row.size(); ++j) {
                if (j < row.size() && row[j] == row[j - 1]) {
                    ++run;
                } else {
                    CHECK(run >= 2);
                    run = 1;
                }
            }
            used.insert(row.begin(), row.end());
        }
        CHECK(used.size() == 3);
    }
}

TEST_CASE("odd lags include a real root") {
    const auto spec = random_spec(3, 2, 3, 4, 30, 0.01, 9);
    for (const auto& m : spec.regime_models) {
        CHECK(m.coefficients.size() == 3);
        CHECK(spectral_radius(m.coefficients) < 1.0);
    }
}

TEST_CASE("truth_on_grid reads the regime at interval midpoints") {
    SynthSpec spec;
    spec.n = 1;
    spec.regime_models = {ARModel{1, {0.5}, 0.0, false}, ARModel{1, {-0.5}, 0.0, false}};
    spec.schedule = {{0, 1}};
    spec.grid = build_grid(20, 10, 10);
    const auto grid = build_grid(20, 4, 4);
    const auto t = truth_on_grid(spec, grid);
    CHECK(t[0] == std::vector<ModelId>{0, 0, 1, 1, 1});
}

TEST_CASE("normal source moments") {
    NormalSource src(123);
    double sum = 0.0, sq = 0.0;
    const int n = 200000;
    for (int k = 0; k < n; ++k) {
        const double v = src.next();
        sum += v;
        sq += v * v;
    }
    CHECK(std::abs(sum / n) < 0.01);
    CHECK(std::abs(sq / n - 1.0) < 0.02);
    NormalSource a(5), b(5);
    for (int k = 0; k < 10; ++k) CHECK(a.next() == b.next());
}
