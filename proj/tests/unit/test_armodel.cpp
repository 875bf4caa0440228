#include "caarl/armodel.hpp"
#include "caarl/error.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace caarl;

TEST_CASE("fit_ar forced cases") {
    CHECK(fit_ar(std::vector<double>{2, 2, 2, 2, 2}, 1).coefficients[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(fit_ar(std::vector<double>{1, -1, 1, -1, 1}, 1).coefficients[0] == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("fit_ar matches the 2x2 normal equations") {
    const auto x = oracle::recurse({0.5, 0.3}, {1.0, 0.8}, 50);
    const auto expected = oracle::normal_equations(x, 2);
    const auto model = fit_ar(x, 2);
    REQUIRE(model.coefficients.size() == 2);
    CHECK(std::abs(model.coefficients[0] - expected[0]) < 1e-8);
    CHECK(std::abs(model.coefficients[1] - expected[1]) < 1e-8);
    CHECK(std::abs(model.coefficients[0] - 0.5) < 1e-8);
    CHECK(std::abs(model.coefficients[1] - 0.3) < 1e-8);
    CHECK_FALSE(model.regularized);
}

TEST_CASE("fit_ar agrees with normal equations on noisy data") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> noise(0.0, 1.0);
    for (int rep = 0; rep < 30; ++rep) {
        const std::size_t p = 1 + rep % 4;
        std::vector<double> x(200, 0.0);
        for (std::size_t t = 0; t < x.size(); ++t) x[t] = (t ? 0.6 * x[t - 1] : 0.0) + noise(rng);
        const auto expected = oracle::normal_equations(x, p);
        const auto got = fit_ar(x, p).coefficients;
        for (std::size_t l = 0; l < p; ++l) CHECK(got[l] == doctest::Approx(expected[l]).epsilon(1e-9));
    }
}

TEST_CASE("fit_ar rank deficiency and length checks") {
    const auto m = fit_ar(std::vector<double>(9, 0.0), 2);
    CHECK(m.regularized);
    for (double c : m.coefficients) CHECK(std::isfinite(c));
    try {
        fit_ar(std::vector<double>{1, 2, 3, 4}, 2);
        FAIL("no error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::TooShort);
    }
}

TEST_CASE("fit_ar noise variance is RSS over L - p") {
    const std::vector<double> x{1, 2, 1, 2, 1, 3};
    const auto m = fit_ar(x, 1);
    double rss = 0.0;
    for (std::size_t t = 1; t < x.size(); ++t) rss += std::pow(x[t] - m.coefficients[0] * x[t - 1], 2);
    CHECK(m.noise_variance == doctest::Approx(rss / 5.0));
}

TEST_CASE("generate") {
    CHECK(caarl::generate({1, {1.0}}, std::vector<double>{5}, 3) == std::vector<double>{5, 5, 5});
    CHECK(caarl::generate({1, {0.0}}, std::vector<double>{7}, 2) == std::vector<double>{0, 0});
    const auto g = caarl::generate({2, {0.5, 0.3}}, std::vector<double>{1.0, 0.8}, 2);
    CHECK(g[0] == doctest::Approx(0.7));
    CHECK(g[1] == doctest::Approx(0.59));
    CHECK(caarl::generate({1, {0.5}}, std::vector<double>{1}, 0).empty());
    try {
        caarl::generate({2, {0.5, 0.3}}, std::vector<double>{1.0}, 1);
        FAIL("no error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SeedTooShort);
    }
}

TEST_CASE("score") {
    CHECK(score({1, {1.0}}, std::vector<double>{1, 2, 3}) == doctest::Approx(1.0));
    CHECK(score({1, {0.0}}, std::vector<double>{3, 4}) == doctest::Approx(16.0));
    const auto x = oracle::recurse({0.5, 0.3}, {1.0, 0.8}, 30);
    CHECK(score({2, {0.5, 0.3}}, x) < 1e-28);
}

TEST_CASE("spectral_radius matches the characteristic roots") {
    CHECK(spectral_radius(std::vector<double>{1.1}) == doctest::Approx(1.1));
    CHECK(spectral_radius(std::vector<double>{-0.4}) == doctest::Approx(0.4));
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int k = 0; k < 200; ++k) {
        const double a1 = u(rng), a2 = u(rng) / 1.5;
        CHECK(spectral_radius(std::vector<double>{a1, a2}) == doctest::Approx(oracle::radius_ar2(a1, a2)).epsilon(1e-9));
    }
}
