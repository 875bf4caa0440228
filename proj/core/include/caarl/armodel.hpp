#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace caarl {

/// One autoregressive parameter set: x_t = sum_l coefficients[l-1] * x_{t-l} + noise.
/// coefficients[0] multiplies the value one step back. No intercept.
struct ARModel {
    std::size_t lag = 0;
    std::vector<double> coefficients;
    double noise_variance = 0.0;
    /// Set when the least-squares system was rank-deficient and a ridge term was added.
    bool regularized = false;

    friend bool operator==(const ARModel&, const ARModel&) = default;
};

/// Diagonal term added to the normal equations when the lagged design is rank-deficient.
inline constexpr double kRidgeLambda = 1e-8;

/// Ordinary least squares on the lagged design matrix. Requires values.size() >= 2p + 1.
ARModel fit_ar(std::span<const double> values, std::size_t lag);

/// Point forecast: `horizon` values continuing `seed` (ordered oldest to newest).
std::vector<double> generate(const ARModel& model, std::span<const double> seed, std::size_t horizon);

/// Mean squared one-step-ahead error over t = p .. size-1 using the true past values.
double score(const ARModel& model, std::span<const double> segment);

/// Largest eigenvalue modulus of the companion matrix; below 1 means stable.
double spectral_radius(std::span<const double> coefficients);

}  // namespace caarl
