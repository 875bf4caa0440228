#pragma once

#include "caarl/armodel.hpp"
#include "caarl/data.hpp"
#include "caarl/identify.hpp"

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace caarl {

/// Name of the noise generator, recorded next to generated data.
inline constexpr std::string_view kNoiseAlgorithm = "mt19937_64+marsaglia_polar";

/// Seedable standard normal source with a fully specified algorithm.
class NormalSource {
public:
    explicit NormalSource(std::uint64_t seed);
    double next();

    /// Uniform on [0, 1) from the top 53 bits of one engine draw.
    double uniform();

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

struct SynthSpec {
    std::size_t n = 0;
    std::vector<ARModel> regime_models;
    /// n x m true regime ids, one per generation interval.
    std::vector<std::vector<ModelId>> schedule;
    double noise_std = 0.0;
    std::uint64_t seed = 0;
    /// Generation grid; non-overlapping (stride == interval_length).
    TimeGrid grid;
    /// First `lag` values of every series; 1.0 when empty.
    std::vector<double> initial_values;

    std::size_t lag() const noexcept;
    void validate() const;
};

struct GroundTruth {
    ModelLibrary library;
    AssignmentMatrix schedule;  // entries only
};

struct SynthOutput {
    SeriesSet set;
    GroundTruth truth;
};

/// Stability threshold on the companion spectral radius.
inline constexpr double kStableRadius = 1.0;

/// Runs each regime's recursion interval by interval with Gaussian noise. Series i draws its noise
/// from seed + i. Values for t < lag are the initial values.
SynthOutput generate_set(const SynthSpec& spec);

/// Minimum Euclidean distance between regime coefficient vectors.
inline constexpr double kRegimeSeparation = 0.3;
inline constexpr std::size_t kMaxGenerationAttempts = 10000;

/// Draws K stable, mutually separated regimes and a schedule where each series holds a regime for
/// at least two consecutive intervals and every regime is used.
SynthSpec random_spec(std::size_t n, std::size_t k, std::size_t lag, std::size_t m, std::size_t interval_length,
                      double noise_std, std::uint64_t seed);

/// True regime of each identification interval, read at the interval midpoint.
std::vector<std::vector<ModelId>> truth_on_grid(const SynthSpec& spec, const TimeGrid& grid);

}  // namespace caarl
