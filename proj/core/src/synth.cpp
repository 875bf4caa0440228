#include "caarl/synth.hpp"

#include "caarl/error.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <set>

namespace caarl {

NormalSource::NormalSource(std::uint64_t seed) : engine_(seed) {}

double NormalSource::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double NormalSource::next() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u = 0.0;
    double v = 0.0;
    double s = 0.0;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * factor;
    has_spare_ = true;
    return u * factor;
}

std::size_t SynthSpec::lag() const noexcept {
    std::size_t p = 0;
    for (const auto& m : regime_models) p = std::max(p, m.coefficients.size());
    return p;
}

void SynthSpec::validate() const {
    if (regime_models.empty()) throw Error(ErrorCode::InvalidArgument, "no regime models");
    for (std::size_t k = 0; k < regime_models.size(); ++k) {
        const double radius = spectral_radius(regime_models[k].coefficients);
        if (!(radius < kStableRadius))
            throw Error(ErrorCode::UnstableModel,
                        "regime " + std::to_string(k) + " has spectral radius " + std::to_string(radius));
    }
    if (schedule.size() != n) throw Error(ErrorCode::InvalidArgument, "schedule rows differ from series count");
    if (grid.stride != grid.interval_length) throw Error(ErrorCode::InvalidArgument, "generation grid must not overlap");
    for (const auto& row : schedule) {
        if (row.size() != grid.interval_count) throw Error(ErrorCode::InvalidArgument, "schedule width differs from grid");
        for (auto id : row)
            if (id >= regime_models.size()) throw Error(ErrorCode::OutOfRangeModel, "schedule names an unknown regime");
    }
    if (!initial_values.empty() && initial_values.size() != lag())
        throw Error(ErrorCode::InvalidArgument, "initial values must cover the lag");
    if (!(noise_std >= 0.0)) throw Error(ErrorCode::InvalidArgument, "noise_std must be nonnegative");
    if (grid.interval_count * grid.interval_length <= lag())
        throw Error(ErrorCode::InvalidArgument, "series shorter than the lag");
}

SynthOutput generate_set(const SynthSpec& spec) {
    spec.validate();
    const auto p = spec.lag();
    const auto length = spec.grid.interval_count * spec.grid.interval_length;
    SynthOutput out;
    for (std::size_t i = 0; i < spec.n; ++i) {
        out.set.series_ids.push_back("S" + std::to_string(i + 1));
        NormalSource noise(spec.seed + i);
        std::vector<double> x(length, 0.0);
        for (std::size_t t = 0; t < p; ++t) x[t] = spec.initial_values.empty() ? 1.0 : spec.initial_values[t];
        for (std::size_t t = p; t < length; ++t) {
            const auto& w = spec.regime_models[spec.schedule[i][t / spec.grid.interval_length]].coefficients;
            double value = 0.0;
            for (std::size_t l = 1; l <= w.size(); ++l) value += w[l - 1] * x[t - l];
            if (spec.noise_std > 0.0) value += spec.noise_std * noise.next();
            x[t] = value;
        }
        out.set.values.push_back(std::move(x));
    }
    for (const auto& model : spec.regime_models) out.truth.library.add(model, 0);
    out.truth.schedule.entries = spec.schedule;
    return out;
}

namespace {

/// Monic characteristic polynomial prod (z - r_k) turned into AR coefficients.
std::vector<double> coefficients_from_roots(const std::vector<std::complex<double>>& roots) {
    std::vector<std::complex<double>> poly{1.0};
    for (const auto& r : roots) {
        std::vector<std::complex<double>> next(poly.size() + 1, 0.0);
        for (std::size_t k = 0; k < poly.size(); ++k) {
            next[k] += poly[k];
            next[k + 1] -= r * poly[k];
        }
        poly = std::move(next);
    }
    std::vector<double> omega(roots.size());
    for (std::size_t l = 1; l < poly.size(); ++l) omega[l - 1] = -poly[l].real();
    return omega;
}

// Complex pairs sit close to the unit circle so segments carry signal well above the noise.
constexpr double kMinPairModulus = 0.8;
constexpr double kMaxModulus = 0.99;
constexpr double kMinAngle = 0.15 * std::numbers::pi;
constexpr double kMaxAngle = 0.85 * std::numbers::pi;
constexpr double kMaxRealRoot = 0.95;

ARModel draw_regime(NormalSource& rng, std::size_t lag) {
    std::vector<std::complex<double>> roots;
    while (roots.size() + 1 < lag) {
        const double modulus = kMinPairModulus + (kMaxModulus - kMinPairModulus) * rng.uniform();
        const double angle = kMinAngle + (kMaxAngle - kMinAngle) * rng.uniform();
        roots.push_back(std::polar(modulus, angle));
        roots.push_back(std::polar(modulus, -angle));
    }
    if (roots.size() < lag) roots.emplace_back(kMaxRealRoot * (2.0 * rng.uniform() - 1.0), 0.0);
    ARModel model;
    model.lag = lag;
    model.coefficients = coefficients_from_roots(roots);
    return model;
}

double distance(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) acc += (a[k] - b[k]) * (a[k] - b[k]);
    return std::sqrt(acc);
}

std::size_t draw_index(NormalSource& rng, std::size_t bound) {
    return std::min(bound - 1, static_cast<std::size_t>(rng.uniform() * static_cast<double>(bound)));
}

std::vector<ModelId> draw_schedule_row(NormalSource& rng, std::size_t k, std::size_t m) {
    std::vector<ModelId> row(m, 0);
    if (k == 1) return row;
    auto regime = static_cast<ModelId>(draw_index(rng, k));
    std::size_t j = 0;
    while (j < m) {
        const auto remaining = m - j;
        std::size_t run = remaining <= 3 ? remaining : 2 + draw_index(rng, remaining - 1);
        if (remaining - run == 1) ++run;
        for (std::size_t t = j; t < j + run; ++t) row[t] = regime;
        j += run;
        regime = static_cast<ModelId>((regime + 1 + draw_index(rng, k - 1)) % k);
    }
    return row;
}

}  // namespace

SynthSpec random_spec(std::size_t n, std::size_t k, std::size_t lag, std::size_t m, std::size_t interval_length,
                      double noise_std, std::uint64_t seed) {
    if (k == 0) throw Error(ErrorCode::InvalidArgument, "need at least one regime");
    if (n == 0 || m == 0 || lag == 0) throw Error(ErrorCode::InvalidArgument, "n, m and lag must be positive");
    NormalSource rng(seed);
    SynthSpec spec;
    spec.n = n;
    spec.noise_std = noise_std;
    spec.seed = seed;
    spec.grid = build_grid(m * interval_length, interval_length, interval_length);

    std::size_t attempts = 0;
    while (spec.regime_models.size() < k) {
        if (++attempts > kMaxGenerationAttempts)
            throw Error(ErrorCode::GenerationFailure, "could not draw separated stable regimes");
        auto candidate = draw_regime(rng, lag);
        if (!(spectral_radius(candidate.coefficients) < kStableRadius)) continue;
        bool separated = true;
        for (const auto& existing : spec.regime_models)
            separated = separated && distance(existing.coefficients, candidate.coefficients) >= kRegimeSeparation;
        if (separated) spec.regime_models.push_back(std::move(candidate));
    }

    const bool must_cover = n * m >= k;
    for (attempts = 0;; ) {
        if (++attempts > kMaxGenerationAttempts)
            throw Error(ErrorCode::GenerationFailure, "could not draw a schedule using every regime");
        spec.schedule.clear();
        std::set<ModelId> used;
        for (std::size_t i = 0; i < n; ++i) {
            spec.schedule.push_back(draw_schedule_row(rng, k, m));
            used.insert(spec.schedule.back().begin(), spec.schedule.back().end());
        }
        if (!must_cover || used.size() == k) break;
    }
    return spec;
}

std::vector<std::vector<ModelId>> truth_on_grid(const SynthSpec& spec, const TimeGrid& grid) {
    std::vector<std::vector<ModelId>> out(spec.n, std::vector<ModelId>(grid.interval_count, 0));
    for (std::size_t i = 0; i < spec.n; ++i) {
        for (std::size_t j = 0; j < grid.interval_count; ++j) {
            const auto mid = grid.begin(j) + grid.interval_length / 2;
            const auto gen = std::min(mid / spec.grid.interval_length, spec.grid.interval_count - 1);
            out[i][j] = spec.schedule[i][gen];
        }
    }
    return out;
}

}  // namespace caarl
