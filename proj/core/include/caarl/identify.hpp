#pragma once

#include "caarl/armodel.hpp"
#include "caarl/data.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace caarl {

using ModelId = std::uint32_t;

/// Shared set of representative AR models. Ids are dense, stable, and never renumbered.
class ModelLibrary {
public:
    ModelId add(ARModel model, std::size_t birth_interval);

    std::size_t size() const noexcept { return models_.size(); }
    bool empty() const noexcept { return models_.empty(); }
    const ARModel& model(ModelId id) const;
    std::size_t birth_interval(ModelId id) const;
    const std::vector<ARModel>& models() const noexcept { return models_; }
    const std::vector<std::size_t>& birth_intervals() const noexcept { return births_; }

    friend bool operator==(const ModelLibrary&, const ModelLibrary&) = default;

private:
    std::vector<ARModel> models_;
    std::vector<std::size_t> births_;  // 0-based interval index
};

/// n x m one-hot switch matrix stored as model ids, plus the per-entry fit diagnostics.
struct AssignmentMatrix {
    std::vector<std::vector<ModelId>> entries;
    /// Score of the assigned model on its segment.
    std::vector<std::vector<double>> fit_errors;
    /// Acceptance bound materialized for the segment (see acceptance_bound).
    std::vector<std::vector<double>> acceptance_bounds;

    std::size_t series_count() const noexcept { return entries.size(); }
    std::size_t interval_count() const noexcept { return entries.empty() ? 0 : entries.front().size(); }

    ModelId at(std::size_t series, std::size_t interval) const { return entries.at(series).at(interval); }

    /// Appends one interval column; diagnostics are NaN for predicted columns.
    void append_column(std::span<const ModelId> column);

    friend bool operator==(const AssignmentMatrix&, const AssignmentMatrix&) = default;
};

struct ClusterConfig {
    double tau = 0.1;
    /// Relative slack over the segment's own least-squares fit.
    double epsilon = 0.3;
    std::optional<std::size_t> k_max;
    std::size_t lag = 2;

    void validate() const;
};

/// Absolute floor applied to acceptance bounds, scaled by max(1, segment variance).
inline constexpr double kAcceptanceFloor = 1e-12;

/// A model "regenerates" a segment when its score does not exceed
/// (1 + epsilon) * score(fit_ar(segment)), floored at kAcceptanceFloor * max(1, var(segment)).
double acceptance_bound(std::span<const double> segment, double own_fit_score, double epsilon);

/// Sum of member MSEs plus tau times the population variance of each cluster's MSEs.
double compute_loss(std::span<const std::vector<double>> cluster_mses, double tau);

struct ClusteringResult {
    std::vector<std::size_t> representatives;  // index into the input segments, one per cluster
    std::vector<std::size_t> labels;           // cluster index per input segment
    std::vector<ARModel> fits;                 // own fit per input segment
    std::vector<std::vector<double>> member_scores;  // per cluster, score of representative on each member
    std::vector<double> bounds;                // acceptance bound per input segment
    double loss = 0.0;
};

/// Fits one model per segment and groups them by greedy agglomerative merging. A merge is
/// admissible when the merged cluster's representative stays within every member's acceptance
/// bound; among admissible merges the one adding the least loss wins (ties: closer coefficient
/// vectors, then lower indices). k_max forces further merges past admissibility.
ClusteringResult cluster_segments(std::span<const std::span<const double>> segments, const ClusterConfig& cfg);

struct InitResult {
    ModelLibrary library;
    std::vector<ModelId> column;
    std::vector<double> fit_errors;
    std::vector<double> bounds;
};

InitResult init_models(const SeriesSet& set, const TimeGrid& grid, const ClusterConfig& cfg);

struct TrackResult {
    ModelLibrary library;
    AssignmentMatrix assignments;
};

TrackResult track(const SeriesSet& set, const TimeGrid& grid, const ClusterConfig& cfg);

}  // namespace caarl
