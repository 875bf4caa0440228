#include "caarl/identify.hpp"

#include "caarl/error.hpp"
#include "caarl/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

namespace caarl {

ModelId ModelLibrary::add(ARModel model, std::size_t birth_interval) {
    if (!births_.empty() && birth_interval < births_.back())
        throw Error(ErrorCode::InvalidArgument, "birth intervals must be nondecreasing");
    models_.push_back(std::move(model));
    births_.push_back(birth_interval);
    return static_cast<ModelId>(models_.size() - 1);
}

const ARModel& ModelLibrary::model(ModelId id) const {
    if (id >= models_.size()) throw Error(ErrorCode::OutOfRangeModel, "model id " + std::to_string(id) + " not in library");
    return models_[id];
}

std::size_t ModelLibrary::birth_interval(ModelId id) const {
    if (id >= births_.size()) throw Error(ErrorCode::OutOfRangeModel, "model id " + std::to_string(id) + " not in library");
    return births_[id];
}

void AssignmentMatrix::append_column(std::span<const ModelId> column) {
    if (column.size() != entries.size()) throw Error(ErrorCode::LengthMismatch, "column size differs from series count");
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < column.size(); ++i) {
        entries[i].push_back(column[i]);
        if (i < fit_errors.size()) fit_errors[i].push_back(nan);
        if (i < acceptance_bounds.size()) acceptance_bounds[i].push_back(nan);
    }
}

void ClusterConfig::validate() const {
    if (!(tau >= 0.0) || !std::isfinite(tau)) throw Error(ErrorCode::InvalidArgument, "tau must be a nonnegative real");
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
    if (lag == 0) throw Error(ErrorCode::InvalidArgument, "lag must be positive");
    if (k_max && *k_max == 0) throw Error(ErrorCode::InvalidArgument, "k_max must be positive");
}

double acceptance_bound(std::span<const double> segment, double own_fit_score, double epsilon) {
    const double floor = kAcceptanceFloor * std::max(1.0, population_variance(segment));
    return std::max((1.0 + epsilon) * own_fit_score, floor);
}

double compute_loss(std::span<const std::vector<double>> cluster_mses, double tau) {
    double loss = 0.0;
    for (const auto& cluster : cluster_mses) {
        if (cluster.empty()) throw Error(ErrorCode::EmptyCluster, "cluster has no members");
        loss += std::accumulate(cluster.begin(), cluster.end(), 0.0);
        loss += tau * population_variance(cluster);
    }
    return loss;
}

namespace {

struct Evaluation {
    std::size_t representative = 0;
    std::vector<double> scores;
    double loss = 0.0;
    bool admissible = true;
};

class Agglomerator {
public:
    Agglomerator(std::span<const std::span<const double>> segments, const ClusterConfig& cfg) : cfg_(cfg) {
        const auto n = segments.size();
        fits_.reserve(n);
        for (const auto& seg : segments) fits_.push_back(fit_ar(seg, cfg.lag));
        scores_.assign(n, std::vector<double>(n, 0.0));
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t l = 0; l < n; ++l) scores_[r][l] = score(fits_[r], segments[l]);
        bounds_.resize(n);
        for (std::size_t l = 0; l < n; ++l) bounds_[l] = acceptance_bound(segments[l], scores_[l][l], cfg.epsilon);

        members_.resize(n);
        evals_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            members_[i] = {i};
            evals_[i] = evaluate(members_[i]);
        }
        active_.assign(n, true);
        pair_cache_.assign(n, std::vector<std::optional<Pair>>(n));
    }

    ClusteringResult run() {
        while (auto best = best_pair()) merge(best->first, best->second);
        return collect();
    }

private:
    struct Pair {
        double delta = 0.0;
        double distance = 0.0;
        bool admissible = false;
    };

    Evaluation evaluate(const std::vector<std::size_t>& members) const {
        Evaluation ev;
        double best_sum = std::numeric_limits<double>::infinity();
        for (std::size_t r : members) {
            double sum = 0.0;
            for (std::size_t l : members) sum += scores_[r][l];
            if (sum < best_sum) {
                best_sum = sum;
                ev.representative = r;
            }
        }
        ev.scores.reserve(members.size());
        for (std::size_t l : members) {
            const double s = scores_[ev.representative][l];
            ev.scores.push_back(s);
            if (s > bounds_[l]) ev.admissible = false;
        }
        ev.loss = best_sum + cfg_.tau * population_variance(ev.scores);
        return ev;
    }

    const Pair& pair(std::size_t a, std::size_t b) {
        auto& slot = pair_cache_[a][b];
        if (!slot) {
            std::vector<std::size_t> merged = members_[a];
            merged.insert(merged.end(), members_[b].begin(), members_[b].end());
            std::sort(merged.begin(), merged.end());
            const auto ev = evaluate(merged);
            const auto& ca = fits_[evals_[a].representative].coefficients;
            const auto& cb = fits_[evals_[b].representative].coefficients;
            double dist = 0.0;
            for (std::size_t k = 0; k < ca.size(); ++k) dist += (ca[k] - cb[k]) * (ca[k] - cb[k]);
            slot = Pair{ev.loss - evals_[a].loss - evals_[b].loss, std::sqrt(dist), ev.admissible};
        }
        return *slot;
    }

    std::optional<std::pair<std::size_t, std::size_t>> best_pair() {
        const auto active_count = static_cast<std::size_t>(std::count(active_.begin(), active_.end(), true));
        const bool forced = cfg_.k_max && active_count > *cfg_.k_max;
        std::optional<std::tuple<double, double, std::size_t, std::size_t>> best;
        for (std::size_t a = 0; a < active_.size(); ++a) {
            if (!active_[a]) continue;
            for (std::size_t b = a + 1; b < active_.size(); ++b) {
                if (!active_[b]) continue;
                const auto& p = pair(a, b);
                if (!p.admissible && !forced) continue;
                const auto key = std::make_tuple(p.delta, p.distance, a, b);
                if (!best || key < *best) best = key;
            }
        }
        if (!best) return std::nullopt;
        return std::make_pair(std::get<2>(*best), std::get<3>(*best));
    }

    void merge(std::size_t a, std::size_t b) {
        members_[a].insert(members_[a].end(), members_[b].begin(), members_[b].end());
        std::sort(members_[a].begin(), members_[a].end());
        members_[b].clear();
        active_[b] = false;
        evals_[a] = evaluate(members_[a]);
        for (std::size_t k = 0; k < active_.size(); ++k) {
            pair_cache_[a][k].reset();
            pair_cache_[k][a].reset();
        }
    }

    ClusteringResult collect() const {
        ClusteringResult out;
        out.fits = fits_;
        out.bounds = bounds_;
        out.labels.assign(fits_.size(), 0);
        std::vector<std::vector<double>> mses;
        // Clusters are numbered by their smallest member, which is also their slot.
        for (std::size_t slot = 0; slot < active_.size(); ++slot) {
            if (!active_[slot]) continue;
            const auto label = out.representatives.size();
            out.representatives.push_back(evals_[slot].representative);
            for (std::size_t l : members_[slot]) out.labels[l] = label;
            std::vector<double> by_member(members_[slot].size());
            for (std::size_t k = 0; k < members_[slot].size(); ++k) by_member[k] = evals_[slot].scores[k];
            out.member_scores.push_back(by_member);
            mses.push_back(std::move(by_member));
        }
        out.loss = compute_loss(mses, cfg_.tau);
        return out;
    }

    const ClusterConfig& cfg_;
    std::vector<ARModel> fits_;
    std::vector<std::vector<double>> scores_;  // scores_[r][l]: fit of r on segment l
    std::vector<double> bounds_;
    std::vector<std::vector<std::size_t>> members_;
    std::vector<Evaluation> evals_;
    std::vector<bool> active_;
    std::vector<std::vector<std::optional<Pair>>> pair_cache_;
};

std::vector<std::span<const double>> interval_segments(const SeriesSet& set, const TimeGrid& grid,
                                                       std::span<const std::size_t> series, std::size_t j) {
    std::vector<std::span<const double>> out;
    out.reserve(series.size());
    for (std::size_t i : series) out.push_back(slice(set, grid, i, j).values);
    return out;
}

/// Clusters the given series at interval j and appends one library model per cluster.
/// Returns (model id, fit error, bound) for each input series.
std::vector<std::tuple<ModelId, double, double>> admit_new_models(const SeriesSet& set, const TimeGrid& grid,
                                                                  std::span<const std::size_t> series, std::size_t j,
                                                                  const ClusterConfig& cfg, ModelLibrary& library) {
    const auto segments = interval_segments(set, grid, series, j);
    const auto clustering = cluster_segments(segments, cfg);
    std::vector<ModelId> ids;
    ids.reserve(clustering.representatives.size());
    for (std::size_t rep : clustering.representatives) ids.push_back(library.add(clustering.fits[rep], j));

    std::vector<std::tuple<ModelId, double, double>> out;
    out.reserve(series.size());
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto id = ids[clustering.labels[k]];
        out.emplace_back(id, score(library.model(id), segments[k]), clustering.bounds[k]);
    }
    return out;
}

}  // namespace

ClusteringResult cluster_segments(std::span<const std::span<const double>> segments, const ClusterConfig& cfg) {
    cfg.validate();
    if (segments.empty()) throw Error(ErrorCode::EmptyCluster, "nothing to cluster");
    return Agglomerator(segments, cfg).run();
}

InitResult init_models(const SeriesSet& set, const TimeGrid& grid, const ClusterConfig& cfg) {
    cfg.validate();
    if (grid.interval_count == 0) throw Error(ErrorCode::TooFewIntervals, "grid has no intervals");
    std::vector<std::size_t> all(set.series_count());
    std::iota(all.begin(), all.end(), 0);
    InitResult out;
    for (const auto& [id, err, bound] : admit_new_models(set, grid, all, 0, cfg, out.library)) {
        out.column.push_back(id);
        out.fit_errors.push_back(err);
        out.bounds.push_back(bound);
    }
    return out;
}

TrackResult track(const SeriesSet& set, const TimeGrid& grid, const ClusterConfig& cfg) {
    auto init = init_models(set, grid, cfg);
    const auto n = set.series_count();
    const auto m = grid.interval_count;

    TrackResult out;
    out.library = std::move(init.library);
    auto& a = out.assignments;
    a.entries.assign(n, std::vector<ModelId>(m, 0));
    a.fit_errors.assign(n, std::vector<double>(m, 0.0));
    a.acceptance_bounds.assign(n, std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        a.entries[i][0] = init.column[i];
        a.fit_errors[i][0] = init.fit_errors[i];
        a.acceptance_bounds[i][0] = init.bounds[i];
    }

    for (std::size_t j = 1; j < m; ++j) {
        std::vector<std::size_t> unexplained;
        for (std::size_t i = 0; i < n; ++i) {
            const auto seg = slice(set, grid, i, j).values;
            ModelId best = 0;
            double best_score = std::numeric_limits<double>::infinity();
            for (ModelId k = 0; k < out.library.size(); ++k) {
                const double s = score(out.library.model(k), seg);
                if (s < best_score) {
                    best_score = s;
                    best = k;
                }
            }
            const auto own = fit_ar(seg, cfg.lag);
            const double bound = acceptance_bound(seg, score(own, seg), cfg.epsilon);
            if (best_score <= bound) {
                a.entries[i][j] = best;
                a.fit_errors[i][j] = best_score;
                a.acceptance_bounds[i][j] = bound;
            } else {
                unexplained.push_back(i);
            }
        }
        if (unexplained.empty()) continue;
        const auto admitted = admit_new_models(set, grid, unexplained, j, cfg, out.library);
        for (std::size_t k = 0; k < unexplained.size(); ++k) {
            const auto i = unexplained[k];
            std::tie(a.entries[i][j], a.fit_errors[i][j], a.acceptance_bounds[i][j]) = admitted[k];
        }
    }
    return out;
}

}  // namespace caarl
