#include "caarl/io.hpp"

#include "caarl/error.hpp"
#include "caarl/numeric.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace caarl {

namespace {

template <typename F>
auto guarded(const char* what, F&& f) {
    try {
        return f();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::SchemaMismatch, std::string(what) + ": " + e.what());
    }
}

Json real_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

double real_from(const Json& v) {
    return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
}

Json matrix_json(const std::vector<std::vector<double>>& rows) {
    Json out = Json::array();
    for (const auto& row : rows) {
        Json r = Json::array();
        for (double v : row) r.push_back(real_or_null(v));
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<std::vector<double>> matrix_from(const Json& doc) {
    std::vector<std::vector<double>> out;
    for (const auto& row : doc) {
        std::vector<double> r;
        for (const auto& v : row) r.push_back(real_from(v));
        out.push_back(std::move(r));
    }
    return out;
}

std::string csv_real(std::optional<double> v) { return v ? format_real(*v) : std::string(); }

}  // namespace

std::string mask_to_string(const SeriesMask& mask) {
    std::string out(mask.size(), '0');
    for (std::size_t i = 0; i < mask.size(); ++i)
        if (mask[i]) out[i] = '1';
    return out;
}

SeriesMask mask_from_string(const std::string& bits) {
    SeriesMask out(bits.size(), false);
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] != '0' && bits[i] != '1') throw Error(ErrorCode::SchemaMismatch, "attribute mask must be 0/1");
        out[i] = bits[i] == '1';
    }
    return out;
}

Json to_json(const ARModel& model) {
    Json out = {{"lag", model.lag}, {"coefficients", model.coefficients}, {"noise_variance", model.noise_variance}};
    if (model.regularized) out["regularized"] = true;
    return out;
}

ARModel ar_model_from_json(const Json& doc) {
    return guarded("ARModel", [&] {
        ARModel m;
        m.lag = doc.at("lag").get<std::size_t>();
        m.coefficients = doc.at("coefficients").get<std::vector<double>>();
        m.noise_variance = doc.at("noise_variance").get<double>();
        m.regularized = doc.value("regularized", false);
        if (m.coefficients.size() != m.lag) throw Error(ErrorCode::SchemaMismatch, "coefficient count differs from lag");
        return m;
    });
}

Json to_json(const TimeGrid& grid) {
    return {{"interval_length", grid.interval_length},
            {"stride", grid.stride},
            {"interval_count", grid.interval_count},
            {"series_length", grid.series_length}};
}

TimeGrid grid_from_json(const Json& doc) {
    return guarded("TimeGrid", [&] {
        TimeGrid g;
        g.interval_length = doc.at("interval_length").get<std::size_t>();
        g.stride = doc.at("stride").get<std::size_t>();
        g.interval_count = doc.at("interval_count").get<std::size_t>();
        g.series_length = doc.at("series_length").get<std::size_t>();
        return g;
    });
}

Json to_json(const ClusterConfig& cfg) {
    Json out = {{"tau", cfg.tau}, {"epsilon", cfg.epsilon}, {"lag", cfg.lag}, {"linkage", "greedy_loss_admissible"}};
    out["k_max"] = cfg.k_max ? Json(*cfg.k_max) : Json(nullptr);
    return out;
}

ClusterConfig cluster_config_from_json(const Json& doc) {
    return guarded("ClusterConfig", [&] {
        ClusterConfig cfg;
        cfg.tau = doc.at("tau").get<double>();
        cfg.epsilon = doc.at("epsilon").get<double>();
        cfg.lag = doc.at("lag").get<std::size_t>();
        if (doc.contains("k_max") && !doc["k_max"].is_null()) cfg.k_max = doc["k_max"].get<std::size_t>();
        return cfg;
    });
}

Json to_json(const SeriesSet& set) {
    return {{"series_ids", set.series_ids}, {"timestamps", set.timestamps}, {"values", set.values}};
}

SeriesSet series_set_from_json(const Json& doc) {
    return guarded("SeriesSet", [&] {
        SeriesSet set;
        set.series_ids = doc.at("series_ids").get<std::vector<std::string>>();
        set.timestamps = doc.value("timestamps", std::vector<std::string>{});
        set.values = doc.at("values").get<std::vector<std::vector<double>>>();
        set.validate();
        return set;
    });
}

Json to_json(const TemporalGraph& graph) {
    Json states = Json::array();
    for (const auto& s : graph.states) {
        Json edges = Json::array();
        for (const auto& [from, to] : s.edges) edges.push_back({from, to});
        Json out_attrs = Json::object();
        for (const auto& [id, mask] : s.out_attrs) out_attrs[std::to_string(id)] = mask_to_string(mask);
        Json in_attrs = Json::object();
        for (const auto& [id, mask] : s.in_attrs) in_attrs[std::to_string(id)] = mask_to_string(mask);
        states.push_back({{"j", s.j + 1}, {"edges", edges}, {"out_attrs", out_attrs}, {"in_attrs", in_attrs}});
    }
    Json out = {{"series_count", graph.series_count}, {"states", states}};
    if (graph.too_few_intervals) out["too_few_intervals"] = true;
    return out;
}

TemporalGraph graph_from_json(const Json& doc) {
    return guarded("TemporalGraph", [&] {
        TemporalGraph g;
        g.series_count = doc.value("series_count", std::size_t{0});
        g.too_few_intervals = doc.value("too_few_intervals", false);
        for (const auto& s : doc.at("states")) {
            GraphState state;
            state.j = s.at("j").get<std::size_t>() - 1;
            for (const auto& e : s.at("edges")) state.edges.emplace(e.at(0).get<ModelId>(), e.at(1).get<ModelId>());
            for (const auto& [k, v] : s.at("out_attrs").items())
                state.out_attrs[static_cast<ModelId>(std::stoul(k))] = mask_from_string(v.get<std::string>());
            for (const auto& [k, v] : s.at("in_attrs").items())
                state.in_attrs[static_cast<ModelId>(std::stoul(k))] = mask_from_string(v.get<std::string>());
            g.states.push_back(std::move(state));
        }
        return g;
    });
}

Json to_json(const Narrative& narrative) {
    Json facts = Json::array();
    for (const auto& f : narrative.facts) {
        Json fact = {{"interval", f.interval + 1}, {"model_id", f.model}, {"co_assigned_series_ids", f.co_assigned}};
        fact["switched"] = f.switched ? Json(*f.switched) : Json(nullptr);
        fact["previous_model_id"] = f.previous_model ? Json(*f.previous_model) : Json(nullptr);
        facts.push_back(std::move(fact));
    }
    return {{"series_id", narrative.series_id},
            {"template_version", narrative.template_version},
            {"window", {narrative.window_begin + 1, narrative.window_end + 1}},
            {"target_interval", narrative.target_interval + 1},
            {"facts", facts},
            {"text", narrative.text}};
}

Json to_json(const ForecastResult& result) {
    Json trail = Json::array();
    for (const auto& t : result.model_trail)
        trail.push_back({{"interval", t.interval + 1},
                         {"model_id", t.model},
                         {"switch", t.switched},
                         {"source", std::string(to_string(t.source))}});
    return {{"series_id", result.series_id},
            {"start_index", result.start_index},
            {"horizon_intervals", result.horizon_intervals},
            {"model_trail", trail},
            {"values", result.values}};
}

Json to_json(const EvalReport& report) {
    auto metrics = [](const SeriesMetrics& m) {
        Json out = {{"mae", m.mae}, {"mse", m.mse}, {"skipped_mape_points", m.skipped_mape_points}};
        out["mape"] = m.mape ? Json(*m.mape) : Json(nullptr);
        return out;
    };
    Json per_series = Json::object();
    for (const auto& m : report.per_series) per_series[m.series_id] = metrics(m);
    return {{"holdout_length", report.holdout_length},
            {"forecast_intervals", report.forecast_intervals},
            {"per_series", per_series},
            {"aggregate", metrics(report.aggregate)}};
}

Json to_json(const SynthSpec& spec, const GroundTruth& truth) {
    Json models = Json::array();
    for (const auto& m : truth.library.models()) models.push_back(to_json(m));
    return {{"models", models},
            {"schedule", truth.schedule.entries},
            {"grid", to_json(spec.grid)},
            {"noise_std", spec.noise_std},
            {"seed", spec.seed},
            {"noise_algorithm", std::string(kNoiseAlgorithm)}};
}

Json to_json(const StateDocument& doc) {
    const auto& st = doc.state;
    Json models = Json::array();
    for (ModelId k = 0; k < st.library.size(); ++k) {
        auto m = to_json(st.library.model(k));
        m["id"] = k;
        m["birth_interval"] = st.library.birth_interval(k) + 1;
        models.push_back(std::move(m));
    }
    return {{"schema_version", kStateSchemaVersion},
            {"data", to_json(doc.data)},
            {"holdout", doc.holdout},
            {"q", doc.q},
            {"grid", to_json(st.grid)},
            {"config", to_json(st.cluster)},
            {"models", models},
            {"assignments", st.assignments.entries},
            {"fit_errors", matrix_json(st.assignments.fit_errors)},
            {"acceptance_bounds", matrix_json(st.assignments.acceptance_bounds)}};
}

StateDocument state_from_json(const Json& doc) {
    return guarded("state", [&] {
        const auto version = doc.at("schema_version").get<int>();
        if (version != kStateSchemaVersion)
            throw Error(ErrorCode::SchemaMismatch, "unsupported state schema_version " + std::to_string(version));
        StateDocument out;
        out.data = series_set_from_json(doc.at("data"));
        out.holdout = doc.at("holdout").get<std::size_t>();
        out.q = doc.value("q", kDefaultWindow);
        auto& st = out.state;
        st.grid = grid_from_json(doc.at("grid"));
        st.cluster = cluster_config_from_json(doc.at("config"));
        for (const auto& m : doc.at("models")) st.library.add(ar_model_from_json(m), m.at("birth_interval").get<std::size_t>() - 1);
        st.assignments.entries = doc.at("assignments").get<std::vector<std::vector<ModelId>>>();
        st.assignments.fit_errors = matrix_from(doc.at("fit_errors"));
        st.assignments.acceptance_bounds = matrix_from(doc.value("acceptance_bounds", Json::array()));
        for (const auto& row : st.assignments.entries)
            for (auto id : row)
                if (id >= st.library.size()) throw Error(ErrorCode::SchemaMismatch, "assignment names an unknown model");
        if (st.assignments.series_count() != out.data.series_count())
            throw Error(ErrorCode::SchemaMismatch, "assignments and data disagree on series count");
        st.graph = build_graph(st.assignments);
        return out;
    });
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::Io, "cannot write '" + tmp.string() + "'");
        out << text;
        if (!out) throw Error(ErrorCode::Io, "write failed for '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
}

void write_json_atomic(const std::filesystem::path& path, const Json& doc) {
    write_text_atomic(path, doc.dump(2) + "\n");
}

Json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
    auto doc = Json::parse(in, nullptr, false);
    if (doc.is_discarded()) throw Error(ErrorCode::SchemaMismatch, "'" + path.string() + "' is not valid JSON");
    return doc;
}

void write_eval_csv(const EvalReport& report, std::ostream& out) {
    out << "series,mae,mse,mape,skipped_mape_points\n";
    auto row = [&](const SeriesMetrics& m) {
        out << m.series_id << ',' << format_real(m.mae) << ',' << format_real(m.mse) << ',' << csv_real(m.mape) << ','
            << m.skipped_mape_points << '\n';
    };
    for (const auto& m : report.per_series) row(m);
    row(report.aggregate);
}

void write_forecast_csv(const std::vector<ForecastResult>& results, std::ostream& out) {
    out << "series,step,interval,timestamp_index,model,source,value\n";
    for (const auto& r : results) {
        const auto per_interval = r.horizon_intervals == 0 ? 0 : r.values.size() / r.horizon_intervals;
        for (std::size_t k = 0; k < r.values.size(); ++k) {
            const auto& trail = r.model_trail.at(per_interval == 0 ? 0 : k / per_interval);
            out << r.series_id << ',' << k + 1 << ',' << trail.interval + 1 << ',' << r.start_index + k << ','
                << trail.model << ',' << to_string(trail.source) << ',' << format_real(r.values[k]) << '\n';
        }
    }
}

void write_edge_csv(const GraphState& state, std::ostream& out) {
    out << "source,target,count\n";
    for (const auto& edge : state.edges) out << edge.first << ',' << edge.second << ',' << state.multiplicity(edge) << '\n';
}

}  // namespace caarl
