#include "cli.hpp"

#include "caarl/error.hpp"
#include "caarl/synth.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace caarl::cli {

namespace fs = std::filesystem;

namespace {

std::string_view to_string(SelectorKind kind) { return kind == SelectorKind::Remote ? "remote" : "baseline"; }

SelectorKind selector_from_string(const std::string& s) {
    if (s == "baseline") return SelectorKind::Baseline;
    if (s == "remote") return SelectorKind::Remote;
    throw UsageError("selector must be 'baseline' or 'remote', got '" + s + "'");
}

std::string_view to_string(PromptMode mode) { return mode == PromptMode::ExemplarFewShot ? "exemplar_few_shot" : "zero_shot"; }

}  // namespace

void RunConfig::validate() const {
    if (lag == 0) throw UsageError("lag must be positive");
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw UsageError("epsilon must be a positive real");
    if (!(tau >= 0.0) || !std::isfinite(tau)) throw UsageError("tau must be a nonnegative real");
    if (k_max && *k_max == 0) throw UsageError("k-max must be positive");
    if (q == 0) throw UsageError("q must be positive");
    if (!(threshold >= 0.0)) throw UsageError("threshold must be nonnegative");
    if (auto_segment && candidates.empty()) throw UsageError("candidates must not be empty");
    if (endpoint.timeout.count() <= 0) throw UsageError("timeout-ms must be positive");
    if (endpoint.max_retries < 0) throw UsageError("max-retries must be nonnegative");
}

PipelineConfig RunConfig::pipeline() const {
    PipelineConfig p;
    p.cluster.lag = lag;
    p.cluster.epsilon = epsilon;
    p.cluster.tau = tau;
    p.cluster.k_max = k_max;
    p.q = q;
    p.segmentation.automatic = auto_segment || interval_length == 0;
    p.segmentation.candidates = candidates;
    p.segmentation.threshold = threshold;
    p.segmentation.interval_length = interval_length;
    p.segmentation.stride = stride != 0 ? stride : std::max<std::size_t>(1, interval_length / 2);
    return p;
}

Json RunConfig::to_json() const {
    Json doc = {
        {"input", input},
        {"state", state},
        {"out", out},
        {"lag", lag},
        {"interval_length", interval_length},
        {"stride", stride},
        {"auto_segment", auto_segment},
        {"candidates", candidates},
        {"threshold", threshold},
        {"epsilon", epsilon},
        {"tau", tau},
        {"q", q},
        {"selector", std::string(cli::to_string(selector))},
        {"endpoint", endpoint.base_url},
        {"llm_model", endpoint.model_name},
        {"api_key_env", endpoint.api_key_env_var},
        {"timeout_ms", endpoint.timeout.count()},
        {"max_retries", endpoint.max_retries},
        {"prompt_mode", std::string(cli::to_string(endpoint.mode))},
        {"few_shot_exemplars", endpoint.exemplar_count},
        {"fallback", endpoint.fallback_to_baseline},
        {"horizon", horizon},
        {"holdout", holdout},
        {"seed", seed},
    };
    doc["k_max"] = k_max ? Json(*k_max) : Json(nullptr);
    return doc;
}

void apply_config_json(RunConfig& cfg, const Json& doc) {
    if (!doc.is_object()) throw UsageError("config file must hold a JSON object");
    try {
        for (const auto& [key, v] : doc.items()) {
            if (key == "input") cfg.input = v.get<std::string>();
            else if (key == "state") cfg.state = v.get<std::string>();
            else if (key == "out") cfg.out = v.get<std::string>();
            else if (key == "lag") cfg.lag = v.get<std::size_t>();
            else if (key == "interval_length") cfg.interval_length = v.get<std::size_t>();
            else if (key == "stride") cfg.stride = v.get<std::size_t>();
            else if (key == "auto_segment") cfg.auto_segment = v.get<bool>();
            else if (key == "candidates") cfg.candidates = v.get<std::vector<std::size_t>>();
            else if (key == "threshold") cfg.threshold = v.get<double>();
            else if (key == "epsilon") cfg.epsilon = v.get<double>();
            else if (key == "tau") cfg.tau = v.get<double>();
            else if (key == "k_max") cfg.k_max = v.is_null() ? std::nullopt : std::optional(v.get<std::size_t>());
            else if (key == "q") cfg.q = v.get<std::size_t>();
            else if (key == "selector") cfg.selector = selector_from_string(v.get<std::string>());
            else if (key == "endpoint") cfg.endpoint.base_url = v.get<std::string>();
            else if (key == "llm_model") cfg.endpoint.model_name = v.get<std::string>();
            else if (key == "api_key_env") cfg.endpoint.api_key_env_var = v.get<std::string>();
            else if (key == "timeout_ms") cfg.endpoint.timeout = std::chrono::milliseconds(v.get<long long>());
            else if (key == "max_retries") cfg.endpoint.max_retries = v.get<int>();
            else if (key == "few_shot_exemplars") {
                cfg.endpoint.exemplar_count = v.get<std::size_t>();
                cfg.endpoint.mode = cfg.endpoint.exemplar_count > 0 ? PromptMode::ExemplarFewShot : PromptMode::ZeroShot;
            } else if (key == "prompt_mode") {
                const auto mode = v.get<std::string>();
                if (mode == "zero_shot") cfg.endpoint.mode = PromptMode::ZeroShot;
                else if (mode == "exemplar_few_shot") cfg.endpoint.mode = PromptMode::ExemplarFewShot;
                else throw UsageError("prompt_mode must be zero_shot or exemplar_few_shot");
            } else if (key == "fallback") cfg.endpoint.fallback_to_baseline = v.get<bool>();
            else if (key == "horizon") cfg.horizon = v.get<std::size_t>();
            else if (key == "holdout") cfg.holdout = v.get<std::size_t>();
            else if (key == "seed") cfg.seed = v.get<std::uint64_t>();
            else throw UsageError("unknown config key '" + key + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("config file: ") + e.what());
    }
}

namespace {

/// Raw flag storage; a value only counts when its flag was passed.
struct Flags {
    std::string config;
    RunConfig values;
    std::string selector = "baseline";
    std::string series;
    std::size_t at = 0;
    std::string edges_dir;
    long long timeout_ms = 30000;
    std::size_t k_max = 0;
    // synth
    std::size_t n = 10;
    std::size_t k = 3;
    std::size_t m = 8;
    double noise_std = 0.01;
};


void add_pipeline_flags(CLI::App* app, Flags& f) {
    auto& v = f.values;
    app->add_option("--lag", v.lag, "AR lag p");
    app->add_option("--interval-length", v.interval_length, "Timestamps per interval");
    app->add_option("--stride", v.stride, "Offset between interval starts (default L/2)");
    app->add_flag("--auto-segment", v.auto_segment, "Pick the interval length from --candidates");
    app->add_option("--candidates", v.candidates, "Candidate interval lengths")->delimiter(',');
    app->add_option("--threshold", v.threshold, "Half-split stationarity threshold");
    app->add_option("--epsilon", v.epsilon, "Acceptance slack over the own least-squares fit");
    app->add_option("--tau", v.tau, "Weight of the within-cluster MSE variance");
    app->add_option("--k-max", f.k_max, "Cap on clusters per clustering pass");
    app->add_option("--holdout", v.holdout, "Trailing points withheld from identification");
}

void add_selector_flags(CLI::App* app, Flags& f) {
    auto& v = f.values;
    app->add_option("--selector", f.selector, "baseline or remote");
    app->add_option("--endpoint", v.endpoint.base_url, "Chat-completion base URL");
    app->add_option("--llm-model", v.endpoint.model_name, "Model name sent to the endpoint");
    app->add_option("--api-key-env", v.endpoint.api_key_env_var, "Environment variable holding the API key");
    app->add_option("--few-shot-exemplars", v.endpoint.exemplar_count, "Labeled exemplars per prompt (0 = zero-shot)");
    app->add_flag("--fallback", v.endpoint.fallback_to_baseline, "Use the baseline when the endpoint fails");
    app->add_option("--timeout-ms", f.timeout_ms, "Request timeout in milliseconds");
    app->add_option("--max-retries", v.endpoint.max_retries, "Retries after the first failed request");
}

bool given(const CLI::App* app, const std::string& name) {
    const auto* opt = app->get_option_no_throw(name);
    return opt && opt->count() > 0;
}

RunConfig resolve(const CLI::App* app, const Flags& f) {
    RunConfig cfg;
    if (!f.config.empty()) apply_config_json(cfg, read_json(f.config));
    const auto& v = f.values;
    auto take = [&](const char* flag, auto& field, const auto& value) {
        if (given(app, flag)) field = value;
    };
    take("--input", cfg.input, v.input);
    take("--state", cfg.state, v.state);
    take("--out", cfg.out, v.out);
    take("--lag", cfg.lag, v.lag);
    take("--interval-length", cfg.interval_length, v.interval_length);
    take("--stride", cfg.stride, v.stride);
    take("--auto-segment", cfg.auto_segment, v.auto_segment);
    take("--candidates", cfg.candidates, v.candidates);
    take("--threshold", cfg.threshold, v.threshold);
    take("--epsilon", cfg.epsilon, v.epsilon);
    take("--tau", cfg.tau, v.tau);
    if (given(app, "--k-max")) cfg.k_max = f.k_max;
    take("--q", cfg.q, v.q);
    if (given(app, "--selector")) cfg.selector = selector_from_string(f.selector);
    take("--endpoint", cfg.endpoint.base_url, v.endpoint.base_url);
    take("--llm-model", cfg.endpoint.model_name, v.endpoint.model_name);
    take("--api-key-env", cfg.endpoint.api_key_env_var, v.endpoint.api_key_env_var);
    if (given(app, "--few-shot-exemplars")) {
        cfg.endpoint.exemplar_count = v.endpoint.exemplar_count;
        cfg.endpoint.mode = v.endpoint.exemplar_count > 0 ? PromptMode::ExemplarFewShot : PromptMode::ZeroShot;
    }
    take("--fallback", cfg.endpoint.fallback_to_baseline, v.endpoint.fallback_to_baseline);
    if (given(app, "--timeout-ms")) cfg.endpoint.timeout = std::chrono::milliseconds(f.timeout_ms);
    take("--max-retries", cfg.endpoint.max_retries, v.endpoint.max_retries);
    take("--horizon", cfg.horizon, v.horizon);
    take("--holdout", cfg.holdout, v.holdout);
    take("--seed", cfg.seed, v.seed);
    cfg.validate();
    return cfg;
}

std::unique_ptr<Selector> make_selector(const RunConfig& cfg) {
    if (cfg.selector == SelectorKind::Baseline) return std::make_unique<BaselineSelector>();
    return std::make_unique<RemoteSelector>(cfg.endpoint, make_http_transport(cfg.endpoint.base_url));
}

std::string require(const std::string& value, const char* flag) {
    if (value.empty()) throw UsageError(std::string(flag) + " is required");
    return value;
}

class Manifest {
public:
    Manifest(std::string command, const std::vector<std::string>& args) : command_(std::move(command)), args_(args) {}

    template <typename F>
    auto timed(const std::string& stage, F&& f) {
        const auto start = std::chrono::steady_clock::now();
        if constexpr (std::is_void_v<decltype(f())>) {
            f();
            record(stage, start);
        } else {
            auto result = f();
            record(stage, start);
            return result;
        }
    }

    void output(const fs::path& p) { outputs_.push_back(p.string()); }

    void write(const fs::path& path, const RunConfig& cfg, const Json& extra = Json::object()) const {
        Json doc = {{"command", command_},
                    {"argv", args_},
                    {"config", cfg.to_json()},
                    {"versions", {{"caarl", std::string(kVersion)}, {"state_schema", kStateSchemaVersion}}},
                    {"timings_ms", timings_},
                    {"outputs", outputs_}};
        for (const auto& [k, v] : extra.items()) doc[k] = v;
        write_json_atomic(path, doc);
    }

private:
    void record(const std::string& stage, std::chrono::steady_clock::time_point start) {
        timings_[stage] =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }

    std::string command_;
    std::vector<std::string> args_;
    Json timings_ = Json::object();
    std::vector<std::string> outputs_;
};

fs::path manifest_for_file(const fs::path& out) {
    auto p = out;
    p += ".manifest.json";
    return p;
}

std::string capture(const std::function<void(std::ostream&)>& writer) {
    std::ostringstream s;
    writer(s);
    return s.str();
}

SeriesSet observed_part(const SeriesSet& set, std::size_t holdout) {
    if (holdout >= set.length())
        throw Error(ErrorCode::InvalidArgument, "holdout " + std::to_string(holdout) + " leaves no data");
    return set.head(set.length() - holdout);
}

int cmd_ingest(const RunConfig& cfg, Manifest& manifest, std::ostream& out) {
    const auto set = manifest.timed("load", [&] { return load_csv(require(cfg.input, "--input")); });
    set.validate();
    const Json summary = {{"series_count", set.series_count()},
                          {"length", set.length()},
                          {"series_ids", set.series_ids},
                          {"has_timestamps", !set.timestamps.empty()}};
    out << summary.dump(2) << '\n';
    if (!cfg.out.empty()) {
        write_json_atomic(cfg.out, summary);
        manifest.output(cfg.out);
        manifest.write(manifest_for_file(cfg.out), cfg);
    }
    return 0;
}

int cmd_segment(const RunConfig& cfg, Manifest& manifest, std::ostream& out) {
    const auto full = load_csv(require(cfg.input, "--input"));
    const auto set = observed_part(full, cfg.holdout);
    const auto seg = cfg.pipeline().segmentation;
    Json report;
    if (seg.automatic) {
        const auto result = manifest.timed("segment", [&] { return auto_segment(set, seg.candidates, seg.threshold); });
        report = {{"grid", to_json(result.grid)}, {"stationary", result.stationary}, {"pass_fraction", result.pass_fraction}};
    } else {
        report = {{"grid", to_json(build_grid(set.length(), seg.interval_length, seg.stride))}};
    }
    out << report.dump(2) << '\n';
    if (!cfg.out.empty()) {
        write_json_atomic(cfg.out, report);
        manifest.output(cfg.out);
        manifest.write(manifest_for_file(cfg.out), cfg);
    }
    return 0;
}

StateDocument identify_document(const RunConfig& cfg, Manifest& manifest, std::ostream& err) {
    const auto full = manifest.timed("load", [&] { return load_csv(require(cfg.input, "--input")); });
    const auto observed = observed_part(full, cfg.holdout);
    const auto pipeline = cfg.pipeline();
    if (pipeline.segmentation.automatic) {
        const auto result = auto_segment(observed, pipeline.segmentation.candidates, pipeline.segmentation.threshold);
        if (!result.stationary)
            err << "warning: no candidate interval length passed the stationarity check; using "
                << result.grid.interval_length << '\n';
    }
    StateDocument doc;
    doc.data = full;
    doc.holdout = cfg.holdout;
    doc.q = cfg.q;
    doc.state = manifest.timed("identify", [&] { return identify_pipeline(observed, pipeline); });
    return doc;
}

int cmd_identify(const RunConfig& cfg, Manifest& manifest, std::ostream& out, std::ostream& err) {
    const fs::path target = require(cfg.out, "--out");
    const auto doc = identify_document(cfg, manifest, err);
    write_json_atomic(target, to_json(doc));
    manifest.output(target);
    manifest.write(manifest_for_file(target), cfg);
    out << "identified " << doc.state.library.size() << " models over " << doc.state.assignments.series_count()
        << " series and " << doc.state.assignments.interval_count() << " intervals\n";
    return 0;
}

StateDocument load_state(const RunConfig& cfg) { return state_from_json(read_json(require(cfg.state, "--state"))); }

int cmd_graph(const RunConfig& cfg, Manifest& manifest, std::ostream& out, const Flags& f) {
    const auto doc = load_state(cfg);
    const auto& graph = doc.state.graph;
    const auto json = to_json(graph);
    if (cfg.out.empty()) {
        out << json.dump(2) << '\n';
    } else {
        write_json_atomic(cfg.out, json);
        manifest.output(cfg.out);
    }
    if (!f.edges_dir.empty()) {
        for (const auto& state : graph.states) {
            const auto path = fs::path(f.edges_dir) / ("edges_T" + std::to_string(state.j + 1) + ".csv");
            write_text_atomic(path, capture([&](std::ostream& s) { write_edge_csv(state, s); }));
            manifest.output(path);
        }
    }
    if (!cfg.out.empty()) manifest.write(manifest_for_file(cfg.out), cfg);
    return 0;
}

int cmd_narrate(const RunConfig& cfg, Manifest& manifest, std::ostream& out, const Flags& f) {
    const auto doc = load_state(cfg);
    const auto& st = doc.state;
    const auto observed = observed_part(doc.data, doc.holdout);
    const auto series = observed.index_of(require(f.series, "--series"));
    const auto target = f.at == 0 ? st.assignments.interval_count() : f.at - 1;
    const auto narrative = serialize(series, target, cfg.q, st.graph, st.assignments,
                                     NarrativeContext{observed.series_ids, observed.timestamps, st.grid});
    out << narrative.text << '\n';
    if (!cfg.out.empty()) {
        write_json_atomic(cfg.out, to_json(narrative));
        manifest.output(cfg.out);
        manifest.write(manifest_for_file(cfg.out), cfg);
    }
    return 0;
}

int cmd_forecast(const RunConfig& cfg, Manifest& manifest, std::ostream& out, const Flags& f) {
    const auto doc = load_state(cfg);
    const auto observed = observed_part(doc.data, doc.holdout);
    auto selector = make_selector(cfg);
    std::vector<std::size_t> targets;
    if (f.series.empty()) {
        for (std::size_t i = 0; i < observed.series_count(); ++i) targets.push_back(i);
    } else {
        targets.push_back(observed.index_of(f.series));
    }
    const auto results = manifest.timed(
        "forecast", [&] { return rollout(doc.state, observed, *selector, targets, cfg.horizon, cfg.q); });
    const auto csv = capture([&](std::ostream& s) { write_forecast_csv(results, s); });
    if (cfg.out.empty()) {
        out << csv;
        return 0;
    }
    write_text_atomic(cfg.out, csv);
    manifest.output(cfg.out);
    Json trails = Json::array();
    for (const auto& r : results) trails.push_back(to_json(r));
    auto json_path = fs::path(cfg.out);
    json_path += ".json";
    write_json_atomic(json_path, trails);
    manifest.output(json_path);
    manifest.write(manifest_for_file(cfg.out), cfg);
    out << "forecast " << results.size() << " series over " << cfg.horizon << " intervals\n";
    return 0;
}

int cmd_eval(RunConfig cfg, Manifest& manifest, std::ostream& out, std::ostream& err, const CLI::App* app) {
    auto selector = make_selector(cfg);
    EvalReport report;
    if (!cfg.state.empty()) {
        const auto doc = load_state(cfg);
        if (given(app, "--holdout") && cfg.holdout != doc.holdout)
            throw UsageError("--holdout differs from the holdout recorded in the state file");
        if (doc.holdout == 0) throw UsageError("state was identified without a holdout; rerun identify with --holdout");
        cfg.holdout = doc.holdout;
        report = manifest.timed("evaluate", [&] { return evaluate_state(doc.data, doc.state, doc.holdout, *selector, cfg.q); });
    } else {
        if (cfg.holdout == 0) cfg.holdout = kDefaultHoldout;
        const auto doc = identify_document(cfg, manifest, err);
        report = manifest.timed("evaluate", [&] { return evaluate_state(doc.data, doc.state, cfg.holdout, *selector, cfg.q); });
    }
    const auto csv = capture([&](std::ostream& s) { write_eval_csv(report, s); });
    if (cfg.out.empty()) {
        out << csv;
        return 0;
    }
    const fs::path dir = cfg.out;
    write_text_atomic(dir / "eval.csv", csv);
    write_json_atomic(dir / "eval.json", to_json(report));
    write_text_atomic(dir / "forecast.csv", capture([&](std::ostream& s) { write_forecast_csv(report.forecasts, s); }));
    for (const char* name : {"eval.csv", "eval.json", "forecast.csv"}) manifest.output(dir / name);
    manifest.write(dir / "manifest.json", cfg);
    out << csv;
    return 0;
}

int cmd_synth(const RunConfig& cfg, Manifest& manifest, std::ostream& out, const Flags& f) {
    const fs::path dir = require(cfg.out, "--out");
    if (f.n == 0 || f.k == 0 || f.m == 0) throw UsageError("n, k and m must be positive");
    if (!(f.noise_std >= 0.0)) throw UsageError("noise-std must be nonnegative");
    const auto length = cfg.interval_length == 0 ? std::size_t{100} : cfg.interval_length;
    const auto spec = random_spec(f.n, f.k, cfg.lag, f.m, length, f.noise_std, cfg.seed);
    const auto generated = manifest.timed("generate", [&] { return generate_set(spec); });
    write_text_atomic(dir / "data.csv", capture([&](std::ostream& s) { write_csv(generated.set, s); }));
    write_json_atomic(dir / "truth.json", to_json(spec, generated.truth));
    manifest.output(dir / "data.csv");
    manifest.output(dir / "truth.json");
    manifest.write(dir / "manifest.json", cfg,
                   {{"synth", {{"n", f.n}, {"k", f.k}, {"m", f.m}, {"interval_length", length}, {"noise_std", f.noise_std},
                               {"noise_algorithm", std::string(kNoiseAlgorithm)}}}});
    out << "wrote " << generated.set.series_count() << " series of length " << generated.set.length() << " to "
        << dir.string() << '\n';
    return 0;
}

}  // namespace

int run_subcommand(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Interpretable forecasting of co-evolving series through shared autoregressive regimes", "caarl"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    Flags f;
    auto& v = f.values;
    std::map<std::string, CLI::App*> subs;
    auto sub = [&](const char* name, const char* help) {
        auto* s = app.add_subcommand(name, help);
        s->add_option("--config", f.config, "JSON config file; flags override it");
        subs[name] = s;
        return s;
    };

    auto* ingest = sub("ingest", "Parse and validate a wide CSV");
    ingest->add_option("--input", v.input, "CSV file");
    ingest->add_option("--out", v.out, "Summary JSON");

    auto* segment = sub("segment", "Compute the interval grid");
    segment->add_option("--input", v.input, "CSV file");
    segment->add_option("--out", v.out, "Grid JSON");
    add_pipeline_flags(segment, f);

    auto* identify = sub("identify", "Identify shared AR models and write state.json");
    identify->add_option("--input", v.input, "CSV file");
    identify->add_option("--out", v.out, "State JSON");
    identify->add_option("--q", v.q, "Narrative window recorded in the state");
    add_pipeline_flags(identify, f);

    auto* graph = sub("graph", "Export the temporal dependency graph");
    graph->add_option("--state", v.state, "State JSON");
    graph->add_option("--out", v.out, "Graph JSON (stdout when omitted)");
    graph->add_option("--edges-dir", f.edges_dir, "Directory for per-state edge CSVs");

    auto* narrate = sub("narrate", "Serialize one series' recent trajectory");
    narrate->add_option("--state", v.state, "State JSON");
    narrate->add_option("--series", f.series, "Series id");
    narrate->add_option("--q", v.q, "Intervals described");
    narrate->add_option("--at", f.at, "1-based interval asked about (default: the next unseen one)");
    narrate->add_option("--out", v.out, "Narrative JSON");

    auto* forecast = sub("forecast", "Roll the selector and AR models forward");
    forecast->add_option("--state", v.state, "State JSON");
    forecast->add_option("--horizon", v.horizon, "Future intervals");
    forecast->add_option("--series", f.series, "Only this series (others follow the baseline)");
    forecast->add_option("--q", v.q, "Narrative window for remote selectors");
    forecast->add_option("--out", v.out, "Forecast CSV (stdout when omitted)");
    add_selector_flags(forecast, f);

    auto* eval = sub("eval", "Holdout evaluation");
    eval->add_option("--input", v.input, "CSV file (end-to-end run)");
    eval->add_option("--state", v.state, "State JSON identified with --holdout (stage-by-stage run)");
    eval->add_option("--q", v.q, "Narrative window for remote selectors");
    eval->add_option("--out", v.out, "Output directory");
    add_pipeline_flags(eval, f);
    add_selector_flags(eval, f);

    auto* synth = sub("synth", "Generate series from known regimes");
    synth->add_option("--n", f.n, "Series count");
    synth->add_option("--k", f.k, "Regime count");
    synth->add_option("--m", f.m, "Generation intervals");
    synth->add_option("--lag", v.lag, "AR lag");
    synth->add_option("--interval-length", v.interval_length, "Timestamps per generation interval (default 100)");
    synth->add_option("--noise-std", f.noise_std, "Gaussian noise std");
    synth->add_option("--seed", v.seed, "Random seed");
    synth->add_option("--out", v.out, "Output directory");

    try {
        app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    std::string name;
    CLI::App* chosen = nullptr;
    for (const auto& [n, s] : subs)
        if (s->parsed()) {
            name = n;
            chosen = s;
        }

    try {
        const auto cfg = resolve(chosen, f);
        Manifest manifest(name, args);
        if (name == "ingest") return cmd_ingest(cfg, manifest, out);
        if (name == "segment") return cmd_segment(cfg, manifest, out);
        if (name == "identify") return cmd_identify(cfg, manifest, out, err);
        if (name == "graph") return cmd_graph(cfg, manifest, out, f);
        if (name == "narrate") return cmd_narrate(cfg, manifest, out, f);
        if (name == "forecast") return cmd_forecast(cfg, manifest, out, f);
        if (name == "eval") return cmd_eval(cfg, manifest, out, err, chosen);
        if (name == "synth") return cmd_synth(cfg, manifest, out, f);
        err << "error: unknown subcommand\n";
        return 2;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace caarl::cli
