#include "caarl/select.hpp"

#include "caarl/error.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <limits>
#include <regex>
#include <sstream>
#include <thread>

namespace caarl {

std::string_view to_string(DecisionSource source) noexcept {
    switch (source) {
        case DecisionSource::Baseline: return "baseline";
        case DecisionSource::Remote: return "remote";
        case DecisionSource::Fallback: return "fallback";
        case DecisionSource::Forced: return "forced";
    }
    return "baseline";
}

DecisionSource decision_source_from_string(std::string_view text) {
    if (text == "baseline") return DecisionSource::Baseline;
    if (text == "remote") return DecisionSource::Remote;
    if (text == "fallback") return DecisionSource::Fallback;
    if (text == "forced") return DecisionSource::Forced;
    throw Error(ErrorCode::SchemaMismatch, "unknown decision source '" + std::string(text) + "'");
}

namespace {

ModelId current_model_of(const AssignmentMatrix& assignments, std::size_t series, std::size_t target_interval) {
    if (series >= assignments.series_count()) throw Error(ErrorCode::IndexOutOfRange, "series index out of range");
    if (target_interval == 0 || target_interval > assignments.interval_count())
        throw Error(ErrorCode::IndexOutOfRange, "target interval needs an observed predecessor");
    return assignments.entries[series][target_interval - 1];
}

SelectorDecision make_decision(ModelId current, ModelId predicted, DecisionSource source) {
    return {predicted != current, predicted, std::nullopt, source};
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::string strip_fences(std::string_view s) {
    s = trim(s);
    if (s.size() >= 6 && s.substr(0, 3) == "```" && s.substr(s.size() - 3) == "```") {
        s = s.substr(3, s.size() - 6);
        // Drop an info string such as ```text on the opening line.
        const auto newline = s.find('\n');
        if (newline != std::string_view::npos) {
            const auto info = trim(s.substr(0, newline));
            if (std::all_of(info.begin(), info.end(), [](unsigned char c) { return std::isalnum(c) || c == '-'; }))
                s = s.substr(newline + 1);
        }
    } else if (s.size() >= 2 && s.front() == '`' && s.back() == '`') {
        s = s.substr(1, s.size() - 2);
    }
    return std::string(trim(s));
}

std::string answer_for(ModelId previous, ModelId next) {
    return previous == next ? std::string("no") : "yes, model " + std::to_string(next);
}

}  // namespace

SelectorDecision baseline_decide(std::size_t series, std::size_t target_interval, const TemporalGraph& graph,
                                 const AssignmentMatrix& assignments) {
    const auto current = current_model_of(assignments, series, target_interval);
    // States 0 .. target-2 link intervals that precede the target; later ones would leak it.
    const auto observed_states = std::min(target_interval - 1, graph.states.size());
    if (observed_states == 0) return make_decision(current, current, DecisionSource::Baseline);

    const auto counts = transition_counts(graph, observed_states);
    std::optional<std::pair<std::size_t, ModelId>> best;
    for (auto it = counts.lower_bound({current, 0}); it != counts.end() && it->first.first == current; ++it) {
        if (!best || it->second > best->first) best = std::make_pair(it->second, it->first.second);
    }
    return make_decision(current, best ? best->second : current, DecisionSource::Baseline);
}

SelectorDecision parse_reply(std::string_view text, ModelId current_model, std::size_t library_size) {
    static const std::regex no_re(R"(^no[.!]?$)", std::regex::icase);
    static const std::regex yes_re(R"(^yes,?\s+model\s+([0-9]+)[.!]?$)", std::regex::icase);
    const auto cleaned = strip_fences(text);
    std::smatch match;
    if (std::regex_match(cleaned, match, no_re)) return make_decision(current_model, current_model, DecisionSource::Remote);
    if (std::regex_match(cleaned, match, yes_re)) {
        const auto digits = match[1].str();
        const auto id = digits.size() > 9 ? std::numeric_limits<unsigned long long>::max() : std::stoull(digits);
        if (id >= library_size)
            throw Error(ErrorCode::OutOfRangeModel,
                        "reply names model " + digits + " but the library has " + std::to_string(library_size));
        return make_decision(current_model, static_cast<ModelId>(id), DecisionSource::Remote);
    }
    throw Error(ErrorCode::ParseFailure, "unparseable reply: " + std::string(text));
}

SelectorDecision BaselineSelector::decide(const SelectionRequest& request) {
    return baseline_decide(request.series, request.target_interval, request.graph, request.assignments);
}

SelectorDecision ScriptedSelector::decide(const SelectionRequest& request) {
    const auto current = current_model_of(request.assignments, request.series, request.target_interval);
    const auto next = script_(request.series, request.target_interval);
    if (next >= request.library_size) throw Error(ErrorCode::OutOfRangeModel, "scripted model id outside the library");
    return make_decision(current, next, DecisionSource::Forced);
}

void SelectorEndpointConfig::validate() const {
    if (timeout.count() <= 0) throw Error(ErrorCode::InvalidArgument, "timeout must be positive");
    if (max_retries < 0) throw Error(ErrorCode::InvalidArgument, "max_retries must be nonnegative");
    if (base_url.empty()) throw Error(ErrorCode::InvalidArgument, "endpoint URL is empty");
}

std::vector<Exemplar> collect_exemplars(const SelectionRequest& request, std::size_t count) {
    std::vector<Exemplar> out;
    const auto observed = std::min(request.observed_intervals, request.assignments.interval_count());
    // Most recent labeled windows first; within one interval, series in index order.
    for (std::size_t target = observed; target-- > request.q && out.size() < count;) {
        for (std::size_t other = 0; other < request.assignments.series_count() && out.size() < count; ++other) {
            if (other == request.series) continue;
            auto nar = serialize(other, target, request.q, request.graph, request.assignments, request.narrative);
            const auto& row = request.assignments.entries[other];
            out.push_back({std::move(nar), answer_for(row[target - 1], row[target])});
        }
    }
    return out;
}

std::string build_prompt(const Narrative& narrative, const std::vector<Exemplar>& exemplars) {
    if (exemplars.empty()) return narrative.text;
    std::ostringstream out;
    out << "Solved examples from other series:\n\n";
    for (std::size_t k = 0; k < exemplars.size(); ++k)
        out << "Example " << k + 1 << ":\n" << exemplars[k].narrative.text << "\nAnswer: " << exemplars[k].answer << "\n\n";
    out << "Now answer for the target series.\n\n" << narrative.text;
    return out.str();
}

std::string build_request_body(const SelectorEndpointConfig& cfg, const std::string& user_content) {
    nlohmann::json body = {
        {"model", cfg.model_name},
        {"messages",
         nlohmann::json::array({{{"role", "system"}, {"content", std::string(kSystemInstruction)}},
                                {{"role", "user"}, {"content", user_content}}})},
        {"temperature", 0},
    };
    return body.dump();
}

std::string extract_reply(const std::string& response_body) {
    const auto doc = nlohmann::json::parse(response_body, nullptr, false);
    if (doc.is_discarded()) throw Error(ErrorCode::ParseFailure, "response is not JSON: " + response_body);
    try {
        return doc.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception&) {
        throw Error(ErrorCode::ParseFailure, "response lacks choices[0].message.content: " + response_body);
    }
}

SelectorDecision remote_decide(const std::string& prompt, ModelId current_model, std::size_t library_size,
                               const SelectorEndpointConfig& cfg, ChatTransport& transport,
                               const std::function<SelectorDecision()>& fallback,
                               const std::function<void(std::chrono::milliseconds)>& sleep) {
    cfg.validate();
    const char* key = cfg.api_key_env_var.empty() ? nullptr : std::getenv(cfg.api_key_env_var.c_str());
    const std::string api_key = key ? key : "";
    const auto body = build_request_body(cfg, prompt);

    std::string last_failure;
    auto backoff = cfg.initial_backoff;
    for (int attempt = 0; attempt <= cfg.max_retries; ++attempt) {
        if (attempt > 0) {
            if (sleep) sleep(backoff);
            else std::this_thread::sleep_for(backoff);
            backoff *= 2;
        }
        bool retryable = true;
        try {
            const auto response = transport.post_json(body, api_key, cfg.timeout);
            if (response.status >= 200 && response.status < 300) {
                auto decision = parse_reply(extract_reply(response.body), current_model, library_size);
                decision.rationale = "remote reply";
                return decision;
            }
            last_failure = "HTTP status " + std::to_string(response.status);
            retryable = response.status == 429 || response.status >= 500;
        } catch (const TransportFailure& e) {
            last_failure = e.what();
        }
        if (!retryable) break;
    }

    if (cfg.fallback_to_baseline && fallback) {
        auto decision = fallback();
        decision.source = DecisionSource::Fallback;
        decision.rationale = "endpoint failed: " + last_failure;
        return decision;
    }
    throw Error(ErrorCode::Transport, "selector endpoint failed after " + std::to_string(cfg.max_retries + 1) +
                                          " attempts: " + last_failure);
}

RemoteSelector::RemoteSelector(SelectorEndpointConfig cfg, std::unique_ptr<ChatTransport> transport, Sleeper sleep)
    : cfg_(std::move(cfg)), transport_(std::move(transport)), sleep_(std::move(sleep)) {
    cfg_.validate();
    if (!transport_) throw Error(ErrorCode::InvalidArgument, "remote selector needs a transport");
}

SelectorDecision RemoteSelector::decide(const SelectionRequest& request) {
    const auto current = current_model_of(request.assignments, request.series, request.target_interval);
    const auto narrative =
        serialize(request.series, request.target_interval, request.q, request.graph, request.assignments, request.narrative);
    std::vector<Exemplar> exemplars;
    if (cfg_.mode == PromptMode::ExemplarFewShot) exemplars = collect_exemplars(request, cfg_.exemplar_count);
    const auto fallback = [&] {
        return baseline_decide(request.series, request.target_interval, request.graph, request.assignments);
    };
    return remote_decide(build_prompt(narrative, exemplars), current, request.library_size, cfg_, *transport_, fallback,
                         sleep_);
}

}  // namespace caarl
