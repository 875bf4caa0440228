#pragma once

#include "caarl/depgraph.hpp"
#include "caarl/identify.hpp"
#include "caarl/narrate.hpp"

#include <chrono>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace caarl {

enum class DecisionSource { Baseline, Remote, Fallback, Forced };

std::string_view to_string(DecisionSource source) noexcept;
DecisionSource decision_source_from_string(std::string_view text);

/// Answer to "does the series switch, and to which model?". switch_model == (model != current).
struct SelectorDecision {
    bool switch_model = false;
    ModelId model = 0;
    std::optional<std::string> rationale;
    DecisionSource source = DecisionSource::Baseline;

    friend bool operator==(const SelectorDecision&, const SelectorDecision&) = default;
};

/// Everything a selector may look at when deciding the model of `target_interval`.
struct SelectionRequest {
    std::size_t series = 0;
    std::size_t target_interval = 0;
    const TemporalGraph& graph;
    const AssignmentMatrix& assignments;
    std::size_t library_size = 0;
    NarrativeContext narrative;
    std::size_t q = kDefaultWindow;
    /// Intervals [0, observed_intervals) come from data; later columns are predictions.
    std::size_t observed_intervals = 0;
};

class Selector {
public:
    virtual ~Selector() = default;
    virtual SelectorDecision decide(const SelectionRequest& request) = 0;
};

/// First-order Markov argmax over transitions observed before `target_interval`
/// (ties to the lowest model id; persistence when the current model has no history).
SelectorDecision baseline_decide(std::size_t series, std::size_t target_interval, const TemporalGraph& graph,
                                 const AssignmentMatrix& assignments);

/// Accepts `no[.!]?` and `yes[,] model <int>[.!]?`, case-insensitive, after stripping whitespace
/// and markdown code fences.
SelectorDecision parse_reply(std::string_view text, ModelId current_model, std::size_t library_size);

class BaselineSelector final : public Selector {
public:
    SelectorDecision decide(const SelectionRequest& request) override;
};

/// Returns the id supplied by a callback, e.g. a known ground-truth schedule.
class ScriptedSelector final : public Selector {
public:
    using Script = std::function<ModelId(std::size_t series, std::size_t target_interval)>;
    explicit ScriptedSelector(Script script) : script_(std::move(script)) {}
    SelectorDecision decide(const SelectionRequest& request) override;

private:
    Script script_;
};

enum class PromptMode { ZeroShot, ExemplarFewShot };

struct SelectorEndpointConfig {
    std::string base_url = "https://api.openai.com/v1";
    std::string model_name = "gpt-4";
    std::string api_key_env_var = "OPENAI_API_KEY";
    std::chrono::milliseconds timeout{30000};
    int max_retries = 3;
    PromptMode mode = PromptMode::ZeroShot;
    bool fallback_to_baseline = false;
    std::size_t exemplar_count = 8;
    std::chrono::milliseconds initial_backoff{1000};

    void validate() const;
};

struct HttpResponse {
    int status = 0;
    std::string body;
};

/// Raised by transports for connection-level failures (refused, timeout, reset).
class TransportFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Minimal POST abstraction over the chat-completion endpoint.
class ChatTransport {
public:
    virtual ~ChatTransport() = default;
    virtual HttpResponse post_json(const std::string& body, const std::string& api_key,
                                   std::chrono::milliseconds timeout) = 0;
};

/// cpp-httplib backed transport posting to `<base_url>/chat/completions`.
std::unique_ptr<ChatTransport> make_http_transport(const std::string& base_url);

inline constexpr std::string_view kSystemInstruction =
    "You read trajectories of autoregressive models that approximate co-evolving time series. "
    "Each model is identified by an integer id. Reply with exactly 'no' if the series keeps its current "
    "model at the interval asked about, or 'yes, model <id>' naming the model it switches to. "
    "Reply with nothing else.";

struct Exemplar {
    Narrative narrative;
    std::string answer;
};

/// Labeled trajectories of other series used as in-context examples.
std::vector<Exemplar> collect_exemplars(const SelectionRequest& request, std::size_t count);

/// User message content: the narrative, preceded by solved exemplars when given.
std::string build_prompt(const Narrative& narrative, const std::vector<Exemplar>& exemplars);

/// JSON request body: model, [system, user] messages, temperature 0.
std::string build_request_body(const SelectorEndpointConfig& cfg, const std::string& user_content);

/// Extracts choices[0].message.content from a chat-completion response.
std::string extract_reply(const std::string& response_body);

/// Sends the prompt, retrying transient failures with exponential backoff. On exhausted retries
/// returns `fallback()` tagged Fallback when configured, otherwise throws Transport.
SelectorDecision remote_decide(const std::string& prompt, ModelId current_model, std::size_t library_size,
                               const SelectorEndpointConfig& cfg, ChatTransport& transport,
                               const std::function<SelectorDecision()>& fallback = {},
                               const std::function<void(std::chrono::milliseconds)>& sleep = {});

class RemoteSelector final : public Selector {
public:
    using Sleeper = std::function<void(std::chrono::milliseconds)>;
    RemoteSelector(SelectorEndpointConfig cfg, std::unique_ptr<ChatTransport> transport, Sleeper sleep = {});
    SelectorDecision decide(const SelectionRequest& request) override;

private:
    SelectorEndpointConfig cfg_;
    std::unique_ptr<ChatTransport> transport_;
    Sleeper sleep_;
};

}  // namespace caarl
