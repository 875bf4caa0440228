#include "caarl/error.hpp"
#include "caarl/select.hpp"

#include "oracles.hpp"
#include "stub_server.hpp"

#include <doctest.h>

#include <cstdlib>
#include <random>

using namespace caarl;
using namespace std::chrono_literals;

namespace {

AssignmentMatrix matrix(std::vector<std::vector<ModelId>> e) {
    AssignmentMatrix a;
    a.entries = std::move(e);
    return a;
}

ErrorCode parse_error(std::string_view text, std::size_t k) {
    try {
        parse_reply(text, 0, k);
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::Empty;
}

struct Fixture {
    AssignmentMatrix a = matrix({{0, 0, 1, 1}, {0, 1, 1, 1}, {2, 2, 2, 0}});
    TemporalGraph g = build_graph(a);
    std::vector<std::string> ids{"S1", "S2", "S3"};
    std::vector<std::string> ts;
    TimeGrid grid = build_grid(40, 10, 10);

    SelectionRequest request(std::size_t series, std::size_t target, std::size_t q = 2) const {
        return {series, target, g, a, 3, {ids, ts, grid}, q, a.interval_count()};
    }
};

}  // namespace

TEST_CASE("baseline persistence and argmax") {
    SUBCASE("only self edges") {
        const auto a = matrix({{0, 0, 0}});
        CHECK(baseline_decide(0, 2, build_graph(a), a) == SelectorDecision{false, 0, std::nullopt, DecisionSource::Baseline});
    }
    SUBCASE("counts favour a switch; later columns are ignored") {
        std::vector<std::vector<ModelId>> e{{0, 1, 0}, {0, 1, 0}, {0, 1, 0}, {0, 0, 0}};
        for (int k = 0; k < 5; ++k) e.push_back({1, 0, 0});
        const auto a = matrix(e);
        const auto d = baseline_decide(3, 2, build_graph(a), a);
        CHECK(d.switch_model);
        CHECK(d.model == 1);
    }
    SUBCASE("tie goes to the lowest id") {
        const auto a = matrix({{0, 0, 5}, {0, 0, 5}, {0, 1, 5}, {0, 1, 5}, {1, 0, 5}});
        const auto d = baseline_decide(4, 2, build_graph(a), a);
        CHECK_FALSE(d.switch_model);
        CHECK(d.model == 0);
    }
    SUBCASE("target without a predecessor") {
        const auto a = matrix({{0, 0}});
        CHECK_THROWS_AS(baseline_decide(0, 0, build_graph(a), a), Error);
    }
}

TEST_CASE("baseline equals the exhaustive tally") {
    std::mt19937_64 rng(99);
    for (int rep = 0; rep < 300; ++rep) {
        const std::size_t n = 1 + rng() % 5, m = 2 + rng() % 6, k = 1 + rng() % 3;
        const auto e = oracle::random_entries(rng, n, m, k);
        const auto a = matrix(e);
        const auto g = build_graph(a);
        const std::size_t series = rng() % n;
        const std::size_t target = 1 + rng() % m;  // up to m: the next unseen interval
        const auto d = baseline_decide(series, target, g, a);
        const auto expected = oracle::tally_decide(e, series, target);
        CHECK(d.model == expected);
        CHECK(d.switch_model == (expected != e[series][target - 1]));
    }
}

TEST_CASE("parse_reply grammar") {
    CHECK(parse_reply("no", 4, 10) == SelectorDecision{false, 4, std::nullopt, DecisionSource::Remote});
    CHECK(parse_reply("No.", 2, 10).model == 2);
    CHECK(parse_reply("  NO!  ", 2, 10).switch_model == false);
    CHECK(parse_reply("Yes, model 7", 1, 10) == SelectorDecision{true, 7, std::nullopt, DecisionSource::Remote});
    CHECK(parse_reply("yes model 3.", 1, 10).model == 3);
    CHECK(parse_reply("```\nyes, model 3\n```", 1, 10).model == 3);
    CHECK(parse_reply("```text\nno\n```", 1, 10).model == 1);
    CHECK(parse_reply("`no`", 1, 10).model == 1);
    // Naming the current model is a persistence answer in disguise.
    CHECK_FALSE(parse_reply("yes, model 1", 1, 10).switch_model);
    CHECK(parse_error("yes, model 12", 10) == ErrorCode::OutOfRangeModel);
    CHECK(parse_error("yes, model 99999999999999999999", 10) == ErrorCode::OutOfRangeModel);
    CHECK(parse_error("maybe later", 10) == ErrorCode::ParseFailure);
    CHECK(parse_error("no, model 3", 10) == ErrorCode::ParseFailure);
    CHECK(parse_error("yes", 10) == ErrorCode::ParseFailure);
    CHECK(parse_error("", 10) == ErrorCode::ParseFailure);
}

TEST_CASE("request body shape") {
    SelectorEndpointConfig cfg;
    cfg.model_name = "m1";
    const auto body = nlohmann::json::parse(build_request_body(cfg, "hello"));
    CHECK(body["model"] == "m1");
    CHECK(body["temperature"] == 0);
    CHECK(body["messages"].size() == 2);
    CHECK(body["messages"][0]["role"] == "system");
    CHECK(body["messages"][1]["content"] == "hello");
}

TEST_CASE("extract_reply") {
    CHECK(extract_reply(R"({"choices":[{"message":{"content":"no"}}]})") == "no");
    CHECK_THROWS_AS(extract_reply("not json"), Error);
    CHECK_THROWS_AS(extract_reply(R"({"choices":[]})"), Error);
}

TEST_CASE("exemplars come from other series with correct answers") {
    Fixture f;
    const auto ex = collect_exemplars(f.request(0, 4), 8);
    REQUIRE_FALSE(ex.empty());
    for (const auto& e : ex) {
        CHECK(e.narrative.series_id != "S1");
        const auto s = f.a.entries[e.narrative.series_id == "S2" ? 1 : 2];
        const auto t = e.narrative.target_interval;
        CHECK(e.answer == (s[t] == s[t - 1] ? "no" : "yes, model " + std::to_string(s[t])));
    }
    CHECK(collect_exemplars(f.request(0, 4), 1).size() == 1);
    const auto prompt = build_prompt(serialize(0, 4, 2, f.g, f.a, {f.ids, f.ts, f.grid}), ex);
    CHECK(prompt.find("Example 1:") != std::string::npos);
    CHECK(prompt.rfind("Which model will approximate series S1 at interval T5?") != std::string::npos);
}

TEST_CASE("remote selector against a stub endpoint") {
    Fixture f;
    SelectorEndpointConfig cfg;
    cfg.model_name = "stub-model";
    cfg.api_key_env_var = "CAARL_TEST_KEY_UNSET";

    SUBCASE("reply is parsed and request is temperature 0") {
        stub::ChatServer server({{200, "yes, model 2"}});
        cfg.base_url = server.base_url();
        RemoteSelector sel(cfg, make_http_transport(cfg.base_url));
        const auto d = sel.decide(f.request(0, 4));
        CHECK(d.model == 2);
        CHECK(d.switch_model);
        CHECK(d.source == DecisionSource::Remote);
        const auto reqs = server.requests();
        REQUIRE(reqs.size() == 1);
        const auto body = nlohmann::json::parse(reqs[0]);
        CHECK(body["temperature"] == 0);
        CHECK(body["model"] == "stub-model");
        CHECK(body["messages"][1]["content"].get<std::string>().find("series S1 at interval T5") != std::string::npos);
        CHECK(server.auth_headers()[0].empty());
    }
    SUBCASE("bearer key from the configured variable") {
        stub::ChatServer server({{200, "no"}});
        cfg.base_url = server.base_url();
        cfg.api_key_env_var = "CAARL_TEST_KEY";
        ::setenv("CAARL_TEST_KEY", "secret", 1);
        RemoteSelector sel(cfg, make_http_transport(cfg.base_url));
        sel.decide(f.request(0, 4));
        ::unsetenv("CAARL_TEST_KEY");
        CHECK(server.auth_headers()[0] == "Bearer secret");
    }
    SUBCASE("retries with doubling backoff") {
        stub::ChatServer server({{503, ""}, {429, ""}, {200, "no"}});
        cfg.base_url = server.base_url();
        std::vector<std::chrono::milliseconds> slept;
        RemoteSelector sel(cfg, make_http_transport(cfg.base_url), [&](auto d) { slept.push_back(d); });
        const auto d = sel.decide(f.request(0, 4));
        CHECK(d.model == 1);
        CHECK(server.requests().size() == 3);
        CHECK(slept == std::vector<std::chrono::milliseconds>{1000ms, 2000ms});
    }
    SUBCASE("client errors are not retried") {
        stub::ChatServer server({{400, ""}, {200, "no"}});
        cfg.base_url = server.base_url();
        RemoteSelector sel(cfg, make_http_transport(cfg.base_url), [](auto) {});
        CHECK_THROWS_AS(sel.decide(f.request(0, 4)), Error);
        CHECK(server.requests().size() == 1);
    }
    SUBCASE("fallback to the baseline") {
        stub::ChatServer server({{500, ""}, {500, ""}, {500, ""}, {500, ""}});
        cfg.base_url = server.base_url();
        cfg.fallback_to_baseline = true;
        RemoteSelector sel(cfg, make_http_transport(cfg.base_url), [](auto) {});
        const auto d = sel.decide(f.request(0, 4));
        CHECK(d.source == DecisionSource::Fallback);
        CHECK(d.model == baseline_decide(0, 4, f.g, f.a).model);
    }
    SUBCASE("exhausted retries without fallback surface Transport") {
        stub::ChatServer server({{500, ""}, {500, ""}});
        cfg.base_url = server.base_url();
        cfg.max_retries = 1;
        RemoteSelector sel(cfg, make_http_transport(cfg.base_url), [](auto) {});
        try {
            sel.decide(f.request(0, 4));
            FAIL("no error");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::Transport);
        }
    }
    SUBCASE("few-shot prompt carries exemplars") {
        stub::ChatServer server({{200, "no"}});
        cfg.base_url = server.base_url();
        cfg.mode = PromptMode::ExemplarFewShot;
        cfg.exemplar_count = 2;
        RemoteSelector sel(cfg, make_http_transport(cfg.base_url));
        sel.decide(f.request(0, 4));
        const auto body = nlohmann::json::parse(server.requests()[0]);
        const auto content = body["messages"][1]["content"].get<std::string>();
        CHECK(content.find("Example 2:") != std::string::npos);
        CHECK(content.find("Example 3:") == std::string::npos);
    }
}

TEST_CASE("unreachable endpoint is a transport failure") {
    Fixture f;
    SelectorEndpointConfig cfg;
    cfg.base_url = "http://127.0.0.1:1/v1";
    cfg.timeout = 500ms;
    cfg.max_retries = 1;
    RemoteSelector sel(cfg, make_http_transport(cfg.base_url), [](auto) {});
    try {
        sel.decide(f.request(0, 4));
        FAIL("no error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Transport);
    }
}
