#include "caarl/error.hpp"
#include "caarl/narrate.hpp"

#include <doctest.h>

#include <regex>

using namespace caarl;

namespace {

AssignmentMatrix matrix(std::vector<std::vector<ModelId>> e) {
    AssignmentMatrix a;
    a.entries = std::move(e);
    return a;
}

}  // namespace

TEST_CASE("constant trail says it remained") {
    const auto a = matrix({{3, 3, 3, 3}});
    const auto g = build_graph(a);
    const std::vector<std::string> ids{"S1"};
    const std::vector<std::string> ts;
    const auto grid = build_grid(40, 10, 10);
    const auto nar = serialize(0, 4, 2, g, a, {ids, ts, grid});
    REQUIRE(nar.facts.size() == 2);
    CHECK(nar.facts[0].switched == false);
    CHECK(nar.facts[1].switched == false);
    CHECK(nar.text.find("remained governed by model 3") != std::string::npos);
    CHECK(nar.text.find("at interval T5?") != std::string::npos);
    CHECK(nar.template_version == "template_v1");
}

TEST_CASE("first interval fact has no switch flag and lists co-assigned series") {
    const auto a = matrix({{0, 1}, {0, 0}});
    const auto g = build_graph(a);
    const std::vector<std::string> ids{"S1", "S2"};
    const std::vector<std::string> ts;
    const auto grid = build_grid(20, 10, 10);
    const auto nar = serialize(0, 1, 1, g, a, {ids, ts, grid});
    REQUIRE(nar.facts.size() == 1);
    CHECK(nar.facts[0].interval == 0);
    CHECK(nar.facts[0].model == 0);
    CHECK(nar.facts[0].co_assigned == std::vector<std::string>{"S2"});
    CHECK_FALSE(nar.facts[0].switched.has_value());
    CHECK(nar.text ==
          "Trajectory of series S1 from interval T1 to T1.\n"
          "During interval T1 (timestamps 0 to 9), series S1 was approximated by model 0; the same model also "
          "approximated: S2.\n"
          "Which model will approximate series S1 at interval T2? Answer 'no' if the current model persists, "
          "otherwise 'yes, model <id>'.");
}

TEST_CASE("switch clause and timestamp labels") {
    const auto a = matrix({{0, 1, 1}, {2, 2, 2}});
    const auto g = build_graph(a);
    const std::vector<std::string> ids{"A", "B"};
    std::vector<std::string> ts;
    for (int t = 0; t < 6; ++t) ts.push_back("d" + std::to_string(t));
    const auto grid = build_grid(6, 2, 2);
    const auto nar = serialize(0, 3, 2, g, a, {ids, ts, grid});
    CHECK(nar.text.find("It switched from model 0 to model 1.") != std::string::npos);
    CHECK(nar.text.find("(d2 to d3)") != std::string::npos);
    CHECK(nar.text.find("no other series") != std::string::npos);
}

TEST_CASE("serialization is deterministic and faithful") {
    const auto a = matrix({{0, 1, 1, 2, 0, 1}, {1, 1, 0, 2, 2, 1}, {0, 0, 0, 1, 1, 1}});
    const auto g = build_graph(a);
    const std::vector<std::string> ids{"x", "y", "z"};
    const std::vector<std::string> ts;
    const auto grid = build_grid(60, 10, 10);
    const NarrativeContext ctx{ids, ts, grid};
    const auto first = serialize(1, 6, 5, g, a, ctx);
    for (int k = 0; k < 50; ++k) CHECK(serialize(1, 6, 5, g, a, ctx).text == first.text);
    const std::regex approx(R"(interval T(\d+) .*?approximated by model (\d+))");
    std::size_t seen = 0;
    for (auto it = std::sregex_iterator(first.text.begin(), first.text.end(), approx); it != std::sregex_iterator(); ++it) {
        const auto j = std::stoul((*it)[1]) - 1;
        CHECK(std::stoul((*it)[2]) == a.entries[1][j]);
        ++seen;
    }
    CHECK(seen == 5);
}

TEST_CASE("history and range checks") {
    const auto a = matrix({{0, 0, 0}});
    const auto g = build_graph(a);
    const std::vector<std::string> ids{"S1"};
    const std::vector<std::string> ts;
    const auto grid = build_grid(30, 10, 10);
    const NarrativeContext ctx{ids, ts, grid};
    try {
        serialize(0, 2, 3, g, a, ctx);
        FAIL("no error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InsufficientHistory);
    }
    CHECK_THROWS_AS(serialize(0, 4, 1, g, a, ctx), Error);
    CHECK_THROWS_AS(serialize(1, 2, 1, g, a, ctx), Error);
}

TEST_CASE("long co-assignment lists are truncated") {
    std::vector<std::vector<ModelId>> e(25, std::vector<ModelId>{0, 0});
    const auto a = matrix(e);
    const auto g = build_graph(a);
    std::vector<std::string> ids;
    for (int i = 0; i < 25; ++i) ids.push_back("S" + std::to_string(100 + i));
    const std::vector<std::string> ts;
    const auto grid = build_grid(20, 10, 10);
    const auto nar = serialize(0, 2, 1, g, a, {ids, ts, grid});
    CHECK(nar.facts[0].co_assigned.size() == 24);
    CHECK(nar.text.find("and 4 more") != std::string::npos);
}
