#pragma once

#include "caarl/forecast.hpp"
#include "caarl/io.hpp"
#include "caarl/select.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace caarl::cli {

inline constexpr std::string_view kVersion = "0.1.0";

/// Bad flags or out-of-range settings; maps to exit code 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class SelectorKind { Baseline, Remote };

/// Every tunable of a run. Resolution order: defaults, then the --config file, then flags.
struct RunConfig {
    std::string input;
    std::string state;
    std::string out;
    std::size_t lag = 2;
    std::size_t interval_length = 0;  // 0 selects automatic segmentation
    std::size_t stride = 0;           // 0 means floor(interval_length / 2)
    bool auto_segment = false;
    std::vector<std::size_t> candidates{25, 50, 100, 200};
    double threshold = 0.1;
    double epsilon = 0.3;
    double tau = 0.1;
    std::optional<std::size_t> k_max;
    std::size_t q = kDefaultWindow;
    SelectorKind selector = SelectorKind::Baseline;
    SelectorEndpointConfig endpoint;
    std::size_t horizon = 1;
    std::size_t holdout = 0;
    std::uint64_t seed = 0;

    void validate() const;
    PipelineConfig pipeline() const;
    Json to_json() const;
};

/// Applies the keys of a config document onto `cfg`; unknown keys are usage errors.
void apply_config_json(RunConfig& cfg, const Json& doc);

/// Entry point shared by the executable and the tests. argv excludes the program name.
int run_subcommand(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace caarl::cli
