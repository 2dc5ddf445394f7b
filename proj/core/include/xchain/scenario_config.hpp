#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "xchain/security.hpp"
#include "xchain/sim.hpp"

namespace xchain {

// Scenario files are JSON objects with the sections "topology", "chains",
// "consensus", "formats", "workloads", "injections", "run" and "security".
// Only "topology" is mandatory; chains default to one PoW chain per node.
// Every parse function throws InputError on malformed input.

std::string read_text_file(const std::filesystem::path& path);

Scenario parse_scenario(std::string_view json_text);
Scenario load_scenario(const std::filesystem::path& path);

// The "topology" section alone, for validation without a full scenario.
TopologySpec parse_topology(std::string_view json_text);

struct SecurityConfig {
    BreakProbabilities probabilities;
    std::vector<std::vector<ChainId>> sets;  // all chains when the file lists none
};

// The "security" section. Probabilities outside [0, 1] are reported by
// validate(), not here, so callers can tell parse errors from domain errors.
SecurityConfig parse_security(std::string_view json_text);

// Serializes every field parse_scenario reads; parse_scenario of the result
// reproduces the scenario.
std::string scenario_to_json(const Scenario& s);

}  // namespace xchain
