#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "crsegre/input.hpp"

namespace crsegre {

/// Exit codes: 0 report produced, 2 parse error, 3 precondition violation,
/// 4 all requested verdicts inconclusive.
struct RunConfig {
    std::string command;
    std::vector<std::string> inputs;   // input file paths
    std::vector<std::string> names;    // object names the command acts on
    int order = 8;
    int kappa_max = 6;
    int gamma_bound = 4;
    int beta_bound = 4;
    int k_max = 8;
    int nu_max = 4;
    int family_size = 4;
    std::uint64_t seed = 1;
};

struct RunResult {
    std::string report;
    int exit_code = 0;
};

/// Dispatch a command against already-parsed inputs. Deterministic: the same
/// config and inputs produce byte-identical reports.
RunResult run_command(const RunConfig& cfg, const InputSet& inputs);

/// Convenience wrapper: parse the configured input files, then dispatch.
RunResult run_command(const RunConfig& cfg);

}  // namespace crsegre
