#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace reglaw {

struct experiment_error : std::runtime_error {
    explicit experiment_error(const std::string& what) : std::runtime_error(what) {}
};

// One configuration-driven run: a kind name, a validated parameter block,
// a seed, and resource caps. Unknown fields anywhere are rejected.
struct RunResult {
    int status = 0; // 0 pass, 2 inconclusive/fail
    nlohmann::ordered_json report;
    std::vector<std::pair<std::string, std::string>> csv_files; // name -> body
};

const std::vector<std::string>& experiment_kinds();
nlohmann::ordered_json experiment_schema(const std::string& kind);

// Schema check only; throws experiment_error on any problem.
void validate_config(const std::string& config_text);

// Parses and validates `config`, runs the pipeline, builds the report and the
// plot CSVs in memory. seed_override >= 0 replaces the config seed.
RunResult run_experiment(const std::string& config_text, int workers,
                         long long seed_override = -1);

// run_experiment plus artifacts: manifest.json (config echo, versions, seed,
// wall time), report.json, and one CSV per curve, written under out_dir.
// Returns the exit status: 0 pass, 2 inconclusive, 1 error (no partial files).
int run_to_directory(const std::string& config_text, const std::string& out_dir,
                     int workers, long long seed_override = -1);

} // namespace reglaw
