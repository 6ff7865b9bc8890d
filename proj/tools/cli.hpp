#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "diamond/kernels.hpp"
#include "diamond/params.hpp"

namespace diamond::cli {

// Everything a subcommand needs, merged from flags and an optional JSON
// config file. Flags win over the file.
struct RunConfig {
  std::string command;
  std::vector<std::uint64_t> j, n;
  std::optional<std::uint64_t> tail_j, tail_n;
  std::vector<double> times;
  std::optional<int> level;  // nullopt: F_infinity (limit) where supported
  int levels = 2;            // verify: checks run for F_1..F_levels
  int m = 200;
  double tol = 1e-12;
  std::string out;
  std::string pairs;  // path to a JSON list of point pairs
  std::uint64_t seed = 42;
  int jobs = 1;
};

// Thrown for malformed input; main maps it to exit status 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// "a:b:logN", "a:b:linN" or a comma separated list.
std::vector<double> parse_grid(const std::string& spec);

// Fills every field listed in the JSON object unless `explicit_keys` names
// it (those were set by flags). Unknown keys are a UsageError.
void merge_config_file(RunConfig& cfg, const std::string& json_text, const std::vector<std::string>& explicit_keys);

ParameterSequences make_sequences(const RunConfig& cfg);

// [{"x": {"theta": .., "labels": [..]}, "y": {..}}, ...], optionally wrapped
// as {"pairs": [...]}.
std::vector<KernelPair> parse_pairs(const std::string& json_text, const ParameterSequences& seq);

// Where a subcommand's artifact goes: --out, else $DIAMOND_OUTPUT_DIR/<default_name>,
// else empty (stdout).
std::string resolve_output(const RunConfig& cfg, const std::string& default_name);

// Subcommands; they return the process exit status.
int run_kernel(const RunConfig& cfg, std::ostream& artifact, std::ostream& log);
int run_bounds(const RunConfig& cfg, std::ostream& artifact, std::ostream& log);
int run_verify(const RunConfig& cfg, std::ostream& artifact, std::ostream& log);
int run_oracle_compare(const RunConfig& cfg, std::ostream& artifact, std::ostream& log);
int run_distance(const RunConfig& cfg, std::ostream& artifact, std::ostream& log);

int dispatch(const RunConfig& cfg, std::ostream& artifact, std::ostream& log);

}  // namespace diamond::cli
