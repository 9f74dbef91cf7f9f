#pragma once

// Run configuration for the ringqpe command-line tool.
//
// File grammar (one documented format, see README):
//   # comment            ; comment
//   [section]
//   key = value
// Sections: [physics] [gauge] [numerics] [output]. Lists are separated by
// commas or whitespace. Unknown sections or keys are errors reported with
// their field path ("numerics.grid").

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ringqpe/core.hpp"

namespace ringqpe::cli {

// Invalid configuration; what() starts with the offending field path.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(field) {}
  [[nodiscard]] const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

struct GaugeBlock {
  int dim = 0;
  std::vector<double> matrix;        // row-major (re, im) pairs, 2 N^2 values
  std::vector<double> coefficients;  // N^2 generator coefficients
  std::optional<std::uint64_t> random_seed;
  double random_scale = 1.0;
};

struct RunConfig {
  RingConfig physics{1.0, 1.0, 1.0, 1.0, 0.7};
  std::optional<GaugeBlock> gauge;

  // Unset numerics take per-command defaults (see README).
  std::optional<int> cutoff;          // l
  std::optional<int> grid;            // G
  std::optional<int> t_qubits;
  int samples = 0;
  std::uint64_t seed = 0;
  std::vector<double> times_tr{0.0, 0.70710678118654752, 1.0};  // evolve times in units of t_R
  std::optional<int> steps;
  std::optional<int> winding_cutoff;
  double regulator = 1e-3;
  std::optional<double> dt;
  double dphi = 0.3;
  std::vector<double> hbar_values{1.0, 0.1, 0.01};
  std::vector<int> scan_steps{100, 1000, 10000};
  std::optional<double> epsilon;      // tent scale; 2/N per row when unset

  std::string out_dir = "ringqpe_out";
  std::vector<std::string> formats{"csv", "json", "svg"};

  [[nodiscard]] bool wants(const std::string& format) const;
};

// Parses the text of a config file on top of `base`.
void apply_config_text(RunConfig& config, const std::string& text);

// Reads and parses a config file; unreadable files raise ConfigError on "config".
void apply_config_file(RunConfig& config, const std::string& path);

// Sets one "section.key" field from its string value (used by files and flags).
void set_field(RunConfig& config, const std::string& section, const std::string& key,
               const std::string& value);

// Parses "csv,json" into a validated format list.
[[nodiscard]] std::vector<std::string> parse_formats(const std::string& text);

// Checks cross-field invariants common to every command.
void validate(const RunConfig& config);

}  // namespace ringqpe::cli
