#include "run_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace ringqpe::cli {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string token;
  for (char c : text) {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!token.empty()) out.push_back(token);
      token.clear();
    } else {
      token += c;
    }
  }
  if (!token.empty()) out.push_back(token);
  return out;
}

double to_double(const std::string& field, const std::string& text) {
  double v = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw ConfigError(field, "expected a number, got '" + text + "'");
  }
  if (!std::isfinite(v)) throw ConfigError(field, "value must be finite");
  return v;
}

long long to_integer(const std::string& field, const std::string& text) {
  long long v = 0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw ConfigError(field, "expected an integer, got '" + text + "'");
  }
  return v;
}

int to_int(const std::string& field, const std::string& text, int lo, int hi) {
  const long long v = to_integer(field, text);
  if (v < lo || v > hi) {
    throw ConfigError(field, "must be in [" + std::to_string(lo) + ", " + std::to_string(hi) +
                                 "], got " + text);
  }
  return static_cast<int>(v);
}

std::uint64_t to_seed(const std::string& field, const std::string& text) {
  std::uint64_t v = 0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw ConfigError(field, "expected a non-negative integer, got '" + text + "'");
  }
  return v;
}

std::vector<double> to_doubles(const std::string& field, const std::string& text) {
  std::vector<double> out;
  for (const auto& token : split_list(text)) out.push_back(to_double(field, token));
  if (out.empty()) throw ConfigError(field, "expected a non-empty list");
  return out;
}

double positive(const std::string& field, double v) {
  if (!(v > 0.0)) throw ConfigError(field, "must be > 0");
  return v;
}

GaugeBlock& gauge_of(RunConfig& config) {
  if (!config.gauge) config.gauge.emplace();
  return *config.gauge;
}

}  // namespace

bool RunConfig::wants(const std::string& format) const {
  return std::find(formats.begin(), formats.end(), format) != formats.end();
}

std::vector<std::string> parse_formats(const std::string& text) {
  std::vector<std::string> out;
  for (const auto& token : split_list(text)) {
    if (token != "csv" && token != "json" && token != "svg") {
      throw ConfigError("output.formats", "unknown format '" + token + "' (use csv, json, svg)");
    }
    if (std::find(out.begin(), out.end(), token) == out.end()) out.push_back(token);
  }
  return out;
}

void set_field(RunConfig& config, const std::string& section, const std::string& key,
               const std::string& raw) {
  const std::string field = section + "." + key;
  const std::string value = trim(raw);
  auto& p = config.physics;

  if (section == "physics") {
    if (key == "hbar") p.hbar = positive(field, to_double(field, value));
    else if (key == "mass") p.mass = positive(field, to_double(field, value));
    else if (key == "radius") p.radius = positive(field, to_double(field, value));
    else if (key == "charge") p.charge = to_double(field, value);
    else if (key == "flux") p.flux = to_double(field, value);
    else throw ConfigError(field, "unknown key");
  } else if (section == "gauge") {
    auto& g = gauge_of(config);
    if (key == "dim") g.dim = to_int(field, value, 1, 16);
    else if (key == "matrix") g.matrix = to_doubles(field, value);
    else if (key == "coefficients") g.coefficients = to_doubles(field, value);
    else if (key == "random_seed") g.random_seed = to_seed(field, value);
    else if (key == "random_scale") g.random_scale = positive(field, to_double(field, value));
    else throw ConfigError(field, "unknown key");
  } else if (section == "numerics") {
    if (key == "cutoff") config.cutoff = to_int(field, value, 1, 1 << 20);
    else if (key == "grid") config.grid = to_int(field, value, 2, 1 << 22);
    else if (key == "t_qubits") config.t_qubits = to_int(field, value, 1, 20);
    else if (key == "samples") config.samples = to_int(field, value, 0, 100000000);
    else if (key == "seed") config.seed = to_seed(field, value);
    else if (key == "times") {
      config.times_tr = to_doubles(field, value);
      for (double t : config.times_tr) {
        if (t < 0.0) throw ConfigError(field, "times must be >= 0");
      }
    } else if (key == "steps") config.steps = to_int(field, value, 1, 1000000);
    else if (key == "winding_cutoff") config.winding_cutoff = to_int(field, value, 0, 100000);
    else if (key == "regulator") config.regulator = positive(field, to_double(field, value));
    else if (key == "dt") config.dt = positive(field, to_double(field, value));
    else if (key == "dphi") config.dphi = to_double(field, value);
    else if (key == "hbar_values") config.hbar_values = to_doubles(field, value);
    else if (key == "scan_steps") {
      config.scan_steps.clear();
      for (const auto& token : split_list(value)) {
        config.scan_steps.push_back(to_int(field, token, 2, 100000000));
      }
      if (config.scan_steps.empty()) throw ConfigError(field, "expected a non-empty list");
    } else if (key == "epsilon") config.epsilon = positive(field, to_double(field, value));
    else throw ConfigError(field, "unknown key");
  } else if (section == "output") {
    if (key == "dir") {
      if (value.empty()) throw ConfigError(field, "must not be empty");
      config.out_dir = value;
    } else if (key == "formats") {
      config.formats = parse_formats(value);
    } else {
      throw ConfigError(field, "unknown key");
    }
  } else {
    throw ConfigError(section, "unknown section");
  }
}

void apply_config_text(RunConfig& config, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::string section;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(number), "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "physics" && section != "gauge" && section != "numerics" && section != "output") {
        throw ConfigError(section, "unknown section");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(number), "expected key = value");
    if (section.empty()) throw ConfigError("line " + std::to_string(number), "key outside of a section");
    set_field(config, section, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
}

void apply_config_file(RunConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  apply_config_text(config, buffer.str());
}

void validate(const RunConfig& config) {
  try {
    config.physics.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("physics", e.what());
  }
  for (std::size_t i = 0; i < config.hbar_values.size(); ++i) {
    if (!(config.hbar_values[i] > 0.0)) throw ConfigError("numerics.hbar_values", "values must be > 0");
    if (i > 0 && !(config.hbar_values[i] < config.hbar_values[i - 1])) {
      throw ConfigError("numerics.hbar_values", "values must be strictly descending");
    }
  }
  if (config.formats.empty()) throw ConfigError("output.formats", "at least one format is required");
  if (config.gauge) {
    const auto& g = *config.gauge;
    if (g.dim < 1) throw ConfigError("gauge.dim", "required when a [gauge] block is present");
    const int sources = (g.matrix.empty() ? 0 : 1) + (g.coefficients.empty() ? 0 : 1) +
                        (g.random_seed ? 1 : 0);
    if (sources != 1) {
      throw ConfigError("gauge", "give exactly one of matrix, coefficients or random_seed");
    }
    const auto n2 = static_cast<std::size_t>(g.dim) * g.dim;
    if (!g.matrix.empty() && g.matrix.size() != 2 * n2) {
      throw ConfigError("gauge.matrix", "expected " + std::to_string(2 * n2) +
                                            " numbers (row-major re, im pairs), got " +
                                            std::to_string(g.matrix.size()));
    }
    if (!g.coefficients.empty() && g.coefficients.size() != n2) {
      throw ConfigError("gauge.coefficients", "expected " + std::to_string(n2) + " numbers, got " +
                                                  std::to_string(g.coefficients.size()));
    }
  }
}

}  // namespace ringqpe::cli
