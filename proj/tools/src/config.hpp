#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sparsedom/grid.hpp"

namespace sparsedom::tools {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Unset optionals mean "use the experiment default".
struct ExperimentConfig {
  std::string id;
  std::optional<int> depth;
  std::optional<Ratio> r;
  std::uint64_t seed = 1;
  std::optional<int> reps;
  int threads = 1;
  std::string out;  // empty: stdout
  std::string format = "json";
  std::string operator_path;
  std::string weight_path;
  std::optional<double> p, q, t, s;
  std::optional<int> n;
};

// "a/b" or a decimal with at most 9 fractional digits.
Ratio parse_ratio(const std::string& text);
std::string ratio_string(Ratio r);

const std::vector<std::string>& config_keys();

// key = value per line; '#' starts a comment; blank lines ignored.
std::map<std::string, std::string> parse_config_text(const std::string& text);
std::map<std::string, std::string> read_config_file(const std::string& path);

void apply_setting(ExperimentConfig& c, const std::string& key, const std::string& value);
// Range checks, known id and format, input files present.
void validate(const ExperimentConfig& c);

std::string read_file(const std::string& path);

}  // namespace sparsedom::tools
