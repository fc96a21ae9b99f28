#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "experiments.hpp"

namespace sparsedom::tools {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

template <class T>
T parse_int(const std::string& key, const std::string& v) {
  T out{};
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) throw ConfigError(key + ": not an integer: '" + v + "'");
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError(key + ": not a number: '" + v + "'");
  }
}

}  // namespace

Ratio parse_ratio(const std::string& text) {
  const std::string v = trim(text);
  const auto slash = v.find('/');
  std::int64_t num = 0, den = 1;
  if (slash != std::string::npos) {
    num = parse_int<std::int64_t>("r", trim(v.substr(0, slash)));
    den = parse_int<std::int64_t>("r", trim(v.substr(slash + 1)));
  } else {
    const auto dot = v.find('.');
    if (dot == std::string::npos) {
      num = parse_int<std::int64_t>("r", v);
    } else {
      const std::string frac = v.substr(dot + 1);
      if (frac.empty() || frac.size() > 9) throw ConfigError("r: bad decimal '" + v + "'");
      const std::string whole = v.substr(0, dot);
      for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
      num = (whole.empty() ? 0 : parse_int<std::int64_t>("r", whole)) * den + parse_int<std::int64_t>("r", frac);
    }
  }
  if (den <= 0) throw ConfigError("r: denominator must be positive");
  const std::int64_t g = std::gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return Ratio{num, den};
}

std::string ratio_string(Ratio r) { return std::to_string(r.num) + "/" + std::to_string(r.den); }

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{"depth", "r",        "seed",   "reps", "threads", "out", "format",
                                             "operator", "weight", "p",    "q",       "t",   "s",      "n"};
  return keys;
}

std::map<std::string, std::string> parse_config_text(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key != "id" && std::find(config_keys().begin(), config_keys().end(), key) == config_keys().end())
      throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    out[key] = value;
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  return parse_config_text(read_file(path));
}

void apply_setting(ExperimentConfig& c, const std::string& key, const std::string& value) {
  if (key == "id") c.id = value;
  else if (key == "depth") c.depth = parse_int<int>(key, value);
  else if (key == "r") c.r = parse_ratio(value);
  else if (key == "seed") c.seed = parse_int<std::uint64_t>(key, value);
  else if (key == "reps") c.reps = parse_int<int>(key, value);
  else if (key == "threads") c.threads = parse_int<int>(key, value);
  else if (key == "out") c.out = value;
  else if (key == "format") c.format = value;
  else if (key == "operator") c.operator_path = value;
  else if (key == "weight") c.weight_path = value;
  else if (key == "p") c.p = parse_double(key, value);
  else if (key == "q") c.q = parse_double(key, value);
  else if (key == "t") c.t = parse_double(key, value);
  else if (key == "s") c.s = parse_double(key, value);
  else if (key == "n") c.n = parse_int<int>(key, value);
  else throw ConfigError("unknown key '" + key + "'");
}

void validate(const ExperimentConfig& c) {
  const auto& ids = experiment_ids();
  if (std::find(ids.begin(), ids.end(), c.id) == ids.end()) throw ConfigError("unknown experiment id '" + c.id + "'");
  if (c.depth && (*c.depth < 1 || *c.depth > 16)) throw ConfigError("depth must be in [1, 16]");
  if (c.r && !c.r->valid_probability()) throw ConfigError("r must lie strictly between 0 and 1");
  if (c.reps && (*c.reps < 1 || *c.reps > 100000)) throw ConfigError("reps must be in [1, 100000]");
  if (c.threads < 1 || c.threads > 256) throw ConfigError("threads must be in [1, 256]");
  if (c.format != "json" && c.format != "csv" && c.format != "gnuplot-data")
    throw ConfigError("unknown format '" + c.format + "'");
  if (c.p && !(*c.p > 0.0)) throw ConfigError("p must be positive");
  if (c.q && !(*c.q > 1.0)) throw ConfigError("q must exceed 1");
  if (c.t && !(*c.t > 0.0)) throw ConfigError("t must be positive");
  if (c.s && !(*c.s >= 0.0 && *c.s <= 3.0)) throw ConfigError("s must be in [0, 3]");
  if (c.n && (*c.n < 0 || *c.n > 3)) throw ConfigError("n must be in [0, 3]");
  for (const auto* path : {&c.operator_path, &c.weight_path})
    if (!path->empty() && !std::filesystem::exists(*path)) throw ConfigError("missing input file '" + *path + "'");
}

}  // namespace sparsedom::tools
