#include "report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <sstream>

#include "json.hpp"
#include "sparsedom/io.hpp"

namespace sparsedom::tools {

namespace {

using json = nlohmann::json;

constexpr const char* kSchema = "sparsedom-report/1";

json num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double get_num(const json& j) {
  if (j.is_number()) return j.get<double>();
  const auto s = j.get<std::string>();
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  if (s == "nan") return NAN;
  throw std::invalid_argument("bad number '" + s + "'");
}

template <class T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

json config_json(const ExperimentConfig& c) {
  return json{{"id", c.id},
              {"depth", opt(c.depth)},
              {"r", c.r ? json(ratio_string(*c.r)) : json(nullptr)},
              {"seed", c.seed},
              {"reps", opt(c.reps)},
              {"threads", c.threads},
              {"format", c.format},
              {"operator", c.operator_path},
              {"weight", c.weight_path},
              {"p", opt(c.p)},
              {"q", opt(c.q)},
              {"t", opt(c.t)},
              {"s", opt(c.s)},
              {"n", opt(c.n)}};
}

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

// Reports without per-point data are flattened to one row per check.
std::vector<Table> data_tables(const ExperimentReport& rep) {
  if (!rep.tables.empty()) return rep.tables;
  Table t{"checks", {"index", "best_constant", "proof_constant", "pass"}, {}};
  for (std::size_t i = 0; i < rep.checks.size(); ++i) {
    const auto& d = rep.checks[i];
    t.rows.push_back({double(i), d.best_constant, d.proof_constant.value_or(NAN), d.pass ? 1.0 : 0.0});
  }
  return {t};
}

std::string emit_json(const ExperimentReport& rep, bool with_timestamp) {
  json checks = json::array();
  for (const auto& d : rep.checks) checks.push_back(json::parse(to_json(d)));
  json summary = json::object();
  for (const auto& [k, v] : rep.summary) summary[k] = num(v);
  json tables = json::array();
  for (const auto& t : rep.tables) {
    json rows = json::array();
    for (const auto& r : t.rows) {
      json row = json::array();
      for (double v : r) row.push_back(num(v));
      rows.push_back(row);
    }
    tables.push_back(json{{"name", t.name}, {"columns", t.columns}, {"rows", rows}});
  }
  json out{{"schema", kSchema},
           {"experiment", rep.id},
           {"pass", rep.pass},
           {"seed", rep.config.seed},
           {"config", config_json(rep.config)},
           {"checks", checks},
           {"summary", summary},
           {"tables", tables},
           {"notes", rep.notes},
           {"environment",
            {{"library_version", "0.1.0"},
             {"compiler", __VERSION__},
             {"cxx_standard", __cplusplus}}}};
  if (with_timestamp) out["timestamp"] = timestamp();
  return out.dump(2) + "\n";
}

std::string emit_csv(const ExperimentReport& rep) {
  const auto tables = data_tables(rep);
  std::ostringstream os;
  for (std::size_t k = 0; k < tables.size(); ++k) {
    const auto& t = tables[k];
    if (tables.size() > 1) os << (k ? "\n" : "") << "# " << t.name << "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << csv_field(t.columns[i]);
    os << "\n";
    for (const auto& r : t.rows) {
      for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << fmt(r[i]);
      os << "\n";
    }
  }
  return os.str();
}

std::string emit_gnuplot(const ExperimentReport& rep) {
  const auto tables = data_tables(rep);
  std::ostringstream os;
  os << "# experiment " << rep.id << " seed " << rep.config.seed << " pass " << (rep.pass ? 1 : 0) << "\n";
  for (std::size_t k = 0; k < tables.size(); ++k) {
    const auto& t = tables[k];
    if (k) os << "\n\n";
    os << "# index " << k << ": " << t.name << "\n# columns:";
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << " " << i + 1 << "=" << t.columns[i];
    os << "\n";
    for (const auto& r : t.rows) {
      for (std::size_t i = 0; i < r.size(); ++i) os << (i ? " " : "") << fmt(r[i]);
      os << "\n";
    }
  }
  return os.str();
}

}  // namespace

std::string emit_report(const ExperimentReport& rep, const std::string& format, bool with_timestamp) {
  if (format == "json") return emit_json(rep, with_timestamp);
  if (format == "csv") return emit_csv(rep);
  if (format == "gnuplot-data") return emit_gnuplot(rep);
  throw ConfigError("unknown format '" + format + "'");
}

std::string validate_report_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    return std::string("not JSON: ") + e.what();
  }
  if (!j.is_object()) return "report is not an object";
  if (j.value("schema", "") != kSchema) return "missing or wrong schema tag";
  const std::pair<const char*, json::value_t> fields[] = {
      {"experiment", json::value_t::string}, {"pass", json::value_t::boolean},  {"config", json::value_t::object},
      {"checks", json::value_t::array},      {"summary", json::value_t::object}, {"tables", json::value_t::array},
      {"notes", json::value_t::array},       {"environment", json::value_t::object}};
  for (const auto& [name, type] : fields) {
    if (!j.contains(name)) return std::string("missing field '") + name + "'";
    if (j[name].type() != type) return std::string("field '") + name + "' has the wrong type";
  }
  if (!j.contains("seed") || !j["seed"].is_number_unsigned()) return "missing seed";
  bool all = true;
  for (const auto& d : j["checks"]) {
    for (const char* k : {"inequality", "best_constant", "witness", "proof_constant", "pass", "measured", "notes"})
      if (!d.contains(k)) return std::string("check without '") + k + "'";
    all = all && d["pass"].get<bool>();
  }
  if (all != j["pass"].get<bool>()) return "pass flag disagrees with the checks";
  for (const auto& t : j["tables"]) {
    const auto width = t.at("columns").size();
    for (const auto& r : t.at("rows"))
      if (r.size() != width) return "table row width mismatch in '" + t.at("name").get<std::string>() + "'";
  }
  return "";
}

ExperimentReport report_from_json_text(const std::string& text) {
  auto j = json::parse(text);
  ExperimentReport rep;
  rep.id = j.at("experiment").get<std::string>();
  rep.pass = j.at("pass").get<bool>();
  const auto& c = j.at("config");
  rep.config.id = c.at("id").get<std::string>();
  rep.config.seed = c.at("seed").get<std::uint64_t>();
  rep.config.threads = c.at("threads").get<int>();
  rep.config.format = c.at("format").get<std::string>();
  rep.config.operator_path = c.at("operator").get<std::string>();
  rep.config.weight_path = c.at("weight").get<std::string>();
  if (!c.at("depth").is_null()) rep.config.depth = c["depth"].get<int>();
  if (!c.at("reps").is_null()) rep.config.reps = c["reps"].get<int>();
  if (!c.at("r").is_null()) rep.config.r = parse_ratio(c["r"].get<std::string>());
  if (!c.at("n").is_null()) rep.config.n = c["n"].get<int>();
  for (auto [key, field] : {std::pair{"p", &rep.config.p}, {"q", &rep.config.q}, {"t", &rep.config.t}, {"s", &rep.config.s}})
    if (!c.at(key).is_null()) *field = c[key].get<double>();
  for (const auto& d : j.at("checks")) rep.checks.push_back(report_from_json(d.dump()));
  for (const auto& [k, v] : j.at("summary").items()) rep.summary[k] = get_num(v);
  for (const auto& t : j.at("tables")) {
    Table tab{t.at("name").get<std::string>(), t.at("columns").get<std::vector<std::string>>(), {}};
    for (const auto& r : t.at("rows")) {
      std::vector<double> row;
      for (const auto& v : r) row.push_back(get_num(v));
      tab.rows.push_back(std::move(row));
    }
    rep.tables.push_back(std::move(tab));
  }
  rep.notes = j.at("notes").get<std::vector<std::string>>();
  return rep;
}

}  // namespace sparsedom::tools
