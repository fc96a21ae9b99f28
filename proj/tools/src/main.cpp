#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "config.hpp"
#include "experiments.hpp"
#include "report.hpp"
#include "sparsedom/io.hpp"

using namespace sparsedom;
using namespace sparsedom::tools;

namespace {

int write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write '" << path << "'\n";
    return 2;
  }
  out << text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparsedom: sparse domination audits"};
  app.require_subcommand(1);

  std::map<std::string, std::string> flags;
  std::string config_path;
  std::map<std::string, CLI::App*> subs;
  for (const auto& id : experiment_ids()) {
    auto* sub = app.add_subcommand(id, "run the " + id + " audit");
    for (const auto& key : config_keys()) sub->add_option("--" + key, flags[key]);
    sub->add_option("--config", config_path, "key = value file; flags override it");
    subs[id] = sub;
  }

  std::string gen_name, gen_format = "json", gen_out;
  int gen_depth = 8;
  std::uint64_t gen_seed = 1;
  double gen_param = 1.0;
  auto* gen = app.add_subcommand("generate", "write a named test function");
  gen->add_option("name", gen_name, "generator")->required();
  gen->add_option("--depth", gen_depth);
  gen->add_option("--seed", gen_seed);
  gen->add_option("--param", gen_param, "constant value or cube level");
  gen->add_option("--format", gen_format, "json | csv");
  gen->add_option("--out", gen_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (gen->parsed()) {
    try {
      if (gen_format != "json" && gen_format != "csv") throw ConfigError("unknown format '" + gen_format + "'");
      auto f = generate_function(gen_name, gen_depth, gen_seed, gen_param);
      return write_output(gen_format == "json" ? to_json(f) + "\n" : to_csv(f), gen_out);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
  }

  ExperimentConfig cfg;
  for (const auto& [id, sub] : subs) {
    if (!sub->parsed()) continue;
    cfg.id = id;
    try {
      std::map<std::string, std::string> settings;
      if (!config_path.empty()) settings = read_config_file(config_path);
      if (settings.count("id") && settings["id"] != id)
        throw ConfigError("config file is for '" + settings["id"] + "'");
      settings.erase("id");
      for (const auto& key : config_keys())
        if (sub->count("--" + key) > 0) settings[key] = flags[key];
      for (const auto& [k, v] : settings) apply_setting(cfg, k, v);
      validate(cfg);
    } catch (const ConfigError& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return 2;
    }
    ExperimentReport rep;
    try {
      rep = run_experiment(cfg);
    } catch (const ConfigError& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return 2;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
    if (int rc = write_output(emit_report(rep, cfg.format), cfg.out); rc != 0) return rc;
    for (const auto& d : rep.checks)
      if (!d.pass) std::cerr << "FAIL " << d.inequality << ": " << d.best_constant << "\n";
    return rep.pass ? 0 : 1;
  }
  return 2;
}
