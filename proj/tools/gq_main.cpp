// Experiment runner: validates a config, executes the requested experiment
// and writes JSON + CSV reports. Exit codes: 0 all checks pass, 1 a
// numerical gate failed (report still written), 2 config/schema error.

#include <cstdlib>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "gq/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"geomquant experiment workbench"};
  app.require_subcommand(1);

  std::string config_path, out_dir, tag;
  double tol_scale = 0.0;
  int threads = 0;

  auto* run = app.add_subcommand("run", "run an experiment from a config file");
  run->add_option("config", config_path, "key = value config file")->required();
  run->add_option("--out", out_dir, "output directory (default: config value, else $GQ_OUT_DIR, else .)");
  run->add_option("--threads", threads, "worker threads for embarrassingly parallel loops");
  run->add_option("--tolerance-scale", tol_scale, "scale every tolerance by this factor");
  run->add_option("--tag", tag, "suffix for report file names");

  auto* list = app.add_subcommand("list-models", "list bundled models, loop families and presets");
  auto* schema = app.add_subcommand("schema", "print the config key schema");

  CLI11_PARSE(app, argc, argv);

  if (list->parsed()) {
    std::cout << gq::list_models_text();
    return 0;
  }
  if (schema->parsed()) {
    std::cout << gq::ExperimentConfig::schema_text() << "\n";
    return 0;
  }

  gq::ExperimentConfig cfg;
  try {
    cfg = gq::ExperimentConfig::parse_file(config_path);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  if (tol_scale > 0.0) cfg.tolerance_scale = tol_scale;
  if (threads > 0) cfg.threads = threads;
  if (!out_dir.empty()) {
    cfg.out_dir = out_dir;
  } else if (cfg.out_dir == ".") {
    if (const char* env = std::getenv("GQ_OUT_DIR")) cfg.out_dir = env;
  }

  try {
    std::filesystem::create_directories(cfg.out_dir);
    gq::Report rep = gq::run_experiment(cfg);
    std::string base = cfg.out_dir + "/" + rep.experiment +
                       (tag.empty() ? "" : "_" + tag);
    gq::write_report_json(rep, base + ".json");
    gq::write_report_csv(rep, base + ".csv");
    for (const auto& c : rep.checks) {
      std::cout << (c.informational ? "INFO " : (c.pass ? "PASS " : "FAIL "))
                << c.criterion << " " << c.name << " value=" << c.value;
      if (!c.informational) std::cout << " tol=" << c.tol;
      std::cout << "\n";
    }
    std::cout << (rep.pass() ? "ALL CHECKS PASSED" : "SOME CHECKS FAILED") << "\n";
    return rep.pass() ? 0 : 1;
  } catch (const gq::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
