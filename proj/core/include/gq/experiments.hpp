#pragma once

#include <map>

#include "gq/config.hpp"

namespace gq {

// One acceptance-style check: value compared against a tolerance (or a
// range when lo/hi are set). Every check cites the criterion it belongs to.
struct CheckRow {
  std::string criterion;  // e.g. "A3"
  std::string name;
  double value = 0.0;
  double tol = 0.0;
  bool pass = false;
  bool informational = false;
};

struct Report {
  std::string experiment;
  std::map<std::string, std::string> inputs;
  std::vector<CheckRow> checks;
  std::vector<std::string> csv_header;
  std::vector<std::vector<double>> csv_rows;

  bool pass() const {
    for (const auto& c : checks)
      if (!c.informational && !c.pass) return false;
    return true;
  }
  CheckRow& add(const std::string& crit, const std::string& name, double value,
                double tol, double scale = 1.0) {
    checks.push_back({crit, name, value, tol * scale, value <= tol * scale, false});
    return checks.back();
  }
  CheckRow& add_range(const std::string& crit, const std::string& name, double value,
                      double lo, double hi) {
    checks.push_back({crit, name, value, hi, value >= lo && value <= hi, false});
    return checks.back();
  }
  CheckRow& info(const std::string& crit, const std::string& name, double value) {
    checks.push_back({crit, name, value, 0.0, true, true});
    return checks.back();
  }
};

Report run_experiment(const ExperimentConfig& cfg);

Report run_axioms(const ExperimentConfig& cfg);
Report run_star(const ExperimentConfig& cfg);
Report run_lagrangian(const ExperimentConfig& cfg);
Report run_quasimode(const ExperimentConfig& cfg);
Report run_trace(const ExperimentConfig& cfg);
Report run_evolution(const ExperimentConfig& cfg);

void write_report_json(const Report& r, const std::string& path);
void write_report_csv(const Report& r, const std::string& path);
std::string list_models_text();

}  // namespace gq
