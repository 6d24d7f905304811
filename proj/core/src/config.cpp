#include "gq/config.hpp"

#include <fstream>
#include <functional>
#include <sstream>

namespace gq {

namespace {

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    out.push_back(std::stod(item));
  }
  return out;
}

std::string trim(const std::string& s) {
  auto a = s.find_first_not_of(" \t\r\n");
  auto b = s.find_last_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  return s.substr(a, b - a + 1);
}

}  // namespace

std::string ExperimentConfig::schema_text() {
  return "schema_version experiment seed threads tolerance_scale out_dir "
         "model.name model.hbar model.hbar_list model.N model.kappa model.truncation "
         "grid.radial grid.angular grid.radius "
         "loop.family loop.radius loop.auto_admissible loop.nodes "
         "hamiltonian.preset hamiltonian.numerator hamiltonian.denominator hamiltonian.degree "
         "star.basis_nmax star.emit_structure quasimode.target_radius "
         "trace.t_list evolution.t";
}

ExperimentConfig ExperimentConfig::parse_text(const std::string& text) {
  ExperimentConfig c;
  std::map<std::string, std::function<void(const std::string&)>> setters = {
      {"schema_version", [&](const std::string& v) {
         c.schema_version = std::stoi(v);
         if (c.schema_version != 1) throw ConfigError("unsupported schema_version " + v);
       }},
      {"experiment", [&](const std::string& v) { c.experiment = v; }},
      {"seed", [&](const std::string& v) { c.seed = std::stoull(v); }},
      {"threads", [&](const std::string& v) { c.threads = std::stoi(v); }},
      {"tolerance_scale", [&](const std::string& v) { c.tolerance_scale = std::stod(v); }},
      {"out_dir", [&](const std::string& v) { c.out_dir = v; }},
      {"model.name", [&](const std::string& v) {
         if (v != "plane" && v != "sphere") throw ConfigError("unknown model '" + v + "'");
         c.model_name = v;
       }},
      {"model.hbar", [&](const std::string& v) { c.hbar = std::stod(v); }},
      {"model.hbar_list", [&](const std::string& v) { c.hbar_list = parse_list(v); }},
      {"model.N", [&](const std::string& v) { c.sphere_n = std::stoi(v); }},
      {"model.kappa", [&](const std::string& v) { c.kappa = std::stod(v); }},
      {"model.truncation", [&](const std::string& v) { c.truncation = std::stoi(v); }},
      {"grid.radial", [&](const std::string& v) { c.grid_radial = std::stoi(v); }},
      {"grid.angular", [&](const std::string& v) { c.grid_angular = std::stoi(v); }},
      {"grid.radius", [&](const std::string& v) { c.grid_radius = std::stod(v); }},
      {"loop.family", [&](const std::string& v) {
         if (v != "circle" && v != "latitude") throw ConfigError("unknown loop family '" + v + "'");
         c.loop_family = v;
       }},
      {"loop.radius", [&](const std::string& v) { c.loop_radius = std::stod(v); }},
      {"loop.auto_admissible", [&](const std::string& v) { c.loop_auto_admissible = v == "true" || v == "1"; }},
      {"loop.nodes", [&](const std::string& v) { c.loop_nodes = std::stoi(v); }},
      {"hamiltonian.preset", [&](const std::string& v) { c.ham_preset = v; }},
      {"hamiltonian.numerator", [&](const std::string& v) { c.ham_numerator = v; }},
      {"hamiltonian.denominator", [&](const std::string& v) { c.ham_denominator = v; }},
      {"hamiltonian.degree", [&](const std::string& v) { c.ham_degree = std::stoi(v); }},
      {"star.basis_nmax", [&](const std::string& v) { c.star_basis_nmax = std::stoi(v); }},
      {"star.emit_structure", [&](const std::string& v) { c.star_emit_structure = v == "true" || v == "1"; }},
      {"quasimode.target_radius", [&](const std::string& v) { c.quasimode_target_radius = std::stod(v); }},
      {"trace.t_list", [&](const std::string& v) { c.time_list = parse_list(v); }},
      {"evolution.t", [&](const std::string& v) { c.evolution_t = std::stod(v); }},
  };

  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  bool has_experiment = false;
  while (std::getline(ss, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(t.substr(0, eq));
    std::string val = trim(t.substr(eq + 1));
    auto it = setters.find(key);
    if (it == setters.end())
      throw ConfigError("unknown key '" + key + "' (schema: " + schema_text() + ")");
    try {
      it->second(val);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError("key '" + key + "': bad value '" + val + "' (" + e.what() + ")");
    }
    if (key == "experiment") has_experiment = true;
  }
  if (!has_experiment) throw ConfigError("missing required key 'experiment'");
  static const std::vector<std::string> kinds = {"axioms",    "star",  "lagrangian",
                                                 "quasimode", "trace", "evolution"};
  if (std::find(kinds.begin(), kinds.end(), c.experiment) == kinds.end())
    throw ConfigError("unknown experiment '" + c.experiment + "'");
  return c;
}

ExperimentConfig ExperimentConfig::parse_file(const std::string& path) {
  std::ifstream f(path);
  if (!f.good()) throw ConfigError("cannot open config file " + path);
  std::stringstream buf;
  buf << f.rdbuf();
  return parse_text(buf.str());
}

}  // namespace gq
