// Command-line driver: single-point runs (JSON), bond-scan manifests (CSV),
// and FCI reference energies (JSON).

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <qucc/errors.hpp>
#include <qucc/fci.hpp>
#include <qucc/integrals.hpp>
#include <qucc/qucc.hpp>

namespace {

// All numeric output carries 12 significant digits so repeated runs are
// byte-identical.
std::string g12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

struct RunOptions {
  int m_large = 0;
  bool epsilon_set = false;
  double epsilon = 0.0;
  int max_iter = 50;
  double angle_tol = 1e-6;
  double energy_tol = 1e-9;
  bool with_fci = false;
  bool screen_gradient = false;
  std::size_t fci_cap = 200000;

  qucc::QuccConfig to_config() const {
    qucc::QuccConfig c;
    c.m_large = m_large;
    if (epsilon_set) c.epsilon = epsilon;
    c.max_iterations = max_iter;
    c.angle_tol = angle_tol;
    c.energy_tol = energy_tol;
    c.screen_by_gradient = screen_gradient;
    return c;
  }
};

// Flags given on the command line override values from --config.
void apply_config_file(const std::string& path, const CLI::App* sub, RunOptions& opt) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  nlohmann::json j = nlohmann::json::parse(in);
  auto flag_given = [&](const std::string& name) {
    const auto* o = sub->get_option_no_throw(name);
    return o != nullptr && o->count() > 0;
  };
  if (j.contains("m_large") && !flag_given("--m-large")) opt.m_large = j["m_large"].get<int>();
  if (j.contains("epsilon") && !flag_given("--epsilon")) {
    opt.epsilon = j["epsilon"].get<double>();
    opt.epsilon_set = true;
  }
  if (j.contains("max_iterations") && !flag_given("--max-iter"))
    opt.max_iter = j["max_iterations"].get<int>();
  if (j.contains("angle_tol") && !flag_given("--angle-tol"))
    opt.angle_tol = j["angle_tol"].get<double>();
  if (j.contains("energy_tol") && !flag_given("--energy-tol"))
    opt.energy_tol = j["energy_tol"].get<double>();
  if (j.contains("with_fci") && !flag_given("--with-fci"))
    opt.with_fci = j["with_fci"].get<bool>();
  if (j.contains("screen_by_gradient") && !flag_given("--screen-gradient"))
    opt.screen_gradient = j["screen_by_gradient"].get<bool>();
}

qucc::IntegralStore load_store(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return qucc::parse_fcidump(in);
}

void emit_solve_report(std::ostream& out, const qucc::SolveReport& rep, bool with_theta) {
  out << "{\"e_quad\": " << g12(rep.e_quad) << ", \"n_discarded\": " << rep.n_discarded;
  if (with_theta) {
    out << ", \"theta_min\": [";
    for (int i = 0; i < rep.theta_min.size(); ++i)
      out << (i ? ", " : "") << g12(rep.theta_min(i));
    out << "]";
  }
  out << ", \"eigen_spectrum\": {\"retained\": [";
  bool first = true;
  for (std::size_t i = 0; i < rep.eigenvalues.size(); ++i) {
    if (rep.discarded[i]) continue;
    out << (first ? "" : ", ") << g12(rep.eigenvalues[i]);
    first = false;
  }
  out << "], \"discarded\": [";
  first = true;
  for (std::size_t i = 0; i < rep.eigenvalues.size(); ++i) {
    if (!rep.discarded[i]) continue;
    out << (first ? "" : ", ") << g12(rep.eigenvalues[i]);
    first = false;
  }
  out << "]}}";
}

int cmd_run(const std::string& fcidump_path, const RunOptions& opt) {
  const auto store = load_store(fcidump_path);
  const auto result = qucc::run_qucc(store, opt.to_config());

  double e_fci = 0.0;
  bool have_fci = false;
  if (opt.with_fci) {
    qucc::FciOptions fopt;
    fopt.dimension_cap = opt.fci_cap;
    e_fci = qucc::fci_ground(store, fopt).energy;
    have_fci = true;
  }

  std::ostringstream out;
  out << "{\n";
  out << "  \"e_hf\": " << g12(result.e_hf) << ",\n";
  out << "  \"e0_corr\": " << g12(result.e0_corr) << ",\n";
  out << "  \"e_quad\": " << g12(result.e_quad) << ",\n";
  out << "  \"e_total\": " << g12(result.e_total) << ",\n";
  if (have_fci) out << "  \"e_fci\": " << g12(e_fci) << ",\n";
  out << "  \"iterations\": " << result.iterations << ",\n";
  out << "  \"converged\": " << (result.converged ? "true" : "false") << ",\n";
  out << "  \"pool_size\": " << result.pool_size << ",\n";
  out << "  \"m_large\": " << opt.m_large << ",\n";
  out << "  \"epsilon\": " << g12(opt.to_config().resolved_epsilon()) << ",\n";
  out << "  \"large_angles\": [";
  for (std::size_t i = 0; i < result.large_angles.size(); ++i)
    out << (i ? ", " : "") << "{\"pool_index\": " << result.large_angles[i].pool_index
        << ", \"theta\": " << g12(result.large_angles[i].theta) << "}";
  out << "],\n";
  out << "  \"solves\": [";
  for (std::size_t i = 0; i < result.solves.size(); ++i) {
    out << (i ? ", " : "");
    emit_solve_report(out, result.solves[i], true);
  }
  out << "],\n";
  out << "  \"final_solve\": ";
  emit_solve_report(out, result.solves.back(), false);
  out << "\n}\n";
  std::cout << out.str();
  return result.converged ? 0 : 2;
}

int cmd_scan(const std::string& manifest_path, const RunOptions& opt) {
  std::ifstream in(manifest_path);
  if (!in) throw std::runtime_error("cannot open '" + manifest_path + "'");

  std::vector<std::pair<std::string, std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    const auto b = line.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r\n");
    const std::string t = line.substr(b, e - b + 1);
    const auto comma = t.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error("manifest line is not 'label,path': " + t);
    rows.emplace_back(t.substr(0, comma), t.substr(comma + 1));
  }
  if (rows.empty()) throw std::runtime_error("manifest '" + manifest_path + "' is empty");

  std::ostringstream out;
  out << "label,e_hf,e_fci,e0_corr,e_quad,e_total,m_large,epsilon,iterations,converged\n";
  for (const auto& [label, path] : rows) {
    try {
      const auto store = load_store(path);
      const auto result = qucc::run_qucc(store, opt.to_config());
      std::string fci_field;
      if (opt.with_fci) {
        qucc::FciOptions fopt;
        fopt.dimension_cap = opt.fci_cap;
        fci_field = g12(qucc::fci_ground(store, fopt).energy);
      }
      out << csv_field(label) << ',' << g12(result.e_hf) << ',' << fci_field << ','
          << g12(result.e0_corr) << ',' << g12(result.e_quad) << ',' << g12(result.e_total)
          << ',' << opt.m_large << ',' << g12(opt.to_config().resolved_epsilon()) << ','
          << result.iterations << ',' << (result.converged ? "true" : "false") << '\n';
    } catch (const std::exception& e) {
      out << csv_field(label) << ',' << csv_field(std::string("ERROR: ") + e.what())
          << ",,,,,,,,\n";
    }
  }
  std::cout << out.str();
  return 0;
}

int cmd_fci(const std::string& fcidump_path, std::size_t cap) {
  const auto store = load_store(fcidump_path);
  qucc::FciOptions opt;
  opt.dimension_cap = cap;
  const auto res = qucc::fci_ground(store, opt);
  std::cout << "{\"e_fci\": " << g12(res.energy) << ", \"dimension\": " << res.dimension
            << "}\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qucc: quadratic-expansion unitary coupled cluster solver"};
  app.require_subcommand(1);

  RunOptions opt;
  std::string fcidump_path, manifest_path, config_path;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--m-large", opt.m_large, "number of exactly applied factors (default 0)");
    sub->add_option("--epsilon", opt.epsilon,
                    "pseudo-inverse eigenvalue cutoff (default 0.1 with a reference, else 0)")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--max-iter", opt.max_iter, "maximum reference-update iterations");
    sub->add_option("--angle-tol", opt.angle_tol, "fixed-point threshold on max |theta_min|");
    sub->add_option("--energy-tol", opt.energy_tol, "fixed-point threshold on |delta E|");
    sub->add_flag("--with-fci", opt.with_fci, "also compute the FCI reference energy");
    sub->add_flag("--screen-gradient", opt.screen_gradient,
                  "select large factors by |b_k| from an initial quadratic pass");
    sub->add_option("--fci-cap", opt.fci_cap, "CI dimension refusal cap (default 200000)");
    sub->add_option("--config", config_path, "JSON config file (flags take precedence)");
  };

  auto* run = app.add_subcommand("run", "single-point calculation, JSON to stdout");
  run->add_option("fcidump", fcidump_path, "FCIDUMP input file")->required();
  add_common(run);

  auto* scan = app.add_subcommand("scan", "scan over a 'label,path' manifest, CSV to stdout");
  scan->add_option("manifest", manifest_path, "manifest file: one 'label,path' per line")
      ->required();
  add_common(scan);

  auto* fci = app.add_subcommand("fci", "FCI ground-state energy, JSON to stdout");
  fci->add_option("fcidump", fcidump_path, "FCIDUMP input file")->required();
  fci->add_option("--fci-cap", opt.fci_cap, "CI dimension refusal cap (default 200000)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      if (!config_path.empty()) apply_config_file(config_path, run, opt);
      if (opt.epsilon_set == false && run->get_option("--epsilon")->count() > 0)
        opt.epsilon_set = true;
      return cmd_run(fcidump_path, opt);
    }
    if (scan->parsed()) {
      if (!config_path.empty()) apply_config_file(config_path, scan, opt);
      if (opt.epsilon_set == false && scan->get_option("--epsilon")->count() > 0)
        opt.epsilon_set = true;
      return cmd_scan(manifest_path, opt);
    }
    return cmd_fci(fcidump_path, opt.fci_cap);
  } catch (const qucc::DimensionCapError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
