// Fixture generator: builds STO-3G integrals for a few small systems, runs
// RHF, and writes the MO integrals as an FCIDUMP file.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "scfgen.hpp"

int main(int argc, char** argv) {
  CLI::App app{"STO-3G FCIDUMP fixture generator (H2, H chains, H2O)"};

  std::string system;
  std::string out_path;
  double bond = 1.4;        // bohr
  double spacing = 1.5;     // bohr
  int count = 4;
  double r_oh = 0.9572;     // angstrom
  double angle = 104.52;    // degrees
  bool scf_summary = false;

  app.add_option("system", system, "system to generate: h2 | hchain | h2o")->required();
  app.add_option("-o,--out", out_path, "output FCIDUMP path")->required();
  app.add_option("--bond", bond, "H2 bond length in bohr (default 1.4)");
  app.add_option("--spacing", spacing, "H-chain spacing in bohr (default 1.5)");
  app.add_option("--count", count, "H-chain atom count (default 4)");
  app.add_option("--r-oh", r_oh, "water O-H distance in angstrom (default 0.9572)");
  app.add_option("--angle", angle, "water H-O-H angle in degrees (default 104.52)");
  app.add_flag("--scf-summary", scf_summary, "print an SCF summary as JSON to stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    std::vector<scfgen::Atom> atoms;
    if (system == "h2") {
      atoms = scfgen::h2(bond);
    } else if (system == "hchain") {
      atoms = scfgen::h_chain(count, spacing);
    } else if (system == "h2o") {
      atoms = scfgen::water(r_oh, angle);
    } else {
      std::cerr << "error: unknown system '" << system << "'\n";
      return 1;
    }

    const auto scf = scfgen::rhf(atoms);
    const auto store = scfgen::mo_integral_store(atoms, scf);

    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "error: cannot open '" << out_path << "' for writing\n";
      return 1;
    }
    qucc::write_fcidump(store, out);

    if (scf_summary) {
      char buf[64];
      auto g = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.12g", v);
        return std::string(buf);
      };
      std::cout << "{\"e_scf\": " << g(scf.e_total) << ", \"e_nuc\": " << g(scf.e_nuc)
                << ", \"iterations\": " << scf.iterations << ", \"mo_energies\": [";
      for (int p = 0; p < scf.mo_energies.size(); ++p)
        std::cout << (p ? ", " : "") << g(scf.mo_energies(p));
      std::cout << "]}\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
