#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "errors.hpp"

namespace qucc {

/// One- and two-electron integrals in chemist notation (ij|kl) over real
/// spatial orbitals, the two-electron table stored under the full 8-fold
/// permutational symmetry, plus core energy and electron counts.
class IntegralStore {
 public:
  IntegralStore(int n_spatial, int n_alpha, int n_beta, double e_core = 0.0)
      : n_spatial_(n_spatial), n_alpha_(n_alpha), n_beta_(n_beta), e_core_(e_core) {
    if (n_spatial_ < 1 || n_spatial_ > 64)
      throw std::invalid_argument("orbital count must be in [1, 64]");
    if (n_alpha_ < 0 || n_beta_ < 0 || n_alpha_ > n_spatial_ || n_beta_ > n_spatial_)
      throw std::invalid_argument("electron count per spin must be in [0, n_spatial]");
    if (n_alpha_ + n_beta_ == 0) throw std::invalid_argument("at least one electron required");
    h_.assign(static_cast<std::size_t>(n_spatial_) * n_spatial_, 0.0);
    const std::size_t np = pair_count();
    g_.assign(np * (np + 1) / 2, 0.0);
    orbsym_.assign(n_spatial_, 1);
  }

  int n_spatial() const { return n_spatial_; }
  int n_alpha() const { return n_alpha_; }
  int n_beta() const { return n_beta_; }
  int n_spin_orbitals() const { return 2 * n_spatial_; }
  double e_core() const { return e_core_; }
  void set_e_core(double v) { e_core_ = v; }

  double h(int p, int q) const { return h_[h_index(p, q)]; }
  void set_h(int p, int q, double v) {
    h_[h_index(p, q)] = v;
    h_[h_index(q, p)] = v;
  }

  /// (ij|kl) lookup; any of the 8 permutations returns the same value.
  double eri(int i, int j, int k, int l) const { return g_[quad_index(i, j, k, l)]; }
  void set_eri(int i, int j, int k, int l, double v) { g_[quad_index(i, j, k, l)] = v; }

  // Header fields parsed and stored but ignored by the solver.
  const std::vector<int>& orbsym() const { return orbsym_; }
  void set_orbsym(std::vector<int> v) { orbsym_ = std::move(v); }
  int isym() const { return isym_; }
  void set_isym(int v) { isym_ = v; }

 private:
  std::size_t h_index(int p, int q) const {
    check_index(p);
    check_index(q);
    return static_cast<std::size_t>(p) * n_spatial_ + q;
  }
  void check_index(int p) const {
    if (p < 0 || p >= n_spatial_) throw std::out_of_range("orbital index out of range");
  }
  static std::size_t tri(std::size_t a, std::size_t b) {
    return a >= b ? a * (a + 1) / 2 + b : b * (b + 1) / 2 + a;
  }
  std::size_t pair_count() const {
    return static_cast<std::size_t>(n_spatial_) * (n_spatial_ + 1) / 2;
  }
  std::size_t quad_index(int i, int j, int k, int l) const {
    check_index(i);
    check_index(j);
    check_index(k);
    check_index(l);
    return tri(tri(i, j), tri(k, l));
  }

  int n_spatial_;
  int n_alpha_;
  int n_beta_;
  double e_core_;
  std::vector<double> h_;
  std::vector<double> g_;
  std::vector<int> orbsym_;
  int isym_ = 1;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return s;
}

inline long parse_long(const std::string& tok, long lineno, const char* what) {
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(tok, &pos);
  } catch (const std::exception&) {
    throw ParseError(std::string("cannot parse ") + what + " value '" + tok + "'", lineno);
  }
  if (pos != tok.size())
    throw ParseError(std::string("cannot parse ") + what + " value '" + tok + "'", lineno);
  return v;
}

}  // namespace detail

/// Parses the FCIDUMP text format: a namelist header with at least NORB and
/// NELEC (MS2 defaults to 0) terminated by "&END" or "/", then one record
/// "value i j k l" per line with 1-based indices. "i j 0 0" records are
/// one-electron integrals, "i 0 0 0" MOLPRO-style orbital-energy records
/// (stored, unused), "0 0 0 0" the core energy. Unlisted integrals are zero.
inline IntegralStore parse_fcidump(std::istream& in) {
  std::string line;
  long lineno = 0;
  long header_line = 0;
  std::string header;
  bool in_header = false;
  bool header_done = false;

  while (!header_done && std::getline(in, line)) {
    ++lineno;
    std::string t = detail::trim(line);
    if (t.empty()) continue;
    if (!in_header) {
      if (t[0] != '&') throw ParseError("expected namelist header starting with '&'", lineno);
      header_line = lineno;
      in_header = true;
      // drop the group name token (&FCI or similar)
      const auto sp = t.find_first_of(" \t");
      t = sp == std::string::npos ? std::string{} : t.substr(sp + 1);
    }
    const std::string u = detail::upper(t);
    std::size_t endpos = std::string::npos;
    const auto amp_end = u.find("&END");
    const auto slash = u.find('/');
    if (amp_end != std::string::npos && (slash == std::string::npos || amp_end < slash)) {
      endpos = amp_end;
    } else if (slash != std::string::npos) {
      endpos = slash;
    }
    if (endpos != std::string::npos) {
      // anything after the terminator on the same line is ignored
      header += ' ' + t.substr(0, endpos);
      header_done = true;
    } else {
      header += ' ' + t;
    }
  }
  if (!in_header) throw ParseError("empty input: missing namelist header", std::max(lineno, 1l));
  if (!header_done) throw ParseError("unterminated namelist header (missing &END or /)", lineno);

  // Tokenize KEY=VALUE items; list values may be comma-separated and wrap lines.
  std::vector<std::pair<std::string, std::vector<std::string>>> items;
  {
    std::string tok;
    auto flush = [&](const std::string& t) {
      if (t.empty()) return;
      const auto eq = t.find('=');
      if (eq != std::string::npos) {
        items.emplace_back(detail::upper(detail::trim(t.substr(0, eq))),
                           std::vector<std::string>{});
        const std::string v = detail::trim(t.substr(eq + 1));
        if (!v.empty()) items.back().second.push_back(v);
      } else {
        if (items.empty())
          throw ParseError("header value '" + t + "' without a key", header_line);
        items.back().second.push_back(t);
      }
    };
    for (char c : header) {
      if (c == ',' || c == ' ' || c == '\t') {
        flush(tok);
        tok.clear();
      } else {
        tok.push_back(c);
      }
    }
    flush(tok);
  }

  long norb = -1, nelec = -1, ms2 = 0, isym = 1;
  std::vector<int> orbsym;
  for (const auto& [key, values] : items) {
    if (key == "NORB" || key == "NELEC" || key == "MS2" || key == "ISYM") {
      if (values.size() != 1)
        throw ParseError("header field " + key + " needs exactly one value", header_line);
      const long v = detail::parse_long(values[0], header_line, key.c_str());
      if (key == "NORB")
        norb = v;
      else if (key == "NELEC")
        nelec = v;
      else if (key == "MS2")
        ms2 = v;
      else
        isym = v;
    } else if (key == "ORBSYM") {
      for (const auto& v : values)
        orbsym.push_back(static_cast<int>(detail::parse_long(v, header_line, "ORBSYM")));
    }
    // unknown keys are ignored
  }

  if (norb < 0) throw ParseError("header missing NORB", header_line);
  if (nelec < 0) throw ParseError("header missing NELEC", header_line);
  if (norb < 1 || norb > 64)
    throw ParseError("NORB out of supported range [1, 64]", header_line);
  if (nelec < 1) throw ParseError("NELEC must be positive", header_line);
  if ((nelec + ms2) % 2 != 0)
    throw ParseError("inconsistent NELEC/MS2: NELEC+MS2 must be even", header_line);
  const long na = (nelec + ms2) / 2;
  const long nb = (nelec - ms2) / 2;
  if (na < 0 || nb < 0 || na > norb || nb > norb)
    throw ParseError("inconsistent NELEC/MS2: electron counts do not fit NORB", header_line);

  IntegralStore store(static_cast<int>(norb), static_cast<int>(na), static_cast<int>(nb));
  if (!orbsym.empty()) {
    if (static_cast<long>(orbsym.size()) != norb)
      throw ParseError("ORBSYM length does not match NORB", header_line);
    store.set_orbsym(orbsym);
  }
  store.set_isym(static_cast<int>(isym));

  auto check_index = [&](long x, long ln) {
    if (x < 1 || x > norb)
      throw ParseError("orbital index " + std::to_string(x) + " out of range [1, " +
                           std::to_string(norb) + "]",
                       ln);
  };

  while (std::getline(in, line)) {
    ++lineno;
    std::string t = detail::trim(line);
    if (t.empty()) continue;
    // Fortran-style D exponents
    for (char& c : t) {
      if (c == 'D' || c == 'd') c = 'E';
    }
    std::istringstream ls(t);
    double v = 0.0;
    long i = 0, j = 0, k = 0, l = 0;
    if (!(ls >> v >> i >> j >> k >> l))
      throw ParseError("malformed integral record (expected: value i j k l)", lineno);
    std::string rest;
    if (ls >> rest) throw ParseError("trailing tokens in integral record", lineno);

    if (i == 0 && j == 0 && k == 0 && l == 0) {
      store.set_e_core(v);
    } else if (j == 0 && k == 0 && l == 0) {
      check_index(i, lineno);  // orbital-energy record; nothing to store for the solver
    } else if (k == 0 && l == 0) {
      check_index(i, lineno);
      check_index(j, lineno);
      store.set_h(static_cast<int>(i - 1), static_cast<int>(j - 1), v);
    } else {
      check_index(i, lineno);
      check_index(j, lineno);
      check_index(k, lineno);
      check_index(l, lineno);
      store.set_eri(static_cast<int>(i - 1), static_cast<int>(j - 1), static_cast<int>(k - 1),
                    static_cast<int>(l - 1), v);
    }
  }
  return store;
}

inline IntegralStore parse_fcidump(const std::string& text) {
  std::istringstream in(text);
  return parse_fcidump(in);
}

/// Writes the store back out; values are printed with enough digits to round
/// trip exactly, one canonical representative per 8-fold symmetry class.
inline void write_fcidump(const IntegralStore& st, std::ostream& out) {
  const int n = st.n_spatial();
  out << "&FCI NORB=" << n << ",NELEC=" << st.n_alpha() + st.n_beta()
      << ",MS2=" << st.n_alpha() - st.n_beta() << ",\n ORBSYM=";
  for (int p = 0; p < n; ++p) out << st.orbsym()[p] << ',';
  out << "\n ISYM=" << st.isym() << ",\n&END\n";

  char buf[96];
  auto emit = [&](double v, int i, int j, int k, int l) {
    std::snprintf(buf, sizeof buf, "%.17g %d %d %d %d\n", v, i, j, k, l);
    out << buf;
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j)
      for (int k = 0; k <= i; ++k)
        for (int l = 0; l <= k; ++l) {
          if (k * (k + 1) / 2 + l > i * (i + 1) / 2 + j) continue;
          const double v = st.eri(i, j, k, l);
          if (v != 0.0) emit(v, i + 1, j + 1, k + 1, l + 1);
        }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      const double v = st.h(i, j);
      if (v != 0.0) emit(v, i + 1, j + 1, 0, 0);
    }
  emit(st.e_core(), 0, 0, 0, 0);
}

/// Diagonal Fock elements over interleaved spin orbitals for the aufbau
/// reference: eps_p = h_pp + sum_{i occ} [(pp|ii) - delta_{spin} (pi|ip)].
inline std::vector<double> fock_diagonal(const IntegralStore& st) {
  const int n = st.n_spatial();
  std::vector<double> eps(2 * n, 0.0);
  for (int so = 0; so < 2 * n; ++so) {
    const int p = so >> 1;
    const bool beta = (so & 1) != 0;
    double e = st.h(p, p);
    for (int spin = 0; spin < 2; ++spin) {
      const int nocc = spin == 0 ? st.n_alpha() : st.n_beta();
      for (int i = 0; i < nocc; ++i) {
        e += st.eri(p, p, i, i);
        if ((spin == 1) == beta) e -= st.eri(p, i, i, p);
      }
    }
    eps[so] = e;
  }
  return eps;
}

}  // namespace qucc
