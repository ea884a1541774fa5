#pragma once

// Grid sweeps, single-point reports, the self-check battery and the
// extremizer behind the ak-scan command-line tool.

#include <algorithm>
#include <array>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "akscan/arthurs_kelly.hpp"
#include "akscan/entanglement.hpp"
#include "akscan/gaussian_states.hpp"
#include "akscan/types.hpp"

namespace akscan {

// Fixed 17-significant-digit scientific form: keeps emitted files
// byte-stable across runs and thread counts.
inline std::string format_real(Real v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.16Le", v);
  return buf;
}

// Angles on the command line: plain radians, or "pi:x" meaning x * pi.
inline Real parse_angle(const std::string& text) {
  const bool has_pi = text.rfind("pi:", 0) == 0;
  const std::string body = has_pi ? text.substr(3) : text;
  errno = 0;
  char* end = nullptr;
  const Real v = std::strtold(body.c_str(), &end);
  if (body.empty() || end != body.c_str() + body.size() || errno == ERANGE ||
      !std::isfinite(v))
    throw std::invalid_argument("cannot parse angle '" + text + "'");
  return has_pi ? v * pi : v;
}

// Worker count for grid jobs: AK_SCAN_THREADS, where unset or 0 means the
// hardware concurrency. Threads only partition the index range, so results
// do not depend on this value.
inline int worker_count() {
  const char* env = std::getenv("AK_SCAN_THREADS");
  if (!env || !*env) return std::max(1u, std::thread::hardware_concurrency());
  errno = 0;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || errno == ERANGE || n < 0 || n > 1024)
    throw std::invalid_argument(
        "AK_SCAN_THREADS must be an integer in 0..1024");
  if (n == 0) return std::max(1u, std::thread::hardware_concurrency());
  return static_cast<int>(n);
}

template <class Fn>
void parallel_for(long total, Fn&& fn) {
  const long workers =
      std::min<long>(worker_count(), std::max<long>(total, 1));
  if (workers <= 1) {
    for (long i = 0; i < total; ++i) fn(i);
    return;
  }
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  for (long w = 0; w < workers; ++w) {
    const long lo = total * w / workers;
    const long hi = total * (w + 1) / workers;
    pool.emplace_back([&, lo, hi] {
      try {
        for (long i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

// Rectangular (r, theta) grid, r-major row order. Endpoints are hit
// exactly; a zero-width interval (min == max) is allowed and repeats the
// single value.
struct SweepGrid {
  Real r_min = -5;
  Real r_max = 5;
  int r_steps = 201;
  Real theta_min = 0;
  Real theta_max = pi / 2;
  int theta_steps = 181;

  void validate() const {
    if (!std::isfinite(r_min) || !std::isfinite(r_max) ||
        !std::isfinite(theta_min) || !std::isfinite(theta_max))
      throw std::invalid_argument("grid bounds must be finite");
    if (r_steps < 2 || theta_steps < 2)
      throw std::invalid_argument("grid needs at least 2 steps per axis");
    if (r_min > r_max || theta_min > theta_max)
      throw std::invalid_argument("grid bounds must satisfy min <= max");
  }

  Real r_at(int i) const {
    return r_min + (i * (r_max - r_min)) / (r_steps - 1);
  }
  Real theta_at(int j) const {
    return theta_min + (j * (theta_max - theta_min)) / (theta_steps - 1);
  }
  long total() const { return static_cast<long>(r_steps) * theta_steps; }
};

struct SweepRow {
  Real r, theta;
  Real nu3_f1, nu3_f2, nu3_f3, nu2_f1;
  Real a1, a2, a3;
  Real E_ds, E_dds, E_g3, E_res_d, E_res_s;
  GiedkeLabel giedke_class;
  int g_branch;  // branch of the g-factor behind E_ds (pair 1-3)
};

inline SweepRow compute_row(Real r, Real theta, Real q = 0, Real p = 0) {
  const SystemParams sp(q, p, theta, r);
  const GaussianState st = evolve(MeasurementConfig{sp});

  SweepRow row{};
  row.r = r;
  row.theta = theta;

  std::array<Real, 3> nu3{};
  int n_separable = 0;
  for (int f = 0; f < 3; ++f) {
    const PptSpectrum s = ppt_spectrum(st.cov, {f + 1});
    nu3[f] = s.values[2];
    if (f == 0) row.nu2_f1 = s.values[1];
    n_separable += s.values[2] >= 1 - 1e-9L;
  }
  row.nu3_f1 = nu3[0];
  row.nu3_f2 = nu3[1];
  row.nu3_f3 = nu3[2];
  row.giedke_class = giedke_label_from_count(n_separable);

  const LocalInvariants inv = local_invariants(st.cov);
  row.a1 = inv.a1;
  row.a2 = inv.a2;
  row.a3 = inv.a3;

  const Renyi2Report rep = renyi2_report(inv);
  row.E_ds = rep.reduced[0][2];
  row.E_dds = rep.global[0];
  row.E_g3 = rep.global[2];
  row.E_res_d = rep.residual[0];
  row.E_res_s = rep.residual[2];
  row.g_branch = rep.g_branch[1];
  return row;
}

inline std::vector<SweepRow> sweep(const SweepGrid& grid, Real q = 0,
                                   Real p = 0) {
  grid.validate();
  std::vector<SweepRow> rows(static_cast<size_t>(grid.total()));
  parallel_for(grid.total(), [&](long idx) {
    const int i = static_cast<int>(idx / grid.theta_steps);
    const int j = static_cast<int>(idx % grid.theta_steps);
    rows[static_cast<size_t>(idx)] = compute_row(grid.r_at(i), grid.theta_at(j), q, p);
  });
  return rows;
}

inline constexpr const char* kSweepCsvHeader =
    "r,theta,nu3_f1,nu3_f2,nu3_f3,nu2_f1,a1,a2,a3,"
    "E_ds,E_dds,E_g3,E_res_d,E_res_s,giedke_class,g_branch";

inline void write_sweep_csv(std::ostream& os,
                            const std::vector<SweepRow>& rows) {
  os << kSweepCsvHeader << '\n';
  for (const SweepRow& w : rows) {
    os << format_real(w.r) << ',' << format_real(w.theta) << ','
       << format_real(w.nu3_f1) << ',' << format_real(w.nu3_f2) << ','
       << format_real(w.nu3_f3) << ',' << format_real(w.nu2_f1) << ','
       << format_real(w.a1) << ',' << format_real(w.a2) << ','
       << format_real(w.a3) << ',' << format_real(w.E_ds) << ','
       << format_real(w.E_dds) << ',' << format_real(w.E_g3) << ','
       << format_real(w.E_res_d) << ',' << format_real(w.E_res_s) << ','
       << to_string(w.giedke_class) << ',' << g_branch_name(w.g_branch)
       << '\n';
  }
}

inline void write_sweep_json(std::ostream& os,
                             const std::vector<SweepRow>& rows) {
  os << "[\n";
  for (size_t k = 0; k < rows.size(); ++k) {
    const SweepRow& w = rows[k];
    os << "{\"r\":" << format_real(w.r) << ",\"theta\":" << format_real(w.theta)
       << ",\"nu3_f1\":" << format_real(w.nu3_f1)
       << ",\"nu3_f2\":" << format_real(w.nu3_f2)
       << ",\"nu3_f3\":" << format_real(w.nu3_f3)
       << ",\"nu2_f1\":" << format_real(w.nu2_f1)
       << ",\"a1\":" << format_real(w.a1) << ",\"a2\":" << format_real(w.a2)
       << ",\"a3\":" << format_real(w.a3) << ",\"E_ds\":" << format_real(w.E_ds)
       << ",\"E_dds\":" << format_real(w.E_dds)
       << ",\"E_g3\":" << format_real(w.E_g3)
       << ",\"E_res_d\":" << format_real(w.E_res_d)
       << ",\"E_res_s\":" << format_real(w.E_res_s) << ",\"giedke_class\":\""
       << to_string(w.giedke_class) << "\",\"g_branch\":\""
       << g_branch_name(w.g_branch) << "\"}" << (k + 1 < rows.size() ? ",\n" : "\n");
  }
  os << "]\n";
}

// Everything ak-scan knows about a single parameter point.
struct PointReport {
  SystemParams params;
  Real balance;
  std::array<PptSpectrum, 3> ppt;  // focus 1, 2, 3
  LocalInvariants inv;
  Renyi2Report renyi;
  GiedkeClass giedke;
  NoiseDecomposition noise;
  Real det_sigma;
};

inline PointReport point_report(Real r, Real theta, Real q = 0, Real p = 0) {
  const SystemParams sp(q, p, theta, r);
  const GaussianState st = evolve(MeasurementConfig{sp});

  PointReport rep{};
  rep.params = sp;
  rep.balance = optimal_balance(sp);
  int n_separable = 0;
  for (int f = 0; f < 3; ++f) {
    rep.ppt[f] = ppt_spectrum(st.cov, {f + 1});
    const bool sep = rep.ppt[f].values[2] >= 1 - 1e-9L;
    rep.giedke.split_separable[f] = sep;
    n_separable += sep;
  }
  rep.giedke.label = giedke_label_from_count(n_separable);
  rep.inv = local_invariants(st.cov);
  rep.renyi = renyi2_report(rep.inv);
  rep.noise = noise_decomposition(sp);
  rep.det_sigma = st.cov.matrix().determinant();
  return rep;
}

namespace detail {

inline std::string short_real(Real v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12Lg", v);
  return buf;
}

}  // namespace detail

inline void write_point_text(std::ostream& os, const PointReport& rep) {
  using detail::short_real;
  os << "parameters: r=" << short_real(rep.params.r)
     << " theta=" << short_real(rep.params.theta)
     << " q=" << short_real(rep.params.q) << " p=" << short_real(rep.params.p)
     << "\n";
  os << "optimal balance: " << short_real(rep.balance) << "\n";
  os << "det sigma: " << short_real(rep.det_sigma) << "\n";
  os << "local invariants: a1=" << short_real(rep.inv.a1)
     << " a2=" << short_real(rep.inv.a2) << " a3=" << short_real(rep.inv.a3)
     << "\n";
  os << "ppt spectra (descending):\n";
  for (int f = 0; f < 3; ++f) {
    os << "  focus " << f + 1 << ":";
    for (const Real v : rep.ppt[f].values) os << ' ' << short_real(v);
    os << "\n";
  }
  os << "separability class: " << to_string(rep.giedke.label) << " (splits:";
  for (int f = 0; f < 3; ++f)
    os << ' ' << (rep.giedke.split_separable[f] ? "sep" : "ent");
  os << ")\n";
  os << "renyi-2 entanglement (nats):\n";
  os << "  pairwise: E(1|2)=" << short_real(rep.renyi.reduced[0][1]) << " ["
     << g_branch_name(rep.renyi.g_branch[2]) << "]"
     << " E(1|3)=" << short_real(rep.renyi.reduced[0][2]) << " ["
     << g_branch_name(rep.renyi.g_branch[1]) << "]"
     << " E(2|3)=" << short_real(rep.renyi.reduced[1][2]) << " ["
     << g_branch_name(rep.renyi.g_branch[0]) << "]\n";
  os << "  one-vs-two: E(1|23)=" << short_real(rep.renyi.global[0])
     << " E(2|31)=" << short_real(rep.renyi.global[1])
     << " E(3|12)=" << short_real(rep.renyi.global[2]) << "\n";
  os << "  residual: focus1=" << short_real(rep.renyi.residual[0])
     << " focus2=" << short_real(rep.renyi.residual[1])
     << " focus3=" << short_real(rep.renyi.residual[2]) << "\n";
  os << "noise: dx1'^2=" << short_real(rep.noise.dx1p_sq)
     << " dx2'^2=" << short_real(rep.noise.dx2p_sq)
     << " eta1=" << short_real(rep.noise.eta1)
     << " eta2=" << short_real(rep.noise.eta2) << "\n";
}

inline constexpr const char* kPointCsvHeader =
    "r,theta,q,p,balance,a1,a2,a3,"
    "nu1_f1,nu2_f1,nu3_f1,nu1_f2,nu2_f2,nu3_f2,nu1_f3,nu2_f3,nu3_f3,"
    "E_12,E_13,E_23,E_1_23,E_2_31,E_3_12,E_res_f1,E_res_f2,E_res_f3,"
    "g_23,g_13,g_12,g_branch_23,g_branch_13,g_branch_12,giedke_class,"
    "dx1p_sq,dx2p_sq,eta1,eta2";

inline void write_point_csv(std::ostream& os, const PointReport& rep) {
  os << kPointCsvHeader << '\n';
  os << format_real(rep.params.r) << ',' << format_real(rep.params.theta)
     << ',' << format_real(rep.params.q) << ',' << format_real(rep.params.p)
     << ',' << format_real(rep.balance) << ',' << format_real(rep.inv.a1)
     << ',' << format_real(rep.inv.a2) << ',' << format_real(rep.inv.a3);
  for (int f = 0; f < 3; ++f)
    for (const Real v : rep.ppt[f].values) os << ',' << format_real(v);
  os << ',' << format_real(rep.renyi.reduced[0][1]) << ','
     << format_real(rep.renyi.reduced[0][2]) << ','
     << format_real(rep.renyi.reduced[1][2]);
  for (int f = 0; f < 3; ++f) os << ',' << format_real(rep.renyi.global[f]);
  for (int f = 0; f < 3; ++f) os << ',' << format_real(rep.renyi.residual[f]);
  for (int k = 0; k < 3; ++k) os << ',' << format_real(rep.renyi.g_value[k]);
  for (int k = 0; k < 3; ++k) os << ',' << g_branch_name(rep.renyi.g_branch[k]);
  os << ',' << to_string(rep.giedke.label) << ','
     << format_real(rep.noise.dx1p_sq) << ',' << format_real(rep.noise.dx2p_sq)
     << ',' << format_real(rep.noise.eta1) << ','
     << format_real(rep.noise.eta2) << '\n';
}

inline void write_point_json(std::ostream& os, const PointReport& rep) {
  os << "{\n";
  os << "\"params\":{\"r\":" << format_real(rep.params.r)
     << ",\"theta\":" << format_real(rep.params.theta)
     << ",\"q\":" << format_real(rep.params.q)
     << ",\"p\":" << format_real(rep.params.p) << "},\n";
  os << "\"balance\":" << format_real(rep.balance) << ",\n";
  os << "\"det_sigma\":" << format_real(rep.det_sigma) << ",\n";
  os << "\"invariants\":[" << format_real(rep.inv.a1) << ','
     << format_real(rep.inv.a2) << ',' << format_real(rep.inv.a3) << "],\n";
  os << "\"ppt\":[";
  for (int f = 0; f < 3; ++f) {
    os << (f ? "," : "") << '[' << format_real(rep.ppt[f].values[0]) << ','
       << format_real(rep.ppt[f].values[1]) << ','
       << format_real(rep.ppt[f].values[2]) << ']';
  }
  os << "],\n";
  os << "\"giedke_class\":\"" << to_string(rep.giedke.label) << "\",\n";
  os << "\"split_separable\":[";
  for (int f = 0; f < 3; ++f)
    os << (f ? "," : "") << (rep.giedke.split_separable[f] ? "true" : "false");
  os << "],\n";
  os << "\"renyi2\":{\"pairwise\":[";
  for (int i = 0; i < 3; ++i) {
    os << (i ? "," : "") << '[';
    for (int j = 0; j < 3; ++j)
      os << (j ? "," : "") << format_real(rep.renyi.reduced[i][j]);
    os << ']';
  }
  os << "],\"one_vs_two\":[";
  for (int f = 0; f < 3; ++f)
    os << (f ? "," : "") << format_real(rep.renyi.global[f]);
  os << "],\"residual\":[";
  for (int f = 0; f < 3; ++f)
    os << (f ? "," : "") << format_real(rep.renyi.residual[f]);
  os << "],\"g\":[";
  for (int k = 0; k < 3; ++k)
    os << (k ? "," : "") << format_real(rep.renyi.g_value[k]);
  os << "],\"g_branch\":[";
  for (int k = 0; k < 3; ++k)
    os << (k ? "," : "") << '"' << g_branch_name(rep.renyi.g_branch[k]) << '"';
  os << "]},\n";
  os << "\"noise\":{\"dx1p_sq\":" << format_real(rep.noise.dx1p_sq)
     << ",\"dx2p_sq\":" << format_real(rep.noise.dx2p_sq)
     << ",\"eta1\":" << format_real(rep.noise.eta1)
     << ",\"eta2\":" << format_real(rep.noise.eta2) << "}\n";
  os << "}\n";
}

// Self-check battery over a fixed 41 x 37 grid. Every check reduces to a
// nonnegative violation measure compared against its tolerance.
struct VerifyCheck {
  std::string name;
  Real worst;
  Real tol;
  Real at_r, at_theta;
  bool pass;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  int r_steps, theta_steps;
  bool all_pass;
};

namespace detail {

inline constexpr int kVerifyChecks = 8;

inline std::array<Real, kVerifyChecks> verify_violations(Real r, Real theta,
                                                         bool inject) {
  const SystemParams sp(0, 0, theta, r);
  const GaussianState st = evolve(MeasurementConfig{sp});
  const Mat& m = st.cov.matrix();
  std::array<Real, kVerifyChecks> v{};

  v[0] = std::abs(m.determinant() - 1);

  for (int f = 1; f <= 3; ++f)
    v[1] = std::max(
        v[1], std::abs(quadratic_invariant(bipartition_cm(st, {f})) - 3));

  for (int k = 0; k < 3; ++k) {
    const Real det_pair = reduce_modes(st.cov, {(k + 1) % 3, (k + 2) % 3})
                              .matrix()
                              .determinant();
    const Real det_k = m.block<2, 2>(2 * k, 2 * k).determinant();
    v[2] = std::max(v[2], std::abs(det_pair - det_k));
  }

  const SymplecticSpectrum nu = symplectic_eigenvalues(st.cov);
  for (const Real x : nu.values) v[3] = std::max(v[3], std::abs(x - 1));

  Mat oracle = closed_form_cm(sp).matrix();
  if (inject) {
    oracle.block(2, 4, 2, 2) *= -1;
    oracle.block(4, 2, 2, 2) *= -1;
  }
  v[4] = (m - oracle).cwiseAbs().maxCoeff();

  std::array<PptSpectrum, 3> ppt;
  for (int f = 0; f < 3; ++f) ppt[f] = ppt_spectrum(st.cov, {f + 1});
  v[5] = std::abs(ppt[0].values[2] - ppt[1].values[2]);
  for (int f = 0; f < 3; ++f)
    v[6] = std::max(v[6], std::abs(ppt[f].values[1] - 1));

  const LocalInvariants inv = local_invariants(st.cov);
  for (int f = 1; f <= 3; ++f)
    v[7] = std::max(v[7], -residual_tripartite(inv, {f}));
  v[7] = std::max<Real>(v[7], 0);
  return v;
}

}  // namespace detail

// tol_override < 0 keeps the per-check defaults; inject_oracle_defect flips
// the detector-2/system coupling block of the closed-form reference so the
// oracle_equivalence check must trip (a self-test of the battery itself).
inline VerifyReport run_verify(Real tol_override = -1,
                               bool inject_oracle_defect = false) {
  SweepGrid grid;
  grid.r_steps = 41;
  grid.theta_steps = 37;
  grid.validate();

  struct Def {
    const char* name;
    Real tol;
  };
  static constexpr std::array<Def, detail::kVerifyChecks> defs{{
      {"det_sigma", 1e-9L},
      {"quadratic_invariant", 1e-9L},
      {"reduced_det_match", 1e-9L},
      {"pure_spectrum", 1e-9L},
      {"oracle_equivalence", 1e-12L},
      {"ppt_symmetry", 1e-10L},
      {"nu2_unit", 1e-8L},
      {"monogamy", 1e-10L},
  }};

  const long total = grid.total();
  std::vector<std::array<Real, detail::kVerifyChecks>> local(
      static_cast<size_t>(total));
  parallel_for(total, [&](long idx) {
    const int i = static_cast<int>(idx / grid.theta_steps);
    const int j = static_cast<int>(idx % grid.theta_steps);
    local[static_cast<size_t>(idx)] = detail::verify_violations(
        grid.r_at(i), grid.theta_at(j), inject_oracle_defect);
  });

  VerifyReport rep;
  rep.r_steps = grid.r_steps;
  rep.theta_steps = grid.theta_steps;
  rep.all_pass = true;
  for (int c = 0; c < detail::kVerifyChecks; ++c) {
    VerifyCheck check;
    check.name = defs[c].name;
    check.tol = tol_override >= 0 ? tol_override : defs[c].tol;
    check.worst = -1;
    check.at_r = check.at_theta = 0;
    for (long idx = 0; idx < total; ++idx) {
      if (local[static_cast<size_t>(idx)][c] > check.worst) {
        check.worst = local[static_cast<size_t>(idx)][c];
        check.at_r = grid.r_at(static_cast<int>(idx / grid.theta_steps));
        check.at_theta =
            grid.theta_at(static_cast<int>(idx % grid.theta_steps));
      }
    }
    check.pass = check.worst <= check.tol;
    rep.all_pass = rep.all_pass && check.pass;
    rep.checks.push_back(std::move(check));
  }
  return rep;
}

inline void write_verify_text(std::ostream& os, const VerifyReport& rep) {
  os << "self-check grid " << rep.r_steps << "x" << rep.theta_steps << "\n";
  for (const VerifyCheck& c : rep.checks) {
    char line[160];
    std::snprintf(line, sizeof line,
                  "[%s] %-20s worst %.3Le  tol %.1Le  at r=%.6Lg theta=%.6Lg",
                  c.pass ? "PASS" : "FAIL", c.name.c_str(), c.worst, c.tol,
                  c.at_r, c.at_theta);
    os << line << "\n";
  }
  os << (rep.all_pass ? "all checks passed" : "self-check FAILED") << "\n";
}

inline void write_verify_json(std::ostream& os, const VerifyReport& rep) {
  os << "{\"grid\":[" << rep.r_steps << ',' << rep.theta_steps
     << "],\"checks\":[\n";
  for (size_t k = 0; k < rep.checks.size(); ++k) {
    const VerifyCheck& c = rep.checks[k];
    os << "{\"name\":\"" << c.name << "\",\"worst\":" << format_real(c.worst)
       << ",\"tol\":" << format_real(c.tol) << ",\"pass\":"
       << (c.pass ? "true" : "false") << ",\"at\":[" << format_real(c.at_r)
       << ',' << format_real(c.at_theta) << "]}"
       << (k + 1 < rep.checks.size() ? ",\n" : "\n");
  }
  os << "],\"pass\":" << (rep.all_pass ? "true" : "false") << "}\n";
}

// Scalar fields the extremizer understands, matching sweep column names.
inline std::function<Real(Real, Real)> quantity_evaluator(
    const std::string& name, Real q = 0, Real p = 0) {
  auto state_cov = [q, p](Real r, Real theta) {
    return evolve(MeasurementConfig{SystemParams(q, p, theta, r)}).cov;
  };
  auto nu = [state_cov](int focus, int idx) {
    return std::function<Real(Real, Real)>(
        [state_cov, focus, idx](Real r, Real theta) {
          return ppt_spectrum(state_cov(r, theta), {focus}).values[idx];
        });
  };
  auto inv_field = [state_cov](std::function<Real(const LocalInvariants&)> pick) {
    return std::function<Real(Real, Real)>(
        [state_cov, pick](Real r, Real theta) {
          return pick(local_invariants(state_cov(r, theta)));
        });
  };

  if (name == "nu3_f1") return nu(1, 2);
  if (name == "nu3_f2") return nu(2, 2);
  if (name == "nu3_f3") return nu(3, 2);
  if (name == "nu2_f1") return nu(1, 1);
  if (name == "a1") return inv_field([](const LocalInvariants& v) { return v.a1; });
  if (name == "a2") return inv_field([](const LocalInvariants& v) { return v.a2; });
  if (name == "a3") return inv_field([](const LocalInvariants& v) { return v.a3; });
  if (name == "E_ds")
    return inv_field([](const LocalInvariants& v) { return renyi2_reduced(v, 1, 3); });
  if (name == "E_dds")
    return inv_field([](const LocalInvariants& v) { return renyi2_global(v, {1}); });
  if (name == "E_g3")
    return inv_field([](const LocalInvariants& v) { return renyi2_global(v, {3}); });
  if (name == "E_res_d")
    return inv_field([](const LocalInvariants& v) { return residual_tripartite(v, {1}); });
  if (name == "E_res_s")
    return inv_field([](const LocalInvariants& v) { return residual_tripartite(v, {3}); });
  throw std::invalid_argument("unknown quantity '" + name + "'");
}

struct ExtremizeResult {
  std::string quantity;
  bool maximize;
  Real value, r, theta;
  long coarse_evaluations, refine_evaluations;
};

// Coarse grid scan followed by golden-section coordinate descent inside the
// one-cell neighborhood of the best grid point.
inline ExtremizeResult extremize(const std::string& quantity, bool maximize,
                                 const SweepGrid& grid, Real q = 0,
                                 Real p = 0) {
  grid.validate();
  const auto raw = quantity_evaluator(quantity, q, p);
  const Real sign = maximize ? 1 : -1;
  const auto f = [&](Real r, Real theta) { return sign * raw(r, theta); };

  const long total = grid.total();
  std::vector<Real> values(static_cast<size_t>(total));
  parallel_for(total, [&](long idx) {
    const int i = static_cast<int>(idx / grid.theta_steps);
    const int j = static_cast<int>(idx % grid.theta_steps);
    values[static_cast<size_t>(idx)] = f(grid.r_at(i), grid.theta_at(j));
  });
  long best = 0;
  for (long i = 1; i < total; ++i)
    if (values[static_cast<size_t>(i)] > values[static_cast<size_t>(best)])
      best = i;
  const int bi = static_cast<int>(best / grid.theta_steps);
  const int bj = static_cast<int>(best % grid.theta_steps);

  const Real r_lo = grid.r_at(std::max(bi - 1, 0));
  const Real r_hi = grid.r_at(std::min(bi + 1, grid.r_steps - 1));
  const Real t_lo = grid.theta_at(std::max(bj - 1, 0));
  const Real t_hi = grid.theta_at(std::min(bj + 1, grid.theta_steps - 1));

  long refine_calls = 0;
  const auto golden = [&refine_calls](const std::function<Real(Real)>& g,
                                      Real lo, Real hi) {
    if (!(hi > lo)) return lo;
    const Real gr = 0.61803398874989484820L;
    Real x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    Real g1 = g(x1), g2 = g(x2);
    refine_calls += 2;
    for (int it = 0;
         it < 64 && hi - lo > 1e-13L * (1 + std::abs(lo) + std::abs(hi));
         ++it) {
      if (g1 < g2) {
        lo = x1;
        x1 = x2;
        g1 = g2;
        x2 = lo + gr * (hi - lo);
        g2 = g(x2);
      } else {
        hi = x2;
        x2 = x1;
        g2 = g1;
        x1 = hi - gr * (hi - lo);
        g1 = g(x1);
      }
      ++refine_calls;
    }
    return (lo + hi) / 2;
  };

  Real r = grid.r_at(bi), theta = grid.theta_at(bj);
  for (int round = 0; round < 4; ++round) {
    r = golden([&](Real x) { return f(x, theta); }, r_lo, r_hi);
    theta = golden([&](Real t) { return f(r, t); }, t_lo, t_hi);
  }
  const Real refined = f(r, theta);
  ++refine_calls;

  ExtremizeResult res;
  res.quantity = quantity;
  res.maximize = maximize;
  res.coarse_evaluations = total;
  res.refine_evaluations = refine_calls;
  if (refined >= values[static_cast<size_t>(best)]) {
    res.value = sign * refined;
    res.r = r;
    res.theta = theta;
  } else {
    res.value = sign * values[static_cast<size_t>(best)];
    res.r = grid.r_at(bi);
    res.theta = grid.theta_at(bj);
  }
  return res;
}

inline void write_extremize_text(std::ostream& os,
                                 const ExtremizeResult& res) {
  os << "quantity: " << res.quantity << "\n";
  os << "mode: " << (res.maximize ? "max" : "min") << "\n";
  os << "value: " << format_real(res.value) << "\n";
  os << "r: " << format_real(res.r) << "\n";
  os << "theta: " << format_real(res.theta) << "\n";
  os << "evaluations: coarse " << res.coarse_evaluations << ", refine "
     << res.refine_evaluations << "\n";
}

inline void write_extremize_json(std::ostream& os,
                                 const ExtremizeResult& res) {
  os << "{\"quantity\":\"" << res.quantity << "\",\"mode\":\""
     << (res.maximize ? "max" : "min")
     << "\",\"value\":" << format_real(res.value)
     << ",\"r\":" << format_real(res.r)
     << ",\"theta\":" << format_real(res.theta)
     << ",\"evaluations\":{\"coarse\":" << res.coarse_evaluations
     << ",\"refine\":" << res.refine_evaluations << "}}\n";
}

}  // namespace akscan
