// End-to-end acceptance run: nine pinned checks against reference values,
// one PASS/FAIL line each, exit code = number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tfim2d/analysis.hpp"
#include "tfim2d/dense_oracle.hpp"
#include "tfim2d/hamiltonian_op.hpp"
#include "tfim2d/lattice.hpp"
#include "tfim2d/tracemin.hpp"
#include "tfim2d/verify.hpp"

using namespace tfim2d;

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

std::string g6(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

struct Criterion {
  bool pass = false;
  std::string detail;
};

struct PairCurve {
  std::vector<double> lams;
  std::vector<double> vals;
};

PairCurve extract_curve(const std::vector<SweepRecord>& records, int i, int j,
                        double alpha, bool use_derivative) {
  PairCurve out;
  for (const SweepRecord& r : records) {
    if (r.site_i != i || r.site_j != j || r.alpha != alpha) continue;
    out.lams.push_back(r.lambda);
    out.vals.push_back(use_derivative ? std::abs(r.d_concurrence.value_or(0.0))
                                      : r.concurrence);
  }
  return out;
}

bool all_converged(const std::vector<SweepRecord>& records) {
  return std::all_of(records.begin(), records.end(),
                     [](const SweepRecord& r) { return r.converged; });
}

// first grid point where the gap clears the separation threshold
double first_crossing(const std::vector<GapPoint>& gaps, double threshold) {
  for (const GapPoint& g : gaps)
    if (g.gap >= threshold) return g.lambda;
  return -1.0;
}

std::vector<SweepRecord> shared_19site_records;  // filled by criterion 2, read by 5

Criterion criterion_1() {
  Criterion c;
  SweepSpec spec;
  spec.grid = {1.5, 3.5, 0.01};
  spec.pairs = {{1, 4}};
  const auto t0 = clock_type::now();
  const auto records = run_sweep(spec);
  const double dt = seconds_since(t0);

  const PairCurve curve = extract_curve(records, 1, 4, 0.0, false);
  const Peak peak = find_peak(curve.lams, curve.vals);
  const bool value_ok = std::abs(peak.value - 0.15275) <= 5e-4;
  const bool loc_ok = std::abs(peak.lambda - 2.61) <= 0.01 + 1e-9;
  const bool time_ok = dt < 10.0;
  c.pass = value_ok && loc_ok && time_ok && all_converged(records);
  c.detail = "max C " + g6(peak.value) + " (want 0.15275 +- 5e-4) at lambda " +
             g6(peak.lambda) + " (want 2.61 +- 0.01), sweep " + g6(dt) + "s (limit 10s)";
  return c;
}

Criterion criterion_2() {
  Criterion c;
  SweepSpec spec;
  spec.lattice.shell_radius = 2;
  spec.grid = {3.5, 4.4, 0.05};
  spec.pairs = {{1, 2}, {2, 5}, {5, 6}, {5, 10}};
  const auto t0 = clock_type::now();
  shared_19site_records = run_sweep(spec);
  const double dt = seconds_since(t0);

  const PairCurve curve = extract_curve(shared_19site_records, 5, 10, 0.0, false);
  const Peak peak = find_peak(curve.lams, curve.vals);
  const bool value_ok = std::abs(peak.value - 0.0960) <= 5e-4;
  const bool loc_ok = std::abs(peak.lambda - 3.95) <= 0.05 + 1e-9;
  const bool time_ok = dt < 1800.0;
  c.pass = value_ok && loc_ok && time_ok && all_converged(shared_19site_records);
  c.detail = "max C " + g6(peak.value) + " (want 0.0960 +- 5e-4) at lambda " +
             g6(peak.lambda) + " (want 3.95 +- 0.05), sweep " + g6(dt) + "s (limit 1800s)";
  return c;
}

Criterion criterion_3() {
  Criterion c;
  SweepSpec s7;
  s7.grid = {1.0, 2.5, 0.01};
  s7.pairs = {{1, 4}};
  s7.want_derivative = true;
  const auto r7 = run_sweep(s7);
  const PairCurve d7 = extract_curve(r7, 1, 4, 0.0, true);
  const Peak p7 = find_peak(d7.lams, d7.vals);
  const bool ok7 = p7.lambda >= 1.5 - 1e-9 && p7.lambda <= 1.7 + 1e-9;

  SweepSpec s19;
  s19.lattice.shell_radius = 2;
  s19.grid = {2.6, 3.3, 0.01};
  s19.pairs = {{5, 10}};
  s19.want_derivative = true;
  const auto r19 = run_sweep(s19);
  const PairCurve d19 = extract_curve(r19, 5, 10, 0.0, true);
  const Peak p19 = find_peak(d19.lams, d19.vals);
  const bool ok19 = std::abs(p19.lambda - 3.01) <= 0.05 + 1e-9;

  c.pass = ok7 && ok19 && all_converged(r7) && all_converged(r19);
  c.detail = "7-site |dC/dlambda| grid-peak at lambda " + g6(p7.lambda) +
             " (want [1.5, 1.7]); 19-site at " + g6(p19.lambda) +
             " refined " + g6(p19.lambda_refined) + " (want 3.01 +- 0.05)";
  return c;
}

Criterion criterion_4() {
  Criterion c;
  SweepSpec spec;
  spec.lattice.shell_radius = 2;
  spec.grid = {0.5, 6.0, 0.5};
  spec.pairs = {{1, 10}};
  const auto records = run_sweep(spec);
  double max_c = 0.0;
  for (const SweepRecord& r : records) max_c = std::max(max_c, r.concurrence);
  c.pass = max_c < 1e-8 && all_converged(records);
  c.detail = "max C(1,10) over lambda in {0.5..6} = " + g6(max_c) + " (want < 1e-8)";
  return c;
}

Criterion criterion_5() {
  Criterion c;
  if (shared_19site_records.empty()) {
    c.detail = "no 19-site sweep data (criterion 2 failed to run)";
    return c;
  }
  const PairCurve base = extract_curve(shared_19site_records, 5, 10, 0.0, false);
  const Peak peak = find_peak(base.lams, base.vals);
  const double lam = peak.lambda;

  auto value_at = [&](int i, int j) {
    const PairCurve curve = extract_curve(shared_19site_records, i, j, 0.0, false);
    return curve.vals[peak.index];
  };
  const double c12 = value_at(1, 2);
  const double c25 = value_at(2, 5);
  const double c56 = value_at(5, 6);
  const double c510 = value_at(5, 10);
  c.pass = c12 > c25 && c25 > c56 && c56 > c510;
  c.detail = "at lambda " + g6(lam) + ": C(1,2)=" + g6(c12) + " > C(2,5)=" + g6(c25) +
             " > C(5,6)=" + g6(c56) + " > C(5,10)=" + g6(c510);
  return c;
}

Criterion criterion_6() {
  Criterion c;
  const Lattice lat7 = build_patch(1, 1.0);
  const HamiltonianOperator op = build_operator(lat7, 0.1);
  SolverConfig cfg;
  cfg.block_size = 6;
  cfg.n_wanted = 2;
  cfg.outer_tol = 1e-12;
  const EigenResult res = solve_lowest(op, cfg);
  const double gap_tm = res.eigenvalues[1] - res.eigenvalues[0];
  const DenseEig ref = dense_eigensolve(dense_hamiltonian(lat7, 0.1));
  const double gap_dense = ref.eigenvalues[1] - ref.eigenvalues[0];
  const bool degenerate_ok = gap_tm < 1e-6;
  const bool oracle_ok = std::abs(gap_tm - gap_dense) <= 1e-10;

  SweepSpec g7;
  g7.grid = {0.5, 3.0, 0.05};
  const auto curve7 = gap_curve(g7);
  const double cross7 = first_crossing(curve7, 0.1);
  const bool sep7 = cross7 >= 1.0 && cross7 <= 2.0;

  SweepSpec g19;
  g19.lattice.shell_radius = 2;
  g19.grid = {1.5, 3.5, 0.1};
  const auto curve19 = gap_curve(g19);
  const double cross19 = first_crossing(curve19, 0.1);
  const bool sep19 = cross19 >= 2.0 && cross19 <= 3.0;

  const bool conv = res.converged &&
                    std::all_of(curve7.begin(), curve7.end(),
                                [](const GapPoint& g) { return g.converged; }) &&
                    std::all_of(curve19.begin(), curve19.end(),
                                [](const GapPoint& g) { return g.converged; });
  c.pass = degenerate_ok && oracle_ok && sep7 && sep19 && conv;
  c.detail = "7-site gap(0.1) = " + g6(gap_tm) + " (want < 1e-6), |solver - dense| = " +
             g6(std::abs(gap_tm - gap_dense)) +
             " (want <= 1e-10); gap passes 0.1 at lambda " + g6(cross7) +
             " (want in [1, 2], near 1.5) / " + g6(cross19) + " (want in [2, 3], near 2.5)";
  return c;
}

Criterion criterion_7() {
  Criterion c;
  const std::vector<double> alphas{0.0, 0.5, 1.0};

  struct PairTrend {
    int i = 0, j = 0;
    std::vector<double> peak_c;    // per alpha
    std::vector<double> peak_lam;  // per alpha
  };
  auto scan_trends = [&](int shell, int site, const std::vector<std::pair<int, int>>& pairs,
                         LambdaGrid grid) {
    SweepSpec base;
    base.lattice.shell_radius = shell;
    base.grid = grid;
    base.pairs = pairs;
    const auto records = impurity_scan(base, site, alphas);
    if (!all_converged(records)) throw std::runtime_error("impurity scan did not converge");
    std::vector<PairTrend> trends;
    for (const auto& [i, j] : pairs) {
      PairTrend t;
      t.i = i;
      t.j = j;
      for (double a : alphas) {
        const PairCurve curve = extract_curve(records, i, j, a, false);
        const Peak peak = find_peak(curve.lams, curve.vals);
        t.peak_c.push_back(peak.value);
        t.peak_lam.push_back(peak.lambda);
      }
      trends.push_back(std::move(t));
    }
    return trends;
  };

  // pairs away from the impurity must weaken monotonically and their peaks
  // must move; the strengthened bonds themselves entangle more, which is
  // reported but tested for the shift only
  auto touches = [](const PairTrend& t, int site) { return t.i == site || t.j == site; };
  bool monotone = true;
  bool shifted = true;
  std::ostringstream notes;

  const Lattice lat7 = build_patch(1, 1.0);
  const auto trends7 = scan_trends(1, 4, nearest_pairs(lat7), {1.5, 4.5, 0.05});
  for (const PairTrend& t : trends7) {
    const bool away = !touches(t, 4);
    if (away)
      monotone = monotone && t.peak_c[1] <= t.peak_c[0] + 1e-12 &&
                 t.peak_c[2] <= t.peak_c[1] + 1e-12;
    shifted = shifted && std::abs(t.peak_lam[2] - t.peak_lam[0]) >= 0.05 - 1e-9;
  }
  notes << "7-site center impurity: ring peak C(1,2) " << g6(trends7[0].peak_c[0]) << " -> "
        << g6(trends7[0].peak_c[1]) << " -> " << g6(trends7[0].peak_c[2])
        << ", spoke peak C(1,4) " << g6(trends7[2].peak_c[0]) << " -> "
        << g6(trends7[2].peak_c[1]) << " -> " << g6(trends7[2].peak_c[2])
        << " (strengthened bond, rises)";

  const std::vector<std::pair<int, int>> pairs19{{1, 2}, {2, 5}, {5, 6}, {5, 10}};
  const auto trends19 = scan_trends(2, 10, pairs19, {2.0, 5.0, 0.1});
  for (const PairTrend& t : trends19) {
    const bool away = !touches(t, 10);
    if (away)
      monotone = monotone && t.peak_c[1] <= t.peak_c[0] + 1e-12 &&
                 t.peak_c[2] <= t.peak_c[1] + 1e-12;
    shifted = shifted && std::abs(t.peak_lam[2] - t.peak_lam[0]) >= 0.1 - 1e-9;
  }
  notes << "; 19-site center impurity: peak C(1,2) " << g6(trends19[0].peak_c[0]) << " -> "
        << g6(trends19[0].peak_c[1]) << " -> " << g6(trends19[0].peak_c[2])
        << ", peak C(5,10) " << g6(trends19[3].peak_c[0]) << " -> "
        << g6(trends19[3].peak_c[1]) << " -> " << g6(trends19[3].peak_c[2])
        << " (strengthened bond, rises); peak lambda shifts for every pair";

  c.pass = monotone && shifted;
  c.detail = notes.str();
  return c;
}

Criterion check_group(const std::vector<CheckResult>& checks) {
  Criterion c;
  c.pass = std::all_of(checks.begin(), checks.end(),
                       [](const CheckResult& r) { return r.pass; });
  std::ostringstream ss;
  bool first = true;
  for (const CheckResult& r : checks) {
    if (!first) ss << "; ";
    first = false;
    ss << r.name << (r.pass ? " ok (" : " FAILED (") << r.detail << ")";
  }
  c.detail = ss.str();
  return c;
}

Criterion criterion_8() {
  VerifyOptions opts;
  opts.trials = 200;
  opts.max_sites = 10;
  const auto t0 = clock_type::now();
  const auto checks = oracle_equivalence_checks(opts);
  const double dt = seconds_since(t0);
  Criterion c = check_group(checks);
  c.pass = c.pass && dt < 300.0;
  c.detail += "; runtime " + g6(dt) + "s (limit 300s)";
  return c;
}

Criterion criterion_9() {
  VerifyOptions opts;
  opts.trials = 200;
  opts.max_sites = 10;
  return check_group(invariant_checks(opts));
}

}  // namespace

int main() {
  struct Entry {
    int id;
    const char* name;
    std::function<Criterion()> run;
  };
  const std::vector<Entry> entries{
      {1, "seven_site_peak", criterion_1},
      {2, "nineteen_site_peak", criterion_2},
      {3, "derivative_peak_locations", criterion_3},
      {4, "distant_pair_decoupling", criterion_4},
      {5, "pair_ordering_at_peak", criterion_5},
      {6, "gap_degeneracy_and_separation", criterion_6},
      {7, "impurity_peak_monotonicity_and_shift", criterion_7},
      {8, "random_instance_oracle_equivalence", criterion_8},
      {9, "structural_invariants", criterion_9},
  };

  int failures = 0;
  for (const Entry& e : entries) {
    const auto t0 = clock_type::now();
    Criterion c;
    try {
      c = e.run();
    } catch (const std::exception& ex) {
      c.pass = false;
      c.detail = std::string("exception: ") + ex.what();
    }
    if (!c.pass) ++failures;
    std::printf("%s  %d %s  %s  [%.1fs]\n", c.pass ? "PASS" : "FAIL", e.id, e.name,
                c.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("\n%d of 9 criteria passed\n", 9 - failures);
  return failures;
}
