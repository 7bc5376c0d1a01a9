#include "tfim2d/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "tfim2d/entanglement.hpp"
#include "tfim2d/hamiltonian_op.hpp"
#include "tfim2d/rdm.hpp"

namespace tfim2d {

namespace {

constexpr double kLambdaZero = 1e-15;

std::vector<std::pair<int, int>> resolve_pairs(const SweepSpec& spec, const Lattice& lat) {
  std::vector<std::pair<int, int>> pairs =
      spec.pairs.empty() ? nearest_pairs(lat) : spec.pairs;
  for (auto& [i, j] : pairs) {
    if (i < 1 || i > lat.n_sites || j < 1 || j > lat.n_sites || i == j)
      throw std::invalid_argument("run_sweep: invalid site pair");
    if (i > j) std::swap(i, j);
  }
  return pairs;
}

SolverConfig resolve_solver(const SweepSpec& spec) {
  SolverConfig cfg = spec.solver;
  if (spec.want_gap && cfg.n_wanted < 2) cfg.n_wanted = 2;
  if (cfg.block_size < cfg.n_wanted + 1) cfg.block_size = cfg.n_wanted + 1;
  return cfg;
}

}  // namespace

std::vector<double> LambdaGrid::points() const {
  if (!std::isfinite(start) || !std::isfinite(stop) || stop < start)
    throw std::invalid_argument("LambdaGrid: bad range");
  if (stop == start) return {start};
  if (!(step > 0.0)) throw std::invalid_argument("LambdaGrid: step must be positive");
  const double count = (stop - start) / step;
  const long long n = std::llround(count);
  if (n < 1 || std::abs(count - static_cast<double>(n)) > 1e-6)
    throw std::invalid_argument("LambdaGrid: step does not divide the range");
  std::vector<double> pts(static_cast<std::size_t>(n) + 1);
  for (long long k = 0; k <= n; ++k)
    pts[static_cast<std::size_t>(k)] = start + static_cast<double>(k) * step;
  pts.back() = stop;
  return pts;
}

std::vector<SweepRecord> run_sweep(const SweepSpec& spec) {
  const Lattice lat = build_patch(spec.lattice.shell_radius, spec.lattice.j, spec.lattice.impurity);
  const auto pairs = resolve_pairs(spec, lat);
  const SolverConfig base_cfg = resolve_solver(spec);
  const double alpha = lat.impurity_site != 0 ? lat.alpha : 0.0;

  std::vector<SweepRecord> records;
  Block warm;
  bool have_warm = false;

  for (double lam : spec.grid.points()) {
    if (std::abs(lam) < kLambdaZero) {
      // classical point: the ground manifold is field-free and product-like,
      // there is no coherence to entangle any pair, and the two aligned
      // states are exactly degenerate
      for (const auto& [i, j] : pairs) {
        SweepRecord rec;
        rec.lambda = lam;
        rec.site_i = i;
        rec.site_j = j;
        rec.concurrence = 0.0;
        rec.eof = 0.0;
        if (spec.want_gap) rec.gap = 0.0;
        rec.alpha = alpha;
        records.push_back(rec);
      }
      continue;
    }

    const HamiltonianOperator op = build_operator(lat, lam * lat.j_base);
    const EigenResult res = solve_lowest(op, base_cfg, have_warm ? &warm : nullptr);
    if (spec.warm_start) {
      warm = res.basis;
      have_warm = true;
    }

    const std::span<const double> ground = res.eigenvectors.col_span(0);
    for (const auto& [i, j] : pairs) {
      const ReducedDensityMatrix rho = reduced_density_matrix(ground, i, j);
      const ConcurrenceResult conc = concurrence_x_state(rho);
      SweepRecord rec;
      rec.lambda = lam;
      rec.site_i = i;
      rec.site_j = j;
      rec.concurrence = conc.concurrence;
      rec.eof = conc.eof;
      if (spec.want_gap) rec.gap = res.eigenvalues[1] - res.eigenvalues[0];
      rec.alpha = alpha;
      rec.converged = res.converged;
      records.push_back(rec);
    }
  }

  if (spec.want_derivative) attach_derivatives(records);
  return records;
}

std::vector<std::pair<double, double>> derivative_curve(std::span<const double> lambdas,
                                                        std::span<const double> values) {
  const std::size_t n = lambdas.size();
  if (n != values.size()) throw std::invalid_argument("derivative_curve: length mismatch");
  if (n < 2) throw std::invalid_argument("derivative_curve: need at least two points");
  const double h = lambdas[1] - lambdas[0];
  if (!(h > 0.0)) throw std::invalid_argument("derivative_curve: grid must increase");
  for (std::size_t k = 1; k < n; ++k)
    if (std::abs((lambdas[k] - lambdas[k - 1]) - h) > 1e-6 * h)
      throw std::invalid_argument("derivative_curve: grid is not uniform");

  std::vector<std::pair<double, double>> out(n);
  out[0] = {lambdas[0], (values[1] - values[0]) / h};
  for (std::size_t k = 1; k + 1 < n; ++k)
    out[k] = {lambdas[k], (values[k + 1] - values[k - 1]) / (2.0 * h)};
  out[n - 1] = {lambdas[n - 1], (values[n - 1] - values[n - 2]) / h};
  return out;
}

void attach_derivatives(std::vector<SweepRecord>& records) {
  std::map<std::tuple<double, int, int>, std::vector<std::size_t>> groups;
  for (std::size_t k = 0; k < records.size(); ++k)
    groups[{records[k].alpha, records[k].site_i, records[k].site_j}].push_back(k);
  for (auto& [key, idx] : groups) {
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return records[a].lambda < records[b].lambda; });
    if (idx.size() < 2) continue;
    std::vector<double> lams(idx.size()), vals(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) {
      lams[k] = records[idx[k]].lambda;
      vals[k] = records[idx[k]].concurrence;
    }
    const auto curve = derivative_curve(lams, vals);
    for (std::size_t k = 0; k < idx.size(); ++k)
      records[idx[k]].d_concurrence = curve[k].second;
  }
}

std::vector<GapPoint> gap_curve(const SweepSpec& spec) {
  SweepSpec local = spec;
  local.want_gap = true;
  local.pairs.clear();
  const Lattice lat = build_patch(local.lattice.shell_radius, local.lattice.j, local.lattice.impurity);
  const SolverConfig cfg = resolve_solver(local);

  std::vector<GapPoint> out;
  Block warm;
  bool have_warm = false;
  for (double lam : local.grid.points()) {
    if (std::abs(lam) < kLambdaZero) {
      out.push_back({lam, 0.0, true});
      continue;
    }
    const HamiltonianOperator op = build_operator(lat, lam * lat.j_base);
    const EigenResult res = solve_lowest(op, cfg, have_warm ? &warm : nullptr);
    if (local.warm_start) {
      warm = res.basis;
      have_warm = true;
    }
    out.push_back({lam, res.eigenvalues[1] - res.eigenvalues[0], res.converged});
  }
  return out;
}

std::vector<SweepRecord> impurity_scan(const SweepSpec& base, int impurity_site,
                                       std::span<const double> alphas) {
  if (alphas.empty()) throw std::invalid_argument("impurity_scan: empty alpha list");
  std::vector<SweepRecord> all;
  for (double a : alphas) {
    SweepSpec spec = base;
    spec.lattice.impurity = Impurity{impurity_site, a};
    auto part = run_sweep(spec);
    all.insert(all.end(), part.begin(), part.end());
  }
  return all;
}

Peak find_peak(std::span<const double> lambdas, std::span<const double> values) {
  if (lambdas.empty() || lambdas.size() != values.size())
    throw std::invalid_argument("find_peak: bad input");
  std::size_t best = 0;
  for (std::size_t k = 1; k < values.size(); ++k)
    if (values[k] > values[best]) best = k;

  Peak peak;
  peak.index = best;
  peak.lambda = lambdas[best];
  peak.value = values[best];
  peak.lambda_refined = lambdas[best];
  if (best > 0 && best + 1 < values.size()) {
    const double h = lambdas[best + 1] - lambdas[best];
    const double denom = values[best - 1] - 2.0 * values[best] + values[best + 1];
    if (denom < 0.0)
      peak.lambda_refined = lambdas[best] + 0.5 * h * (values[best - 1] - values[best + 1]) / denom;
  }
  return peak;
}

}  // namespace tfim2d
