#include "tfim2d/tracemin.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <stdexcept>

namespace tfim2d {

namespace {

double uniform_symmetric(std::mt19937_64& rng) {
  // top 53 bits -> [0,1), mapped to [-1,1); avoids distribution objects so
  // streams are identical across standard libraries
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return 2.0 * u - 1.0;
}

void fill_random(std::span<double> v, std::mt19937_64& rng) {
  for (double& x : v) x = uniform_symmetric(rng);
}

/// y -= xbar (xbar^T y); returns the coefficient norm that was removed.
double project_out(const Block& xbar, std::span<double> y, std::vector<double>& coeff) {
  coeff.resize(static_cast<std::size_t>(xbar.cols));
  double norm2_coeff = 0.0;
  for (int k = 0; k < xbar.cols; ++k) {
    coeff[static_cast<std::size_t>(k)] = dot(xbar.col_span(k), y);
    norm2_coeff += coeff[static_cast<std::size_t>(k)] * coeff[static_cast<std::size_t>(k)];
  }
  for (int k = 0; k < xbar.cols; ++k)
    axpy(-coeff[static_cast<std::size_t>(k)], xbar.col_span(k), y);
  return std::sqrt(norm2_coeff);
}

void format_csv_line(std::ostream& out, int outer, double trace, double max_residual) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%d,%.12g,%.12g\n", outer, trace, max_residual);
  out << buf;
}

}  // namespace

RitzSection ritz_section(const SymOperator& op, Block x, std::uint64_t replacement_seed) {
  const std::size_t dim = op.dimension();
  if (x.rows != dim || x.cols < 1) throw std::invalid_argument("ritz_section: bad block shape");
  const int p = x.cols;
  std::mt19937_64 rng(replacement_seed ^ 0x9e3779b97f4a7c15ULL);

  RitzSection sec;
  std::vector<double> g, omega, v;
  for (int attempt = 0;; ++attempt) {
    if (attempt > 6) throw std::runtime_error("ritz_section: rank recovery failed");
    gram(x, x, g);
    jacobi_eigensymm(g.data(), p, omega, v);
    const double wmax = omega.back();
    if (!(wmax > 0.0)) {
      for (int k = 0; k < p; ++k) fill_random(x.col_span(k), rng);
      sec.rank_replacements += p;
      continue;
    }
    std::vector<int> deficient;
    for (int k = 0; k < p; ++k)
      if (omega[static_cast<std::size_t>(k)] < 1e-12 * wmax) deficient.push_back(k);
    if (deficient.empty()) {
      std::vector<double> m(static_cast<std::size_t>(p) * p);
      for (int k = 0; k < p; ++k) {
        const double s = 1.0 / std::sqrt(omega[static_cast<std::size_t>(k)]);
        for (int i = 0; i < p; ++i)
          m[static_cast<std::size_t>(k) * p + i] = v[static_cast<std::size_t>(k) * p + i] * s;
      }
      multiply_small(x, m.data(), p, sec.qtilde);
      break;
    }
    // replace, for each collapsed Gram direction, the column leaning on it most
    std::vector<bool> replaced(static_cast<std::size_t>(p), false);
    for (int idx : deficient) {
      int pick = -1;
      double best = -1.0;
      for (int i = 0; i < p; ++i) {
        const double a = std::abs(v[static_cast<std::size_t>(idx) * p + i]);
        if (!replaced[static_cast<std::size_t>(i)] && a > best) {
          best = a;
          pick = i;
        }
      }
      if (pick < 0) pick = idx;
      replaced[static_cast<std::size_t>(pick)] = true;
      fill_random(x.col_span(pick), rng);
      ++sec.rank_replacements;
    }
  }

  Block aq;
  op.apply(sec.qtilde, aq);
  std::vector<double> hs;
  gram(sec.qtilde, aq, hs);
  for (int r = 0; r < p; ++r)
    for (int c = r + 1; c < p; ++c) {
      const double s = 0.5 * (hs[static_cast<std::size_t>(c) * p + r] +
                              hs[static_cast<std::size_t>(r) * p + c]);
      hs[static_cast<std::size_t>(c) * p + r] = s;
      hs[static_cast<std::size_t>(r) * p + c] = s;
    }
  jacobi_eigensymm(hs.data(), p, sec.ritz_values, sec.w);
  multiply_small(sec.qtilde, sec.w.data(), p, sec.xbar);
  multiply_small(aq, sec.w.data(), p, sec.a_xbar);
  return sec;
}

CorrectionResult correction_step(const SymOperator& op, const RitzSection& section,
                                 double inner_rel_tol, int max_inner) {
  if (!(inner_rel_tol > 0.0) || !(inner_rel_tol < 1.0))
    throw std::invalid_argument("correction_step: inner tolerance must be in (0, 1)");
  const std::size_t dim = section.xbar.rows;
  const int p = section.xbar.cols;

  CorrectionResult out;
  out.d = Block(dim, p);
  std::vector<double> r(dim), pdir(dim), q(dim), coeff;

  for (int k = 0; k < p; ++k) {
    const double* ax = section.a_xbar.col(k);
    const double col_scale = norm2({ax, dim});
    std::copy(ax, ax + dim, r.begin());
    project_out(section.xbar, r, coeff);
    double rr = dot(r, r);
    const double stop = (inner_rel_tol * inner_rel_tol) * rr;
    // below this the projected residual is rounding noise, not signal
    const double noise = 1e-11 * std::max(col_scale, 1.0);
    if (rr <= 1e-28 * std::max(col_scale * col_scale, 1e-30)) continue;
    std::copy(r.begin(), r.end(), pdir.begin());
    double* dcol = out.d.col(k);

    int iter = 0;
    while (iter < max_inner && rr > stop) {
      op.apply_vec(pdir, q);
      project_out(section.xbar, q, coeff);
      const double pq = dot(pdir, q);
      const double pp = dot(pdir, pdir);
      if (!(pq > 1e-8 * pp)) {
        // tiny or negative curvature: either the direction is projection
        // noise (stop the column, the next section pass cleans it up) or
        // the shifted operator is indefinite (flag it)
        if (pq <= 0.0 && rr > noise * noise) out.curvature_breakdown = true;
        break;
      }
      const double alpha = rr / pq;
      axpy(alpha, pdir, {dcol, dim});
      axpy(-alpha, q, r);
      // re-project, then measure and remove what is left of the drift
      project_out(section.xbar, r, coeff);
      const double drift_norm = project_out(section.xbar, r, coeff);
      const double rnorm = norm2(r);
      if (rnorm > 0.0)
        out.max_projection_drift = std::max(out.max_projection_drift, drift_norm / rnorm);
      const double rr_new = dot(r, r);
      const double beta = rr_new / rr;
      for (std::size_t s = 0; s < dim; ++s) pdir[s] = r[s] + beta * pdir[s];
      rr = rr_new;
      ++iter;
    }
    out.cg_iterations += iter;
    if (out.curvature_breakdown) break;
  }
  return out;
}

EigenResult solve_lowest(const SymOperator& op, const SolverConfig& config,
                         const Block* warm_start) {
  const std::size_t dim = op.dimension();
  const int p = config.block_size;
  if (p < 1 || static_cast<std::size_t>(p) > dim)
    throw std::invalid_argument("solve_lowest: block size must be in [1, dim]");
  if (config.n_wanted < 1 || config.n_wanted > p)
    throw std::invalid_argument("solve_lowest: n_wanted must be in [1, block_size]");
  if (!(config.outer_tol > 0.0))
    throw std::invalid_argument("solve_lowest: outer tolerance must be positive");
  if (!(config.inner_rel_tol > 0.0) || !(config.inner_rel_tol < 1.0))
    throw std::invalid_argument("solve_lowest: inner tolerance must be in (0, 1)");
  if (config.max_outer < 1) throw std::invalid_argument("solve_lowest: max_outer must be >= 1");
  if (config.shift && !std::isfinite(*config.shift))
    throw std::invalid_argument("solve_lowest: non-finite shift");

  const double sigma_base = config.shift ? *config.shift
                                         : std::abs(op.spectrum_lower_bound()) + 1.0;
  double sigma = sigma_base;
  double headroom_factor = 8.0;

  std::mt19937_64 rng(config.seed);
  Block x(dim, p);
  int seeded_cols = 0;
  if (warm_start && warm_start->rows == dim && warm_start->cols >= 1) {
    seeded_cols = std::min(p, warm_start->cols);
    for (int k = 0; k < seeded_cols; ++k) {
      const double* src = warm_start->col(k);
      std::copy(src, src + dim, x.col(k));
    }
  }
  for (int k = seeded_cols; k < p; ++k) fill_random(x.col_span(k), rng);

  EigenResult res;
  if (config.diagnostics) *config.diagnostics << "outer_iter,trace,max_residual\n";

  std::vector<double> resid(static_cast<std::size_t>(p), 0.0);
  std::vector<double> rvec(dim);

  for (int outer = 1; outer <= config.max_outer; ++outer) {
    ShiftedOperator shifted(op, sigma);
    RitzSection sec = ritz_section(shifted, std::move(x), config.seed + static_cast<std::uint64_t>(outer));

    double trace = 0.0;
    for (int k = 0; k < p; ++k) trace += sec.ritz_values[static_cast<std::size_t>(k)] - sigma;
    if (!res.trace_history.empty() &&
        trace > res.trace_history.back() + 1e-9 * std::max(1.0, std::abs(res.trace_history.back())))
      res.trace_monotone = false;
    res.trace_history.push_back(trace);

    for (int k = 0; k < p; ++k) {
      const double* ax = sec.a_xbar.col(k);
      const double* xb = sec.xbar.col(k);
      const double lam = sec.ritz_values[static_cast<std::size_t>(k)];
      for (std::size_t s = 0; s < dim; ++s) rvec[s] = ax[s] - lam * xb[s];
      resid[static_cast<std::size_t>(k)] = norm2(rvec);
    }

    double max_res_wanted = 0.0;
    bool converged = true;
    for (int k = 0; k < config.n_wanted; ++k) {
      const double theta = sec.ritz_values[static_cast<std::size_t>(k)] - sigma;
      max_res_wanted = std::max(max_res_wanted, resid[static_cast<std::size_t>(k)]);
      if (resid[static_cast<std::size_t>(k)] > config.outer_tol * std::max(1.0, std::abs(theta)))
        converged = false;
    }
    if (config.diagnostics) format_csv_line(*config.diagnostics, outer, trace, max_res_wanted);

    if (converged || outer == config.max_outer) {
      res.converged = converged;
      res.outer_iterations = outer;
      res.shift_used = sigma;
      res.eigenvalues.assign(static_cast<std::size_t>(config.n_wanted), 0.0);
      res.residual_norms.assign(static_cast<std::size_t>(config.n_wanted), 0.0);
      res.eigenvectors = Block(dim, config.n_wanted);
      for (int k = 0; k < config.n_wanted; ++k) {
        res.eigenvalues[static_cast<std::size_t>(k)] =
            sec.ritz_values[static_cast<std::size_t>(k)] - sigma;
        res.residual_norms[static_cast<std::size_t>(k)] = resid[static_cast<std::size_t>(k)];
        const double* src = sec.xbar.col(k);
        std::copy(src, src + dim, res.eigenvectors.col(k));
      }
      res.basis_values.assign(static_cast<std::size_t>(p), 0.0);
      for (int k = 0; k < p; ++k)
        res.basis_values[static_cast<std::size_t>(k)] =
            sec.ritz_values[static_cast<std::size_t>(k)] - sigma;
      res.basis = std::move(sec.xbar);
      return res;
    }

    CorrectionResult corr = correction_step(shifted, sec, config.inner_rel_tol, config.max_inner);
    if (corr.curvature_breakdown) {
      if (sigma >= sigma_base * (1.0 - 1e-12))
        throw std::runtime_error(
            "solve_lowest: negative curvature with the full spectral shift; "
            "operator is outside what the shift can regularize");
      sigma = sigma_base;
      headroom_factor *= 8.0;
    }

    x = std::move(sec.xbar);
    for (int k = 0; k < p; ++k) axpy(-1.0, corr.d.col_span(k), x.col_span(k));

    if (!config.shift && config.adaptive_shift && !corr.curvature_breakdown) {
      const double theta0 = sec.ritz_values[0] - sigma;
      const double spread =
          sec.ritz_values[static_cast<std::size_t>(p - 1)] - sec.ritz_values[0];
      double max_res_all = 0.0;
      for (int k = 0; k < p; ++k) max_res_all = std::max(max_res_all, resid[static_cast<std::size_t>(k)]);
      if (max_res_all < 0.05 * std::max(1.0, spread)) {
        const double headroom = std::max(headroom_factor * max_res_all,
                                         1e-8 * std::max(1.0, std::abs(theta0)));
        const double sigma_try = -theta0 + headroom;
        if (sigma_try < sigma_base) sigma = std::max(0.0, sigma_try);
      }
    }
  }
  throw std::logic_error("solve_lowest: unreachable");
}

}  // namespace tfim2d
