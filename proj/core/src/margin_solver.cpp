#include "margin_solver.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace antipode::detail {

namespace {

// Rows lying this far on the wrong side are still accepted as feasible (the
// LP pivots at 1e-11); the witness records the actual slack.
constexpr double kFeasTol = 1e-10;
constexpr int kBisectionSteps = 200;

double dotv(const std::vector<double>& a, const Functional& f) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * f[k];
  return s;
}

Vector combine(const Vector& c, const std::vector<std::vector<double>>& rows,
               const std::vector<std::size_t>& active, const std::vector<double>& mu) {
  Vector r = c;
  for (std::size_t t = 0; t < active.size(); ++t) {
    for (std::size_t k = 0; k < r.dim(); ++k) r[k] -= mu[t] * rows[active[t]][k];
  }
  return r;
}

struct Polished {
  Functional f;
  double mu = 0.0;
};

Functional support_or_zero(const NormSpace& space, const Vector& r) {
  if (r.is_zero()) return Functional(r.dim());
  return dual_support_point(space, r);
}

// Minimizes mu -> ‖base - mu a‖ by bisection on the sign of its derivative
// -a.g(mu), g(mu) the dual support point of base - mu a. Returns the convex
// combination of the two bracketing support points with a.f = 0, which stays
// inside the dual ball even across kinks of the norm.
Polished polish_one(const NormSpace& space, const Vector& base, const std::vector<double>& a) {
  Functional af(a);
  const double a_norm = primal_norm(space, Vector(a));
  const double bound = 2.0 * primal_norm(space, base) / a_norm + 1e-12;
  double lo = -bound, hi = bound;
  auto eval = [&](double mu) {
    Vector r = base;
    for (std::size_t k = 0; k < r.dim(); ++k) r[k] -= mu * a[k];
    return support_or_zero(space, r);
  };
  Functional g_lo = eval(lo), g_hi = eval(hi);
  double h_lo = dotv(a, g_lo), h_hi = dotv(a, g_hi);
  if (h_lo <= 0.0) return {g_lo, lo};
  if (h_hi >= 0.0) return {g_hi, hi};
  for (int it = 0; it < kBisectionSteps && hi - lo > 1e-17 * bound; ++it) {
    double mid = 0.5 * (lo + hi);
    Functional g = eval(mid);
    double h = dotv(a, g);
    if (h > 0.0) {
      lo = mid;
      g_lo = g;
      h_lo = h;
    } else if (h < 0.0) {
      hi = mid;
      g_hi = g;
      h_hi = h;
    } else {
      return {g, mid};
    }
  }
  const double t = -h_hi / (h_lo - h_hi);
  Functional f = t * g_lo + (1.0 - t) * g_hi;
  return {f, 0.5 * (lo + hi)};
}

struct ActivePolish {
  Functional f;
  std::vector<double> mu;
};

// Equality-constrained refinement on one or two active rows: minimizes
// ‖c - sum mu_t a_t‖ over the multipliers. At the minimizer the dual support
// point g satisfies a_t.g = 0, and if mu >= 0 the norm value is also an upper
// bound on the margin (Lagrangian duality), so KKT is certified.
std::optional<ActivePolish> polish_active(const NormSpace& space, const Vector& c,
                                          const std::vector<std::vector<double>>& rows,
                                          const std::vector<std::size_t>& active) {
  if (active.size() == 1) {
    auto p = polish_one(space, c, rows[active[0]]);
    return ActivePolish{p.f, {p.mu}};
  }
  if (active.size() != 2) return std::nullopt;
  const auto& a1 = rows[active[0]];
  const auto& a2 = rows[active[1]];
  const double bound = 2.0 * primal_norm(space, c) / primal_norm(space, Vector(a1)) + 1e-12;
  auto inner = [&](double mu1) {
    Vector base = c;
    for (std::size_t k = 0; k < base.dim(); ++k) base[k] -= mu1 * a1[k];
    return polish_one(space, base, a2);
  };
  double lo = -bound, hi = bound;
  Polished p_lo = inner(lo), p_hi = inner(hi);
  double h_lo = dotv(a1, p_lo.f), h_hi = dotv(a1, p_hi.f);
  if (h_lo <= 0.0) return ActivePolish{p_lo.f, {lo, p_lo.mu}};
  if (h_hi >= 0.0) return ActivePolish{p_hi.f, {hi, p_hi.mu}};
  for (int it = 0; it < 100 && hi - lo > 1e-16 * bound; ++it) {
    double mid = 0.5 * (lo + hi);
    Polished p = inner(mid);
    double h = dotv(a1, p.f);
    if (h > 0.0) {
      lo = mid;
      p_lo = p;
      h_lo = h;
    } else if (h < 0.0) {
      hi = mid;
      p_hi = p;
      h_hi = h;
    } else {
      return ActivePolish{p.f, {mid, p.mu}};
    }
  }
  const double t = -h_hi / (h_lo - h_hi);
  Functional f = t * p_lo.f + (1.0 - t) * p_hi.f;
  return ActivePolish{f, {0.5 * (lo + hi), t * p_lo.mu + (1.0 - t) * p_hi.mu}};
}

}  // namespace

double max_violation(const std::vector<std::vector<double>>& rows, const Functional& f) {
  double worst = -kInfinity;
  for (const auto& a : rows) worst = std::max(worst, dotv(a, f));
  return rows.empty() ? 0.0 : worst;
}

CuttingPlaneResult cutting_plane_margin(const NormSpace& space, const Vector& c,
                                        const std::vector<std::vector<double>>& rows,
                                        const Tolerances& tol, double penalty) {
  const std::size_t n = space.dim();
  const bool relaxed = penalty > 0.0;
  CuttingPlaneResult out;
  const double c_norm = primal_norm(space, c);
  out.functional = Functional(n);
  out.upper = c_norm;

  auto objective = [&](const Functional& f, double s) {
    double v = 0.0;
    for (std::size_t k = 0; k < n; ++k) v += c[k] * f[k];
    return v - penalty * s;
  };
  auto offer = [&](const Functional& f) {
    double viol = max_violation(rows, f);
    double s = 0.0;
    if (relaxed) {
      s = std::max(0.0, viol);
    } else if (viol > kFeasTol) {
      return;
    }
    double value = objective(f, s);
    if (value > out.lower) {
      out.lower = value;
      out.functional = f;
    }
  };

  // Without active sandwich rows the optimum is the dual support point of c.
  Functional g0 = dual_support_point(space, c);
  offer(g0);
  if (!relaxed && out.lower >= c_norm - tol.solver) {
    out.converged = true;
    return out;
  }

  const std::size_t nv = n + (relaxed ? 1 : 0);
  lp::Problem<double> problem(nv);
  if (relaxed) {
    problem.free[n] = false;
    problem.objective[n] = -penalty;
  }
  for (std::size_t k = 0; k < n; ++k) problem.objective[k] = c[k];
  for (const auto& a : rows) {
    std::vector<double> row(a);
    if (relaxed) row.push_back(-1.0);
    problem.add_row(std::move(row), 0.0);
  }
  const std::size_t num_sandwich = rows.size();
  auto add_cut = [&](const Vector& x) {
    std::vector<double> row(x.values());
    if (relaxed) row.push_back(0.0);
    problem.add_row(std::move(row), 1.0);
  };
  for (std::size_t k = 0; k < n; ++k) {
    for (double sign : {1.0, -1.0}) {
      Vector e = unit_vector(n, k, sign);
      add_cut((1.0 / primal_norm(space, e)) * e);
    }
  }
  add_cut((1.0 / c_norm) * c);
  add_cut((-1.0 / c_norm) * c);

  for (std::size_t it = 0; it < tol.max_iterations; ++it) {
    out.iterations = it + 1;
    auto sol = lp::maximize(problem);
    if (sol.status != lp::Status::Optimal) break;
    out.upper = std::min(out.upper, sol.value);
    Functional fstar(std::vector<double>(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(n)));
    const double sstar = relaxed ? sol.x[n] : 0.0;
    const double t = fstar.is_zero() ? 0.0 : dual_norm(space, fstar);
    const bool inside = t <= 1.0;
    Functional scaled_f = inside ? fstar : (1.0 / t) * fstar;
    offer(scaled_f);
    if (relaxed) out.lower = std::max(out.lower, objective(scaled_f, inside ? sstar : sstar / t));
    if (inside && (relaxed || out.lower >= sol.value - tol.solver)) {
      out.upper = std::max(out.lower, out.upper);
      out.converged = true;
      return out;
    }

    if (!relaxed) {
      // Lagrangian bound and active-set refinement from the LP multipliers.
      std::vector<std::size_t> active;
      std::vector<double> lambda;
      double max_dual = 0.0;
      for (std::size_t r = 0; r < num_sandwich; ++r) max_dual = std::max(max_dual, sol.duals[r]);
      for (std::size_t r = 0; r < num_sandwich; ++r) {
        if (sol.duals[r] > 1e-9 * (1.0 + max_dual)) {
          active.push_back(r);
          lambda.push_back(sol.duals[r]);
        }
      }
      Vector residual = combine(c, rows, active, lambda);
      out.upper = std::min(out.upper, primal_norm(space, residual));
      if (!residual.is_zero()) offer(dual_support_point(space, residual));
      if (auto polished = polish_active(space, c, rows, active)) {
        offer(polished->f);
        bool nonneg = std::all_of(polished->mu.begin(), polished->mu.end(), [](double m) { return m >= 0.0; });
        if (nonneg) out.upper = std::min(out.upper, primal_norm(space, combine(c, rows, active, polished->mu)));
      }
    }
    out.upper = std::max(out.upper, out.lower);
    if (out.upper - out.lower <= tol.solver) {
      out.converged = true;
      return out;
    }
    // A cut at an iterate inside the dual ball would not separate it.
    if (inside) break;
    add_cut(norming_vector(space, fstar));
  }
  out.upper = std::max(out.upper, out.lower);
  out.converged = out.upper - out.lower <= tol.solver;
  return out;
}

}  // namespace antipode::detail
