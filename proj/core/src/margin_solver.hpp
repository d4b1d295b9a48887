#pragma once

// Internal max-margin solvers shared by certify and search.

#include <vector>

#include "antipode/certify.hpp"
#include "antipode/lp.hpp"

namespace antipode::detail {

/// Sandwich rows a with the constraint a.f <= 0: (z - x_i) and (x_j - z) for
/// every other point z. Zero rows and exact duplicates are dropped.
template <class T>
std::vector<std::vector<T>> sandwich_rows(const std::vector<std::vector<T>>& points, std::size_t i,
                                          std::size_t j) {
  std::vector<std::vector<T>> rows;
  auto push = [&](std::vector<T> row) {
    bool zero = true;
    for (const auto& x : row) zero = zero && (x == 0);
    if (zero) return;
    for (const auto& r : rows) {
      if (r == row) return;
    }
    rows.push_back(std::move(row));
  };
  for (std::size_t z = 0; z < points.size(); ++z) {
    if (z == i || z == j) continue;
    push(difference<T>(points[z], points[i]));
    push(difference<T>(points[j], points[z]));
  }
  return rows;
}

template <class T>
struct PolytopalMargin {
  std::vector<T> functional;
  T margin = 0;
  lp::Status status = lp::Status::Optimal;
};

/// One LP over the exact dual ball of a polytopal space.
///  - vertex route: f free, v.f <= 1 for every ball vertex v;
///  - facet route: f = sum lambda_l g_l, lambda >= 0, sum lambda <= 1.
/// `penalty` > 0 relaxes every sandwich row by a shared slack s >= 0 that
/// costs `penalty` in the objective.
template <class T>
PolytopalMargin<T> polytopal_margin(const NormSpace& space, const std::vector<T>& c,
                                    const std::vector<std::vector<T>>& rows,
                                    const std::vector<std::vector<T>>& gens, T penalty = T(0)) {
  const std::size_t n = space.dim();
  const bool relaxed = penalty > 0;
  PolytopalMargin<T> out;
  if (space.has_vertex_route()) {
    const std::size_t nv = n + (relaxed ? 1 : 0);
    lp::Problem<T> problem(nv);
    if (relaxed) problem.free[n] = false;
    for (std::size_t k = 0; k < n; ++k) problem.objective[k] = c[k];
    if (relaxed) problem.objective[n] = -penalty;
    for (const auto& g : gens) {
      std::vector<T> row(g.begin(), g.end());
      if (relaxed) row.push_back(T(0));
      problem.add_row(std::move(row), T(1));
    }
    for (const auto& a : rows) {
      std::vector<T> row(a.begin(), a.end());
      if (relaxed) row.push_back(T(-1));
      problem.add_row(std::move(row), T(0));
    }
    auto sol = lp::maximize(problem);
    out.status = sol.status;
    out.functional.assign(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(n));
    out.margin = dot<T>(out.functional, c);
    return out;
  }
  const std::size_t L = gens.size();
  const std::size_t nv = L + (relaxed ? 1 : 0);
  lp::Problem<T> problem(nv, false);
  for (std::size_t l = 0; l < L; ++l) problem.objective[l] = dot<T>(gens[l], c);
  if (relaxed) problem.objective[L] = -penalty;
  {
    std::vector<T> row(nv, T(1));
    if (relaxed) row[L] = T(0);
    problem.add_row(std::move(row), T(1));
  }
  for (const auto& a : rows) {
    std::vector<T> row(nv, T(0));
    for (std::size_t l = 0; l < L; ++l) row[l] = dot<T>(gens[l], a);
    if (relaxed) row[L] = T(-1);
    problem.add_row(std::move(row), T(0));
  }
  auto sol = lp::maximize(problem);
  out.status = sol.status;
  out.functional.assign(n, T(0));
  for (std::size_t l = 0; l < L; ++l) {
    if (sol.x[l] == 0) continue;
    for (std::size_t k = 0; k < n; ++k) out.functional[k] += sol.x[l] * gens[l][k];
  }
  out.margin = dot<T>(out.functional, c);
  return out;
}

struct CuttingPlaneResult {
  Functional functional;
  double lower = 0.0;  // value of `functional`, which is feasible
  double upper = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Cutting-plane outer approximation of the dual ball for closed-form
/// norms. With penalty > 0 the rows are relaxed (see relaxed_margin); the
/// returned value is then the penalized objective.
CuttingPlaneResult cutting_plane_margin(const NormSpace& space, const Vector& c,
                                        const std::vector<std::vector<double>>& rows,
                                        const Tolerances& tol, double penalty = 0.0);

/// Largest a.f over the rows (positive = violated).
double max_violation(const std::vector<std::vector<double>>& rows, const Functional& f);

}  // namespace antipode::detail
