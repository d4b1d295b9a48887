#pragma once

// Dense tableau simplex for   maximize c.x  subject to  A x <= b,  b >= 0,
// with each variable either free or non-negative. The origin is always
// feasible for this family, so no phase one is needed. Every LP in the
// library (gauge evaluation, dual norms of facet polytopes, max-margin
// problems and their cutting-plane relaxations) is put in this form.
//
// Bland's rule is used for both entering and leaving choices: it never cycles
// and makes the returned vertex a deterministic function of the row order,
// which the certificates rely on.

#include <cmath>
#include <cstddef>
#include <vector>

#include "antipode/error.hpp"
#include "antipode/rational.hpp"

namespace antipode::lp {

template <class T>
struct Arith;

template <>
struct Arith<double> {
  static constexpr double eps = 1e-11;
  static bool positive(double x) { return x > eps; }
  static bool negative(double x) { return x < -eps; }
  static bool less(double a, double b) { return a < b - eps * (1.0 + std::fabs(b)); }
  static bool equal(double a, double b) { return std::fabs(a - b) <= eps * (1.0 + std::fabs(b)); }
  static void clean(double& x) {
    if (std::fabs(x) < 1e-15) x = 0.0;
  }
};

template <>
struct Arith<Rational> {
  static bool positive(const Rational& x) { return sgn(x) > 0; }
  static bool negative(const Rational& x) { return sgn(x) < 0; }
  static bool less(const Rational& a, const Rational& b) { return a < b; }
  static bool equal(const Rational& a, const Rational& b) { return a == b; }
  static void clean(Rational&) {}
};

enum class Status { Optimal, Unbounded, IterationLimit };

template <class T>
struct Problem {
  explicit Problem(std::size_t num_vars, bool all_free = true)
      : free(num_vars, all_free), objective(num_vars, T(0)) {}

  std::size_t num_vars() const { return objective.size(); }

  void add_row(std::vector<T> coeffs, T bound) {
    if (coeffs.size() != num_vars()) fail(ErrorKind::DimensionMismatch, "lp row width");
    if (Arith<T>::negative(bound)) fail(ErrorKind::InvalidArgument, "lp rhs must be non-negative");
    rows.push_back(std::move(coeffs));
    rhs.push_back(std::move(bound));
  }

  std::vector<bool> free;
  std::vector<T> objective;
  std::vector<std::vector<T>> rows;
  std::vector<T> rhs;
};

template <class T>
struct Solution {
  Status status = Status::Optimal;
  T value = 0;
  std::vector<T> x;
  std::vector<T> duals;  // one per row, >= 0; A^T y = c at optimum
  std::size_t pivots = 0;
};

template <class T>
Solution<T> maximize(const Problem<T>& problem, std::size_t max_pivots = 200000) {
  using A = Arith<T>;
  const std::size_t n = problem.num_vars();
  const std::size_t m = problem.rows.size();

  // Column layout: structural (x+ and, for free variables, x-), then slacks.
  std::vector<std::size_t> plus_col(n), minus_col(n, SIZE_MAX);
  std::size_t cols = 0;
  for (std::size_t j = 0; j < n; ++j) {
    plus_col[j] = cols++;
    if (problem.free[j]) minus_col[j] = cols++;
  }
  const std::size_t slack0 = cols;
  cols += m;
  const std::size_t width = cols + 1;  // last entry is the rhs

  std::vector<T> tab((m + 1) * width, T(0));
  auto at = [&](std::size_t r, std::size_t c) -> T& { return tab[r * width + c]; };
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      at(i, plus_col[j]) = problem.rows[i][j];
      if (minus_col[j] != SIZE_MAX) at(i, minus_col[j]) = -problem.rows[i][j];
    }
    at(i, slack0 + i) = T(1);
    at(i, cols) = problem.rhs[i];
  }
  // Objective row holds reduced costs; its rhs slot holds -value.
  for (std::size_t j = 0; j < n; ++j) {
    at(m, plus_col[j]) = problem.objective[j];
    if (minus_col[j] != SIZE_MAX) at(m, minus_col[j]) = -problem.objective[j];
  }
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) basis[i] = slack0 + i;

  Solution<T> sol;
  while (true) {
    std::size_t enter = SIZE_MAX;
    for (std::size_t c = 0; c < cols; ++c) {
      if (A::positive(at(m, c))) {
        enter = c;
        break;
      }
    }
    if (enter == SIZE_MAX) break;
    if (sol.pivots >= max_pivots) {
      sol.status = Status::IterationLimit;
      break;
    }

    std::size_t leave = SIZE_MAX;
    T best_ratio = 0;
    for (std::size_t i = 0; i < m; ++i) {
      const T& a = at(i, enter);
      if (!A::positive(a)) continue;
      T ratio = at(i, cols) / a;
      if (leave == SIZE_MAX || A::less(ratio, best_ratio) ||
          (A::equal(ratio, best_ratio) && basis[i] < basis[leave])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave == SIZE_MAX) {
      sol.status = Status::Unbounded;
      return sol;
    }

    const T pivot = at(leave, enter);
    for (std::size_t c = 0; c < width; ++c) at(leave, c) /= pivot;
    for (std::size_t r = 0; r <= m; ++r) {
      if (r == leave) continue;
      const T factor = at(r, enter);
      if (factor == 0) continue;
      for (std::size_t c = 0; c < width; ++c) {
        const T& lv = at(leave, c);
        if (lv == 0) continue;
        at(r, c) -= factor * lv;
        A::clean(at(r, c));
      }
      at(r, enter) = T(0);
    }
    basis[leave] = enter;
    ++sol.pivots;
  }

  std::vector<T> column_value(cols, T(0));
  for (std::size_t i = 0; i < m; ++i) column_value[basis[i]] = at(i, cols);
  sol.x.assign(n, T(0));
  for (std::size_t j = 0; j < n; ++j) {
    sol.x[j] = column_value[plus_col[j]];
    if (minus_col[j] != SIZE_MAX) sol.x[j] -= column_value[minus_col[j]];
  }
  sol.duals.assign(m, T(0));
  for (std::size_t i = 0; i < m; ++i) sol.duals[i] = -at(m, slack0 + i);
  sol.value = -at(m, cols);
  return sol;
}

}  // namespace antipode::lp
