#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "antipode/error.hpp"
#include "antipode/rational.hpp"

namespace antipode {

/// Coordinate array tagged with its role so primal points and dual
/// functionals cannot be mixed up at call sites.
template <class Tag>
class Coords {
 public:
  Coords() = default;
  explicit Coords(std::size_t dim) : c_(dim, 0.0) {}
  explicit Coords(std::vector<double> values) : c_(std::move(values)) {}
  Coords(std::initializer_list<double> values) : c_(values) {}

  std::size_t dim() const noexcept { return c_.size(); }
  double& operator[](std::size_t k) { return c_[k]; }
  double operator[](std::size_t k) const { return c_[k]; }
  const std::vector<double>& values() const noexcept { return c_; }
  std::vector<double>& values() noexcept { return c_; }
  std::span<const double> span() const noexcept { return c_; }

  auto begin() const { return c_.begin(); }
  auto end() const { return c_.end(); }

  Coords& operator+=(const Coords& o) {
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
    return *this;
  }
  Coords& operator-=(const Coords& o) {
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
    return *this;
  }
  Coords& operator*=(double s) {
    for (double& x : c_) x *= s;
    return *this;
  }
  friend Coords operator+(Coords a, const Coords& b) { return a += b; }
  friend Coords operator-(Coords a, const Coords& b) { return a -= b; }
  friend Coords operator*(double s, Coords a) { return a *= s; }
  friend Coords operator-(Coords a) { return a *= -1.0; }
  friend bool operator==(const Coords&, const Coords&) = default;

  bool is_zero() const {
    for (double x : c_) {
      if (x != 0.0) return false;
    }
    return true;
  }

 private:
  std::vector<double> c_;
};

struct PointTag {};
struct FunctionalTag {};

using Vector = Coords<PointTag>;
using Functional = Coords<FunctionalTag>;

inline void require_same_dim(std::size_t a, std::size_t b, const char* where) {
  if (a != b) {
    fail(ErrorKind::DimensionMismatch, std::string(where) + ": dimension " + std::to_string(a) +
                                           " vs " + std::to_string(b));
  }
}

inline double apply(const Functional& f, const Vector& v) {
  require_same_dim(f.dim(), v.dim(), "apply");
  double s = 0.0;
  for (std::size_t k = 0; k < f.dim(); ++k) s += f[k] * v[k];
  return s;
}

inline Vector unit_vector(std::size_t dim, std::size_t k, double sign = 1.0) {
  Vector e(dim);
  e[k] = sign;
  return e;
}

inline Functional coordinate_functional(std::size_t dim, std::size_t k, double sign = 1.0) {
  Functional e(dim);
  e[k] = sign;
  return e;
}

inline Functional as_functional(const Vector& v) { return Functional(v.values()); }
inline Vector as_vector(const Functional& f) { return Vector(f.values()); }

inline double euclidean_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Exact counterparts on plain rational arrays.

template <class T>
T dot(std::span<const T> a, std::span<const T> b) {
  require_same_dim(a.size(), b.size(), "dot");
  T s = 0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

template <class T>
std::vector<T> difference(std::span<const T> a, std::span<const T> b) {
  require_same_dim(a.size(), b.size(), "difference");
  std::vector<T> out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] - b[k];
  return out;
}

template <class T>
std::vector<T> scaled(std::span<const T> a, const T& s) {
  std::vector<T> out(a.begin(), a.end());
  for (auto& x : out) x *= s;
  return out;
}

}  // namespace antipode
