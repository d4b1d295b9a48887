#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "antipode/rational.hpp"
#include "antipode/vector.hpp"

namespace antipode {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class SpaceKind { Lp, PolytopeV, PolytopeF, Cylinder };

/// A finite-dimensional norm on R^n.
///
///  - Lp(n, p), 1 <= p <= inf.
///  - PolytopeV: unit ball = conv(vertices).
///  - PolytopeF: unit ball = { x : |f(x)| <= 1 for every facet functional f }.
///  - Cylinder(n): ||x|| = ||(x_1..x_{n-1})||_2 + |x_n|; its dual ball is a
///    right circular cylinder. Cylinder(3) is the Petty space.
///
/// Polytope generator sets are symmetrized (v and -v both kept), deduplicated
/// and checked to span. Lp with p = 1 or p = inf is additionally described by
/// its cross-polytope / cube generators so that certification can run in
/// exact rational arithmetic. Values are immutable after construction.
class NormSpace {
 public:
  static NormSpace lp(std::size_t n, double p);
  static NormSpace polytope_vertices(const std::vector<RationalVec>& vertices);
  static NormSpace polytope_facets(const std::vector<RationalVec>& facets);
  static NormSpace cylinder(std::size_t n);

  SpaceKind kind() const noexcept { return kind_; }
  std::size_t dim() const noexcept { return dim_; }
  /// Exponent of an Lp space (inf for the sup norm). Meaningless otherwise.
  double p() const noexcept { return p_; }
  /// Conjugate exponent q with 1/p + 1/q = 1.
  double q() const noexcept;

  /// True when the norm has a polytopal description (PolytopeV, PolytopeF,
  /// Lp with p in {1, inf}); exact rational evaluation is then available.
  bool is_polytopal() const noexcept { return route_ != Route::ClosedForm; }
  /// True when the polytopal description lists ball vertices; false when it
  /// lists facet functionals. Only meaningful if is_polytopal().
  bool has_vertex_route() const noexcept { return route_ == Route::Vertices; }

  /// Generators of the polytopal description (vertices or facet
  /// functionals), symmetric, in a deterministic order.
  const std::vector<RationalVec>& generators() const noexcept { return gens_; }
  const std::vector<std::vector<double>>& generators_d() const noexcept { return gens_d_; }

  std::string describe() const;

  friend bool operator==(const NormSpace& a, const NormSpace& b);

 private:
  enum class Route { ClosedForm, Vertices, Facets };

  NormSpace(SpaceKind kind, std::size_t dim) : kind_(kind), dim_(dim) {}
  void set_generators(std::vector<RationalVec> gens, Route route);

  SpaceKind kind_;
  std::size_t dim_;
  double p_ = 2.0;
  Route route_ = Route::ClosedForm;
  std::vector<RationalVec> gens_;
  std::vector<std::vector<double>> gens_d_;
};

/// ||v||. PolytopeV uses the gauge LP max{ f(v) : f(w) <= 1 for all vertices w }.
double primal_norm(const NormSpace& space, const Vector& v);
/// ||f||_* = sup{ f(x) : ||x|| <= 1 }.
double dual_norm(const NormSpace& space, const Functional& f);

/// A functional f with ||f||_* = 1 and f(direction) = ||direction||.
/// Flat faces resolve to the lowest-index extreme point.
Functional dual_support_point(const NormSpace& space, const Vector& direction);

/// A unit vector x with f(x) = ||f||_*: the point where the supporting
/// hyperplane {f = ||f||_*} touches the primal ball. This is a subgradient
/// of the dual norm at f and provides the cuts of the max-margin solver.
Vector norming_vector(const NormSpace& space, const Functional& f);

Vector normalize(const NormSpace& space, const Vector& v);

// Exact variants, available when space.is_polytopal().

Rational primal_norm_exact(const NormSpace& space, const RationalVec& v);
Rational dual_norm_exact(const NormSpace& space, const RationalVec& f);
RationalVec dual_support_point_exact(const NormSpace& space, const RationalVec& direction);
RationalVec normalize_exact(const NormSpace& space, const RationalVec& v);

/// Vertices of a polytopal unit ball. Facet descriptions are enumerated by
/// brute force over n-subsets of facets (intended for dim <= 6); vertex
/// descriptions return their generators.
std::vector<RationalVec> enumerate_vertices(const NormSpace& facet_space);

/// Rank of a list of rational vectors (exact Gaussian elimination).
std::size_t exact_rank(const std::vector<RationalVec>& rows, std::size_t dim);

}  // namespace antipode
