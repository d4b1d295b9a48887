#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "antipode/certify.hpp"

namespace antipode {

/// Largest alpha with alpha * outer ⊆ inner, given inner ⊆ outer.
struct InclusionResult {
  double alpha = 0.0;
  std::optional<Rational> alpha_exact;
  double bm_upper = 0.0;  // 1/alpha
  std::optional<Rational> bm_upper_exact;
  std::string contact;
};

/// alpha = min over vertices v of outer of 1/‖v‖_inner (exact). Both bodies
/// must be polytopal of the same dimension <= 6. Throws Error(NotContained)
/// if some vertex of inner has outer gauge > 1.
InclusionResult polytope_inclusion_scale(const NormSpace& inner, const NormSpace& outer);

/// Plane h.x = 1 through three points.
struct Facet {
  Vector h;
  std::size_t a = 0, b = 0, c = 0;  // indices into the symmetric vertex list
};

/// The 8 facets of conv(±A, ±B, ±C), each written as h.x = 1. Vertices are
/// given as A, B, C or as A, B, C, -A, -B, -C.
std::vector<Facet> octahedron_facets(const std::vector<Vector>& vertices);

/// Largest alpha such that alpha times the cylinder
/// { sqrt(x^2 + y^2) <= 1, |z| <= 1 } fits in the octahedron: bisection on
/// alpha with the per-facet test that the rim circle {x^2 + y^2 = alpha^2,
/// z = ±alpha} meets the facet plane in at most one point. The vertices must
/// lie on the cylinder boundary.
InclusionResult cylinder_octahedron_scale(const std::vector<Vector>& vertices, double tol = 1e-12);

/// Closed form of the same quantity: 1 / max_h (‖h_xy‖ + |h_z|).
double cylinder_octahedron_scale_closed_form(const std::vector<Vector>& vertices);

/// Largest octahedron gauge over a deterministic sample of `samples` points
/// on the boundary of alpha times the cylinder.
double sampled_cylinder_gauge(const std::vector<Vector>& vertices, double alpha, std::size_t samples = 10000);

/// The octahedron vertices A(0,-1,1), B(0.8,0.6,1), C(-0.8,0.6,1).
std::vector<Vector> petty_dual_octahedron();

struct BmBound {
  double bound = 0.0;  // 2/d
  std::optional<Rational> bound_exact;
  /// |S| = 2^n: the space is within 2/d of the cube space.
  bool hypercube_case = false;
  std::string note;
};

/// 2/d for a certificate with d > 0.
BmBound bm_bound_from_certificate(const Certificate& cert);
BmBound bm_bound_from_d(double d, std::size_t set_size, std::size_t dim);

struct ContrapositiveReport {
  std::size_t n = 0;
  double p = 0.0;
  /// Any 2^n-point witness set in l_p^n has d <= ceiling = 2/n^(1/p).
  double ceiling = 0.0;
  bool strict_excluded = false;  // ceiling <= 1
  std::string note;
};

/// Requires n >= 4 and 2 <= p <= log2(n); throws Error(InvalidArgument)
/// otherwise.
ContrapositiveReport contrapositive_check(std::size_t n, double p);

}  // namespace antipode
