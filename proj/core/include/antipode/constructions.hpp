#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "antipode/certify.hpp"

namespace antipode {

enum class ConstructionTarget { Certify, Separation };

/// A functional suggested for the pair (i, j); certified in lower-bound mode.
struct SuggestedWitness {
  std::size_t i = 0;
  std::size_t j = 0;
  RationalVec functional;
};

struct Construction {
  std::string name;
  PointSet points;
  /// Certify targets: d of the optimized certificate (a lower bound when
  /// `expected_is_lower_bound`). Separation targets: the bound on the
  /// minimum pairwise distance.
  double expected_d = 0.0;
  std::optional<Rational> expected_d_exact;
  bool expected_is_lower_bound = false;
  /// d obtained from the suggested witnesses alone, when it differs.
  std::optional<double> witness_d;
  std::string expected_formula;
  Classification expected_class = Classification::Antipodal;
  ConstructionTarget target = ConstructionTarget::Certify;
  std::vector<SuggestedWitness> suggested;
  std::string provenance;
  /// Parameters as (key, value text), in the order they were given.
  std::vector<std::pair<std::string, std::string>> params;
};

/// {±e_i} with the Auerbach functionals (e_i* ± e_j*)/2 and e_i*.
Construction auerbach_cross(std::size_t n, double p);

/// n^(-1/p){-1,1}^n, d = 2/n^(1/p).
Construction scaled_hypercube(std::size_t n, double p);

/// Default beta = (2 + 2^p)/2.
double prism_default_beta(double p);
/// min{2/beta^(1/p), 2/(2^(1/q) alpha^(1/p))} with alpha = beta/(beta-1).
double prism_expected_d(double p, double beta);
/// The 4n-4 point prism set in l_p^n. Points are ordered
/// +a e_1 + b e_n, -a e_1 + b e_n, +a e_2 + b e_n, ..., then the negatives.
Construction prism_4n_minus_4(std::size_t n, double p, std::optional<double> beta = std::nullopt);

/// (5/9){-1,1}^3 inside the octahedron conv(±(1,1,-1/3), ±(1,-1/3,1), ±(-1/3,1,1)).
Construction l1_cube_in_octahedron();
/// The octahedron norm space used above.
NormSpace octahedron_space();

/// ±A, ±B, ±C, ±D on the sphere of the cylinder norm in R^3.
Construction petty_parallelepiped();

/// 14-point 1-separated set and 10-point strictly separated set of the
/// cylinder norm in R^3.
std::pair<Construction, Construction> petty_separated_sets();

/// Greedy first-fit over a seeded permutation of {-1,1}^n keeping pairwise
/// |<w_i, w_j>| < delta, w = x/sqrt(n). Stops after `max_count` vectors.
Construction gv_sign_vectors(std::size_t n, double delta, std::uint64_t seed, std::size_t max_count = 128);

/// Pair (u, v) of unit vectors maximizing |det(u, v)|.
std::pair<Vector, Vector> auerbach_basis_2d(const NormSpace& space);
/// ±(u-v)/‖u-v‖, ±(u+v)/‖u+v‖ for the basis above, or {±u, ±v} when
/// ‖u+v‖ = ‖u-v‖ = 2 (the space is then the sup-norm plane).
Construction minkowski_quadruple(const NormSpace& space2d);
/// Seeded random centrally symmetric polygon norm with small rational vertices.
NormSpace random_polygon_space(std::uint64_t seed, std::size_t half_vertices = 0);

/// Three consecutive vertices of the unit hexagon in the Euclidean plane.
Construction hexagon_counterexample();

/// Distinct suggested functionals, in first-seen order.
std::vector<RationalVec> witness_pool(const Construction& c);
/// Lower-bound certificate from the suggested witnesses.
Certificate certify_suggested(const Construction& c, const CertifyOptions& options = {});

/// Registry names: auerbach-cross, scaled-hypercube, prism, l1-cube-octahedron,
/// petty-parallelepiped, petty-separated-14, petty-separated-10, gv,
/// minkowski-quadruple, hexagon.
std::vector<std::string> construction_names();

struct ConstructionParams {
  std::optional<std::size_t> n;
  std::optional<double> p;
  std::optional<double> beta;
  std::optional<double> delta;
  std::optional<std::size_t> max_count;
  std::uint64_t seed = 0;
  /// For minkowski-quadruple; a random polygon norm when unset.
  std::optional<NormSpace> space;
};

Construction make_construction(const std::string& name, const ConstructionParams& params);

}  // namespace antipode
