#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "antipode/rational.hpp"
#include "antipode/spaces.hpp"
#include "antipode/vector.hpp"

namespace antipode {

enum class NumericMode { Float, Rational };
enum class Classification { NotAntipodal, Antipodal, Hadwiger, StrictHadwiger };

std::string to_string(NumericMode mode);
std::string to_string(Classification c);
Classification parse_classification(const std::string& text);

struct Tolerances {
  double sphere = 1e-9;
  double solver = 1e-9;
  double strict = 1e-6;
  std::size_t max_iterations = 500;
};

/// Finite list of distinct unit vectors of a normed space. Exact rational
/// coordinates are always available: either supplied, or the exact binary
/// value of the double coordinates.
class PointSet {
 public:
  /// Validates dimensions, distinctness and |‖x‖ - 1| <= sphere_tol. With
  /// `project`, points are rescaled onto the sphere instead of rejected.
  PointSet(NormSpace space, std::vector<Vector> points, double sphere_tol = 1e-9, bool project = false);
  PointSet(NormSpace space, std::vector<RationalVec> points, double sphere_tol = 1e-9, bool project = false);

  const NormSpace& space() const noexcept { return space_; }
  std::size_t size() const noexcept { return points_.size(); }
  std::size_t dim() const noexcept { return space_.dim(); }
  const Vector& operator[](std::size_t k) const { return points_[k]; }
  const std::vector<Vector>& points() const noexcept { return points_; }
  const RationalVec& exact(std::size_t k) const { return exact_[k]; }
  const std::vector<RationalVec>& exact_points() const noexcept { return exact_; }

  /// Subset in the given index order (no revalidation of the sphere check).
  PointSet subset(const std::vector<std::size_t>& indices) const;
  /// This set with `extra` appended.
  PointSet with_point(const Vector& extra) const;
  PointSet with_point(const RationalVec& extra) const;

 private:
  struct Unchecked {};
  PointSet(Unchecked, NormSpace space) : space_(std::move(space)) {}
  void validate(double sphere_tol, bool project);

  NormSpace space_;
  std::vector<Vector> points_;
  std::vector<RationalVec> exact_;
};

struct ExactPairData {
  RationalVec functional;
  Rational margin;
  Rational sandwich_slack;
  Rational dual_norm_value;
};

/// Best separating functional found for the ordered pair (i, j).
struct PairWitness {
  std::size_t i = 0;
  std::size_t j = 0;
  Functional functional;
  double margin = 0.0;           // f(x_i) - f(x_j), a feasible (lower) value
  double upper_bound = 0.0;      // certified bound on the supremum
  double sandwich_slack = 0.0;   // min_z min{f(x_i) - f(z), f(z) - f(x_j)}
  double dual_norm_value = 0.0;
  bool separating = false;
  bool converged = true;
  std::size_t iterations = 0;
  std::optional<ExactPairData> exact;
};

struct Certificate {
  PointSet points;
  std::vector<PairWitness> witnesses;
  double d = 0.0;
  std::optional<Rational> d_exact;
  Classification classification = Classification::NotAntipodal;
  bool lower_bound_mode = false;
  NumericMode mode = NumericMode::Float;
  Tolerances tolerances;
};

struct CertifyOptions {
  Tolerances tol;
  /// Unset: rational for polytopal spaces, float otherwise.
  std::optional<NumericMode> mode;
  /// Drop the sandwich constraints (the supremum is then ‖x_i - x_j‖).
  bool unconstrained = false;
  /// 0 = ANTIPODE_THREADS or hardware concurrency.
  std::size_t threads = 0;
};

NumericMode resolve_mode(const NormSpace& space, const CertifyOptions& options);

/// Maximizes f(x_i) - f(x_j) over ‖f‖_* <= 1 with f(x_j) <= f(z) <= f(x_i)
/// for all z in the set. Polytopal spaces: one LP. Otherwise: cutting planes
/// on the dual ball, bracketed by a feasible scaled iterate from below and
/// the LP value and Lagrangian bound ‖c - A^T lambda‖ from above.
PairWitness max_margin_pair(const PointSet& set, std::size_t i, std::size_t j, const CertifyOptions& options = {});

Certificate certify_set(const PointSet& set, const CertifyOptions& options = {});

/// Evaluates a supplied functional on a pair without optimizing. Throws
/// Error(WitnessRejected) when ‖f‖_* > 1 + tol (exactly > 1 in rational mode).
PairWitness verify_witness(const PointSet& set, std::size_t i, std::size_t j, const Functional& f,
                           const CertifyOptions& options = {});
PairWitness verify_witness(const PointSet& set, std::size_t i, std::size_t j, const RationalVec& f,
                           const CertifyOptions& options = {});

/// Lower-bound certificate from a pool of candidate functionals: every pair
/// takes the best feasible ±f from the pool.
Certificate certify_with_witnesses(const PointSet& set, const std::vector<RationalVec>& functionals,
                                   const CertifyOptions& options = {});

Classification classify(double d, bool all_separating, const Tolerances& tol);
Classification classify_exact(const Rational& d, bool all_separating);

/// True if `c` meets or exceeds `required` in the order
/// NotAntipodal < Antipodal < Hadwiger < StrictHadwiger.
bool meets(Classification c, Classification required);

struct SeparationReport {
  std::vector<std::vector<double>> distances;
  double min_distance = 0.0;
  std::optional<Rational> min_distance_exact;
  bool one_separated = false;       // min >= 1 - solver tol
  bool strictly_separated = false;  // min >= 1 + strict tol
};

SeparationReport separation_matrix(const PointSet& set, const CertifyOptions& options = {});
std::string separation_csv(const SeparationReport& report);

/// Penalized margin used by the annealer: max c.f - penalty * s over the
/// dual ball with every sandwich row relaxed by s >= 0. Equals the true
/// margin when the optimum has s = 0. Float arithmetic only.
struct RelaxedMargin {
  double value = 0.0;
  double violation = 0.0;
  Functional functional;
};
RelaxedMargin relaxed_margin(const PointSet& set, std::size_t i, std::size_t j, double penalty,
                             const Tolerances& tol);

std::size_t worker_threads(std::size_t requested);

}  // namespace antipode
