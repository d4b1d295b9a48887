#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "antipode/certify.hpp"

namespace antipode {

struct AnnealSchedule {
  double initial_temp = 0.5;
  double decay = 0.995;
  std::size_t steps = 100000;
  double initial_step = 0.05;
  double min_step = 1e-7;
  double penalty_start = 3.0;
  double penalty_end = 1000.0;
};

struct SearchResult {
  explicit SearchResult(PointSet set) : best_set(std::move(set)) {}

  PointSet best_set;
  /// Absent when |best_set| < 2.
  std::optional<Certificate> certificate;
  /// d of the certificate; +inf for a single point.
  double best_d = 0.0;
  Classification required = Classification::Hadwiger;
  bool meets_required = false;
  std::size_t iterations = 0;
  std::uint64_t seed = 0;
  std::string method;
  std::string pool_description;
  /// Indices into the pool (exact and greedy searches).
  std::vector<std::size_t> indices;
  std::optional<AnnealSchedule> schedule;
  /// Best surrogate-certified d after each improvement (annealing).
  std::vector<double> best_trace;
};

/// Parses "antipodal", "hadwiger" or "strict".
Classification parse_search_mode(const std::string& text);
std::string search_mode_name(Classification required);

/// True when every pair of `set` separates at the `required` level.
/// Stops at the first failing pair.
bool set_meets(const PointSet& set, Classification required, const CertifyOptions& options = {});

/// Maximum-cardinality subset of `pool` (|pool| <= 40) meeting `required`.
/// Pairs whose distance already fails the threshold are excluded up front;
/// every candidate set is certified as it grows, and since feasibility is
/// inherited by subsets an infeasible set prunes all of its supersets.
/// Sizes are capped at 2^n.
SearchResult exact_max_subset(const PointSet& pool, Classification required, const CertifyOptions& options = {});

/// Adds pool points in order while the set keeps meeting `required`.
/// Throws Error(InvalidArgument) if `base` itself fails.
SearchResult greedy_extend(const PointSet& base, const PointSet& pool, Classification required,
                           const CertifyOptions& options = {});

/// Simulated annealing over k unit vectors maximizing the smallest pair
/// margin. The state carries one unit dual functional per pair; the
/// surrogate is the smallest f(x_i) - f(x_j) minus penalty times the largest
/// sandwich violation, with the penalty raised geometrically over 20 stages.
/// Moves perturb one point tangentially, one functional, or all points by a
/// near-identity linear map. The start is a random parallelotope's vertices.
/// Functionals are re-solved (relaxed_margin) periodically; at stage ends a
/// projection repair pushes near-feasible states onto exactly feasible ones,
/// which are certified in float mode. best_d only ever increases. k > 2^n is
/// accepted and ends not antipodal. Deterministic given seed and schedule.
SearchResult anneal_placement(const NormSpace& space, std::size_t k, Classification required, std::uint64_t seed,
                              const AnnealSchedule& schedule = {}, const CertifyOptions& options = {});

/// Runs anneal_placement for seeds seed, seed+1, ..., seed+restarts-1 in
/// parallel and keeps the best by (|set|, d, lowest seed).
SearchResult anneal_restarts(const NormSpace& space, std::size_t k, Classification required, std::uint64_t seed,
                             std::size_t restarts, const AnnealSchedule& schedule = {},
                             const CertifyOptions& options = {});

/// Deterministic max-reduction keyed by (|set|, d), ties to the lower seed.
const SearchResult& best_result(const std::vector<SearchResult>& results);

}  // namespace antipode
