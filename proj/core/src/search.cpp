#include "antipode/search.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <thread>
#include <unordered_map>

#include "antipode/error.hpp"
#include "margin_solver.hpp"

namespace antipode {

namespace {

constexpr std::size_t kMaxPool = 40;

bool pair_meets(const PairWitness& w, Classification required, NumericMode mode, const Tolerances& tol) {
  if (mode == NumericMode::Rational && w.exact) return meets(classify_exact(w.exact->margin, w.separating), required);
  return meets(classify(w.margin, w.separating, tol), required);
}

std::size_t danzer_grunbaum_cap(std::size_t n) { return n >= 63 ? SIZE_MAX : std::size_t{1} << n; }

CertifyOptions serial(CertifyOptions options) {
  options.threads = 1;
  return options;
}

SearchResult make_result(PointSet set, Classification required, const CertifyOptions& options, std::string method) {
  SearchResult r(std::move(set));
  r.required = required;
  r.method = std::move(method);
  if (r.best_set.size() >= 2) {
    r.certificate = certify_set(r.best_set, options);
    r.best_d = r.certificate->d;
    r.meets_required = meets(r.certificate->classification, required);
  } else {
    r.best_d = kInfinity;
    r.meets_required = true;
  }
  return r;
}

std::string default_pool_description(const PointSet& pool) {
  return std::to_string(pool.size()) + " points in " + pool.space().describe();
}

}  // namespace

Classification parse_search_mode(const std::string& text) {
  if (text == "antipodal") return Classification::Antipodal;
  if (text == "hadwiger") return Classification::Hadwiger;
  if (text == "strict" || text == "strict_hadwiger") return Classification::StrictHadwiger;
  fail(ErrorKind::Parse, "unknown mode '" + text + "' (expected antipodal, hadwiger or strict)");
}

std::string search_mode_name(Classification required) {
  switch (required) {
    case Classification::Antipodal:
      return "antipodal";
    case Classification::Hadwiger:
      return "hadwiger";
    case Classification::StrictHadwiger:
      return "strict";
    case Classification::NotAntipodal:
      break;
  }
  return "none";
}

bool set_meets(const PointSet& set, Classification required, const CertifyOptions& options) {
  if (set.size() < 2) return true;
  const NumericMode mode = resolve_mode(set.space(), options);
  CertifyOptions opts = options;
  opts.mode = mode;
  // Pairs with the most recently added point first: they fail most often.
  const std::size_t last = set.size() - 1;
  for (std::size_t i = 0; i < last; ++i) {
    if (!pair_meets(max_margin_pair(set, i, last, opts), required, mode, opts.tol)) return false;
  }
  for (std::size_t i = 0; i < last; ++i) {
    for (std::size_t j = i + 1; j < last; ++j) {
      if (!pair_meets(max_margin_pair(set, i, j, opts), required, mode, opts.tol)) return false;
    }
  }
  return true;
}

SearchResult exact_max_subset(const PointSet& pool, Classification required, const CertifyOptions& options) {
  if (pool.size() > kMaxPool) {
    fail(ErrorKind::InvalidArgument, "exact search supports pools of at most " + std::to_string(kMaxPool) + " points");
  }
  if (required == Classification::NotAntipodal) fail(ErrorKind::InvalidArgument, "search mode must be a threshold");
  const std::size_t m = pool.size();
  const std::size_t cap = std::min(m, danzer_grunbaum_cap(pool.dim()));
  const CertifyOptions opts = serial(options);

  // Edge filter: in a two-point set the best margin is the distance.
  std::vector<std::uint64_t> adj(m, 0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      if (pair_meets(max_margin_pair(pool.subset({i, j}), 0, 1, opts), required, resolve_mode(pool.space(), opts),
                     opts.tol)) {
        adj[i] |= std::uint64_t{1} << j;
        adj[j] |= std::uint64_t{1} << i;
      }
    }
  }

  std::unordered_map<std::uint64_t, bool> cache;
  std::vector<std::uint64_t> infeasible;
  std::size_t nodes = 0;
  auto feasible = [&](const std::vector<std::size_t>& idx, std::uint64_t mask) {
    if (auto it = cache.find(mask); it != cache.end()) return it->second;
    for (std::uint64_t bad : infeasible) {
      if ((bad & mask) == bad) return cache[mask] = false;
    }
    ++nodes;
    const bool ok = set_meets(pool.subset(idx), required, opts);
    if (!ok) infeasible.push_back(mask);
    return cache[mask] = ok;
  };

  std::vector<std::size_t> best = m > 0 ? std::vector<std::size_t>{0} : std::vector<std::size_t>{};
  std::vector<std::size_t> current;
  std::uint64_t current_mask = 0;
  std::function<void(std::uint64_t)> expand = [&](std::uint64_t cand) {
    if (current.size() > best.size()) best = current;
    while (cand != 0) {
      if (best.size() >= cap) return;
      if (current.size() + static_cast<std::size_t>(std::popcount(cand)) <= best.size()) return;
      const std::size_t v = static_cast<std::size_t>(std::countr_zero(cand));
      cand &= cand - 1;
      current.push_back(v);
      current_mask |= std::uint64_t{1} << v;
      if (feasible(current, current_mask)) expand(cand & adj[v]);
      current_mask &= ~(std::uint64_t{1} << v);
      current.pop_back();
    }
  };
  const std::uint64_t all = m == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1;
  if (m > 0) expand(all);

  SearchResult r = make_result(pool.subset(best), required, options, "exact");
  r.indices = best;
  r.iterations = nodes;
  r.pool_description = default_pool_description(pool);
  return r;
}

SearchResult greedy_extend(const PointSet& base, const PointSet& pool, Classification required,
                           const CertifyOptions& options) {
  if (!(base.space() == pool.space())) fail(ErrorKind::InvalidArgument, "base and pool live in different spaces");
  if (required == Classification::NotAntipodal) fail(ErrorKind::InvalidArgument, "search mode must be a threshold");
  const CertifyOptions opts = serial(options);
  if (!set_meets(base, required, opts)) fail(ErrorKind::InvalidArgument, "base set does not meet the mode threshold");
  PointSet current = base;
  std::vector<std::size_t> taken;
  std::size_t tries = 0;
  for (std::size_t k = 0; k < pool.size(); ++k) {
    const auto& e = pool.exact(k);
    const auto& have = current.exact_points();
    if (std::find(have.begin(), have.end(), e) != have.end()) continue;
    ++tries;
    PointSet next = current.with_point(e);
    if (set_meets(next, required, opts)) {
      current = std::move(next);
      taken.push_back(k);
    }
  }
  SearchResult r = make_result(std::move(current), required, options, "greedy");
  r.indices = std::move(taken);
  r.iterations = tries;
  r.pool_description = default_pool_description(pool);
  return r;
}

namespace {

/// Per-pair functionals carried along with the points. The surrogate is the
/// smallest f(x_i) - f(x_j) minus rho times the largest sandwich violation
/// over all pairs.
struct AnnealState {
  std::vector<Vector> points;
  std::vector<Functional> functionals;  // pair (i, j), i < j, row-major
};

std::vector<std::pair<std::size_t, std::size_t>> pair_list(std::size_t k) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) out.emplace_back(i, j);
  }
  return out;
}

double pair_violation(const std::vector<Vector>& pts, std::size_t i, std::size_t j, const Functional& f) {
  const double fi = apply(f, pts[i]);
  const double fj = apply(f, pts[j]);
  double worst = 0.0;
  for (std::size_t z = 0; z < pts.size(); ++z) {
    if (z == i || z == j) continue;
    const double fz = apply(f, pts[z]);
    worst = std::max({worst, fz - fi, fj - fz});
  }
  return worst;
}

double pair_value(const std::vector<Vector>& pts, std::size_t i, std::size_t j, const Functional& f, double rho) {
  return apply(f, pts[i]) - apply(f, pts[j]) - rho * pair_violation(pts, i, j, f);
}

struct Energy {
  double value = kInfinity;
  double violation = 0.0;
};

Energy energy_of(const AnnealState& s, const std::vector<std::pair<std::size_t, std::size_t>>& pairs, double rho) {
  Energy e;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto [i, j] = pairs[p];
    e.value = std::min(e.value, apply(s.functionals[p], s.points[i]) - apply(s.functionals[p], s.points[j]));
    e.violation = std::max(e.violation, pair_violation(s.points, i, j, s.functionals[p]));
  }
  e.value -= rho * e.violation;
  return e;
}

/// Scales f onto the dual sphere; the sandwich rows are homogeneous, so
/// this keeps their signs. Zero becomes the support functional of c.
Functional unit_functional(const NormSpace& space, const Functional& f, const Vector& c) {
  const double len = dual_norm(space, f);
  if (len > 1e-12) return (1.0 / len) * f;
  return dual_support_point(space, c);
}

/// Re-solves every pair's relaxed margin and keeps whichever functional
/// scores better.
void refresh(const NormSpace& space, AnnealState& s, const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
             double rho, const Tolerances& tol) {
  PointSet set(space, s.points, 1e-6);
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto [i, j] = pairs[p];
    Functional f = unit_functional(space, relaxed_margin(set, i, j, rho, tol).functional, s.points[i] - s.points[j]);
    if (s.functionals[p].dim() == 0 ||
        pair_value(s.points, i, j, f, rho) > pair_value(s.points, i, j, s.functionals[p], rho)) {
      s.functionals[p] = std::move(f);
    }
  }
}

bool distinct_points(const NormSpace& space, const std::vector<Vector>& pts) {
  for (std::size_t a = 0; a < pts.size(); ++a) {
    for (std::size_t b = a + 1; b < pts.size(); ++b) {
      if (primal_norm(space, pts[a] - pts[b]) < 1e-9) return false;
    }
  }
  return true;
}

/// Best relaxed functional for pair (i, j) at solver accuracy.
Functional precise_functional(const NormSpace& space, const std::vector<Vector>& pts, std::size_t i, std::size_t j,
                              double rho) {
  std::vector<std::vector<double>> raw;
  for (const auto& p : pts) raw.push_back(p.values());
  auto rows = detail::sandwich_rows<double>(raw, i, j);
  Vector c = pts[i] - pts[j];
  if (space.is_polytopal()) {
    return Functional(detail::polytopal_margin<double>(space, c.values(), rows, space.generators_d(), rho).functional);
  }
  Tolerances tight;
  tight.solver = 1e-10;
  tight.max_iterations = 100;
  return detail::cutting_plane_margin(space, c, rows, tight, rho).functional;
}

/// Projects points across violated sandwich hyperplanes of the carried
/// functionals, alternating with renormalization and with re-solving the
/// functionals under a large penalty. Returns the final violation.
double repair(const NormSpace& space, AnnealState& s, const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
              std::size_t outer = 12, std::size_t inner = 200) {
  const std::size_t k = s.points.size();
  const std::size_t n = space.dim();
  double worst = kInfinity;
  for (std::size_t pass = 0; pass < outer; ++pass) {
    if (pass > 0) {
      if (!distinct_points(space, s.points)) return kInfinity;
      for (std::size_t p = 0; p < pairs.size(); ++p) {
        const auto [i, j] = pairs[p];
        const Functional f = precise_functional(space, s.points, i, j, 1e3);
        if (dual_norm(space, f) > 1e-9) s.functionals[p] = unit_functional(space, f, s.points[i] - s.points[j]);
      }
    }
    for (std::size_t round = 0; round < inner; ++round) {
      std::vector<Vector> delta(k, Vector(n));
      std::vector<double> count(k, 0.0);
      worst = 0.0;
      for (std::size_t p = 0; p < pairs.size(); ++p) {
        const auto [i, j] = pairs[p];
        const Functional& f = s.functionals[p];
        const double ff = apply(f, as_vector(f));
        if (!(ff > 0.0)) continue;
        const Vector g = (1.0 / ff) * as_vector(f);
        const double fi = apply(f, s.points[i]);
        const double fj = apply(f, s.points[j]);
        if (!(fi > fj)) continue;
        for (std::size_t z = 0; z < k; ++z) {
          if (z == i || z == j) continue;
          const double fz = apply(f, s.points[z]);
          if (const double over = fz - fi; over > 0.0) {
            delta[z] -= (0.5 * over) * g;
            delta[i] += (0.5 * over) * g;
            count[z] += 1.0;
            count[i] += 1.0;
            worst = std::max(worst, over);
          }
          if (const double under = fj - fz; under > 0.0) {
            delta[z] += (0.5 * under) * g;
            delta[j] -= (0.5 * under) * g;
            count[z] += 1.0;
            count[j] += 1.0;
            worst = std::max(worst, under);
          }
        }
      }
      if (worst <= 1e-14) return worst;
      for (std::size_t m = 0; m < k; ++m) {
        if (count[m] == 0.0) continue;
        Vector moved = s.points[m] + (1.0 / count[m]) * delta[m];
        if (primal_norm(space, moved) > 1e-9) s.points[m] = normalize(space, moved);
      }
    }
  }
  return worst;
}

}  // namespace

SearchResult anneal_placement(const NormSpace& space, std::size_t k, Classification required, std::uint64_t seed,
                              const AnnealSchedule& schedule, const CertifyOptions& options) {
  if (k < 2) fail(ErrorKind::InvalidArgument, "annealing needs k >= 2");
  if (!(schedule.initial_temp > 0.0) || !(schedule.decay > 0.0 && schedule.decay <= 1.0) ||
      !(schedule.initial_step > 0.0) || !(schedule.penalty_start > 0.0) ||
      !(schedule.penalty_end >= schedule.penalty_start)) {
    fail(ErrorKind::InvalidArgument, "invalid annealing schedule");
  }
  const std::size_t n = space.dim();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, k - 1);
  CertifyOptions float_opts = serial(options);
  float_opts.mode = NumericMode::Float;
  const Tolerances& tol = options.tol;
  const auto pairs = pair_list(k);
  std::uniform_int_distribution<std::size_t> pick_pair(0, pairs.size() - 1);

  auto random_unit = [&]() {
    while (true) {
      Vector g(n);
      for (std::size_t t = 0; t < n; ++t) g[t] = gauss(rng);
      if (primal_norm(space, g) > 1e-6) return normalize(space, g);
    }
  };
  // Start from vertices of a random parallelotope (the extremal shape for
  // 2^n points), topped up with random points past 2^n.
  AnnealState cur;
  {
    std::vector<double> A(n * n);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) A[r * n + c] = (r == c ? 1.0 : 0.0) + 0.3 * gauss(rng);
    }
    const std::size_t corners = std::min(k, danzer_grunbaum_cap(n));
    std::vector<std::size_t> masks(danzer_grunbaum_cap(std::min<std::size_t>(n, 20)));
    for (std::size_t m = 0; m < masks.size(); ++m) masks[m] = m;
    std::shuffle(masks.begin(), masks.end(), rng);
    for (std::size_t m = 0; m < masks.size() && cur.points.size() < corners; ++m) {
      Vector v(n);
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) v[r] += A[r * n + c] * (((masks[m] >> c) & 1U) ? -1.0 : 1.0);
      }
      if (!(primal_norm(space, v) > 1e-6)) continue;
      v = normalize(space, v);
      bool clash = std::any_of(cur.points.begin(), cur.points.end(),
                               [&](const Vector& w) { return primal_norm(space, v - w) < 1e-6; });
      if (!clash) cur.points.push_back(std::move(v));
    }
  }
  while (cur.points.size() < k) {
    Vector v = random_unit();
    bool clash = std::any_of(cur.points.begin(), cur.points.end(),
                             [&](const Vector& w) { return primal_norm(space, v - w) < 1e-6; });
    if (!clash) cur.points.push_back(std::move(v));
  }
  cur.functionals.assign(pairs.size(), Functional());

  const std::size_t stages = 20;
  const double growth = std::pow(schedule.penalty_end / schedule.penalty_start, 1.0 / static_cast<double>(stages - 1));
  const std::size_t stage_len = std::max<std::size_t>(1, schedule.steps / stages);
  const std::size_t refresh_every = std::max<std::size_t>(1, std::min<std::size_t>(stage_len / 4, 250));
  double rho = schedule.penalty_start;
  double temp = schedule.initial_temp;
  double sigma = schedule.initial_step;
  refresh(space, cur, pairs, rho, tol);
  {
    AnnealState fixed = cur;
    if (repair(space, fixed, pairs) <= 1e-12 && distinct_points(space, fixed.points)) {
      cur = std::move(fixed);
      refresh(space, cur, pairs, rho, tol);
    }
  }
  Energy energy = energy_of(cur, pairs, rho);

  std::vector<Vector> best_pts = cur.points;
  double best_d = certify_set(PointSet(space, cur.points, 1e-6), float_opts).d;
  std::vector<double> trace{best_d};

  auto try_certify = [&](const std::vector<Vector>& pts) {
    if (!distinct_points(space, pts)) return false;
    const double d = certify_set(PointSet(space, pts, 1e-6), float_opts).d;
    if (!(d > best_d)) return false;
    best_d = d;
    best_pts = pts;
    trace.push_back(d);
    return true;
  };
  // Repairs a copy of the current state; adopts it when it certifies better.
  // Repairs a copy of the current state; adopts it when the surrogate
  // improves and records it when it certifies better.
  auto settle = [&]() {
    refresh(space, cur, pairs, rho, tol);
    energy = energy_of(cur, pairs, rho);
    if (!(energy.violation < 1e-3) || !(energy.value > best_d)) return;
    AnnealState fixed = cur;
    const double left = repair(space, fixed, pairs);
    if (!distinct_points(space, fixed.points)) return;
    refresh(space, fixed, pairs, rho, tol);
    const Energy e = energy_of(fixed, pairs, rho);
    if (left <= 1e-12) try_certify(fixed.points);
    if (e.value > energy.value) {
      cur = std::move(fixed);
      energy = e;
    }
  };

  for (std::size_t step = 0; step < schedule.steps; ++step) {
    if (step > 0 && step % stage_len == 0) {
      settle();
      rho = std::min(schedule.penalty_end, rho * growth);
      energy = energy_of(cur, pairs, rho);
    } else if (step > 0 && step % refresh_every == 0) {
      refresh(space, cur, pairs, rho, tol);
      energy = energy_of(cur, pairs, rho);
      AnnealState fixed = cur;
      repair(space, fixed, pairs, 1);
      if (distinct_points(space, fixed.points)) {
        const Energy e = energy_of(fixed, pairs, rho);
        if (e.value > energy.value) {
          cur = std::move(fixed);
          energy = e;
        }
      }
      if (energy.violation == 0.0 && energy.value > best_d + 1e-9) try_certify(cur.points);
    }
    temp *= schedule.decay;
    const double u = 1.0 - unit(rng);
    AnnealState cand = cur;
    const double kind = unit(rng);
    if (kind < 0.2) {
      // x -> (I + sigma G) x for all points, f -> f (I - sigma G) for all
      // functionals, then both renormalized.
      std::vector<double> G(n * n);
      for (double& x : G) x = gauss(rng) * sigma / static_cast<double>(n);
      bool ok = true;
      for (auto& x : cand.points) {
        Vector y = x;
        for (std::size_t r = 0; r < n; ++r) {
          for (std::size_t c = 0; c < n; ++c) y[r] += G[r * n + c] * x[c];
        }
        if (!(primal_norm(space, y) > 1e-9)) {
          ok = false;
          break;
        }
        x = normalize(space, y);
      }
      if (!ok) continue;
      for (auto& f : cand.functionals) {
        Functional h = f;
        for (std::size_t c = 0; c < n; ++c) {
          for (std::size_t r = 0; r < n; ++r) h[c] -= f[r] * G[r * n + c];
        }
        const double len = dual_norm(space, h);
        if (len > 1e-9) f = (1.0 / len) * h;
      }
    } else if (kind < 0.75) {
      const std::size_t idx = pick(rng);
      Vector g(n);
      for (std::size_t t = 0; t < n; ++t) g[t] = gauss(rng);
      const Functional f = dual_support_point(space, cur.points[idx]);
      Vector tangent = g - apply(f, g) * cur.points[idx];
      const double len = euclidean_norm(tangent.values());
      if (!(len > 1e-12)) continue;
      Vector moved = cur.points[idx] + (sigma / len) * tangent;
      if (!(primal_norm(space, moved) > 1e-9)) continue;
      cand.points[idx] = normalize(space, moved);
    } else {
      const std::size_t p = pick_pair(rng);
      Functional g(n);
      for (std::size_t t = 0; t < n; ++t) g[t] = gauss(rng);
      Functional moved = cur.functionals[p] + (sigma / std::max(1e-12, euclidean_norm(g.values()))) * g;
      const double len = dual_norm(space, moved);
      if (!(len > 1e-9)) continue;
      cand.functionals[p] = (1.0 / len) * moved;
    }
    const Energy e = energy_of(cand, pairs, rho);
    if (e.value >= energy.value + temp * std::log(u)) {
      cur = std::move(cand);
      energy = e;
      sigma = std::min(schedule.initial_step, sigma * 1.2);
    } else {
      sigma = std::max(schedule.min_step, sigma * 0.9);
    }
  }
  rho = schedule.penalty_end;
  settle();

  SearchResult r = make_result(PointSet(space, best_pts, 1e-6), required, options, "anneal");
  r.iterations = schedule.steps;
  r.seed = seed;
  r.schedule = schedule;
  r.best_trace = std::move(trace);
  r.pool_description = "k = " + std::to_string(k) + " free unit vectors in " + space.describe();
  return r;
}

const SearchResult& best_result(const std::vector<SearchResult>& results) {
  if (results.empty()) fail(ErrorKind::InvalidArgument, "no results to reduce");
  const SearchResult* best = &results.front();
  for (const auto& r : results) {
    const auto key = [](const SearchResult& x) { return std::make_pair(x.best_set.size(), x.best_d); };
    if (key(r) > key(*best) || (key(r) == key(*best) && r.seed < best->seed)) best = &r;
  }
  return *best;
}

SearchResult anneal_restarts(const NormSpace& space, std::size_t k, Classification required, std::uint64_t seed,
                             std::size_t restarts, const AnnealSchedule& schedule, const CertifyOptions& options) {
  if (restarts == 0) fail(ErrorKind::InvalidArgument, "restarts must be positive");
  std::vector<std::optional<SearchResult>> slots(restarts);
  std::vector<std::exception_ptr> errors(restarts);
  const std::size_t threads = std::min(restarts, worker_threads(options.threads));
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t r = t; r < restarts; r += threads) {
        try {
          slots[r] = anneal_placement(space, k, required, seed + r, schedule, options);
        } catch (...) {
          errors[r] = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  std::vector<SearchResult> results;
  for (std::size_t r = 0; r < restarts; ++r) {
    if (errors[r]) std::rethrow_exception(errors[r]);
    results.push_back(std::move(*slots[r]));
  }
  SearchResult best = best_result(results);
  best.method = "anneal x" + std::to_string(restarts);
  return best;
}

}  // namespace antipode
