#include "antipode/certify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "margin_solver.hpp"

namespace antipode {

namespace {

using detail::sandwich_rows;

std::vector<std::vector<double>> raw(const std::vector<Vector>& pts) {
  std::vector<std::vector<double>> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.push_back(p.values());
  return out;
}

void check_pair(const PointSet& set, std::size_t i, std::size_t j) {
  if (i >= set.size() || j >= set.size()) fail(ErrorKind::InvalidArgument, "pair index out of range");
  if (i == j) fail(ErrorKind::InvalidArgument, "pair indices must differ");
}

struct Evaluated {
  double margin;
  double slack;
  double dual;
};

Evaluated evaluate(const PointSet& set, std::size_t i, std::size_t j, const Functional& f) {
  const double fi = apply(f, set[i]);
  const double fj = apply(f, set[j]);
  double slack = kInfinity;
  for (const auto& z : set.points()) {
    const double fz = apply(f, z);
    slack = std::min({slack, fi - fz, fz - fj});
  }
  return {fi - fj, slack, dual_norm(set.space(), f)};
}

ExactPairData evaluate_exact(const PointSet& set, std::size_t i, std::size_t j, const RationalVec& f) {
  ExactPairData out;
  out.functional = f;
  const Rational fi = dot<Rational>(f, set.exact(i));
  const Rational fj = dot<Rational>(f, set.exact(j));
  out.margin = fi - fj;
  bool first = true;
  for (const auto& z : set.exact_points()) {
    const Rational fz = dot<Rational>(f, z);
    Rational s = std::min(Rational(fi - fz), Rational(fz - fj));
    if (first || s < out.sandwich_slack) out.sandwich_slack = s;
    first = false;
  }
  out.dual_norm_value = dual_norm_exact(set.space(), f);
  return out;
}

PairWitness witness_from_exact(const PointSet& set, std::size_t i, std::size_t j, ExactPairData data) {
  PairWitness w;
  w.i = i;
  w.j = j;
  w.functional = Functional(to_doubles(data.functional));
  w.margin = to_double(data.margin);
  w.upper_bound = w.margin;
  w.sandwich_slack = to_double(data.sandwich_slack);
  w.dual_norm_value = to_double(data.dual_norm_value);
  w.separating = sgn(data.margin) > 0 && sgn(data.sandwich_slack) >= 0;
  w.exact = std::move(data);
  (void)set;
  return w;
}

PairWitness witness_from_float(const PointSet& set, std::size_t i, std::size_t j, const Functional& f,
                               const Tolerances& tol) {
  PairWitness w;
  w.i = i;
  w.j = j;
  w.functional = f;
  auto ev = evaluate(set, i, j, f);
  w.margin = ev.margin;
  w.upper_bound = ev.margin;
  w.sandwich_slack = ev.slack;
  w.dual_norm_value = ev.dual;
  w.separating = ev.margin > tol.solver && ev.slack >= -tol.solver;
  return w;
}

template <class Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn) {
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (std::size_t k = 0; k < count; ++k) fn(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      while (true) {
        std::size_t k = next.fetch_add(1);
        if (k >= count) return;
        try {
          fn(k);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

std::vector<std::pair<std::size_t, std::size_t>> all_pairs(std::size_t m) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) pairs.emplace_back(i, j);
  }
  return pairs;
}

Certificate assemble(const PointSet& set, std::vector<PairWitness> witnesses, NumericMode mode,
                     const Tolerances& tol, bool lower_bound_mode) {
  Certificate cert{set, std::move(witnesses), 0.0, std::nullopt, Classification::NotAntipodal, false, mode, tol};
  cert.mode = mode;
  cert.tolerances = tol;
  cert.lower_bound_mode = lower_bound_mode;
  bool all_sep = true;
  cert.d = kInfinity;
  for (const auto& w : cert.witnesses) {
    all_sep = all_sep && w.separating;
    cert.d = std::min(cert.d, w.margin);
  }
  if (mode == NumericMode::Rational) {
    Rational d;
    bool first = true;
    for (const auto& w : cert.witnesses) {
      if (first || w.exact->margin < d) d = w.exact->margin;
      first = false;
    }
    cert.d_exact = d;
    cert.d = to_double(d);
    cert.classification = classify_exact(d, all_sep);
  } else {
    cert.classification = classify(cert.d, all_sep, tol);
  }
  return cert;
}

}  // namespace

std::string to_string(NumericMode mode) { return mode == NumericMode::Rational ? "rational" : "float"; }

std::string to_string(Classification c) {
  switch (c) {
    case Classification::NotAntipodal:
      return "not_antipodal";
    case Classification::Antipodal:
      return "antipodal";
    case Classification::Hadwiger:
      return "hadwiger";
    case Classification::StrictHadwiger:
      return "strict_hadwiger";
  }
  return "not_antipodal";
}

Classification parse_classification(const std::string& text) {
  if (text == "not_antipodal") return Classification::NotAntipodal;
  if (text == "antipodal") return Classification::Antipodal;
  if (text == "hadwiger") return Classification::Hadwiger;
  if (text == "strict_hadwiger" || text == "strict") return Classification::StrictHadwiger;
  fail(ErrorKind::Parse, "unknown classification '" + text + "'");
}

PointSet::PointSet(NormSpace space, std::vector<Vector> points, double sphere_tol, bool project)
    : space_(std::move(space)), points_(std::move(points)) {
  for (const auto& p : points_) {
    require_same_dim(p.dim(), space_.dim(), "point set");
    for (double x : p) {
      if (!std::isfinite(x)) fail(ErrorKind::InvalidArgument, "non-finite coordinate");
    }
    exact_.push_back(exact_from_doubles(p.values()));
  }
  validate(sphere_tol, project);
}

PointSet::PointSet(NormSpace space, std::vector<RationalVec> points, double sphere_tol, bool project)
    : space_(std::move(space)), exact_(std::move(points)) {
  for (const auto& p : exact_) {
    require_same_dim(p.size(), space_.dim(), "point set");
    points_.emplace_back(to_doubles(p));
  }
  validate(sphere_tol, project);
}

void PointSet::validate(double sphere_tol, bool project) {
  if (points_.empty()) fail(ErrorKind::InvalidArgument, "point set must not be empty");
  for (std::size_t k = 0; k < points_.size(); ++k) {
    if (project) {
      if (space_.is_polytopal()) {
        exact_[k] = normalize_exact(space_, exact_[k]);
        points_[k] = Vector(to_doubles(exact_[k]));
      } else {
        points_[k] = normalize(space_, points_[k]);
        exact_[k] = exact_from_doubles(points_[k].values());
      }
      continue;
    }
    const double r = primal_norm(space_, points_[k]);
    if (!(std::fabs(r - 1.0) <= sphere_tol)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "point " << k << " has norm " << r << ", not on the unit sphere";
      fail(ErrorKind::OffSphere, msg.str());
    }
  }
  for (std::size_t a = 0; a < exact_.size(); ++a) {
    for (std::size_t b = a + 1; b < exact_.size(); ++b) {
      if (exact_[a] == exact_[b]) {
        fail(ErrorKind::InvalidArgument,
             "points " + std::to_string(a) + " and " + std::to_string(b) + " coincide");
      }
    }
  }
}

PointSet PointSet::subset(const std::vector<std::size_t>& indices) const {
  PointSet out(Unchecked{}, space_);
  for (std::size_t k : indices) {
    if (k >= size()) fail(ErrorKind::InvalidArgument, "subset index out of range");
    out.points_.push_back(points_[k]);
    out.exact_.push_back(exact_[k]);
  }
  return out;
}

PointSet PointSet::with_point(const Vector& extra) const {
  require_same_dim(extra.dim(), dim(), "with_point");
  return with_point(exact_from_doubles(extra.values()));
}

PointSet PointSet::with_point(const RationalVec& extra) const {
  require_same_dim(extra.size(), dim(), "with_point");
  for (const auto& p : exact_) {
    if (p == extra) fail(ErrorKind::InvalidArgument, "point already present");
  }
  PointSet out = *this;
  out.points_.emplace_back(to_doubles(extra));
  out.exact_.push_back(extra);
  return out;
}

NumericMode resolve_mode(const NormSpace& space, const CertifyOptions& options) {
  if (options.mode) {
    if (*options.mode == NumericMode::Rational && !space.is_polytopal()) {
      fail(ErrorKind::InvalidArgument, "rational mode needs a polytopal space, got " + space.describe());
    }
    return *options.mode;
  }
  return space.is_polytopal() ? NumericMode::Rational : NumericMode::Float;
}

std::size_t worker_threads(std::size_t requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("ANTIPODE_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

PairWitness max_margin_pair(const PointSet& set, std::size_t i, std::size_t j, const CertifyOptions& options) {
  check_pair(set, i, j);
  const NormSpace& space = set.space();
  const NumericMode mode = resolve_mode(space, options);
  const Tolerances& tol = options.tol;

  if (mode == NumericMode::Rational) {
    auto rows = options.unconstrained ? std::vector<RationalVec>{} : sandwich_rows<Rational>(set.exact_points(), i, j);
    auto c = difference<Rational>(set.exact(i), set.exact(j));
    auto res = detail::polytopal_margin<Rational>(space, c, rows, space.generators());
    if (res.status != lp::Status::Optimal) fail(ErrorKind::IterationLimit, "max-margin LP did not finish");
    auto w = witness_from_exact(set, i, j, evaluate_exact(set, i, j, res.functional));
    if (options.unconstrained) w.separating = sgn(w.exact->margin) > 0;
    return w;
  }

  auto pts = raw(set.points());
  auto rows = options.unconstrained ? std::vector<std::vector<double>>{} : sandwich_rows<double>(pts, i, j);
  Vector c = set[i] - set[j];
  PairWitness w;
  if (space.is_polytopal()) {
    auto res = detail::polytopal_margin<double>(space, c.values(), rows, space.generators_d());
    if (res.status != lp::Status::Optimal) fail(ErrorKind::IterationLimit, "max-margin LP did not finish");
    w = witness_from_float(set, i, j, Functional(res.functional), tol);
    w.iterations = 1;
  } else {
    auto res = detail::cutting_plane_margin(space, c, rows, tol);
    w = witness_from_float(set, i, j, res.functional, tol);
    w.upper_bound = std::max(res.upper, w.margin);
    w.converged = res.converged;
    w.iterations = res.iterations;
  }
  if (options.unconstrained) w.separating = w.margin > tol.solver;
  return w;
}

Certificate certify_set(const PointSet& set, const CertifyOptions& options) {
  if (set.size() < 2) fail(ErrorKind::InvalidArgument, "certification needs at least two points");
  const NumericMode mode = resolve_mode(set.space(), options);
  auto pairs = all_pairs(set.size());
  std::vector<PairWitness> witnesses(pairs.size());
  parallel_for(pairs.size(), worker_threads(options.threads), [&](std::size_t k) {
    witnesses[k] = max_margin_pair(set, pairs[k].first, pairs[k].second, options);
  });
  return assemble(set, std::move(witnesses), mode, options.tol, false);
}

PairWitness verify_witness(const PointSet& set, std::size_t i, std::size_t j, const Functional& f,
                           const CertifyOptions& options) {
  require_same_dim(f.dim(), set.dim(), "verify_witness");
  if (resolve_mode(set.space(), options) == NumericMode::Rational) {
    return verify_witness(set, i, j, exact_from_doubles(f.values()), options);
  }
  check_pair(set, i, j);
  auto w = witness_from_float(set, i, j, f, options.tol);
  if (w.dual_norm_value > 1.0 + options.tol.solver) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "witness rejected: dual norm " << w.dual_norm_value << " exceeds 1";
    fail(ErrorKind::WitnessRejected, msg.str());
  }
  return w;
}

PairWitness verify_witness(const PointSet& set, std::size_t i, std::size_t j, const RationalVec& f,
                           const CertifyOptions& options) {
  require_same_dim(f.size(), set.dim(), "verify_witness");
  if (resolve_mode(set.space(), options) == NumericMode::Float) {
    return verify_witness(set, i, j, Functional(to_doubles(f)), options);
  }
  check_pair(set, i, j);
  auto data = evaluate_exact(set, i, j, f);
  if (data.dual_norm_value > 1) {
    fail(ErrorKind::WitnessRejected, "witness rejected: dual norm " + to_string(data.dual_norm_value) + " exceeds 1");
  }
  return witness_from_exact(set, i, j, std::move(data));
}

Certificate certify_with_witnesses(const PointSet& set, const std::vector<RationalVec>& functionals,
                                   const CertifyOptions& options) {
  if (set.size() < 2) fail(ErrorKind::InvalidArgument, "certification needs at least two points");
  const NumericMode mode = resolve_mode(set.space(), options);
  auto pairs = all_pairs(set.size());
  std::vector<PairWitness> witnesses;
  for (auto [i, j] : pairs) {
    std::optional<PairWitness> best;
    for (const auto& f : functionals) {
      for (int sign : {1, -1}) {
        RationalVec g = f;
        if (sign < 0) {
          for (auto& x : g) x = -x;
        }
        PairWitness w = verify_witness(set, i, j, g, options);
        if (!w.separating) continue;
        bool better = !best || (mode == NumericMode::Rational ? w.exact->margin > best->exact->margin
                                                               : w.margin > best->margin);
        if (better) best = std::move(w);
      }
    }
    if (!best) {
      PairWitness none;
      none.i = i;
      none.j = j;
      none.functional = Functional(set.dim());
      none.separating = false;
      if (mode == NumericMode::Rational) {
        none.exact = ExactPairData{RationalVec(set.dim(), Rational(0)), 0, 0, 0};
      }
      best = std::move(none);
    }
    witnesses.push_back(std::move(*best));
  }
  return assemble(set, std::move(witnesses), mode, options.tol, true);
}

Classification classify(double d, bool all_separating, const Tolerances& tol) {
  if (!all_separating || !(d > tol.solver)) return Classification::NotAntipodal;
  if (d >= 1.0 + tol.strict) return Classification::StrictHadwiger;
  if (d >= 1.0 - tol.solver) return Classification::Hadwiger;
  return Classification::Antipodal;
}

Classification classify_exact(const Rational& d, bool all_separating) {
  if (!all_separating || sgn(d) <= 0) return Classification::NotAntipodal;
  if (d > 1) return Classification::StrictHadwiger;
  if (d == 1) return Classification::Hadwiger;
  return Classification::Antipodal;
}

bool meets(Classification c, Classification required) {
  return static_cast<int>(c) >= static_cast<int>(required);
}

SeparationReport separation_matrix(const PointSet& set, const CertifyOptions& options) {
  if (set.size() < 2) fail(ErrorKind::InvalidArgument, "separation matrix needs at least two points");
  const std::size_t m = set.size();
  const bool exact = resolve_mode(set.space(), options) == NumericMode::Rational;
  SeparationReport rep;
  rep.distances.assign(m, std::vector<double>(m, 0.0));
  rep.min_distance = kInfinity;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      double dist;
      if (exact) {
        Rational r = primal_norm_exact(set.space(), difference<Rational>(set.exact(a), set.exact(b)));
        if (!rep.min_distance_exact || r < *rep.min_distance_exact) rep.min_distance_exact = r;
        dist = to_double(r);
      } else {
        dist = primal_norm(set.space(), set[a] - set[b]);
      }
      rep.distances[a][b] = rep.distances[b][a] = dist;
      rep.min_distance = std::min(rep.min_distance, dist);
    }
  }
  if (exact) {
    rep.one_separated = *rep.min_distance_exact >= 1;
    rep.strictly_separated = *rep.min_distance_exact > 1;
  } else {
    rep.one_separated = rep.min_distance >= 1.0 - options.tol.solver;
    rep.strictly_separated = rep.min_distance >= 1.0 + options.tol.strict;
  }
  return rep;
}

std::string separation_csv(const SeparationReport& report) {
  std::ostringstream out;
  out.precision(17);
  const std::size_t m = report.distances.size();
  out << "i";
  for (std::size_t j = 0; j < m; ++j) out << "," << j;
  out << "\n";
  for (std::size_t i = 0; i < m; ++i) {
    out << i;
    for (std::size_t j = 0; j < m; ++j) out << "," << report.distances[i][j];
    out << "\n";
  }
  return out.str();
}

RelaxedMargin relaxed_margin(const PointSet& set, std::size_t i, std::size_t j, double penalty,
                             const Tolerances& tol) {
  check_pair(set, i, j);
  if (!(penalty > 0)) fail(ErrorKind::InvalidArgument, "penalty must be positive");
  const NormSpace& space = set.space();
  auto pts = raw(set.points());
  auto rows = sandwich_rows<double>(pts, i, j);
  Vector c = set[i] - set[j];
  Functional f;
  if (space.is_polytopal()) {
    auto res = detail::polytopal_margin<double>(space, c.values(), rows, space.generators_d(), penalty);
    f = Functional(res.functional);
  } else {
    Tolerances loose = tol;
    loose.solver = std::max(tol.solver, 1e-6);
    loose.max_iterations = std::min<std::size_t>(tol.max_iterations, 40);
    f = detail::cutting_plane_margin(space, c, rows, loose, penalty).functional;
  }
  RelaxedMargin out;
  out.violation = std::max(0.0, detail::max_violation(rows, f));
  out.value = apply(f, c) - penalty * out.violation;
  out.functional = std::move(f);
  return out;
}

}  // namespace antipode
