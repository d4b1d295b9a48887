#include "antipode/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "antipode/lp.hpp"

namespace antipode {

namespace {

constexpr std::size_t kMaxVertexDim = 8;

bool is_zero(const RationalVec& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return sgn(x) == 0; });
}

RationalVec negated(const RationalVec& v) {
  RationalVec out(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) out[k] = -v[k];
  return out;
}

// Keeps first occurrences, adds missing negatives right after their partner.
std::vector<RationalVec> symmetrize(const std::vector<RationalVec>& gens, std::size_t dim) {
  std::vector<RationalVec> out;
  auto contains = [&](const RationalVec& v) { return std::find(out.begin(), out.end(), v) != out.end(); };
  for (const auto& g : gens) {
    require_same_dim(g.size(), dim, "polytope generator");
    if (is_zero(g)) continue;
    if (!contains(g)) out.push_back(g);
    auto neg = negated(g);
    if (!contains(neg)) out.push_back(std::move(neg));
  }
  return out;
}

std::vector<double> to_d(const RationalVec& v) { return to_doubles(v); }

// max { f.x : g.x <= 1 for all generators g }, which is the gauge of x in
// conv(generators) when read with generator = vertex and f = x, and the dual
// norm of f for a facet polytope. Unbounded means the generators do not span.
template <class T>
lp::Solution<T> support_lp(const std::vector<std::vector<T>>& gens, const std::vector<T>& objective) {
  lp::Problem<T> problem(objective.size());
  problem.objective = objective;
  for (const auto& g : gens) problem.add_row(g, T(1));
  auto sol = lp::maximize(problem);
  if (sol.status == lp::Status::Unbounded) {
    fail(ErrorKind::NotSpanning, "polytope generators do not span the space");
  }
  if (sol.status != lp::Status::Optimal) fail(ErrorKind::IterationLimit, "support LP pivot limit");
  return sol;
}

double sign_of(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }

double lp_norm(std::span<const double> v, double p) {
  double mx = 0.0;
  for (double x : v) mx = std::max(mx, std::fabs(x));
  if (mx == 0.0) return 0.0;
  if (std::isinf(p)) return mx;
  if (p == 1.0) {
    double s = 0.0;
    for (double x : v) s += std::fabs(x);
    return s;
  }
  if (p == 2.0) return euclidean_norm(v);
  double s = 0.0;
  for (double x : v) s += std::pow(std::fabs(x) / mx, p);
  return mx * std::pow(s, 1.0 / p);
}

// Argmax of <g, x> over the unit ball of l_r for g != 0 (the l_r duality map
// applied to the dual vector g, where r is the exponent of the ball).
std::vector<double> lp_argmax(std::span<const double> g, double r) {
  const std::size_t n = g.size();
  std::vector<double> x(n, 0.0);
  if (std::isinf(r)) {
    for (std::size_t k = 0; k < n; ++k) x[k] = g[k] >= 0 ? 1.0 : -1.0;
    return x;
  }
  if (r == 1.0) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < n; ++k) {
      if (std::fabs(g[k]) > std::fabs(g[best])) best = k;
    }
    x[best] = g[best] >= 0 ? 1.0 : -1.0;
    return x;
  }
  // x_k = sign(g_k) |g_k / ||g||_s|^(s-1), s the conjugate of r.
  const double s = r / (r - 1.0);
  const double norm = lp_norm(g, s);
  for (std::size_t k = 0; k < n; ++k) {
    x[k] = sign_of(g[k]) * std::pow(std::fabs(g[k]) / norm, s - 1.0);
  }
  return x;
}

double conjugate(double p) {
  if (std::isinf(p)) return 1.0;
  if (p == 1.0) return kInfinity;
  return p / (p - 1.0);
}

void require_dim(const NormSpace& space, std::size_t dim, const char* where) {
  require_same_dim(dim, space.dim(), where);
}

void require_exact(const NormSpace& space) {
  if (!space.is_polytopal()) {
    fail(ErrorKind::InvalidArgument, "exact arithmetic needs a polytopal space, got " + space.describe());
  }
}

std::size_t argmax_dot(const std::vector<std::vector<double>>& gens, std::span<const double> v) {
  std::size_t best = 0;
  double best_val = -kInfinity;
  for (std::size_t k = 0; k < gens.size(); ++k) {
    double s = 0.0;
    for (std::size_t t = 0; t < v.size(); ++t) s += gens[k][t] * v[t];
    if (s > best_val) {
      best_val = s;
      best = k;
    }
  }
  return best;
}

}  // namespace

std::size_t exact_rank(const std::vector<RationalVec>& rows_in, std::size_t dim) {
  auto rows = rows_in;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < dim && rank < rows.size(); ++col) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && sgn(rows[pivot][col]) == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    for (std::size_t r = rank + 1; r < rows.size(); ++r) {
      if (sgn(rows[r][col]) == 0) continue;
      Rational factor = rows[r][col] / rows[rank][col];
      for (std::size_t c = col; c < dim; ++c) rows[r][c] -= factor * rows[rank][c];
    }
    ++rank;
  }
  return rank;
}

void NormSpace::set_generators(std::vector<RationalVec> gens, Route route) {
  gens_ = symmetrize(gens, dim_);
  if (gens_.empty() || exact_rank(gens_, dim_) < dim_) {
    fail(ErrorKind::NotSpanning, "polytope generators do not span R^" + std::to_string(dim_));
  }
  gens_d_.clear();
  for (const auto& g : gens_) gens_d_.push_back(to_d(g));
  route_ = route;
}

NormSpace NormSpace::lp(std::size_t n, double p) {
  if (n == 0) fail(ErrorKind::InvalidArgument, "dimension must be positive");
  if (!(p >= 1.0)) fail(ErrorKind::InvalidArgument, "lp exponent must satisfy p >= 1");
  NormSpace s(SpaceKind::Lp, n);
  s.p_ = p;
  if (p == 1.0 || std::isinf(p)) {
    std::vector<RationalVec> gens;
    for (std::size_t k = 0; k < n; ++k) {
      RationalVec e(n, Rational(0));
      e[k] = 1;
      gens.push_back(e);
    }
    s.set_generators(std::move(gens), p == 1.0 ? Route::Vertices : Route::Facets);
  }
  return s;
}

NormSpace NormSpace::polytope_vertices(const std::vector<RationalVec>& vertices) {
  if (vertices.empty()) fail(ErrorKind::InvalidArgument, "polytope needs vertices");
  const std::size_t n = vertices.front().size();
  if (n == 0) fail(ErrorKind::InvalidArgument, "dimension must be positive");
  if (n > kMaxVertexDim) {
    fail(ErrorKind::InvalidArgument, "vertex-described polytopes are limited to dimension 8");
  }
  NormSpace s(SpaceKind::PolytopeV, n);
  s.set_generators(vertices, Route::Vertices);
  return s;
}

NormSpace NormSpace::polytope_facets(const std::vector<RationalVec>& facets) {
  if (facets.empty()) fail(ErrorKind::InvalidArgument, "polytope needs facets");
  const std::size_t n = facets.front().size();
  if (n == 0) fail(ErrorKind::InvalidArgument, "dimension must be positive");
  NormSpace s(SpaceKind::PolytopeF, n);
  s.set_generators(facets, Route::Facets);
  return s;
}

NormSpace NormSpace::cylinder(std::size_t n) {
  if (n < 2) fail(ErrorKind::InvalidArgument, "cylinder norm needs dimension >= 2");
  return NormSpace(SpaceKind::Cylinder, n);
}

double NormSpace::q() const noexcept { return conjugate(p_); }

std::string NormSpace::describe() const {
  std::ostringstream out;
  switch (kind_) {
    case SpaceKind::Lp:
      out << "l_";
      if (std::isinf(p_)) {
        out << "inf";
      } else {
        out << p_;
      }
      out << "^" << dim_;
      break;
    case SpaceKind::PolytopeV:
      out << "polytope_v(" << gens_.size() << " vertices, n=" << dim_ << ")";
      break;
    case SpaceKind::PolytopeF:
      out << "polytope_f(" << gens_.size() << " facets, n=" << dim_ << ")";
      break;
    case SpaceKind::Cylinder:
      out << "cylinder^" << dim_;
      break;
  }
  return out.str();
}

bool operator==(const NormSpace& a, const NormSpace& b) {
  return a.kind_ == b.kind_ && a.dim_ == b.dim_ && (a.kind_ != SpaceKind::Lp || a.p_ == b.p_) &&
         a.gens_ == b.gens_;
}

double primal_norm(const NormSpace& space, const Vector& v) {
  require_dim(space, v.dim(), "primal_norm");
  switch (space.kind()) {
    case SpaceKind::Lp:
      return lp_norm(v.span(), space.p());
    case SpaceKind::Cylinder: {
      auto head = v.span().first(v.dim() - 1);
      return euclidean_norm(head) + std::fabs(v[v.dim() - 1]);
    }
    case SpaceKind::PolytopeF: {
      double best = 0.0;
      for (const auto& g : space.generators_d()) {
        double s = 0.0;
        for (std::size_t k = 0; k < v.dim(); ++k) s += g[k] * v[k];
        best = std::max(best, std::fabs(s));
      }
      return best;
    }
    case SpaceKind::PolytopeV: {
      if (v.is_zero()) return 0.0;
      auto sol = support_lp<double>(space.generators_d(), v.values());
      return std::max(0.0, sol.value);
    }
  }
  return 0.0;
}

double dual_norm(const NormSpace& space, const Functional& f) {
  require_dim(space, f.dim(), "dual_norm");
  switch (space.kind()) {
    case SpaceKind::Lp:
      return lp_norm(f.span(), space.q());
    case SpaceKind::Cylinder: {
      auto head = f.span().first(f.dim() - 1);
      return std::max(euclidean_norm(head), std::fabs(f[f.dim() - 1]));
    }
    case SpaceKind::PolytopeV: {
      double best = 0.0;
      for (const auto& g : space.generators_d()) {
        double s = 0.0;
        for (std::size_t k = 0; k < f.dim(); ++k) s += g[k] * f[k];
        best = std::max(best, s);
      }
      return best;
    }
    case SpaceKind::PolytopeF: {
      if (f.is_zero()) return 0.0;
      auto sol = support_lp<double>(space.generators_d(), f.values());
      return std::max(0.0, sol.value);
    }
  }
  return 0.0;
}

Functional dual_support_point(const NormSpace& space, const Vector& direction) {
  require_dim(space, direction.dim(), "dual_support_point");
  if (direction.is_zero()) fail(ErrorKind::ZeroVector, "dual_support_point: zero direction");
  const std::size_t n = direction.dim();
  switch (space.kind()) {
    case SpaceKind::Lp:
      // argmax over the dual ball, which is the l_q ball.
      return Functional(lp_argmax(direction.span(), space.q()));
    case SpaceKind::Cylinder: {
      Functional f(n);
      auto head = direction.span().first(n - 1);
      double r = euclidean_norm(head);
      if (r > 0) {
        for (std::size_t k = 0; k + 1 < n; ++k) f[k] = direction[k] / r;
      }
      f[n - 1] = sign_of(direction[n - 1]);
      return f;
    }
    case SpaceKind::PolytopeV: {
      auto sol = support_lp<double>(space.generators_d(), direction.values());
      return Functional(sol.x);
    }
    case SpaceKind::PolytopeF: {
      std::size_t k = argmax_dot(space.generators_d(), direction.span());
      return Functional(space.generators_d()[k]);
    }
  }
  return Functional(n);
}

Vector norming_vector(const NormSpace& space, const Functional& f) {
  require_dim(space, f.dim(), "norming_vector");
  if (f.is_zero()) fail(ErrorKind::ZeroVector, "norming_vector: zero functional");
  const std::size_t n = f.dim();
  switch (space.kind()) {
    case SpaceKind::Lp:
      return Vector(lp_argmax(f.span(), space.p()));
    case SpaceKind::Cylinder: {
      auto head = f.span().first(n - 1);
      double r = euclidean_norm(head);
      Vector x(n);
      if (r >= std::fabs(f[n - 1])) {
        for (std::size_t k = 0; k + 1 < n; ++k) x[k] = f[k] / r;
      } else {
        x[n - 1] = sign_of(f[n - 1]);
      }
      return x;
    }
    case SpaceKind::PolytopeV: {
      std::size_t k = argmax_dot(space.generators_d(), f.span());
      return Vector(space.generators_d()[k]);
    }
    case SpaceKind::PolytopeF: {
      auto sol = support_lp<double>(space.generators_d(), f.values());
      return Vector(sol.x);
    }
  }
  return Vector(n);
}

Vector normalize(const NormSpace& space, const Vector& v) {
  double r = primal_norm(space, v);
  if (!(r > 0)) fail(ErrorKind::ZeroVector, "normalize: zero vector");
  return (1.0 / r) * v;
}

Rational primal_norm_exact(const NormSpace& space, const RationalVec& v) {
  require_dim(space, v.size(), "primal_norm");
  require_exact(space);
  if (is_zero(v)) return 0;
  if (space.has_vertex_route()) {
    return support_lp<Rational>(space.generators(), v).value;
  }
  Rational best = 0;
  for (const auto& g : space.generators()) {
    Rational s = dot<Rational>(g, v);
    if (s > best) best = s;
  }
  return best;
}

Rational dual_norm_exact(const NormSpace& space, const RationalVec& f) {
  require_dim(space, f.size(), "dual_norm");
  require_exact(space);
  if (is_zero(f)) return 0;
  if (!space.has_vertex_route()) {
    return support_lp<Rational>(space.generators(), f).value;
  }
  Rational best = 0;
  for (const auto& g : space.generators()) {
    Rational s = dot<Rational>(g, f);
    if (s > best) best = s;
  }
  return best;
}

RationalVec dual_support_point_exact(const NormSpace& space, const RationalVec& direction) {
  require_dim(space, direction.size(), "dual_support_point");
  require_exact(space);
  if (is_zero(direction)) fail(ErrorKind::ZeroVector, "dual_support_point: zero direction");
  if (space.has_vertex_route()) {
    return support_lp<Rational>(space.generators(), direction).x;
  }
  std::size_t best = 0;
  Rational best_val;
  for (std::size_t k = 0; k < space.generators().size(); ++k) {
    Rational s = dot<Rational>(space.generators()[k], direction);
    if (k == 0 || s > best_val) {
      best_val = s;
      best = k;
    }
  }
  return space.generators()[best];
}

RationalVec normalize_exact(const NormSpace& space, const RationalVec& v) {
  Rational r = primal_norm_exact(space, v);
  if (sgn(r) <= 0) fail(ErrorKind::ZeroVector, "normalize: zero vector");
  return scaled<Rational>(v, Rational(1) / r);
}

std::vector<RationalVec> enumerate_vertices(const NormSpace& facet_space) {
  if (!facet_space.is_polytopal()) fail(ErrorKind::InvalidArgument, "enumerate_vertices needs a polytopal space");
  if (facet_space.has_vertex_route()) return facet_space.generators();
  const auto& facets = facet_space.generators();
  const std::size_t n = facet_space.dim();
  const std::size_t m = facets.size();
  std::vector<RationalVec> vertices;
  std::vector<std::size_t> pick(n);
  for (std::size_t k = 0; k < n; ++k) pick[k] = k;
  if (m < n) return vertices;
  while (true) {
    // Solve facets[pick] x = 1 by Gauss-Jordan.
    std::vector<RationalVec> aug(n, RationalVec(n + 1));
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) aug[r][c] = facets[pick[r]][c];
      aug[r][n] = 1;
    }
    bool singular = false;
    for (std::size_t col = 0; col < n && !singular; ++col) {
      std::size_t piv = col;
      while (piv < n && sgn(aug[piv][col]) == 0) ++piv;
      if (piv == n) {
        singular = true;
        break;
      }
      std::swap(aug[col], aug[piv]);
      Rational inv = Rational(1) / aug[col][col];
      for (std::size_t c = col; c <= n; ++c) aug[col][c] *= inv;
      for (std::size_t r = 0; r < n; ++r) {
        if (r == col || sgn(aug[r][col]) == 0) continue;
        Rational factor = aug[r][col];
        for (std::size_t c = col; c <= n; ++c) aug[r][c] -= factor * aug[col][c];
      }
    }
    if (!singular) {
      RationalVec x(n);
      for (std::size_t r = 0; r < n; ++r) x[r] = aug[r][n];
      bool feasible = std::all_of(facets.begin(), facets.end(),
                                  [&](const RationalVec& g) { return dot<Rational>(g, x) <= 1; });
      if (feasible && std::find(vertices.begin(), vertices.end(), x) == vertices.end()) {
        vertices.push_back(std::move(x));
      }
    }
    // next combination
    std::size_t k = n;
    while (k > 0 && pick[k - 1] == m - n + k - 1) --k;
    if (k == 0) break;
    ++pick[k - 1];
    for (std::size_t t = k; t < n; ++t) pick[t] = pick[t - 1] + 1;
  }
  return vertices;
}

}  // namespace antipode
