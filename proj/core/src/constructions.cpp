#include "antipode/constructions.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "antipode/error.hpp"

namespace antipode {

namespace {

std::string fmt(double x) {
  if (std::isinf(x)) return "inf";
  std::ostringstream out;
  out.precision(17);
  out << x;
  return out.str();
}

double inv_root(double base, double p) { return std::isinf(p) ? 1.0 : std::pow(base, -1.0 / p); }

double conjugate(double p) {
  if (std::isinf(p)) return 1.0;
  if (p == 1.0) return kInfinity;
  return p / (p - 1.0);
}

RationalVec rational_coords(std::initializer_list<const char*> text) {
  RationalVec out;
  for (const char* t : text) out.push_back(parse_rational(t));
  return out;
}

RationalVec exact_functional(std::vector<double> coords) { return exact_from_doubles(coords); }

RationalVec negated(RationalVec v) {
  for (auto& x : v) x = -x;
  return v;
}

Construction base(std::string name, PointSet points) {
  return Construction{std::move(name), std::move(points), 0.0, std::nullopt, false, std::nullopt, {},
                      Classification::Antipodal, ConstructionTarget::Certify, {}, {}, {}};
}

void set_expected(Construction& c, double d) {
  c.expected_d = d;
  c.expected_class = classify(d, true, Tolerances{});
}

void require_p(double p, bool allow_one) {
  if (!(p >= 1.0) || (!allow_one && p == 1.0)) fail(ErrorKind::InvalidArgument, "p out of range: " + fmt(p));
}

}  // namespace

Construction auerbach_cross(std::size_t n, double p) {
  if (n < 2) fail(ErrorKind::InvalidArgument, "auerbach_cross needs n >= 2");
  require_p(p, true);
  NormSpace space = NormSpace::lp(n, p);
  std::vector<RationalVec> pts;
  for (int sign : {1, -1}) {
    for (std::size_t k = 0; k < n; ++k) {
      RationalVec e(n, Rational(0));
      e[k] = sign;
      pts.push_back(std::move(e));
    }
  }
  Construction c = base("auerbach-cross", PointSet(space, std::move(pts)));
  const Rational half(1, 2);
  for (std::size_t a = 0; a < 2 * n; ++a) {
    for (std::size_t b = a + 1; b < 2 * n; ++b) {
      const std::size_t ka = a % n, kb = b % n;
      const int sa = a < n ? 1 : -1, sb = b < n ? 1 : -1;
      RationalVec f(n, Rational(0));
      if (ka == kb) {
        f[ka] = sa;
      } else {
        f[ka] = sa * half;
        f[kb] = -sb * half;
      }
      c.suggested.push_back({a, b, std::move(f)});
    }
  }
  set_expected(c, std::isinf(p) ? 1.0 : std::pow(2.0, 1.0 / p));
  if (p == 1.0) c.expected_d_exact = Rational(2);
  if (std::isinf(p)) c.expected_d_exact = Rational(1);
  c.witness_d = 1.0;
  c.expected_formula = "2^(1/p)";
  c.provenance = "Auerbach basis cross-polytope {±e_i} of l_p^n";
  c.params = {{"n", std::to_string(n)}, {"p", fmt(p)}};
  return c;
}

Construction scaled_hypercube(std::size_t n, double p) {
  if (n < 2) fail(ErrorKind::InvalidArgument, "scaled_hypercube needs n >= 2");
  if (n > 12) fail(ErrorKind::InvalidArgument, "scaled_hypercube supports n <= 12");
  require_p(p, false);
  NormSpace space = NormSpace::lp(n, p);
  const double s = inv_root(static_cast<double>(n), p);
  std::vector<Vector> pts;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    Vector v(n);
    for (std::size_t k = 0; k < n; ++k) v[k] = ((mask >> k) & 1U) ? -s : s;
    pts.push_back(std::move(v));
  }
  Construction c = base("scaled-hypercube", PointSet(space, std::move(pts)));
  for (std::size_t k = 0; k < n; ++k) {
    RationalVec e(n, Rational(0));
    e[k] = 1;
    for (std::size_t a = 0; a < c.points.size(); ++a) {
      const std::size_t b = a ^ (std::size_t{1} << k);
      if (a < b) c.suggested.push_back({a, b, e});
    }
  }
  set_expected(c, 2.0 * s);
  if (std::isinf(p)) c.expected_d_exact = Rational(2);
  c.expected_formula = "2/n^(1/p)";
  c.provenance = "scaled hypercube n^(-1/p){-1,1}^n in l_p^n";
  c.params = {{"n", std::to_string(n)}, {"p", fmt(p)}};
  return c;
}

double prism_default_beta(double p) { return (2.0 + std::pow(2.0, p)) / 2.0; }

double prism_expected_d(double p, double beta) {
  const double alpha = beta / (beta - 1.0);
  const double q = conjugate(p);
  return std::min(2.0 / std::pow(beta, 1.0 / p), 2.0 / (std::pow(2.0, 1.0 / q) * std::pow(alpha, 1.0 / p)));
}

Construction prism_4n_minus_4(std::size_t n, double p, std::optional<double> beta_opt) {
  if (n < 3) fail(ErrorKind::InvalidArgument, "prism needs n >= 3");
  if (!(p > 1.0) || std::isinf(p)) fail(ErrorKind::InvalidArgument, "prism needs 1 < p < inf");
  const double beta = beta_opt.value_or(prism_default_beta(p));
  if (!(beta > 2.0 && beta < std::pow(2.0, p))) {
    fail(ErrorKind::InvalidArgument, "beta must lie in (2, 2^p), got " + fmt(beta));
  }
  const double alpha = beta / (beta - 1.0);
  const double a = std::pow(alpha, -1.0 / p);
  const double b = std::pow(beta, -1.0 / p);
  std::vector<Vector> pts;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    for (double sign : {1.0, -1.0}) {
      Vector v(n);
      v[k] = sign * a;
      v[n - 1] = b;
      pts.push_back(std::move(v));
    }
  }
  const std::size_t half = pts.size();
  for (std::size_t k = 0; k < half; ++k) pts.push_back(-pts[k]);
  Construction c = base("prism", PointSet(NormSpace::lp(n, p), std::move(pts)));

  RationalVec en(n, Rational(0));
  en[n - 1] = 1;
  const double w = std::pow(2.0, -1.0 / conjugate(p));
  std::vector<RationalVec> diag;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    for (std::size_t l = k + 1; l + 1 < n; ++l) {
      for (double sign : {1.0, -1.0}) {
        std::vector<double> f(n, 0.0);
        f[k] = w;
        f[l] = sign * w;
        diag.push_back(exact_functional(f));
      }
    }
  }
  for (std::size_t i = 0; i < c.points.size(); ++i) {
    for (std::size_t j = i + 1; j < c.points.size(); ++j) {
      if ((i < half) != (j < half)) c.suggested.push_back({i, j, i < half ? en : negated(en)});
    }
  }
  for (const auto& f : diag) {
    for (std::size_t i = 0; i < c.points.size(); ++i) {
      for (std::size_t j = 0; j < c.points.size(); ++j) {
        const double fi = dot<double>(to_doubles(f), c.points[i].values());
        const double fj = dot<double>(to_doubles(f), c.points[j].values());
        if (i < j && fi > 0.25 && fj < -0.25) c.suggested.push_back({i, j, f});
      }
    }
  }
  set_expected(c, prism_expected_d(p, beta));
  c.expected_formula = "min{2/beta^(1/p), 2/(2^(1/q) alpha^(1/p))}, alpha = beta/(beta-1)";
  c.provenance = "4n-4 point prism in l_p^n";
  c.params = {{"n", std::to_string(n)}, {"p", fmt(p)}, {"beta", fmt(beta)}};
  return c;
}

NormSpace octahedron_space() {
  return NormSpace::polytope_vertices({rational_coords({"1", "1", "-1/3"}), rational_coords({"1", "-1/3", "1"}),
                                       rational_coords({"-1/3", "1", "1"})});
}

Construction l1_cube_in_octahedron() {
  const Rational s(5, 9);
  std::vector<RationalVec> pts;
  for (unsigned mask = 0; mask < 8; ++mask) {
    RationalVec v(3);
    for (unsigned k = 0; k < 3; ++k) v[k] = ((mask >> k) & 1U) ? Rational(-s) : s;
    pts.push_back(std::move(v));
  }
  Construction c = base("l1-cube-octahedron", PointSet(octahedron_space(), std::move(pts)));
  for (std::size_t k = 0; k < 3; ++k) {
    RationalVec e(3, Rational(0));
    e[k] = 1;
    for (std::size_t a = 0; a < 8; ++a) {
      const std::size_t b = a ^ (std::size_t{1} << k);
      if (a < b) c.suggested.push_back({a, b, e});
    }
  }
  c.expected_d_exact = Rational(10, 9);
  set_expected(c, 10.0 / 9.0);
  c.expected_formula = "10/9";
  c.provenance = "(5/9){-1,1}^3 on the sphere of an octahedron model of l_1^3";
  return c;
}

Construction petty_parallelepiped() {
  std::vector<RationalVec> pts = {rational_coords({"-0.18", "0", "0.82"}), rational_coords({"0.82", "0", "-0.18"}),
                                  rational_coords({"0.32", "0.6", "0.32"}), rational_coords({"0.32", "-0.6", "0.32"})};
  for (std::size_t k = 0; k < 4; ++k) pts.push_back(negated(pts[k]));
  Construction c = base("petty-parallelepiped", PointSet(NormSpace::cylinder(3), std::move(pts)));
  const double r = std::sqrt(1.36);
  RationalVec f1 = rational_coords({"1", "0", "1"});
  RationalVec f2 = exact_functional({0.6 / r, 1.0 / r, -0.6 / r});
  RationalVec f3 = exact_functional({0.6 / r, -1.0 / r, -0.6 / r});
  c.suggested = {{0, 4, f1}, {4, 0, f2}, {4, 0, f3}};
  set_expected(c, 1.2 / r);
  c.expected_is_lower_bound = true;
  c.witness_d = 1.2 / r;
  c.expected_formula = "1.2/sqrt(1.36)";
  c.provenance = "parallelepiped ±A, ±B, ±C, ±D on the sphere of the cylinder norm";
  return c;
}

std::pair<Construction, Construction> petty_separated_sets() {
  NormSpace space = NormSpace::cylinder(3);
  std::vector<RationalVec> first = {
      rational_coords({"1", "0", "0"}),        rational_coords({"1/2", "2/3", "1/6"}),
      rational_coords({"0", "2/3", "-1/3"}),   rational_coords({"-1/2", "2/3", "1/6"}),
      rational_coords({"-1", "0", "0"}),       rational_coords({"-1/2", "-2/3", "1/6"}),
      rational_coords({"0", "-2/3", "-1/3"}),  rational_coords({"1/2", "-2/3", "1/6"}),
      rational_coords({"0", "0", "1"}),        rational_coords({"1/2", "0", "1/2"}),
      rational_coords({"-1/2", "0", "1/2"}),   rational_coords({"0", "0", "-1"}),
      rational_coords({"1/2", "0", "-1/2"}),   rational_coords({"-1/2", "0", "-1/2"}),
  };
  const double h = std::sqrt(2.0) / 2.0;
  std::vector<Vector> second = {
      Vector{2.0 / 3.0, 0.0, -1.0 / 3.0}, Vector{h, h, 0.0},  Vector{0.0, 2.0 / 3.0, 1.0 / 3.0},
      Vector{-h, h, 0.0},                 Vector{-2.0 / 3.0, 0.0, -1.0 / 3.0}, Vector{-h, -h, 0.0},
      Vector{0.0, -2.0 / 3.0, 1.0 / 3.0}, Vector{h, -h, 0.0}, Vector{0.0, 0.0, 1.0},
      Vector{0.0, 0.0, -1.0},
  };
  Construction a = base("petty-separated-14", PointSet(space, std::move(first)));
  a.target = ConstructionTarget::Separation;
  a.expected_d = 1.0;
  a.expected_formula = "min distance >= 1";
  a.provenance = "14-point 1-separated subset of the cylinder-norm sphere";
  Construction b = base("petty-separated-10", PointSet(space, std::move(second)));
  b.target = ConstructionTarget::Separation;
  b.expected_d = 1.0;
  b.expected_is_lower_bound = true;
  b.expected_formula = "min distance > 1";
  b.provenance = "10-point strictly separated subset of the cylinder-norm sphere";
  return {std::move(a), std::move(b)};
}

Construction gv_sign_vectors(std::size_t n, double delta, std::uint64_t seed, std::size_t max_count) {
  if (n < 2 || n > 40) fail(ErrorKind::InvalidArgument, "gv needs 2 <= n <= 40");
  if (!(delta > 0.0 && delta <= 1.0 / 3.0)) fail(ErrorKind::InvalidArgument, "gv needs 0 < delta <= 1/3");
  if (max_count < 1) fail(ErrorKind::InvalidArgument, "gv needs max_count >= 1");
  const double limit = delta * static_cast<double>(n);
  std::mt19937_64 rng(seed);
  std::vector<std::uint64_t> accepted;
  auto try_add = [&](std::uint64_t x) {
    for (std::uint64_t y : accepted) {
      const int ham = std::popcount(x ^ y);
      const double ip = static_cast<double>(n) - 2.0 * ham;
      if (!(std::fabs(ip) < limit)) return;
      if (x == y) return;
    }
    accepted.push_back(x);
  };
  if (n <= 22) {
    std::vector<std::uint64_t> order(std::size_t{1} << n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    for (std::uint64_t x : order) {
      if (accepted.size() >= max_count) break;
      try_add(x);
    }
  } else {
    std::uniform_int_distribution<std::uint64_t> draw(0, (std::uint64_t{1} << n) - 1);
    for (std::size_t t = 0; t < (std::size_t{1} << 22) && accepted.size() < max_count; ++t) try_add(draw(rng));
  }
  const double s = 1.0 / std::sqrt(static_cast<double>(n));
  std::vector<Vector> pts;
  for (std::uint64_t x : accepted) {
    Vector v(n);
    for (std::size_t k = 0; k < n; ++k) v[k] = ((x >> k) & 1U) ? -s : s;
    pts.push_back(std::move(v));
  }
  Construction c = base("gv", PointSet(NormSpace::lp(n, 2.0), std::move(pts)));
  c.expected_d = std::sqrt(2.0 - 2.0 * delta);
  c.expected_is_lower_bound = true;
  c.expected_class = c.points.size() >= 2 && c.expected_d >= 1.0 + Tolerances{}.strict ? Classification::StrictHadwiger
                                                                                       : Classification::Antipodal;
  c.expected_formula = "sqrt(2 - 2 delta)";
  c.provenance = "greedy low-correlation sign vectors x/sqrt(n), x in {-1,1}^n";
  c.params = {{"n", std::to_string(n)},
              {"delta", fmt(delta)},
              {"seed", std::to_string(seed)},
              {"max_count", std::to_string(max_count)}};
  return c;
}

namespace {

Rational det2(const RationalVec& u, const RationalVec& v) { return u[0] * v[1] - u[1] * v[0]; }

std::pair<RationalVec, RationalVec> auerbach_exact(const NormSpace& space) {
  auto verts = enumerate_vertices(space);
  Rational best = -1;
  std::size_t bu = 0, bv = 0;
  for (std::size_t a = 0; a < verts.size(); ++a) {
    for (std::size_t b = a + 1; b < verts.size(); ++b) {
      Rational d = det2(verts[a], verts[b]);
      if (sgn(d) < 0) d = -d;
      if (d > best) {
        best = d;
        bu = a;
        bv = b;
      }
    }
  }
  RationalVec u = normalize_exact(space, verts[bu]);
  RationalVec v = normalize_exact(space, verts[bv]);
  if (sgn(det2(u, v)) < 0) v = negated(std::move(v));
  return {u, v};
}

double area_at(const NormSpace& space, double theta) {
  Vector u = normalize(space, Vector{std::cos(theta), std::sin(theta)});
  return dual_norm(space, Functional{-u[1], u[0]});
}

}  // namespace

std::pair<Vector, Vector> auerbach_basis_2d(const NormSpace& space) {
  if (space.dim() != 2) fail(ErrorKind::DimensionMismatch, "auerbach_basis_2d needs a plane");
  if (space.is_polytopal()) {
    auto [u, v] = auerbach_exact(space);
    return {Vector(to_doubles(u)), Vector(to_doubles(v))};
  }
  const double step = 1e-3;
  const double pi = std::acos(-1.0);
  double best_theta = 0.0, best = -1.0;
  for (double theta = 0.0; theta < pi; theta += step) {
    const double a = area_at(space, theta);
    if (a > best) {
      best = a;
      best_theta = theta;
    }
  }
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = best_theta - step, hi = best_theta + step;
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = area_at(space, x1), f2 = area_at(space, x2);
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = area_at(space, x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = area_at(space, x1);
    }
  }
  double theta = 0.5 * (lo + hi);
  if (area_at(space, theta) < best) theta = best_theta;
  Vector u = normalize(space, Vector{std::cos(theta), std::sin(theta)});
  Vector v = norming_vector(space, Functional{-u[1], u[0]});
  return {u, v};
}

Construction minkowski_quadruple(const NormSpace& space) {
  if (space.dim() != 2) fail(ErrorKind::DimensionMismatch, "minkowski_quadruple needs a plane");
  const Tolerances tol;
  bool sup_plane = false;
  auto make_points = [&]() {
    if (space.is_polytopal()) {
      auto [u, v] = auerbach_exact(space);
      RationalVec sum = {u[0] + v[0], u[1] + v[1]};
      RationalVec diff = {u[0] - v[0], u[1] - v[1]};
      const Rational ns = primal_norm_exact(space, sum), nd = primal_norm_exact(space, diff);
      if (ns == 2 && nd == 2) {
        sup_plane = true;
        return PointSet(space, std::vector<RationalVec>{u, v, negated(u), negated(v)});
      }
      RationalVec a = scaled<Rational>(sum, Rational(1 / ns));
      RationalVec b = scaled<Rational>(diff, Rational(1 / nd));
      return PointSet(space, std::vector<RationalVec>{a, b, negated(a), negated(b)});
    }
    auto [u, v] = auerbach_basis_2d(space);
    const double ns = primal_norm(space, u + v), nd = primal_norm(space, u - v);
    if (std::fabs(ns - 2.0) <= tol.solver && std::fabs(nd - 2.0) <= tol.solver) {
      sup_plane = true;
      return PointSet(space, std::vector<Vector>{u, v, -u, -v});
    }
    Vector a = (1.0 / ns) * (u + v), b = (1.0 / nd) * (u - v);
    return PointSet(space, std::vector<Vector>{a, b, -a, -b});
  };
  Construction c = base("minkowski-quadruple", make_points());
  c.expected_class = Classification::StrictHadwiger;
  if (sup_plane) {
    c.expected_d = 2.0;
    if (space.is_polytopal()) c.expected_d_exact = Rational(2);
    c.expected_formula = "2 (sup-norm plane)";
  } else {
    c.expected_d = 1.0;
    c.expected_is_lower_bound = true;
    c.expected_formula = "> 1";
  }
  c.provenance = "diagonal quadruple of a maximal-area Auerbach parallelogram";
  return c;
}

NormSpace random_polygon_space(std::uint64_t seed, std::size_t half_vertices) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coord(-9, 9);
  std::uniform_int_distribution<std::size_t> count(2, 6);
  const std::size_t k = half_vertices > 0 ? half_vertices : count(rng);
  while (true) {
    std::vector<RationalVec> verts;
    while (verts.size() < k) {
      RationalVec v = {Rational(coord(rng), 6), Rational(coord(rng), 6)};
      for (auto& x : v) x.canonicalize();
      if (sgn(v[0]) == 0 && sgn(v[1]) == 0) continue;
      verts.push_back(std::move(v));
    }
    if (exact_rank(verts, 2) == 2) return NormSpace::polytope_vertices(verts);
  }
}

Construction hexagon_counterexample() {
  const double h = std::sqrt(3.0) / 2.0;
  std::vector<Vector> pts = {Vector{1.0, 0.0}, Vector{0.5, h}, Vector{-0.5, h}};
  Construction c = base("hexagon", PointSet(NormSpace::lp(2, 2.0), std::move(pts)));
  c.expected_d = h;
  c.expected_class = Classification::Antipodal;
  c.expected_formula = "sqrt(3)/2";
  c.provenance = "three consecutive vertices of the unit hexagon in the Euclidean plane";
  return c;
}

std::vector<RationalVec> witness_pool(const Construction& c) {
  std::vector<RationalVec> pool;
  for (const auto& w : c.suggested) {
    if (std::find(pool.begin(), pool.end(), w.functional) == pool.end()) pool.push_back(w.functional);
  }
  return pool;
}

Certificate certify_suggested(const Construction& c, const CertifyOptions& options) {
  return certify_with_witnesses(c.points, witness_pool(c), options);
}

std::vector<std::string> construction_names() {
  return {"auerbach-cross", "scaled-hypercube", "prism", "l1-cube-octahedron", "petty-parallelepiped",
          "petty-separated-14", "petty-separated-10", "gv", "minkowski-quadruple", "hexagon"};
}

Construction make_construction(const std::string& name, const ConstructionParams& params) {
  auto need_n = [&]() {
    if (!params.n) fail(ErrorKind::InvalidArgument, name + " needs --n");
    return *params.n;
  };
  auto need_p = [&]() {
    if (!params.p) fail(ErrorKind::InvalidArgument, name + " needs --p");
    return *params.p;
  };
  if (name == "auerbach-cross") return auerbach_cross(need_n(), need_p());
  if (name == "scaled-hypercube") return scaled_hypercube(need_n(), need_p());
  if (name == "prism") return prism_4n_minus_4(need_n(), need_p(), params.beta);
  if (name == "l1-cube-octahedron") return l1_cube_in_octahedron();
  if (name == "petty-parallelepiped") return petty_parallelepiped();
  if (name == "petty-separated-14") return petty_separated_sets().first;
  if (name == "petty-separated-10") return petty_separated_sets().second;
  if (name == "gv") {
    if (!params.delta) fail(ErrorKind::InvalidArgument, "gv needs --delta");
    return gv_sign_vectors(need_n(), *params.delta, params.seed, params.max_count.value_or(128));
  }
  if (name == "minkowski-quadruple") {
    auto c = minkowski_quadruple(params.space ? *params.space : random_polygon_space(params.seed));
    c.params = {{"seed", std::to_string(params.seed)}};
    return c;
  }
  if (name == "hexagon") return hexagon_counterexample();
  fail(ErrorKind::InvalidArgument, "unknown construction '" + name + "'");
}

}  // namespace antipode
