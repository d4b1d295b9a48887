#include "antipode/bmdist.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "antipode/error.hpp"

namespace antipode {

namespace {

std::string point_text(const RationalVec& v) {
  std::string out = "(";
  for (std::size_t k = 0; k < v.size(); ++k) out += (k ? ", " : "") + to_string(v[k]);
  return out + ")";
}

std::string num(double x) {
  std::ostringstream out;
  out.precision(17);
  out << x;
  return out.str();
}

Vector cross(const Vector& u, const Vector& v) {
  return Vector{u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
}

double dot3(const Vector& u, const Vector& v) { return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]; }

double rim_norm(const Vector& h) { return std::hypot(h[0], h[1]); }

std::vector<Vector> symmetric_vertices(const std::vector<Vector>& vertices) {
  if (vertices.size() != 3 && vertices.size() != 6) {
    fail(ErrorKind::InvalidArgument, "octahedron needs 3 or 6 vertices");
  }
  for (const auto& v : vertices) require_same_dim(v.dim(), 3, "octahedron vertex");
  std::vector<Vector> out(vertices.begin(), vertices.begin() + 3);
  for (std::size_t k = 0; k < 3; ++k) out.push_back(-vertices[k]);
  if (vertices.size() == 6) {
    for (std::size_t k = 0; k < 3; ++k) {
      if (!(out[3 + k] == vertices[3 + k])) fail(ErrorKind::InvalidArgument, "octahedron vertices must be symmetric");
    }
  }
  return out;
}

}  // namespace

InclusionResult polytope_inclusion_scale(const NormSpace& inner, const NormSpace& outer) {
  if (!inner.is_polytopal() || !outer.is_polytopal()) {
    fail(ErrorKind::InvalidArgument, "inclusion scaling needs polytopal bodies");
  }
  require_same_dim(inner.dim(), outer.dim(), "inclusion scaling");
  if (inner.dim() > 6) fail(ErrorKind::InvalidArgument, "inclusion scaling supports dim <= 6");

  for (const auto& v : enumerate_vertices(inner)) {
    const Rational g = primal_norm_exact(outer, v);
    if (g > 1) {
      fail(ErrorKind::NotContained,
           "inner vertex " + point_text(v) + " has outer gauge " + to_string(g) + " > 1");
    }
  }
  InclusionResult out;
  Rational worst = 0;
  RationalVec contact;
  for (const auto& v : enumerate_vertices(outer)) {
    const Rational g = primal_norm_exact(inner, v);
    if (g > worst) {
      worst = g;
      contact = v;
    }
  }
  out.alpha_exact = Rational(1) / worst;
  out.bm_upper_exact = worst;
  out.alpha = to_double(*out.alpha_exact);
  out.bm_upper = to_double(worst);
  RationalVec touch = scaled<Rational>(contact, *out.alpha_exact);
  out.contact = "alpha * " + point_text(contact) + " = " + point_text(touch) + " lies on the inner boundary";
  return out;
}

std::vector<Facet> octahedron_facets(const std::vector<Vector>& vertices) {
  auto v = symmetric_vertices(vertices);
  std::vector<Facet> facets;
  for (unsigned mask = 0; mask < 8; ++mask) {
    const std::size_t a = (mask & 1U) ? 3 : 0;
    const std::size_t b = (mask & 2U) ? 4 : 1;
    const std::size_t c = (mask & 4U) ? 5 : 2;
    Vector normal = cross(v[b] - v[a], v[c] - v[a]);
    const double offset = dot3(normal, v[a]);
    if (!(std::fabs(offset) > 1e-12 * (1.0 + euclidean_norm(normal.values())))) {
      fail(ErrorKind::InvalidArgument, "degenerate octahedron facet");
    }
    Vector h = (1.0 / offset) * normal;
    for (const auto& w : v) {
      if (dot3(h, w) > 1.0 + 1e-9) fail(ErrorKind::InvalidArgument, "vertices do not span an octahedron");
    }
    facets.push_back({h, a, b, c});
  }
  return facets;
}

InclusionResult cylinder_octahedron_scale(const std::vector<Vector>& vertices, double tol) {
  auto all = symmetric_vertices(vertices);
  for (const auto& w : all) {
    const double r = std::max(rim_norm(w), std::fabs(w[2]));
    if (std::fabs(r - 1.0) > 1e-9) fail(ErrorKind::OffSphere, "octahedron vertex not on the cylinder boundary");
  }
  auto facets = octahedron_facets(vertices);
  // The rim circle at height ±alpha misses the open side of h.x = 1 iff the
  // line h_xy.(x, y) = 1 - h_z z is at distance >= alpha from the axis.
  auto fits = [&](double alpha) {
    for (const auto& f : facets) {
      if (1.0 - std::fabs(f.h[2]) * alpha < alpha * rim_norm(f.h)) return false;
    }
    return true;
  };
  double lo = 0.0, hi = 1.0;
  if (fits(hi)) {
    lo = hi;
  } else {
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      (fits(mid) ? lo : hi) = mid;
    }
  }
  InclusionResult out;
  out.alpha = lo;
  out.bm_upper = 1.0 / lo;
  std::size_t best = 0;
  double worst = -1.0;
  for (std::size_t k = 0; k < facets.size(); ++k) {
    const double s = rim_norm(facets[k].h) + std::fabs(facets[k].h[2]);
    if (s > worst) {
      worst = s;
      best = k;
    }
  }
  const Vector& h = facets[best].h;
  const double r = rim_norm(h);
  Vector touch{lo * (r > 0 ? h[0] / r : 1.0), lo * (r > 0 ? h[1] / r : 0.0), h[2] >= 0 ? lo : -lo};
  static const char* names[] = {"A", "B", "C", "A'", "B'", "C'"};
  out.contact = std::string("facet ") + names[facets[best].a] + names[facets[best].b] + names[facets[best].c] +
                " (" + num(h[0]) + ", " + num(h[1]) + ", " + num(h[2]) + ").x = 1 touches the rim at (" +
                num(touch[0]) + ", " + num(touch[1]) + ", " + num(touch[2]) + ")";
  return out;
}

double cylinder_octahedron_scale_closed_form(const std::vector<Vector>& vertices) {
  double worst = 0.0;
  for (const auto& f : octahedron_facets(vertices)) worst = std::max(worst, rim_norm(f.h) + std::fabs(f.h[2]));
  return 1.0 / worst;
}

double sampled_cylinder_gauge(const std::vector<Vector>& vertices, double alpha, std::size_t samples) {
  auto facets = octahedron_facets(vertices);
  auto gauge = [&](const Vector& x) {
    double g = 0.0;
    for (const auto& f : facets) g = std::max(g, dot3(f.h, x));
    return g;
  };
  const double two_pi = 2.0 * std::acos(-1.0);
  // 60% on the two rims, 20% on the side, 20% on the caps.
  const std::size_t rim = std::max<std::size_t>(1, samples * 3 / 10);
  const std::size_t side = std::max<std::size_t>(1, samples / 5);
  const std::size_t cap = std::max<std::size_t>(1, samples / 10);
  double worst = 0.0;
  for (double z : {1.0, -1.0}) {
    for (std::size_t k = 0; k < rim; ++k) {
      const double t = two_pi * static_cast<double>(k) / static_cast<double>(rim);
      worst = std::max(worst, gauge(alpha * Vector{std::cos(t), std::sin(t), z}));
    }
    const std::size_t rings = std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(cap))));
    const std::size_t per = std::max<std::size_t>(1, cap / rings);
    for (std::size_t a = 0; a < rings; ++a) {
      const double rad = static_cast<double>(a) / static_cast<double>(rings);
      for (std::size_t k = 0; k < per; ++k) {
        const double t = two_pi * static_cast<double>(k) / static_cast<double>(per);
        worst = std::max(worst, gauge(alpha * Vector{rad * std::cos(t), rad * std::sin(t), z}));
      }
    }
  }
  const std::size_t heights = std::max<std::size_t>(2, static_cast<std::size_t>(std::sqrt(static_cast<double>(side))));
  const std::size_t per = std::max<std::size_t>(1, side / heights);
  for (std::size_t a = 0; a < heights; ++a) {
    const double z = -1.0 + 2.0 * static_cast<double>(a) / static_cast<double>(heights - 1);
    for (std::size_t k = 0; k < per; ++k) {
      const double t = two_pi * static_cast<double>(k) / static_cast<double>(per);
      worst = std::max(worst, gauge(alpha * Vector{std::cos(t), std::sin(t), z}));
    }
  }
  return worst;
}

std::vector<Vector> petty_dual_octahedron() {
  return {Vector{0.0, -1.0, 1.0}, Vector{0.8, 0.6, 1.0}, Vector{-0.8, 0.6, 1.0}};
}

namespace {

void describe(BmBound& out, std::size_t dim) {
  const std::string value = out.bound_exact ? to_string(*out.bound_exact) : num(out.bound);
  out.note = out.hypercube_case ? "2^n points: distance to the cube space of dimension " + std::to_string(dim) +
                                      " is at most " + value
                                : "distance to the cube space is at most " + value;
}

}  // namespace

BmBound bm_bound_from_d(double d, std::size_t set_size, std::size_t dim) {
  if (!(d > 0.0)) fail(ErrorKind::InvalidArgument, "bm bound needs d > 0");
  BmBound out;
  out.bound = 2.0 / d;
  out.hypercube_case = dim < 64 && set_size == (std::size_t{1} << dim);
  describe(out, dim);
  return out;
}

BmBound bm_bound_from_certificate(const Certificate& cert) {
  if (cert.classification == Classification::NotAntipodal) {
    fail(ErrorKind::InvalidArgument, "bm bound needs an antipodal certificate");
  }
  BmBound out = bm_bound_from_d(cert.d, cert.points.size(), cert.points.dim());
  if (cert.d_exact) {
    out.bound_exact = Rational(2) / *cert.d_exact;
    out.bound = to_double(*out.bound_exact);
    describe(out, cert.points.dim());
  }
  return out;
}

ContrapositiveReport contrapositive_check(std::size_t n, double p) {
  if (n < 4) fail(ErrorKind::InvalidArgument, "contrapositive check needs n >= 4");
  const double alpha_n = std::log2(static_cast<double>(n));
  if (!(p >= 2.0 && p <= alpha_n)) {
    fail(ErrorKind::InvalidArgument,
         "hypothesis fails: need 2 <= p <= log2(n) = " + num(alpha_n) + ", got p = " + num(p));
  }
  ContrapositiveReport out;
  out.n = n;
  out.p = p;
  out.ceiling = 2.0 / std::pow(static_cast<double>(n), 1.0 / p);
  out.strict_excluded = out.ceiling <= 1.0;
  out.note = "any " + std::to_string(std::size_t{1} << std::min<std::size_t>(n, 63)) + "-point witness set in l_" +
             num(p) + "^" + std::to_string(n) + " has d <= " + num(out.ceiling);
  return out;
}

}  // namespace antipode
