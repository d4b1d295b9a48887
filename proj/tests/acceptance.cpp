// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>

#include "antipode/bmdist.hpp"
#include "antipode/certify.hpp"
#include "antipode/constructions.hpp"
#include "antipode/error.hpp"
#include "antipode/io.hpp"
#include "antipode/search.hpp"
#include "oracles.hpp"

using namespace antipode;

namespace {

struct Check {
  std::ostringstream notes;
  bool ok = true;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      notes << " [fail: " << what << "]";
    }
  }
  void near(double got, double want, double tol, const std::string& what) {
    const bool good = std::fabs(got - want) <= tol;
    if (!good) {
      ok = false;
      notes << " [fail: " << what << " got " << got << " want " << want << " +- " << tol << "]";
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double prism_formula(double p, double beta) {
  const double alpha = beta / (beta - 1.0);
  const double q = p / (p - 1.0);
  return std::min(2.0 / std::pow(beta, 1.0 / p), 2.0 / (std::pow(2.0, 1.0 / q) * std::pow(alpha, 1.0 / p)));
}

void c1(Check& c) {
  const auto t0 = std::chrono::steady_clock::now();
  const Certificate cert = certify_set(scaled_hypercube(3, 2.0).points);
  const double t = seconds_since(t0);
  c.near(cert.d, 2.0 / std::sqrt(3.0), 1e-6, "d");
  c.expect(cert.classification == Classification::StrictHadwiger, "strict");
  c.expect(cert.points.size() == 8, "8 points");
  c.expect(t < 5.0, "runtime");
  c.notes << " d=" << cert.d << " t=" << t << "s";
}

void c2(Check& c) {
  const Certificate cert = certify_set(scaled_hypercube(4, 2.0).points);
  c.near(cert.d, 1.0, 1e-6, "d");
  c.expect(cert.classification == Classification::Hadwiger, "hadwiger, not strict");
  c.notes << " d=" << cert.d << " class=" << to_string(cert.classification);
}

void c3(Check& c) {
  const Certificate ref = certify_set(prism_4n_minus_4(3, 1.5, 2.4).points);
  c.near(ref.d, prism_formula(1.5, 2.4), 1e-6, "beta=2.4");
  c.expect(ref.d > 1.0, "d > 1");
  c.notes << " d(2.4)=" << ref.d;
  const double p = 1.5, top = std::pow(2.0, p);
  for (int k = 1; k <= 5; ++k) {
    const double beta = 2.0 + (top - 2.0) * k / 6.0;
    const Certificate cert = certify_set(prism_4n_minus_4(3, p, beta).points);
    c.near(cert.d, prism_formula(p, beta), 1e-6, "beta=" + std::to_string(beta));
    c.expect(cert.d > 1.0, "d > 1 at beta=" + std::to_string(beta));
  }
}

void c4(Check& c) {
  const Certificate cert = certify_set(l1_cube_in_octahedron().points);
  c.expect(cert.mode == NumericMode::Rational, "rational mode");
  c.expect(cert.d_exact && *cert.d_exact == parse_rational("10/9"), "d = 10/9");
  const BmBound b = bm_bound_from_certificate(cert);
  c.expect(b.bound_exact && *b.bound_exact == parse_rational("9/5"), "bound = 9/5");
  const InclusionResult inc =
      polytope_inclusion_scale(octahedron_space(), NormSpace::polytope_facets({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}));
  c.expect(inc.alpha_exact && *inc.alpha_exact == parse_rational("5/9"), "alpha = 5/9");
  if (cert.d_exact) c.notes << " d=" << to_string(*cert.d_exact);
  if (b.bound_exact) c.notes << " bm=" << to_string(*b.bound_exact);
  if (inc.alpha_exact) c.notes << " alpha=" << to_string(*inc.alpha_exact);
}

void c5(Check& c) {
  const Construction petty = petty_parallelepiped();
  const double r = std::sqrt(1.36);
  const PairWitness f1 = verify_witness(petty.points, 0, 4, RationalVec{1, 0, 1});
  const PairWitness f2 = verify_witness(petty.points, 4, 0, Functional{0.6 / r, 1 / r, -0.6 / r});
  const PairWitness f3 = verify_witness(petty.points, 4, 0, Functional{0.6 / r, -1 / r, -0.6 / r});
  c.near(f1.margin, 1.28, 1e-9, "f1");
  c.near(f2.margin, 1.2 / r, 1e-9, "f2");
  c.near(f3.margin, 1.2 / r, 1e-9, "f3");
  const Certificate opt = certify_set(petty.points);
  c.expect(opt.d >= 1.02899 - 1e-6, "optimizer d");
  c.notes << " f1=" << f1.margin << " f2=" << f2.margin << " optimizer d=" << opt.d;
}

void c6(Check& c) {
  const InclusionResult r = cylinder_octahedron_scale(petty_dual_octahedron());
  c.near(r.alpha, 0.56416, 1e-4, "alpha");
  c.near(r.bm_upper, 1.77254, 5e-4, "bound");
  c.notes << " alpha=" << r.alpha << " bound=" << r.bm_upper;
}

void c7(Check& c) {
  const auto [fourteen, ten] = petty_separated_sets();
  const SeparationReport a = separation_matrix(fourteen.points);
  const SeparationReport b = separation_matrix(ten.points);
  c.expect(fourteen.points.size() == 14 && ten.points.size() == 10, "sizes");
  c.expect(a.min_distance >= 1.0 - 1e-12, "14-point min");
  c.expect(b.min_distance >= 1.0 + 1e-9, "10-point min");
  c.notes << " min14=" << a.min_distance << " min10=" << b.min_distance;
}

void c8(Check& c) {
  const auto t0 = std::chrono::steady_clock::now();
  const Construction gv = gv_sign_vectors(20, 1.0 / 3.0, 7);
  const Certificate cert = certify_set(gv.points);
  const double t = seconds_since(t0);
  c.expect(cert.d > std::sqrt(4.0 / 3.0), "d > sqrt(4/3)");
  double worst = -1.0;
  const auto& pts = gv.points.points();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) worst = std::max(worst, oracle::dot(pts[i].values(), pts[j].values()));
  }
  c.expect(worst < 1.0 / 3.0, "inner products");
  c.expect(t < 60.0, "runtime");
  c.notes << " |S|=" << pts.size() << " d=" << cert.d << " max<x,y>=" << worst << " t=" << t << "s";
}

void c9(Check& c) {
  std::size_t sup_cases = 0;
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const Construction q = minkowski_quadruple(random_polygon_space(seed));
    const Certificate cert = certify_set(q.points);
    const std::string tag = "seed " + std::to_string(seed);
    c.expect(q.points.size() == 4, tag + " size");
    if (q.expected_d == 2.0) {
      ++sup_cases;
      c.near(cert.d, 2.0, 1e-9, tag + " sup case");
    } else {
      c.expect(cert.d > 1.0, tag + " d > 1");
    }
    c.expect(cert.classification == Classification::StrictHadwiger, tag + " strict");
  }
  const std::size_t cap = std::size_t{1} << 2;
  c.expect(cap == 4, "cap");
  c.notes << " 25 polygons, " << sup_cases << " sup-norm cases; witness 4 = cap 2^2";
}

void c10(Check& c) {
  const PointSet hex = hexagon_counterexample().points;
  const Certificate cert = certify_set(hex);
  const SeparationReport sep = separation_matrix(hex);
  c.expect(cert.classification == Classification::Antipodal, "antipodal");
  c.expect(cert.d < 1.0, "d < 1");
  c.near(sep.min_distance, 1.0, 1e-9, "separation min");
  c.notes << " d=" << cert.d << " min separation=" << sep.min_distance;
}

void c11(Check& c) {
  double worst = 0.0;
  for (const oracle::Instance& in : oracle::random_instances(50, 2024)) {
    std::vector<Vector> pts;
    for (const auto& p : in.points) pts.emplace_back(p);
    const NormSpace space =
        in.norm.kind == oracle::Kind::Cylinder ? NormSpace::cylinder(in.dim) : NormSpace::lp(in.dim, in.norm.p);
    const PointSet set(space, pts, 1e-9, true);
    std::vector<oracle::Vec> projected;
    for (const auto& p : set.points()) projected.push_back(p.values());
    const double lib = std::max(0.0, max_margin_pair(set, in.i, in.j).margin);
    const double ref = oracle::max_margin(in.norm, projected, in.i, in.j);
    worst = std::max(worst, std::fabs(lib - ref));
  }
  c.expect(worst <= 1e-4, "grid agreement");
  c.notes << " 50 instances, max |lib - grid|=" << worst;
}

void c12(Check& c) {
  const SearchResult cube = exact_max_subset(scaled_hypercube(4, 2.0).points, Classification::StrictHadwiger);
  c.expect(cube.best_set.size() < 16, "16-point pool strict");
  const ContrapositiveReport ceiling = contrapositive_check(4, 2.0);
  c.expect(ceiling.ceiling <= 1.0 && ceiling.strict_excluded, "ceiling");

  const SearchResult prism = exact_max_subset(prism_4n_minus_4(4, 2.0).points, Classification::StrictHadwiger);
  const auto log = std::filesystem::temp_directory_path() / "antipode_acceptance_search.jsonl";
  std::filesystem::remove(log);
  append_line(log.string(), search_result_to_jsonl(prism));
  const std::string logged = read_text_file(log.string());
  c.expect(prism.meets_required && prism.best_set.size() >= 12, "prism pool strict size");
  c.expect(logged.find("\"size\":" + std::to_string(prism.best_set.size())) != std::string::npos, "logged size");
  c.notes << " cube pool strict=" << cube.best_set.size() << " ceiling=" << ceiling.ceiling
          << " prism pool strict=" << prism.best_set.size() << " d=" << prism.best_d;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria = {
      {"scaled cube l2^3 strict", c1},
      {"scaled cube l2^4 boundary", c2},
      {"prism family", c3},
      {"octahedron exact constants", c4},
      {"Petty parallelepiped witnesses", c5},
      {"cylinder in octahedron scale", c6},
      {"Petty separated sets", c7},
      {"GV sign vectors n=20", c8},
      {"Minkowski quadruples", c9},
      {"hexagon counterexample", c10},
      {"oracle grid equivalence", c11},
      {"l2^4 strict gap", c12},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Check c;
    try {
      criteria[k].second(c);
    } catch (const std::exception& e) {
      c.ok = false;
      c.notes << " [exception: " << e.what() << "]";
    }
    if (!c.ok) ++failures;
    std::printf("%s %2zu %s:%s\n", c.ok ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(), c.notes.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
