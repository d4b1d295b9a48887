#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "antipode/certify.hpp"
#include "antipode/constructions.hpp"
#include "antipode/error.hpp"
#include "oracles.hpp"

using namespace antipode;

namespace {

Rational q(const char* s) { return parse_rational(s); }

PointSet hexagon3() {
  const double h = std::sqrt(3.0) / 2.0;
  return PointSet(NormSpace::lp(2, 2.0), std::vector<Vector>{{1, 0}, {0.5, h}, {-0.5, h}});
}

PointSet random_set(const NormSpace& space, const oracle::Norm& ref, std::size_t m, std::mt19937_64& rng) {
  std::vector<Vector> pts;
  for (std::size_t k = 0; k < m; ++k) pts.emplace_back(oracle::random_unit(ref, space.dim(), rng));
  return PointSet(space, std::move(pts), 1e-9, true);
}

CertifyOptions single_thread() {
  CertifyOptions o;
  o.threads = 1;
  return o;
}

}  // namespace

TEST(MaxMargin, AntipodesInThePlane) {
  PointSet s(NormSpace::lp(2, 2.0), std::vector<Vector>{{1, 0}, {-1, 0}});
  const PairWitness w = max_margin_pair(s, 0, 1);
  EXPECT_NEAR(w.margin, 2.0, 1e-9);
  EXPECT_NEAR(w.functional[0], 1.0, 1e-6);
  EXPECT_NEAR(w.functional[1], 0.0, 1e-3);
  EXPECT_TRUE(w.separating);
}

TEST(MaxMargin, HexagonNeighboursStayBelowOne) {
  const PointSet s = hexagon3();
  const PairWitness w = max_margin_pair(s, 0, 1);
  EXPECT_LT(w.margin, 1.0);
  EXPECT_GT(w.margin, 0.0);
  std::vector<oracle::Vec> pts;
  for (const auto& p : s.points()) pts.push_back(p.values());
  EXPECT_NEAR(w.margin, oracle::max_margin({}, pts, 0, 1), 1e-6);
}

TEST(MaxMargin, OctahedronCubeFacePairsAreTenNinths) {
  const Construction c = l1_cube_in_octahedron();
  for (const auto& s : c.suggested) {
    const PairWitness w = max_margin_pair(c.points, s.i, s.j);
    ASSERT_TRUE(w.exact.has_value());
    EXPECT_EQ(w.exact->margin, q("10/9"));
    const PairWitness v = verify_witness(c.points, s.i, s.j, s.functional);
    EXPECT_EQ(v.exact->margin, q("10/9"));
  }
}

TEST(MaxMargin, WitnessInvariants) {
  std::mt19937_64 rng(3);
  const NormSpace space = NormSpace::lp(3, 3.0);
  const oracle::Norm ref{oracle::Kind::Lp, 3.0};
  for (int t = 0; t < 5; ++t) {
    const PointSet s = random_set(space, ref, 5, rng);
    for (std::size_t i = 0; i < s.size(); ++i) {
      for (std::size_t j = 0; j < s.size(); ++j) {
        if (i == j) continue;
        const PairWitness w = max_margin_pair(s, i, j);
        EXPECT_LE(w.dual_norm_value, 1.0 + 1e-9);
        EXPECT_GE(w.sandwich_slack, -1e-9);
        EXPECT_LE(w.margin, primal_norm(space, s[i] - s[j]) + 1e-9);
        EXPECT_LE(w.margin, w.upper_bound + 1e-12);
        EXPECT_LE(w.upper_bound - w.margin, 1e-9 + 1e-12);
      }
    }
  }
}

TEST(MaxMargin, RejectsBadPairs) {
  const PointSet s = hexagon3();
  EXPECT_THROW(max_margin_pair(s, 0, 0), Error);
  EXPECT_THROW(max_margin_pair(s, 0, 3), Error);
}

TEST(CertifySet, ScaledCubeInEuclidean3) {
  const Construction c = scaled_hypercube(3, 2.0);
  const Certificate cert = certify_set(c.points);
  EXPECT_EQ(cert.points.size(), 8u);
  EXPECT_NEAR(cert.d, 2.0 / std::sqrt(3.0), 1e-6);
  EXPECT_EQ(cert.classification, Classification::StrictHadwiger);
  EXPECT_EQ(cert.mode, NumericMode::Float);
  EXPECT_FALSE(cert.lower_bound_mode);
  EXPECT_EQ(cert.witnesses.size(), 28u);
}

TEST(CertifySet, ScaledCubeInEuclidean4IsTheBoundary) {
  const Construction c = scaled_hypercube(4, 2.0);
  const Certificate cert = certify_set(c.points);
  EXPECT_EQ(cert.points.size(), 16u);
  EXPECT_NEAR(cert.d, 1.0, 1e-6);
  EXPECT_EQ(cert.classification, Classification::Hadwiger);
  EXPECT_TRUE(meets(cert.classification, Classification::Hadwiger));
  EXPECT_FALSE(meets(cert.classification, Classification::StrictHadwiger));
}

TEST(CertifySet, AntipodalPairHasDiameterTwo) {
  std::mt19937_64 rng(8);
  std::vector<std::pair<NormSpace, oracle::Norm>> spaces = {
      {NormSpace::lp(3, 2.0), {oracle::Kind::Lp, 2.0}},
      {NormSpace::lp(2, 1.3), {oracle::Kind::Lp, 1.3}},
      {NormSpace::cylinder(3), {oracle::Kind::Cylinder, 0}},
      {NormSpace::lp(3, kInfinity), {oracle::Kind::Lp, kInfinity}},
  };
  for (const auto& [space, ref] : spaces) {
    const Vector x(oracle::random_unit(ref, space.dim(), rng));
    const PointSet s(space, std::vector<Vector>{x, -x});
    const Certificate cert = certify_set(s);
    EXPECT_NEAR(cert.d, 2.0, 1e-8) << space.describe();
    EXPECT_EQ(cert.classification, Classification::StrictHadwiger);
  }
  const PointSet oct(octahedron_space(), std::vector<RationalVec>{{1, 1, q("-1/3")}, {-1, -1, q("1/3")}});
  EXPECT_EQ(*certify_set(oct).d_exact, 2);
}

TEST(CertifySet, OctahedronCubeRationalMode) {
  const Certificate cert = certify_set(l1_cube_in_octahedron().points);
  EXPECT_EQ(cert.mode, NumericMode::Rational);
  ASSERT_TRUE(cert.d_exact.has_value());
  EXPECT_EQ(*cert.d_exact, q("10/9"));
  EXPECT_EQ(cert.classification, Classification::StrictHadwiger);
}

TEST(CertifySet, HexagonIsAntipodalOnly) {
  const Certificate cert = certify_set(hexagon3());
  EXPECT_LT(cert.d, 1.0);
  EXPECT_EQ(cert.classification, Classification::Antipodal);
}

TEST(CertifySet, DeterministicAcrossThreadCounts) {
  const Construction c = prism_4n_minus_4(3, 1.5, 2.4);
  CertifyOptions a = single_thread(), b;
  b.threads = 4;
  const Certificate x = certify_set(c.points, a), y = certify_set(c.points, b);
  EXPECT_EQ(x.d, y.d);
  for (std::size_t k = 0; k < x.witnesses.size(); ++k) {
    EXPECT_EQ(x.witnesses[k].functional, y.witnesses[k].functional);
    EXPECT_EQ(x.witnesses[k].margin, y.witnesses[k].margin);
  }
}

TEST(CertifySet, NeedsTwoPoints) {
  const PointSet s(NormSpace::lp(2, 2.0), std::vector<Vector>{{1, 0}});
  EXPECT_THROW(certify_set(s), Error);
}

TEST(VerifyWitness, PettyFunctionals) {
  const Construction c = petty_parallelepiped();
  const PairWitness w1 = verify_witness(c.points, 0, 4, RationalVec{1, 0, 1});
  EXPECT_NEAR(w1.margin, 1.28, 1e-9);
  EXPECT_NEAR(w1.dual_norm_value, 1.0, 1e-12);
  const double r = std::sqrt(1.36);
  const PairWitness w2 = verify_witness(c.points, 4, 0, Functional{0.6 / r, 1 / r, -0.6 / r});
  EXPECT_NEAR(w2.margin, 1.2 / r, 1e-9);
  EXPECT_NEAR(w2.margin, 1.02899, 1e-5);
  const PairWitness w3 = verify_witness(c.points, 4, 0, Functional{0.6 / r, -1 / r, -0.6 / r});
  EXPECT_NEAR(w3.margin, 1.2 / r, 1e-9);
}

TEST(VerifyWitness, AuerbachFunctionalHasMarginOne) {
  for (double p : {1.0, 1.5, 2.0, 4.0, kInfinity}) {
    const Construction c = auerbach_cross(3, p);
    // points ordered +e_1, -e_1, +e_2, ...
    std::size_t e1 = 0, e2 = 0;
    for (std::size_t k = 0; k < c.points.size(); ++k) {
      if (c.points[k][0] == 1.0) e1 = k;
      if (c.points[k][1] == 1.0) e2 = k;
    }
    const PairWitness w = verify_witness(c.points, e1, e2, RationalVec{q("1/2"), q("-1/2"), 0});
    EXPECT_NEAR(w.margin, 1.0, 1e-12) << p;
    EXPECT_NEAR(w.sandwich_slack, 0.0, 1e-12) << p;
    EXPECT_TRUE(w.separating);
    if (w.exact) {
      EXPECT_EQ(w.exact->margin, 1);
      EXPECT_EQ(w.exact->sandwich_slack, 0);
    }
  }
}

TEST(VerifyWitness, ReproducesRationalConstantsExactly) {
  const Construction cube = l1_cube_in_octahedron();
  const PairWitness w = verify_witness(cube.points, 0, 1, RationalVec{1, 0, 0});
  EXPECT_EQ(w.exact->margin, q("10/9"));
  EXPECT_EQ(w.exact->dual_norm_value, 1);
  EXPECT_EQ(dot<Rational>(RationalVec{1, 0, 0}, cube.points.exact(0)), q("5/9"));

  const PointSet cross(NormSpace::lp(3, 1.0), std::vector<RationalVec>{{1, 0, 0}, {0, 1, 0}, {-1, 0, 0}});
  const PairWitness a = verify_witness(cross, 0, 1, RationalVec{q("1/2"), q("-1/2"), 0});
  EXPECT_EQ(a.exact->margin, 1);
  EXPECT_EQ(a.exact->dual_norm_value, q("1/2"));
}

TEST(VerifyWitness, RejectsLongFunctionals) {
  const Construction c = petty_parallelepiped();
  try {
    verify_witness(c.points, 0, 4, Functional{1.1, 0, 1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::WitnessRejected);
  }
  const Construction cube = l1_cube_in_octahedron();
  EXPECT_THROW(verify_witness(cube.points, 0, 1, RationalVec{q("10/9"), 0, 0}), Error);
}

TEST(VerifyWitness, ScaledFunctionalStaysFeasible) {
  const Construction c = petty_parallelepiped();
  const PairWitness best = max_margin_pair(c.points, 0, 4);
  for (double t : {1.0, 0.75, 0.3, 0.01}) {
    const PairWitness w = verify_witness(c.points, 0, 4, t * best.functional);
    EXPECT_NEAR(w.margin, t * best.margin, 1e-12);
    EXPECT_GE(w.sandwich_slack, -1e-9);
  }
}

TEST(CertifyWithWitnesses, LowerBoundMode) {
  const Construction c = petty_parallelepiped();
  const Certificate cert = certify_with_witnesses(c.points, witness_pool(c));
  EXPECT_TRUE(cert.lower_bound_mode);
  EXPECT_NEAR(cert.d, 1.2 / std::sqrt(1.36), 1e-9);
  EXPECT_EQ(cert.classification, Classification::StrictHadwiger);
  const Certificate opt = certify_set(c.points);
  EXPECT_GE(opt.d, 1.02899 - 1e-6);
  EXPECT_GE(opt.d, cert.d - 1e-9);
}

TEST(CertifyWithWitnesses, MissingPairIsNotAntipodal) {
  const Construction c = l1_cube_in_octahedron();
  const Certificate cert = certify_with_witnesses(c.points, {RationalVec{1, 0, 0}});
  EXPECT_EQ(cert.classification, Classification::NotAntipodal);
}

TEST(Properties, UnconstrainedOptimumIsTheDistance) {
  std::mt19937_64 rng(17);
  std::vector<std::pair<NormSpace, oracle::Norm>> spaces = {
      {NormSpace::lp(3, 2.0), {oracle::Kind::Lp, 2.0}},
      {NormSpace::lp(3, 1.5), {oracle::Kind::Lp, 1.5}},
      {NormSpace::cylinder(3), {oracle::Kind::Cylinder, 0}},
      {NormSpace::lp(3, 1.0), {oracle::Kind::Lp, 1.0}},
      {NormSpace::lp(2, kInfinity), {oracle::Kind::Lp, kInfinity}},
  };
  CertifyOptions o;
  o.unconstrained = true;
  for (const auto& [space, ref] : spaces) {
    const PointSet s = random_set(space, ref, 5, rng);
    for (std::size_t i = 0; i < s.size(); ++i) {
      for (std::size_t j = i + 1; j < s.size(); ++j) {
        const double dist = oracle::primal(ref, (s[i] - s[j]).values());
        EXPECT_NEAR(max_margin_pair(s, i, j, o).margin, dist, 1e-8) << space.describe();
      }
    }
  }
  const PointSet e(octahedron_space(), l1_cube_in_octahedron().points.exact_points());
  const PairWitness w = max_margin_pair(e, 0, 7, o);
  EXPECT_EQ(w.exact->margin, primal_norm_exact(e.space(), difference<Rational>(e.exact(0), e.exact(7))));
}

TEST(Properties, AddingPointsNeverIncreasesMargins) {
  std::mt19937_64 rng(23);
  std::vector<std::pair<NormSpace, oracle::Norm>> spaces = {
      {NormSpace::lp(3, 2.0), {oracle::Kind::Lp, 2.0}},
      {NormSpace::cylinder(3), {oracle::Kind::Cylinder, 0}},
      {NormSpace::lp(3, kInfinity), {oracle::Kind::Lp, kInfinity}},
  };
  for (const auto& [space, ref] : spaces) {
    for (int t = 0; t < 4; ++t) {
      const PointSet big = random_set(space, ref, 6, rng);
      const PointSet small = big.subset({0, 1, 2, 3});
      for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
          if (i == j) continue;
          EXPECT_LE(max_margin_pair(big, i, j).margin, max_margin_pair(small, i, j).margin + 1e-8);
        }
      }
    }
  }
}

TEST(Properties, MarginIsSymmetric) {
  std::mt19937_64 rng(29);
  const NormSpace space = NormSpace::lp(3, 1.7);
  const PointSet s = random_set(space, {oracle::Kind::Lp, 1.7}, 5, rng);
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      EXPECT_NEAR(max_margin_pair(s, i, j).margin, max_margin_pair(s, j, i).margin, 1e-8);
    }
  }
  const PointSet e = l1_cube_in_octahedron().points;
  for (std::size_t j = 1; j < e.size(); ++j) EXPECT_EQ(max_margin_pair(e, 0, j).exact->margin, max_margin_pair(e, j, 0).exact->margin);
}

TEST(Classification, Thresholds) {
  Tolerances t;
  EXPECT_EQ(classify(0.0, true, t), Classification::NotAntipodal);
  EXPECT_EQ(classify(0.5, false, t), Classification::NotAntipodal);
  EXPECT_EQ(classify(0.5, true, t), Classification::Antipodal);
  EXPECT_EQ(classify(1.0 - 1e-10, true, t), Classification::Hadwiger);
  EXPECT_EQ(classify(1.0 + 5e-7, true, t), Classification::Hadwiger);
  EXPECT_EQ(classify(1.0 + 1e-6, true, t), Classification::StrictHadwiger);
  EXPECT_EQ(classify_exact(q("1"), true), Classification::Hadwiger);
  EXPECT_EQ(classify_exact(q("1000001/1000000"), true), Classification::StrictHadwiger);
  EXPECT_EQ(classify_exact(q("-1/9"), true), Classification::NotAntipodal);
  EXPECT_TRUE(meets(Classification::StrictHadwiger, Classification::Hadwiger));
  EXPECT_FALSE(meets(Classification::Antipodal, Classification::Hadwiger));
  for (auto c : {Classification::NotAntipodal, Classification::Antipodal, Classification::Hadwiger,
                 Classification::StrictHadwiger}) {
    EXPECT_EQ(parse_classification(to_string(c)), c);
  }
  EXPECT_EQ(to_string(Classification::StrictHadwiger), "strict_hadwiger");
}

TEST(PointSet, Validation) {
  const NormSpace space = NormSpace::lp(2, 2.0);
  try {
    PointSet(space, std::vector<Vector>{{1, 0}, {0.5, 0.5}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OffSphere);
  }
  const PointSet projected(space, std::vector<Vector>{{2, 0}, {0.5, 0.5}}, 1e-9, true);
  EXPECT_NEAR(primal_norm(space, projected[1]), 1.0, 1e-15);
  EXPECT_THROW(PointSet(space, std::vector<Vector>{{1, 0}, {1, 0}}), Error);
  EXPECT_THROW(PointSet(space, std::vector<Vector>{{1, 0, 0}}), Error);
  EXPECT_NO_THROW(PointSet(space, std::vector<Vector>{{1, 1e-6}}, 1e-6));
}

TEST(PointSet, ExactCoordinatesMatchDoubles) {
  const PointSet s(NormSpace::lp(2, 2.0), std::vector<Vector>{{0.6, 0.8}});
  EXPECT_EQ(s.exact(0)[0], exact_from_double(0.6));
  const PointSet r(NormSpace::lp(2, 1.0), std::vector<RationalVec>{{q("1/3"), q("-2/3")}});
  EXPECT_EQ(r[0][0], 1.0 / 3.0);
  EXPECT_EQ(r.exact(0)[1], q("-2/3"));
}

TEST(Separation, BasisIsEquilateral) {
  for (double p : {1.0, 1.5, 2.0, 3.0}) {
    std::vector<Vector> basis;
    for (std::size_t k = 0; k < 4; ++k) basis.push_back(unit_vector(4, k));
    const SeparationReport r = separation_matrix(PointSet(NormSpace::lp(4, p), basis));
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 4; ++j) {
        if (i != j) EXPECT_NEAR(r.distances[i][j], std::pow(2.0, 1.0 / p), 1e-12);
      }
    }
  }
}

TEST(Separation, HexagonAndPettySets) {
  const SeparationReport h = separation_matrix(hexagon3());
  EXPECT_NEAR(h.min_distance, 1.0, 1e-12);
  EXPECT_TRUE(h.one_separated);
  EXPECT_FALSE(h.strictly_separated);
  EXPECT_NEAR(h.distances[0][2], std::sqrt(3.0), 1e-12);

  const auto [fourteen, ten] = petty_separated_sets();
  const SeparationReport a = separation_matrix(fourteen.points);
  EXPECT_GE(a.min_distance, 1.0 - 1e-12);
  EXPECT_TRUE(a.one_separated);
  const SeparationReport b = separation_matrix(ten.points);
  EXPECT_GE(b.min_distance, 1.0 + 1e-9);
  EXPECT_TRUE(b.strictly_separated);
}

TEST(Separation, ExactOnPolytopes) {
  const SeparationReport r = separation_matrix(l1_cube_in_octahedron().points);
  ASSERT_TRUE(r.min_distance_exact.has_value());
  EXPECT_GT(*r.min_distance_exact, 1);
  const std::string csv = separation_csv(r);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 9);
}

TEST(RelaxedMargin, MatchesTheMarginWhenFeasible) {
  const Construction c = scaled_hypercube(3, 2.0);
  Tolerances t;
  const RelaxedMargin r = relaxed_margin(c.points, 0, 7, 1e4, t);
  EXPECT_NEAR(r.value, max_margin_pair(c.points, 0, 7).margin, 1e-6);
  EXPECT_NEAR(r.violation, 0.0, 1e-9);
  EXPECT_NEAR(dual_norm(c.points.space(), r.functional), 1.0, 1e-6);
}
