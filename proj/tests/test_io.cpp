#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "antipode/constructions.hpp"
#include "antipode/error.hpp"
#include "antipode/io.hpp"

using namespace antipode;

namespace {

Rational q(const char* s) { return parse_rational(s); }

void expect_parse_error(const std::function<void()>& fn) {
  try {
    fn();
    FAIL() << "no error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Parse) << e.what();
  }
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "antipode_io_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(Rationals, ParseAndPrint) {
  EXPECT_EQ(parse_rational("5/9"), Rational(5, 9));
  EXPECT_EQ(parse_rational("-0.82"), q("-41/50"));
  EXPECT_EQ(parse_rational("1e-3"), q("1/1000"));
  EXPECT_EQ(parse_rational("6/4"), q("3/2"));
  EXPECT_EQ(to_string(parse_rational("6/4")), "3/2");
  EXPECT_EQ(to_string(Rational(-7)), "-7");
  EXPECT_EQ(exact_from_double(0.5), q("1/2"));
  EXPECT_EQ(to_double(exact_from_double(0.1)), 0.1);
  for (const char* bad : {"", "1/0", "abc", "1/2/3", "--1"}) {
    expect_parse_error([&] { parse_rational(bad); });
  }
}

TEST(SpaceJson, RoundTripsEveryKind) {
  const std::vector<NormSpace> spaces = {NormSpace::lp(3, 2.0),   NormSpace::lp(3, kInfinity),
                                         NormSpace::lp(2, 1.0),   NormSpace::lp(4, 1.5),
                                         NormSpace::cylinder(3),  octahedron_space(),
                                         NormSpace::polytope_facets({{1, 0}, {q("1/2"), 1}})};
  for (const NormSpace& s : spaces) {
    EXPECT_EQ(space_from_json(space_to_json(s)), s) << space_to_json(s);
  }
  EXPECT_NE(space_to_json(NormSpace::lp(3, kInfinity)).find("\"inf\""), std::string::npos);
}

TEST(SpaceJson, AcceptsNumbersAndStrings) {
  EXPECT_EQ(space_from_json(R"({"kind":"lp","n":3,"p":2})"), NormSpace::lp(3, 2.0));
  EXPECT_EQ(space_from_json(R"({"kind":"lp","n":3,"p":"inf"})"), NormSpace::lp(3, kInfinity));
  EXPECT_EQ(space_from_json(R"({"kind":"cylinder","n":3})"), NormSpace::cylinder(3));
  const NormSpace a = space_from_json(R"({"kind":"polytope_v","vertices":[[1,1,"-1/3"],[1,"-1/3",1],["-1/3",1,1]]})");
  EXPECT_EQ(a, octahedron_space());
  const NormSpace b = space_from_json(R"({"kind":"polytope_f","facets":[[1,0],[0,"1"]]})");
  EXPECT_EQ(primal_norm_exact(b, {q("1/3"), -2}), 2);
}

TEST(SpaceJson, ParseErrors) {
  expect_parse_error([] { space_from_json("not json"); });
  expect_parse_error([] { space_from_json(R"({"kind":"sphere","n":3})"); });
  expect_parse_error([] { space_from_json(R"({"kind":"lp","p":2})"); });
  expect_parse_error([] { space_from_json(R"({"kind":"polytope_v","vertices":[[1,"x"]]})"); });
  EXPECT_THROW(space_from_json(R"({"kind":"lp","n":3,"p":0.5})"), Error);
}

TEST(PointsJson, RoundTripsExactCoordinates) {
  const PointSet oct = l1_cube_in_octahedron().points;
  const std::string text = points_to_json(oct);
  EXPECT_NE(text.find("\"5/9\""), std::string::npos);
  const PointSet back = points_from_json(text);
  EXPECT_EQ(back.exact_points(), oct.exact_points());
  EXPECT_EQ(back.space(), oct.space());

  const PointSet petty = petty_parallelepiped().points;
  const PointSet again = points_from_json(points_to_json(petty));
  EXPECT_EQ(again.points(), petty.points());
  EXPECT_EQ(*embedded_space(points_to_json(petty)), petty.space());
}

TEST(PointsJson, BareArraysAndOverrides) {
  const PointSet a = points_from_json("[[1,0],[0,-1]]", NormSpace::lp(2, 2.0));
  EXPECT_EQ(a.size(), 2u);
  EXPECT_FALSE(embedded_space("[[1,0]]").has_value());
  expect_parse_error([] { points_from_json("[[1,0],[0,-1]]"); });
  const PointSet projected = points_from_json("[[2,0],[0,3]]", NormSpace::lp(2, 2.0), 1e-9, true);
  EXPECT_EQ(projected[1][1], 1.0);
  try {
    points_from_json("[[2,0]]", NormSpace::lp(2, 2.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OffSphere);
  }
  expect_parse_error([] { points_from_json(R"({"points": 3})", NormSpace::lp(2, 2.0)); });
}

TEST(CertificateJson, RoundTripRationalMode) {
  const Certificate cert = certify_set(l1_cube_in_octahedron().points);
  const std::string text = certificate_to_json(cert);
  EXPECT_NE(text.find("\"d_exact\": \"10/9\""), std::string::npos) << text.substr(0, 400);
  EXPECT_NE(text.find("strict_hadwiger"), std::string::npos);
  const Certificate back = certificate_from_json(text);
  EXPECT_EQ(*back.d_exact, q("10/9"));
  EXPECT_EQ(back.classification, cert.classification);
  EXPECT_EQ(back.mode, NumericMode::Rational);
  ASSERT_EQ(back.witnesses.size(), cert.witnesses.size());
  for (std::size_t k = 0; k < cert.witnesses.size(); ++k) {
    EXPECT_EQ(back.witnesses[k].exact->functional, cert.witnesses[k].exact->functional);
    EXPECT_EQ(back.witnesses[k].exact->margin, cert.witnesses[k].exact->margin);
  }
}

TEST(CertificateJson, RoundTripFloatMode) {
  const Certificate cert = certify_suggested(petty_parallelepiped());
  const Certificate back = certificate_from_json(certificate_to_json(cert));
  EXPECT_EQ(back.d, cert.d);
  EXPECT_TRUE(back.lower_bound_mode);
  EXPECT_EQ(back.mode, NumericMode::Float);
  EXPECT_EQ(back.tolerances.strict, cert.tolerances.strict);
  for (std::size_t k = 0; k < cert.witnesses.size(); ++k) {
    EXPECT_EQ(back.witnesses[k].functional, cert.witnesses[k].functional);
    EXPECT_EQ(back.witnesses[k].margin, cert.witnesses[k].margin);
    EXPECT_EQ(back.witnesses[k].separating, cert.witnesses[k].separating);
  }
}

TEST(CertificateJson, DeterministicApartFromTimestamp) {
  const Certificate cert = certify_set(scaled_hypercube(3, 2.0).points);
  RunManifest m{"antipode certify", {{"mode", "strict"}}, 7, tool_version(), "float", "2000-01-01T00:00:00Z"};
  const std::string a = certificate_to_json(cert, &m);
  m.timestamp = utc_timestamp();
  std::string b = certificate_to_json(cert, &m);
  const auto pos = b.find(m.timestamp);
  ASSERT_NE(pos, std::string::npos);
  b.replace(pos, m.timestamp.size(), "2000-01-01T00:00:00Z");
  EXPECT_EQ(a, b);
  EXPECT_EQ(m.timestamp.size(), 20u);
  EXPECT_NE(a.find("\"seed\": 7"), std::string::npos);
}

TEST(CertificateJson, ParseErrors) {
  expect_parse_error([] { certificate_from_json("{}"); });
  expect_parse_error([] { certificate_from_json("[1,2]"); });
  const std::string good = certificate_to_json(certify_set(hexagon_counterexample().points));
  std::string broken = good;
  broken.replace(broken.find("\"pairs\""), 7, "\"pears\"");
  expect_parse_error([&] { certificate_from_json(broken); });
}

TEST(ConstructionJson, SuggestedWitnessesRoundTrip) {
  const Construction c = petty_parallelepiped();
  const std::string text = construction_to_json(c);
  EXPECT_EQ(suggested_from_json(text), witness_pool(c));
  const PointSet back = points_from_json(text);
  EXPECT_EQ(back.points(), c.points.points());
  EXPECT_TRUE(suggested_from_json(points_to_json(c.points)).empty());
}

TEST(SearchJsonl, OneLine) {
  AnnealSchedule s;
  s.steps = 500;
  const SearchResult r = anneal_placement(NormSpace::lp(2, 2.0), 3, Classification::Hadwiger, 4, s);
  const std::string line = search_result_to_jsonl(r);
  EXPECT_EQ(line.find('\n'), std::string::npos);
  EXPECT_NE(line.find("\"schedule\""), std::string::npos);
  EXPECT_NE(line.find("\"certificate\""), std::string::npos);
}

TEST(Files, AtomicWriteAppendAndRead) {
  const auto path = scratch("out.json").string();
  write_text_file_atomic(path, "first");
  write_text_file_atomic(path, "second");
  EXPECT_EQ(read_text_file(path), "second");
  const auto log = scratch("log.jsonl").string();
  std::filesystem::remove(log);
  append_line(log, "{\"a\":1}");
  append_line(log, "{\"a\":2}");
  EXPECT_EQ(read_text_file(log), "{\"a\":1}\n{\"a\":2}\n");
  expect_parse_error([] { read_text_file("/nonexistent/antipode/file.json"); });
  for (const auto& entry : std::filesystem::directory_iterator(scratch("").parent_path())) {
    EXPECT_EQ(entry.path().filename().string().find(".tmp"), std::string::npos);
  }
}
