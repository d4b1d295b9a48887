#include <gtest/gtest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "antipode/certify.hpp"
#include "antipode/io.hpp"

using namespace antipode;
namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / "antipode_cli_test" / info->name();
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  // Runs the tool with `args`; stdout goes to out(), stderr is discarded.
  int run(const std::string& args) {
    const std::string cmd = "cd '" + dir_.string() + "' && '" ANTIPODE_CLI "' " + args + " > stdout.txt 2> stderr.txt";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string out() const { return read_text_file(path("stdout.txt")); }

  fs::path dir_;
};

double json_d(const std::string& cert_path) { return certificate_from_json(read_text_file(cert_path)).d; }

}  // namespace

TEST_F(Cli, ConstructWritesSpaceAndPoints) {
  ASSERT_EQ(run("--out cube construct scaled-hypercube --n 3 --p 2"), 0);
  const PointSet s = points_from_json(read_text_file(path("cube/points.json")));
  EXPECT_EQ(s.size(), 8u);
  EXPECT_EQ(space_from_json(read_text_file(path("cube/space.json"))), NormSpace::lp(3, 2.0));
}

TEST_F(Cli, ConstructPettyHasThreeWitnesses) {
  ASSERT_EQ(run("construct petty-parallelepiped"), 0);
  EXPECT_EQ(suggested_from_json(out()).size(), 3u);
  EXPECT_EQ(points_from_json(out()).size(), 8u);
}

TEST_F(Cli, ConstructGvIsDeterministic) {
  ASSERT_EQ(run("--seed 7 --out a construct gv --n 20 --delta 0.3333"), 0);
  ASSERT_EQ(run("--seed 7 --out b construct gv --n 20 --delta 0.3333"), 0);
  const PointSet a = points_from_json(read_text_file(path("a/points.json")));
  const PointSet b = points_from_json(read_text_file(path("b/points.json")));
  EXPECT_EQ(a.points(), b.points());
  EXPECT_EQ(a.size(), 51u);
}

TEST_F(Cli, ConstructErrors) {
  EXPECT_EQ(run("construct no-such-thing"), 2);
  EXPECT_EQ(run("construct prism --n 3"), 2);
  EXPECT_EQ(run("construct prism --n 3 --p 1.5 --beta 5"), 2);
  EXPECT_EQ(run("--bogus-flag construct hexagon"), 2);
}

TEST_F(Cli, CertifyCubeStrictPasses) {
  ASSERT_EQ(run("--out cube construct scaled-hypercube --n 3 --p 2"), 0);
  EXPECT_EQ(run("--mode strict --out cert.json certify --points cube/points.json"), 0);
  EXPECT_NEAR(json_d(path("cert.json")), 2.0 / std::sqrt(3.0), 1e-6);
}

TEST_F(Cli, CertifyHexagonFailsHadwiger) {
  ASSERT_EQ(run("--out hex construct hexagon"), 0);
  EXPECT_EQ(run("--mode hadwiger --out cert.json certify --points hex/points.json"), 1);
  EXPECT_LT(json_d(path("cert.json")), 1.0);
  EXPECT_EQ(run("--mode antipodal --out cert2.json certify --points hex/points.json"), 0);
}

TEST_F(Cli, CertifyAntipodalPair) {
  write_text_file_atomic(path("pair.json"), R"({"space":{"kind":"cylinder","n":3},"points":[["0.6",0,"0.4"],["-0.6",0,"-0.4"]]})");
  EXPECT_EQ(run("--mode strict --out cert.json certify --points pair.json"), 0);
  EXPECT_NEAR(json_d(path("cert.json")), 2.0, 1e-9);
}

TEST_F(Cli, CertifyRationalOctahedron) {
  ASSERT_EQ(run("--out oct construct l1-cube-octahedron"), 0);
  EXPECT_EQ(run("--rational --mode strict --out cert.json certify --points oct/points.json"), 0);
  const Certificate c = certificate_from_json(read_text_file(path("cert.json")));
  EXPECT_EQ(*c.d_exact, parse_rational("10/9"));
  EXPECT_EQ(run("bm from-cert cert.json"), 0);
  EXPECT_NE(out().find("9/5"), std::string::npos);
}

TEST_F(Cli, CertifyWithSuggestedWitnesses) {
  ASSERT_EQ(run("--out petty construct petty-parallelepiped"), 0);
  ASSERT_EQ(run("construct petty-parallelepiped"), 0);
  write_text_file_atomic(path("petty.json"), out());
  EXPECT_EQ(run("--mode strict --out cert.json certify --points petty.json --suggested"), 0);
  const Certificate c = certificate_from_json(read_text_file(path("cert.json")));
  EXPECT_TRUE(c.lower_bound_mode);
  EXPECT_NEAR(c.d, 1.2 / std::sqrt(1.36), 1e-9);
}

TEST_F(Cli, CertifyInputErrors) {
  EXPECT_EQ(run("certify --points missing.json"), 2);
  write_text_file_atomic(path("bad.json"), "{ nope");
  EXPECT_EQ(run("certify --points bad.json"), 2);
  write_text_file_atomic(path("off.json"), R"({"space":{"kind":"lp","n":2,"p":2},"points":[[2,0],[0,2]]})");
  EXPECT_EQ(run("certify --points off.json"), 2);
  EXPECT_EQ(run("--project --mode strict certify --points off.json"), 0);
  EXPECT_EQ(run("certify"), 2);
}

TEST_F(Cli, VerifyWitness) {
  ASSERT_EQ(run("--out petty construct petty-parallelepiped"), 0);
  EXPECT_EQ(run("--mode strict verify-witness --points petty/points.json --i 0 --j 4 --f 1,0,1"), 0);
  const std::string o = out();
  const auto pos = o.find("\"margin\": ");
  ASSERT_NE(pos, std::string::npos) << o;
  EXPECT_NEAR(std::stod(o.substr(pos + 10)), 1.28, 1e-12);
  EXPECT_EQ(run("verify-witness --points petty/points.json --i 0 --j 4 --f 2,0,1"), 2);
}

TEST_F(Cli, SeparationCsv) {
  ASSERT_EQ(run("--out sep construct petty-separated-14"), 0);
  EXPECT_EQ(run("separation --points sep/points.json"), 0);
  const std::string csv = out();
  EXPECT_GE(std::count(csv.begin(), csv.end(), '\n'), 14);
}

TEST_F(Cli, SearchExactAndLog) {
  EXPECT_EQ(run("--mode strict search exact --pool scaled-hypercube --n 3 --p 2 --log run.jsonl"), 0);
  const std::string log = read_text_file(path("run.jsonl"));
  EXPECT_EQ(std::count(log.begin(), log.end(), '\n'), 1);
  EXPECT_NE(log.find("\"best_d\""), std::string::npos);
  EXPECT_EQ(run("--mode strict search exact --pool scaled-hypercube --n 4 --p 2 --log run.jsonl"), 0);
  const std::string longer = read_text_file(path("run.jsonl"));
  EXPECT_EQ(std::count(longer.begin(), longer.end(), '\n'), 2);
  EXPECT_EQ(longer.substr(0, log.size()), log);
}

TEST_F(Cli, SearchAnnealAndGreedy) {
  EXPECT_EQ(run("--mode strict --seed 3 search anneal --space '{\"kind\":\"lp\",\"n\":2,\"p\":2}' --k 4 --steps 5000 --log ''"), 0);
  EXPECT_EQ(run("--mode antipodal --seed 1 search anneal --space '{\"kind\":\"lp\",\"n\":2,\"p\":2}' --k 5 --steps 3000 --log ''"), 1);
  write_text_file_atomic(path("base.json"), R"({"space":{"kind":"lp","n":3,"p":2},"points":[[1,0,0],[-1,0,0]]})");
  write_text_file_atomic(path("pool.json"), R"({"space":{"kind":"lp","n":3,"p":2},"points":[[0,1,0],[0,-1,0],[0,0,1],[0,0,-1]]})");
  EXPECT_EQ(run("--mode hadwiger --out found.json search greedy --base base.json --pool pool.json --log ''"), 0);
}

TEST_F(Cli, BmSubcommands) {
  EXPECT_EQ(run("bm cylinder-octahedron"), 0);
  EXPECT_NE(out().find("0.5641"), std::string::npos);
  EXPECT_EQ(run("bm contrapositive --n 4 --p 2"), 0);
  EXPECT_EQ(run("bm contrapositive --n 3 --p 2"), 2);
  EXPECT_EQ(run("bm inclusion --inner '{\"kind\":\"lp\",\"n\":3,\"p\":1}' --outer '{\"kind\":\"lp\",\"n\":3,\"p\":\"inf\"}'"), 0);
  EXPECT_NE(out().find("1/3"), std::string::npos);
  EXPECT_EQ(run("bm inclusion --inner '{\"kind\":\"lp\",\"n\":3,\"p\":\"inf\"}' --outer '{\"kind\":\"lp\",\"n\":3,\"p\":1}'"), 2);
}

TEST_F(Cli, ReportPresetAndBatches) {
  EXPECT_EQ(run("report --preset theorem1 --format csv"), 0);
  const std::string t = out();
  EXPECT_NE(t.find("\"n=3 p=2\",\"l_2^3\",8,1.15470053838,strict_hadwiger"), std::string::npos) << t;
  EXPECT_NE(t.find(",16,1,hadwiger,"), std::string::npos) << t;
  EXPECT_EQ(run("report"), 0);
  EXPECT_EQ(out(), "source,space,size,d,classification,bm_bound\n");
  EXPECT_EQ(run("report --preset theorem1 --format markdown"), 0);
  EXPECT_NE(out().find('|'), std::string::npos);
  EXPECT_EQ(run("report nothing.json"), 2);
}

TEST_F(Cli, PettyReportRow) {
  ASSERT_EQ(run("--out petty construct petty-parallelepiped"), 0);
  ASSERT_EQ(run("--out cert.json certify --points petty/points.json"), 0);
  ASSERT_EQ(run("report cert.json"), 0);
  std::istringstream rows(out());
  std::string header, row;
  std::getline(rows, header);
  std::getline(rows, row);
  EXPECT_NE(row.find(",8,1.0289"), std::string::npos) << row;
  const double bound = std::stod(row.substr(row.rfind(',') + 1));
  EXPECT_LT(bound, 2.0);
}

TEST_F(Cli, RoundTripIsDeterministic) {
  std::string reports[2];
  for (int k = 0; k < 2; ++k) {
    const std::string d = "run" + std::to_string(k);
    ASSERT_EQ(run("--out " + d + " construct prism --n 3 --p 1.5 --beta 2.4"), 0);
    ASSERT_EQ(run("--out " + d + "/cert.json certify --points " + d + "/points.json"), 0);
    ASSERT_EQ(run("report " + d + "/cert.json"), 0);
    reports[k] = out();
    const auto pos = reports[k].find(d);
    reports[k].replace(pos, d.size(), "run");
  }
  EXPECT_EQ(reports[0], reports[1]);
}
