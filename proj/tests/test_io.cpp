#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "bdkin/io.hpp"

using namespace bdkin;

namespace {
std::string tmp_path(const std::string& name) { return "/tmp/bdkin_io_test_" + name; }
}  // namespace

TEST_CASE("config parsing: keys, arrays, comments, overrides") {
  auto cfg = Config::from_string(
      "# model\n"
      "family = pt\n"
      "gamma=1.0\n"
      "zs = 1.0   # critical density\n"
      "q = 1\n"
      "mu = 0.5\n"
      "eps_grid = 0.1, 0.03, 0.01\n");
  CHECK(cfg.get_string("family") == "pt");
  CHECK(cfg.require_double("gamma") == 1.0);
  auto grid = cfg.get_array("eps_grid");
  REQUIRE(grid.size() == 3);
  CHECK(grid[1] == 0.03);
  cfg.set("gamma", "0.5");  // flag override
  CHECK(cfg.require_double("gamma") == 0.5);
  CHECK_THROWS_AS(cfg.validate_keys({"family", "gamma"}), ValidationError);
  CHECK_THROWS_AS(Config::from_string("not a pair\n"), ValidationError);
}

TEST_CASE("model from config: families and rejection") {
  auto pt = model_from_config(Config::from_string("family=pt\ngamma=1\nzs=1\nq=1\nmu=0.5\n"));
  CHECK(pt.family() == Family::PowerLawPT);
  auto cf = model_from_config(Config::from_string("family=cf\ngamma=1\nzs=1\nsigma=0\nmu=0.5\n"));
  CHECK(cf.family() == Family::PowerLawCF);
  auto cu = model_from_config(
      Config::from_string("family=custom\na_table=1,2,3\nb_table=1,1,2\nzs=1\n"));
  CHECK(cu.family() == Family::Custom);
  CHECK(cu.max_index() == 3);
  CHECK_THROWS_AS(model_from_config(Config::from_string("family=bogus\n")), ValidationError);
  CHECK_THROWS_AS(model_from_config(Config::from_string("family=custom\n")), ValidationError);
}

TEST_CASE("array values can come from a file") {
  const std::string path = tmp_path("table.txt");
  {
    std::ofstream out(path);
    out << "1\n2\n3\n";
  }
  Config cfg = Config::from_string("a_table=@" + path + "\n");
  auto arr = cfg.get_array("a_table");
  REQUIRE(arr.size() == 3);
  CHECK(arr[2] == 3.0);
  std::remove(path.c_str());
}

TEST_CASE("state csv roundtrip") {
  const std::string path = tmp_path("state.csv");
  Vector c(5);
  c << 0.5, 0.25, 0.125, 0.0625, 0.03125;
  write_state_csv(path, c);
  Vector back = read_state_csv(path);
  REQUIRE(back.size() == 5);
  CHECK((back - c).abs().maxCoeff() == 0.0);
  std::remove(path.c_str());
}

TEST_CASE("trajectory csv header and missing fields") {
  Trajectory tr;
  TrajectorySample s;
  s.t = 0.5;
  s.c1 = 0.25;
  s.mass = 2.0;
  tr.samples.push_back(s);  // H, D, ... stay NaN -> empty fields
  const std::string path = tmp_path("traj.csv");
  write_trajectory_csv(path, tr);
  std::ifstream in(path);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header == "t,c1,mass,H_rel,D,D_lower,M_beta,envelope");
  CHECK(row == "0.5,0.25,2,,,,,");
  std::remove(path.c_str());
}

TEST_CASE("report json carries the fixed field names") {
  CercignaniReport rep;
  rep.regime = CercignaniReport::Regime::ExpMoment;
  rep.K = 1.5;
  rep.exponent = 1.0;
  rep.epsilon = 0.25;
  rep.lambda = 100.0;
  rep.m = 2;
  rep.D1 = 1;
  rep.D2 = 0;
  rep.B1 = 0.5;
  rep.B2 = 0;
  rep.K1 = 0.1;
  rep.K2 = 0.01;
  rep.flags = {"mu-clamped-to-4log2"};
  const std::string j = cercignani_report_json(rep);
  for (const char* key : {"\"regime\"", "\"K\"", "\"exponent\"", "\"epsilon\"", "\"lambda\"",
                          "\"m\"", "\"D1\"", "\"D2\"", "\"B1\"", "\"B2\"", "\"flags\"", "\"K1\"",
                          "\"K2\""})
    CHECK(j.find(key) != std::string::npos);
  CHECK(j.find("exp_moment") != std::string::npos);
}

TEST_CASE("doubles print with 17 significant digits") {
  CHECK(format_double(1.0 / 3.0) == "0.33333333333333331");
  CHECK(format_double(std::nan("")) == "");
}

TEST_CASE("functional records carry name, value, tolerance") {
  const std::string j = functional_json("H_rel", 0.25, 1e-13);
  CHECK(j.find("\"name\":\"H_rel\"") != std::string::npos);
  CHECK(j.find("\"value\":0.25") != std::string::npos);
  CHECK(j.find("\"tolerance\":1e-13") != std::string::npos);
}
