#include <catch_amalgamated.hpp>

#include <sstream>

#include "cli.hpp"

using namespace diamond::cli;

TEST_CASE("time grids") {
  const auto g = parse_grid("0.01:10:log4");
  REQUIRE(g.size() == 4);
  CHECK(g.front() == 0.01);
  CHECK(g.back() == 10.0);
  CHECK(g[1] == Catch::Approx(0.1));
  CHECK(parse_grid("0:1:lin3") == std::vector<double>{0.0, 0.5, 1.0});
  CHECK(parse_grid("0.5,1,2") == std::vector<double>{0.5, 1.0, 2.0});
  CHECK_THROWS_AS(parse_grid("0:1:log3"), UsageError);
  CHECK_THROWS_AS(parse_grid("1:2:cube3"), UsageError);
}

TEST_CASE("flags take precedence over the config file") {
  RunConfig cfg;
  cfg.m = 50;
  merge_config_file(cfg, R"({"m": 80, "seed": 7, "t": "0.1:1:lin2"})", {"m"});
  CHECK(cfg.m == 50);
  CHECK(cfg.seed == 7);
  CHECK(cfg.times == std::vector<double>{0.1, 1.0});
  CHECK_THROWS_AS(merge_config_file(cfg, R"({"colour": 1})", {}), UsageError);
}

TEST_CASE("regular shorthand in the config file") {
  RunConfig cfg;
  merge_config_file(cfg, R"({"regular": [3, 2]})", {});
  const auto seq = make_sequences(cfg);
  CHECK(seq.j(5) == 3);
  CHECK(seq.n(5) == 2);
}

TEST_CASE("pairs parse at the stated level") {
  const auto seq = diamond::ParameterSequences::regular(2, 2);
  const auto p = parse_pairs(R"([{"x": {"theta": 0.3, "labels": [1]}, "y": {"theta": 0.9, "labels": [2]}}])", seq);
  REQUIRE(p.size() == 1);
  CHECK(p[0].y.labels == std::vector<std::uint64_t>{2});
}

TEST_CASE("bounds and distance subcommands write CSV") {
  RunConfig cfg;
  cfg.command = "bounds";
  cfg.tail_j = 2;
  cfg.tail_n = 2;
  cfg.times = {1.0};
  std::ostringstream art, log;
  CHECK(dispatch(cfg, art, log) == 0);
  CHECK(art.str().rfind("t,C_L,", 0) == 0);
  CHECK(log.str().find("C(j,n)") != std::string::npos);
  cfg.command = "nope";
  CHECK_THROWS_AS(dispatch(cfg, art, log), UsageError);
}
