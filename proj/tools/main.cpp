#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cli.hpp"
#include "diamond/errors.hpp"

namespace {

using diamond::cli::RunConfig;
using diamond::cli::UsageError;

// Flags shared by every subcommand. `keys` collects the config keys that a
// flag actually set, so the config file cannot override them.
struct Flags {
  std::vector<std::uint64_t> regular;
  std::vector<std::uint64_t> tail_j, tail_n;
  std::vector<std::string> t_list;
  std::string t_grid;
  std::string config;
  bool limit = false;
};

void add_common(CLI::App& app, RunConfig& cfg, Flags& f) {
  app.add_option("--config", f.config, "JSON run configuration (flags take precedence)");
  app.add_option("--regular", f.regular, "regular sequences: J N")->expected(2);
  app.add_option("--j", cfg.j, "j_1, j_2, ... (comma separated)")->delimiter(',');
  app.add_option("--n", cfg.n, "n_1, n_2, ... (comma separated)")->delimiter(',');
  app.add_option("--tail-j", f.tail_j, "j for every level after the prefix")->expected(1);
  app.add_option("--tail-n", f.tail_n, "n for every level after the prefix")->expected(1);
  app.add_option("--t", f.t_list, "times (comma separated)")->delimiter(',');
  app.add_option("--t-grid", f.t_grid, "time grid a:b:logN or a:b:linN");
  app.add_option("--tol", cfg.tol, "absolute tolerance");
  app.add_option("--out", cfg.out, "output file (default: $DIAMOND_OUTPUT_DIR/<command>.<ext> or stdout)");
  app.add_option("--seed", cfg.seed, "random seed");
  app.add_option("--jobs", cfg.jobs, "worker threads");
}

std::vector<std::string> explicit_keys(const CLI::App& app) {
  std::vector<std::string> keys;
  auto given = [&](const char* flag) { return app.count(flag) > 0; };
  if (given("--regular")) keys.insert(keys.end(), {"regular", "j", "n", "tail_j", "tail_n"});
  if (given("--j")) keys.push_back("j");
  if (given("--n")) keys.push_back("n");
  if (given("--tail-j")) keys.push_back("tail_j");
  if (given("--tail-n")) keys.push_back("tail_n");
  if (given("--t") || given("--t-grid")) keys.push_back("t");
  for (const char* k : {"level", "levels", "m", "tol", "out", "pairs", "seed", "jobs"}) {
    const std::string flag = std::string("--") + k;
    try {
      if (app.count(flag) > 0) keys.push_back(k);
    } catch (const CLI::OptionNotFound&) {
    }
  }
  return keys;
}

int execute(CLI::App& sub, RunConfig cfg, const Flags& f) {
  cfg.command = sub.get_name();
  if (!f.regular.empty()) {
    cfg.j.clear();
    cfg.n.clear();
    cfg.tail_j = f.regular[0];
    cfg.tail_n = f.regular[1];
  }
  if (!f.tail_j.empty()) cfg.tail_j = f.tail_j[0];
  if (!f.tail_n.empty()) cfg.tail_n = f.tail_n[0];
  if (!f.t_list.empty()) {
    cfg.times.clear();
    for (const auto& s : f.t_list)
      for (double t : diamond::cli::parse_grid(s)) cfg.times.push_back(t);
  }
  if (!f.t_grid.empty()) {
    const auto g = diamond::cli::parse_grid(f.t_grid);
    cfg.times.insert(cfg.times.end(), g.begin(), g.end());
  }
  if (f.limit) cfg.level.reset();
  if (!f.config.empty()) {
    std::ifstream is(f.config);
    if (!is) throw UsageError("cannot read config file '" + f.config + "'");
    std::stringstream ss;
    ss << is.rdbuf();
    diamond::cli::merge_config_file(cfg, ss.str(), explicit_keys(sub));
  }

  const char* ext = cfg.command == "verify" ? ".json" : ".csv";
  const std::string path = diamond::cli::resolve_output(cfg, cfg.command + ext);
  if (path.empty()) {
    // Artifact on stdout, commentary on stderr.
    return diamond::cli::dispatch(cfg, std::cout, std::cerr);
  }
  std::ostringstream artifact;
  const int status = diamond::cli::dispatch(cfg, artifact, std::cout);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write '" + path + "'");
  os << artifact.str();
  std::cout << "wrote " << path << "\n";
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heat kernels, bounds and verification on generalized diamond fractals"};
  app.require_subcommand(1);

  struct Sub {
    CLI::App* app;
    RunConfig cfg;
    Flags flags;
  };
  std::vector<std::unique_ptr<Sub>> subs;
  auto make = [&](const char* name, const char* help) -> Sub& {
    auto s = std::make_unique<Sub>();
    s->app = app.add_subcommand(name, help);
    add_common(*s->app, s->cfg, s->flags);
    subs.push_back(std::move(s));
    return *subs.back();
  };

  Sub& kernel = make("kernel", "evaluate heat kernel values for point pairs");
  kernel.app->add_option("--level", kernel.cfg.level, "level i of F_i (omit for F_infinity)");
  kernel.app->add_option("--pairs", kernel.cfg.pairs, "JSON file of point pairs")->required();

  Sub& bounds = make("bounds", "tabulate Lipschitz, uniform, wBE, log-Sobolev and ultracontractivity bounds");
  (void)bounds;

  Sub& verify = make("verify", "run the verification suite and write a JSON report");
  verify.app->add_option("--levels", verify.cfg.levels, "run checks on F_1..F_levels");
  verify.app->add_option("--m", verify.cfg.m, "points per branch of the grids");

  Sub& oracle = make("oracle-compare", "compare closed-form kernel and distance with the oracles");
  oracle.app->add_option("--level", oracle.cfg.level, "level i of F_i")->required();
  oracle.app->add_option("--m", oracle.cfg.m, "points per branch of the cable grid");
  oracle.app->add_option("--pairs", oracle.cfg.pairs, "JSON file of point pairs")->required();

  Sub& distance = make("distance", "geodesic distances for point pairs");
  distance.app->add_option("--level", distance.cfg.level, "level i of F_i (omit for F_infinity)");
  distance.app->add_option("--pairs", distance.cfg.pairs, "JSON file of point pairs")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    for (auto& s : subs)
      if (s->app->parsed()) return execute(*s->app, s->cfg, s->flags);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const diamond::InvalidArgument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
