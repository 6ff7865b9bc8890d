#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "diamond/diamond.hpp"

namespace diamond::cli {

namespace {

using nlohmann::json;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string labels_of(const PointAddress& p) {
  std::string s;
  for (std::size_t k = 0; k < p.labels.size(); ++k) {
    if (k) s += ';';
    s += std::to_string(p.labels[k]);
  }
  return s;
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw UsageError("not a number: '" + s + "'");
  }
  if (used != s.size()) throw UsageError("not a number: '" + s + "'");
  return v;
}

template <class T>
T get(const json& v, const char* key) {
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    throw UsageError(std::string("config key '") + key + "' has the wrong type");
  }
}

PointAddress fit_level(const PointAddress& p, std::optional<int> level) {
  if (!level) return p;
  return p.level() > *level ? project(p, *level) : extend(p, *level);
}

std::vector<KernelPair> load_pairs(const RunConfig& cfg, const ParameterSequences& seq) {
  if (cfg.pairs.empty()) throw UsageError(cfg.command + " needs --pairs FILE");
  std::ifstream is(cfg.pairs);
  if (!is) throw UsageError("cannot read pairs file '" + cfg.pairs + "'");
  std::stringstream ss;
  ss << is.rdbuf();
  std::vector<KernelPair> pairs = parse_pairs(ss.str(), seq);
  for (auto& p : pairs) {
    p.x = fit_level(p.x, cfg.level);
    p.y = fit_level(p.y, cfg.level);
  }
  return pairs;
}

void require_times(const RunConfig& cfg) {
  if (cfg.times.empty()) throw UsageError(cfg.command + " needs --t or --t-grid");
  for (double t : cfg.times)
    if (!(t > 0.0)) throw UsageError("times must be > 0");
}

}  // namespace

std::vector<double> parse_grid(const std::string& spec) {
  if (spec.empty()) throw UsageError("empty grid");
  const auto c1 = spec.find(':');
  if (c1 == std::string::npos) {
    std::vector<double> out;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(item));
    return out;
  }
  const auto c2 = spec.find(':', c1 + 1);
  if (c2 == std::string::npos) throw UsageError("grid must read a:b:logN or a:b:linN");
  const double a = parse_double(spec.substr(0, c1));
  const double b = parse_double(spec.substr(c1 + 1, c2 - c1 - 1));
  const std::string kind = spec.substr(c2 + 1, 3);
  if (kind != "log" && kind != "lin") throw UsageError("grid must read a:b:logN or a:b:linN");
  const std::string count = spec.substr(c2 + 4);
  int n = 0;
  try {
    std::size_t used = 0;
    n = std::stoi(count, &used);
    if (used != count.size()) n = 0;
  } catch (const std::exception&) {
  }
  if (n < 1) throw UsageError("grid point count must be a positive integer");
  if (kind == "log" && !(a > 0.0 && b > 0.0)) throw UsageError("log grids need positive endpoints");
  std::vector<double> out(n);
  for (int k = 0; k < n; ++k) {
    const double f = n == 1 ? 0.0 : static_cast<double>(k) / (n - 1);
    out[k] = kind == "log" ? std::exp(std::log(a) + f * (std::log(b) - std::log(a))) : a + f * (b - a);
  }
  out.front() = a;
  if (n > 1) out.back() = b;
  return out;
}

void merge_config_file(RunConfig& cfg, const std::string& json_text, const std::vector<std::string>& explicit_keys) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw UsageError(std::string("config file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw UsageError("config file must hold a JSON object");
  auto given = [&](const std::string& k) {
    return std::find(explicit_keys.begin(), explicit_keys.end(), k) != explicit_keys.end();
  };
  for (const auto& [key, v] : doc.items()) {
    if (given(key)) continue;
    if (key == "j")
      cfg.j = get<std::vector<std::uint64_t>>(v, "j");
    else if (key == "n")
      cfg.n = get<std::vector<std::uint64_t>>(v, "n");
    else if (key == "tail_j")
      cfg.tail_j = get<std::uint64_t>(v, "tail_j");
    else if (key == "tail_n")
      cfg.tail_n = get<std::uint64_t>(v, "tail_n");
    else if (key == "regular") {
      const auto r = get<std::vector<std::uint64_t>>(v, "regular");
      if (r.size() != 2) throw UsageError("config key 'regular' needs [j, n]");
      cfg.j.clear();
      cfg.n.clear();
      cfg.tail_j = r[0];
      cfg.tail_n = r[1];
    } else if (key == "t")
      cfg.times = v.is_string() ? parse_grid(v.get<std::string>()) : get<std::vector<double>>(v, "t");
    else if (key == "level")
      cfg.level = get<int>(v, "level");
    else if (key == "levels")
      cfg.levels = get<int>(v, "levels");
    else if (key == "m")
      cfg.m = get<int>(v, "m");
    else if (key == "tol")
      cfg.tol = get<double>(v, "tol");
    else if (key == "out")
      cfg.out = get<std::string>(v, "out");
    else if (key == "pairs")
      cfg.pairs = get<std::string>(v, "pairs");
    else if (key == "seed")
      cfg.seed = get<std::uint64_t>(v, "seed");
    else if (key == "jobs")
      cfg.jobs = get<int>(v, "jobs");
    else
      throw UsageError("unknown config key '" + key + "'");
  }
}

ParameterSequences make_sequences(const RunConfig& cfg) {
  if (cfg.tail_j.has_value() != cfg.tail_n.has_value()) throw UsageError("a regular tail needs both j and n");
  if (cfg.j.size() != cfg.n.size()) throw UsageError("--j and --n need the same number of levels");
  std::optional<RegularTail> tail;
  if (cfg.tail_j) tail = RegularTail{*cfg.tail_j, *cfg.tail_n};
  if (cfg.j.empty() && !tail) throw UsageError("no parameter sequences given (use --regular, --j/--n or --config)");
  try {
    if (cfg.j.empty()) return ParameterSequences::regular(tail->j, tail->n);
    return ParameterSequences(cfg.j, cfg.n, tail);
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
}

std::vector<KernelPair> parse_pairs(const std::string& json_text, const ParameterSequences& seq) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw UsageError(std::string("pairs file is not valid JSON: ") + e.what());
  }
  if (doc.is_object() && doc.contains("pairs")) doc = doc["pairs"];
  if (!doc.is_array()) throw UsageError("pairs file must hold a list of {\"x\", \"y\"} objects");
  auto point = [&](const json& p) {
    if (!p.is_object() || !p.contains("theta")) throw UsageError("each point needs a 'theta'");
    std::vector<std::uint64_t> labels;
    if (p.contains("labels")) labels = get<std::vector<std::uint64_t>>(p["labels"], "labels");
    try {
      return make_point(seq, get<double>(p["theta"], "theta"), labels);
    } catch (const InvalidArgument& e) {
      throw UsageError(e.what());
    }
  };
  std::vector<KernelPair> out;
  for (const json& item : doc) {
    if (!item.is_object() || !item.contains("x") || !item.contains("y"))
      throw UsageError("each pair needs 'x' and 'y'");
    out.push_back({point(item["x"]), point(item["y"])});
  }
  return out;
}

std::string resolve_output(const RunConfig& cfg, const std::string& default_name) {
  if (!cfg.out.empty()) return cfg.out;
  if (const char* dir = std::getenv("DIAMOND_OUTPUT_DIR"); dir && *dir)
    return (std::filesystem::path(dir) / default_name).string();
  return {};
}

int run_kernel(const RunConfig& cfg, std::ostream& artifact, std::ostream& log) {
  const ParameterSequences seq = make_sequences(cfg);
  require_times(cfg);
  const auto pairs = load_pairs(cfg, seq);
  KernelEvalConfig kc;
  kc.tol = cfg.tol;
  const KernelBatch batch = evaluate_batch(seq, cfg.level, cfg.times, pairs, kc, cfg.jobs);
  write_batch_csv(artifact, batch);
  double worst = 0.0;
  for (const auto& v : batch.values) worst = std::max(worst, v.error);
  log << batch.values.size() << " kernel values on " << (cfg.level ? "F_" + std::to_string(*cfg.level) : "F_inf")
      << ", largest certified error " << num(worst) << "\n";
  return 0;
}

int run_bounds(const RunConfig& cfg, std::ostream& artifact, std::ostream& log) {
  const ParameterSequences seq = make_sequences(cfg);
  require_times(cfg);
  artifact << "t,C_L,C_L_tail,uniform,uniform_printed,C,C_tail,M,ultracontractivity_2inf\n";
  int failures = 0;
  auto cell = [&](auto&& f) -> std::string {
    try {
      return num(f());
    } catch (const std::exception& e) {
      ++failures;
      log << "bounds: " << e.what() << "\n";
      return "nan";
    }
  };
  for (double t : cfg.times) {
    std::optional<BoundReport> lip, wbe;
    const std::string cl = cell([&] { return (lip = lipschitz_bound(seq, t, cfg.tol))->value; });
    const std::string cw = cell([&] { return (wbe = wbe_constant(seq, t, cfg.tol))->value; });
    artifact << num(t) << ',' << cl << ',' << (lip ? num(lip->tail_bound) : "nan") << ','
             << cell([&] { return uniform_bound(seq, t, cfg.tol, true).value; }) << ','
             << cell([&] { return uniform_bound(seq, t, cfg.tol, false).value; }) << ',' << cw << ','
             << (wbe ? num(wbe->tail_bound) : "nan") << ','
             << cell([&] { return logsob_constant(seq, t, cfg.tol).value; }) << ','
             << cell([&] { return ultracontractivity_bound(seq, t, cfg.tol).value; }) << '\n';
  }
  log << cfg.times.size() << " rows for " << seq.describe() << " (M is evaluated at delta = t)\n";
  bool regular = seq.tail().has_value();
  for (int l = 1; regular && l <= seq.prefix_depth(); ++l)
    regular = seq.j(l) == seq.tail()->j && seq.n(l) == seq.tail()->n;
  if (regular) {
    const OneToInfConstant c =
        regular_1_to_inf_constant(static_cast<double>(seq.tail()->j), static_cast<double>(seq.tail()->n));
    log << "C(j,n) = " << num(c.value) << " (" << c.branch << (c.valid ? "" : ", not valid for j < n") << ")\n";
  }
  return failures ? 1 : 0;
}

int run_verify(const RunConfig& cfg, std::ostream& artifact, std::ostream& log) {
  const ParameterSequences seq = make_sequences(cfg);
  verify::SuiteConfig sc;
  sc.max_level = cfg.levels;
  if (!cfg.times.empty()) sc.times = cfg.times;
  sc.m = cfg.m;
  sc.seed = cfg.seed;
  sc.jobs = cfg.jobs;
  sc.kernel.tol = cfg.tol;
  if (sc.max_level < 1) throw UsageError("--levels must be >= 1");
  const auto results = verify::run_suite(seq, sc);
  verify::write_report_json(artifact, results, seq, sc);
  verify::write_summary(log, results);
  return verify::any_failure(results) ? 1 : 0;
}

int run_oracle_compare(const RunConfig& cfg, std::ostream& artifact, std::ostream& log) {
  const ParameterSequences seq = make_sequences(cfg);
  require_times(cfg);
  if (!cfg.level) throw UsageError("oracle-compare needs --level");
  const int level = *cfg.level;
  const auto pairs = load_pairs(cfg, seq);
  const LayoutPtr layout = make_layout(seq, level, cfg.m);
  const verify::CableDiscretization disc(layout);
  artifact << "t,theta_x,labels_x,theta_y,labels_y,closed,spectral,abs_diff,distance,dijkstra\n";
  double worst = 0.0;
  for (double t : cfg.times) {
    KernelEvalConfig kc;
    kc.tol = cfg.tol;
    const DiamondKernel K(seq, level, t, kc);
    const verify::Spectrum spec = verify::spectrum_for_time(disc, t);
    for (const auto& p : pairs) {
      const std::size_t u = verify::nearest_node(*layout, p.x), v = verify::nearest_node(*layout, p.y);
      const PointAddress& x = layout->point(u);
      const PointAddress& y = layout->point(v);
      const double closed = K(x, y).value;
      const double oracle = verify::oracle_kernel_spectral(spec, t, u, v);
      worst = std::max(worst, std::abs(closed - oracle));
      artifact << num(t) << ',' << num(x.theta) << ',' << labels_of(x) << ',' << num(y.theta) << ','
               << labels_of(y) << ',' << num(closed) << ',' << num(oracle) << ',' << num(std::abs(closed - oracle))
               << ',' << num(distance_level(seq, x, y, level)) << ',' << num(verify::oracle_distance(seq, level, x, y))
               << '\n';
    }
  }
  log << "points snapped to the m=" << cfg.m << " grid of F_" << level << "; largest kernel difference " << num(worst)
      << "\n";
  return 0;
}

int run_distance(const RunConfig& cfg, std::ostream& artifact, std::ostream& log) {
  const ParameterSequences seq = make_sequences(cfg);
  const auto pairs = load_pairs(cfg, seq);
  artifact << "theta_x,labels_x,theta_y,labels_y,level,distance,error_bound\n";
  for (const auto& p : pairs) {
    DistanceReport r;
    if (cfg.level) {
      r.value = distance_level(seq, p.x, p.y, *cfg.level);
      r.level = *cfg.level;
    } else {
      r = distance_limit(seq, p.x, p.y, std::max(cfg.tol, 1e-12));
    }
    artifact << num(p.x.theta) << ',' << labels_of(p.x) << ',' << num(p.y.theta) << ',' << labels_of(p.y) << ','
             << r.level << ',' << num(r.value) << ',' << num(r.error_bound) << '\n';
  }
  log << pairs.size() << " distances\n";
  return 0;
}

int dispatch(const RunConfig& cfg, std::ostream& artifact, std::ostream& log) {
  if (cfg.m < 2) throw UsageError("--m must be >= 2");
  if (!(cfg.tol > 0.0)) throw UsageError("--tol must be > 0");
  if (cfg.jobs < 1) throw UsageError("--jobs must be >= 1");
  if (cfg.level && *cfg.level < 0) throw UsageError("--level must be >= 0");
  if (cfg.command == "kernel") return run_kernel(cfg, artifact, log);
  if (cfg.command == "bounds") return run_bounds(cfg, artifact, log);
  if (cfg.command == "verify") return run_verify(cfg, artifact, log);
  if (cfg.command == "oracle-compare") return run_oracle_compare(cfg, artifact, log);
  if (cfg.command == "distance") return run_distance(cfg, artifact, log);
  throw UsageError("unknown command '" + cfg.command + "'");
}

}  // namespace diamond::cli
