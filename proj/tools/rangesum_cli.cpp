// rangesum: command-line front end for dyadic simulation trees.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rangesum/bench.hpp"
#include "rangesum/dst.hpp"
#include "rangesum/errors.hpp"
#include "rangesum/grw_lsh.hpp"
#include "rangesum/prefix.hpp"
#include "rangesum/sketch.hpp"
#include "rangesum/verify.hpp"

namespace {

using nlohmann::json;
using namespace rangesum;

struct Options {
  int ulog = 20;
  std::string dist = "gaussian";
  std::string hash = "fast";
  std::uint64_t seed = 1;
  std::size_t r = 100;
  double W = 122.0;
  std::size_t m = 1;
  std::uint64_t trials = 0;  // 0: subcommand default
  std::string format = "json";
  std::string out;
};

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw ArgumentError("cannot open output file " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

void print_config(const std::string& cmd, const Options& o, json extra) {
  json c = {{"subcommand", cmd}, {"ulog", o.ulog},   {"dist", o.dist},
            {"hash", o.hash},    {"seed", o.seed},   {"r", o.r},
            {"W", o.W},          {"m", o.m},         {"trials", o.trials},
            {"format", o.format}, {"out", o.out}};
  if (extra.is_object()) c.update(extra);
  std::cerr << "# config " << c.dump() << "\n";
}

std::uint64_t trials_or(const Options& o, std::uint64_t fallback) {
  return o.trials ? o.trials : fallback;
}

// ---------------------------------------------------------------------------

int cmd_cover(const Options& o, std::uint64_t a, std::uint64_t b) {
  print_config("cover", o, {{"a", a}, {"b", b}});
  Output out(o.out);
  out.stream() << format_cover(dyadic_cover(a, b, o.ulog), o.ulog) << "\n";
  return 0;
}

int cmd_bench(const Options& o, std::uint64_t min_splits, std::uint64_t queries) {
  print_config("bench", o, {{"min_splits", min_splits}, {"queries", queries}});
  const auto per_dist = bench::compare_splits(o.ulog, min_splits, o.seed);
  std::vector<int> ulogs;
  for (int L = 10; L <= 30; L += 5) ulogs.push_back(L);
  const auto scaling = bench::time_range_sums(parse_distribution(o.dist), ulogs,
                                              queries, o.seed);

  const double g = per_dist[0].ns_per_split;
  const bool gaussian_fastest =
      g < per_dist[1].ns_per_split && g < per_dist[2].ns_per_split;
  // Latency per range sum should grow at most about linearly in log U.
  bool scaling_ok = true;
  for (std::size_t i = 0; i < scaling.size(); ++i) {
    for (std::size_t j = i + 1; j < scaling.size(); ++j) {
      if (scaling[j].universe_log == 2 * scaling[i].universe_log &&
          scaling[j].ns_per_range_sum > 2.5 * scaling[i].ns_per_range_sum) {
        scaling_ok = false;
      }
    }
  }

  Output out(o.out);
  if (o.format == "csv") {
    out.stream() << "kind,key,ns\n";
    for (const auto& t : per_dist) {
      out.stream() << "split," << to_string(t.distribution) << "," << t.ns_per_split << "\n";
    }
    for (const auto& s : scaling) {
      out.stream() << "range_sum," << s.universe_log << "," << s.ns_per_range_sum << "\n";
    }
  } else {
    json j;
    for (const auto& t : per_dist) {
      j["ns_per_split"][to_string(t.distribution)] = t.ns_per_split;
      j["splits_per_batch"][to_string(t.distribution)] = t.splits_per_batch;
    }
    for (const auto& s : scaling) {
      j["ns_per_range_sum"].push_back({{"ulog", s.universe_log}, {"ns", s.ns_per_range_sum}});
    }
    j["assert"] = {{"gaussian_fastest", gaussian_fastest}, {"scaling", scaling_ok}};
    out.stream() << j.dump(2) << "\n";
  }
  return gaussian_fastest && scaling_ok ? 0 : 1;
}

int cmd_verify(const Options& o) {
  const auto d = parse_distribution(o.dist);
  const auto hash = HashFamily::parse(o.hash);
  const std::uint64_t trials = trials_or(o, 10000);
  print_config("verify", o, json::object());
  using verify::Report;
  std::vector<Report> all;
  auto add = [&](std::vector<Report> rs) {
    all.insert(all.end(), rs.begin(), rs.end());
  };

  const std::uint64_t split_n = d == Distribution::RandomWalk ? 1 : 8;
  add(verify::with_retry(
      [&](std::uint64_t s) { return verify::check_split_theorem(d, split_n, trials, s); },
      o.seed));
  const std::uint64_t u = universe_size(o.ulog);
  const std::uint64_t width = std::min<std::uint64_t>(100, u);
  const std::uint64_t a = (u - width) / 2;
  add(verify::with_retry(
      [&](std::uint64_t s) {
        return std::vector<Report>{
            verify::check_marginal_theorem(d, o.ulog, a, a + width, hash, trials, s)};
      },
      o.seed + 1));
  const int small = std::min(o.ulog, 6);
  add(verify::with_retry(
      [&](std::uint64_t s) {
        return std::vector<Report>{
            verify::check_kwise_theorem(2, d, small, 1, hash, trials, s)};
      },
      o.seed + 2));
  add(verify::with_retry(
      [&](std::uint64_t s) {
        return verify::check_ideal_equivalence(std::max(small, 2), d, trials, s);
      },
      o.seed + 3));

  Output out(o.out);
  if (o.format == "csv") {
    out.stream() << "test,statistic,critical,pass\n";
    for (const auto& r : all) {
      out.stream() << r.test << "," << r.statistic << "," << r.critical << ","
                   << (r.pass ? "true" : "false") << "\n";
    }
  } else {
    out.stream() << verify::to_json(all).dump(2) << "\n";
  }
  return verify::all_pass(all) ? 0 : 1;
}

int cmd_stream(const Options& o, const std::string& path, double tolerance) {
  const auto d = parse_distribution(o.dist);
  if (d == Distribution::RandomWalk) {
    throw ArgumentError("stream sketches use --dist gaussian (L2) or cauchy (L1)");
  }
  SketchConfig c;
  c.p = d == Distribution::Cauchy ? Norm::L1 : Norm::L2;
  c.r = o.r;
  c.universe_log = o.ulog;
  c.seed = o.seed;
  c.hash = HashFamily::parse(o.hash);
  print_config("stream", o, {{"file", path}, {"norm", to_string(c.p)},
                             {"tolerance", tolerance}});

  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open stream file " + path);
  const auto updates = parse_stream(in);
  LpSketch sketch(c);
  sketch.update_batch(updates);

  json j = {{"updates", updates.size()}, {"norm", to_string(c.p)},
            {"estimate", sketch.estimate_norm()}};
  bool ok = true;
  if (o.ulog <= ExactCounters::kMaxUniverseLog) {
    ExactCounters exact(o.ulog);
    exact.add(updates);
    const Norms n = oracle_norms(exact);
    const double truth = c.p == Norm::L1 ? n.d1 : n.d2;
    const double rel = truth > 0.0 ? std::fabs(sketch.estimate_norm() - truth) / truth
                                   : std::fabs(sketch.estimate_norm());
    j["exact"] = truth;
    j["relative_error"] = rel;
    if (tolerance > 0.0) {
      ok = rel <= tolerance;
      j["pass"] = ok;
    }
  }
  Output out(o.out);
  if (o.format == "csv") {
    out.stream() << "updates,norm,estimate,exact,relative_error\n"
                 << updates.size() << "," << to_string(c.p) << "," << j["estimate"] << ","
                 << j.value("exact", json()) << "," << j.value("relative_error", json())
                 << "\n";
  } else {
    out.stream() << j.dump(2) << "\n";
  }
  return ok ? 0 : 1;
}

int cmd_lsh(const Options& o, const std::vector<std::uint64_t>& distances) {
  const std::uint64_t trials = trials_or(o, 10000);
  print_config("lsh-collision", o, {{"distances", distances}});
  const auto curve =
      collision_curve(o.W, distances, trials, o.seed, o.ulog, o.m);
  // Nonincreasing in D up to 3 standard errors of the difference.
  bool monotone = true;
  for (std::size_t i = 1; i < curve.size(); ++i) {
    if (curve[i].distance < curve[i - 1].distance) continue;
    const double noise = std::hypot(curve[i].stderr_, curve[i - 1].stderr_);
    if (curve[i].probability > curve[i - 1].probability + 3.0 * noise) monotone = false;
  }
  Output out(o.out);
  if (o.format == "json") {
    json j = json::array();
    for (const auto& p : curve) {
      j.push_back({{"D", p.distance}, {"probability", p.probability}, {"stderr", p.stderr_}});
    }
    out.stream() << json{{"curve", j}, {"monotone", monotone}}.dump(2) << "\n";
  } else {
    out.stream() << "D,probability,stderr\n";
    for (const auto& p : curve) {
      out.stream() << p.distance << "," << p.probability << "," << p.stderr_ << "\n";
    }
  }
  return monotone ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dyadic simulation trees: range-summable i.i.d. random variables"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--ulog", o.ulog, "log2 of the universe size")->capture_default_str();
    sub->add_option("--dist", o.dist, "gaussian, cauchy or rw")
        ->check(CLI::IsMember({"gaussian", "cauchy", "rw"}))
        ->capture_default_str();
    sub->add_option("--hash", o.hash, "fast, poly2 or poly4")
        ->check(CLI::IsMember({"fast", "poly2", "poly4"}))
        ->capture_default_str();
    sub->add_option("--seed", o.seed, "master seed")->capture_default_str();
    sub->add_option("--r", o.r, "sketch size")->capture_default_str();
    sub->add_option("--W", o.W, "LSH bucket width")->capture_default_str();
    sub->add_option("--m", o.m, "LSH dimension")->capture_default_str();
    sub->add_option("--trials", o.trials, "Monte-Carlo trials (0: default)");
    sub->add_option("--format", o.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    sub->add_option("--out", o.out, "write output here instead of stdout");
  };

  std::uint64_t a = 0, b = 0;
  auto* cover = app.add_subcommand("cover", "print the dyadic cover of [a, b)");
  cover->add_option("a", a)->required();
  cover->add_option("b", b)->required();
  common(cover);

  std::uint64_t min_splits = 1000000, queries = 20000;
  auto* bench = app.add_subcommand("bench", "time splits and range sums");
  bench->add_option("--splits", min_splits, "splits per timed batch")->capture_default_str();
  bench->add_option("--queries", queries, "range sums per scaling batch")->capture_default_str();
  common(bench);

  auto* verify = app.add_subcommand("verify", "run the statistical verification battery");
  common(verify);

  std::string stream_file;
  double tolerance = 0.0;
  auto* stream = app.add_subcommand("stream", "sketch a stream file of range updates");
  stream->add_option("file", stream_file, "lines of 'a b delta'")->required();
  stream->add_option("--tolerance", tolerance,
                     "fail when the relative error exceeds this (0: report only)");
  common(stream);

  std::vector<std::uint64_t> distances = {10, 100, 1000, 10000, 20000};
  auto* lsh = app.add_subcommand("lsh-collision", "GRW-LSH collision curve");
  lsh->add_option("--distances", distances, "L1 distances")->delimiter(',')->capture_default_str();
  common(lsh);
  o.format = "json";

  CLI11_PARSE(app, argc, argv);
  try {
    if (*lsh && !lsh->count("--format")) o.format = "csv";
    if (*bench && !bench->count("--format")) o.format = "csv";
    if (*cover) return cmd_cover(o, a, b);
    if (*bench) return cmd_bench(o, min_splits, queries);
    if (*verify) return cmd_verify(o);
    if (*stream) return cmd_stream(o, stream_file, tolerance);
    if (*lsh) return cmd_lsh(o, distances);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
