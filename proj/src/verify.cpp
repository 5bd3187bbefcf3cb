#include "rangesum/verify.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>

#include "rangesum/dst.hpp"
#include "rangesum/errors.hpp"
#include "rangesum/stats.hpp"
#include "rangesum/tree_walk.hpp"

namespace rangesum::verify {

nlohmann::json to_json(const Report& r) {
  return {{"test", r.test},
          {"params", r.params},
          {"statistic", r.statistic},
          {"critical", r.critical},
          {"pass", r.pass}};
}

nlohmann::json to_json(std::span<const Report> reports) {
  auto arr = nlohmann::json::array();
  for (const auto& r : reports) arr.push_back(to_json(r));
  return arr;
}

bool all_pass(std::span<const Report> reports) {
  return std::all_of(reports.begin(), reports.end(),
                     [](const Report& r) { return r.pass; });
}

// ---------------------------------------------------------------------------

std::size_t IdealDst::KeyHash::operator()(const Key& k) const noexcept {
  return static_cast<std::size_t>(
      mix64(k.index ^ (static_cast<std::uint64_t>(k.level) << 56) ^
            (static_cast<std::uint64_t>(k.attempt) << 48)));
}

IdealDst::IdealDst(int universe_log, Distribution d, std::uint64_t harness_seed,
                   unsigned max_reject_attempts)
    : universe_log_(universe_log),
      dist_(d),
      max_attempts_(max_reject_attempts),
      rng_(harness_seed) {
  DstConfig c;
  c.universe_log = universe_log;
  c.distribution = d;
  c.max_reject_attempts = max_reject_attempts;
  c.validate();
  if (d == Distribution::RandomWalk) rw_ = RwTables::shared(universe_log);
  root_ = root_sample(d, universe(), seed(0, 1, 0), rw_.get());
}

SplitSeed IdealDst::seed(int level, std::uint64_t index, unsigned attempt) {
  auto [it, fresh] = memo_.try_emplace(Key{level, index, attempt}, 0);
  if (fresh) it->second = rng_();
  return it->second;
}

double IdealDst::split_left(int level, std::uint64_t index, double value) {
  const int below = universe_log_ - level - 1;
  auto seeds = [&](unsigned t) { return seed(level, index, t); };
  switch (dist_) {
    case Distribution::Gaussian:
      return gaussian_split(value, std::uint64_t{1} << below, seeds(0));
    case Distribution::Cauchy:
      return cauchy_split(value, std::ldexp(1.0, below), seeds, max_attempts_);
    case Distribution::RandomWalk:
      return static_cast<double>(rw_->split(static_cast<std::int64_t>(value),
                                            std::uint64_t{1} << below, seeds,
                                            max_attempts_));
  }
  return 0.0;
}

double IdealDst::node_value(Prefix p) {
  p.validate(universe_log_);
  return detail::walk_node(universe_log_, root_, p,
                           [this](int l, std::uint64_t i, double v) {
                             return split_left(l, i, v);
                           });
}

double IdealDst::range_sum(std::uint64_t a, std::uint64_t b) {
  check_range(a, b, universe_log_);
  return detail::walk_range(
      universe_log_, root_, a, b,
      [this](int l, std::uint64_t i, double v) { return split_left(l, i, v); },
      nullptr);
}

double IdealDst::singleton(std::uint64_t i) {
  if (i >= universe()) throw ArgumentError("index outside universe");
  return node_value({universe_log_, i});
}

// ---------------------------------------------------------------------------

namespace {

double sample_convolution(Distribution d, std::uint64_t n, HarnessRng& rng) {
  switch (d) {
    case Distribution::Gaussian:
      return std::normal_distribution<double>(0.0, std::sqrt(static_cast<double>(n)))(rng);
    case Distribution::Cauchy:
      return std::cauchy_distribution<double>(0.0, static_cast<double>(n))(rng);
    case Distribution::RandomWalk: {
      const auto k = std::binomial_distribution<std::int64_t>(
          static_cast<std::int64_t>(n), 0.5)(rng);
      return static_cast<double>(2 * k - static_cast<std::int64_t>(n));
    }
  }
  return 0.0;
}

Report dependence(const std::string& test, Distribution d, std::span<const double> x,
                  std::span<const double> y, double alpha) {
  Report r;
  r.test = test;
  const bool rank = d == Distribution::Cauchy;
  r.params["method"] = rank ? "spearman" : "pearson";
  r.statistic = std::fabs(rank ? stats::spearman(x, y) : stats::pearson(x, y));
  r.critical = stats::normal_quantile(1.0 - alpha / 2.0) /
               std::sqrt(static_cast<double>(x.size() - 1));
  r.pass = r.statistic < r.critical;
  return r;
}

Report rw_joint(std::uint64_t n, std::span<const double> l, std::span<const double> rr,
                double alpha) {
  const auto ni = static_cast<std::int64_t>(n);
  std::map<std::pair<std::int64_t, std::int64_t>, std::size_t> cell;
  std::vector<double> probs;
  for (std::int64_t a = -ni; a <= ni; a += 2) {
    for (std::int64_t b = -ni; b <= ni; b += 2) {
      cell[{a, b}] = probs.size();
      probs.push_back(stats::rw_pmf(n, a) * stats::rw_pmf(n, b));
    }
  }
  std::vector<double> observed(probs.size(), 0.0);
  std::size_t stray = 0;
  for (std::size_t i = 0; i < l.size(); ++i) {
    auto it = cell.find({static_cast<std::int64_t>(l[i]), static_cast<std::int64_t>(rr[i])});
    if (it == cell.end()) {
      ++stray;
    } else {
      observed[it->second] += 1.0;
    }
  }
  const auto chi = stats::chi_square(observed, probs, alpha);
  Report r;
  r.test = "split.joint_pmf";
  r.params = {{"cells", chi.bins}, {"dof", chi.dof}, {"p_value", chi.p_value},
              {"off_support", stray}};
  r.statistic = stray ? INFINITY : chi.statistic;
  r.critical = chi.critical;
  r.pass = stray == 0 && chi.statistic <= chi.critical;
  return r;
}

}  // namespace

Report goodness_of_fit(const std::string& test, Distribution d, double n,
                       std::span<const double> samples, double alpha) {
  Report r;
  r.test = test;
  r.params = {{"distribution", to_string(d)}, {"n", n}, {"samples", samples.size()},
              {"alpha", alpha}};
  if (d == Distribution::RandomWalk) {
    const auto m = static_cast<std::uint64_t>(n);
    const auto w = static_cast<std::int64_t>(std::ceil(8.0 * std::sqrt(n))) + 2;
    const std::int64_t lo = std::max(-static_cast<std::int64_t>(m), -w);
    const std::int64_t hi = std::min(static_cast<std::int64_t>(m), w);
    const auto chi = stats::chi_square_integer(
        samples, lo, hi, [m](std::int64_t x) { return stats::rw_pmf(m, x); },
        stats::theoretical_cdf(d, n), alpha);
    r.params["method"] = "chi-square";
    r.params["dof"] = chi.dof;
    r.params["p_value"] = chi.p_value;
    r.statistic = chi.statistic;
    r.critical = chi.critical;
  } else {
    r.params["method"] = "ks";
    r.statistic = stats::ks_statistic(samples, stats::theoretical_cdf(d, n));
    r.critical = stats::ks_critical(alpha, samples.size());
    r.params["p_value"] = stats::ks_pvalue(r.statistic, samples.size());
  }
  r.pass = r.statistic <= r.critical;
  return r;
}

std::vector<Report> check_split_theorem(Distribution d, std::uint64_t n,
                                        std::size_t trials, std::uint64_t seed,
                                        double alpha) {
  if (n == 0 || !std::has_single_bit(n)) {
    throw ArgumentError("split check needs n a power of two");
  }
  if (trials < 2) throw ArgumentError("split check needs at least two trials");
  HarnessRng rng(seed);
  std::shared_ptr<const RwTables> rw;
  if (d == Distribution::RandomWalk) rw = RwTables::shared(std::countr_zero(n) + 1);

  std::vector<double> left(trials), right(trials);
  std::vector<SplitSeed> attempt_seeds;
  for (std::size_t t = 0; t < trials; ++t) {
    const double z = sample_convolution(d, 2 * n, rng);
    attempt_seeds.clear();
    auto seeds = [&](unsigned a) {
      while (attempt_seeds.size() <= a) attempt_seeds.push_back(rng());
      return attempt_seeds[a];
    };
    double l = 0.0;
    switch (d) {
      case Distribution::Gaussian:
        l = gaussian_split(z, n, seeds(0));
        break;
      case Distribution::Cauchy:
        l = cauchy_split(z, static_cast<double>(n), seeds, kAttemptSlots);
        break;
      case Distribution::RandomWalk:
        l = static_cast<double>(
            rw->split(static_cast<std::int64_t>(z), n, seeds, kAttemptSlots));
        break;
    }
    left[t] = l;
    right[t] = z - l;
  }

  const bool joint = d == Distribution::RandomWalk && n <= 4;
  const double a = alpha / (joint ? 4.0 : 3.0);
  const auto nn = static_cast<double>(n);
  std::vector<Report> out;
  out.push_back(goodness_of_fit("split.left_marginal", d, nn, left, a));
  out.push_back(goodness_of_fit("split.right_marginal", d, nn, right, a));
  out.push_back(dependence("split.dependence", d, left, right, a));
  if (joint) out.push_back(rw_joint(n, left, right, a));
  for (auto& r : out) {
    r.params["distribution"] = to_string(d);
    r.params["n"] = n;
    r.params["trials"] = trials;
    r.params["seed"] = seed;
  }
  return out;
}

Report check_marginal_theorem(Distribution d, int universe_log, std::uint64_t a,
                              std::uint64_t b, HashFamily hash, std::size_t trials,
                              std::uint64_t seed, double alpha) {
  check_range(a, b, universe_log);
  if (a == b) throw ArgumentError("marginal check needs a nonempty range");
  HarnessRng rng(seed);
  std::vector<double> samples(trials);
  for (auto& s : samples) {
    DstConfig c;
    c.universe_log = universe_log;
    c.distribution = d;
    c.master_seed = rng();
    c.hash = hash;
    s = Dst(c).range_sum(a, b);
  }
  Report r = goodness_of_fit("marginal", d, static_cast<double>(b - a), samples, alpha);
  r.params["universe_log"] = universe_log;
  r.params["a"] = a;
  r.params["b"] = b;
  r.params["hash"] = hash.name();
  r.params["seed"] = seed;
  return r;
}

Report check_kwise_theorem(int k, Distribution d, int universe_log, int level,
                           HashFamily hash, std::size_t trials, std::uint64_t seed) {
  if (level < 0 || level > universe_log) throw ArgumentError("level outside tree");
  const std::uint64_t count = std::uint64_t{1} << level;
  if (k < 2 || static_cast<std::uint64_t>(k) > count) {
    throw ArgumentError("k must be in [2, 2^level]");
  }
  if (trials < 2) throw ArgumentError("k-wise check needs at least two trials");
  std::vector<std::uint64_t> nodes(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) {
    nodes[static_cast<std::size_t>(j)] = static_cast<std::uint64_t>(j) * count /
                                         static_cast<std::uint64_t>(k);
  }
  const double width = std::ldexp(1.0, universe_log - level);

  // Per-trial statistic and its expectation under independence.
  std::string moment;
  double expected = 0.0;
  std::function<double(const std::vector<double>&)> stat;
  if (d == Distribution::Cauchy || (d == Distribution::RandomWalk && width == 1.0)) {
    moment = d == Distribution::Cauchy ? "Pr[all > 0]" : "Pr[all = 1]";
    expected = std::ldexp(1.0, -k);
    stat = [](const std::vector<double>& s) {
      return std::all_of(s.begin(), s.end(), [](double v) { return v > 0.0; }) ? 1.0 : 0.0;
    };
  } else if (k == 2) {
    moment = "E[S1 S2]";
    expected = 0.0;
    stat = [](const std::vector<double>& s) { return s[0] * s[1]; };
  } else {
    moment = "E[prod S^2]";
    expected = std::pow(width, k);
    stat = [](const std::vector<double>& s) {
      double p = 1.0;
      for (double v : s) p *= v * v;
      return p;
    };
  }

  HarnessRng rng(seed);
  std::vector<double> values(trials);
  std::vector<double> s(static_cast<std::size_t>(k));
  for (auto& v : values) {
    DstConfig c;
    c.universe_log = universe_log;
    c.distribution = d;
    c.master_seed = rng();
    c.hash = hash;
    const Dst tree(c);
    for (std::size_t j = 0; j < s.size(); ++j) s[j] = tree.node_value({level, nodes[j]});
    v = stat(s);
  }
  const double m = stats::mean(values);
  const double se = std::sqrt(stats::variance(values) / static_cast<double>(trials));
  Report r;
  r.test = "kwise";
  r.params = {{"k", k},
              {"distribution", to_string(d)},
              {"universe_log", universe_log},
              {"level", level},
              {"hash", hash.name()},
              {"trials", trials},
              {"seed", seed},
              {"moment", moment},
              {"estimate", m},
              {"expected", expected},
              {"stderr", se}};
  r.statistic = se > 0.0 ? std::fabs(m - expected) / se : (m == expected ? 0.0 : INFINITY);
  r.critical = 4.0;
  r.pass = r.statistic <= r.critical;
  return r;
}

std::vector<Report> check_ideal_equivalence(int universe_log, Distribution d,
                                            std::size_t trials, std::uint64_t seed,
                                            double alpha) {
  if (universe_log < 2 || universe_log > 8) {
    throw ArgumentError("ideal equivalence runs on 4 <= U <= 256");
  }
  const std::uint64_t u = universe_size(universe_log);
  const std::uint64_t i = u / 3, j = u - 1 - u / 5;
  const std::uint64_t a = u / 4, b = u / 4 + u / 2 - 1;
  const double a4 = alpha / 4.0;
  std::vector<Report> out;
  for (const bool ideal : {true, false}) {
    HarnessRng rng(seed);
    std::vector<double> xi(trials), xj(trials), range(trials);
    for (std::size_t t = 0; t < trials; ++t) {
      if (ideal) {
        IdealDst tree(universe_log, d, rng());
        xi[t] = tree.singleton(i);
        xj[t] = tree.singleton(j);
        range[t] = tree.range_sum(a, b);
      } else {
        DstConfig c;
        c.universe_log = universe_log;
        c.distribution = d;
        c.master_seed = rng();
        const Dst tree(c);
        xi[t] = tree.singleton(i);
        xj[t] = tree.singleton(j);
        range[t] = tree.range_sum(a, b);
      }
    }
    const std::string tag = ideal ? "ideal." : "hashed.";
    std::vector<Report> batch;
    batch.push_back(goodness_of_fit(tag + "singleton_i", d, 1.0, xi, a4));
    batch.push_back(goodness_of_fit(tag + "singleton_j", d, 1.0, xj, a4));
    batch.push_back(goodness_of_fit(tag + "range", d, static_cast<double>(b - a), range, a4));
    batch.push_back(dependence(tag + "pair_dependence", d, xi, xj, a4));
    for (auto& r : batch) {
      r.params["universe_log"] = universe_log;
      r.params["i"] = i;
      r.params["j"] = j;
      r.params["range"] = {a, b};
      r.params["distribution"] = to_string(d);
      r.params["seed"] = seed;
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::vector<Report> with_retry(
    const std::function<std::vector<Report>(std::uint64_t)>& run, std::uint64_t seed) {
  auto first = run(seed);
  if (all_pass(first)) return first;
  const auto second = run(mix64(seed ^ 0x5eed5eed5eed5eedULL));
  if (second.size() != first.size()) return first;
  for (std::size_t i = 0; i < first.size(); ++i) {
    first[i].params["retry_statistic"] = second[i].statistic;
    first[i].params["retry_pass"] = second[i].pass;
    first[i].pass = first[i].pass || second[i].pass;
  }
  return first;
}

}  // namespace rangesum::verify
