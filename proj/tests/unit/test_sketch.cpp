#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "rangesum/errors.hpp"
#include "rangesum/sketch.hpp"
#include "rangesum/stats.hpp"

namespace {

using namespace rangesum;

SketchConfig config(Norm p, std::size_t r, int L, std::uint64_t seed,
                    HashFamily h = HashFamily::fast_mixer()) {
  SketchConfig c;
  c.p = p;
  c.r = r;
  c.universe_log = L;
  c.seed = seed;
  c.hash = h;
  return c;
}

std::vector<RangeUpdate> random_stream(int L, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::uint64_t u = universe_size(L);
  std::uniform_real_distribution<double> delta(-5.0, 5.0);
  std::vector<RangeUpdate> s(count);
  for (auto& x : s) {
    x.a = rng() % (u + 1);
    x.b = rng() % (u + 1);
    if (x.a > x.b) std::swap(x.a, x.b);
    x.delta = delta(rng);
  }
  return s;
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::bit_cast<std::uint64_t>(a[i]) != std::bit_cast<std::uint64_t>(b[i])) return false;
  }
  return true;
}

TEST(Sketch, Validation) {
  EXPECT_THROW(LpSketch(config(Norm::L2, 0, 10, 1)), ArgumentError);
  EXPECT_THROW(LpSketch(config(Norm::L2, 4, 0, 1)), ArgumentError);
  EXPECT_EQ(parse_norm("l1"), Norm::L1);
  EXPECT_EQ(parse_norm("L2"), Norm::L2);
  EXPECT_THROW(parse_norm("l3"), ArgumentError);
}

TEST(Sketch, FreshEstimatesAreZero) {
  EXPECT_EQ(LpSketch(config(Norm::L2, 10, 10, 1)).estimate_l2(), 0.0);
  EXPECT_EQ(LpSketch(config(Norm::L1, 10, 10, 1)).estimate_l1(), 0.0);
}

TEST(Sketch, WrongNormRejected) {
  EXPECT_THROW(LpSketch(config(Norm::L2, 3, 10, 1)).estimate_l1(), ArgumentError);
  EXPECT_THROW(LpSketch(config(Norm::L1, 3, 10, 1)).estimate_l2(), ArgumentError);
}

TEST(Sketch, EmptyAndPointUpdates) {
  LpSketch s(config(Norm::L2, 5, 10, 2));
  s.update(7, 7, 3.0);
  for (double a : s.accumulators()) EXPECT_EQ(a, 0.0);
  s.update(9, 10, 2.5);
  for (std::size_t j = 0; j < s.size(); ++j) {
    EXPECT_EQ(s.accumulator(j), 2.5 * s.dst(j).singleton(9));
  }
  EXPECT_THROW(s.update(3, 2, 1.0), ArgumentError);
  EXPECT_THROW(s.update(0, 1, NAN), ArgumentError);
}

TEST(Sketch, AccumulatorsAreInnerProducts) {
  const int L = 8;
  const auto stream = random_stream(L, 40, 3);
  for (Norm p : {Norm::L1, Norm::L2}) {
    LpSketch s(config(p, 6, L, 4));
    ExactCounters exact(L);
    for (const auto& u : stream) {
      s.update(u.a, u.b, u.delta);
      exact.add(u.a, u.b, u.delta);
    }
    const auto sigma = exact.sigma();
    for (std::size_t j = 0; j < s.size(); ++j) {
      double expect = 0.0, mag = 0.0;
      for (std::uint64_t i = 0; i < sigma.size(); ++i) {
        const double x = s.dst(j).singleton(i);
        expect += sigma[i] * x;
        mag += std::fabs(sigma[i] * x);
      }
      EXPECT_NEAR(s.accumulator(j), expect, 1e-9 * mag);
    }
  }
}

TEST(Sketch, AdjacentUpdatesEqualOneUpdate) {
  for (Norm p : {Norm::L1, Norm::L2}) {
    LpSketch split(config(p, 8, 16, 5)), whole(config(p, 8, 16, 5));
    split.update(100, 3000, 1.25);
    split.update(3000, 50000, 1.25);
    whole.update(100, 50000, 1.25);
    for (std::size_t j = 0; j < split.size(); ++j) {
      EXPECT_NEAR(split.accumulator(j), whole.accumulator(j),
                  1e-9 * std::max(1.0, std::fabs(whole.accumulator(j))));
    }
  }
}

TEST(Sketch, BatchMatchesSequential) {
  const auto stream = random_stream(20, 300, 6);
  for (Norm p : {Norm::L1, Norm::L2}) {
    LpSketch seq(config(p, 4, 20, 7)), batch(config(p, 4, 20, 7));
    for (const auto& u : stream) seq.update(u.a, u.b, u.delta);
    batch.update_batch(stream);
    for (std::size_t j = 0; j < seq.size(); ++j) {
      double mag = 0.0;
      for (const auto& u : stream) mag += std::fabs(u.delta * seq.dst(j).range_sum(u.a, u.b));
      EXPECT_NEAR(batch.accumulator(j), seq.accumulator(j), 1e-9 * mag);
    }
  }
}

TEST(Sketch, NegatedUpdateRestoresBitwise) {
  for (Norm p : {Norm::L1, Norm::L2}) {
    LpSketch s(config(p, 16, 20, 8));
    for (const auto& u : random_stream(20, 50, 9)) s.update(u.a, u.b, u.delta);
    const auto before = s.accumulators();
    s.update(12345, 987654, 0.3);
    s.update(12345, 987654, -0.3);
    EXPECT_TRUE(bitwise_equal(s.accumulators(), before));
  }
}

TEST(Sketch, MergeOfHalvesEqualsFullReplay) {
  const auto stream = random_stream(20, 200, 10);
  for (Norm p : {Norm::L1, Norm::L2}) {
    const auto c = config(p, 12, 20, 11);
    LpSketch first(c), second(c), full(c);
    for (std::size_t i = 0; i < stream.size(); ++i) {
      (i < stream.size() / 2 ? first : second).update(stream[i].a, stream[i].b, stream[i].delta);
      full.update(stream[i].a, stream[i].b, stream[i].delta);
    }
    EXPECT_TRUE(bitwise_equal(LpSketch::merge(first, second).accumulators(), full.accumulators()));
    EXPECT_TRUE(bitwise_equal(LpSketch::merge(full, LpSketch(c)).accumulators(),
                              full.accumulators()));
    const auto m = LpSketch::merge(first, second).accumulators();
    for (std::size_t j = 0; j < m.size(); ++j) {
      EXPECT_NEAR(m[j], first.accumulator(j) + second.accumulator(j),
                  1e-15 * std::fabs(m[j]) + 1e-300);
    }
  }
}

TEST(Sketch, MergeRejectsMismatchedConfigs) {
  const LpSketch a(config(Norm::L2, 4, 10, 1));
  EXPECT_THROW(LpSketch::merge(a, LpSketch(config(Norm::L1, 4, 10, 1))), ArgumentError);
  EXPECT_THROW(LpSketch::merge(a, LpSketch(config(Norm::L2, 5, 10, 1))), ArgumentError);
  EXPECT_THROW(LpSketch::merge(a, LpSketch(config(Norm::L2, 4, 11, 1))), ArgumentError);
  EXPECT_THROW(LpSketch::merge(a, LpSketch(config(Norm::L2, 4, 10, 2))), ArgumentError);
  EXPECT_THROW(LpSketch::merge(a, LpSketch(config(Norm::L2, 4, 10, 1, HashFamily::poly(2)))),
               ArgumentError);
}

TEST(Sketch, StateRoundTrip) {
  LpSketch s(config(Norm::L1, 7, 30, 12, HashFamily::poly(4)));
  for (const auto& u : random_stream(30, 20, 13)) s.update(u.a, u.b, u.delta);
  const std::string text = s.export_state();
  EXPECT_EQ(text.rfind("rangesum-sketch 1\n", 0), 0u);
  const LpSketch back = LpSketch::import_state(text);
  EXPECT_EQ(back.config(), s.config());
  EXPECT_TRUE(bitwise_equal(back.accumulators(), s.accumulators()));
  EXPECT_EQ(back.export_state(), text);
}

TEST(Sketch, StateRejectsGarbage) {
  EXPECT_THROW(LpSketch::import_state(""), ArgumentError);
  EXPECT_THROW(LpSketch::import_state("rangesum-sketch 2\n"), ArgumentError);
  const std::string ok = LpSketch(config(Norm::L2, 2, 10, 1)).export_state();
  EXPECT_NO_THROW(LpSketch::import_state(ok));
  EXPECT_THROW(LpSketch::import_state(ok + "0\n"), ArgumentError);
  std::string missing = ok.substr(0, ok.size() - 2);
  EXPECT_THROW(LpSketch::import_state(missing), ArgumentError);
  std::string bad = ok;
  bad.replace(bad.find("r 2"), 3, "r x");
  EXPECT_THROW(LpSketch::import_state(bad), ArgumentError);
}

TEST(Sketch, MedianOfAbsoluteValues) {
  auto with = [](std::vector<double> acc) {
    std::ostringstream os;
    os << "rangesum-sketch 1\np L1\nr " << acc.size()
       << "\nuniverse_log 10\nseed 1\nhash fast\naccumulators\n";
    for (double a : acc) os << a << "\n";
    return LpSketch::import_state(os.str());
  };
  EXPECT_EQ(with({-7}).estimate_l1(), 7.0);
  EXPECT_EQ(with({3, -1, 10}).estimate_l1(), 3.0);
  EXPECT_EQ(with({3, -1, 10, -5}).estimate_l1(), 4.0);
}

TEST(Sketch, PointUpdateIsUnbiasedForL2) {
  const double delta = 3.0;
  std::vector<double> est;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    LpSketch s(config(Norm::L2, 100, 12, 1000 + seed));
    s.update(77, 78, delta);
    est.push_back(s.estimate_l2());
  }
  const double se = std::sqrt(stats::variance(est) / est.size());
  EXPECT_NEAR(stats::mean(est), delta * delta, 3.0 * se);
}

double stream_accuracy(Norm p, std::size_t r, int trials) {
  const int L = 12;
  const auto stream = random_stream(L, 30, 14);
  ExactCounters exact(L);
  exact.add(stream);
  const Norms n = oracle_norms(exact);
  int good = 0;
  for (int t = 0; t < trials; ++t) {
    LpSketch s(config(p, r, L, 5000 + static_cast<std::uint64_t>(t)));
    s.update_batch(stream);
    const double ratio = p == Norm::L2 ? s.estimate_l2() / (n.d2 * n.d2)
                                       : s.estimate_l1() / n.d1;
    good += ratio >= 0.8 && ratio <= 1.2;
  }
  return static_cast<double>(good) / trials;
}

TEST(Sketch, L2AccuracyWithFourHundredAccumulators) {
  EXPECT_GE(stream_accuracy(Norm::L2, 400, 100), 0.95);
}

TEST(Sketch, L1AccuracyWithOneThousandAccumulators) {
  EXPECT_GE(stream_accuracy(Norm::L1, 1000, 100), 0.95);
}

TEST(Sketch, AccumulatorStabilityLaw) {
  const int L = 10;
  const auto stream = random_stream(L, 25, 15);
  ExactCounters exact(L);
  exact.add(stream);
  const Norms n = oracle_norms(exact);
  for (Norm p : {Norm::L1, Norm::L2}) {
    std::vector<double> a;
    for (std::uint64_t seed = 0; seed < 2000; ++seed) {
      LpSketch s(config(p, 5, L, 90000 + seed));
      s.update_batch(stream);
      for (double v : s.accumulators()) a.push_back(v / (p == Norm::L1 ? n.d1 : n.d2));
    }
    const auto d = p == Norm::L1 ? Distribution::Cauchy : Distribution::Gaussian;
    EXPECT_LT(stats::ks_statistic(a, stats::theoretical_cdf(d, 1.0)),
              stats::ks_critical(0.01, a.size()));
  }
}

TEST(Oracle, SmallCases) {
  ExactCounters e(4);
  EXPECT_EQ(oracle_norms(e).d1, 0.0);
  EXPECT_EQ(oracle_norms(e).d2, 0.0);
  e.add(0, 4, 2.0);
  EXPECT_EQ(oracle_norms(e).d1, 8.0);
  EXPECT_EQ(oracle_norms(e).d2, 4.0);
  e.add(2, 6, -2.0);
  EXPECT_EQ(e.sigma(), (std::vector<double>{2, 2, 0, 0, -2, -2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}));
  EXPECT_EQ(oracle_norms(e).d1, 8.0);
}

TEST(Oracle, DenseCrossCheck) {
  const int L = 12;
  ExactCounters e(L);
  e.add(random_stream(L, 100, 16));
  const auto sigma = e.sigma();
  double d1 = 0.0, d2sq = 0.0;
  for (double s : sigma) {
    d1 += std::fabs(s);
    d2sq += s * s;
  }
  const Norms n = oracle_norms(e);
  EXPECT_NEAR(n.d1, d1, 1e-10 * d1);
  EXPECT_NEAR(n.d2 * n.d2, d2sq, 1e-10 * d2sq);
}

TEST(Oracle, Limits) {
  EXPECT_THROW(ExactCounters(25), ArgumentError);
  EXPECT_NO_THROW(ExactCounters(24));
  ExactCounters e(4);
  EXPECT_THROW(e.add(3, 17, 1.0), ArgumentError);
}

TEST(Segments, PiecewiseConstantWeights) {
  const std::vector<RangeUpdate> u = {{0, 8, 1.0}, {4, 12, 2.0}, {8, 8, 5.0}, {12, 16, 0.0},
                                      {2, 4, -1.0}};
  const auto segs = segments_from_updates(u, 4);
  ASSERT_EQ(segs.size(), 3u);
  EXPECT_EQ(segs[0].begin, 0u);
  EXPECT_EQ(segs[0].end, 2u);
  EXPECT_EQ(segs[0].weight, 1.0);
  EXPECT_EQ(segs[1].begin, 4u);
  EXPECT_EQ(segs[1].end, 8u);
  EXPECT_EQ(segs[1].weight, 3.0);
  EXPECT_EQ(segs[2].begin, 8u);
  EXPECT_EQ(segs[2].end, 12u);
  EXPECT_EQ(segs[2].weight, 2.0);
}

TEST(StreamFile, Parsing) {
  std::istringstream in("# header\n0 10 1.5\n\n  3 4 -2e-3   # trailing\n");
  const auto u = parse_stream(in);
  ASSERT_EQ(u.size(), 2u);
  EXPECT_EQ(u[1].a, 3u);
  EXPECT_EQ(u[1].b, 4u);
  EXPECT_EQ(u[1].delta, -2e-3);
  for (const char* bad : {"1 2\n", "1 2 3 4\n", "-1 2 3\n", "1 x 3\n", "1 2 3q\n"}) {
    std::istringstream b(bad);
    EXPECT_THROW(parse_stream(b), ArgumentError) << bad;
  }
}

TEST(Theorem, FourWiseMomentsWithPolynomialHashing) {
  // sigma alternates 1 and 3 over [0, 2): d2^2 = 1 + 9 = 10.
  const std::vector<RangeUpdate> stream = {{20, 21, 1.0}, {21, 22, 3.0}};
  ExactCounters e(6);
  e.add(stream);
  const double d2sq = oracle_norms(e).d2 * oracle_norms(e).d2;
  ASSERT_NEAR(d2sq, 10.0, 1e-12);
  const int trials = 20000;
  double m2 = 0.0, m4 = 0.0;
  for (int t = 0; t < trials; ++t) {
    LpSketch s(config(Norm::L2, 1, 6, 777000 + static_cast<std::uint64_t>(t),
                      HashFamily::poly(4)));
    s.update_batch(stream);
    const double a = s.accumulator(0);
    m2 += a * a;
    m4 += a * a * a * a;
  }
  EXPECT_NEAR(m2 / trials / d2sq, 1.0, 0.05);
  EXPECT_NEAR(m4 / trials / (3 * d2sq * d2sq), 1.0, 0.1);
}

}  // namespace
