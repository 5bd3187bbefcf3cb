#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>
#include <vector>

#include "rangesum/dst.hpp"
#include "rangesum/errors.hpp"

namespace {

using namespace rangesum;

constexpr Distribution kAll[] = {Distribution::Gaussian, Distribution::Cauchy,
                                 Distribution::RandomWalk};

Dst make(Distribution d, int L, std::uint64_t seed,
         HashFamily h = HashFamily::fast_mixer()) {
  DstConfig c;
  c.universe_log = L;
  c.distribution = d;
  c.master_seed = seed;
  c.hash = h;
  return Dst(c);
}

double tolerance(Distribution d, double scale) {
  return d == Distribution::RandomWalk ? 0.0 : 1e-9 * std::max(scale, 1e-300);
}

TEST(Config, Validation) {
  DstConfig c;
  c.universe_log = 0;
  EXPECT_THROW(Dst{c}, ArgumentError);
  c.universe_log = 64;
  EXPECT_THROW(Dst{c}, ArgumentError);
  c.universe_log = 63;
  EXPECT_NO_THROW(Dst{c});
  c.universe_log = 10;
  c.max_reject_attempts = 0;
  EXPECT_THROW(Dst{c}, ArgumentError);
  c.max_reject_attempts = 129;
  EXPECT_THROW(Dst{c}, ArgumentError);
  c.max_reject_attempts = 100;
  c.hash = HashFamily::poly(1);
  EXPECT_THROW(Dst{c}, ArgumentError);
  c.hash = HashFamily::poly(2);
  c.universe_log = 55;
  EXPECT_THROW(Dst{c}, ArgumentError);
  c.hash = HashFamily::fast_mixer();
  c.distribution = Distribution::RandomWalk;
  c.universe_log = RwTables::kMaxUniverseLog + 1;
  EXPECT_THROW(Dst{c}, ArgumentError);
}

TEST(Golden, SixteenLeafTrees) {
  // Level by level, root first. Generated once and frozen.
  const double gaussian[31] = {
      0x1.fa23e1e0bf8a3p+0,
      -0x1.4614a4899e8fp+0, 0x1.a01c43352f0cap+1,
      -0x1.dd4bd180ee23p-2, -0x1.9d836052c60c8p-1, 0x1.5de423437dd4dp+1, 0x1.08e07fc6c4df4p-1,
      -0x1.ef7360be3c62dp-2, 0x1.2278f3d4e3fdp-6, -0x1.9b48db3a340ecp-1, -0x1.1d428c48feep-8,
      0x1.729b093b3aaf8p+1, -0x1.4b6e5f7bcdabp-3, -0x1.ec58b8975694p-5, 0x1.27a60b503a488p-1,
      0x1.1ad714e59052cp-2, -0x1.85253ad1e65acp-1, 0x1.0724541db4b45p-1, -0x1.fc2118fe1b28dp-2,
      -0x1.7a542f0d65383p-3, -0x1.3cb3cf76dac0bp-1, -0x1.1704ddcb71ddap-8, -0x1.8f6b9f634098p-14,
      0x1.0397501e4e42p+1, 0x1.bc0ee473b1b6p-1, -0x1.d61d39b6fa221p-2, 0x1.306609f9134c9p-2,
      0x1.64b66aef168d7p-2, -0x1.a2418202015ffp-2, -0x1.5df212da256dcp-2, 0x1.d69f14bd4cff6p-1};
  const double cauchy[31] = {
      0x1.2745be4ee568cp+4,
      0x1.416f861762ed4p+4, -0x1.a29c7c87d848p+0,
      0x1.40f5a9bfe320cp+4, 0x1.e7715dff32p-6, -0x1.2f5e5a14354c4p+3, 0x1.f615950674868p+2,
      -0x1.1c01b05275a57p+0, 0x1.52b5c4c50a7b1p+4, -0x1.fef5e60d88f28p-1, 0x1.0718b87ec1414p+0,
      -0x1.95b36c411faap+2, -0x1.92128fce95ddp+1, 0x1.874362b75ff6bp+2, 0x1.bb48c93c523f4p+0,
      0x1.4541895527905p-2, -0x1.6d5212a7bf898p+0, 0x1.324ea2d292c14p+4, 0x1.03390f93bdce8p+1,
      -0x1.ad7e1f2a2e1cp-7, -0x1.f83fed90e03a1p-1, 0x1.f61d404c94631p+0, -0x1.de090f9ba643ap-1,
      0x1.3ca6d30985e4cp+0, -0x1.e4dd210381233p+2, -0x1.61e21a969f59ap+1, -0x1.8183a9bfb41bp-2,
      0x1.817566d317fdep+2, 0x1.737ef911fe34p-4, -0x1.da6ed62d7ebp-7, 0x1.befda6e8ad3cap+0};
  const double rw[31] = {2, 0, 2, 0, 0, 2, 0, 0, 0, 0, 0, 0, 2, 2, -2,
                         1, -1, -1, 1, 1, -1, 1, -1, -1, 1, 1, 1, 1, 1, -1, -1};
  const double* golden[3] = {gaussian, cauchy, rw};
  for (int k = 0; k < 3; ++k) {
    const Dst t = make(kAll[k], 4, 20240601);
    int pos = 0;
    for (int l = 0; l <= 4; ++l) {
      for (std::uint64_t i = 0; i < (1u << l); ++i, ++pos) {
        EXPECT_DOUBLE_EQ(t.node_value({l, i}), golden[k][pos])
            << to_string(kAll[k]) << " node (" << l << "," << i << ")";
      }
    }
  }
}

TEST(Determinism, EqualConfigsAgreeInAnyOrder) {
  for (auto d : kAll) {
    const Dst a = make(d, 20, 77), b = make(d, 20, 77);
    std::mt19937_64 rng(1);
    std::vector<std::pair<std::uint64_t, std::uint64_t>> q(200);
    for (auto& [x, y] : q) {
      x = rng() % (1u << 20);
      y = rng() % (1u << 20);
      if (x > y) std::swap(x, y);
    }
    std::vector<double> forward;
    for (auto [x, y] : q) forward.push_back(a.range_sum(x, y));
    for (std::size_t i = q.size(); i-- > 0;) {
      EXPECT_EQ(b.range_sum(q[i].first, q[i].second), forward[i]);
      EXPECT_EQ(a.range_sum(q[i].first, q[i].second), forward[i]);
    }
  }
}

TEST(Determinism, SeedsAndFamiliesMatter) {
  for (auto d : kAll) {
    EXPECT_NE(make(d, 20, 1).range_sum(0, 1000), make(d, 20, 2).range_sum(0, 1000));
  }
  EXPECT_NE(make(Distribution::Gaussian, 20, 1).range_sum(0, 1000),
            make(Distribution::Gaussian, 20, 1, HashFamily::poly(2)).range_sum(0, 1000));
}

TEST(Tree, ParentIdentity) {
  for (auto d : kAll) {
    for (std::uint64_t seed : {3u, 4u, 5u}) {
      const Dst t = make(d, 6, seed);
      for (int l = 0; l < 6; ++l) {
        for (std::uint64_t i = 0; i < (1u << l); ++i) {
          const double z = t.node_value({l, i});
          const double left = t.node_value({l + 1, 2 * i});
          const double right = t.node_value({l + 1, 2 * i + 1});
          EXPECT_EQ(right, z - left);
          const double scale = std::max({std::fabs(z), std::fabs(left), std::fabs(right)});
          EXPECT_LE(std::fabs(left + right - z),
                    d == Distribution::RandomWalk ? 0.0 : 4 * std::ldexp(scale, -52));
        }
      }
    }
  }
}

TEST(Tree, RandomWalkParityAndSupport) {
  const Dst t = make(Distribution::RandomWalk, 8, 9);
  for (int l = 0; l <= 8; ++l) {
    const auto width = static_cast<std::int64_t>(1) << (8 - l);
    for (std::uint64_t i = 0; i < (1u << l); ++i) {
      const double v = t.node_value({l, i});
      ASSERT_EQ(v, std::round(v));
      const auto iv = static_cast<std::int64_t>(v);
      EXPECT_EQ(((iv - width) % 2 + 2) % 2, 0);
      EXPECT_LE(std::abs(iv), width);
    }
  }
  for (std::uint64_t i = 0; i < 256; ++i) {
    const double x = t.singleton(i);
    EXPECT_TRUE(x == 1.0 || x == -1.0);
  }
}

TEST(RangeSum, EdgeCases) {
  for (auto d : kAll) {
    const Dst t = make(d, 10, 12);
    EXPECT_EQ(t.range_sum(5, 5), 0.0);
    EXPECT_EQ(t.range_sum(0, 1024), t.root_value());
    for (std::uint64_t i : {0u, 1u, 511u, 512u, 1023u}) {
      EXPECT_EQ(t.singleton(i), t.range_sum(i, i + 1));
    }
    EXPECT_THROW(t.range_sum(6, 5), ArgumentError);
    EXPECT_THROW(t.range_sum(0, 1025), ArgumentError);
    EXPECT_THROW(t.singleton(1024), ArgumentError);
    EXPECT_THROW(t.node_value({11, 0}), ArgumentError);
  }
}

TEST(RangeSum, MatchesLeafSummation) {
  for (auto d : kAll) {
    const Dst t = make(d, 10, 13);
    std::vector<double> leaves(1024);
    for (std::uint64_t i = 0; i < 1024; ++i) leaves[i] = t.singleton(i);
    std::mt19937_64 rng(2);
    for (int k = 0; k < 100; ++k) {
      std::uint64_t a = rng() % 1025, b = rng() % 1025;
      if (a > b) std::swap(a, b);
      double sum = 0.0, mag = 0.0;
      for (std::uint64_t i = a; i < b; ++i) {
        sum += leaves[i];
        mag += std::fabs(leaves[i]);
      }
      EXPECT_NEAR(t.range_sum(a, b), sum, tolerance(d, mag)) << a << "," << b;
    }
  }
}

TEST(RangeSum, EqualsSumOverCover) {
  for (auto d : kAll) {
    const Dst t = make(d, 16, 14);
    std::mt19937_64 rng(3);
    for (int k = 0; k < 200; ++k) {
      std::uint64_t a = rng() % 65537, b = rng() % 65537;
      if (a > b) std::swap(a, b);
      double sum = 0.0, mag = 0.0;
      for (const auto& p : dyadic_cover(a, b, 16)) {
        const double v = t.node_value(p);
        sum += v;
        mag += std::fabs(v);
      }
      EXPECT_NEAR(t.range_sum(a, b), sum, tolerance(d, mag));
    }
  }
}

TEST(RangeSum, Additivity) {
  for (auto d : kAll) {
    const Dst t = make(d, 16, 15);
    std::mt19937_64 rng(4);
    for (int k = 0; k < 1000; ++k) {
      std::uint64_t x[3] = {rng() % 65537, rng() % 65537, rng() % 65537};
      std::sort(x, x + 3);
      const double ac = t.range_sum(x[0], x[2]);
      const double ab = t.range_sum(x[0], x[1]);
      const double bc = t.range_sum(x[1], x[2]);
      const double scale = std::max({std::fabs(ac), std::fabs(ab), std::fabs(bc)});
      ASSERT_NEAR(ac, ab + bc, tolerance(d, scale));
    }
  }
}

TEST(RangeSum, SplitBound) {
  for (auto d : kAll) {
    for (int L : {1, 2, 5, 20}) {
      const Dst t = make(d, L, 16);
      const std::uint64_t u = universe_size(L);
      std::mt19937_64 rng(5);
      for (int k = 0; k < 2000; ++k) {
        std::uint64_t a = rng() % (u + 1), b = rng() % (u + 1);
        if (a > b) std::swap(a, b);
        std::uint64_t splits = 0;
        t.range_sum(a, b, splits);
        ASSERT_LE(splits, static_cast<std::uint64_t>(2 * L));
      }
      std::uint64_t splits = 0;
      t.range_sum(1, u - 1, splits);
      EXPECT_LE(splits, static_cast<std::uint64_t>(2 * L));
      t.range_sum(0, u, splits);
      EXPECT_EQ(splits, 0u);
    }
  }
}

TEST(InnerProduct, MatchesWeightedRangeSums) {
  for (auto d : kAll) {
    const Dst t = make(d, 14, 17);
    std::vector<Segment> segs = {{3, 90, 1.5}, {90, 91, -2.0}, {200, 8000, 0.25},
                                 {8000, 16384, -1.0}};
    double expect = 0.0, mag = 0.0;
    for (const auto& s : segs) {
      const double v = s.weight * t.range_sum(s.begin, s.end);
      expect += v;
      mag += std::fabs(v);
    }
    std::uint64_t splits = 0;
    EXPECT_NEAR(t.inner_product(segs, &splits), expect, 1e-9 * mag + 1e-12);
    EXPECT_GT(splits, 0u);
    EXPECT_EQ(t.inner_product({}), 0.0);
    std::vector<Segment> bad = {{10, 20, 1.0}, {15, 30, 1.0}};
    EXPECT_THROW(t.inner_product(bad), ArgumentError);
  }
}

TEST(Concurrency, SharedTreeAcrossThreads) {
  const Dst t = make(Distribution::Cauchy, 30, 18);
  std::vector<double> expect(64);
  for (std::size_t i = 0; i < expect.size(); ++i) expect[i] = t.range_sum(i * 1000, i * 7777777);
  std::vector<std::thread> pool;
  std::vector<int> bad(4, 0);
  for (int w = 0; w < 4; ++w) {
    pool.emplace_back([&, w] {
      for (int rep = 0; rep < 50; ++rep) {
        for (std::size_t i = 0; i < expect.size(); ++i) {
          if (t.range_sum(i * 1000, i * 7777777) != expect[i]) ++bad[static_cast<std::size_t>(w)];
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  for (int b : bad) EXPECT_EQ(b, 0);
}

}  // namespace
