#include <algorithm>
#include <numeric>
#include <sstream>

#include <gtest/gtest.h>

#include "lens/error.hpp"
#include "lens/eval.hpp"
#include "test_util.hpp"

namespace lens {
namespace {

SimilarityMatrix random_matrix(std::uint64_t seed, std::size_t q, std::size_t r) {
  return SimilarityMatrix(test::random_grid(seed, q, r));
}

SimilarityMatrix identity(std::size_t n) {
  Grid<double> g(n, n, 0.0);
  for (std::size_t k = 0; k < n; ++k) g(k, k) = 1.0;
  return SimilarityMatrix(g);
}

TEST(GroundTruth, DiagonalAndTolerance) {
  const auto gt = GroundTruth::diagonal(5, 2);
  EXPECT_EQ(gt.truth.size(), 5u);
  EXPECT_TRUE(gt.matches(3, 1));
  EXPECT_TRUE(gt.matches(3, 5));
  EXPECT_FALSE(gt.matches(3, 6));
  EXPECT_FALSE(gt.matches(0, 3));
  EXPECT_THROW(gt.reference_for(7), ValidationError);
}

TEST(GroundTruth, FileRoundTripAndErrors) {
  std::istringstream in("# header\n0,3\n\n1,4\n2,2\n");
  const auto gt = read_ground_truth(in, 1);
  EXPECT_EQ(gt.reference_for(1), 4u);
  EXPECT_EQ(gt.tolerance, 1u);
  std::ostringstream out;
  write_ground_truth(out, gt);
  EXPECT_EQ(out.str(), "0,3\n1,4\n2,2\n");

  std::istringstream dup("0,1\n0,2\n");
  try {
    read_ground_truth(dup, 0);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  std::istringstream bad("0;1\n");
  EXPECT_THROW(read_ground_truth(bad, 0), ParseError);
}

TEST(GroundTruth, CheckRejectsMissingOrOutOfRange) {
  GroundTruth gt;
  gt.truth = {{0, 0}, {1, 5}};
  EXPECT_THROW(gt.check(random_matrix(1, 2, 3)), ValidationError);
  EXPECT_THROW(GroundTruth::diagonal(1, 0).check(random_matrix(1, 2, 3)), ValidationError);
}

TEST(RecallAtN, PerfectDiagonal) {
  const std::vector<std::size_t> ns{1, 5, 10};
  for (double r : recall_at_n(identity(10), GroundTruth::diagonal(10, 0), ns)) EXPECT_EQ(r, 1.0);
}

TEST(RecallAtN, AntiDiagonalByEnumeration) {
  for (std::size_t n : {10u, 11u}) {
    Grid<double> g(n, n, 0.0);
    for (std::size_t q = 0; q < n; ++q) g(q, n - 1 - q) = 1.0;
    std::size_t hits = 0;
    for (std::size_t q = 0; q < n; ++q) hits += (n - 1 - q == q);
    const std::vector<std::size_t> ns{1};
    EXPECT_DOUBLE_EQ(recall_at_n(SimilarityMatrix(g), GroundTruth::diagonal(n, 0), ns)[0],
                     static_cast<double>(hits) / n);
  }
}

TEST(RecallAtN, FullRankingAlwaysHits) {
  const auto m = random_matrix(2, 12, 12);
  const std::vector<std::size_t> ns{12};
  EXPECT_EQ(recall_at_n(m, GroundTruth::diagonal(12, 0), ns)[0], 1.0);
}

TEST(RecallAtN, MonotoneInNAndTolerance) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto m = random_matrix(seed, 20, 20);
    const auto ns = default_recall_ns(20);
    std::vector<double> prev(ns.size(), 0.0);
    for (std::size_t tol = 0; tol <= 4; ++tol) {
      const auto r = recall_at_n(m, GroundTruth::diagonal(20, tol), ns);
      for (std::size_t k = 0; k < r.size(); ++k) {
        if (k > 0) {
          EXPECT_GE(r[k], r[k - 1]);
        }
        EXPECT_GE(r[k], prev[k]);
      }
      prev = r;
    }
  }
}

TEST(RecallAtN, RejectsBadN) {
  const auto m = random_matrix(3, 4, 4);
  const std::vector<std::size_t> zero{0}, big{5};
  EXPECT_THROW(recall_at_n(m, GroundTruth::diagonal(4, 0), zero), ValidationError);
  EXPECT_THROW(recall_at_n(m, GroundTruth::diagonal(4, 0), big), ValidationError);
}

TEST(PrCurve, PerfectDiagonal) {
  auto m = identity(10).scores();
  for (std::size_t k = 0; k < 10; ++k) m(k, k) = 1.0 + 0.1 * static_cast<double>(k);
  const auto c = pr_curve(SimilarityMatrix(m), GroundTruth::diagonal(10, 0));
  EXPECT_EQ(c.points.front(), (CurvePoint{0.0, 1.0}));
  EXPECT_EQ(c.thresholds.size(), 100u);
  EXPECT_EQ(c.points.size(), 101u);
  for (const auto& p : c.points) EXPECT_EQ(p.y, 1.0);
  EXPECT_EQ(c.points.back().x, 1.0);
  EXPECT_DOUBLE_EQ(auc(c.points), 1.0);
}

TEST(PrCurve, AllWrongGivesZeroPrecision) {
  Grid<double> g(6, 6, 0.0);
  for (std::size_t q = 0; q < 6; ++q) g(q, (q + 3) % 6) = 1.0 + 0.01 * static_cast<double>(q);
  const auto c = pr_curve(SimilarityMatrix(g), GroundTruth::diagonal(6, 0));
  for (std::size_t k = 1; k < c.points.size(); ++k) {
    EXPECT_EQ(c.points[k].y, 0.0);
    EXPECT_EQ(c.points[k].x, 0.0);
  }
}

TEST(PrCurve, EqualBestScoresGiveOneThreshold) {
  const auto c = pr_curve(identity(5), GroundTruth::diagonal(5, 0));
  EXPECT_EQ(c.thresholds.size(), 1u);
  EXPECT_EQ(c.points.back(), (CurvePoint{1.0, 1.0}));
}

TEST(PrCurve, MatchesExhaustiveSweep) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto m = random_matrix(seed, 20, 20);
    const auto gt = GroundTruth::diagonal(20, 1);
    const auto c = pr_curve(m, gt, 100);

    // Queries sorted by best score; a cutoff admits a prefix.
    std::vector<std::pair<double, bool>> best;
    for (std::size_t q = 0; q < 20; ++q) {
      std::size_t arg = 0;
      for (std::size_t r = 1; r < 20; ++r) {
        if (m(q, r) > m(q, arg)) arg = r;
      }
      best.emplace_back(m(q, arg), gt.matches(q, arg));
    }
    std::sort(best.begin(), best.end(), [](auto& a, auto& b) { return a.first > b.first; });
    const double hi = best.front().first;
    const double lo = best.back().first;
    ASSERT_EQ(c.thresholds.size(), 100u);
    for (std::size_t k = 0; k < 100; ++k) {
      const double t = k == 99 ? lo : hi - (hi - lo) * static_cast<double>(k) / 99.0;
      EXPECT_DOUBLE_EQ(c.thresholds[k], t);
      std::size_t admitted = 0, tp = 0;
      while (admitted < best.size() && best[admitted].first >= c.thresholds[k]) {
        tp += best[admitted].second;
        ++admitted;
      }
      const double precision = admitted ? static_cast<double>(tp) / admitted : 1.0;
      EXPECT_EQ(c.points[k + 1].y, precision);
      EXPECT_EQ(c.points[k + 1].x, static_cast<double>(tp) / 20.0);
    }
    // Every curve point is one of the exhaustive prefix operating points.
    std::vector<CurvePoint> prefixes{{0.0, 1.0}};
    std::size_t tp = 0;
    for (std::size_t n = 1; n <= best.size(); ++n) {
      tp += best[n - 1].second;
      prefixes.push_back({static_cast<double>(tp) / 20.0, static_cast<double>(tp) / n});
    }
    for (const auto& p : c.points) {
      EXPECT_NE(std::find(prefixes.begin(), prefixes.end(), p), prefixes.end());
    }
  }
}

TEST(PrCurve, StartsAtAnchorAndRecallNeverDecreases) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto c = pr_curve(random_matrix(seed, 15, 18), GroundTruth::diagonal(15, 2));
    EXPECT_EQ(c.points.front(), (CurvePoint{0.0, 1.0}));
    for (std::size_t k = 1; k < c.points.size(); ++k) {
      EXPECT_GE(c.points[k].x, c.points[k - 1].x);
    }
    for (std::size_t k = 1; k < c.thresholds.size(); ++k) {
      EXPECT_LT(c.thresholds[k], c.thresholds[k - 1]);
    }
  }
}

TEST(PrCurve, RejectsBadArguments) {
  EXPECT_THROW(pr_curve(identity(3), GroundTruth::diagonal(3, 0), 1), ValidationError);
}

TEST(Metrics, InvariantUnderReferencePermutation) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto m = random_matrix(seed, 12, 12);
    std::vector<std::size_t> perm(12);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    Rng rng(seed);
    rng.shuffle(perm);
    Grid<double> permuted(12, 12);
    GroundTruth gt;
    for (std::size_t q = 0; q < 12; ++q) {
      for (std::size_t r = 0; r < 12; ++r) permuted(q, perm[r]) = m(q, r);
      gt.truth[q] = perm[q];
    }
    const auto base = GroundTruth::diagonal(12, 0);
    const auto ns = default_recall_ns(12);
    EXPECT_EQ(recall_at_n(m, base, ns), recall_at_n(SimilarityMatrix(permuted), gt, ns));
    const auto a = pr_curve(m, base);
    const auto b = pr_curve(SimilarityMatrix(permuted), gt);
    EXPECT_EQ(a.points, b.points);
    EXPECT_EQ(a.thresholds, b.thresholds);
  }
}

TEST(Auc, ConstantCurves) {
  const std::vector<CurvePoint> one{{0, 1}, {0.3, 1}, {1, 1}};
  const std::vector<CurvePoint> half{{0, 0.5}, {1, 0.5}};
  EXPECT_DOUBLE_EQ(auc(one), 1.0);
  EXPECT_DOUBLE_EQ(auc(half), 0.5);
}

TEST(Auc, MatchesHandTrapezoid) {
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<CurvePoint> pts;
    double x = 0.0;
    for (int k = 0; k < 30; ++k) {
      pts.push_back({x, rng.uniform01()});
      x += rng.uniform01() / 30.0;
    }
    double area = 0.0;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
      area += 0.5 * (pts[k + 1].x - pts[k].x) * (pts[k + 1].y + pts[k].y);
    }
    EXPECT_NEAR(auc(pts), area, 1e-15);
  }
}

TEST(Auc, RejectsBadInput) {
  const std::vector<CurvePoint> single{{0, 1}};
  const std::vector<CurvePoint> backwards{{0.5, 1}, {0.2, 1}};
  EXPECT_THROW(auc(single), ValidationError);
  EXPECT_THROW(auc(backwards), ValidationError);
}

TEST(RecallAuc, NormalizesN) {
  const std::vector<std::size_t> ns{1, 2, 3};
  const std::vector<double> r{0.5, 1.0, 1.0};
  EXPECT_DOUBLE_EQ(recall_auc(ns, r), 0.5 * (0.75 + 1.0));
  EXPECT_EQ(default_recall_ns(4), (std::vector<std::size_t>{1, 2, 3, 4}));
  EXPECT_EQ(default_recall_ns(100).size(), 25u);
}

TEST(MetricCsv, Formats) {
  std::ostringstream r;
  const std::vector<std::size_t> ns{1, 2};
  const std::vector<double> v{0.5, 1};
  write_recall_csv(r, ns, v);
  EXPECT_EQ(r.str(), "N,value\n1,0.5\n2,1\n");

  const auto c = pr_curve(identity(3), GroundTruth::diagonal(3, 0));
  std::ostringstream p;
  write_pr_csv(p, c);
  EXPECT_EQ(p.str(), "threshold,precision,recall\ninf,1,0\n1,1,1\n");
}

}  // namespace
}  // namespace lens
