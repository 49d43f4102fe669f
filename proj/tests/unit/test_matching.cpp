#include <algorithm>
#include <limits>
#include <sstream>

#include <gtest/gtest.h>

#include "lens/error.hpp"
#include "lens/matching.hpp"
#include "test_util.hpp"

namespace lens {
namespace {

SimilarityMatrix random_matrix(std::uint64_t seed, std::size_t q, std::size_t r) {
  return SimilarityMatrix(test::random_grid(seed, q, r, -1.0, 1.0));
}

// Convolution with an L x L identity kernel written as an explicit triple loop.
Grid<double> brute_force_convolve(const Grid<double>& m, std::size_t L) {
  const long q = static_cast<long>(m.rows());
  const long r = static_cast<long>(m.cols());
  const long lo = -static_cast<long>(L / 2);
  const long hi = lo + static_cast<long>(L) - 1;
  Grid<double> out(m.rows(), m.cols());
  for (long i = 0; i < q; ++i) {
    for (long j = 0; j < r; ++j) {
      double s = 0.0;
      long n = 0;
      for (long k = lo; k <= hi; ++k) {
        if (i + k >= 0 && i + k < q && j + k >= 0 && j + k < r) {
          s += m(i + k, j + k);
          ++n;
        }
      }
      out(i, j) = s / static_cast<double>(n);
    }
  }
  return out;
}

TEST(SimilarityMatrix, ProvenanceAndValidation) {
  EXPECT_EQ(SimilarityMatrix(Grid<double>(2, 2)).provenance(), "raw");
  EXPECT_EQ(SimilarityMatrix(Grid<double>(2, 2), 4).provenance(), "sequence(4)");
  Grid<double> bad(1, 1, std::numeric_limits<double>::infinity());
  EXPECT_THROW(SimilarityMatrix{bad}, ValidationError);
}

TEST(AccumulateWindow, SingleBinIsIdentity) {
  const std::vector<std::vector<std::uint32_t>> counts{{1, 2}, {3, 4}, {5, 6}};
  const auto out = accumulate_window(counts, 1);
  ASSERT_EQ(out.size(), 3u);
  EXPECT_EQ(out[1], (std::vector<double>{3, 4}));
}

TEST(AccumulateWindow, IdenticalVectors) {
  const std::vector<std::vector<std::uint32_t>> counts(4, {7, 0, 3});
  const auto out = accumulate_window(counts);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0], (std::vector<double>{7, 0, 3}));
}

TEST(AccumulateWindow, ElementwiseMean) {
  Rng rng(5);
  std::vector<std::vector<std::uint32_t>> counts(9, std::vector<std::uint32_t>(6));
  for (auto& v : counts) {
    for (auto& c : v) c = static_cast<std::uint32_t>(rng.below(100));
  }
  const auto out = accumulate_window(counts, 4);
  ASSERT_EQ(out.size(), 6u);
  for (std::size_t k = 0; k < out.size(); ++k) {
    for (std::size_t n = 0; n < 6; ++n) {
      double s = 0;
      for (std::size_t b = 0; b < 4; ++b) s += counts[k + b][n];
      EXPECT_DOUBLE_EQ(out[k][n], s / 4.0);
    }
  }
  EXPECT_TRUE(accumulate_window(std::span(counts).first(3), 4).empty());
  EXPECT_THROW(accumulate_window(counts, 0), ValidationError);
}

TEST(SpikeAccumulator, MatchesBatchForm) {
  Rng rng(6);
  std::vector<std::vector<std::uint32_t>> counts(10, std::vector<std::uint32_t>(3));
  for (auto& v : counts) {
    for (auto& c : v) c = static_cast<std::uint32_t>(rng.below(50));
  }
  const auto batch = accumulate_window(counts, 3);
  SpikeAccumulator acc(3);
  std::vector<std::vector<double>> online;
  for (const auto& c : counts) {
    if (auto v = acc.push(c)) online.push_back(*v);
  }
  EXPECT_EQ(online, batch);
}

TEST(SequenceConvolve, LengthOneIsIdentity) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto m = random_matrix(seed, 7, 9);
    const auto out = sequence_convolve(m, 1);
    EXPECT_EQ(out.scores(), m.scores());
    EXPECT_EQ(out.provenance(), "sequence(1)");
  }
}

TEST(SequenceConvolve, IdentityMatrixLengthTwo) {
  Grid<double> eye(4, 4, 0.0);
  for (std::size_t k = 0; k < 4; ++k) eye(k, k) = 1.0;
  const auto out = sequence_convolve(SimilarityMatrix(eye), 2);
  EXPECT_EQ(out.scores(), brute_force_convolve(eye, 2));
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      if (i == j) {
        EXPECT_EQ(out(i, j), 1.0);
      } else {
        EXPECT_LT(out(i, j), 1.0);
      }
    }
  }
}

TEST(SequenceConvolve, MatchesBruteForce) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto m = random_matrix(seed, 10, 10);
    for (std::size_t L : {2u, 3u, 4u, 7u}) {
      EXPECT_EQ(sequence_convolve(m, L).scores(), brute_force_convolve(m.scores(), L));
    }
  }
  const auto rect = random_matrix(99, 6, 13);
  EXPECT_EQ(sequence_convolve(rect, 5).scores(), brute_force_convolve(rect.scores(), 5));
}

TEST(SequenceConvolve, CommutesWithPositiveAffineMaps) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto m = random_matrix(seed, 12, 12);
    Grid<double> mapped = m.scores();
    for (double& v : mapped) v = 3.0 * v + 0.25;
    const auto a = sequence_convolve(SimilarityMatrix(mapped), 4);
    const auto b = sequence_convolve(m, 4);
    for (std::size_t i = 0; i < 12; ++i) {
      for (std::size_t j = 0; j < 12; ++j) {
        EXPECT_NEAR(a(i, j), 3.0 * b(i, j) + 0.25, 1e-12);
      }
    }
    const auto pa = match_places(a);
    const auto pb = match_places(b);
    for (std::size_t q = 0; q < 12; ++q) {
      EXPECT_EQ(pa[q].predicted_reference, pb[q].predicted_reference);
    }
  }
}

TEST(SequenceConvolve, DiagonalWithMarginIsExact) {
  for (std::size_t L : {1u, 2u, 4u, 8u}) {
    Rng rng(L);
    Grid<double> g(16, 16);
    for (std::size_t i = 0; i < 16; ++i) {
      for (std::size_t j = 0; j < 16; ++j) {
        g(i, j) = i == j ? 1.0 + rng.uniform01() * 0.1 : rng.uniform01() * 0.9;
      }
    }
    const auto matches = match_places(sequence_convolve(SimilarityMatrix(g), L));
    for (std::size_t q = 0; q < 16; ++q) EXPECT_EQ(matches[q].predicted_reference, q);
  }
}

TEST(SequenceConvolve, RejectsBadLengths) {
  const auto m = random_matrix(1, 4, 6);
  EXPECT_THROW(sequence_convolve(m, 0), ValidationError);
  EXPECT_THROW(sequence_convolve(m, 5), ValidationError);
  EXPECT_NO_THROW(sequence_convolve(m, 4));
}

TEST(MatchPlaces, SingleColumn) {
  const auto matches = match_places(random_matrix(2, 5, 1));
  for (const auto& m : matches) EXPECT_EQ(m.predicted_reference, 0u);
}

TEST(MatchPlaces, TiesGoToLowestIndex) {
  Grid<double> g(1, 3);
  g(0, 0) = 0.1;
  g(0, 1) = 0.9;
  g(0, 2) = 0.9;
  const auto m = match_places(SimilarityMatrix(g));
  EXPECT_EQ(m[0].predicted_reference, 1u);
  EXPECT_EQ(m[0].score, 0.9);
  EXPECT_EQ(m[0].ranking, (std::vector<std::size_t>{1, 2, 0}));
}

TEST(MatchPlaces, MatchesLinearScanArgmax) {
  const auto m = random_matrix(3, 50, 50);
  const auto matches = match_places(m);
  ASSERT_EQ(matches.size(), 50u);
  for (std::size_t q = 0; q < 50; ++q) {
    std::size_t best = 0;
    for (std::size_t r = 1; r < 50; ++r) {
      if (m(q, r) > m(q, best)) best = r;
    }
    EXPECT_EQ(matches[q].query_index, q);
    EXPECT_EQ(matches[q].predicted_reference, best);
    EXPECT_EQ(matches[q].score, m(q, best));
    EXPECT_EQ(matches[q].ranking.front(), best);
    EXPECT_EQ(matches[q].ranking.size(), 50u);
  }
}

TEST(MatchPlaces, InvariantUnderRowOffsets) {
  Rng rng(4);
  Grid<double> g(20, 15);
  for (double& v : g) v = static_cast<double>(rng.below(10));
  Grid<double> shifted = g;
  for (std::size_t q = 0; q < 20; ++q) {
    const double c = static_cast<double>(rng.below(100)) - 50.0;
    for (double& v : shifted.row(q)) v += c;
  }
  const auto a = match_places(SimilarityMatrix(g));
  const auto b = match_places(SimilarityMatrix(shifted));
  for (std::size_t q = 0; q < 20; ++q) {
    EXPECT_EQ(a[q].predicted_reference, b[q].predicted_reference);
    EXPECT_EQ(a[q].ranking, b[q].ranking);
  }
}

TEST(MatchPlaces, RejectsEmptyMatrix) {
  EXPECT_THROW(match_places(SimilarityMatrix(Grid<double>(0, 0))), ValidationError);
}

TEST(MatrixFile, RoundTrip) {
  const auto m = sequence_convolve(random_matrix(5, 6, 8), 3);
  std::stringstream io;
  write_matrix(io, m);
  EXPECT_EQ(io.str().rfind("# 6,8,sequence(3)\n", 0), 0u);
  EXPECT_EQ(read_matrix(io), m);

  test::TempDir dir;
  save_matrix(dir / "m.csv", m);
  EXPECT_EQ(load_matrix(dir / "m.csv"), m);
}

TEST(MatrixFile, MalformedInput) {
  for (const char* bad : {"", "# 2,2\n", "# 1,2,raw\n1\n", "# 1,2,raw\n1,x\n",
                          "# 1,1,sequence(0)\n1\n", "# 1,1,blurred\n1\n", "# 2,1,raw\n1\n"}) {
    std::istringstream in(bad);
    EXPECT_THROW(read_matrix(in), ParseError) << bad;
  }
}

TEST(Matches, CsvFormat) {
  Grid<double> g(2, 2);
  g(0, 0) = 1;
  g(1, 0) = 0.5;
  g(1, 1) = 2;
  std::ostringstream out;
  write_matches(out, match_places(SimilarityMatrix(g)));
  EXPECT_EQ(out.str(), "query,predicted_reference,score\n0,0,1\n1,1,2\n");
}

}  // namespace
}  // namespace lens
