#include "lens/matching.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "lens/error.hpp"
#include "lens/text.hpp"

namespace lens {

SimilarityMatrix::SimilarityMatrix(Grid<double> scores, std::size_t sequence_length)
    : scores_(std::move(scores)), sequence_length_(sequence_length) {
  for (double v : scores_) {
    if (!std::isfinite(v)) {
      throw ValidationError("similarity scores must be finite");
    }
  }
}

std::string SimilarityMatrix::provenance() const {
  return is_raw() ? std::string("raw") : "sequence(" + std::to_string(sequence_length_) + ")";
}

std::vector<std::vector<double>> accumulate_window(
    std::span<const std::vector<std::uint32_t>> counts, std::size_t bins) {
  if (bins == 0) {
    throw ValidationError("accumulation needs at least one bin");
  }
  std::vector<std::vector<double>> out;
  if (counts.size() < bins) {
    return out;
  }
  const std::size_t width = counts.front().size();
  for (const auto& c : counts) {
    if (c.size() != width) {
      throw ValidationError("spike-count vectors differ in length");
    }
  }
  for (std::size_t k = 0; k + bins <= counts.size(); ++k) {
    std::vector<double> mean(width, 0.0);
    for (std::size_t b = 0; b < bins; ++b) {
      for (std::size_t n = 0; n < width; ++n) {
        mean[n] += counts[k + b][n];
      }
    }
    for (double& v : mean) v /= static_cast<double>(bins);
    out.push_back(std::move(mean));
  }
  return out;
}

SpikeAccumulator::SpikeAccumulator(std::size_t bins) : bins_(bins) {
  if (bins_ == 0) {
    throw ValidationError("accumulation needs at least one bin");
  }
}

std::optional<std::vector<double>> SpikeAccumulator::push(std::span<const std::uint32_t> counts) {
  history_.emplace_back(counts.begin(), counts.end());
  if (history_.size() > bins_) {
    history_.erase(history_.begin());
  }
  if (history_.size() < bins_) {
    return std::nullopt;
  }
  auto means = accumulate_window(history_, bins_);
  return std::move(means.front());
}

SimilarityMatrix sequence_convolve(const SimilarityMatrix& m, std::size_t length) {
  const std::size_t q = m.queries();
  const std::size_t r = m.references();
  if (length == 0) {
    throw ValidationError("sequence length must be at least 1");
  }
  if (length > std::min(q, r)) {
    throw ValidationError("sequence length " + std::to_string(length) + " exceeds " +
                          std::to_string(q) + "x" + std::to_string(r) + " matrix");
  }
  const auto half = static_cast<std::ptrdiff_t>(length / 2);
  const auto rows = static_cast<std::ptrdiff_t>(q);
  const auto cols = static_cast<std::ptrdiff_t>(r);
  Grid<double> out(q, r, 0.0);
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    for (std::ptrdiff_t j = 0; j < cols; ++j) {
      double sum = 0.0;
      std::size_t terms = 0;
      for (std::ptrdiff_t d = 0; d < static_cast<std::ptrdiff_t>(length); ++d) {
        const std::ptrdiff_t a = i + d - half;
        const std::ptrdiff_t b = j + d - half;
        if (a < 0 || b < 0 || a >= rows || b >= cols) continue;
        sum += m(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
        ++terms;
      }
      out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
          sum / static_cast<double>(terms);
    }
  }
  return SimilarityMatrix(std::move(out), length);
}

std::vector<std::size_t> rank_references(std::span<const double> row) {
  std::vector<std::size_t> order(row.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return row[a] > row[b]; });
  return order;
}

std::vector<MatchResult> match_places(const SimilarityMatrix& m) {
  if (m.queries() == 0 || m.references() == 0) {
    throw ValidationError("cannot match an empty similarity matrix");
  }
  std::vector<MatchResult> results;
  results.reserve(m.queries());
  for (std::size_t q = 0; q < m.queries(); ++q) {
    const auto row = m.scores().row(q);
    MatchResult res;
    res.query_index = q;
    res.ranking = rank_references(row);
    res.predicted_reference = res.ranking.front();
    res.score = row[res.predicted_reference];
    results.push_back(std::move(res));
  }
  return results;
}

void write_matrix(std::ostream& out, const SimilarityMatrix& m) {
  out << "# " << m.queries() << ',' << m.references() << ',' << m.provenance() << '\n';
  for (std::size_t q = 0; q < m.queries(); ++q) {
    for (std::size_t r = 0; r < m.references(); ++r) {
      if (r) out << ',';
      out << text::format_double(m(q, r));
    }
    out << '\n';
  }
}

SimilarityMatrix read_matrix(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0) {
    throw ParseError(1, "expected matrix header '# Q,R,provenance'");
  }
  auto head = text::split(std::string_view(line).substr(2), ',');
  std::uint64_t q = 0;
  std::uint64_t r = 0;
  if (head.size() != 3 || !text::parse_uint(head[0], q) || !text::parse_uint(head[1], r)) {
    throw ParseError(1, "malformed matrix header");
  }
  std::size_t length = 0;
  const std::string_view prov = head[2];
  if (prov != "raw") {
    std::uint64_t l = 0;
    if (prov.rfind("sequence(", 0) != 0 || prov.back() != ')' ||
        !text::parse_uint(prov.substr(9, prov.size() - 10), l) || l == 0) {
      throw ParseError(1, "unknown provenance '" + std::string(prov) + "'");
    }
    length = l;
  }
  Grid<double> scores(q, r);
  for (std::size_t i = 0; i < q; ++i) {
    if (!std::getline(in, line)) {
      throw ParseError(i + 2, "missing matrix row");
    }
    auto cells = text::split(line, ',');
    if (cells.size() != r) {
      throw ParseError(i + 2, "expected " + std::to_string(r) + " values");
    }
    for (std::size_t j = 0; j < r; ++j) {
      if (!text::parse_double(cells[j], scores(i, j))) {
        throw ParseError(i + 2, "malformed score '" + std::string(cells[j]) + "'");
      }
    }
  }
  return SimilarityMatrix(std::move(scores), length);
}

void save_matrix(const std::filesystem::path& path, const SimilarityMatrix& m) {
  std::ostringstream out;
  write_matrix(out, m);
  text::write_file(path, out.str());
}

SimilarityMatrix load_matrix(const std::filesystem::path& path) {
  std::istringstream in(text::read_file(path));
  try {
    return read_matrix(in);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void write_matches(std::ostream& out, std::span<const MatchResult> matches) {
  out << "query,predicted_reference,score\n";
  for (const auto& m : matches) {
    out << m.query_index << ',' << m.predicted_reference << ',' << text::format_double(m.score)
        << '\n';
  }
}

}  // namespace lens
