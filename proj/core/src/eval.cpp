#include "lens/eval.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "lens/error.hpp"
#include "lens/text.hpp"

namespace lens {

GroundTruth GroundTruth::diagonal(std::size_t queries, std::size_t tolerance) {
  GroundTruth gt;
  gt.tolerance = tolerance;
  for (std::size_t q = 0; q < queries; ++q) {
    gt.truth.emplace(q, q);
  }
  return gt;
}

std::size_t GroundTruth::reference_for(std::size_t query) const {
  auto it = truth.find(query);
  if (it == truth.end()) {
    throw ValidationError("query " + std::to_string(query) + " missing from ground truth");
  }
  return it->second;
}

bool GroundTruth::matches(std::size_t query, std::size_t reference) const {
  const std::size_t actual = reference_for(query);
  const std::size_t diff = actual > reference ? actual - reference : reference - actual;
  return diff <= tolerance;
}

void GroundTruth::check(const SimilarityMatrix& m) const {
  for (std::size_t q = 0; q < m.queries(); ++q) {
    if (reference_for(q) >= m.references()) {
      throw ValidationError("ground truth for query " + std::to_string(q) +
                            " names reference outside the matrix");
    }
  }
}

GroundTruth read_ground_truth(std::istream& in, std::size_t tolerance) {
  GroundTruth gt;
  gt.tolerance = tolerance;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = text::trim(line);
    if (body.empty() || body.front() == '#') continue;
    auto parts = text::split(body, ',');
    std::uint64_t q = 0;
    std::uint64_t r = 0;
    if (parts.size() != 2 || !text::parse_uint(parts[0], q) || !text::parse_uint(parts[1], r)) {
      throw ParseError(line_no, "expected 'query_index,reference_index'");
    }
    if (!gt.truth.emplace(q, r).second) {
      throw ParseError(line_no, "duplicate ground truth for query " + std::to_string(q));
    }
  }
  return gt;
}

GroundTruth load_ground_truth(const std::filesystem::path& path, std::size_t tolerance) {
  std::istringstream in(text::read_file(path));
  try {
    return read_ground_truth(in, tolerance);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void write_ground_truth(std::ostream& out, const GroundTruth& gt) {
  for (const auto& [q, r] : gt.truth) {
    out << q << ',' << r << '\n';
  }
}

std::vector<double> recall_at_n(const SimilarityMatrix& m, const GroundTruth& gt,
                                std::span<const std::size_t> ns) {
  for (std::size_t n : ns) {
    if (n == 0 || n > m.references()) {
      throw ValidationError("Recall@N needs 1 <= N <= " + std::to_string(m.references()));
    }
  }
  gt.check(m);
  std::vector<std::size_t> hits(ns.size(), 0);
  for (std::size_t q = 0; q < m.queries(); ++q) {
    const auto ranking = rank_references(m.scores().row(q));
    // Rank of the first in-tolerance reference decides every N at once.
    std::size_t first_hit = ranking.size();
    for (std::size_t k = 0; k < ranking.size(); ++k) {
      if (gt.matches(q, ranking[k])) {
        first_hit = k;
        break;
      }
    }
    for (std::size_t a = 0; a < ns.size(); ++a) {
      hits[a] += first_hit < ns[a] ? 1 : 0;
    }
  }
  std::vector<double> recall(ns.size(), 0.0);
  if (m.queries() == 0) return recall;
  for (std::size_t a = 0; a < ns.size(); ++a) {
    recall[a] = static_cast<double>(hits[a]) / static_cast<double>(m.queries());
  }
  return recall;
}

PRCurve pr_curve(const SimilarityMatrix& m, const GroundTruth& gt, std::size_t num_thresholds) {
  if (num_thresholds < 2) {
    throw ValidationError("PR curve needs at least two thresholds");
  }
  if (m.queries() == 0 || m.references() == 0) {
    throw ValidationError("PR curve needs a non-empty matrix");
  }
  gt.check(m);
  const auto matches = match_places(m);
  std::vector<double> best(matches.size());
  std::vector<bool> correct(matches.size());
  for (std::size_t q = 0; q < matches.size(); ++q) {
    best[q] = matches[q].score;
    correct[q] = gt.matches(q, matches[q].predicted_reference);
  }
  const double hi = *std::max_element(best.begin(), best.end());
  const double lo = *std::min_element(best.begin(), best.end());
  const double positives = static_cast<double>(gt.truth.size());

  PRCurve curve;
  curve.points.push_back({0.0, 1.0});
  const std::size_t steps = hi == lo ? 1 : num_thresholds;
  for (std::size_t k = 0; k < steps; ++k) {
    double threshold = steps == 1 ? hi
                                  : hi - (hi - lo) * static_cast<double>(k) /
                                             static_cast<double>(steps - 1);
    if (k + 1 == steps) threshold = lo;
    std::size_t tp = 0;
    std::size_t fp = 0;
    for (std::size_t q = 0; q < best.size(); ++q) {
      if (best[q] >= threshold) {
        (correct[q] ? tp : fp) += 1;
      }
    }
    const double precision = tp + fp ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 1.0;
    const double recall = positives > 0 ? static_cast<double>(tp) / positives : 0.0;
    curve.thresholds.push_back(threshold);
    curve.points.push_back({recall, precision});
  }
  return curve;
}

double auc(std::span<const CurvePoint> points) {
  if (points.size() < 2) {
    throw ValidationError("AUC needs at least two points");
  }
  double area = 0.0;
  for (std::size_t k = 1; k < points.size(); ++k) {
    const double dx = points[k].x - points[k - 1].x;
    if (dx < 0.0) {
      throw ValidationError("AUC points must be sorted by x");
    }
    area += dx * (points[k].y + points[k - 1].y) / 2.0;
  }
  return area;
}

double recall_auc(std::span<const std::size_t> ns, std::span<const double> recalls) {
  if (ns.size() != recalls.size() || ns.empty()) {
    throw ValidationError("Recall@N AUC needs matching, non-empty N and recall lists");
  }
  if (ns.size() == 1) {
    return recalls.front();
  }
  const double first = static_cast<double>(ns.front());
  const double span = static_cast<double>(ns.back()) - first;
  std::vector<CurvePoint> pts;
  for (std::size_t k = 0; k < ns.size(); ++k) {
    pts.push_back({(static_cast<double>(ns[k]) - first) / span, recalls[k]});
  }
  return auc(pts);
}

std::vector<std::size_t> default_recall_ns(std::size_t references, std::size_t cap) {
  std::vector<std::size_t> ns;
  for (std::size_t n = 1; n <= std::min(references, cap); ++n) ns.push_back(n);
  return ns;
}

void write_recall_csv(std::ostream& out, std::span<const std::size_t> ns,
                      std::span<const double> recalls) {
  out << "N,value\n";
  for (std::size_t k = 0; k < ns.size(); ++k) {
    out << ns[k] << ',' << text::format_double(recalls[k]) << '\n';
  }
}

void write_pr_csv(std::ostream& out, const PRCurve& curve) {
  out << "threshold,precision,recall\n";
  out << "inf," << text::format_double(curve.points[0].y) << ','
      << text::format_double(curve.points[0].x) << '\n';
  for (std::size_t k = 0; k < curve.thresholds.size(); ++k) {
    const auto& p = curve.points[k + 1];
    out << text::format_double(curve.thresholds[k]) << ',' << text::format_double(p.y) << ','
        << text::format_double(p.x) << '\n';
  }
}

}  // namespace lens
