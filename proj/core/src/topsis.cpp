#include "greenpod/topsis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "greenpod/error.hpp"

namespace greenpod::topsis {

namespace {

void check_weight(const CriterionSpec& c) {
  if (!std::isfinite(c.weight) || c.weight < 0.0) {
    throw Error(ErrorCode::kInvalidWeights, "criterion '" + c.name + "' has invalid weight");
  }
}

double weight_sum(std::span<const CriterionSpec> criteria) {
  double sum = 0.0;
  for (const auto& c : criteria) {
    check_weight(c);
    sum += c.weight;
  }
  return sum;
}

void require_unit_sum(std::span<const CriterionSpec> criteria) {
  const double sum = weight_sum(criteria);
  if (std::abs(sum - 1.0) > kWeightTolerance) {
    throw Error(ErrorCode::kInvalidWeights,
                "criterion weights sum to " + std::to_string(sum) + ", expected 1");
  }
}

double euclidean(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double d = a[j] - b[j];
    acc += d * d;
  }
  return std::sqrt(acc);
}

}  // namespace

CriteriaSet CriteriaSet::create(std::vector<CriterionSpec> criteria, bool renormalize) {
  if (criteria.empty()) {
    throw Error(ErrorCode::kInvalidWeights, "criteria set is empty");
  }
  if (renormalize) {
    const double sum = weight_sum(criteria);
    if (!(sum > 0.0)) {
      throw Error(ErrorCode::kInvalidWeights, "cannot renormalize weights summing to zero");
    }
    for (auto& c : criteria) c.weight /= sum;
  }
  require_unit_sum(criteria);
  return CriteriaSet(std::move(criteria));
}

DecisionMatrix::DecisionMatrix(std::vector<std::string> alternatives,
                               std::vector<CriterionSpec> criteria, std::vector<double> values)
    : alternatives_(std::move(alternatives)),
      criteria_(std::move(criteria)),
      values_(std::move(values)) {
  if (alternatives_.empty()) {
    throw Error(ErrorCode::kInvalidMatrix, "decision matrix needs at least one alternative");
  }
  if (criteria_.empty()) {
    throw Error(ErrorCode::kInvalidMatrix, "decision matrix needs at least one criterion");
  }
  if (values_.size() != alternatives_.size() * criteria_.size()) {
    throw Error(ErrorCode::kInvalidMatrix, "decision matrix is not rectangular");
  }
  for (std::size_t k = 0; k < values_.size(); ++k) {
    const double v = values_[k];
    if (!std::isfinite(v) || v < 0.0) {
      const std::size_t r = k / criteria_.size();
      const std::size_t c = k % criteria_.size();
      throw Error(ErrorCode::kInvalidMatrix, "value for '" + alternatives_[r] + "' / '" +
                                                 criteria_[c].name +
                                                 "' must be finite and nonnegative");
    }
  }
}

DecisionMatrix DecisionMatrix::with_scaled_column(std::size_t col, double factor) const {
  if (col >= cols() || !std::isfinite(factor) || factor <= 0.0) {
    throw Error(ErrorCode::kInvalidMatrix, "column scale must target a valid column with factor > 0");
  }
  std::vector<double> scaled = values_;
  for (std::size_t r = 0; r < rows(); ++r) scaled[r * cols() + col] *= factor;
  return DecisionMatrix(alternatives_, criteria_, std::move(scaled));
}

std::vector<double> RankResult::closeness() const {
  std::vector<double> out;
  out.reserve(scores.size());
  for (const auto& s : scores) out.push_back(s.closeness);
  return out;
}

std::vector<std::string> RankResult::ranked_ids() const {
  std::vector<std::string> out;
  out.reserve(ranking.size());
  for (auto i : ranking) out.push_back(scores[i].id);
  return out;
}

DecisionMatrix normalize(const DecisionMatrix& matrix) {
  const std::size_t m = matrix.rows();
  const std::size_t n = matrix.cols();
  std::vector<double> out(m * n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double sq = 0.0;
    for (std::size_t i = 0; i < m; ++i) sq += matrix.at(i, j) * matrix.at(i, j);
    if (sq == 0.0) continue;  // all-zero column contributes nothing
    const double norm = std::sqrt(sq);
    for (std::size_t i = 0; i < m; ++i) {
      // min() guards the x/||x|| <= 1 bound against rounding.
      out[i * n + j] = std::min(1.0, matrix.at(i, j) / norm);
    }
  }
  return DecisionMatrix(matrix.alternatives(), matrix.criteria(), std::move(out));
}

RankResult rank(const DecisionMatrix& matrix) {
  require_unit_sum(matrix.criteria());
  const DecisionMatrix normalized = normalize(matrix);
  const std::size_t m = matrix.rows();
  const std::size_t n = matrix.cols();
  const auto& criteria = matrix.criteria();

  RankResult result;
  result.scores.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    auto& s = result.scores[i];
    s.id = matrix.alternatives()[i];
    s.weighted.resize(n);
    for (std::size_t j = 0; j < n; ++j) s.weighted[j] = normalized.at(i, j) * criteria[j].weight;
  }

  result.ideal.resize(n);
  result.anti_ideal.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    double lo = result.scores[0].weighted[j];
    double hi = lo;
    for (std::size_t i = 1; i < m; ++i) {
      lo = std::min(lo, result.scores[i].weighted[j]);
      hi = std::max(hi, result.scores[i].weighted[j]);
    }
    const bool benefit = criteria[j].direction == Direction::kBenefit;
    result.ideal[j] = benefit ? hi : lo;
    result.anti_ideal[j] = benefit ? lo : hi;
  }

  for (auto& s : result.scores) {
    s.distance_to_ideal = euclidean(s.weighted, result.ideal);
    s.distance_to_anti_ideal = euclidean(s.weighted, result.anti_ideal);
    const double denom = s.distance_to_ideal + s.distance_to_anti_ideal;
    s.closeness = denom > 0.0 ? s.distance_to_anti_ideal / denom : 1.0;
  }

  result.ranking.resize(m);
  std::iota(result.ranking.begin(), result.ranking.end(), std::size_t{0});
  std::stable_sort(result.ranking.begin(), result.ranking.end(),
                   [&](std::size_t a, std::size_t b) {
                     return result.scores[a].closeness > result.scores[b].closeness;
                   });
  return result;
}

bool rank_order_invariance_check(const DecisionMatrix& matrix, double scale, std::size_t col) {
  const auto base = rank(matrix).ranking;
  const auto scaled = rank(matrix.with_scaled_column(col, scale)).ranking;
  return base == scaled;
}

}  // namespace greenpod::topsis
