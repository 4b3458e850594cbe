#pragma once

// Domain-agnostic TOPSIS ranking over a decision matrix.
//
// Columns are vector-normalized (x_ij / ||x_.j||), scaled by their weight,
// and each row is scored by its relative closeness to the ideal point:
//   C_i = D-_i / (D+_i + D-_i).
// All functions are pure and safe to call concurrently.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace greenpod::topsis {

enum class Direction { kBenefit, kCost };

struct CriterionSpec {
  std::string name;
  Direction direction = Direction::kBenefit;
  double weight = 0.0;
};

/// Tolerance on |sum(weights) - 1|.
inline constexpr double kWeightTolerance = 1e-9;

/// An ordered set of criteria whose weights form a probability vector.
class CriteriaSet {
 public:
  /// Throws Error(kInvalidWeights) on negative or non-finite weights, or when
  /// the weights do not sum to 1. With `renormalize` the weights are divided
  /// by their sum instead (the sum must still be positive).
  static CriteriaSet create(std::vector<CriterionSpec> criteria, bool renormalize = false);

  std::span<const CriterionSpec> specs() const { return specs_; }
  std::size_t size() const { return specs_.size(); }
  const CriterionSpec& operator[](std::size_t j) const { return specs_[j]; }

 private:
  explicit CriteriaSet(std::vector<CriterionSpec> specs) : specs_(std::move(specs)) {}
  std::vector<CriterionSpec> specs_;
};

/// Alternatives x criteria table of raw, finite, nonnegative values.
class DecisionMatrix {
 public:
  /// `values` is row-major with alternatives.size() * criteria.size() entries.
  /// Throws Error(kInvalidMatrix) when the shape is wrong, either dimension is
  /// empty, or any value is negative or non-finite. Weights are not checked
  /// here; rank() checks them.
  DecisionMatrix(std::vector<std::string> alternatives, std::vector<CriterionSpec> criteria,
                 std::vector<double> values);

  std::size_t rows() const { return alternatives_.size(); }
  std::size_t cols() const { return criteria_.size(); }

  double at(std::size_t row, std::size_t col) const { return values_[row * cols() + col]; }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(values_).subspan(r * cols(), cols());
  }

  const std::vector<std::string>& alternatives() const { return alternatives_; }
  const std::vector<CriterionSpec>& criteria() const { return criteria_; }
  const std::vector<double>& values() const { return values_; }

  /// Copy with column `col` multiplied by `factor` (> 0).
  DecisionMatrix with_scaled_column(std::size_t col, double factor) const;

 private:
  std::vector<std::string> alternatives_;
  std::vector<CriterionSpec> criteria_;
  std::vector<double> values_;
};

struct AlternativeScore {
  std::string id;
  std::vector<double> weighted;  // normalized * weight
  double distance_to_ideal = 0.0;
  double distance_to_anti_ideal = 0.0;
  double closeness = 0.0;
};

struct RankResult {
  std::vector<AlternativeScore> scores;  // input order
  std::vector<std::size_t> ranking;      // indices into scores, best first
  std::vector<double> ideal;
  std::vector<double> anti_ideal;

  std::size_t best_index() const { return ranking.front(); }
  const std::string& best() const { return scores[ranking.front()].id; }
  std::vector<double> closeness() const;
  std::vector<std::string> ranked_ids() const;
};

/// Column-wise vector normalization. All-zero columns stay all-zero.
DecisionMatrix normalize(const DecisionMatrix& matrix);

/// Full TOPSIS pass. Ties in closeness keep input order. When an alternative
/// sits at zero distance from both reference points (every alternative is
/// identical) its closeness is 1.
RankResult rank(const DecisionMatrix& matrix);

/// True iff scaling column `col` by `scale` leaves the ranking unchanged.
bool rank_order_invariance_check(const DecisionMatrix& matrix, double scale, std::size_t col = 0);

}  // namespace greenpod::topsis
