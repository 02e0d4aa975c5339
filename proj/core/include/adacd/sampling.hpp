#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace adacd {

enum class SchemeKind {
  uniform,
  supportset_uniform,
  adaptive,
  ada_uniform,
  importance,
  ada_gap,
  gap_per_epoch,
};

enum class RefreshPolicy { fixed, per_epoch, per_iteration };

struct SamplingScheme {
  SchemeKind kind = SchemeKind::uniform;
  double sigma = 0.5;  // ada_uniform mixing weight

  RefreshPolicy refresh() const;
  bool needs_residuals() const;
  bool needs_gaps() const;
  std::string name() const;

  static SamplingScheme parse(const std::string& name, double sigma = 0.5);
  static const std::vector<std::string>& all_names();
};

/// Nonnegative sampling weights with a cached total. Probabilities are
/// weight/total; the vector is an immutable snapshot.
class ProbabilityVector {
 public:
  explicit ProbabilityVector(std::vector<double> weights);

  std::size_t size() const { return weights_.size(); }
  double weight(std::size_t i) const { return weights_[i]; }
  const std::vector<double>& weights() const { return weights_; }
  double total() const { return total_; }
  double prob(std::size_t i) const { return weights_[i] / total_; }

  /// Smallest probability among coordinates with positive weight.
  double min_positive_prob() const;

 private:
  std::vector<double> weights_;
  double total_ = 0.0;
};

/// Complete binary tree of partial weight sums: O(log n) point update and
/// weighted sampling. Prefix rule is half-open [cum_i, cum_{i+1}) over
/// leaves left to right; a target exactly on a boundary goes right, so a
/// zero-weight leaf is never selected.
class SumTree {
 public:
  explicit SumTree(std::span<const double> weights);

  std::size_t size() const { return leaf_count_; }
  double total() const { return nodes_[1]; }
  double leaf(std::size_t i) const { return nodes_[base_ + i]; }

  void update(std::size_t i, double weight);

  /// Maps u in [0,1) to a leaf index. Throws when the total is zero or u
  /// is outside [0,1).
  std::size_t sample(double u) const;

  /// Distinct nodes touched by the most recent update/sample call.
  std::uint64_t last_op_touches() const { return last_op_touches_; }
  std::uint64_t total_touches() const { return total_touches_; }

 private:
  std::size_t leaf_count_ = 0;
  std::size_t base_ = 1;
  std::vector<double> nodes_;  // 1-indexed heap; leaves at [base_, base_ + n)
  mutable std::uint64_t last_op_touches_ = 0;
  mutable std::uint64_t total_touches_ = 0;
};

/// Inputs for distribution construction. Residual and gap spans may be
/// empty when the variant does not consume them. column_norms doubles as
/// the exclusion mask: a zero norm marks a frozen coordinate that no
/// distribution may select.
struct SamplingInputs {
  std::span<const double> column_norms;
  std::span<const double> lipschitz;
  std::span<const double> residuals;  // |kappa_i|
  std::span<const double> gaps;       // G_i
};

/// Flushes entries below 1e-14 * max to exact zero so the support set is
/// numerically well defined. Applied to residual vectors before any
/// distribution is built or a support size is reported.
void flush_small(std::vector<double>& values);

std::size_t support_size(std::span<const double> residuals);

/// Builds the weight vector of the chosen scheme. Returns nullopt when
/// every weight is zero (empty support: the iterate is optimal).
/// All residual/gap variants come out coherent: any coordinate with a
/// nonzero (flushed) residual receives positive probability.
std::optional<ProbabilityVector> build_distribution(const SamplingScheme& scheme,
                                                    const SamplingInputs& inputs);

}  // namespace adacd
