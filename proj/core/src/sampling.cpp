#include "adacd/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace adacd {

RefreshPolicy SamplingScheme::refresh() const {
  switch (kind) {
    case SchemeKind::uniform:
    case SchemeKind::importance:
      return RefreshPolicy::fixed;
    case SchemeKind::gap_per_epoch:
      return RefreshPolicy::per_epoch;
    default:
      return RefreshPolicy::per_iteration;
  }
}

bool SamplingScheme::needs_residuals() const {
  switch (kind) {
    case SchemeKind::supportset_uniform:
    case SchemeKind::adaptive:
    case SchemeKind::ada_uniform:
      return true;
    default:
      return false;
  }
}

bool SamplingScheme::needs_gaps() const {
  return kind == SchemeKind::ada_gap || kind == SchemeKind::gap_per_epoch;
}

std::string SamplingScheme::name() const {
  switch (kind) {
    case SchemeKind::uniform: return "uniform";
    case SchemeKind::supportset_uniform: return "supportset-uniform";
    case SchemeKind::adaptive: return "adaptive";
    case SchemeKind::ada_uniform: return "ada-uniform";
    case SchemeKind::importance: return "importance";
    case SchemeKind::ada_gap: return "ada-gap";
    case SchemeKind::gap_per_epoch: return "gap-per-epoch";
  }
  return "?";
}

const std::vector<std::string>& SamplingScheme::all_names() {
  static const std::vector<std::string> names = {
      "uniform",    "supportset-uniform", "adaptive",      "ada-uniform",
      "importance", "ada-gap",            "gap-per-epoch",
  };
  return names;
}

SamplingScheme SamplingScheme::parse(const std::string& name, double sigma) {
  SamplingScheme s;
  s.sigma = sigma;
  if (name == "uniform") s.kind = SchemeKind::uniform;
  else if (name == "supportset-uniform") s.kind = SchemeKind::supportset_uniform;
  else if (name == "adaptive") s.kind = SchemeKind::adaptive;
  else if (name == "ada-uniform") s.kind = SchemeKind::ada_uniform;
  else if (name == "importance") s.kind = SchemeKind::importance;
  else if (name == "ada-gap") s.kind = SchemeKind::ada_gap;
  else if (name == "gap-per-epoch") s.kind = SchemeKind::gap_per_epoch;
  else throw std::invalid_argument("unknown sampling scheme '" + name + "'");
  if (sigma < 0.0 || sigma > 1.0) throw std::invalid_argument("sigma must be in [0, 1]");
  return s;
}

ProbabilityVector::ProbabilityVector(std::vector<double> weights)
    : weights_(std::move(weights)) {
  for (const double w : weights_) {
    if (w < 0.0 || !std::isfinite(w)) {
      throw std::invalid_argument("sampling weights must be finite and nonnegative");
    }
    total_ += w;
  }
  if (total_ <= 0.0) throw std::invalid_argument("sampling weights sum to zero");
}

double ProbabilityVector::min_positive_prob() const {
  double best = std::numeric_limits<double>::infinity();
  for (const double w : weights_) {
    if (w > 0.0) best = std::min(best, w / total_);
  }
  return best;
}

SumTree::SumTree(std::span<const double> weights) {
  leaf_count_ = weights.size();
  if (leaf_count_ == 0) throw std::invalid_argument("SumTree needs at least one leaf");
  base_ = 1;
  while (base_ < leaf_count_) base_ <<= 1;
  nodes_.assign(2 * base_, 0.0);
  for (std::size_t i = 0; i < leaf_count_; ++i) {
    const double w = weights[i];
    if (w < 0.0 || !std::isfinite(w)) {
      throw std::invalid_argument("SumTree weights must be finite and nonnegative");
    }
    nodes_[base_ + i] = w;
  }
  for (std::size_t v = base_ - 1; v >= 1; --v) nodes_[v] = nodes_[2 * v] + nodes_[2 * v + 1];
}

void SumTree::update(std::size_t i, double weight) {
  if (i >= leaf_count_) throw std::out_of_range("SumTree::update: leaf out of range");
  if (weight < 0.0 || !std::isfinite(weight)) {
    throw std::invalid_argument("SumTree::update: weight must be finite and nonnegative");
  }
  std::uint64_t touches = 1;
  std::size_t v = base_ + i;
  nodes_[v] = weight;
  while (v > 1) {
    v >>= 1;
    // Recompute from the children instead of accumulating a delta, so the
    // node invariant stays exact after any number of updates.
    nodes_[v] = nodes_[2 * v] + nodes_[2 * v + 1];
    touches += 2;  // sibling read + parent write
  }
  last_op_touches_ = touches;
  total_touches_ += touches;
}

std::size_t SumTree::sample(double u) const {
  if (!(u >= 0.0 && u < 1.0)) throw std::invalid_argument("SumTree::sample: u must be in [0,1)");
  const double total = nodes_[1];
  if (total <= 0.0) throw std::runtime_error("SumTree::sample: total weight is zero");
  double target = u * total;
  // Guard against u*total rounding up to the total, which would fall off
  // the right edge of the prefix partition.
  if (!(target < total)) target = std::nextafter(total, 0.0);

  std::uint64_t touches = 1;  // root
  std::size_t v = 1;
  while (v < base_) {
    const double left = nodes_[2 * v];
    ++touches;
    if (target < left) {
      v = 2 * v;
    } else {
      target -= left;
      v = 2 * v + 1;
    }
  }
  last_op_touches_ = touches;
  total_touches_ += touches;
  return v - base_;
}

void flush_small(std::vector<double>& values) {
  double max_value = 0.0;
  for (const double v : values) max_value = std::max(max_value, v);
  const double cut = 1e-14 * max_value;
  for (double& v : values) {
    if (v < cut) v = 0.0;
  }
}

std::size_t support_size(std::span<const double> residuals) {
  std::size_t m = 0;
  for (const double k : residuals) m += k != 0.0;
  return m;
}

namespace {

std::optional<ProbabilityVector> finish(std::vector<double> weights) {
  double total = 0.0;
  for (const double w : weights) total += w;
  if (total <= 0.0) return std::nullopt;
  return ProbabilityVector(std::move(weights));
}

}  // namespace

std::optional<ProbabilityVector> build_distribution(const SamplingScheme& scheme,
                                                    const SamplingInputs& in) {
  const std::size_t n = in.column_norms.size();
  std::vector<double> weights(n, 0.0);

  std::vector<double> kappa;
  if (scheme.needs_residuals() || scheme.needs_gaps()) {
    if (in.residuals.size() != n) {
      throw std::invalid_argument("scheme '" + scheme.name() + "' needs a residual vector");
    }
    kappa.assign(in.residuals.begin(), in.residuals.end());
    flush_small(kappa);
  }

  switch (scheme.kind) {
    case SchemeKind::uniform:
      for (std::size_t i = 0; i < n; ++i) weights[i] = in.column_norms[i] > 0.0 ? 1.0 : 0.0;
      break;

    case SchemeKind::importance:
      if (in.lipschitz.size() != n) {
        throw std::invalid_argument("importance sampling needs Lipschitz constants");
      }
      for (std::size_t i = 0; i < n; ++i) weights[i] = in.lipschitz[i] * in.column_norms[i];
      break;

    case SchemeKind::supportset_uniform:
      for (std::size_t i = 0; i < n; ++i) weights[i] = kappa[i] != 0.0 ? 1.0 : 0.0;
      break;

    case SchemeKind::adaptive:
      for (std::size_t i = 0; i < n; ++i) weights[i] = kappa[i] * in.column_norms[i];
      break;

    case SchemeKind::ada_uniform: {
      double m = 0.0, denom = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (kappa[i] != 0.0) {
          m += 1.0;
          denom += kappa[i] * in.column_norms[i];
        }
      }
      if (m == 0.0) return std::nullopt;
      for (std::size_t i = 0; i < n; ++i) {
        if (kappa[i] != 0.0) {
          weights[i] = scheme.sigma / m +
                       (1.0 - scheme.sigma) * kappa[i] * in.column_norms[i] / denom;
        }
      }
      break;
    }

    case SchemeKind::ada_gap:
    case SchemeKind::gap_per_epoch: {
      if (in.gaps.size() != n) {
        throw std::invalid_argument("gap-based sampling needs a gap vector");
      }
      // The support set is defined by the residuals. Coordinates whose gap
      // underflows while their residual is still nonzero keep the smallest
      // positive weight, preserving coherence.
      for (std::size_t i = 0; i < n; ++i) {
        if (kappa[i] != 0.0) {
          weights[i] = std::max(in.gaps[i], std::numeric_limits<double>::min());
        }
      }
      break;
    }
  }

  return finish(std::move(weights));
}

}  // namespace adacd
