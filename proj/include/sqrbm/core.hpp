#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sqrbm {

/// Largest visible/register size for which exact enumeration is supported.
inline constexpr int kMaxEnumerationBits = 24;

/// Raised when a KL divergence is infinite (p has mass where q has none).
class DivergenceInfinite : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when a computation produces a non-finite value.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a dense computation would exceed its dimension cap.
class ResourceError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// A configuration of n spins in {+1, -1}, stored as its index.
/// Bit k of the index is 0 when spin k is +1 and 1 when it is -1.
struct SpinConfig {
  std::uint32_t index = 0;
  int n = 1;

  int operator[](int k) const { return ((index >> k) & 1U) ? -1 : +1; }
  std::uint32_t size() const { return 1U << n; }
};

std::uint32_t encode_config(std::span<const int> bits);
std::vector<int> decode_config(std::uint32_t index, int n);

/// Spins of configuration `index` as a length-n vector of +/-1.
Eigen::VectorXd spin_vector(std::uint32_t index, int n);

/// Exact probability table over all 2^n spin configurations.
class VisibleDistribution {
 public:
  VisibleDistribution() = default;
  /// Validates non-negativity and unit mass (tolerance 1e-12).
  VisibleDistribution(int n_visible, Eigen::VectorXd probs);

  static VisibleDistribution uniform(int n_visible);
  static VisibleDistribution point_mass(int n_visible, std::uint32_t index);

  int n_visible() const { return n_visible_; }
  const Eigen::VectorXd& probs() const { return probs_; }
  double operator[](std::uint32_t index) const { return probs_[index]; }
  Eigen::Index size() const { return probs_.size(); }

  int support_size() const;
  double entropy() const;

  friend bool operator==(const VisibleDistribution& a, const VisibleDistribution& b) {
    return a.n_visible_ == b.n_visible_ && a.probs_ == b.probs_;
  }

 private:
  int n_visible_ = 0;
  Eigen::VectorXd probs_;
};

/// Sum_v p(v) (log p(v) - log q(v)) with 0 log 0 = 0.
double kl_divergence(const VisibleDistribution& p, const VisibleDistribution& q);

/// log(cosh x) without overflow.
double log_cosh(double x);

/// log(sum exp(x)) accumulated in index order.
double log_sum_exp(const Eigen::Ref<const Eigen::VectorXd>& x);

void check_enumeration_size(int n);

}  // namespace sqrbm
