#include "sqrbm/core.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace sqrbm {

void check_enumeration_size(int n) {
  if (n < 1 || n > kMaxEnumerationBits) {
    throw std::domain_error("configuration size " + std::to_string(n) +
                            " outside [1, " + std::to_string(kMaxEnumerationBits) + "]");
  }
}

std::uint32_t encode_config(std::span<const int> bits) {
  check_enumeration_size(static_cast<int>(bits.size()));
  std::uint32_t index = 0;
  for (std::size_t k = 0; k < bits.size(); ++k) {
    if (bits[k] == -1) {
      index |= 1U << k;
    } else if (bits[k] != +1) {
      throw std::domain_error("spin at position " + std::to_string(k) + " is " +
                              std::to_string(bits[k]) + ", expected +1 or -1");
    }
  }
  return index;
}

std::vector<int> decode_config(std::uint32_t index, int n) {
  check_enumeration_size(n);
  if (n < 32 && index >= (1U << n)) {
    throw std::domain_error("index " + std::to_string(index) + " out of range for n=" +
                            std::to_string(n));
  }
  std::vector<int> bits(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) bits[static_cast<std::size_t>(k)] = ((index >> k) & 1U) ? -1 : +1;
  return bits;
}

Eigen::VectorXd spin_vector(std::uint32_t index, int n) {
  Eigen::VectorXd v(n);
  for (int k = 0; k < n; ++k) v[k] = ((index >> k) & 1U) ? -1.0 : 1.0;
  return v;
}

VisibleDistribution::VisibleDistribution(int n_visible, Eigen::VectorXd probs)
    : n_visible_(n_visible), probs_(std::move(probs)) {
  check_enumeration_size(n_visible);
  if (probs_.size() != (Eigen::Index{1} << n_visible)) {
    throw std::domain_error("probability table has " + std::to_string(probs_.size()) +
                            " entries, expected 2^" + std::to_string(n_visible));
  }
  for (Eigen::Index i = 0; i < probs_.size(); ++i) {
    if (!(probs_[i] >= 0.0) || !std::isfinite(probs_[i])) {
      throw std::domain_error("probability at index " + std::to_string(i) +
                              " is negative or non-finite");
    }
  }
  const double total = probs_.sum();
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::domain_error("probabilities sum to " + std::to_string(total) + ", not 1");
  }
}

VisibleDistribution VisibleDistribution::uniform(int n_visible) {
  check_enumeration_size(n_visible);
  const Eigen::Index size = Eigen::Index{1} << n_visible;
  return {n_visible, Eigen::VectorXd::Constant(size, 1.0 / static_cast<double>(size))};
}

VisibleDistribution VisibleDistribution::point_mass(int n_visible, std::uint32_t index) {
  check_enumeration_size(n_visible);
  Eigen::VectorXd probs = Eigen::VectorXd::Zero(Eigen::Index{1} << n_visible);
  probs[index] = 1.0;
  return {n_visible, std::move(probs)};
}

int VisibleDistribution::support_size() const {
  return static_cast<int>((probs_.array() > 0.0).count());
}

double VisibleDistribution::entropy() const {
  double h = 0.0;
  for (Eigen::Index i = 0; i < probs_.size(); ++i) {
    if (probs_[i] > 0.0) h -= probs_[i] * std::log(probs_[i]);
  }
  return h;
}

double kl_divergence(const VisibleDistribution& p, const VisibleDistribution& q) {
  if (p.n_visible() != q.n_visible()) {
    throw std::domain_error("kl_divergence: n_visible mismatch");
  }
  double kl = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double pi = p.probs()[i];
    if (pi == 0.0) continue;
    const double qi = q.probs()[i];
    if (qi == 0.0) {
      throw DivergenceInfinite("kl_divergence: q has zero mass at index " + std::to_string(i) +
                               " where p is positive");
    }
    kl += pi * (std::log(pi) - std::log(qi));
  }
  return kl;
}

double log_cosh(double x) {
  const double a = std::abs(x);
  return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

double log_sum_exp(const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.size() == 0) return -std::numeric_limits<double>::infinity();
  const double top = x.maxCoeff();
  if (!std::isfinite(top)) return top;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) acc += std::exp(x[i] - top);
  return top + std::log(acc);
}

}  // namespace sqrbm
