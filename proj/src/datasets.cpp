#include "sqrbm/datasets.hpp"

#include "sqrbm/rng.hpp"

#include <bit>
#include <cmath>
#include <numeric>
#include <string>

namespace sqrbm {

namespace {

VisibleDistribution uniform_over(int n, const std::vector<std::uint32_t>& support) {
  Eigen::VectorXd probs = Eigen::VectorXd::Zero(Eigen::Index{1} << n);
  const double mass = 1.0 / static_cast<double>(support.size());
  for (auto index : support) probs[index] = mass;
  return {n, std::move(probs)};
}

}  // namespace

std::string_view to_string(DatasetKind k) {
  switch (k) {
    case DatasetKind::BernoulliMixture: return "bernoulli";
    case DatasetKind::RandomSupport: return "random-support";
    case DatasetKind::Cardinality: return "cardinality";
    case DatasetKind::Parity: return "parity";
  }
  return "unknown";
}

DatasetKind parse_dataset_kind(std::string_view s) {
  if (s == "bernoulli" || s == "A") return DatasetKind::BernoulliMixture;
  if (s == "random-support" || s == "B") return DatasetKind::RandomSupport;
  if (s == "cardinality" || s == "C") return DatasetKind::Cardinality;
  if (s == "parity" || s == "D") return DatasetKind::Parity;
  throw std::domain_error("unknown dataset kind '" + std::string(s) + "'");
}

void DatasetSpec::validate() const {
  check_enumeration_size(n);
  switch (kind) {
    case DatasetKind::BernoulliMixture:
      if (!(p > 0.0 && p < 1.0)) throw std::domain_error("bernoulli: p must lie in (0, 1)");
      if (k < 1 || static_cast<double>(k) > std::ldexp(1.0, n)) {
        throw std::domain_error("bernoulli: k must lie in [1, 2^n]");
      }
      break;
    case DatasetKind::Cardinality:
      if (n % 2 != 0) throw std::domain_error("cardinality: n must be even, got " + std::to_string(n));
      break;
    default:
      break;
  }
}

VisibleDistribution bernoulli_mixture(int n, double p, const std::vector<std::uint32_t>& centers) {
  check_enumeration_size(n);
  if (centers.empty()) throw std::domain_error("bernoulli: need at least one center");
  const Eigen::Index size = Eigen::Index{1} << n;
  Eigen::VectorXd probs = Eigen::VectorXd::Zero(size);
  const double weight = 1.0 / static_cast<double>(centers.size());
  for (Eigen::Index v = 0; v < size; ++v) {
    double acc = 0.0;
    for (auto c : centers) {
      const int d = std::popcount(static_cast<std::uint32_t>(v) ^ c);
      acc += std::pow(p, n - d) * std::pow(1.0 - p, d);
    }
    probs[v] = weight * acc;
  }
  return {n, std::move(probs)};
}

Dataset gen_bernoulli_mixture(int n, int k, double p, std::uint64_t seed) {
  const DatasetSpec spec{DatasetKind::BernoulliMixture, n, k, p, seed};
  spec.validate();
  Xoshiro256 rng(seed);
  std::vector<std::uint32_t> centers(static_cast<std::size_t>(k));
  for (auto& c : centers) c = static_cast<std::uint32_t>(rng.bounded(std::uint64_t{1} << n));
  return {spec, bernoulli_mixture(n, p, centers), centers};
}

VisibleDistribution gen_random_support(int n, std::uint64_t seed) {
  check_enumeration_size(n);
  const std::uint64_t total = std::uint64_t{1} << n;
  const std::uint64_t count = std::min<std::uint64_t>(static_cast<std::uint64_t>(n) * n, total);
  std::vector<std::uint32_t> indices(total);
  std::iota(indices.begin(), indices.end(), 0U);
  // Partial Fisher-Yates: the first `count` slots become a uniform sample.
  Xoshiro256 rng(seed);
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::uint64_t j = i + rng.bounded(total - i);
    std::swap(indices[i], indices[j]);
  }
  indices.resize(count);
  return uniform_over(n, indices);
}

VisibleDistribution gen_cardinality(int n) {
  DatasetSpec{DatasetKind::Cardinality, n}.validate();
  std::vector<std::uint32_t> support;
  for (std::uint32_t v = 0; v < (1U << n); ++v) {
    if (std::popcount(v) == n / 2) support.push_back(v);
  }
  return uniform_over(n, support);
}

VisibleDistribution gen_parity(int n) {
  check_enumeration_size(n);
  std::vector<std::uint32_t> support;
  for (std::uint32_t v = 0; v < (1U << n); ++v) {
    if (std::popcount(v) % 2 == 0) support.push_back(v);
  }
  return uniform_over(n, support);
}

Dataset generate(const DatasetSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case DatasetKind::BernoulliMixture:
      return gen_bernoulli_mixture(spec.n, spec.k, spec.p, spec.seed);
    case DatasetKind::RandomSupport:
      return {spec, gen_random_support(spec.n, spec.seed), {}};
    case DatasetKind::Cardinality:
      return {spec, gen_cardinality(spec.n), {}};
    case DatasetKind::Parity:
      return {spec, gen_parity(spec.n), {}};
  }
  throw std::domain_error("unhandled dataset kind");
}

}  // namespace sqrbm
