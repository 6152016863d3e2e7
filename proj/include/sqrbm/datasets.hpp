#pragma once

#include "sqrbm/core.hpp"

#include <cstdint>
#include <string_view>
#include <vector>

namespace sqrbm {

enum class DatasetKind { BernoulliMixture, RandomSupport, Cardinality, Parity };

std::string_view to_string(DatasetKind k);
/// Accepts the canonical names plus the single-letter aliases A-D.
DatasetKind parse_dataset_kind(std::string_view s);

struct DatasetSpec {
  DatasetKind kind = DatasetKind::Parity;
  int n = 4;
  int k = 8;          // mixture components (BernoulliMixture only)
  double p = 0.9;     // alignment probability (BernoulliMixture only)
  std::uint64_t seed = 0;

  void validate() const;
};

struct Dataset {
  DatasetSpec spec;
  VisibleDistribution distribution;
  /// Mixture centers as configuration indices (BernoulliMixture only).
  std::vector<std::uint32_t> centers;
};

/// Uniform average of k product distributions peaked at random centers. Centers
/// are drawn with replacement; P(v) = (1/k) sum_c p^(n-d) (1-p)^d with d the
/// Hamming distance between v and center c.
Dataset gen_bernoulli_mixture(int n, int k, double p, std::uint64_t seed);

/// Bernoulli mixture with explicitly given centers.
VisibleDistribution bernoulli_mixture(int n, double p, const std::vector<std::uint32_t>& centers);

/// Uniform over min(n^2, 2^n) distinct configurations.
VisibleDistribution gen_random_support(int n, std::uint64_t seed);

/// Uniform over configurations with exactly n/2 spins equal to -1.
VisibleDistribution gen_cardinality(int n);

/// Uniform over configurations with an even number of -1 spins.
VisibleDistribution gen_parity(int n);

Dataset generate(const DatasetSpec& spec);

}  // namespace sqrbm
