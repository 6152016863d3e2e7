#include "support.hpp"

#include "sqrbm/model.hpp"

#include <doctest.h>

#include <cmath>

using namespace sqrbm;
using testing::random_params;

namespace {

Params two_by_one() {
  Params p = Params::zeros(2, 1);
  p.b_h << 0.5;
  p.w << 0.25, -1.0;
  return p;
}

}  // namespace

TEST_CASE("effective_field examples") {
  const Params p = two_by_one();
  CHECK(effective_field(p, SpinConfig{encode_config(std::vector<int>{+1, -1}), 2}, 0) == 1.75);
  Params decoupled = p;
  decoupled.w.setZero();
  for (std::uint32_t v = 0; v < 4; ++v) CHECK(effective_field(decoupled, {v, 2}, 0) == 0.5);

  Params odd = p;
  odd.b_h.setZero();
  for (std::uint32_t v = 0; v < 4; ++v) {
    CHECK(effective_field(odd, {v, 2}, 0) == -effective_field(odd, {3U ^ v, 2}, 0));
  }
  CHECK_THROWS_AS(effective_field(p, {0, 2}, 1), std::domain_error);
  CHECK_THROWS_AS(effective_field(p, {0, 2}, -1), std::domain_error);
}

TEST_CASE("hidden_gap examples") {
  Params p = Params::zeros(1, 1);
  p.gamma << 3.0;
  p.b_h << 4.0;
  CHECK(hidden_gap(p, {0, 1}, 0) == 5.0);
  p.gamma << 0.0;
  p.b_h << -2.5;
  CHECK(hidden_gap(p, {0, 1}, 0) == 2.5);
  p.gamma << -1.5;
  p.b_h << 0.0;
  CHECK(hidden_gap(p, {0, 1}, 0) == 1.5);
}

TEST_CASE("clamped_hidden_state examples") {
  Params p = Params::zeros(1, 1);
  p.b_h << 50.0;
  auto s = clamped_hidden_state(p, {0, 1}, 0);
  CHECK(s.mz == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(s.mx == 0.0);

  p.b_h << 0.0;
  p.gamma << 2.0;
  s = clamped_hidden_state(p, {0, 1}, 0);
  CHECK(s.mz == 0.0);
  CHECK(std::abs(s.mx - std::tanh(2.0)) < 1e-15);

  // Value frozen from diagonalizing -(sz + sx): tanh(sqrt 2)/sqrt 2.
  p.b_h << 1.0;
  p.gamma << 1.0;
  s = clamped_hidden_state(p, {0, 1}, 0);
  const Eigen::Matrix2d rho = testing::qubit_gibbs(1.0, 1.0);
  const double mz_oracle = rho(0, 0) - rho(1, 1);
  const double mx_oracle = 2 * rho(0, 1);
  CHECK(std::abs(mz_oracle - 0.62818345485) < 1e-10);
  CHECK(std::abs(s.mz - mz_oracle) < 1e-14);
  CHECK(std::abs(s.mx - mx_oracle) < 1e-14);
  CHECK(s.mz == s.mx);
}

TEST_CASE("clamped state matches 2x2 diagonalization on random fields") {
  Xoshiro256 rng(3);
  for (int t = 0; t < 200; ++t) {
    Params p = Params::zeros(1, 1);
    p.b_h << rng.uniform(-6, 6);
    p.gamma << rng.uniform(-6, 6);
    const auto s = clamped_hidden_state(p, {0, 1}, 0);
    const Eigen::Matrix2d rho = testing::qubit_gibbs(p.b_h[0], p.gamma[0]);
    REQUIRE(std::abs(s.mz - (rho(0, 0) - rho(1, 1))) < 1e-12);
    REQUIRE(std::abs(s.mx - 2 * rho(0, 1)) < 1e-12);
  }
}

TEST_CASE("tanh_ratio near the removable singularity") {
  CHECK(tanh_ratio(0.0) == 1.0);
  CHECK(tanh_ratio(1e-13) == 1.0);
  for (double d : {1e-11, 1e-8, 5e-5, 9.9e-5, 1.01e-4, 1e-3, 0.5, 3.0}) {
    CHECK(tanh_ratio(d) == doctest::Approx(std::tanh(d) / d).epsilon(1e-15));
  }
  Params p = Params::zeros(1, 1);
  const auto s = clamped_hidden_state(p, {0, 1}, 0);
  CHECK(s.mz == 0.0);
  CHECK(s.mx == 0.0);
}

TEST_CASE("Bloch norm equals tanh^2 of the gap") {
  Xoshiro256 rng(5);
  for (int t = 0; t < 20; ++t) {
    const Params p = random_params(3, 3, rng, 3.0);
    for (std::uint32_t v = 0; v < 8; ++v) {
      for (int j = 0; j < 3; ++j) {
        const auto s = clamped_hidden_state(p, {v, 3}, j);
        REQUIRE(std::abs(s.d - std::hypot(p.gamma[j], s.b_eff)) < 1e-12);
        REQUIRE(std::abs(s.mz * s.mz + s.mx * s.mx - std::pow(std::tanh(s.d), 2)) < 1e-12);
        REQUIRE(s.mz * s.mz + s.mx * s.mx <= 1.0);
      }
    }
  }
}

TEST_CASE("log_visible_weight examples") {
  const Params zero = Params::zeros(3, 2);
  for (std::uint32_t v = 0; v < 8; ++v) CHECK(log_visible_weight(zero, {v, 3}) == 0.0);
  Params single = Params::zeros(1, 0);
  single.b_v << 1.0;
  CHECK(log_visible_weight(single, {0, 1}) == 1.0);
  CHECK(log_visible_weight(single, {1, 1}) == -1.0);
}

TEST_CASE("visible_marginal basics") {
  const auto u = visible_marginal(Params::zeros(3, 2));
  for (int v = 0; v < 8; ++v) CHECK(u[v] == doctest::Approx(0.125).epsilon(1e-15));

  Xoshiro256 rng(17);
  for (int t = 0; t < 20; ++t) {
    Params p = random_params(3, 2, rng, 5.0);
    const auto q = visible_marginal(p);
    CHECK(std::abs(q.probs().sum() - 1.0) < 1e-12);
    CHECK(q.probs().minCoeff() > 0.0);
    CHECK(visible_marginal(0.0 * p) == VisibleDistribution::uniform(3));
  }
}

TEST_CASE("visible_marginal survives large parameters") {
  Xoshiro256 rng(9);
  const Params p = random_params(4, 3, rng, 300.0);
  const auto q = visible_marginal(p);
  CHECK(q.probs().allFinite());
  CHECK(std::abs(q.probs().sum() - 1.0) < 1e-12);
  CHECK(std::isfinite(log_partition(p)));
}

TEST_CASE("Classical limit equals RBM enumeration") {
  Xoshiro256 rng(21);
  for (int t = 0; t < 20; ++t) {
    Params p = random_params(4, 3, rng, 2.0);
    p.gamma.setZero();
    const auto q = visible_marginal(p);
    REQUIRE((q.probs() - testing::classical_rbm_marginal(p)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("Sign-flip symmetry") {
  Xoshiro256 rng(23);
  for (int t = 0; t < 10; ++t) {
    const Params p = random_params(4, 2, rng, 2.0);
    Params flipped = p;
    flipped.b_v = -p.b_v;
    flipped.b_h = -p.b_h;
    const auto a = visible_marginal(p);
    const auto b = visible_marginal(flipped);
    for (std::uint32_t v = 0; v < 16; ++v) REQUIRE(std::abs(a[v] - b[15U ^ v]) < 1e-14);
  }
}

TEST_CASE("positive_phase examples") {
  Params p = Params::zeros(2, 1);
  p.b_h << 50.0;
  const auto pos = positive_phase(p, VisibleDistribution::point_mass(2, 0));
  CHECK(pos.b_h[0] == doctest::Approx(1.0));
  CHECK(pos.w(0, 0) == doctest::Approx(1.0));
  CHECK(pos.w(1, 0) == doctest::Approx(1.0));
  CHECK(pos.b_v[0] == 1.0);

  Xoshiro256 rng(29);
  Params q = random_params(3, 2, rng, 2.0);
  q.w.setZero();
  const auto data = testing::random_distribution(3, rng);
  const auto g = positive_phase(q, data);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 2; ++j) CHECK(std::abs(g.w(i, j) - g.b_v[i] * g.b_h[j]) < 1e-14);

  CHECK_THROWS_AS(positive_phase(q, VisibleDistribution::uniform(2)), std::domain_error);
}

TEST_CASE("negative_phase examples") {
  const auto zero = negative_phase(Params::zeros(3, 2));
  CHECK(zero.flatten().cwiseAbs().maxCoeff() == 0.0);
  Params p = Params::zeros(2, 1);
  p.b_v << 50.0, 0.0;
  CHECK(negative_phase(p).b_v[0] == doctest::Approx(1.0));
}

TEST_CASE("positive phase under the model marginal equals negative phase") {
  Xoshiro256 rng(31);
  for (int t = 0; t < 20; ++t) {
    const Params p = random_params(3, 3, rng, 2.0);
    REQUIRE(max_abs_diff(positive_phase(p, visible_marginal(p)), negative_phase(p)) < 1e-10);
  }
}

TEST_CASE("negative_phase is the gradient of log Z") {
  Xoshiro256 rng(37);
  for (int t = 0; t < 10; ++t) {
    const Params p = random_params(3, 2, rng, 2.0);
    const Eigen::VectorXd fd = testing::finite_difference(
        [](const Params& q) { return log_partition(q); }, p, 1e-5);
    const Eigen::VectorXd an = negative_phase(p).flatten();
    for (Eigen::Index k = 0; k < fd.size(); ++k) {
      REQUIRE(std::abs(fd[k] - an[k]) <= 1e-6 * std::max(std::abs(an[k]), 1e-2));
    }
  }
}

TEST_CASE("conditional_relative_entropy_term examples") {
  Xoshiro256 rng(41);
  const Params p = random_params(3, 2, rng, 2.0);
  const auto data = testing::random_distribution(3, rng);
  CHECK(conditional_relative_entropy_term(p, p, data) == doctest::Approx(0.0).epsilon(1e-15));
  const Params a = random_params(3, 0, rng, 2.0);
  const Params b = random_params(3, 0, rng, 2.0);
  CHECK(conditional_relative_entropy_term(a, b, data) == 0.0);
}

TEST_CASE("conditional term matches 2x2 matrix logarithms") {
  Xoshiro256 rng(43);
  for (int t = 0; t < 10; ++t) {
    const Params p_t = random_params(2, 1, rng, 2.0);
    const Params p = random_params(2, 1, rng, 2.0);
    const auto data = testing::random_distribution(2, rng);
    double expected = 0.0;
    for (std::uint32_t v = 0; v < 4; ++v) {
      const SpinConfig s{v, 2};
      const Eigen::Matrix2d rho = testing::qubit_gibbs(effective_field(p_t, s, 0), p_t.gamma[0]);
      const Eigen::Matrix2d sigma = testing::qubit_gibbs(effective_field(p, s, 0), p.gamma[0]);
      expected +=
          data[v] * (rho * (testing::qubit_log(rho) - testing::qubit_log(sigma))).trace();
    }
    REQUIRE(std::abs(conditional_relative_entropy_term(p_t, p, data) - expected) < 1e-10);
  }
}

TEST_CASE("joint_objective reductions") {
  Xoshiro256 rng(47);
  const Params p = random_params(3, 2, rng, 2.0);
  CHECK(std::abs(joint_objective(p, p, visible_marginal(p))) < 1e-14);
  const auto data = testing::random_distribution(3, rng, true);
  CHECK(joint_objective(p, p, data) ==
        doctest::Approx(kl_divergence(data, visible_marginal(p))).epsilon(1e-14));
}

TEST_CASE("cross-entropy expansion differences equal joint objective differences") {
  Xoshiro256 rng(53);
  for (int t = 0; t < 20; ++t) {
    const Params p_t = random_params(3, 2, rng, 2.0);
    const Params a = random_params(3, 2, rng, 2.0);
    const Params b = random_params(3, 2, rng, 2.0);
    const auto data = testing::random_distribution(3, rng);
    const auto pos = positive_phase(p_t, data);
    const double via_expansion = joint_cross_entropy(pos, a) - joint_cross_entropy(pos, b);
    const double via_objective = joint_objective(p_t, a, data) - joint_objective(p_t, b, data);
    REQUIRE(std::abs(via_expansion - via_objective) < 1e-10);
  }
}

TEST_CASE("EvaluatedModel rejects non-finite parameters") {
  Params p = Params::zeros(2, 1);
  p.w(1, 0) = std::nan("");
  CHECK_THROWS_AS(EvaluatedModel{p}, NumericError);
}
