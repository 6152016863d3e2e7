#pragma once

#include "sqrbm/core.hpp"
#include "sqrbm/params.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

// Brute-force dense simulation of the full 2^(N+M) sqRBM Gibbs state. Slow
// on purpose; it exists to certify the closed forms in model.hpp.
//
// Basis ordering: the full index is v_index * 2^M + h_index, where v_index uses
// the SpinConfig encoding (bit i <-> visible spin i) and bit j of h_index is
// hidden spin j. The visible register is therefore the high-order factor of the
// Kronecker product, e.g. for N = M = 1, -sz on the visible qubit is
// diag(-1, -1, +1, +1). sz = diag(+1, -1) on each qubit.
namespace sqrbm::oracle {

using DenseOperator = Eigen::MatrixXd;

inline constexpr int kMaxQubits = 14;

/// Eigendecomposition-based Gibbs state together with its exact logarithm.
struct GibbsState {
  DenseOperator rho;
  DenseOperator log_rho;
  double log_partition = 0.0;
};

DenseOperator build_hamiltonian(const Params& p);

GibbsState gibbs(const DenseOperator& h);
DenseOperator gibbs_state(const DenseOperator& h);

VisibleDistribution reduce_to_visible(const DenseOperator& rho, int n_visible);

/// <v| rho |v> / Tr(<v| rho |v>), a 2^M density matrix.
DenseOperator conditional_hidden_state(const DenseOperator& rho, const SpinConfig& v);

/// P_V x rho_{H|V} = sum_v P_V(v) |v><v| (x) rho_{H|v}.
DenseOperator classical_quantum_state(const VisibleDistribution& data,
                                      const std::vector<DenseOperator>& conditionals);

/// Tr rho (log rho - log sigma), both by eigendecomposition.
double quantum_relative_entropy(const DenseOperator& rho, const DenseOperator& sigma);

/// Tr rho (log rho - log_sigma) for a sigma whose logarithm is already known.
double quantum_relative_entropy_with_log(const DenseOperator& rho, const DenseOperator& log_sigma);

DenseOperator matrix_log(const DenseOperator& positive_definite);

/// Tr[state O] for each generator O in (sz_i, sz_j, sx_j, sz_i sz_j).
GradientVector operator_expectations(const DenseOperator& state, int n_visible, int n_hidden);

/// Gradient of the Golden-Thompson bound, built from dense clamped
/// Hamiltonians <v|H|v>: data-averaged clamped expectation of dH/dtheta minus
/// its model expectation.
GradientVector golden_thompson_bound_gradient(const Params& p, const VisibleDistribution& data);

/// Max absolute deviation between closed form and oracle, per quantity.
struct CrossCheck {
  std::string name;
  double max_abs_dev = 0.0;
};

/// Compares every closed-form model quantity against this oracle for one
/// parameter point, one reference point p_t (for conditional / joint terms),
/// and one data distribution.
std::vector<CrossCheck> cross_check(const Params& p, const Params& p_t,
                                    const VisibleDistribution& data);

}  // namespace sqrbm::oracle
