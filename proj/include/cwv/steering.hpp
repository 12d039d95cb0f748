#pragma once

#include <optional>
#include <vector>

#include "cwv/contextual.hpp"

namespace cwv {

// Pure state of a system x reference pair; coeffs(i, j) is the amplitude of
// |i>_S (x) |j>_R. Construction validates unit total norm.
class BipartiteState {
 public:
  explicit BipartiteState(Eigen::MatrixXcd coeffs);

  int system_dim() const { return static_cast<int>(coeffs_.rows()); }
  int reference_dim() const { return static_cast<int>(coeffs_.cols()); }
  const Eigen::MatrixXcd& coeffs() const { return coeffs_; }

  // coeffs * coeffs^dag: the system state after tracing out the reference.
  DensityOperator reduced() const;

 private:
  Eigen::MatrixXcd coeffs_;
};

// Convex decomposition of a mixed state into pure branches, one per outcome
// of a reference measurement. Branches with weight below tol::prob_floor
// carry no state.
struct PureStateDecomposition {
  Eigen::VectorXd weights;
  std::vector<std::optional<Ket>> states;
  MeasurementBasis source_basis;

  DensityOperator reconstruct() const;  // sum_nu w_nu |psi_nu><psi_nu|
};

// Schmidt-form extension of rho into a pure bipartite state: column k of the
// coefficient matrix is sqrt(rho_k) times the k-th eigenvector of rho, with
// eigenvalues in the deterministic descending order of
// hermitian_eigendecomposition. The reference side uses the canonical basis
// labeled by eigenvalue rank, so a rank-1 rho purifies to psi (x) |0>_R.
BipartiteState purify(const DensityOperator& rho);

// States of the system conditioned on each outcome of a projective reference
// measurement; weights are the outcome probabilities. Any orthonormal
// reference basis reconstructs the same reduced state.
PureStateDecomposition conditional_states(const BipartiteState& state,
                                          const MeasurementBasis& nu_basis);

struct DecompositionEstimate {
  Complex estimate;                                  // sum_nu P(nu|rho,m) A_nu(m)
  Eigen::VectorXd conditionals;                      // P(nu|rho,m)
  std::vector<std::optional<Complex>> branch_values; // per-branch weak values
};

// Conditional average of branch weak values for outcome m. Equals
// mixed_weak_value of the reconstructed state for every decomposition.
DecompositionEstimate decomposition_estimate(const PureStateDecomposition& dec, const Ket& m,
                                             const HermitianObservable& a);

// sum_nu P(nu|rho,m) |A_nu(m)|^2 - |estimate|^2. Equals residual_error of the
// reconstructed state for every decomposition.
double decomposition_error(const PureStateDecomposition& dec, const Ket& m,
                           const HermitianObservable& a);

struct SteeringTransformCheck {
  Complex lhs;  // weak value of (psi_nu, m)
  Complex rhs;  // same value rebuilt from the lambda-context weak values
};

// Rewrites the weak value of psi_nu as a sum over an intermediate basis:
// A_psi(m) = sum_l [<m|l><l|psi>/<m|psi>] A_l(m). Terms with |<l|psi>| below
// tol::amp_floor are dropped; a kept term whose <m|l> vanishes is an error.
SteeringTransformCheck steering_transform_check(const Ket& psi_nu,
                                                const MeasurementBasis& lambda_basis, const Ket& m,
                                                const HermitianObservable& a);

struct ContextCell {
  double joint_probability = 0.0;        // |<m;nu|E>|^2
  double conditional_probability = 0.0;  // P(nu|rho,m)
  std::optional<Complex> weak_value;     // A_nu(m); empty below tol::prob_floor
};

struct ContextRow {
  double probability = 0.0;           // P(m)
  std::optional<Complex> estimate;    // A(m)
  std::optional<double> residual;     // eta^2(m)
};

// Joint (m, nu) grid of probabilities and weak values, with per-m aggregates.
struct ContextTable {
  MeasurementBasis m_basis;
  MeasurementBasis nu_basis;
  std::vector<std::vector<ContextCell>> cells;  // [m][nu]
  std::vector<ContextRow> per_m;
};

struct TotalVarianceDecomposition {
  ContextTable table;
  double variance = 0.0;  // sum_mn P(m,nu)|A_nu(m)|^2 - tr(rho A)^2
};

// Spreads the variance of A over the (m, nu) context grid; the total matches
// variance(reduced rho, A). Cells with joint probability below
// tol::prob_floor contribute zero.
TotalVarianceDecomposition total_variance_decomposition(const BipartiteState& state,
                                                        const MeasurementBasis& m_basis,
                                                        const MeasurementBasis& nu_basis,
                                                        const HermitianObservable& a);

struct EquivalenceCheck {
  double lhs;  // conditional average of |branch weak value|^2
  double rhs;  // conditional average of squared eigenvalues
};

// For a reduced state commuting with A: the average squared branch weak value
// over any reference basis equals the Bayesian average of squared
// eigenvalues; both equal eta^2(m) + |A(m)|^2.
EquivalenceCheck equivalence_check(const BipartiteState& state, const Ket& m,
                                   const MeasurementBasis& nu_basis,
                                   const HermitianObservable& a);

}  // namespace cwv
