#pragma once

#include <optional>
#include <vector>

#include "cwv/hilbert.hpp"

namespace cwv {

// Hermitian matrix representing an observable.
class HermitianObservable {
 public:
  explicit HermitianObservable(SquareMatrix m);

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const SquareMatrix& matrix() const { return matrix_; }
  EigenSystem eigensystem() const { return hermitian_eigendecomposition(matrix_); }

 private:
  SquareMatrix matrix_;
};

// Hermitian, positive-semidefinite, unit-trace matrix.
class DensityOperator {
 public:
  explicit DensityOperator(SquareMatrix m);

  static DensityOperator pure(const Ket& psi);
  static DensityOperator maximally_mixed(int dim);
  static DensityOperator from_mixture(const Eigen::VectorXd& weights,
                                      const std::vector<Ket>& states);

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const SquareMatrix& matrix() const { return matrix_; }
  EigenSystem eigensystem() const { return hermitian_eigendecomposition(matrix_); }

 private:
  SquareMatrix matrix_;
};

// One estimate A(m) per outcome of a measurement basis. An entry is
// disengaged exactly when its outcome probability is below tol::prob_floor;
// such outcomes carry zero weight in every probability-weighted sum.
struct ContextualAssignment {
  MeasurementBasis basis;
  std::vector<std::optional<Complex>> values;
  Eigen::VectorXd probabilities;
};

struct VarianceReport {
  double variance = 0.0;
  Complex mean;
  double second_moment = 0.0;
  ContextualAssignment per_outcome;
};

// tr(rho A^2) - tr(rho A)^2
double variance(const DensityOperator& rho, const HermitianObservable& a);

// <m|A|psi> / <m|psi>; throws UndefinedWeakValue at orthogonal post-selection.
Complex weak_value(const Ket& psi, const Ket& m, const HermitianObservable& a);

// Per-outcome weak values with probabilities |<m|psi>|^2, plus the variance
// reconstructed from them: sum_m P(m)|A(m)|^2 - |sum_m P(m) A(m)|^2.
VarianceReport contextual_variance(const Ket& psi, const MeasurementBasis& basis,
                                   const HermitianObservable& a);

// A - sum_m A(m) |m><m|. Requires every assignment entry defined.
SquareMatrix error_operator(const HermitianObservable& a, const ContextualAssignment& assignment);

// Builds the weak-value assignment for (psi, basis) and returns the norm of
// the error operator applied to psi. Zero (to tolerance) for every pure psi.
double zero_error_residual(const Ket& psi, const MeasurementBasis& basis,
                           const HermitianObservable& a);

// <m|A rho|m> / <m|rho|m>; the optimal estimate for a mixed preparation.
Complex mixed_weak_value(const DensityOperator& rho, const Ket& m, const HermitianObservable& a);

// <m|A rho A|m>/<m|rho|m> - |mixed_weak_value|^2; conditional error left by
// outcome m. Zero (to tolerance) when rho is pure.
double residual_error(const DensityOperator& rho, const Ket& m, const HermitianObservable& a);

// sum_m <m|(A - A*(m)) rho (A - A(m))|m> with the optimal estimates A(m).
// Outcomes with <m|rho|m> below tol::prob_floor contribute the unconditioned
// term <m|A rho A|m>.
double total_error(const DensityOperator& rho, const MeasurementBasis& basis,
                   const HermitianObservable& a);

// max-abs entry of [rho, A]
double commutator_max_norm(const DensityOperator& rho, const HermitianObservable& a);

// Shared eigenbasis of a commuting pair: observable eigenvalues descending;
// within each degenerate observable cluster the state is diagonalized to fix
// the basis and recover the state weights.
struct SimultaneousEigensystem {
  Eigen::VectorXd observable_values;  // A_a
  Eigen::VectorXd state_weights;      // rho_a
  MeasurementBasis vectors;
};
SimultaneousEigensystem simultaneous_eigensystem(const DensityOperator& rho,
                                                 const HermitianObservable& a);

// Bayesian statistics for one measurement outcome of a commuting pair.
struct CommutingOutcome {
  double probability = 0.0;            // <m|rho|m>
  std::optional<Complex> estimate;     // sum_a P(a|rho,m) A_a
  std::optional<double> residual;      // sum_a P(a|rho,m) A_a^2 - estimate^2
};

// Eigenvalue-average route for [rho, A] = 0. Matches mixed_weak_value and
// residual_error outcome by outcome.
std::vector<CommutingOutcome> classical_commuting_stats(const DensityOperator& rho,
                                                        const MeasurementBasis& basis,
                                                        const HermitianObservable& a);

}  // namespace cwv
