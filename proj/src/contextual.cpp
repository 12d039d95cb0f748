#include "cwv/contextual.hpp"

#include <cmath>
#include <string>

namespace cwv {

namespace {

void require_same_dim(int a, int b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": dimensions " + std::to_string(a) + " vs " +
                         std::to_string(b));
  }
}

}  // namespace

HermitianObservable::HermitianObservable(SquareMatrix m) : matrix_(std::move(m)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() < 1) {
    throw DimensionError("observable: matrix must be square and non-empty");
  }
  if (!all_finite(matrix_)) throw ValidationError("observable: non-finite entry");
  const double dev = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
  if (dev > tol::herm) {
    throw HermiticityError("observable: Hermiticity deviation " + std::to_string(dev));
  }
}

DensityOperator::DensityOperator(SquareMatrix m) : matrix_(std::move(m)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() < 1) {
    throw DimensionError("density operator: matrix must be square and non-empty");
  }
  if (!all_finite(matrix_)) throw ValidationError("density operator: non-finite entry");
  const double herm_dev = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
  if (herm_dev > tol::herm) {
    throw HermiticityError("density operator: Hermiticity deviation " + std::to_string(herm_dev));
  }
  const double trace_dev = std::abs(matrix_.trace() - Complex(1.0, 0.0));
  if (trace_dev > tol::norm) {
    throw ValidationError("density operator: trace deviates from 1 by " + std::to_string(trace_dev));
  }
  Eigen::SelfAdjointEigenSolver<SquareMatrix> solver((matrix_ + matrix_.adjoint()) / 2.0);
  if (solver.eigenvalues().minCoeff() < -tol::psd) {
    throw ValidationError("density operator: negative eigenvalue " +
                          std::to_string(solver.eigenvalues().minCoeff()));
  }
}

DensityOperator DensityOperator::pure(const Ket& psi) {
  return DensityOperator(psi.vec() * psi.vec().adjoint());
}

DensityOperator DensityOperator::maximally_mixed(int dim) {
  if (dim < 1) throw DimensionError("density operator: dimension must be at least 1");
  return DensityOperator(SquareMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

DensityOperator DensityOperator::from_mixture(const Eigen::VectorXd& weights,
                                              const std::vector<Ket>& states) {
  if (weights.size() != static_cast<Eigen::Index>(states.size()) || states.empty()) {
    throw DimensionError("mixture: one weight per state required");
  }
  const int d = states.front().dim();
  SquareMatrix m = SquareMatrix::Zero(d, d);
  for (size_t i = 0; i < states.size(); ++i) {
    if (weights(static_cast<Eigen::Index>(i)) < -tol::psd) {
      throw ValidationError("mixture: negative weight");
    }
    m += weights(static_cast<Eigen::Index>(i)) * states[i].vec() * states[i].vec().adjoint();
  }
  return DensityOperator(std::move(m));
}

double variance(const DensityOperator& rho, const HermitianObservable& a) {
  require_same_dim(rho.dim(), a.dim(), "variance");
  const SquareMatrix ra = rho.matrix() * a.matrix();
  const double mean = ra.trace().real();
  const double second = (ra * a.matrix()).trace().real();
  return second - mean * mean;
}

Complex weak_value(const Ket& psi, const Ket& m, const HermitianObservable& a) {
  require_same_dim(psi.dim(), a.dim(), "weak_value");
  require_same_dim(m.dim(), a.dim(), "weak_value");
  const Complex den = m.vec().dot(psi.vec());
  if (std::norm(den) < tol::prob_floor) {
    throw UndefinedWeakValue("weak_value: post-selection orthogonal to the state");
  }
  return m.vec().dot(a.matrix() * psi.vec()) / den;
}

VarianceReport contextual_variance(const Ket& psi, const MeasurementBasis& basis,
                                   const HermitianObservable& a) {
  require_same_dim(psi.dim(), a.dim(), "contextual_variance");
  require_same_dim(basis.dim(), a.dim(), "contextual_variance");
  const int d = basis.dim();
  const Vector apsi = a.matrix() * psi.vec();

  ContextualAssignment assignment{basis, {}, Eigen::VectorXd::Zero(d)};
  assignment.values.resize(d);
  Complex mean(0.0, 0.0);
  double second = 0.0;
  for (int i = 0; i < d; ++i) {
    const Complex amp = basis.ket(i).vec().dot(psi.vec());
    const double p = std::norm(amp);
    assignment.probabilities(i) = p;
    if (p < tol::prob_floor) continue;  // undefined outcome, zero weight
    const Complex value = basis.ket(i).vec().dot(apsi) / amp;
    assignment.values[i] = value;
    mean += p * value;
    second += p * std::norm(value);
  }

  return VarianceReport{second - std::norm(mean), mean, second, std::move(assignment)};
}

SquareMatrix error_operator(const HermitianObservable& a, const ContextualAssignment& assignment) {
  require_same_dim(a.dim(), assignment.basis.dim(), "error_operator");
  SquareMatrix eta = a.matrix();
  for (int i = 0; i < assignment.basis.dim(); ++i) {
    if (!assignment.values[i].has_value()) {
      throw UndefinedWeakValue("error_operator: assignment undefined for outcome " +
                               std::to_string(i));
    }
    const Vector& m = assignment.basis.ket(i).vec();
    eta -= *assignment.values[i] * (m * m.adjoint());
  }
  return eta;
}

double zero_error_residual(const Ket& psi, const MeasurementBasis& basis,
                           const HermitianObservable& a) {
  const VarianceReport report = contextual_variance(psi, basis, a);
  for (int i = 0; i < basis.dim(); ++i) {
    if (!report.per_outcome.values[i].has_value()) {
      throw UndefinedWeakValue("zero_error_residual: outcome " + std::to_string(i) +
                               " is orthogonal to the state");
    }
  }
  const SquareMatrix eta = error_operator(a, report.per_outcome);
  return (eta * psi.vec()).norm();
}

Complex mixed_weak_value(const DensityOperator& rho, const Ket& m, const HermitianObservable& a) {
  require_same_dim(rho.dim(), a.dim(), "mixed_weak_value");
  require_same_dim(m.dim(), a.dim(), "mixed_weak_value");
  const Vector rho_m = rho.matrix() * m.vec();
  const double den = m.vec().dot(rho_m).real();
  if (den < tol::prob_floor) {
    throw UndefinedWeakValue("mixed_weak_value: outcome probability below threshold");
  }
  return m.vec().dot(a.matrix() * rho_m) / den;
}

double residual_error(const DensityOperator& rho, const Ket& m, const HermitianObservable& a) {
  require_same_dim(rho.dim(), a.dim(), "residual_error");
  require_same_dim(m.dim(), a.dim(), "residual_error");
  const double den = m.vec().dot(rho.matrix() * m.vec()).real();
  if (den < tol::prob_floor) {
    throw UndefinedWeakValue("residual_error: outcome probability below threshold");
  }
  const Vector am = a.matrix() * m.vec();  // A|m>, so <m|A rho A|m> = (A m)^dag rho (A m)
  const double second = am.dot(rho.matrix() * am).real() / den;
  const Complex estimate = m.vec().dot(a.matrix() * rho.matrix() * m.vec()) / den;
  return second - std::norm(estimate);
}

double total_error(const DensityOperator& rho, const MeasurementBasis& basis,
                   const HermitianObservable& a) {
  require_same_dim(rho.dim(), a.dim(), "total_error");
  require_same_dim(basis.dim(), a.dim(), "total_error");
  double total = 0.0;
  for (int i = 0; i < basis.dim(); ++i) {
    const Vector& m = basis.ket(i).vec();
    const Vector am = a.matrix() * m;
    const double unconditioned = am.dot(rho.matrix() * am).real();  // <m|A rho A|m>
    const double p = m.dot(rho.matrix() * m).real();
    if (p < tol::prob_floor) {
      total += unconditioned;
      continue;
    }
    const Complex cross = m.dot(a.matrix() * rho.matrix() * m);  // <m|A rho|m>
    const Complex estimate = cross / p;
    total += unconditioned - 2.0 * (std::conj(estimate) * cross).real() + std::norm(estimate) * p;
  }
  return total;
}

double commutator_max_norm(const DensityOperator& rho, const HermitianObservable& a) {
  require_same_dim(rho.dim(), a.dim(), "commutator");
  return (rho.matrix() * a.matrix() - a.matrix() * rho.matrix()).cwiseAbs().maxCoeff();
}

SimultaneousEigensystem simultaneous_eigensystem(const DensityOperator& rho,
                                                 const HermitianObservable& a) {
  const double comm = commutator_max_norm(rho, a);
  if (comm > tol::identity) {
    throw CommutationError("simultaneous_eigensystem: commutator max norm " +
                           std::to_string(comm));
  }
  const EigenSystem es = a.eigensystem();
  const int d = a.dim();
  SquareMatrix vectors = es.vectors.as_matrix();
  Eigen::VectorXd weights(d);

  // Within each degenerate observable cluster rho maps the cluster subspace
  // to itself; diagonalizing its restriction fixes the shared basis.
  int lo = 0;
  while (lo < d) {
    int hi = lo + 1;
    while (hi < d && es.values(hi - 1) - es.values(hi) < tol::degenerate) ++hi;
    const int k = hi - lo;
    if (k == 1) {
      weights(lo) = vectors.col(lo).dot(rho.matrix() * vectors.col(lo)).real();
    } else {
      const SquareMatrix sub = vectors.middleCols(lo, k);
      const SquareMatrix restricted = sub.adjoint() * rho.matrix() * sub;
      const EigenSystem cluster = hermitian_eigendecomposition(restricted);
      vectors.middleCols(lo, k) = sub * cluster.vectors.as_matrix();
      for (int j = 0; j < k; ++j) weights(lo + j) = cluster.values(j);
    }
    lo = hi;
  }
  for (int c = 0; c < d; ++c) vectors.col(c) = canonical_phase(vectors.col(c));

  return SimultaneousEigensystem{es.values, std::move(weights),
                                 MeasurementBasis::from_columns(vectors)};
}

std::vector<CommutingOutcome> classical_commuting_stats(const DensityOperator& rho,
                                                        const MeasurementBasis& basis,
                                                        const HermitianObservable& a) {
  require_same_dim(rho.dim(), basis.dim(), "classical_commuting_stats");
  const SimultaneousEigensystem sim = simultaneous_eigensystem(rho, a);
  const int d = basis.dim();

  std::vector<CommutingOutcome> rows(d);
  for (int i = 0; i < d; ++i) {
    const Vector& m = basis.ket(i).vec();
    const double p = m.dot(rho.matrix() * m).real();
    rows[i].probability = p;
    if (p < tol::prob_floor) continue;
    double estimate = 0.0;
    double second = 0.0;
    for (int k = 0; k < d; ++k) {
      const double conditional =
          std::norm(m.dot(sim.vectors.ket(k).vec())) * sim.state_weights(k) / p;
      estimate += conditional * sim.observable_values(k);
      second += conditional * sim.observable_values(k) * sim.observable_values(k);
    }
    rows[i].estimate = Complex(estimate, 0.0);
    rows[i].residual = second - estimate * estimate;
  }
  return rows;
}

}  // namespace cwv
