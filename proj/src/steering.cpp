#include "cwv/steering.hpp"

#include <cmath>
#include <string>

namespace cwv {

BipartiteState::BipartiteState(Eigen::MatrixXcd coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.rows() < 1 || coeffs_.cols() < 1) {
    throw DimensionError("bipartite state: both dimensions must be at least 1");
  }
  for (Eigen::Index j = 0; j < coeffs_.cols(); ++j) {
    for (Eigen::Index i = 0; i < coeffs_.rows(); ++i) {
      if (!std::isfinite(coeffs_(i, j).real()) || !std::isfinite(coeffs_(i, j).imag())) {
        throw ValidationError("bipartite state: non-finite coefficient");
      }
    }
  }
  const double n = coeffs_.norm();  // Frobenius
  if (std::abs(n - 1.0) > tol::norm) {
    throw ValidationError("bipartite state: norm deviates from 1 by " +
                          std::to_string(std::abs(n - 1.0)));
  }
}

DensityOperator BipartiteState::reduced() const {
  return DensityOperator(coeffs_ * coeffs_.adjoint());
}

DensityOperator PureStateDecomposition::reconstruct() const {
  int dim = 0;
  for (const auto& s : states) {
    if (s.has_value()) {
      dim = s->dim();
      break;
    }
  }
  if (dim == 0) throw ValidationError("decomposition: no defined branch to reconstruct from");
  SquareMatrix m = SquareMatrix::Zero(dim, dim);
  for (size_t i = 0; i < states.size(); ++i) {
    if (!states[i].has_value()) continue;
    m += weights(static_cast<Eigen::Index>(i)) * states[i]->vec() * states[i]->vec().adjoint();
  }
  return DensityOperator(std::move(m));
}

BipartiteState purify(const DensityOperator& rho) {
  const EigenSystem es = rho.eigensystem();
  const int d = rho.dim();
  Eigen::VectorXd roots(d);
  for (int k = 0; k < d; ++k) roots(k) = std::sqrt(std::max(es.values(k), 0.0));
  roots /= roots.norm();  // absorb the psd clipping so the state is exactly unit norm
  Eigen::MatrixXcd coeffs(d, d);
  for (int k = 0; k < d; ++k) coeffs.col(k) = roots(k) * es.vectors.ket(k).vec();
  return BipartiteState(std::move(coeffs));
}

PureStateDecomposition conditional_states(const BipartiteState& state,
                                          const MeasurementBasis& nu_basis) {
  if (nu_basis.dim() != state.reference_dim()) {
    throw DimensionError("conditional_states: reference basis dimension " +
                         std::to_string(nu_basis.dim()) + " vs " +
                         std::to_string(state.reference_dim()));
  }
  const int n = nu_basis.dim();
  Eigen::VectorXd weights(n);
  std::vector<std::optional<Ket>> states(n);
  for (int k = 0; k < n; ++k) {
    const Vector projected = state.coeffs() * nu_basis.ket(k).vec().conjugate();
    const double w = projected.squaredNorm();
    weights(k) = w;
    if (w >= tol::prob_floor) {
      states[k] = Ket(canonical_phase(projected / std::sqrt(w)));
    }
  }
  return PureStateDecomposition{std::move(weights), std::move(states), nu_basis};
}

DecompositionEstimate decomposition_estimate(const PureStateDecomposition& dec, const Ket& m,
                                             const HermitianObservable& a) {
  const int n = static_cast<int>(dec.states.size());
  if (m.dim() != a.dim()) {
    throw DimensionError("decomposition_estimate: outcome and observable dimensions differ");
  }

  // P(m) = sum_nu w_nu |<m|psi_nu>|^2, the reconstructed-state probability
  double pm = 0.0;
  std::vector<Complex> amps(n, Complex(0.0, 0.0));
  for (int k = 0; k < n; ++k) {
    if (!dec.states[k].has_value()) continue;
    if (dec.states[k]->dim() != m.dim()) {
      throw DimensionError("decomposition_estimate: branch and outcome dimensions differ");
    }
    amps[k] = m.vec().dot(dec.states[k]->vec());
    pm += dec.weights(k) * std::norm(amps[k]);
  }
  if (pm < tol::prob_floor) {
    throw UndefinedWeakValue("decomposition_estimate: outcome probability below threshold");
  }

  DecompositionEstimate out;
  out.conditionals = Eigen::VectorXd::Zero(n);
  out.branch_values.resize(n);
  out.estimate = Complex(0.0, 0.0);
  for (int k = 0; k < n; ++k) {
    if (!dec.states[k].has_value()) continue;
    const double conditional = dec.weights(k) * std::norm(amps[k]) / pm;
    out.conditionals(k) = conditional;
    if (conditional < tol::prob_floor) continue;  // zero weight, undefined branch value
    const Complex value = m.vec().dot(a.matrix() * dec.states[k]->vec()) / amps[k];
    out.branch_values[k] = value;
    out.estimate += conditional * value;
  }
  return out;
}

double decomposition_error(const PureStateDecomposition& dec, const Ket& m,
                           const HermitianObservable& a) {
  const DecompositionEstimate est = decomposition_estimate(dec, m, a);
  double second = 0.0;
  for (size_t k = 0; k < est.branch_values.size(); ++k) {
    if (!est.branch_values[k].has_value()) continue;
    second += est.conditionals(static_cast<Eigen::Index>(k)) * std::norm(*est.branch_values[k]);
  }
  return second - std::norm(est.estimate);
}

SteeringTransformCheck steering_transform_check(const Ket& psi_nu,
                                                const MeasurementBasis& lambda_basis, const Ket& m,
                                                const HermitianObservable& a) {
  if (psi_nu.dim() != a.dim() || m.dim() != a.dim() || lambda_basis.dim() != a.dim()) {
    throw DimensionError("steering_transform_check: dimensions differ");
  }
  const Complex den = m.vec().dot(psi_nu.vec());
  if (std::norm(den) < tol::prob_floor) {
    throw UndefinedWeakValue("steering_transform_check: post-selection orthogonal to the state");
  }
  const Complex lhs = m.vec().dot(a.matrix() * psi_nu.vec()) / den;

  Complex rhs(0.0, 0.0);
  for (int k = 0; k < lambda_basis.dim(); ++k) {
    const Vector& lambda = lambda_basis.ket(k).vec();
    const Complex overlap = lambda.dot(psi_nu.vec());  // <lambda|psi>
    if (std::abs(overlap) < tol::amp_floor) continue;  // zero transform coefficient
    const Complex m_lambda = m.vec().dot(lambda);
    if (std::norm(m_lambda) < tol::prob_floor) {
      throw UndefinedWeakValue(
          "steering_transform_check: intermediate context " + std::to_string(k) +
          " carries weight but is orthogonal to the post-selection");
    }
    const Complex coefficient = m_lambda * overlap / den;
    const Complex lambda_weak_value = m.vec().dot(a.matrix() * lambda) / m_lambda;
    rhs += coefficient * lambda_weak_value;
  }
  return SteeringTransformCheck{lhs, rhs};
}

TotalVarianceDecomposition total_variance_decomposition(const BipartiteState& state,
                                                        const MeasurementBasis& m_basis,
                                                        const MeasurementBasis& nu_basis,
                                                        const HermitianObservable& a) {
  if (m_basis.dim() != state.system_dim()) {
    throw DimensionError("total_variance_decomposition: system basis dimension mismatch");
  }
  if (nu_basis.dim() != state.reference_dim()) {
    throw DimensionError("total_variance_decomposition: reference basis dimension mismatch");
  }
  if (a.dim() != state.system_dim()) {
    throw DimensionError("total_variance_decomposition: observable dimension mismatch");
  }

  const int dm = m_basis.dim();
  const int dn = nu_basis.dim();

  // Unnormalized conditional branches phi_nu = coeffs conj(nu); weak values
  // use the unnormalized amplitudes directly since normalization cancels.
  std::vector<Vector> branches;
  branches.reserve(dn);
  for (int k = 0; k < dn; ++k) {
    branches.push_back(state.coeffs() * nu_basis.ket(k).vec().conjugate());
  }

  ContextTable table{m_basis, nu_basis, {}, {}};
  table.cells.assign(dm, std::vector<ContextCell>(dn));
  table.per_m.assign(dm, ContextRow{});

  double second_moment = 0.0;
  for (int i = 0; i < dm; ++i) {
    const Vector& m = m_basis.ket(i).vec();
    const Vector am = a.matrix() * m;  // reused: <m|A phi> = (A m)^dag phi
    double pm = 0.0;
    for (int k = 0; k < dn; ++k) {
      const Complex amp = m.dot(branches[k]);
      table.cells[i][k].joint_probability = std::norm(amp);
      pm += std::norm(amp);
    }
    table.per_m[i].probability = pm;
    Complex estimate(0.0, 0.0);
    double row_second = 0.0;
    for (int k = 0; k < dn; ++k) {
      ContextCell& cell = table.cells[i][k];
      cell.conditional_probability = pm >= tol::prob_floor ? cell.joint_probability / pm : 0.0;
      if (cell.joint_probability < tol::prob_floor) continue;
      const Complex amp = m.dot(branches[k]);
      const Complex wv = am.dot(branches[k]) / amp;
      cell.weak_value = wv;
      second_moment += cell.joint_probability * std::norm(wv);
      estimate += cell.conditional_probability * wv;
      row_second += cell.conditional_probability * std::norm(wv);
    }
    if (pm >= tol::prob_floor) {
      table.per_m[i].estimate = estimate;
      table.per_m[i].residual = row_second - std::norm(estimate);
    }
  }

  const double mean = (state.reduced().matrix() * a.matrix()).trace().real();
  return TotalVarianceDecomposition{std::move(table), second_moment - mean * mean};
}

EquivalenceCheck equivalence_check(const BipartiteState& state, const Ket& m,
                                   const MeasurementBasis& nu_basis,
                                   const HermitianObservable& a) {
  const DensityOperator rho = state.reduced();
  const double comm = commutator_max_norm(rho, a);
  if (comm > tol::identity) {
    throw CommutationError("equivalence_check: commutator max norm " + std::to_string(comm));
  }
  const double pm = m.vec().dot(rho.matrix() * m.vec()).real();
  if (pm < tol::prob_floor) {
    throw UndefinedWeakValue("equivalence_check: outcome probability below threshold");
  }

  const PureStateDecomposition dec = conditional_states(state, nu_basis);
  double lhs = 0.0;
  for (size_t k = 0; k < dec.states.size(); ++k) {
    if (!dec.states[k].has_value()) continue;
    const Complex amp = m.vec().dot(dec.states[k]->vec());
    const double conditional = dec.weights(static_cast<Eigen::Index>(k)) * std::norm(amp) / pm;
    if (conditional < tol::prob_floor) continue;
    const Complex wv = m.vec().dot(a.matrix() * dec.states[k]->vec()) / amp;
    lhs += conditional * std::norm(wv);
  }

  const SimultaneousEigensystem sim = simultaneous_eigensystem(rho, a);
  double rhs = 0.0;
  for (int k = 0; k < a.dim(); ++k) {
    const double conditional =
        std::norm(m.vec().dot(sim.vectors.ket(k).vec())) * sim.state_weights(k) / pm;
    rhs += conditional * sim.observable_values(k) * sim.observable_values(k);
  }
  return EquivalenceCheck{lhs, rhs};
}

}  // namespace cwv
