#pragma once

#include <random>

#include "cwv/steering.hpp"

// Deterministic random inputs for property sweeps. These generators are
// test-side utilities and stay independent of the library's Haar samplers
// where the sweep needs mixed states or observables.
namespace testsupport {

inline cwv::SquareMatrix random_gaussian_matrix(int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  cwv::SquareMatrix g(dim, dim);
  for (int c = 0; c < dim; ++c) {
    for (int r = 0; r < dim; ++r) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      g(r, c) = cwv::Complex(re, im);
    }
  }
  return g;
}

inline cwv::HermitianObservable random_observable(int dim, std::uint64_t seed) {
  const cwv::SquareMatrix g = random_gaussian_matrix(dim, seed);
  return cwv::HermitianObservable((g + g.adjoint()) / 2.0);
}

inline cwv::SquareMatrix random_hermitian(int dim, std::uint64_t seed) {
  const cwv::SquareMatrix g = random_gaussian_matrix(dim, seed);
  return (g + g.adjoint()) / 2.0;
}

// Random full-rank mixture of Haar states.
inline cwv::DensityOperator random_density(int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.1, 1.0);
  Eigen::VectorXd weights(dim);
  for (int i = 0; i < dim; ++i) weights(i) = uniform(rng);
  weights /= weights.sum();
  std::vector<cwv::Ket> states;
  for (int i = 0; i < dim; ++i) {
    states.push_back(cwv::random_pure_state(dim, seed * 1000003ULL + 17ULL * i + 1ULL));
  }
  return cwv::DensityOperator::from_mixture(weights, states);
}

// Commuting pair sharing a Haar eigenbasis: rho from random probabilities,
// the observable from random Gaussian eigenvalues.
inline std::pair<cwv::DensityOperator, cwv::HermitianObservable> random_commuting_pair(
    int dim, std::uint64_t seed) {
  const cwv::MeasurementBasis basis = cwv::random_basis(dim, seed);
  const cwv::SquareMatrix u = basis.as_matrix();
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> uniform(0.1, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd probs(dim);
  Eigen::VectorXd values(dim);
  for (int i = 0; i < dim; ++i) {
    probs(i) = uniform(rng);
    values(i) = gauss(rng);
  }
  probs /= probs.sum();
  const cwv::SquareMatrix rho = u * probs.cast<cwv::Complex>().asDiagonal() * u.adjoint();
  const cwv::SquareMatrix a = u * values.cast<cwv::Complex>().asDiagonal() * u.adjoint();
  return {cwv::DensityOperator((rho + rho.adjoint()) / 2.0),
          cwv::HermitianObservable((a + a.adjoint()) / 2.0)};
}

// Random bipartite pure state with Gaussian coefficients.
inline cwv::BipartiteState random_bipartite(int dim_s, int dim_r, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXcd c(dim_s, dim_r);
  for (int j = 0; j < dim_r; ++j) {
    for (int i = 0; i < dim_s; ++i) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      c(i, j) = cwv::Complex(re, im);
    }
  }
  c /= c.norm();
  return cwv::BipartiteState(c);
}

inline double complex_distance(const cwv::Complex& a, const cwv::Complex& b) {
  return std::abs(a - b);
}

}  // namespace testsupport
