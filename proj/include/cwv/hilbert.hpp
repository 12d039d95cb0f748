#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "cwv/errors.hpp"
#include "cwv/tolerances.hpp"

namespace cwv {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using SquareMatrix = Eigen::MatrixXcd;

bool all_finite(const Vector& v);
bool all_finite(const SquareMatrix& m);

// Multiplies by a global phase so that the first amplitude with modulus
// above tol::phase_floor is real and positive. Exactly idempotent: a vector
// that is already canonical is returned unchanged.
Vector canonical_phase(Vector v);

// Normalized complex amplitude vector. Construction validates finiteness and
// unit norm; it does not force the phase convention, so callers may build
// phase-rotated states. Operations that *produce* kets return canonical ones.
class Ket {
 public:
  explicit Ket(Vector amps);

  // Rescales to unit norm, then applies the canonical phase convention.
  static Ket normalized(const Vector& amps);

  int dim() const { return static_cast<int>(amps_.size()); }
  const Vector& vec() const { return amps_; }
  Complex amp(int i) const { return amps_(i); }

  Ket canonicalized() const { return Ket(canonical_phase(amps_)); }

 private:
  Vector amps_;
};

// <x|y> = sum_i conj(x_i) y_i
Complex inner_product(const Ket& x, const Ket& y);

// An ordered orthonormal basis; construction validates pairwise
// orthonormality to tol::ortho.
class MeasurementBasis {
 public:
  explicit MeasurementBasis(std::vector<Ket> kets);
  static MeasurementBasis from_columns(const SquareMatrix& u);
  static MeasurementBasis computational(int dim);
  // Discrete-Fourier basis; column k holds amplitudes w^(jk)/sqrt(d).
  static MeasurementBasis fourier(int dim);

  int dim() const { return static_cast<int>(kets_.size()); }
  const Ket& ket(int i) const { return kets_[i]; }
  const std::vector<Ket>& kets() const { return kets_; }
  SquareMatrix as_matrix() const;  // kets as columns

 private:
  std::vector<Ket> kets_;
};

struct EigenSystem {
  Eigen::VectorXd values;    // descending
  MeasurementBasis vectors;  // vectors.ket(k) pairs with values(k)
};

// Eigendecomposition of a Hermitian matrix with deterministic conventions:
// eigenvalues descending; inside each degenerate cluster (gap below
// tol::degenerate) the eigenvectors are rebuilt by projecting the canonical
// basis vectors onto the cluster subspace and orthonormalizing in index
// order; every eigenvector is phase-canonicalized.
EigenSystem hermitian_eigendecomposition(const SquareMatrix& m);

// Haar-distributed random ket: i.i.d. standard complex Gaussian amplitudes,
// normalized and phase-canonicalized. Same seed, same output.
Ket random_pure_state(int dim, std::uint64_t seed);

// Haar-distributed random orthonormal basis: Gaussian matrix followed by
// Gram-Schmidt in column order, columns phase-canonicalized. Deterministic
// per seed.
MeasurementBasis random_basis(int dim, std::uint64_t seed);

}  // namespace cwv
