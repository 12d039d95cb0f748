#include "cwv/hilbert.hpp"

#include <cmath>
#include <random>

namespace cwv {

bool all_finite(const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v(i).real()) || !std::isfinite(v(i).imag())) return false;
  }
  return true;
}

bool all_finite(const SquareMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
    }
  }
  return true;
}

Vector canonical_phase(Vector v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i));
    if (mag > tol::phase_floor) {
      if (v(i).imag() == 0.0 && v(i).real() > 0.0) return v;  // already canonical
      const Complex phase = std::conj(v(i)) / mag;
      v *= phase;
      v(i) = Complex(mag, 0.0);  // pin the pivot so canonicalization is idempotent
      return v;
    }
  }
  return v;
}

Ket::Ket(Vector amps) : amps_(std::move(amps)) {
  if (amps_.size() < 1) throw DimensionError("ket: dimension must be at least 1");
  if (!all_finite(amps_)) throw ValidationError("ket: non-finite amplitude");
  const double n = amps_.norm();
  if (std::abs(n - 1.0) > tol::norm) {
    throw ValidationError("ket: norm deviates from 1 by " + std::to_string(std::abs(n - 1.0)));
  }
}

Ket Ket::normalized(const Vector& amps) {
  if (amps.size() < 1) throw DimensionError("ket: dimension must be at least 1");
  if (!all_finite(amps)) throw ValidationError("ket: non-finite amplitude");
  const double n = amps.norm();
  if (n < tol::amp_floor) throw ValidationError("ket: cannot normalize a zero vector");
  return Ket(canonical_phase(amps / n));
}

Complex inner_product(const Ket& x, const Ket& y) {
  if (x.dim() != y.dim()) {
    throw DimensionError("inner_product: dimensions " + std::to_string(x.dim()) + " vs " +
                         std::to_string(y.dim()));
  }
  return x.vec().dot(y.vec());  // Eigen conjugates the left operand
}

MeasurementBasis::MeasurementBasis(std::vector<Ket> kets) : kets_(std::move(kets)) {
  const int d = static_cast<int>(kets_.size());
  if (d < 1) throw DimensionError("basis: needs at least one ket");
  for (const Ket& k : kets_) {
    if (k.dim() != d) throw DimensionError("basis: ket dimension does not match basis size");
  }
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      const Complex ov = kets_[i].vec().dot(kets_[j].vec());
      const double target = (i == j) ? 1.0 : 0.0;
      if (std::abs(ov - target) > tol::ortho) {
        throw ValidationError("basis: kets " + std::to_string(i) + "," + std::to_string(j) +
                              " violate orthonormality by " + std::to_string(std::abs(ov - target)));
      }
    }
  }
}

MeasurementBasis MeasurementBasis::from_columns(const SquareMatrix& u) {
  if (u.rows() != u.cols()) throw DimensionError("basis: column matrix must be square");
  std::vector<Ket> kets;
  kets.reserve(u.cols());
  for (Eigen::Index c = 0; c < u.cols(); ++c) kets.emplace_back(Vector(u.col(c)));
  return MeasurementBasis(std::move(kets));
}

MeasurementBasis MeasurementBasis::computational(int dim) {
  if (dim < 1) throw DimensionError("basis: dimension must be at least 1");
  return from_columns(SquareMatrix::Identity(dim, dim));
}

MeasurementBasis MeasurementBasis::fourier(int dim) {
  if (dim < 1) throw DimensionError("basis: dimension must be at least 1");
  SquareMatrix u(dim, dim);
  const double s = 1.0 / std::sqrt(static_cast<double>(dim));
  for (int j = 0; j < dim; ++j) {
    for (int k = 0; k < dim; ++k) {
      const double angle = 2.0 * M_PI * j * k / dim;
      u(j, k) = s * Complex(std::cos(angle), std::sin(angle));
    }
  }
  for (int k = 0; k < dim; ++k) u.col(k) = canonical_phase(u.col(k));
  return from_columns(u);
}

SquareMatrix MeasurementBasis::as_matrix() const {
  const int d = dim();
  SquareMatrix u(d, d);
  for (int c = 0; c < d; ++c) u.col(c) = kets_[c].vec();
  return u;
}

namespace {

// Rebuilds the eigenvector columns [lo, hi) of a degenerate cluster from
// projections of the canonical basis, orthonormalized in index order. Makes
// the output independent of whatever basis the solver picked for the
// subspace; for diagonal inputs the result is the canonical basis itself.
void canonicalize_cluster(SquareMatrix& vectors, int lo, int hi) {
  const int d = static_cast<int>(vectors.rows());
  const int k = hi - lo;
  if (k <= 1) return;
  const SquareMatrix sub = vectors.middleCols(lo, k);
  const SquareMatrix proj = sub * sub.adjoint();
  int filled = 0;
  for (int i = 0; i < d && filled < k; ++i) {
    Vector w = proj.col(i);  // proj * e_i
    for (int j = 0; j < filled; ++j) {
      const Vector q = vectors.col(lo + j);
      w -= q.dot(w) * q;
    }
    const double n = w.norm();
    // A spanning candidate set always contains a vector with residual
    // norm^2 >= (k - filled)/d, so this threshold cannot strand the loop.
    if (n > 1e-6) {
      vectors.col(lo + filled) = w / n;
      ++filled;
    }
  }
}

}  // namespace

EigenSystem hermitian_eigendecomposition(const SquareMatrix& m) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw DimensionError("eigendecomposition: matrix must be square and non-empty");
  }
  if (!all_finite(m)) throw ValidationError("eigendecomposition: non-finite entry");
  const double herm_dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (herm_dev > tol::herm) {
    throw HermiticityError("eigendecomposition: Hermiticity deviation " + std::to_string(herm_dev));
  }

  const SquareMatrix h = (m + m.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<SquareMatrix> solver(h);
  if (solver.info() != Eigen::Success) {
    throw ValidationError("eigendecomposition: solver failed to converge");
  }

  const int d = static_cast<int>(m.rows());
  Eigen::VectorXd values(d);
  SquareMatrix vectors(d, d);
  for (int i = 0; i < d; ++i) {  // ascending -> descending
    values(i) = solver.eigenvalues()(d - 1 - i);
    vectors.col(i) = solver.eigenvectors().col(d - 1 - i);
  }

  int lo = 0;
  while (lo < d) {
    int hi = lo + 1;
    while (hi < d && values(hi - 1) - values(hi) < tol::degenerate) ++hi;
    canonicalize_cluster(vectors, lo, hi);
    lo = hi;
  }
  for (int c = 0; c < d; ++c) vectors.col(c) = canonical_phase(vectors.col(c));

  return EigenSystem{std::move(values), MeasurementBasis::from_columns(vectors)};
}

namespace {

Vector gaussian_vector(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(dim);
  for (int i = 0; i < dim; ++i) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    v(i) = Complex(re, im);
  }
  return v;
}

}  // namespace

Ket random_pure_state(int dim, std::uint64_t seed) {
  if (dim < 1) throw DimensionError("random_pure_state: dimension must be at least 1");
  std::mt19937_64 rng(seed);
  Vector v = gaussian_vector(dim, rng);
  while (v.norm() < 1e-6) v = gaussian_vector(dim, rng);
  return Ket(canonical_phase(v / v.norm()));
}

MeasurementBasis random_basis(int dim, std::uint64_t seed) {
  if (dim < 1) throw DimensionError("random_basis: dimension must be at least 1");
  std::mt19937_64 rng(seed);
  SquareMatrix u(dim, dim);
  for (int c = 0; c < dim; ++c) {
    Vector w = gaussian_vector(dim, rng);
    for (int pass = 0; pass < 2; ++pass) {  // second pass keeps orthogonality near machine precision
      for (int j = 0; j < c; ++j) {
        const Vector q = u.col(j);
        w -= q.dot(w) * q;
      }
    }
    while (w.norm() < 1e-8) {
      w = gaussian_vector(dim, rng);
      for (int j = 0; j < c; ++j) {
        const Vector q = u.col(j);
        w -= q.dot(w) * q;
      }
    }
    u.col(c) = canonical_phase(w / w.norm());
  }
  return MeasurementBasis::from_columns(u);
}

}  // namespace cwv
