#include "cwv/hilbert.hpp"

#include <doctest.h>

#include "support.hpp"

using namespace cwv;

namespace {

Vector make_vec(std::initializer_list<Complex> amps) {
  Vector v(static_cast<Eigen::Index>(amps.size()));
  Eigen::Index i = 0;
  for (const Complex& a : amps) v(i++) = a;
  return v;
}

// Independent closed-form eigensolve for 2x2 Hermitian [[a, b], [conj(b), d]].
std::pair<double, double> eigenvalues_2x2(double a, Complex b, double d) {
  const double mid = (a + d) / 2.0;
  const double radius = std::sqrt((a - d) * (a - d) / 4.0 + std::norm(b));
  return {mid + radius, mid - radius};
}

}  // namespace

TEST_CASE("inner product basics") {
  const Ket e0(make_vec({1.0, 0.0}));
  const Ket e1(make_vec({0.0, 1.0}));
  const Ket plus(make_vec({1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)}));

  CHECK(std::abs(inner_product(e0, e1)) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(inner_product(e0, e0).real() == doctest::Approx(1.0));
  CHECK(inner_product(e0, plus).real() == doctest::Approx(0.70710678118654746));

  // conjugate symmetry
  const Ket mixed(make_vec({Complex(0.6, 0.0), Complex(0.0, 0.8)}));
  const Complex xy = inner_product(mixed, plus);
  const Complex yx = inner_product(plus, mixed);
  CHECK(std::abs(xy - std::conj(yx)) < 1e-15);

  CHECK_THROWS_AS(inner_product(e0, Ket(make_vec({1.0, 0.0, 0.0}))), DimensionError);
}

TEST_CASE("ket validation") {
  CHECK_THROWS_AS(Ket(make_vec({0.7, 0.7})), ValidationError);
  const Vector empty;
  CHECK_THROWS_AS(Ket{empty}, DimensionError);
  const Ket k = Ket::normalized(make_vec({3.0, 1.0}));
  CHECK(k.amp(0).real() == doctest::Approx(std::sqrt(0.9)));
  CHECK(k.amp(1).real() == doctest::Approx(std::sqrt(0.1)));
}

TEST_CASE("phase canonicalization is exactly idempotent") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Vector v = random_pure_state(5, seed).vec();
    v *= std::polar(1.0, 0.1 + 0.01 * static_cast<double>(seed));
    const Vector once = canonical_phase(v);
    const Vector twice = canonical_phase(once);
    for (int i = 0; i < 5; ++i) {
      CHECK(once(i).real() == twice(i).real());
      CHECK(once(i).imag() == twice(i).imag());
    }
    CHECK(once(0).imag() == 0.0);
    CHECK(once(0).real() > 0.0);
  }
}

TEST_CASE("eigendecomposition of a diagonal matrix") {
  SquareMatrix m = SquareMatrix::Zero(2, 2);
  m(0, 0) = 0.25;
  m(1, 1) = 0.75;
  const EigenSystem es = hermitian_eigendecomposition(m);
  CHECK(es.values(0) == doctest::Approx(0.75));
  CHECK(es.values(1) == doctest::Approx(0.25));
  CHECK(std::abs(es.vectors.ket(0).amp(1) - Complex(1.0, 0.0)) < 1e-12);
  CHECK(std::abs(es.vectors.ket(1).amp(0) - Complex(1.0, 0.0)) < 1e-12);
}

TEST_CASE("eigendecomposition matches the closed-form 2x2 solve") {
  SquareMatrix x(2, 2);
  x << Complex(0, 0), Complex(1, 0), Complex(1, 0), Complex(0, 0);
  const auto [hi, lo] = eigenvalues_2x2(0.0, Complex(1.0, 0.0), 0.0);
  const EigenSystem es = hermitian_eigendecomposition(x);
  CHECK(es.values(0) == doctest::Approx(hi));
  CHECK(es.values(1) == doctest::Approx(lo));
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(es.vectors.ket(0).amp(0) - Complex(r, 0)) < 1e-12);
  CHECK(std::abs(es.vectors.ket(0).amp(1) - Complex(r, 0)) < 1e-12);
  CHECK(std::abs(es.vectors.ket(1).amp(0) - Complex(r, 0)) < 1e-12);
  CHECK(std::abs(es.vectors.ket(1).amp(1) - Complex(-r, 0)) < 1e-12);

  // random 2x2 Hermitian against the same oracle
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const SquareMatrix h = testsupport::random_hermitian(2, seed);
    const auto [top, bottom] = eigenvalues_2x2(h(0, 0).real(), h(0, 1), h(1, 1).real());
    const EigenSystem sys = hermitian_eigendecomposition(h);
    CHECK(sys.values(0) == doctest::Approx(top).epsilon(1e-12));
    CHECK(sys.values(1) == doctest::Approx(bottom).epsilon(1e-12));
  }
}

TEST_CASE("degenerate eigendecomposition falls back to the canonical basis") {
  const EigenSystem es = hermitian_eigendecomposition(SquareMatrix::Identity(2, 2) / 2.0);
  CHECK(es.values(0) == doctest::Approx(0.5));
  CHECK(es.values(1) == doctest::Approx(0.5));
  CHECK(std::abs(es.vectors.ket(0).amp(0) - Complex(1.0, 0.0)) < 1e-12);
  CHECK(std::abs(es.vectors.ket(1).amp(1) - Complex(1.0, 0.0)) < 1e-12);
}

TEST_CASE("eigendecomposition rejects non-Hermitian input") {
  SquareMatrix m(2, 2);
  m << Complex(0, 0), Complex(1, 0), Complex(2, 0), Complex(0, 0);
  CHECK_THROWS_AS(hermitian_eigendecomposition(m), HermiticityError);
}

TEST_CASE("eigendecomposition reconstructs the input") {
  for (int dim : {2, 3, 5, 8, 16}) {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
      const SquareMatrix h = testsupport::random_hermitian(dim, 91ULL * dim + seed);
      const EigenSystem es = hermitian_eigendecomposition(h);
      SquareMatrix rebuilt = SquareMatrix::Zero(dim, dim);
      for (int k = 0; k < dim; ++k) {
        const Vector& v = es.vectors.ket(k).vec();
        rebuilt += es.values(k) * v * v.adjoint();
      }
      CHECK((h - rebuilt).cwiseAbs().maxCoeff() < 1e-9);
      for (int k = 0; k < dim; ++k) {
        const Vector& v = es.vectors.ket(k).vec();
        CHECK((h * v - es.values(k) * v).norm() < 1e-9);
      }
    }
  }
}

TEST_CASE("random pure state determinism and dimension one") {
  const Ket one = random_pure_state(1, 12345);
  CHECK(std::abs(one.amp(0) - Complex(1.0, 0.0)) < 1e-12);

  const Ket a = random_pure_state(4, 7);
  const Ket b = random_pure_state(4, 7);
  for (int i = 0; i < 4; ++i) {
    CHECK(a.amp(i).real() == b.amp(i).real());
    CHECK(a.amp(i).imag() == b.amp(i).imag());
  }
  CHECK_THROWS_AS(random_pure_state(0, 1), DimensionError);
}

TEST_CASE("haar states hit the first-moment value") {
  // E|<e0|psi>|^2 = 1/d for Haar states; Monte Carlo at dim 4.
  const int draws = 10000;
  double total = 0.0;
  for (int i = 0; i < draws; ++i) {
    total += std::norm(random_pure_state(4, 1000 + i).amp(0));
  }
  CHECK(total / draws == doctest::Approx(0.25).epsilon(0.08));
}

TEST_CASE("random basis orthonormality and determinism") {
  const MeasurementBasis one = random_basis(1, 3);
  CHECK(std::abs(one.ket(0).amp(0) - Complex(1.0, 0.0)) < 1e-12);

  for (std::uint64_t seed : {1ULL, 11ULL, 99ULL}) {
    const MeasurementBasis basis = random_basis(5, seed);
    const SquareMatrix u = basis.as_matrix();
    CHECK((u.adjoint() * u - SquareMatrix::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-10);
  }

  const MeasurementBasis a = random_basis(3, 11);
  const MeasurementBasis b = random_basis(3, 11);
  for (int c = 0; c < 3; ++c) {
    for (int r = 0; r < 3; ++r) {
      CHECK(a.ket(c).amp(r).real() == b.ket(c).amp(r).real());
      CHECK(a.ket(c).amp(r).imag() == b.ket(c).amp(r).imag());
    }
  }
  CHECK_THROWS_AS(random_basis(0, 1), DimensionError);
}

TEST_CASE("basis constructor rejects non-orthonormal kets") {
  const Ket e0(make_vec({1.0, 0.0}));
  const Ket nearly(make_vec({std::sqrt(1.0 - 1e-4), 1e-2}));
  CHECK_THROWS_AS(MeasurementBasis({e0, nearly}), ValidationError);
}

TEST_CASE("produced kets are normalized") {
  for (int dim : {2, 3, 8}) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      CHECK(std::abs(random_pure_state(dim, seed).vec().norm() - 1.0) <= tol::norm);
    }
  }
}
