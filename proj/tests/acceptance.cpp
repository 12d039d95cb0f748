// Acceptance suite: property-based checks at desk scale, one line per
// criterion. Exits nonzero if any criterion fails.

#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "cwv/harness.hpp"
#include "support.hpp"

using namespace cwv;

namespace {

int g_failures = 0;

void criterion(const std::string& name, bool ok, const std::string& detail) {
  std::printf("[%s] %-34s %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  if (!ok) ++g_failures;
}

std::string fmt(const char* format, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), format, a, b);
  return buf;
}

SquareMatrix pauli_z() {
  SquareMatrix m(2, 2);
  m << Complex(1, 0), Complex(0, 0), Complex(0, 0), Complex(-1, 0);
  return m;
}

Ket plus_state() {
  Vector v(2);
  v << Complex(1.0 / std::sqrt(2.0), 0), Complex(1.0 / std::sqrt(2.0), 0);
  return Ket(std::move(v));
}

MeasurementBasis circular_basis() {
  SquareMatrix u(2, 2);
  const double r = 1.0 / std::sqrt(2.0);
  u << Complex(r, 0), Complex(r, 0), Complex(0, r), Complex(0, -r);
  return MeasurementBasis::from_columns(u);
}

// Criteria 1 + 2: contextual variance completeness and the zero-error
// property of weak values, swept over 500 random triples per dimension.
void pure_state_sweeps() {
  double max_variance_dev = 0.0;
  double max_residual = 0.0;
  std::uint64_t seed = 1;
  for (const int dim : {2, 3, 4, 8}) {
    for (int trial = 0; trial < 500; ++trial, ++seed) {
      const Ket psi = random_pure_state(dim, seed);
      const MeasurementBasis basis = random_basis(dim, seed ^ 0x55555555ULL);
      const HermitianObservable a = testsupport::random_observable(dim, seed + 1000000);
      const VarianceReport vr = contextual_variance(psi, basis, a);
      max_variance_dev = std::max(
          max_variance_dev, std::abs(vr.variance - variance(DensityOperator::pure(psi), a)));
      max_residual = std::max(max_residual, zero_error_residual(psi, basis, a));
    }
  }
  criterion("variance-completeness", max_variance_dev <= 1e-9,
            fmt("dims {2,3,4,8} x 500 triples, max deviation %.3g (tol 1e-09)", max_variance_dev));
  criterion("zero-error-residual", max_residual <= 1e-9,
            fmt("same sweep, max ||error_op * psi|| %.3g (tol 1e-09)", max_residual));
}

// Criterion 3: estimates and errors from conditioned decompositions agree
// across reference bases and with the operator route, while individual
// branch weak values spread widely for the maximally mixed qubit.
void decomposition_independence() {
  double max_est_route_dev = 0.0;
  double max_err_route_dev = 0.0;
  double max_est_spread = 0.0;
  double max_err_spread = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int dim = 2 + trial % 3;
    const std::uint64_t seed = 70000 + trial;
    const DensityOperator rho = testsupport::random_density(dim, seed);
    const HermitianObservable a = testsupport::random_observable(dim, seed + 500);
    const BipartiteState extended = purify(rho);
    Ket m = random_pure_state(dim, seed + 900);
    for (std::uint64_t extra = 1; m.vec().dot(rho.matrix() * m.vec()).real() < 1e-6; ++extra) {
      m = random_pure_state(dim, seed + 900 + 7919 * extra);
    }
    const Complex op_estimate = mixed_weak_value(rho, m, a);
    const double op_error = residual_error(rho, m, a);

    double est_lo = 1e300, est_hi = -1e300, err_lo = 1e300, err_hi = -1e300;
    Complex first_estimate;
    for (int b = 0; b < 10; ++b) {
      const PureStateDecomposition dec =
          conditional_states(extended, random_basis(dim, seed * 10 + b));
      const Complex est = decomposition_estimate(dec, m, a).estimate;
      const double err = decomposition_error(dec, m, a);
      max_est_route_dev = std::max(max_est_route_dev, std::abs(est - op_estimate));
      max_err_route_dev = std::max(max_err_route_dev, std::abs(err - op_error));
      if (b == 0) first_estimate = est;
      max_est_spread = std::max(max_est_spread, std::abs(est - first_estimate));
      err_lo = std::min(err_lo, err);
      err_hi = std::max(err_hi, err);
      (void)est_lo;
      (void)est_hi;
    }
    max_err_spread = std::max(max_err_spread, err_hi - err_lo);
  }

  // Bell-state branch values: +-1 in the computational reference, +-i in the
  // circular one; the union spreads by 2.
  const BipartiteState bell = purify(DensityOperator::maximally_mixed(2));
  const HermitianObservable sz(pauli_z());
  const Ket m = plus_state();
  std::vector<Complex> branches;
  for (const MeasurementBasis& basis :
       {MeasurementBasis::computational(2), circular_basis()}) {
    const DecompositionEstimate est =
        decomposition_estimate(conditional_states(bell, basis), m, sz);
    for (const auto& bv : est.branch_values) {
      if (bv.has_value()) branches.push_back(*bv);
    }
  }
  double branch_spread = 0.0;
  for (size_t i = 0; i < branches.size(); ++i) {
    for (size_t j = i + 1; j < branches.size(); ++j) {
      branch_spread = std::max(branch_spread, std::abs(branches[i] - branches[j]));
    }
  }

  const bool ok = max_est_route_dev <= 1e-9 && max_err_route_dev <= 1e-9 &&
                  max_est_spread <= 1e-9 && max_err_spread <= 1e-9 && branch_spread >= 1.9;
  criterion("decomposition-independence", ok,
            fmt("100 states x 10 bases, max deviation %.3g (tol 1e-09); branch spread %.3f (>= 1.9)",
                std::max(std::max(max_est_route_dev, max_err_route_dev),
                         std::max(max_est_spread, max_err_spread)),
                branch_spread));
}

// Criterion 4: the weak-value transform through an intermediate basis,
// on 500 instances whose overlaps stay above 1e-6 in squared modulus.
void steering_transform_sweep() {
  double max_dev = 0.0;
  int tested = 0;
  std::uint64_t seed = 80000;
  while (tested < 500) {
    ++seed;
    const int dim = 2 + static_cast<int>(seed % 3);
    const Ket psi = random_pure_state(dim, seed);
    const MeasurementBasis lambda = random_basis(dim, seed ^ 0xabcdefULL);
    const Ket m = random_pure_state(dim, seed + 31);
    const HermitianObservable a = testsupport::random_observable(dim, seed + 71);
    if (std::norm(inner_product(m, psi)) < 1e-6) continue;
    bool admissible = true;
    for (int k = 0; k < dim; ++k) {
      if (std::norm(inner_product(m, lambda.ket(k))) < 1e-6) admissible = false;
    }
    if (!admissible) continue;
    const SteeringTransformCheck check = steering_transform_check(psi, lambda, m, a);
    max_dev = std::max(max_dev, std::abs(check.lhs - check.rhs));
    ++tested;
  }
  criterion("steering-transform", max_dev <= 1e-9,
            fmt("500 instances at dims 2-4, max |lhs - rhs| %.3g (tol 1e-09)", max_dev));
}

// Criterion 5: the context-grid variance decomposition matches the trace form
// for 200 random bipartite states.
void total_variance_sweep() {
  double max_dev = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::uint64_t seed = 90000 + trial;
    const int ds = 2 + trial % 3;
    const int dr = 2 + (trial / 3) % 3;
    const BipartiteState e = testsupport::random_bipartite(ds, dr, seed);
    const HermitianObservable a = testsupport::random_observable(ds, seed + 13);
    const TotalVarianceDecomposition tvd = total_variance_decomposition(
        e, random_basis(ds, seed + 29), random_basis(dr, seed + 43), a);
    max_dev = std::max(max_dev, std::abs(tvd.variance - variance(e.reduced(), a)));
  }
  criterion("total-variance", max_dev <= 1e-9,
            fmt("200 bipartite states up to 4x4, max deviation %.3g (tol 1e-09)", max_dev));
}

// Criterion 6: for commuting pairs the Bayesian eigenvalue route equals the
// operator route, and the averaged squares agree across contexts.
void commuting_case_sweep() {
  double max_bayes_dev = 0.0;
  double max_eq_dev = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::uint64_t seed = 100000 + trial;
    const int dim = 2 + trial % 3;
    const auto [rho, a] = testsupport::random_commuting_pair(dim, seed);
    const MeasurementBasis basis = random_basis(dim, seed + 17);

    const std::vector<CommutingOutcome> rows = classical_commuting_stats(rho, basis, a);
    for (int i = 0; i < dim; ++i) {
      if (!rows[i].estimate.has_value()) continue;
      max_bayes_dev = std::max(
          max_bayes_dev, std::abs(*rows[i].estimate - mixed_weak_value(rho, basis.ket(i), a)));
      max_bayes_dev = std::max(
          max_bayes_dev, std::abs(*rows[i].residual - residual_error(rho, basis.ket(i), a)));
    }

    const BipartiteState e = purify(rho);
    const MeasurementBasis nub = random_basis(dim, seed + 61);
    for (int i = 0; i < dim; ++i) {
      if (basis.ket(i).vec().dot(rho.matrix() * basis.ket(i).vec()).real() < 1e-9) continue;
      const EquivalenceCheck eq = equivalence_check(e, basis.ket(i), nub, a);
      max_eq_dev = std::max(max_eq_dev, std::abs(eq.lhs - eq.rhs));
    }
  }
  const bool ok = max_bayes_dev <= 1e-9 && max_eq_dev <= 1e-9;
  criterion("commuting-case", ok,
            fmt("200 commuting pairs, Bayesian route dev %.3g, averaged-squares dev %.3g (tol 1e-09)",
                max_bayes_dev, max_eq_dev));
}

// Criterion 7: the shipped scenarios reproduce their hand-computed numbers.
void golden_scenarios() {
  bool ok = true;
  std::string detail;

  const Scenario anomalous = load_builtin("anomalous-qubit");
  const VarianceReport vr =
      contextual_variance(*anomalous.ket, anomalous.m_basis(), anomalous.obs());
  ok &= std::abs(*vr.per_outcome.values[0] - Complex(1.0 / 3.0, 0)) <= 1e-9;
  ok &= std::abs(*vr.per_outcome.values[1] - Complex(3.0, 0)) <= 1e-9;
  ok &= std::abs(vr.variance - 0.64) <= 1e-9;

  const Scenario steering = load_builtin("mixed-qubit-steering");
  const BipartiteState bell = *steering.bipartite;
  const HermitianObservable& sz = steering.obs();
  const Ket m = plus_state();
  const DensityOperator reduced = bell.reduced();
  ok &= std::abs(residual_error(reduced, m, sz) - 1.0) <= 1e-9;

  const PureStateDecomposition eigen_branches =
      conditional_states(bell, MeasurementBasis::computational(2));
  const PureStateDecomposition imaginary_branches = conditional_states(bell, circular_basis());
  const DecompositionEstimate real_est = decomposition_estimate(eigen_branches, m, sz);
  const DecompositionEstimate imag_est = decomposition_estimate(imaginary_branches, m, sz);
  ok &= std::abs(*real_est.branch_values[0] - Complex(1, 0)) <= 1e-9;
  ok &= std::abs(*real_est.branch_values[1] - Complex(-1, 0)) <= 1e-9;
  ok &= std::abs(*imag_est.branch_values[0] - Complex(0, 1)) <= 1e-9;
  ok &= std::abs(*imag_est.branch_values[1] - Complex(0, -1)) <= 1e-9;
  ok &= std::abs(decomposition_error(eigen_branches, m, sz) - 1.0) <= 1e-9;
  ok &= std::abs(decomposition_error(imaginary_branches, m, sz) - 1.0) <= 1e-9;

  criterion("golden-scenarios", ok,
            "anomalous-qubit {1/3, 3, 0.64}; mixed-qubit-steering eta^2 = 1 under +-1 and +-i "
            "branches");
}

// Criterion 8: the CHSH demonstration.
void chsh_criterion() {
  const Report report = chsh_demo();
  const CheckRecord* s = find_check(report, "chsh-value");
  const CheckRecord* neg = find_check(report, "negative-context-weight");
  double max_pair_dev = 0.0;
  for (const char* id : {"correlation-routes-ab", "correlation-routes-abp",
                         "correlation-routes-apb", "correlation-routes-apbp"}) {
    const CheckRecord* pair = find_check(report, id);
    if (pair == nullptr || !pair->deviation.has_value()) {
      criterion("chsh-demo", false, "missing correlation check");
      return;
    }
    max_pair_dev = std::max(max_pair_dev, *pair->deviation);
  }
  const double s_value = s->lhs->real();
  const double min_re = neg->lhs->real();
  const bool ok = std::abs(s_value - 2.0 * std::sqrt(2.0)) <= 1e-9 && max_pair_dev <= 1e-9 &&
                  min_re < 0.0;
  criterion("chsh-demo", ok,
            fmt("S = %.10f (2*sqrt(2) within 1e-09), min Re[projector wv] = %.4f < 0", s_value,
                min_re));
}

}  // namespace

int main() {
  std::printf("acceptance: contextual weak-value identity suite\n");
  pure_state_sweeps();
  decomposition_independence();
  steering_transform_sweep();
  total_variance_sweep();
  commuting_case_sweep();
  golden_scenarios();
  chsh_criterion();
  std::printf("%d criterion(s) failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
