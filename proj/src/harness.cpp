#include "cwv/harness.hpp"

#include <cmath>
#include <cstdio>
#include <functional>

namespace cwv {

namespace identity {

constexpr const char* mean = "sum_m P(m) A(m) == tr(rho A)";
constexpr const char* completeness =
    "sum_m P(m)|A(m)|^2 - |sum_m P(m) A(m)|^2 == <A^2> - <A>^2";
constexpr const char* zero_error = "(A - sum_m A(m)|m><m|)|psi> == 0";
constexpr const char* pure_residual = "eta^2(m) == 0 for pure preparations";
constexpr const char* total_error_two_routes =
    "sum_m <m|(A - A(m)) rho (A - A*(m))|m> == sum_m P(m) eta^2(m)";
constexpr const char* decomposition_estimate_independence =
    "sum_nu P(nu|rho;m) A_nu(m) == <m|A rho|m> / <m|rho|m>";
constexpr const char* decomposition_error_independence =
    "sum_nu P(nu|rho;m)|A_nu(m)|^2 - |A(m)|^2 == eta^2(m)";
constexpr const char* steering_transform =
    "A_psi(m) == sum_l [<m|l><l|psi>/<m|psi>] A_l(m)";
constexpr const char* total_variance =
    "sum_mn P(m;nu)|A_nu(m)|^2 - tr(rho A)^2 == tr(rho A^2) - tr(rho A)^2";
constexpr const char* averaged_squares =
    "sum_nu P(nu|rho;m)|A_nu(m)|^2 == sum_a P(a|rho;m) A_a^2";
constexpr const char* bayes_estimate = "sum_a P(a|rho;m) A_a == <m|A rho|m> / <m|rho|m>";
constexpr const char* bayes_residual = "sum_a P(a|rho;m) A_a^2 - A(m)^2 == eta^2(m)";

}  // namespace identity

double effective_tolerance(const Scenario& s, std::optional<double> cli_override) {
  if (cli_override.has_value()) return *cli_override;
  if (s.tolerance_override.has_value()) return *s.tolerance_override;
  return tol::identity;
}

namespace {

constexpr const char* kNoReference = "requires a reference basis (nu_basis)";
constexpr const char* kMixedOnlyPure = "requires a pure-ket state preparation";
constexpr const char* kNotCommuting = "state does not commute with the observable";
constexpr const char* kOrthogonalOutcome =
    "some outcome is orthogonal to the state; the zero-weight convention leaves the sum short";

// Runs one check body, converting library errors into an "error" record.
void add_check(Report& report, const std::string& id, const char* identity_str,
               const std::function<CheckRecord()>& body) {
  try {
    report.checks.push_back(body());
  } catch (const Error& e) {
    report.checks.push_back(CheckRecord::errored(id, identity_str, e.what()));
  }
}

struct MaxDeviation {
  double deviation = -1.0;
  Complex lhs;
  Complex rhs;
  int instances = 0;

  void update(Complex l, Complex r) {
    ++instances;
    const double d = std::abs(l - r);
    if (d > deviation) {
      deviation = d;
      lhs = l;
      rhs = r;
    }
  }

  CheckRecord record(const std::string& id, const char* identity_str, double tolerance,
                     const std::string& what) const {
    return CheckRecord::compared(id, identity_str, lhs, rhs, tolerance,
                                 "max deviation over " + std::to_string(instances) + " " + what);
  }
};

}  // namespace

Report run_identity_suite(const Scenario& s, std::optional<double> cli_tolerance) {
  Report report;
  report.scenario = s.name;
  const double tolerance = effective_tolerance(s, cli_tolerance);

  const HermitianObservable& a = s.obs();
  const MeasurementBasis mb = s.m_basis();
  const DensityOperator rho = s.reduced_density();
  const std::optional<MeasurementBasis> nub = s.nu_basis();

  const auto outcome_probability = [&](int i) {
    return mb.ket(i).vec().dot(rho.matrix() * mb.ket(i).vec()).real();
  };
  bool all_outcomes_defined = true;
  for (int i = 0; i < mb.dim(); ++i) {
    if (outcome_probability(i) < tol::prob_floor) all_outcomes_defined = false;
  }
  const bool commuting = commutator_max_norm(rho, a) <= tol::identity;

  add_check(report, "mean-consistency", identity::mean, [&] {
    Complex mean(0.0, 0.0);
    for (int i = 0; i < mb.dim(); ++i) {
      const double p = outcome_probability(i);
      if (p < tol::prob_floor) continue;
      mean += p * mixed_weak_value(rho, mb.ket(i), a);
    }
    const double trace = (rho.matrix() * a.matrix()).trace().real();
    return CheckRecord::compared("mean-consistency", identity::mean, mean, Complex(trace, 0.0),
                                 tolerance);
  });

  add_check(report, "variance-completeness", identity::completeness, [&]() -> CheckRecord {
    if (s.form != StateForm::ket) {
      return CheckRecord::skipped("variance-completeness", identity::completeness, kMixedOnlyPure);
    }
    if (!all_outcomes_defined) {
      return CheckRecord::skipped("variance-completeness", identity::completeness,
                                  kOrthogonalOutcome);
    }
    const VarianceReport vr = contextual_variance(*s.ket, mb, a);
    return CheckRecord::compared("variance-completeness", identity::completeness,
                                 Complex(vr.variance, 0.0), Complex(variance(rho, a), 0.0),
                                 tolerance);
  });

  add_check(report, "zero-error-residual", identity::zero_error, [&]() -> CheckRecord {
    if (s.form != StateForm::ket) {
      return CheckRecord::skipped("zero-error-residual", identity::zero_error, kMixedOnlyPure);
    }
    if (!all_outcomes_defined) {
      return CheckRecord::skipped("zero-error-residual", identity::zero_error,
                                  kOrthogonalOutcome);
    }
    const double residual = zero_error_residual(*s.ket, mb, a);
    return CheckRecord::compared("zero-error-residual", identity::zero_error,
                                 Complex(residual, 0.0), Complex(0.0, 0.0), tolerance);
  });

  add_check(report, "pure-state-residual", identity::pure_residual, [&]() -> CheckRecord {
    if (s.form != StateForm::ket) {
      return CheckRecord::skipped("pure-state-residual", identity::pure_residual, kMixedOnlyPure);
    }
    MaxDeviation max;
    for (int i = 0; i < mb.dim(); ++i) {
      if (outcome_probability(i) < tol::prob_floor) continue;
      max.update(Complex(residual_error(rho, mb.ket(i), a), 0.0), Complex(0.0, 0.0));
    }
    if (max.instances == 0) {
      return CheckRecord::skipped("pure-state-residual", identity::pure_residual,
                                  "no outcome has weight above the probability floor");
    }
    return max.record("pure-state-residual", identity::pure_residual, tolerance, "outcomes");
  });

  add_check(report, "total-error-consistency", identity::total_error_two_routes, [&] {
    const double operator_route = total_error(rho, mb, a);
    double conditional_route = 0.0;
    for (int i = 0; i < mb.dim(); ++i) {
      const double p = outcome_probability(i);
      if (p < tol::prob_floor) {
        const Vector am = a.matrix() * mb.ket(i).vec();
        conditional_route += am.dot(rho.matrix() * am).real();
      } else {
        conditional_route += p * residual_error(rho, mb.ket(i), a);
      }
    }
    return CheckRecord::compared("total-error-consistency", identity::total_error_two_routes,
                                 Complex(operator_route, 0.0), Complex(conditional_route, 0.0),
                                 tolerance);
  });

  // Steering-side checks share the bipartite extension and the branch list.
  std::optional<PureStateDecomposition> dec;
  std::optional<BipartiteState> extended;
  if (nub.has_value()) {
    extended = s.extended_state();
    dec = conditional_states(*extended, *nub);
  }

  add_check(report, "decomposition-estimate-independence",
            identity::decomposition_estimate_independence, [&]() -> CheckRecord {
              if (!dec.has_value()) {
                return CheckRecord::skipped("decomposition-estimate-independence",
                                            identity::decomposition_estimate_independence,
                                            kNoReference);
              }
              MaxDeviation max;
              for (int i = 0; i < mb.dim(); ++i) {
                if (outcome_probability(i) < tol::prob_floor) continue;
                max.update(decomposition_estimate(*dec, mb.ket(i), a).estimate,
                           mixed_weak_value(rho, mb.ket(i), a));
              }
              if (max.instances == 0) {
                return CheckRecord::skipped("decomposition-estimate-independence",
                                            identity::decomposition_estimate_independence,
                                            "no outcome has weight above the probability floor");
              }
              return max.record("decomposition-estimate-independence",
                                identity::decomposition_estimate_independence, tolerance,
                                "outcomes");
            });

  add_check(report, "decomposition-error-independence",
            identity::decomposition_error_independence, [&]() -> CheckRecord {
              if (!dec.has_value()) {
                return CheckRecord::skipped("decomposition-error-independence",
                                            identity::decomposition_error_independence,
                                            kNoReference);
              }
              MaxDeviation max;
              for (int i = 0; i < mb.dim(); ++i) {
                if (outcome_probability(i) < tol::prob_floor) continue;
                max.update(Complex(decomposition_error(*dec, mb.ket(i), a), 0.0),
                           Complex(residual_error(rho, mb.ket(i), a), 0.0));
              }
              if (max.instances == 0) {
                return CheckRecord::skipped("decomposition-error-independence",
                                            identity::decomposition_error_independence,
                                            "no outcome has weight above the probability floor");
              }
              return max.record("decomposition-error-independence",
                                identity::decomposition_error_independence, tolerance, "outcomes");
            });

  add_check(report, "steering-transform", identity::steering_transform, [&]() -> CheckRecord {
    // Pure preparations transform through the observable eigenbasis; mixed
    // ones transform every conditioned branch through the state eigenbasis.
    std::vector<Ket> branches;
    std::optional<MeasurementBasis> lambda;
    if (s.form == StateForm::ket) {
      branches.push_back(*s.ket);
      lambda = a.eigensystem().vectors;
    } else if (dec.has_value()) {
      for (const auto& st : dec->states) {
        if (st.has_value()) branches.push_back(*st);
      }
      lambda = rho.eigensystem().vectors;
    } else {
      return CheckRecord::skipped("steering-transform", identity::steering_transform,
                                  kNoReference);
    }

    MaxDeviation max;
    int skipped = 0;
    for (const Ket& psi : branches) {
      for (int i = 0; i < mb.dim(); ++i) {
        const Ket& m = mb.ket(i);
        if (std::norm(inner_product(m, psi)) < tol::prob_floor) {
          ++skipped;
          continue;
        }
        bool admissible = true;
        for (int k = 0; k < lambda->dim(); ++k) {
          const bool carries_weight =
              std::abs(inner_product(lambda->ket(k), psi)) >= tol::amp_floor;
          if (carries_weight && std::norm(inner_product(m, lambda->ket(k))) < tol::prob_floor) {
            admissible = false;
            break;
          }
        }
        if (!admissible) {
          ++skipped;
          continue;
        }
        const SteeringTransformCheck check = steering_transform_check(psi, *lambda, m, a);
        max.update(check.lhs, check.rhs);
      }
    }
    if (max.instances == 0) {
      return CheckRecord::skipped("steering-transform", identity::steering_transform,
                                  "no (branch, outcome) instance satisfies the preconditions");
    }
    CheckRecord rec =
        max.record("steering-transform", identity::steering_transform, tolerance, "instances");
    if (skipped > 0) rec.detail += " (" + std::to_string(skipped) + " inadmissible skipped)";
    return rec;
  });

  add_check(report, "total-variance", identity::total_variance, [&]() -> CheckRecord {
    if (!nub.has_value()) {
      return CheckRecord::skipped("total-variance", identity::total_variance, kNoReference);
    }
    TotalVarianceDecomposition tvd = total_variance_decomposition(*extended, mb, *nub, a);
    report.table = std::move(tvd.table);
    return CheckRecord::compared("total-variance", identity::total_variance,
                                 Complex(tvd.variance, 0.0), Complex(variance(rho, a), 0.0),
                                 tolerance);
  });

  add_check(report, "averaged-squares-equivalence", identity::averaged_squares,
            [&]() -> CheckRecord {
              if (!nub.has_value()) {
                return CheckRecord::skipped("averaged-squares-equivalence",
                                            identity::averaged_squares, kNoReference);
              }
              if (!commuting) {
                return CheckRecord::skipped("averaged-squares-equivalence",
                                            identity::averaged_squares, kNotCommuting);
              }
              MaxDeviation max;
              for (int i = 0; i < mb.dim(); ++i) {
                if (outcome_probability(i) < tol::prob_floor) continue;
                const EquivalenceCheck eq = equivalence_check(*extended, mb.ket(i), *nub, a);
                max.update(Complex(eq.lhs, 0.0), Complex(eq.rhs, 0.0));
              }
              if (max.instances == 0) {
                return CheckRecord::skipped("averaged-squares-equivalence",
                                            identity::averaged_squares,
                                            "no outcome has weight above the probability floor");
              }
              return max.record("averaged-squares-equivalence", identity::averaged_squares,
                                tolerance, "outcomes");
            });

  add_check(report, "bayesian-estimate", identity::bayes_estimate, [&]() -> CheckRecord {
    if (!commuting) {
      return CheckRecord::skipped("bayesian-estimate", identity::bayes_estimate, kNotCommuting);
    }
    const std::vector<CommutingOutcome> rows = classical_commuting_stats(rho, mb, a);
    MaxDeviation max;
    for (int i = 0; i < mb.dim(); ++i) {
      if (!rows[i].estimate.has_value()) continue;
      max.update(*rows[i].estimate, mixed_weak_value(rho, mb.ket(i), a));
    }
    if (max.instances == 0) {
      return CheckRecord::skipped("bayesian-estimate", identity::bayes_estimate,
                                  "no outcome has weight above the probability floor");
    }
    return max.record("bayesian-estimate", identity::bayes_estimate, tolerance, "outcomes");
  });

  add_check(report, "bayesian-residual", identity::bayes_residual, [&]() -> CheckRecord {
    if (!commuting) {
      return CheckRecord::skipped("bayesian-residual", identity::bayes_residual, kNotCommuting);
    }
    const std::vector<CommutingOutcome> rows = classical_commuting_stats(rho, mb, a);
    MaxDeviation max;
    for (int i = 0; i < mb.dim(); ++i) {
      if (!rows[i].residual.has_value()) continue;
      max.update(Complex(*rows[i].residual, 0.0),
                 Complex(residual_error(rho, mb.ket(i), a), 0.0));
    }
    if (max.instances == 0) {
      return CheckRecord::skipped("bayesian-residual", identity::bayes_residual,
                                  "no outcome has weight above the probability floor");
    }
    return max.record("bayesian-residual", identity::bayes_residual, tolerance, "outcomes");
  });

  return report;
}

Report steering_table(const Scenario& s, const std::optional<BasisSpec>& nu_override) {
  const std::optional<BasisSpec>& spec =
      nu_override.has_value() ? nu_override : s.nu_basis_spec;
  if (!spec.has_value()) {
    throw ValidationError("steer: a reference basis is required (--nu-basis or scenario nu_basis)");
  }
  const BipartiteState extended = s.extended_state();
  const MeasurementBasis nub = spec->realize(extended.reference_dim(), s.seed);
  const MeasurementBasis mb = s.m_basis();
  const HermitianObservable& a = s.obs();

  Report report;
  report.scenario = s.name;
  TotalVarianceDecomposition tvd = total_variance_decomposition(extended, mb, nub, a);
  report.checks.push_back(CheckRecord::compared(
      "total-variance", identity::total_variance, Complex(tvd.variance, 0.0),
      Complex(variance(s.reduced_density(), a), 0.0), effective_tolerance(s)));
  report.table = std::move(tvd.table);
  return report;
}

}  // namespace cwv
