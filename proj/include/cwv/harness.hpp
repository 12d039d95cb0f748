#pragma once

#include <array>

#include "cwv/report.hpp"
#include "cwv/scenario.hpp"

namespace cwv {

// Effective pass/fail tolerance for identity checks: CLI override, then the
// scenario's own override, then tol::identity.
double effective_tolerance(const Scenario& s, std::optional<double> cli_override = std::nullopt);

// Runs every identity check applicable to the scenario's state form and
// records the rest as skipped with a reason. Module errors become per-check
// "error" records; the run itself always completes. Check order is fixed.
Report run_identity_suite(const Scenario& s, std::optional<double> cli_tolerance = std::nullopt);

// Builds the context table for the scenario's (m, nu) grid, purifying the
// state if it is not already bipartite. The reference basis argument, when
// given, replaces the scenario's nu_basis.
Report steering_table(const Scenario& s, const std::optional<BasisSpec>& nu_override);

// Analyzer angles (a, a', b, b'). An analyzer at angle t measures
// cos(2t) sigma_z + sin(2t) sigma_x, so correlations on the singlet go as
// -cos(2ta - 2tb). The defaults maximize the CHSH combination.
struct ChshOptions {
  std::array<double, 4> angles{0.0, M_PI / 4.0, M_PI / 8.0, 3.0 * M_PI / 8.0};
};

// Singlet-state CHSH demonstration. Each pair correlation is computed
// directly from the joint state and rebuilt from steered projector weak
// values on a fixed computational final measurement; the report carries the
// per-pair agreement checks, the CHSH combination S against the 2*sqrt(2)
// bound, and the most negative real part seen among the projector weak
// values.
Report chsh_demo(const ChshOptions& options = {});

}  // namespace cwv
