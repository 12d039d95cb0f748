#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cwv/steering.hpp"

namespace cwv {

// How a scenario picks a measurement basis. Keywords cover the common cases;
// "random" draws a Haar basis from its own seed or the scenario seed.
struct BasisSpec {
  enum class Kind { computational, fourier, diagonal, circular, random, explicit_kets };

  Kind kind = Kind::computational;
  std::optional<std::uint64_t> seed;  // for Kind::random
  std::vector<Vector> kets;           // for Kind::explicit_kets, amplitudes as given

  static BasisSpec from_json(const nlohmann::json& j, const std::string& field);
  // Accepts "computational", "fourier", "diagonal", "circular", "random",
  // "random:<seed>" (CLI-friendly form).
  static BasisSpec from_keyword(const std::string& word);

  nlohmann::json to_json() const;
  MeasurementBasis realize(int dim, std::uint64_t fallback_seed) const;
};

enum class StateForm { ket, density, bipartite };

// A packaged (state, observable, measurement bases) instance, parsed from a
// JSON file or a built-in. Exactly one state form is present.
struct Scenario {
  std::string name;
  int system_dim = 0;
  int reference_dim = 0;  // bipartite states only; otherwise 0
  StateForm form = StateForm::ket;
  std::optional<Ket> ket;
  std::optional<DensityOperator> density;
  std::optional<BipartiteState> bipartite;
  std::optional<HermitianObservable> observable;
  std::optional<BasisSpec> m_basis_spec;
  std::optional<BasisSpec> nu_basis_spec;
  std::optional<double> tolerance_override;  // identity-check tolerance
  std::uint64_t seed = 0;

  const HermitianObservable& obs() const { return *observable; }
  MeasurementBasis m_basis() const;
  std::optional<MeasurementBasis> nu_basis() const;

  // The system state regardless of form (kets project, bipartites reduce).
  DensityOperator reduced_density() const;
  // The bipartite extension: the state itself, or the Schmidt purification
  // of the density/ket forms.
  BipartiteState extended_state() const;
};

// Parses and validates scenario JSON. The environment variable
// CONTEXTUAL_WV_SEED, when set, overrides the scenario seed.
Scenario parse_scenario(const std::string& text, const std::string& origin);
Scenario load_scenario(const std::string& path);

// Re-emits a loaded scenario. States are emitted as validated (a consumed
// "normalize" flag is not re-emitted).
nlohmann::json scenario_to_json(const Scenario& s);

const std::vector<std::string>& builtin_names();
bool is_builtin(const std::string& name);
const std::string& builtin_text(const std::string& name);
Scenario load_builtin(const std::string& name);

// Treats the argument as a built-in name first, then as a file path.
Scenario resolve_scenario(const std::string& path_or_name);

}  // namespace cwv
