#include "cwv/scenario.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "cwv/jsonio.hpp"

namespace cwv {

namespace {

std::pair<int, int> line_and_column(const std::string& text, size_t byte) {
  int line = 1;
  int column = 1;
  for (size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

[[noreturn]] void rethrow_as_validation(const std::string& field, const Error& e) {
  throw ValidationError(field + ": " + e.what());
}

}  // namespace

BasisSpec BasisSpec::from_keyword(const std::string& word) {
  BasisSpec spec;
  if (word == "computational") {
    spec.kind = Kind::computational;
  } else if (word == "fourier") {
    spec.kind = Kind::fourier;
  } else if (word == "diagonal") {
    spec.kind = Kind::diagonal;
  } else if (word == "circular") {
    spec.kind = Kind::circular;
  } else if (word == "random") {
    spec.kind = Kind::random;
  } else if (word.rfind("random:", 0) == 0) {
    spec.kind = Kind::random;
    try {
      spec.seed = std::stoull(word.substr(7));
    } catch (const std::exception&) {
      throw ValidationError("basis: bad seed in \"" + word + "\"");
    }
  } else {
    throw ValidationError("basis: unknown keyword \"" + word + "\"");
  }
  return spec;
}

BasisSpec BasisSpec::from_json(const nlohmann::json& j, const std::string& field) {
  if (j.is_string()) return from_keyword(j.get<std::string>());
  if (j.is_object()) {
    if (j.contains("kets")) {
      BasisSpec spec;
      spec.kind = Kind::explicit_kets;
      const nlohmann::json& kets = j.at("kets");
      if (!kets.is_array() || kets.empty()) {
        throw ValidationError(field + ".kets: expected a non-empty array of kets");
      }
      for (size_t i = 0; i < kets.size(); ++i) {
        spec.kets.push_back(vector_from_json(kets[i], field + ".kets[" + std::to_string(i) + "]"));
      }
      return spec;
    }
    if (j.contains("random")) {
      BasisSpec spec;
      spec.kind = Kind::random;
      const nlohmann::json& s = j.at("random");
      if (s.is_number_unsigned() || s.is_number_integer()) {
        spec.seed = s.get<std::uint64_t>();
      } else if (!s.is_null()) {
        throw ValidationError(field + ".random: expected a seed or null");
      }
      return spec;
    }
  }
  throw ValidationError(field + ": expected a keyword string, {\"kets\": ...} or {\"random\": ...}");
}

nlohmann::json BasisSpec::to_json() const {
  switch (kind) {
    case Kind::computational: return "computational";
    case Kind::fourier: return "fourier";
    case Kind::diagonal: return "diagonal";
    case Kind::circular: return "circular";
    case Kind::random: {
      nlohmann::json j;
      j["random"] = seed.has_value() ? nlohmann::json(*seed) : nlohmann::json(nullptr);
      return j;
    }
    case Kind::explicit_kets: {
      nlohmann::json arr = nlohmann::json::array();
      for (const Vector& k : kets) arr.push_back(vector_to_json(k));
      nlohmann::json j;
      j["kets"] = std::move(arr);
      return j;
    }
  }
  throw ValidationError("basis: unreachable kind");
}

MeasurementBasis BasisSpec::realize(int dim, std::uint64_t fallback_seed) const {
  switch (kind) {
    case Kind::computational:
      return MeasurementBasis::computational(dim);
    case Kind::fourier:
      return MeasurementBasis::fourier(dim);
    case Kind::diagonal:
      if (dim != 2) throw ValidationError("basis: \"diagonal\" requires dimension 2");
      return MeasurementBasis::fourier(2);
    case Kind::circular: {
      if (dim != 2) throw ValidationError("basis: \"circular\" requires dimension 2");
      SquareMatrix u(2, 2);
      const double s = 1.0 / std::sqrt(2.0);
      u << Complex(s, 0), Complex(s, 0), Complex(0, s), Complex(0, -s);
      return MeasurementBasis::from_columns(u);
    }
    case Kind::random:
      return random_basis(dim, seed.value_or(fallback_seed));
    case Kind::explicit_kets: {
      std::vector<Ket> out;
      for (const Vector& v : kets) {
        if (static_cast<int>(v.size()) != dim) {
          throw ValidationError("basis: explicit ket dimension " + std::to_string(v.size()) +
                                " does not match " + std::to_string(dim));
        }
        out.emplace_back(v);
      }
      return MeasurementBasis(std::move(out));
    }
  }
  throw ValidationError("basis: unreachable kind");
}

MeasurementBasis Scenario::m_basis() const {
  return m_basis_spec->realize(system_dim, seed);
}

std::optional<MeasurementBasis> Scenario::nu_basis() const {
  if (!nu_basis_spec.has_value()) return std::nullopt;
  const int dim = form == StateForm::bipartite ? reference_dim : system_dim;
  return nu_basis_spec->realize(dim, seed);
}

DensityOperator Scenario::reduced_density() const {
  switch (form) {
    case StateForm::ket: return DensityOperator::pure(*ket);
    case StateForm::density: return *density;
    case StateForm::bipartite: return bipartite->reduced();
  }
  throw ValidationError("scenario: unreachable state form");
}

BipartiteState Scenario::extended_state() const {
  if (form == StateForm::bipartite) return *bipartite;
  return purify(reduced_density());
}

namespace {

std::optional<std::uint64_t> seed_override_from_env() {
  const char* raw = std::getenv("CONTEXTUAL_WV_SEED");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  char* end = nullptr;
  const unsigned long long value = std::strtoull(raw, &end, 10);
  if (end == raw || *end != '\0') {
    throw ValidationError("CONTEXTUAL_WV_SEED: not an unsigned integer");
  }
  return value;
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& origin) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, column] = line_and_column(text, e.byte);
    throw ParseError(origin + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " +
                     e.what());
  }
  if (!j.is_object()) throw ValidationError("scenario: top level must be an object");

  Scenario s;
  if (!j.contains("name") || !j.at("name").is_string() || j.at("name").get<std::string>().empty()) {
    throw ValidationError("name: required non-empty string");
  }
  s.name = j.at("name").get<std::string>();

  if (!j.contains("system_dim") || !j.at("system_dim").is_number_integer() ||
      j.at("system_dim").get<int>() < 1) {
    throw ValidationError("system_dim: required positive integer");
  }
  s.system_dim = j.at("system_dim").get<int>();

  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned() && !j.at("seed").is_number_integer()) {
      throw ValidationError("seed: expected an unsigned integer");
    }
    s.seed = j.at("seed").get<std::uint64_t>();
  }
  if (const auto env = seed_override_from_env()) s.seed = *env;

  if (!j.contains("state") || !j.at("state").is_object()) {
    throw ValidationError("state: required object");
  }
  const nlohmann::json& state = j.at("state");
  const bool normalize = state.value("normalize", false);
  const int forms = int(state.contains("ket")) + int(state.contains("density")) +
                    int(state.contains("bipartite"));
  if (forms != 1) {
    throw ValidationError("state: exactly one of \"ket\", \"density\", \"bipartite\" required");
  }

  if (state.contains("ket")) {
    s.form = StateForm::ket;
    const Vector amps = vector_from_json(state.at("ket"), "state.ket");
    if (static_cast<int>(amps.size()) != s.system_dim) {
      throw ValidationError("state.ket: length does not match system_dim");
    }
    try {
      s.ket = normalize ? Ket::normalized(amps) : Ket(amps);
    } catch (const Error& e) {
      rethrow_as_validation("state", e);
    }
  } else if (state.contains("density")) {
    s.form = StateForm::density;
    const Eigen::MatrixXcd m = matrix_from_json(state.at("density"), "state.density");
    if (m.rows() != s.system_dim || m.cols() != s.system_dim) {
      throw ValidationError("state.density: shape does not match system_dim");
    }
    try {
      s.density = DensityOperator(m);
    } catch (const Error& e) {
      rethrow_as_validation("state", e);
    }
  } else {
    s.form = StateForm::bipartite;
    Eigen::MatrixXcd m = matrix_from_json(state.at("bipartite"), "state.bipartite");
    if (m.rows() != s.system_dim) {
      throw ValidationError("state.bipartite: row count does not match system_dim");
    }
    s.reference_dim = static_cast<int>(m.cols());
    if (j.contains("reference_dim") && j.at("reference_dim").get<int>() != s.reference_dim) {
      throw ValidationError("reference_dim: does not match state.bipartite column count");
    }
    if (normalize) {
      const double n = m.norm();
      if (n < tol::amp_floor) throw ValidationError("state.bipartite: cannot normalize zero state");
      m /= n;
    }
    try {
      s.bipartite = BipartiteState(m);
    } catch (const Error& e) {
      rethrow_as_validation("state", e);
    }
  }

  if (!j.contains("observable")) throw ValidationError("observable: required matrix");
  {
    const Eigen::MatrixXcd m = matrix_from_json(j.at("observable"), "observable");
    if (m.rows() != s.system_dim || m.cols() != s.system_dim) {
      throw ValidationError("observable: shape does not match system_dim");
    }
    try {
      s.observable = HermitianObservable(m);
    } catch (const Error& e) {
      rethrow_as_validation("observable", e);
    }
  }

  if (!j.contains("m_basis")) throw ValidationError("m_basis: required basis spec");
  s.m_basis_spec = BasisSpec::from_json(j.at("m_basis"), "m_basis");
  try {
    (void)s.m_basis();
  } catch (const Error& e) {
    rethrow_as_validation("m_basis", e);
  }

  if (j.contains("nu_basis")) {
    s.nu_basis_spec = BasisSpec::from_json(j.at("nu_basis"), "nu_basis");
    try {
      (void)s.nu_basis();
    } catch (const Error& e) {
      rethrow_as_validation("nu_basis", e);
    }
  }

  if (j.contains("tolerances")) {
    const nlohmann::json& t = j.at("tolerances");
    if (!t.is_object()) throw ValidationError("tolerances: expected an object");
    if (t.contains("identity")) {
      const double v = t.at("identity").get<double>();
      if (!(v > 0.0)) throw ValidationError("tolerances.identity: must be positive");
      s.tolerance_override = v;
    }
  }

  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path);
}

nlohmann::json scenario_to_json(const Scenario& s) {
  nlohmann::json j;
  j["name"] = s.name;
  j["system_dim"] = s.system_dim;
  nlohmann::json state;
  switch (s.form) {
    case StateForm::ket:
      state["ket"] = vector_to_json(s.ket->vec());
      break;
    case StateForm::density:
      state["density"] = matrix_to_json(s.density->matrix());
      break;
    case StateForm::bipartite:
      state["bipartite"] = matrix_to_json(s.bipartite->coeffs());
      j["reference_dim"] = s.reference_dim;
      break;
  }
  j["state"] = std::move(state);
  j["observable"] = matrix_to_json(s.observable->matrix());
  j["m_basis"] = s.m_basis_spec->to_json();
  if (s.nu_basis_spec.has_value()) j["nu_basis"] = s.nu_basis_spec->to_json();
  if (s.tolerance_override.has_value()) {
    j["tolerances"] = nlohmann::json{{"identity", *s.tolerance_override}};
  }
  if (s.seed != 0) j["seed"] = s.seed;
  return j;
}

namespace {

const std::map<std::string, std::string>& builtin_map() {
  static const std::map<std::string, std::string> builtins = {
      {"anomalous-qubit", R"({
  "name": "anomalous-qubit",
  "system_dim": 2,
  "state": {"ket": [[0.94868329805051377, 0], [0.31622776601683794, 0]]},
  "observable": [[[0, 0], [1, 0]], [[1, 0], [0, 0]]],
  "m_basis": "computational"
})"},
      {"mixed-qubit-steering", R"({
  "name": "mixed-qubit-steering",
  "system_dim": 2,
  "reference_dim": 2,
  "state": {"bipartite": [[[0.70710678118654746, 0], [0, 0]], [[0, 0], [0.70710678118654746, 0]]]},
  "observable": [[[1, 0], [0, 0]], [[0, 0], [-1, 0]]],
  "m_basis": "diagonal",
  "nu_basis": "circular"
})"},
      {"commuting-classical", R"({
  "name": "commuting-classical",
  "system_dim": 2,
  "state": {"density": [[[0.75, 0], [0, 0]], [[0, 0], [0.25, 0]]]},
  "observable": [[[1, 0], [0, 0]], [[0, 0], [-1, 0]]],
  "m_basis": "diagonal",
  "nu_basis": "circular"
})"},
      {"thermal-qutrit", R"({
  "name": "thermal-qutrit",
  "system_dim": 3,
  "state": {"density": [
    [[0.66524095577482178, 0], [0, 0], [0, 0]],
    [[0, 0], [0.24472847105479764, 0], [0, 0]],
    [[0, 0], [0, 0], [0.090030573170380462, 0]]]},
  "observable": [
    [[0, 0], [0, 0], [0, 0]],
    [[0, 0], [1, 0], [0, 0]],
    [[0, 0], [0, 0], [2, 0]]],
  "m_basis": "fourier",
  "nu_basis": "fourier"
})"},
      {"chsh-singlet", R"({
  "name": "chsh-singlet",
  "system_dim": 2,
  "reference_dim": 2,
  "state": {"bipartite": [[[0, 0], [0.70710678118654746, 0]], [[-0.70710678118654746, 0], [0, 0]]]},
  "observable": [[[1, 0], [0, 0]], [[0, 0], [-1, 0]]],
  "m_basis": "diagonal",
  "nu_basis": "circular"
})"},
  };
  return builtins;
}

}  // namespace

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, text] : builtin_map()) out.push_back(name);
    return out;
  }();
  return names;
}

bool is_builtin(const std::string& name) { return builtin_map().count(name) > 0; }

const std::string& builtin_text(const std::string& name) {
  const auto it = builtin_map().find(name);
  if (it == builtin_map().end()) throw ValidationError("unknown built-in scenario: " + name);
  return it->second;
}

Scenario load_builtin(const std::string& name) {
  return parse_scenario(builtin_text(name), "builtin:" + name);
}

Scenario resolve_scenario(const std::string& path_or_name) {
  if (is_builtin(path_or_name)) return load_builtin(path_or_name);
  return load_scenario(path_or_name);
}

}  // namespace cwv
