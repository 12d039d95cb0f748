#pragma once

#include <string>

#include <json.hpp>

#include "cwv/hilbert.hpp"

namespace cwv {

// Complex scalars travel as two-element [re, im] arrays; matrices as
// row-major nested arrays of those pairs.
Complex complex_from_json(const nlohmann::json& j, const std::string& field);
Vector vector_from_json(const nlohmann::json& j, const std::string& field);
Eigen::MatrixXcd matrix_from_json(const nlohmann::json& j, const std::string& field);

nlohmann::json complex_to_json(const Complex& z);
nlohmann::json vector_to_json(const Vector& v);
nlohmann::json matrix_to_json(const Eigen::MatrixXcd& m);

// Serializes with sorted keys, two-space indentation, and floats printed at
// 17 significant digits, so equal values always produce identical bytes.
std::string dump_json(const nlohmann::json& j);

}  // namespace cwv
