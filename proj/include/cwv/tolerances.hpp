#pragma once

// Numerical tolerances for double-precision algebra at dimensions <= 16.
namespace cwv::tol {

inline constexpr double norm = 1e-10;        // state / trace normalization
inline constexpr double ortho = 1e-10;       // basis orthonormality
inline constexpr double herm = 1e-10;        // Hermiticity deviation
inline constexpr double eig = 1e-9;          // eigenpair residual
inline constexpr double degenerate = 1e-8;   // eigenvalue cluster gap
inline constexpr double identity = 1e-9;     // algebraic identity assertions
inline constexpr double psd = 1e-10;         // density-operator positivity slack
inline constexpr double prob_floor = 1e-12;  // below this a probability counts as zero
inline constexpr double amp_floor = 1e-12;   // below this an amplitude counts as zero
inline constexpr double phase_floor = 1e-12; // pivot threshold for phase canonicalization

}  // namespace cwv::tol
