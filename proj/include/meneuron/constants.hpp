#pragma once

// CODATA 2018 values, SI units.
namespace meneuron::constants {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double mu0 = 1.25663706212e-6;          // T m / A
inline constexpr double bohr_magneton = 9.2740100783e-24;  // J / T
inline constexpr double hbar = 1.054571817e-34;            // J s
inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double boltzmann = 1.380649e-23;           // J / K

/// Electron gyromagnetic ratio in field units, 2 mu_B mu0 / hbar, m/(A s).
inline constexpr double gamma = 2.0 * bohr_magneton * mu0 / hbar;

}  // namespace meneuron::constants
