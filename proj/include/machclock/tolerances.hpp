#pragma once

#include <cstddef>

// Every numerical threshold used by the library lives here.
namespace machclock::tol {

inline constexpr std::size_t kDimensionCap = 4096;

// DensityMatrix invariants
inline constexpr double kHermitian = 1e-10;
inline constexpr double kTrace = 1e-10;
inline constexpr double kMinEigenvalue = -1e-8;

// Integrator aborts when a state eigenvalue falls below this.
inline constexpr double kPositivityAbort = -1e-6;

// Algebraic identities, traceless superoperator outputs.
inline constexpr double kAlgebra = 1e-12;

// Thermal truncation: tail probability beyond the cutoff.
inline constexpr double kTailMass = 1e-6;

// Step preconditions.
inline constexpr double kEvolveRateStep = 1e-2;      // (max rate) * dt
inline constexpr double kDiffusiveRateStep = 1e-3;   // (max rate + max strength) * dt
inline constexpr double kJumpProbabilityStep = 1e-2; // total jump probability per step
inline constexpr double kZSdeStep = 1e-4;            // Gamma * dt

// Eigenvalue floor used when inverting the symmetrised product with rho.
inline constexpr double kRhoFloor = 1e-12;

// Off-diagonal magnitude below which a state is treated as diagonal.
inline constexpr double kDiagonal = 1e-14;

// Optomechanical adiabatic regime: gamma_m * nbar >= factor * g.
inline constexpr double kAdiabaticFactor = 10.0;

} // namespace machclock::tol
