#pragma once

#include <cstdint>

namespace simdiag {

// Central tolerance/knob record. Every decision procedure here is exact in
// exact arithmetic; floating point forces declared thresholds, one knob per
// failure mode. Relative tolerances are applied against max(1, operand norm)
// unless noted.
struct Config {
  double sym_rel = 1e-9;     // symmetry acceptance, relative to ||A||_F
  double det_rel = 1e-10;    // pencil/matrix singularity threshold
  double pd_tol = 1e-9;      // definiteness margin for pencil witnesses
  double eig_rel = 1e-6;     // eigenvalue cluster radius floor
  double rank_tol = 1e-9;    // SVD rank cutoff (relative to sigma_max)
  double jordan_tol = 1e-8;  // max accepted Jordan reconstruction residual
  double canon_rel = 1e-7;   // canonical-pair residual, relative
  double comm_rel = 1e-8;    // (S-)commutator vanishing threshold, relative
  double diag_tol = 1e-7;    // off-diagonal mass acceptance in diagonalizers
  double fact_tol = 1e-10;   // factorization residual bound (dsdo)
  double lp_pivot = 1e-10;   // simplex pivot tolerance
  std::uint64_t seed = 20250817;
  int n_pencil = 256;  // random pencil samples for L > 2
  int n_theta = 720;   // angle grid for the L = 2 definite-pencil scan
};

}  // namespace simdiag
