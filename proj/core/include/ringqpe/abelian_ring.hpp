#pragma once

// Exact spectral evolution of a charged particle on a ring threaded by a
// static abelian flux. Eigenfunctions are e^{i m phi}/sqrt(2 pi) for every
// flux; only the energies E_m = hbar^2/(2 m r^2) (m - q Phi / 2 pi hbar)^2
// depend on it.

#include "ringqpe/core.hpp"

namespace ringqpe {

struct EvolutionResult {
  WaveState state;               // amplitudes with the global phase divided out
  double elapsed = 0.0;
  cd global_phase_removed{1.0, 0.0};
};

[[nodiscard]] double energy(const RingConfig& config, int m);

// t_R = 4 pi m r^2 / hbar. At t_R every free wiggle factor equals 1.
[[nodiscard]] double return_time(const RingConfig& config);

// omega = q Phi / (2 pi m r^2), the rigid drift of the wavefunction.
[[nodiscard]] double angular_velocity(const RingConfig& config);

// -omega * t_R = -2 q Phi / hbar, not wrapped.
[[nodiscard]] double shift_angle(const RingConfig& config);

// Equal-weight superposition of |m| <= l: the truncated delta at phi = 0.
[[nodiscard]] WaveState localized_state(int l);

// Phase (in turns, reduced to [-1/2, 1/2)) of the wiggle factor
// e^{-i E_m t / hbar} for an effective reduced flux f and t = tau * t_R.
// With include_global = false the f^2 term is omitted.
[[nodiscard]] double wiggle_turns(double tau, int m, double reduced_flux, bool include_global);

// c_m -> e^{-i E_m t / hbar} c_m, with e^{-i hbar/(2 m r^2) (q Phi / 2 pi hbar)^2 t}
// reported and divided out. Requires internal_dim == 1 and t >= 0.
[[nodiscard]] EvolutionResult evolve(const WaveState& state, const RingConfig& config, double t);

// ||evolve_Phi(s, t) - rotate(evolve_0(s, t), -omega t)||, which vanishes in exact arithmetic.
[[nodiscard]] double shift_identity_residual(const RingConfig& config, const WaveState& state,
                                             double t);

}  // namespace ringqpe
