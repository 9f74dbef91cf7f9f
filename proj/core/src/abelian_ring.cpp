#include "ringqpe/abelian_ring.hpp"

#include <cmath>
#include <stdexcept>

namespace ringqpe {

namespace {

double reduce_turns(double x) { return x - std::round(x); }

}  // namespace

double energy(const RingConfig& config, int m) {
  const double d = m - config.reduced_flux();
  return config.energy_scale() * d * d;
}

double return_time(const RingConfig& config) {
  return 4.0 * kPi * config.mass * config.radius * config.radius / config.hbar;
}

double angular_velocity(const RingConfig& config) {
  return (config.hbar / (2.0 * config.mass * config.radius * config.radius)) *
         (config.charge * config.flux / (kPi * config.hbar));
}

double shift_angle(const RingConfig& config) { return -2.0 * config.charge * config.flux / config.hbar; }

WaveState localized_state(int l) {
  if (l < 1) throw std::invalid_argument("localized_state: l must be >= 1");
  WaveState s(l);
  const double c = 1.0 / std::sqrt(2.0 * l + 1.0);
  for (auto& amp : s.amplitudes()) amp = c;
  return s;
}

// E_m t / hbar = 2 pi tau (m - f)^2, split as tau m^2 - 2 tau m f + tau f^2 with
// each piece reduced separately so tau = 1 reproduces integer turns exactly.
double wiggle_turns(double tau, int m, double reduced_flux, bool include_global) {
  const double md = m;
  double turns = reduce_turns(tau * md * md) - reduce_turns(2.0 * tau * md * reduced_flux);
  if (include_global) turns += reduce_turns(tau * reduced_flux * reduced_flux);
  return -reduce_turns(turns);
}

EvolutionResult evolve(const WaveState& state, const RingConfig& config, double t) {
  config.validate();
  if (state.internal_dim() != 1) {
    throw std::invalid_argument("evolve: internal_dim > 1, use evolve_spinor");
  }
  if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("evolve: t must be finite and >= 0");

  const double tau = t / return_time(config);
  const double f = config.reduced_flux();
  EvolutionResult out{state, t, std::polar(1.0, -kTwoPi * reduce_turns(tau * f * f))};
  const int l = state.cutoff();
  for (int m = -l; m <= l; ++m) {
    out.state.at(m) *= std::polar(1.0, kTwoPi * wiggle_turns(tau, m, f, false));
  }
  return out;
}

double shift_identity_residual(const RingConfig& config, const WaveState& state, double t) {
  const auto with_flux = evolve(state, config, t);
  const auto free = evolve(state, config.with_flux(0.0), t);
  const auto rotated = rotate(free.state, -angular_velocity(config) * t);
  return distance(with_flux.state, rotated);
}

}  // namespace ringqpe
