#pragma once

// Time-sliced path integrals for the ring over one return time t_R.
//
// The interval [0, t_R] is split into N steps of length dt = t_R / N. In the
// phase-space form every step is the transfer kernel
//   T(phi', phi) = (1/2pi) sum_{|m|<=l} e^{-i E_m dt / hbar} e^{i m (phi' - phi)},
// and Poisson summation turns each momentum sum into a winding sum
//   T = P * sum_n exp(i (m r^2 / 2 hbar) (dphi + 2 pi n)^2 / dt + i (dphi + 2 pi n) f),
// with f = q Phi / (2 pi hbar) and P = sqrt(m r^2 / (2 pi i hbar dt)). Oscillatory
// sums are compared with the regulated step dt -> dt - i eta, eta = ratio * dt.

#include <complex>
#include <span>
#include <vector>

#include "ringqpe/core.hpp"

namespace ringqpe {

inline constexpr double kDefaultRegulator = 1e-3;

struct PathSpec {
  int steps = 1;
  double start = 0.0;
  double end = 0.0;
  int momentum_cutoff = 1;
  int winding_cutoff = 0;
  AngleGrid grid{128};
  double regulator = kDefaultRegulator;  // eta / dt

  void validate() const;
};

// Unwrapped angles phi_0 .. phi_N.
struct Path {
  std::vector<double> angles;

  [[nodiscard]] int steps() const { return static_cast<int>(angles.size()) - 1; }
};

[[nodiscard]] double time_step(const RingConfig& config, const PathSpec& spec);

// A = sum_j [ (m r^2 / 2) (phi_j - phi_{j-1})^2 / dt + (phi_j - phi_{j-1}) q Phi / 2 pi ].
[[nodiscard]] double action(const Path& path, const RingConfig& config, const PathSpec& spec);

// Constant-step path from spec.start to spec.end.
[[nodiscard]] Path minimizing_path(const RingConfig& config, const PathSpec& spec);

// Increments +eps for the first N/2 steps and -eps for the rest (N even).
[[nodiscard]] std::vector<double> tent_increments(int steps, double eps);

// Adds increment deviations eps_j to the steps of `base`; requires sum eps_j = 0.
[[nodiscard]] Path perturb(const Path& base, std::span<const double> increments);

// Largest |sum_{i<=j} eps_i| over j.
[[nodiscard]] double max_deviation(std::span<const double> increments);

// hbar N sum eps_j^2 / (8 pi): the exact action cost of a zero-sum deviation.
[[nodiscard]] double quadratic_action_cost(const RingConfig& config, int steps,
                                           std::span<const double> increments);

// |A(min + eps) - A(min) - quadratic_action_cost|.
[[nodiscard]] double linear_term_residual(const RingConfig& config, const PathSpec& spec,
                                          std::span<const double> increments);

// K(phi, t) = (1/2pi) sum_{|m|<=l} e^{-i E_m (t - i damping) / hbar} e^{i m phi} on the grid.
[[nodiscard]] std::vector<cd> spectral_propagator(const RingConfig& config, int l,
                                                  const AngleGrid& grid, double t,
                                                  double damping = 0.0);

// N-fold contraction of the transfer kernel starting from spec.start, with
// trapezoid quadrature over the intermediate angles of spec.grid.
// Cost guard: N <= 6, l <= 12, G <= 256.
[[nodiscard]] std::vector<cd> phase_space_propagator(const RingConfig& config, const PathSpec& spec);

struct PoissonCheck {
  cd lhs;   // (1/2pi) momentum sum
  cd rhs;   // P * winding sum
  double relative_difference = 0.0;
  double lhs_tail_bound = 0.0;  // bound on the omitted |m| > l terms
  double rhs_tail_bound = 0.0;  // bound on the omitted |n| > n_max terms
};

[[nodiscard]] PoissonCheck poisson_step_check(const RingConfig& config, double dt, double dphi,
                                              int l, int n_max,
                                              double regulator = kDefaultRegulator);

// The n-th regulated winding term (without the prefactor P).
[[nodiscard]] cd winding_term(const RingConfig& config, double dt, double dphi, int n,
                              double regulator = kDefaultRegulator);

// max(|term(+1)|, |term(-1)|) / |term(0)|.
[[nodiscard]] double winding_dominance_ratio(const RingConfig& config, double dt, double dphi,
                                             double regulator = kDefaultRegulator);

struct ConfigSpaceResult {
  std::vector<double> end_angles;
  std::vector<cd> kernel;  // integral of e^{iA/hbar} over the intermediate angles
  std::vector<cd> exact;   // regulated spectral propagator
  cd fit_constant;         // least-squares c in c * kernel ~ exact
  cd analytic_constant;    // P^N
  double residual = 0.0;   // ||c kernel - exact|| / ||exact||
  int exact_cutoff = 0;    // momentum cutoff used for `exact`
};

// Brute-force quadrature of the configuration-space path integral over
// unwrapped intermediate angles in [-(2 n_max + 1) pi, (2 n_max + 1) pi) with
// spec.grid.size() points per 2 pi; end points are summed over windings
// |n| <= n_max. Requires 1 <= N <= 5 and an even grid size.
[[nodiscard]] ConfigSpaceResult config_space_propagator(const RingConfig& config,
                                                        const PathSpec& spec);

struct ScanRow {
  double hbar = 0.0;
  double return_time = 0.0;
  int steps = 0;
  double epsilon = 0.0;
  double delta_action_over_hbar = 0.0;      // measured from action() for the tent at epsilon
  double predicted_action_over_hbar = 0.0;  // N^2 eps^2 / (8 pi)
  double epsilon_star = 0.0;                // tent scale with delta A / hbar = 1
  double max_deviation = 0.0;               // d* = largest excursion at epsilon_star
};

struct ScanReport {
  std::vector<ScanRow> rows;
};

// Tent-family interference scan over descending hbar values.
[[nodiscard]] ScanReport classical_limit_scan(const RingConfig& base,
                                              std::span<const double> hbar_values, int steps,
                                              double epsilon);

}  // namespace ringqpe
