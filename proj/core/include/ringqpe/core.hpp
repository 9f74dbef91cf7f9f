#pragma once

// Shared domain types for the particle-on-a-ring simulator: physical
// constants, truncated angular-momentum states, angle grids and the
// phase estimate produced by the measurement pipelines.

#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace ringqpe {

using cd = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Physical constants of the ring. Defaults are natural units with no flux.
struct RingConfig {
  double hbar = 1.0;
  double mass = 1.0;
  double radius = 1.0;
  double charge = 1.0;
  double flux = 0.0;

  // Throws std::invalid_argument on a non-positive or non-finite scale constant.
  void validate() const;

  // Copy with a different flux.
  [[nodiscard]] RingConfig with_flux(double new_flux) const;

  // hbar^2 / (2 m r^2), the rotational energy quantum.
  [[nodiscard]] double energy_scale() const { return hbar * hbar / (2.0 * mass * radius * radius); }

  // Dimensionless flux q*Phi / (2 pi hbar).
  [[nodiscard]] double reduced_flux() const { return charge * flux / (kTwoPi * hbar); }
};

// Amplitudes c_{m,a} for m in [-l, l] and internal index a in [0, N).
// Storage offset is (m + l) * N + a.
class WaveState {
 public:
  WaveState(int cutoff, int internal_dim = 1);
  WaveState(int cutoff, int internal_dim, std::vector<cd> amplitudes);

  // Pure angular-momentum eigenstate |m> (x) |a>.
  static WaveState basis(int cutoff, int m, int internal_dim = 1, int a = 0);

  [[nodiscard]] int cutoff() const noexcept { return cutoff_; }
  [[nodiscard]] int internal_dim() const noexcept { return internal_dim_; }
  [[nodiscard]] int num_modes() const noexcept { return 2 * cutoff_ + 1; }
  [[nodiscard]] std::size_t size() const noexcept { return amplitudes_.size(); }

  [[nodiscard]] std::size_t offset(int m, int a = 0) const;
  [[nodiscard]] cd& at(int m, int a = 0) { return amplitudes_[offset(m, a)]; }
  [[nodiscard]] const cd& at(int m, int a = 0) const { return amplitudes_[offset(m, a)]; }

  [[nodiscard]] std::span<cd> amplitudes() noexcept { return amplitudes_; }
  [[nodiscard]] std::span<const cd> amplitudes() const noexcept { return amplitudes_; }

  [[nodiscard]] double norm() const;

  // Rescales to unit norm; throws std::domain_error on the zero state.
  void normalize();

  [[nodiscard]] bool same_shape(const WaveState& other) const noexcept {
    return cutoff_ == other.cutoff_ && internal_dim_ == other.internal_dim_;
  }

 private:
  int cutoff_;
  int internal_dim_;
  std::vector<cd> amplitudes_;
};

// Uniform grid phi_i = -pi + 2 pi i / G on [-pi, pi).
class AngleGrid {
 public:
  explicit AngleGrid(int size);

  [[nodiscard]] int size() const noexcept { return size_; }
  [[nodiscard]] double spacing() const noexcept { return kTwoPi / size_; }
  [[nodiscard]] double point(int i) const { return -kPi + kTwoPi * i / size_; }
  [[nodiscard]] std::vector<double> points() const;

  // Index of the grid point nearest to wrap_angle(angle).
  [[nodiscard]] int nearest_index(double angle) const;

 private:
  int size_;
};

struct PhaseEstimate {
  double phase = 0.0;         // refined estimate in [-pi, pi)
  int grid_peak = 0;          // argmax of the distribution
  double refined_peak = 0.0;  // sub-bin peak position, radians
  double half_width = 0.0;    // peak to first local minimum, radians
  std::vector<double> distribution;
};

// Maps x to [-pi, pi); pi itself maps to -pi. Throws std::domain_error if x is not finite.
[[nodiscard]] double wrap_angle(double x);

// Shortest signed distance b - a on the circle, in [-pi, pi).
[[nodiscard]] double angular_difference(double a, double b);

// Sum_m c_{m,a} e^{i m phi} / sqrt(2 pi).
[[nodiscard]] cd position_amplitude(const WaveState& state, double phi, int a = 0);

// Sum_a |Psi_a(phi_i)|^2 on every grid point.
[[nodiscard]] std::vector<double> density_on_grid(const WaveState& state, const AngleGrid& grid);

// Complex field Psi_a(phi_i) for one internal component.
[[nodiscard]] std::vector<cd> wavefunction_on_grid(const WaveState& state, const AngleGrid& grid,
                                                   int a = 0);

// <s1|s2>.
[[nodiscard]] cd inner(const WaveState& s1, const WaveState& s2);

// ||s1 - s2|| in coefficient space.
[[nodiscard]] double distance(const WaveState& s1, const WaveState& s2);

// Rigid rotation of the wavefunction by `angle`: Psi'(phi) = Psi(phi - angle),
// i.e. c_m -> c_m e^{-i m angle}.
[[nodiscard]] WaveState rotate(const WaveState& state, double angle);

// Locates the peak of a density sampled on `grid`: argmax (ties to the lowest
// index), parabolic refinement of log-density, and distance to the first local
// minimum on either side.
[[nodiscard]] PhaseEstimate estimate_peak(std::vector<double> density, const AngleGrid& grid);

// Sub-bin position of the peak at grid index `index` from a parabola through
// the log-density at index-1, index, index+1.
[[nodiscard]] double refine_peak(const std::vector<double>& density, const AngleGrid& grid, int index);

}  // namespace ringqpe
