#include "ringqpe/core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ringqpe {

void RingConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!std::isfinite(v) || v <= 0.0) {
      throw std::invalid_argument(std::string(name) + " must be finite and > 0, got " +
                                  std::to_string(v));
    }
  };
  positive(hbar, "hbar");
  positive(mass, "mass");
  positive(radius, "radius");
  if (!std::isfinite(charge)) throw std::invalid_argument("charge must be finite");
  if (!std::isfinite(flux)) throw std::invalid_argument("flux must be finite");
}

RingConfig RingConfig::with_flux(double new_flux) const {
  RingConfig out = *this;
  out.flux = new_flux;
  return out;
}

WaveState::WaveState(int cutoff, int internal_dim) : cutoff_(cutoff), internal_dim_(internal_dim) {
  if (cutoff < 1) throw std::invalid_argument("WaveState: cutoff l must be >= 1");
  if (internal_dim < 1) throw std::invalid_argument("WaveState: internal_dim must be >= 1");
  amplitudes_.assign(static_cast<std::size_t>(num_modes()) * internal_dim_, cd{0.0, 0.0});
}

WaveState::WaveState(int cutoff, int internal_dim, std::vector<cd> amplitudes)
    : WaveState(cutoff, internal_dim) {
  if (amplitudes.size() != amplitudes_.size()) {
    throw std::invalid_argument("WaveState: expected " + std::to_string(amplitudes_.size()) +
                                " amplitudes, got " + std::to_string(amplitudes.size()));
  }
  amplitudes_ = std::move(amplitudes);
}

WaveState WaveState::basis(int cutoff, int m, int internal_dim, int a) {
  WaveState s(cutoff, internal_dim);
  s.at(m, a) = 1.0;
  return s;
}

std::size_t WaveState::offset(int m, int a) const {
  if (m < -cutoff_ || m > cutoff_) {
    throw std::out_of_range("WaveState: mode " + std::to_string(m) + " outside [-" +
                            std::to_string(cutoff_) + ", " + std::to_string(cutoff_) + "]");
  }
  if (a < 0 || a >= internal_dim_) {
    throw std::out_of_range("WaveState: internal index " + std::to_string(a) + " outside [0, " +
                            std::to_string(internal_dim_) + ")");
  }
  return static_cast<std::size_t>(m + cutoff_) * internal_dim_ + a;
}

double WaveState::norm() const {
  double sum = 0.0;
  for (const auto& c : amplitudes_) sum += std::norm(c);
  return std::sqrt(sum);
}

void WaveState::normalize() {
  const double n = norm();
  if (n == 0.0 || !std::isfinite(n)) throw std::domain_error("WaveState: cannot normalize");
  for (auto& c : amplitudes_) c /= n;
}

AngleGrid::AngleGrid(int size) : size_(size) {
  if (size < 2) throw std::invalid_argument("AngleGrid: size must be >= 2");
}

std::vector<double> AngleGrid::points() const {
  std::vector<double> out(size_);
  for (int i = 0; i < size_; ++i) out[i] = point(i);
  return out;
}

int AngleGrid::nearest_index(double angle) const {
  const double u = (wrap_angle(angle) + kPi) / spacing();
  auto i = static_cast<long>(std::lround(u));
  return static_cast<int>(((i % size_) + size_) % size_);
}

double wrap_angle(double x) {
  if (!std::isfinite(x)) throw std::domain_error("wrap_angle: non-finite angle");
  if (x >= -kPi && x < kPi) return x;
  double r = std::remainder(x, kTwoPi);
  if (r >= kPi) r -= kTwoPi;
  if (r < -kPi) r += kTwoPi;
  return r;
}

double angular_difference(double a, double b) { return wrap_angle(b - a); }

cd position_amplitude(const WaveState& state, double phi, int a) {
  if (a < 0 || a >= state.internal_dim()) {
    throw std::out_of_range("position_amplitude: internal index out of range");
  }
  const int l = state.cutoff();
  cd sum{0.0, 0.0};
  for (int m = -l; m <= l; ++m) sum += state.at(m, a) * std::polar(1.0, m * phi);
  return sum / std::sqrt(kTwoPi);
}

namespace {

// e^{i m phi_i} = (-1)^m e^{2 pi i m i / G}; the exponent is reduced in integers
// so every grid evaluation is a table lookup.
std::vector<cd> twiddles(int g) {
  std::vector<cd> table(g);
  for (int k = 0; k < g; ++k) table[k] = std::polar(1.0, kTwoPi * k / g);
  return table;
}

std::vector<cd> field_on_grid(const WaveState& state, const std::vector<cd>& table, int a) {
  const int g = static_cast<int>(table.size());
  const int l = state.cutoff();
  const double inv = 1.0 / std::sqrt(kTwoPi);
  std::vector<cd> out(g);
  for (int i = 0; i < g; ++i) {
    cd sum{0.0, 0.0};
    for (int m = -l; m <= l; ++m) {
      long k = (static_cast<long>(m) * i) % g;
      if (k < 0) k += g;
      const cd phase = (m % 2 == 0) ? table[k] : -table[k];
      sum += state.at(m, a) * phase;
    }
    out[i] = sum * inv;
  }
  return out;
}

}  // namespace

std::vector<cd> wavefunction_on_grid(const WaveState& state, const AngleGrid& grid, int a) {
  if (a < 0 || a >= state.internal_dim()) {
    throw std::out_of_range("wavefunction_on_grid: internal index out of range");
  }
  return field_on_grid(state, twiddles(grid.size()), a);
}

std::vector<double> density_on_grid(const WaveState& state, const AngleGrid& grid) {
  const auto table = twiddles(grid.size());
  std::vector<double> density(grid.size(), 0.0);
  for (int a = 0; a < state.internal_dim(); ++a) {
    const auto field = field_on_grid(state, table, a);
    for (int i = 0; i < grid.size(); ++i) density[i] += std::norm(field[i]);
  }
  return density;
}

cd inner(const WaveState& s1, const WaveState& s2) {
  if (!s1.same_shape(s2)) throw std::invalid_argument("inner: state shapes differ");
  cd sum{0.0, 0.0};
  const auto a = s1.amplitudes();
  const auto b = s2.amplitudes();
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::conj(a[i]) * b[i];
  return sum;
}

double distance(const WaveState& s1, const WaveState& s2) {
  if (!s1.same_shape(s2)) throw std::invalid_argument("distance: state shapes differ");
  double sum = 0.0;
  const auto a = s1.amplitudes();
  const auto b = s2.amplitudes();
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::norm(a[i] - b[i]);
  return std::sqrt(sum);
}

WaveState rotate(const WaveState& state, double angle) {
  WaveState out = state;
  const int l = state.cutoff();
  for (int m = -l; m <= l; ++m) {
    const cd factor = std::polar(1.0, -m * angle);
    for (int a = 0; a < state.internal_dim(); ++a) out.at(m, a) *= factor;
  }
  return out;
}

namespace {

double peak_offset(const std::vector<double>& density, int p) {
  const int g = static_cast<int>(density.size());
  auto at = [&](int i) { return density[((i % g) + g) % g]; };
  constexpr double kFloor = 1e-300;
  const double ym = std::log(std::max(at(p - 1), kFloor));
  const double y0 = std::log(std::max(at(p), kFloor));
  const double yp = std::log(std::max(at(p + 1), kFloor));
  const double curvature = ym - 2.0 * y0 + yp;
  if (!(curvature < 0.0)) return 0.0;
  return std::clamp(0.5 * (ym - yp) / curvature, -0.5, 0.5);
}

}  // namespace

double refine_peak(const std::vector<double>& density, const AngleGrid& grid, int index) {
  if (static_cast<int>(density.size()) != grid.size()) {
    throw std::invalid_argument("refine_peak: density size does not match grid");
  }
  return wrap_angle(grid.point(index) + peak_offset(density, index) * grid.spacing());
}

PhaseEstimate estimate_peak(std::vector<double> density, const AngleGrid& grid) {
  const int g = grid.size();
  if (static_cast<int>(density.size()) != g) {
    throw std::invalid_argument("estimate_peak: density size does not match grid");
  }
  PhaseEstimate est;
  // std::max_element returns the first maximum, i.e. the smallest index on ties.
  est.grid_peak = static_cast<int>(std::max_element(density.begin(), density.end()) - density.begin());
  const int p = est.grid_peak;
  auto at = [&](int i) { return density[((i % g) + g) % g]; };

  const double offset = peak_offset(density, p);
  est.refined_peak = wrap_angle(grid.point(p) + offset * grid.spacing());
  est.phase = est.refined_peak;

  auto walk = [&](int dir) {
    int steps = 0;
    while (steps < g / 2 && at(p + dir * (steps + 1)) <= at(p + dir * steps)) ++steps;
    return steps;
  };
  const double left = (walk(-1) + offset) * grid.spacing();
  const double right = (walk(+1) - offset) * grid.spacing();
  est.half_width = 0.5 * (left + right);
  est.distribution = std::move(density);
  return est;
}

}  // namespace ringqpe
