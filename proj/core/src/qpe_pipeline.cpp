#include "ringqpe/qpe_pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "ringqpe/abelian_ring.hpp"

namespace ringqpe {

namespace {

// sin(pi x) = (-1)^n sin(pi (x - n)) with n = round(x); x - n is exact, so
// the result keeps full relative precision near the zeros.
double sin_pi(double x) {
  const double n = std::round(x);
  const double s = std::sin(kPi * (x - n));
  return std::fmod(n, 2.0) == 0.0 ? s : -s;
}

}  // namespace

void RegisterQpeSpec::validate() const {
  if (t_qubits < 1 || t_qubits > 20) {
    throw std::invalid_argument("RegisterQpeSpec: t_qubits must be in [1, 20], got " +
                                std::to_string(t_qubits));
  }
  if (!std::isfinite(phase)) throw std::invalid_argument("RegisterQpeSpec: phase must be finite");
}

// With x_k = phi_u - 2 pi k / 2^t the amplitude is a geometric series, so
// Pr(k) = sin^2(pi d) / (2^t sin(pi d / 2^t))^2 with d = 2^t phi_u / 2 pi - k.
// d is split as frac + j (j an integer reduced mod 2^t, |frac| <= 1/2, exact),
// so sin(pi d) = (-1)^j sin(pi frac) never loses the fraction to rounding.
std::vector<double> register_qpe_distribution(const RegisterQpeSpec& spec) {
  spec.validate();
  const long n = 1L << spec.t_qubits;
  const double nd = static_cast<double>(n);
  const double phase = (spec.phase >= -kPi && spec.phase <= kPi) ? spec.phase : wrap_angle(spec.phase);
  const double scaled = nd * (phase / kTwoPi);
  const double whole = std::round(scaled);
  const double frac = scaled - whole;
  const long base = static_cast<long>(whole);
  const double sin_frac = std::sin(kPi * frac);

  std::vector<double> pr(n);
  for (long k = 0; k < n; ++k) {
    long j = (base - k) % n;
    if (j < 0) j += n;
    if (j >= n / 2 && n > 1) j -= n;
    if (j == 0 && frac == 0.0) {
      pr[k] = 1.0;
      continue;
    }
    const double num = (j % 2 == 0) ? sin_frac : -sin_frac;
    const double ratio = num / (nd * sin_pi((frac + static_cast<double>(j)) / nd));
    pr[k] = ratio * ratio;
  }
  return pr;
}

double register_phase(int k, int t_qubits) {
  return wrap_angle(kTwoPi * static_cast<double>(k) / static_cast<double>(1L << t_qubits));
}

void require_resolvable(int l, const AngleGrid& grid) {
  if (grid.size() < 4 * l + 4) {
    throw std::invalid_argument("grid too coarse: G = " + std::to_string(grid.size()) +
                                " < 4l + 4 = " + std::to_string(4 * l + 4));
  }
}

PhaseEstimate ring_qpe(const RingConfig& config, int l, const AngleGrid& grid) {
  config.validate();
  require_resolvable(l, grid);
  const auto evolved = evolve(localized_state(l), config, return_time(config));
  return estimate_peak(density_on_grid(evolved.state, grid), grid);
}

double flux_from_phase(const RingConfig& config, double phase) {
  if (config.charge == 0.0) throw std::invalid_argument("flux_from_phase: charge is zero");
  return -config.hbar * phase / (2.0 * config.charge);
}

MeasurementSample sample_positions(const WaveState& state, const AngleGrid& grid, int n,
                                   std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_positions: n must be >= 1");
  const auto density = density_on_grid(state, grid);
  std::vector<double> cdf(density.size());
  double total = 0.0;
  for (std::size_t i = 0; i < density.size(); ++i) {
    total += density[i];
    cdf[i] = total;
  }
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw std::invalid_argument("sample_positions: degenerate density");
  }

  MeasurementSample out;
  out.seed = seed;
  out.angles.reserve(n);
  out.bins.reserve(n);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  for (int s = 0; s < n; ++s) {
    const double u = uniform(rng) * total;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) --it;
    const int bin = static_cast<int>(it - cdf.begin());
    out.bins.push_back(bin);
    out.angles.push_back(grid.point(bin));
  }
  return out;
}

RingRegisterComparison compare_ring_vs_register(const RingConfig& config, int l, int t_qubits,
                                                const AngleGrid& grid) {
  RingRegisterComparison out;
  out.ring_phase = ring_qpe(config, l, grid).phase;

  const RegisterQpeSpec spec{t_qubits, wrap_angle(shift_angle(config))};
  const auto pr = register_qpe_distribution(spec);
  out.register_peak = static_cast<int>(std::max_element(pr.begin(), pr.end()) - pr.begin());
  out.register_phase = register_phase(out.register_peak, t_qubits);
  out.difference = std::abs(angular_difference(out.ring_phase, out.register_phase));
  out.tolerance = std::max(kTwoPi / static_cast<double>(1L << t_qubits), grid.spacing());
  return out;
}

}  // namespace ringqpe
