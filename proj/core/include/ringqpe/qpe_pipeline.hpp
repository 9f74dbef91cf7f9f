#pragma once

// Ring-based phase estimation (localize, evolve for t_R, measure the angle)
// together with the textbook register algorithm used as an oracle.

#include <cstdint>
#include <vector>

#include "ringqpe/core.hpp"

namespace ringqpe {

// Register of 2^t states and a phase phi_u in the [-pi, pi] convention.
struct RegisterQpeSpec {
  int t_qubits = 1;
  double phase = 0.0;

  void validate() const;  // 1 <= t <= 20
};

struct MeasurementSample {
  std::vector<double> angles;   // grid angles in [-pi, pi)
  std::vector<int> bins;        // matching grid indices
  std::uint64_t seed = 0;
};

struct RingRegisterComparison {
  double ring_phase = 0.0;
  double register_phase = 0.0;  // 2 pi k / 2^t mapped to [-pi, pi)
  int register_peak = 0;
  double difference = 0.0;      // circular |ring - register|
  double tolerance = 0.0;       // max(2 pi / 2^t, 2 pi / G)
  [[nodiscard]] bool within_tolerance() const { return difference <= tolerance; }
};

// Pr(k) = |2^-t sum_j e^{i (phi_u - 2 pi k / 2^t) j}|^2 via the closed Dirichlet form.
[[nodiscard]] std::vector<double> register_qpe_distribution(const RegisterQpeSpec& spec);

// Register outcome k as a phase in [-pi, pi).
[[nodiscard]] double register_phase(int k, int t_qubits);

// Throws std::invalid_argument unless G >= 4l + 4.
void require_resolvable(int l, const AngleGrid& grid);

[[nodiscard]] PhaseEstimate ring_qpe(const RingConfig& config, int l, const AngleGrid& grid);

// Principal flux -hbar * phase / (2 q). Fluxes differing by k pi hbar / q give the same phase.
[[nodiscard]] double flux_from_phase(const RingConfig& config, double phase);

// n draws from the grid-binned density by inverse CDF; deterministic per seed.
[[nodiscard]] MeasurementSample sample_positions(const WaveState& state, const AngleGrid& grid,
                                                 int n, std::uint64_t seed);

[[nodiscard]] RingRegisterComparison compare_ring_vs_register(const RingConfig& config, int l,
                                                              int t_qubits, const AngleGrid& grid);

}  // namespace ringqpe
