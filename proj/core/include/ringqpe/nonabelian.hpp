#pragma once

// U(N) gauge holonomy for a particle on a ring carrying an internal index.
//
// The loop integral Theta = (1/hbar) oint A^k X_k . dx is a Hermitian N x N
// matrix; the holonomy is U_AB = exp(i Theta). Because the gauge field is
// constant along the ring, the evolution decouples in the eigenbasis of
// Theta: channel b behaves like the abelian ring with q Phi / hbar -> theta_b.
// At t_R the mode m in channel b picks up e^{2 i theta_b m}, so the angle
// measurement estimates the eigenphase of W = U_AB^2.

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "ringqpe/core.hpp"

namespace ringqpe {

// Generalized Gell-Mann basis of u(N): sqrt(2/N) * identity, then the symmetric
// off-diagonal matrices, the antisymmetric ones, and the N-1 diagonal ones.
// All satisfy tr(X_j X_k) = 2 delta_jk.
[[nodiscard]] std::vector<Eigen::MatrixXcd> generator_basis(int n);

class GaugeField {
 public:
  // Theta = sum_k A^k X_k over generator_basis(n); expects n^2 coefficients.
  static GaugeField from_coefficients(int n, const std::vector<double>& coefficients);

  // Throws NonHermitianError when ||theta - theta^dagger|| > 1e-12 ||theta||.
  static GaugeField from_matrix(const Eigen::MatrixXcd& theta);

  // Abelian reduction: N = 1 with Theta = q Phi / hbar.
  static GaugeField abelian(const RingConfig& config);

  [[nodiscard]] int dim() const noexcept { return static_cast<int>(theta_.rows()); }
  [[nodiscard]] const Eigen::MatrixXcd& theta() const noexcept { return theta_; }
  [[nodiscard]] const std::optional<std::vector<double>>& coefficients() const noexcept {
    return coefficients_;
  }

  // Projection of theta onto generator_basis: A^k = tr(X_k theta) / 2.
  [[nodiscard]] std::vector<double> project_coefficients() const;

 private:
  explicit GaugeField(Eigen::MatrixXcd theta) : theta_(std::move(theta)) {}

  Eigen::MatrixXcd theta_;
  std::optional<std::vector<double>> coefficients_;
};

struct Holonomy {
  Eigen::MatrixXcd u_ab;
  std::vector<double> eigenvalues;  // theta_b, ascending, unwrapped
  std::vector<double> eigenphases;  // wrap(theta_b)
  Eigen::MatrixXcd eigenvectors;    // column b belongs to theta_b
};

// ||A - A^dagger||_F.
[[nodiscard]] double hermiticity_residual(const Eigen::MatrixXcd& a);

// U_AB = V e^{i Lambda} V^dagger from the Hermitian eigendecomposition of theta.
[[nodiscard]] Holonomy holonomy(const GaugeField& gauge);
[[nodiscard]] Holonomy holonomy(const Eigen::MatrixXcd& theta);

// Seeded random Hermitian matrix with entries of order `scale`.
[[nodiscard]] Eigen::MatrixXcd random_hermitian(int n, std::uint64_t seed, double scale = 1.0);

// Channel-wise exact evolution; config.flux is ignored.
[[nodiscard]] WaveState evolve_spinor(const WaveState& state, const RingConfig& config,
                                      const GaugeField& gauge, double t);

// localized_state(l) (x) internal vector.
[[nodiscard]] WaveState localized_spinor(int l, const Eigen::VectorXcd& internal);

// The density of channel b peaks at angle -2 theta_b (as in the abelian ring);
// phase is reported as wrap(-refined_peak), the estimate of the eigenphase
// wrap(2 theta_b) of W. grid_peak and refined_peak stay measured angles.
[[nodiscard]] PhaseEstimate nonabelian_qpe(const GaugeField& gauge, int channel,
                                           const RingConfig& config, int l, const AngleGrid& grid);

struct SuperpositionPeak {
  double phase = 0.0;            // eigenphase estimate, wrap(-peak angle)
  double weight = 0.0;           // integrated probability of the peak's basin
  std::vector<int> channels;     // eigenchannels whose target is nearest this peak
  double expected_weight = 0.0;  // sum of |w_b|^2 over those channels
};

struct SuperpositionReport {
  std::vector<double> distribution;
  std::vector<double> targets;   // wrap(2 theta_b) per channel
  std::vector<double> channel_weights;  // |w_b|^2
  std::vector<SuperpositionPeak> peaks;
};

// Localized state with internal vector sum_b w_b v_b, evolved for t_R.
// Peaks are local maxima above `threshold` times the global maximum; each
// peak's weight integrates the density between the neighbouring minima.
[[nodiscard]] SuperpositionReport superposition_check(const GaugeField& gauge,
                                                      const std::vector<cd>& weights,
                                                      const RingConfig& config, int l,
                                                      const AngleGrid& grid,
                                                      double threshold = 0.1);

}  // namespace ringqpe
