#include "ringqpe/nonabelian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "ringqpe/abelian_ring.hpp"
#include "ringqpe/errors.hpp"
#include "ringqpe/qpe_pipeline.hpp"

namespace ringqpe {

std::vector<Eigen::MatrixXcd> generator_basis(int n) {
  if (n < 1) throw std::invalid_argument("generator_basis: N must be >= 1");
  using Mat = Eigen::MatrixXcd;
  std::vector<Mat> basis;
  basis.reserve(static_cast<std::size_t>(n) * n);
  basis.push_back(Mat::Identity(n, n) * std::sqrt(2.0 / n));

  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      Mat x = Mat::Zero(n, n);
      x(j, k) = 1.0;
      x(k, j) = 1.0;
      basis.push_back(std::move(x));
    }
  }
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      Mat x = Mat::Zero(n, n);
      x(j, k) = cd{0.0, -1.0};
      x(k, j) = cd{0.0, 1.0};
      basis.push_back(std::move(x));
    }
  }
  for (int d = 1; d < n; ++d) {
    Mat x = Mat::Zero(n, n);
    const double scale = std::sqrt(2.0 / (d * (d + 1.0)));
    for (int j = 0; j < d; ++j) x(j, j) = scale;
    x(d, d) = -d * scale;
    basis.push_back(std::move(x));
  }
  return basis;
}

double hermiticity_residual(const Eigen::MatrixXcd& a) {
  if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
  return (a - a.adjoint()).norm();
}

namespace {

void require_hermitian(const Eigen::MatrixXcd& theta) {
  if (theta.rows() < 1 || theta.rows() != theta.cols()) {
    throw std::invalid_argument("gauge matrix must be square with N >= 1");
  }
  const double residual = hermiticity_residual(theta);
  if (!std::isfinite(residual) || residual > 1e-12 * std::max(theta.norm(), 1.0)) {
    throw NonHermitianError("gauge matrix is not Hermitian: ||A - A^dagger|| = " +
                                std::to_string(residual),
                            residual);
  }
}

}  // namespace

GaugeField GaugeField::from_coefficients(int n, const std::vector<double>& coefficients) {
  if (n < 1) throw std::invalid_argument("GaugeField: N must be >= 1");
  if (coefficients.size() != static_cast<std::size_t>(n) * n) {
    throw std::invalid_argument("GaugeField: expected " + std::to_string(n * n) +
                                " generator coefficients, got " + std::to_string(coefficients.size()));
  }
  const auto basis = generator_basis(n);
  Eigen::MatrixXcd theta = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t k = 0; k < basis.size(); ++k) theta += coefficients[k] * basis[k];
  GaugeField g(std::move(theta));
  g.coefficients_ = coefficients;
  return g;
}

GaugeField GaugeField::from_matrix(const Eigen::MatrixXcd& theta) {
  require_hermitian(theta);
  return GaugeField(theta);
}

GaugeField GaugeField::abelian(const RingConfig& config) {
  Eigen::MatrixXcd theta(1, 1);
  theta(0, 0) = config.charge * config.flux / config.hbar;
  return GaugeField(std::move(theta));
}

std::vector<double> GaugeField::project_coefficients() const {
  const auto basis = generator_basis(dim());
  std::vector<double> out(basis.size());
  for (std::size_t k = 0; k < basis.size(); ++k) out[k] = 0.5 * (basis[k] * theta_).trace().real();
  return out;
}

Holonomy holonomy(const Eigen::MatrixXcd& theta) {
  require_hermitian(theta);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(theta);
  if (solver.info() != Eigen::Success) throw std::runtime_error("holonomy: eigendecomposition failed");

  Holonomy h;
  const auto n = theta.rows();
  h.eigenvectors = solver.eigenvectors();
  Eigen::VectorXcd phases(n);
  for (Eigen::Index b = 0; b < n; ++b) {
    const double lambda = solver.eigenvalues()(b);
    h.eigenvalues.push_back(lambda);
    h.eigenphases.push_back(wrap_angle(lambda));
    phases(b) = std::polar(1.0, lambda);
  }
  h.u_ab = h.eigenvectors * phases.asDiagonal() * h.eigenvectors.adjoint();
  return h;
}

Holonomy holonomy(const GaugeField& gauge) { return holonomy(gauge.theta()); }

Eigen::MatrixXcd random_hermitian(int n, std::uint64_t seed, double scale) {
  if (n < 1) throw std::invalid_argument("random_hermitian: N must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, scale);
  Eigen::MatrixXcd x(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      x(i, j) = cd{re, im};
    }
  }
  return 0.5 * (x + x.adjoint());
}

WaveState evolve_spinor(const WaveState& state, const RingConfig& config, const GaugeField& gauge,
                        double t) {
  config.validate();
  const int n = gauge.dim();
  if (state.internal_dim() != n) {
    throw std::invalid_argument("evolve_spinor: state internal_dim " +
                                std::to_string(state.internal_dim()) + " != gauge dim " +
                                std::to_string(n));
  }
  if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("evolve_spinor: t must be >= 0");

  const Holonomy h = holonomy(gauge);
  const Eigen::MatrixXcd& v = h.eigenvectors;
  const double tau = t / return_time(config);
  const int l = state.cutoff();

  WaveState out(l, n);
  Eigen::VectorXcd column(n);
  for (int m = -l; m <= l; ++m) {
    for (int a = 0; a < n; ++a) column(a) = state.at(m, a);
    Eigen::VectorXcd channel = v.adjoint() * column;
    for (int b = 0; b < n; ++b) {
      const double f = h.eigenvalues[b] / kTwoPi;
      channel(b) *= std::polar(1.0, kTwoPi * wiggle_turns(tau, m, f, true));
    }
    column = v * channel;
    for (int a = 0; a < n; ++a) out.at(m, a) = column(a);
  }
  return out;
}

WaveState localized_spinor(int l, const Eigen::VectorXcd& internal) {
  const auto base = localized_state(l);
  const int n = static_cast<int>(internal.size());
  WaveState out(l, n);
  for (int m = -l; m <= l; ++m) {
    for (int a = 0; a < n; ++a) out.at(m, a) = base.at(m) * internal(a);
  }
  return out;
}

PhaseEstimate nonabelian_qpe(const GaugeField& gauge, int channel, const RingConfig& config, int l,
                             const AngleGrid& grid) {
  if (channel < 0 || channel >= gauge.dim()) {
    throw std::out_of_range("nonabelian_qpe: channel " + std::to_string(channel) + " outside [0, " +
                            std::to_string(gauge.dim()) + ")");
  }
  require_resolvable(l, grid);
  const Holonomy h = holonomy(gauge);
  const auto initial = localized_spinor(l, h.eigenvectors.col(channel));
  const auto evolved = evolve_spinor(initial, config, gauge, return_time(config));
  auto est = estimate_peak(density_on_grid(evolved, grid), grid);
  // The density peaks at -2 theta_b; the eigenphase of W is its negative.
  est.phase = wrap_angle(-est.refined_peak);
  return est;
}

SuperpositionReport superposition_check(const GaugeField& gauge, const std::vector<cd>& weights,
                                        const RingConfig& config, int l, const AngleGrid& grid,
                                        double threshold) {
  const int n = gauge.dim();
  if (static_cast<int>(weights.size()) != n) {
    throw std::invalid_argument("superposition_check: expected " + std::to_string(n) + " weights");
  }
  double total = 0.0;
  for (const auto& w : weights) total += std::norm(w);
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("superposition_check: weights not normalized (sum |w|^2 = " +
                                std::to_string(total) + ")");
  }
  require_resolvable(l, grid);

  const Holonomy h = holonomy(gauge);
  Eigen::VectorXcd internal = Eigen::VectorXcd::Zero(n);
  for (int b = 0; b < n; ++b) internal += weights[b] * h.eigenvectors.col(b);

  const auto evolved = evolve_spinor(localized_spinor(l, internal), config, gauge, return_time(config));

  SuperpositionReport report;
  report.distribution = density_on_grid(evolved, grid);
  for (int b = 0; b < n; ++b) {
    report.targets.push_back(wrap_angle(2.0 * h.eigenvalues[b]));
    report.channel_weights.push_back(std::norm(weights[b]));
  }

  const auto& d = report.distribution;
  const int g = grid.size();
  auto at = [&](int i) { return d[((i % g) + g) % g]; };
  const double dmax = *std::max_element(d.begin(), d.end());

  std::vector<int> peak_index;
  for (int i = 0; i < g; ++i) {
    if (d[i] >= threshold * dmax && d[i] > at(i - 1) && d[i] >= at(i + 1)) peak_index.push_back(i);
  }

  // Basin boundaries: the density minimum between circularly adjacent peaks.
  const int count = static_cast<int>(peak_index.size());
  std::vector<int> boundary(count);
  for (int p = 0; p < count; ++p) {
    const int from = peak_index[p];
    int to = peak_index[(p + 1) % count];
    if (to <= from) to += g;
    int best = from;
    for (int i = from; i <= to; ++i) {
      if (at(i) < at(best)) best = i;
    }
    boundary[p] = best;  // basin p ends here (exclusive), basin p+1 starts here
  }

  for (int p = 0; p < count; ++p) {
    SuperpositionPeak peak;
    peak.phase = wrap_angle(-refine_peak(d, grid, peak_index[p]));
    if (count == 1) {
      for (int i = 0; i < g; ++i) peak.weight += d[i];
    } else {
      int start = boundary[(p - 1 + count) % count];
      int stop = boundary[p];
      if (stop <= start) stop += g;
      for (int i = start; i < stop; ++i) peak.weight += at(i);
    }
    peak.weight *= grid.spacing();
    report.peaks.push_back(std::move(peak));
  }

  for (int b = 0; b < n && count > 0; ++b) {
    int nearest = 0;
    for (int p = 1; p < count; ++p) {
      if (std::abs(angular_difference(report.targets[b], report.peaks[p].phase)) <
          std::abs(angular_difference(report.targets[b], report.peaks[nearest].phase))) {
        nearest = p;
      }
    }
    report.peaks[nearest].channels.push_back(b);
    report.peaks[nearest].expected_weight += report.channel_weights[b];
  }
  return report;
}

}  // namespace ringqpe
