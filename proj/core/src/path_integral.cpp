#include "ringqpe/path_integral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "ringqpe/abelian_ring.hpp"
#include "ringqpe/errors.hpp"

namespace ringqpe {

namespace {

constexpr cd kI{0.0, 1.0};

// Neumaier compensated sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  [[nodiscard]] double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

double inertia(const RingConfig& c) { return c.mass * c.radius * c.radius; }

// Regulated step dt - i eta.
cd regulated(double dt, double ratio) { return cd{dt, -ratio * dt}; }

// sqrt(m r^2 / (2 pi i hbar (dt - i eta))), principal branch.
cd step_prefactor(const RingConfig& config, cd dt) {
  return std::sqrt(cd{inertia(config), 0.0} / (kTwoPi * kI * config.hbar * dt));
}

// One-step configuration kernel exp(i (m r^2 / 2 hbar) d^2 / dt + i d f).
struct StepKernel {
  cd quad;   // i (m r^2 / 2 hbar) / dt
  double f;  // reduced flux

  [[nodiscard]] cd operator()(double d) const { return std::exp(quad * d * d + kI * (d * f)); }
};

StepKernel make_kernel(const RingConfig& config, cd dt) {
  return {kI * (inertia(config) / (2.0 * config.hbar)) / dt, config.reduced_flux()};
}

void require_regulator(double ratio) {
  if (!(ratio > 0.0) || !std::isfinite(ratio)) {
    throw std::invalid_argument("regulator eta must be > 0");
  }
}

// Upper bound of sum_{j >= 0} exp(-s (u + j * spacing)^2) for u > 0.
double gaussian_tail(double s, double u, double spacing) {
  if (u <= 0.0) return std::numeric_limits<double>::infinity();
  const double root = std::sqrt(s);
  return std::exp(-s * u * u) + std::sqrt(kPi) / (2.0 * root * spacing) * std::erfc(root * u);
}

}  // namespace

void PathSpec::validate() const {
  if (steps < 1) throw std::invalid_argument("PathSpec: steps must be >= 1");
  if (momentum_cutoff < 1) throw std::invalid_argument("PathSpec: momentum_cutoff must be >= 1");
  if (winding_cutoff < 0) throw std::invalid_argument("PathSpec: winding_cutoff must be >= 0");
  if (!std::isfinite(start) || !std::isfinite(end)) {
    throw std::invalid_argument("PathSpec: endpoints must be finite");
  }
}

double time_step(const RingConfig& config, const PathSpec& spec) {
  return return_time(config) / spec.steps;
}

double action(const Path& path, const RingConfig& config, const PathSpec& spec) {
  if (path.steps() != spec.steps) {
    throw std::invalid_argument("action: path has " + std::to_string(path.steps()) +
                                " steps, spec has " + std::to_string(spec.steps));
  }
  const double dt = time_step(config, spec);
  const double kinetic = inertia(config) / (2.0 * dt);
  const double drift = config.charge * config.flux / kTwoPi;
  CompensatedSum sum;
  for (int j = 1; j <= spec.steps; ++j) {
    const double d = path.angles[j] - path.angles[j - 1];
    sum.add(kinetic * d * d);
    sum.add(d * drift);
  }
  return sum.value();
}

Path minimizing_path(const RingConfig& config, const PathSpec& spec) {
  config.validate();
  spec.validate();
  const int n = spec.steps;
  const double step = (spec.end - spec.start) / n;
  Path path;
  path.angles.resize(n + 1);
  for (int j = 0; j < n; ++j) path.angles[j] = spec.start + j * step;
  path.angles[n] = spec.end;
  return path;
}

std::vector<double> tent_increments(int steps, double eps) {
  if (steps < 2 || steps % 2 != 0) throw std::invalid_argument("tent_increments: N must be even");
  std::vector<double> out(steps, eps);
  std::fill(out.begin() + steps / 2, out.end(), -eps);
  return out;
}

Path perturb(const Path& base, std::span<const double> increments) {
  if (static_cast<int>(increments.size()) != base.steps()) {
    throw std::invalid_argument("perturb: need one increment per step");
  }
  CompensatedSum total;
  double scale = 0.0;
  for (double e : increments) {
    total.add(e);
    scale = std::max(scale, std::abs(e));
  }
  if (std::abs(total.value()) > 1e-12 * std::max(scale, 1.0)) {
    throw std::invalid_argument("perturb: increments must sum to zero so the endpoint is fixed");
  }
  Path out = base;
  CompensatedSum offset;
  for (std::size_t j = 1; j < out.angles.size(); ++j) {
    offset.add(increments[j - 1]);
    out.angles[j] = base.angles[j] + offset.value();
  }
  out.angles.back() = base.angles.back();
  return out;
}

double max_deviation(std::span<const double> increments) {
  CompensatedSum offset;
  double best = 0.0;
  for (double e : increments) {
    offset.add(e);
    best = std::max(best, std::abs(offset.value()));
  }
  return best;
}

double quadratic_action_cost(const RingConfig& config, int steps, std::span<const double> increments) {
  CompensatedSum sq;
  for (double e : increments) sq.add(e * e);
  return config.hbar * steps * sq.value() / (8.0 * kPi);
}

double linear_term_residual(const RingConfig& config, const PathSpec& spec,
                            std::span<const double> increments) {
  const Path base = minimizing_path(config, spec);
  const Path moved = perturb(base, increments);
  const double delta = action(moved, config, spec) - action(base, config, spec);
  return std::abs(delta - quadratic_action_cost(config, spec.steps, increments));
}

std::vector<cd> spectral_propagator(const RingConfig& config, int l, const AngleGrid& grid, double t,
                                    double damping) {
  config.validate();
  if (l < 1) throw std::invalid_argument("spectral_propagator: l must be >= 1");
  const double tr = return_time(config);
  const double tau = t / tr;
  const double decay = damping / tr;
  const double f = config.reduced_flux();
  std::vector<cd> weight(2 * l + 1);
  for (int m = -l; m <= l; ++m) {
    const double d = m - f;
    weight[m + l] = std::polar(std::exp(-kTwoPi * decay * d * d) / kTwoPi,
                               kTwoPi * wiggle_turns(tau, m, f, true));
  }
  std::vector<cd> out(grid.size());
  for (int i = 0; i < grid.size(); ++i) {
    const double phi = grid.point(i);
    cd sum{0.0, 0.0};
    for (int m = -l; m <= l; ++m) sum += weight[m + l] * std::polar(1.0, m * phi);
    out[i] = sum;
  }
  return out;
}

std::vector<cd> phase_space_propagator(const RingConfig& config, const PathSpec& spec) {
  config.validate();
  spec.validate();
  const int n = spec.steps;
  const int l = spec.momentum_cutoff;
  const int g = spec.grid.size();
  if (n > 6 || l > 12 || g > 256) {
    throw CostGuardError("phase_space_propagator: requires N <= 6, l <= 12, G <= 256 (got N = " +
                         std::to_string(n) + ", l = " + std::to_string(l) +
                         ", G = " + std::to_string(g) + ")");
  }
  const double tau = time_step(config, spec) / return_time(config);
  const double f = config.reduced_flux();
  std::vector<cd> wiggle(2 * l + 1);
  for (int m = -l; m <= l; ++m) {
    wiggle[m + l] = std::polar(1.0 / kTwoPi, kTwoPi * wiggle_turns(tau, m, f, true));
  }
  auto transfer = [&](double to, double from) {
    cd sum{0.0, 0.0};
    for (int m = -l; m <= l; ++m) sum += wiggle[m + l] * std::polar(1.0, m * (to - from));
    return sum;
  };

  const auto points = spec.grid.points();
  std::vector<cd> amp(g);
  for (int i = 0; i < g; ++i) amp[i] = transfer(points[i], spec.start);

  if (n > 1) {
    std::vector<cd> kernel(static_cast<std::size_t>(g) * g);
    for (int i = 0; i < g; ++i) {
      for (int j = 0; j < g; ++j) kernel[static_cast<std::size_t>(i) * g + j] = transfer(points[i], points[j]);
    }
    const double w = spec.grid.spacing();
    std::vector<cd> next(g);
    for (int step = 1; step < n; ++step) {
      for (int i = 0; i < g; ++i) {
        cd sum{0.0, 0.0};
        for (int j = 0; j < g; ++j) sum += kernel[static_cast<std::size_t>(i) * g + j] * amp[j];
        next[i] = w * sum;
      }
      amp.swap(next);
    }
  }
  return amp;
}

cd winding_term(const RingConfig& config, double dt, double dphi, int n, double regulator) {
  require_regulator(regulator);
  const auto kernel = make_kernel(config, regulated(dt, regulator));
  return kernel(dphi + kTwoPi * n);
}

PoissonCheck poisson_step_check(const RingConfig& config, double dt, double dphi, int l, int n_max,
                                double regulator) {
  config.validate();
  require_regulator(regulator);
  if (!(dt > 0.0)) throw std::invalid_argument("poisson_step_check: dt must be > 0");
  if (l < 1 || n_max < 0) throw std::invalid_argument("poisson_step_check: bad cutoffs");

  const cd step = regulated(dt, regulator);
  const double f = config.reduced_flux();
  // -i (hbar / 2 m r^2) (dt - i eta)
  const cd quad = -kI * (config.hbar / (2.0 * inertia(config))) * step;

  PoissonCheck out;
  cd lhs{0.0, 0.0};
  for (int m = -l; m <= l; ++m) {
    const double d = m - f;
    lhs += std::exp(quad * (d * d) + kI * (dphi * m));
  }
  out.lhs = lhs / kTwoPi;

  const auto kernel = make_kernel(config, step);
  cd rhs{0.0, 0.0};
  for (int n = -n_max; n <= n_max; ++n) rhs += kernel(dphi + kTwoPi * n);
  const cd prefactor = step_prefactor(config, step);
  out.rhs = prefactor * rhs;
  out.relative_difference = std::abs(out.lhs - out.rhs) / std::abs(out.lhs);

  const double s_m = config.hbar * regulator * dt / (2.0 * inertia(config));
  out.lhs_tail_bound = 2.0 * gaussian_tail(s_m, l + 1 - std::abs(f), 1.0) / kTwoPi;
  const double s_n = -kernel.quad.real();
  out.rhs_tail_bound =
      2.0 * std::abs(prefactor) * gaussian_tail(s_n, kTwoPi * (n_max + 1) - std::abs(dphi), kTwoPi);
  return out;
}

double winding_dominance_ratio(const RingConfig& config, double dt, double dphi, double regulator) {
  const double center = std::abs(winding_term(config, dt, dphi, 0, regulator));
  const double side = std::max(std::abs(winding_term(config, dt, dphi, 1, regulator)),
                               std::abs(winding_term(config, dt, dphi, -1, regulator)));
  return side / center;
}

ConfigSpaceResult config_space_propagator(const RingConfig& config, const PathSpec& spec) {
  config.validate();
  spec.validate();
  require_regulator(spec.regulator);
  const int n = spec.steps;
  const int g = spec.grid.size();
  const int windings = 2 * spec.winding_cutoff + 1;
  if (n > 5) throw CostGuardError("config_space_propagator: requires N <= 5, got " + std::to_string(n));
  if (g % 2 != 0) throw std::invalid_argument("config_space_propagator: grid size must be even");

  const long points = static_cast<long>(g) * windings;
  const double work = static_cast<double>(std::max(n - 2, 0)) * points * points +
                      static_cast<double>(g) * windings * points;
  constexpr double kMaxWork = 4e9;
  if (work > kMaxWork) {
    throw CostGuardError("config_space_propagator: quadrature work " + std::to_string(work) +
                         " exceeds " + std::to_string(kMaxWork) + " kernel evaluations");
  }

  const double dt = time_step(config, spec);
  const cd step = regulated(dt, spec.regulator);
  const auto kernel = make_kernel(config, step);
  const double h = spec.grid.spacing();
  const double half_range = windings * kPi;

  ConfigSpaceResult out;
  out.end_angles = spec.grid.points();
  out.kernel.assign(g, cd{0.0, 0.0});

  if (n == 1) {
    for (int e = 0; e < g; ++e) {
      cd sum{0.0, 0.0};
      for (int w = -spec.winding_cutoff; w <= spec.winding_cutoff; ++w) {
        sum += kernel(out.end_angles[e] + kTwoPi * w - spec.start);
      }
      out.kernel[e] = sum;
    }
  } else {
    // Intermediate nodes x_p = -half_range + p h. Differences between nodes,
    // and between nodes and wound end points, are integer multiples of h.
    std::vector<cd> table(2 * points - 1);
    for (long k = -(points - 1); k <= points - 1; ++k) table[k + points - 1] = kernel(k * h);
    auto lookup = [&](long k) { return table[k + points - 1]; };

    std::vector<cd> amp(points);
    for (long p = 0; p < points; ++p) amp[p] = kernel(-half_range + p * h - spec.start);

    std::vector<cd> next(points);
    for (int s = 2; s < n; ++s) {
      for (long q = 0; q < points; ++q) {
        cd sum{0.0, 0.0};
        const cd* row = &table[q + points - 1];
        for (long p = 0; p < points; ++p) sum += row[-p] * amp[p];
        next[q] = h * sum;
      }
      amp.swap(next);
    }

    // phi_e + 2 pi w - x_p = (e - p + g (w + n_max)) h
    for (int e = 0; e < g; ++e) {
      cd sum{0.0, 0.0};
      for (int w = 0; w < windings; ++w) {
        const long base = e + static_cast<long>(g) * w;
        for (long p = 0; p < points; ++p) sum += lookup(base - p) * amp[p];
      }
      out.kernel[e] = h * sum;
    }
  }

  // Regulated spectral propagator: the total damping is N eta = ratio * t_R.
  const double tr = return_time(config);
  const double damping = spec.regulator * tr;
  const double decay = kTwoPi * damping / tr;  // exponent per (m - f)^2
  out.exact_cutoff = static_cast<int>(std::ceil(std::abs(config.reduced_flux()) + std::sqrt(45.0 / decay))) + 1;
  out.exact = spectral_propagator(config, out.exact_cutoff, spec.grid, tr, damping);

  cd num{0.0, 0.0};
  double den = 0.0;
  double ref = 0.0;
  for (int e = 0; e < g; ++e) {
    num += std::conj(out.kernel[e]) * out.exact[e];
    den += std::norm(out.kernel[e]);
    ref += std::norm(out.exact[e]);
  }
  out.fit_constant = den > 0.0 ? num / den : cd{0.0, 0.0};
  double res = 0.0;
  for (int e = 0; e < g; ++e) res += std::norm(out.fit_constant * out.kernel[e] - out.exact[e]);
  out.residual = std::sqrt(res / ref);
  out.analytic_constant = std::pow(step_prefactor(config, step), n);
  return out;
}

ScanReport classical_limit_scan(const RingConfig& base, std::span<const double> hbar_values, int steps,
                                double epsilon) {
  if (hbar_values.empty()) throw std::invalid_argument("classical_limit_scan: empty scan");
  for (std::size_t i = 0; i < hbar_values.size(); ++i) {
    if (!(hbar_values[i] > 0.0)) throw std::invalid_argument("classical_limit_scan: hbar must be > 0");
    if (i > 0 && !(hbar_values[i] < hbar_values[i - 1])) {
      throw std::invalid_argument("classical_limit_scan: hbar values must be descending");
    }
  }

  ScanReport report;
  for (double hbar : hbar_values) {
    RingConfig config = base;
    config.hbar = hbar;
    config.validate();

    PathSpec spec;
    spec.steps = steps;
    spec.start = 0.0;
    spec.end = shift_angle(config);
    const Path best = minimizing_path(config, spec);
    const double a0 = action(best, config, spec);
    auto cost = [&](double eps) {
      const auto inc = tent_increments(steps, eps);
      return (action(perturb(best, inc), config, spec) - a0) / hbar;
    };

    ScanRow row;
    row.hbar = hbar;
    row.return_time = return_time(config);
    row.steps = steps;
    row.epsilon = epsilon;
    row.delta_action_over_hbar = cost(epsilon);
    row.predicted_action_over_hbar = static_cast<double>(steps) * steps * epsilon * epsilon / (8.0 * kPi);
    // The cost is quadratic in eps, so one reference evaluation fixes eps*.
    const double eps_ref = 1.0 / steps;
    row.epsilon_star = eps_ref / std::sqrt(cost(eps_ref));
    row.max_deviation = max_deviation(tent_increments(steps, row.epsilon_star));
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace ringqpe
