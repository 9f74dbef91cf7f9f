#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "output.hpp"
#include "ringqpe/abelian_ring.hpp"
#include "ringqpe/errors.hpp"
#include "ringqpe/nonabelian.hpp"
#include "ringqpe/path_integral.hpp"
#include "ringqpe/qpe_pipeline.hpp"

namespace ringqpe::cli {

namespace {

using nlohmann::json;

// Frozen tolerances for the path-integral checks.
constexpr double kPoissonTolerance = 1e-6;
constexpr double kPhaseSpaceTolerance = 1e-6;
constexpr double kConfigSpaceTolerance = 5e-2;
constexpr double kDStarTolerance = 1e-9;
constexpr double kScalingTolerance = 1e-12;

json complex_json(cd z) { return json::array({z.real(), z.imag()}); }

void emit(const RunConfig& config, const OutputDir& dir, const std::string& stem, const CsvTable* csv,
          const std::string* svg, json& files) {
  if (csv && config.wants("csv")) {
    dir.write(stem + ".csv", csv->render());
    files.push_back(stem + ".csv");
  }
  if (svg && config.wants("svg")) {
    dir.write(stem + ".svg", *svg);
    files.push_back(stem + ".svg");
  }
}

void finish(const RunConfig& config, const OutputDir& dir, const std::string& stem, json& summary) {
  if (config.wants("json")) {
    summary["files"].push_back(stem + ".json");
    dir.write(stem + ".json", summary.dump(2) + "\n");
  }
}

OutputDir prepare(const RunConfig& config) {
  OutputDir dir(config.out_dir);
  dir.ensure();
  return dir;
}

AngleGrid checked_grid(int g, int l, int minimum, const char* rule) {
  if (g < minimum) {
    throw ConfigError("numerics.grid", "G = " + std::to_string(g) + " is below " + rule + " = " +
                                           std::to_string(minimum) + " for l = " + std::to_string(l));
  }
  return AngleGrid(g);
}

std::vector<double> density_of(const std::vector<cd>& field) {
  std::vector<double> out(field.size());
  for (std::size_t i = 0; i < field.size(); ++i) out[i] = std::norm(field[i]);
  return out;
}

GaugeField build_gauge(const GaugeBlock& block) {
  if (!block.coefficients.empty()) return GaugeField::from_coefficients(block.dim, block.coefficients);
  if (block.random_seed) {
    return GaugeField::from_matrix(random_hermitian(block.dim, *block.random_seed, block.random_scale));
  }
  Eigen::MatrixXcd theta(block.dim, block.dim);
  for (int r = 0; r < block.dim; ++r) {
    for (int c = 0; c < block.dim; ++c) {
      const std::size_t at = 2 * (static_cast<std::size_t>(r) * block.dim + c);
      theta(r, c) = cd{block.matrix[at], block.matrix[at + 1]};
    }
  }
  return GaugeField::from_matrix(theta);
}

CommandResult check_poisson(const RunConfig& config, const OutputDir& dir) {
  const double dt = config.dt.value_or(kPi / 100.0);
  const int l = config.cutoff.value_or(2048);
  const int n_max = config.winding_cutoff.value_or(5);
  const auto r = poisson_step_check(config.physics, dt, config.dphi, l, n_max, config.regulator);

  CsvTable check{{"dt", "dphi", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "relative_difference",
                  "lhs_tail_bound", "rhs_tail_bound"},
                 {{dt, config.dphi, r.lhs.real(), r.lhs.imag(), r.rhs.real(), r.rhs.imag(),
                   r.relative_difference, r.lhs_tail_bound, r.rhs_tail_bound}}};

  CsvTable dominance{{"dt", "winding_ratio"}, {}};
  Series curve{"|n=1| / |n=0|", "#1f77b4", {}, {}};
  std::vector<double> ratios;
  bool monotone = true;
  for (int k = 0; k < 10; ++k) {
    const double step = dt * std::ldexp(1.0, -k);
    const double ratio = winding_dominance_ratio(config.physics, step, config.dphi, config.regulator);
    if (!ratios.empty() && !(ratio < ratios.back())) monotone = false;
    ratios.push_back(ratio);
    dominance.rows.push_back({step, ratio});
    curve.x.push_back(std::log10(step));
    curve.y.push_back(std::log10(std::max(ratio, 1e-300)));
  }
  const auto svg = svg_line_plot("Winding-term dominance", "log10 dt", "log10 ratio", {curve});

  CommandResult result;
  json& s = result.summary;
  s["command"] = "pathint check-poisson";
  s["dt"] = dt;
  s["dphi"] = config.dphi;
  s["flux"] = config.physics.flux;
  s["cutoff"] = l;
  s["winding_cutoff"] = n_max;
  s["regulator"] = config.regulator;
  s["lhs"] = complex_json(r.lhs);
  s["rhs"] = complex_json(r.rhs);
  s["relative_difference"] = r.relative_difference;
  s["lhs_tail_bound"] = r.lhs_tail_bound;
  s["rhs_tail_bound"] = r.rhs_tail_bound;
  s["tolerance"] = kPoissonTolerance;
  s["winding_ratios"] = ratios;
  s["dominance_monotone"] = monotone;
  s["files"] = json::array();
  emit(config, dir, "poisson_check", &check, nullptr, s["files"]);
  emit(config, dir, "winding_dominance", &dominance, &svg, s["files"]);
  const bool ok = r.relative_difference <= kPoissonTolerance && monotone;
  s["passed"] = ok;
  finish(config, dir, "pathint_check_poisson", s);
  result.exit_code = ok ? kExitOk : kExitTolerance;
  return result;
}

CommandResult propagator(const RunConfig& config, const OutputDir& dir) {
  PathSpec spec;
  spec.steps = config.steps.value_or(3);
  spec.grid = AngleGrid(config.grid.value_or(96));
  spec.winding_cutoff = config.winding_cutoff.value_or(40);
  spec.momentum_cutoff = config.cutoff.value_or(6);
  spec.regulator = config.regulator;
  spec.start = 0.0;

  const auto cfg = config_space_propagator(config.physics, spec);
  const auto phase_space = phase_space_propagator(config.physics, spec);
  const auto spectral =
      spectral_propagator(config.physics, spec.momentum_cutoff, spec.grid, return_time(config.physics));

  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < spectral.size(); ++i) {
    num += std::norm(phase_space[i] - spectral[i]);
    den += std::norm(spectral[i]);
  }
  const double ps_residual = std::sqrt(num / den);

  CsvTable table{{"phi", "exact_re", "exact_im", "config_fit_re", "config_fit_im", "phase_space_re",
                  "phase_space_im", "spectral_re", "spectral_im"},
                 {}};
  Series exact{"regulated spectral |K|", "#000000", {}, {}};
  Series fitted{"configuration space |cK|", "#d62728", {}, {}};
  Series phase{"phase space |K| (l cutoff)", "#1f77b4", {}, {}};
  for (int i = 0; i < spec.grid.size(); ++i) {
    const double phi = cfg.end_angles[i];
    const cd fit = cfg.fit_constant * cfg.kernel[i];
    table.rows.push_back({phi, cfg.exact[i].real(), cfg.exact[i].imag(), fit.real(), fit.imag(),
                          phase_space[i].real(), phase_space[i].imag(), spectral[i].real(),
                          spectral[i].imag()});
    exact.x.push_back(phi), exact.y.push_back(std::abs(cfg.exact[i]));
    fitted.x.push_back(phi), fitted.y.push_back(std::abs(fit));
    phase.x.push_back(phi), phase.y.push_back(std::abs(phase_space[i]));
  }
  const auto svg = svg_line_plot("Propagator at t_R, N = " + std::to_string(spec.steps), "phi (rad)", "|K|",
                                 {exact, fitted, phase});

  CommandResult result;
  json& s = result.summary;
  s["command"] = "pathint propagator";
  s["steps"] = spec.steps;
  s["grid"] = spec.grid.size();
  s["winding_cutoff"] = spec.winding_cutoff;
  s["momentum_cutoff"] = spec.momentum_cutoff;
  s["flux"] = config.physics.flux;
  s["regulator"] = spec.regulator;
  s["config_residual"] = cfg.residual;
  s["config_tolerance"] = kConfigSpaceTolerance;
  s["fit_constant"] = complex_json(cfg.fit_constant);
  s["analytic_constant"] = complex_json(cfg.analytic_constant);
  s["exact_cutoff"] = cfg.exact_cutoff;
  s["phase_space_residual"] = ps_residual;
  s["phase_space_tolerance"] = kPhaseSpaceTolerance;
  s["files"] = json::array();
  emit(config, dir, "propagator", &table, &svg, s["files"]);
  const bool ok = cfg.residual <= kConfigSpaceTolerance && ps_residual <= kPhaseSpaceTolerance;
  s["passed"] = ok;
  finish(config, dir, "pathint_propagator", s);
  result.exit_code = ok ? kExitOk : kExitTolerance;
  return result;
}

CommandResult classical_scan(const RunConfig& config, const OutputDir& dir) {
  const double d_expected = std::sqrt(8.0 * kPi) / 2.0;
  CsvTable table{{"hbar", "return_time", "steps", "epsilon", "delta_action_over_hbar",
                  "predicted_action_over_hbar", "epsilon_star", "max_deviation"},
                 {}};
  std::vector<double> d_star;
  std::vector<double> tr_times_hbar;
  double worst_d = 0.0;
  for (int n : config.scan_steps) {
    if (n % 2 != 0) throw ConfigError("numerics.scan_steps", "tent family needs even N, got " + std::to_string(n));
    const double eps = config.epsilon.value_or(2.0 / n);
    const auto report = classical_limit_scan(config.physics, config.hbar_values, n, eps);
    for (const auto& row : report.rows) {
      table.rows.push_back({row.hbar, row.return_time, static_cast<double>(row.steps), row.epsilon,
                            row.delta_action_over_hbar, row.predicted_action_over_hbar, row.epsilon_star,
                            row.max_deviation});
      d_star.push_back(row.max_deviation);
      worst_d = std::max(worst_d, std::abs(row.max_deviation - d_expected));
      tr_times_hbar.push_back(row.return_time * row.hbar);
    }
  }
  const auto [lo, hi] = std::minmax_element(tr_times_hbar.begin(), tr_times_hbar.end());
  const double scaling_error = (*hi - *lo) / *hi;

  // Minimizing and tent paths for the first hbar and N; angles are unwrapped.
  RingConfig first = config.physics;
  first.hbar = config.hbar_values.front();
  const int n0 = config.scan_steps.front();
  PathSpec spec;
  spec.steps = n0;
  spec.end = shift_angle(first);
  const Path best = minimizing_path(first, spec);
  const double eps_star = classical_limit_scan(first, std::vector<double>{first.hbar}, n0, 2.0 / n0)
                              .rows.front()
                              .epsilon_star;
  const Path tent = perturb(best, tent_increments(n0, eps_star));
  CsvTable paths{{"j", "phi_min_unwrapped", "phi_tent_unwrapped"}, {}};
  Series s_min{"minimizing path", "#000000", {}, {}};
  Series s_tent{"tent at eps*", "#d62728", {}, {}};
  for (int j = 0; j <= n0; ++j) {
    paths.rows.push_back({static_cast<double>(j), best.angles[j], tent.angles[j]});
    s_min.x.push_back(j), s_min.y.push_back(best.angles[j]);
    s_tent.x.push_back(j), s_tent.y.push_back(tent.angles[j]);
  }
  const auto svg = svg_line_plot("Paths kept by interference, N = " + std::to_string(n0), "step j",
                                 "phi (unwrapped)", {s_min, s_tent});

  CommandResult result;
  json& s = result.summary;
  s["command"] = "pathint classical-scan";
  s["hbar_values"] = config.hbar_values;
  s["scan_steps"] = config.scan_steps;
  s["return_time_times_hbar"] = tr_times_hbar;
  s["return_time_scaling_error"] = scaling_error;
  s["d_star"] = d_star;
  s["d_star_expected"] = d_expected;
  s["max_d_star_error"] = worst_d;
  s["d_star_over_pi"] = d_expected / kPi;
  // Delta A / hbar of the tent whose excursion reaches pi: N^2 (2 pi / N)^2 / (8 pi).
  s["action_to_reach_pi_over_hbar"] = kPi / 2.0;
  s["files"] = json::array();
  emit(config, dir, "classical_scan", &table, nullptr, s["files"]);
  emit(config, dir, "classical_paths", &paths, &svg, s["files"]);
  const bool ok = worst_d <= kDStarTolerance && scaling_error <= kScalingTolerance;
  s["passed"] = ok;
  finish(config, dir, "pathint_classical_scan", s);
  result.exit_code = ok ? kExitOk : kExitTolerance;
  return result;
}

}  // namespace

CommandResult cmd_evolve(const RunConfig& config) {
  const int l = config.cutoff.value_or(100);
  const AngleGrid grid = checked_grid(config.grid.value_or(1024), l, 2 * l + 1, "2l + 1");
  const OutputDir dir = prepare(config);
  const double tr = return_time(config.physics);
  const auto initial = localized_state(l);

  CommandResult result;
  json& s = result.summary;
  s["command"] = "evolve";
  s["flux"] = config.physics.flux;
  s["cutoff"] = l;
  s["grid"] = grid.size();
  s["return_time"] = tr;
  s["times"] = json::array();
  s["peak_angles"] = json::array();
  s["norms"] = json::array();
  s["files"] = json::array();

  for (std::size_t i = 0; i < config.times_tr.size(); ++i) {
    const double t = config.times_tr[i] * tr;
    const auto evolved = evolve(initial, config.physics, t);
    const auto field = wavefunction_on_grid(evolved.state, grid);
    const auto density = density_of(field);

    CsvTable table{{"phi", "re_psi", "im_psi", "density"}, {}};
    Series re{"Re psi", "#1f77b4", {}, {}};
    Series im{"Im psi", "#d62728", {}, {}};
    for (int k = 0; k < grid.size(); ++k) {
      const double phi = grid.point(k);
      table.rows.push_back({phi, field[k].real(), field[k].imag(), density[k]});
      re.x.push_back(phi), re.y.push_back(field[k].real());
      im.x.push_back(phi), im.y.push_back(field[k].imag());
    }
    char label[64];
    std::snprintf(label, sizeof label, "t = %.6g t_R", config.times_tr[i]);
    const auto svg = svg_line_plot(std::string("Wavefunction at ") + label, "phi (rad)", "psi", {re, im});
    emit(config, dir, "evolve_t" + std::to_string(i), &table, &svg, s["files"]);

    s["times"].push_back(t);
    s["peak_angles"].push_back(estimate_peak(density, grid).phase);
    s["norms"].push_back(evolved.state.norm());
  }
  finish(config, dir, "evolve", s);
  return result;
}

CommandResult cmd_qpe(const RunConfig& config) {
  const int l = config.cutoff.value_or(100);
  const AngleGrid grid = checked_grid(config.grid.value_or(1024), l, 4 * l + 4, "4l + 4");
  if (config.physics.charge == 0.0) throw ConfigError("physics.charge", "must be non-zero for flux inversion");
  const OutputDir dir = prepare(config);

  const auto est = ring_qpe(config.physics, l, grid);
  const double expected = wrap_angle(shift_angle(config.physics));
  const double error = std::abs(angular_difference(est.phase, expected));
  const double tolerance = grid.spacing();

  CommandResult result;
  json& s = result.summary;
  s["command"] = "qpe";
  s["flux"] = config.physics.flux;
  s["cutoff"] = l;
  s["grid"] = grid.size();
  s["phase_estimate"] = est.phase;
  s["expected_phase"] = expected;
  s["abs_error"] = error;
  s["tolerance"] = tolerance;
  s["flux_principal"] = flux_from_phase(config.physics, est.phase);
  s["half_width"] = est.half_width;
  s["files"] = json::array();
  bool ok = error <= tolerance;

  CsvTable dist{{"phi", "probability_density"}, {}};
  Series curve{"ring density at t_R", "#1f77b4", {}, {}};
  for (int k = 0; k < grid.size(); ++k) {
    dist.rows.push_back({grid.point(k), est.distribution[k]});
    curve.x.push_back(grid.point(k)), curve.y.push_back(est.distribution[k]);
  }
  const auto svg = svg_line_plot("Ring phase estimation", "phi (rad)", "probability density", {curve});
  emit(config, dir, "qpe_distribution", &dist, &svg, s["files"]);

  if (config.t_qubits) {
    const int t = *config.t_qubits;
    const auto cmp = compare_ring_vs_register(config.physics, l, t, grid);
    const auto pr = register_qpe_distribution({t, expected});
    CsvTable reg{{"k", "phase", "probability"}, {}};
    for (std::size_t k = 0; k < pr.size(); ++k) {
      reg.rows.push_back({static_cast<double>(k), register_phase(static_cast<int>(k), t), pr[k]});
    }
    emit(config, dir, "register_distribution", &reg, nullptr, s["files"]);
    s["t_qubits"] = t;
    s["register_peak"] = cmp.register_peak;
    s["register_phase"] = cmp.register_phase;
    s["ring_register_difference"] = cmp.difference;
    s["ring_register_tolerance"] = cmp.tolerance;
    ok = ok && cmp.within_tolerance();
  }

  if (config.samples > 0) {
    const auto evolved = evolve(localized_state(l), config.physics, return_time(config.physics));
    const auto sample = sample_positions(evolved.state, grid, config.samples, config.seed);
    CsvTable rows{{"index", "phi", "bin"}, {}};
    std::vector<int> hist(grid.size(), 0);
    for (std::size_t i = 0; i < sample.angles.size(); ++i) {
      rows.rows.push_back({static_cast<double>(i), sample.angles[i], static_cast<double>(sample.bins[i])});
      ++hist[sample.bins[i]];
    }
    emit(config, dir, "samples", &rows, nullptr, s["files"]);
    const auto mode = std::max_element(hist.begin(), hist.end()) - hist.begin();
    s["samples"] = config.samples;
    s["seed"] = config.seed;
    s["sample_mode_angle"] = grid.point(static_cast<int>(mode));
  }

  s["passed"] = ok;
  finish(config, dir, "qpe", s);
  result.exit_code = ok ? kExitOk : kExitTolerance;
  return result;
}

CommandResult cmd_nonabelian(const RunConfig& config) {
  if (!config.gauge) throw ConfigError("gauge", "a [gauge] block is required");
  const int l = config.cutoff.value_or(100);
  const AngleGrid grid = checked_grid(config.grid.value_or(1024), l, 4 * l + 4, "4l + 4");
  const GaugeField gauge = build_gauge(*config.gauge);
  const OutputDir dir = prepare(config);

  const auto h = holonomy(gauge);
  const int n = gauge.dim();
  const double tolerance = grid.spacing();
  const double unitarity = (h.u_ab * h.u_ab.adjoint() - Eigen::MatrixXcd::Identity(n, n)).norm();

  CommandResult result;
  json& s = result.summary;
  s["command"] = "nonabelian";
  s["dim"] = n;
  s["cutoff"] = l;
  s["grid"] = grid.size();
  s["theta_eigenvalues"] = h.eigenvalues;
  s["holonomy_eigenphases"] = h.eigenphases;
  s["unitarity_residual"] = unitarity;
  s["w_eigenphases"] = json::array();
  s["estimates"] = json::array();
  s["peak_angles"] = json::array();
  s["abs_errors"] = json::array();
  s["files"] = json::array();

  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  std::vector<Series> curves;
  double worst = 0.0;
  for (int b = 0; b < n; ++b) {
    const auto est = nonabelian_qpe(gauge, b, config.physics, l, grid);
    const double target = wrap_angle(2.0 * h.eigenvalues[b]);
    const double error = std::abs(angular_difference(est.phase, target));
    worst = std::max(worst, error);
    s["w_eigenphases"].push_back(target);
    s["estimates"].push_back(est.phase);
    s["peak_angles"].push_back(est.refined_peak);
    s["abs_errors"].push_back(error);

    CsvTable dist{{"phi", "probability_density"}, {}};
    Series curve{"channel " + std::to_string(b), kColors[b % 6], {}, {}};
    for (int k = 0; k < grid.size(); ++k) {
      dist.rows.push_back({grid.point(k), est.distribution[k]});
      curve.x.push_back(grid.point(k)), curve.y.push_back(est.distribution[k]);
    }
    emit(config, dir, "channel_" + std::to_string(b), &dist, nullptr, s["files"]);
    curves.push_back(std::move(curve));
  }
  const auto svg = svg_line_plot("Non-abelian phase estimation", "phi (rad)", "probability density", curves);
  emit(config, dir, "nonabelian", nullptr, &svg, s["files"]);

  s["max_abs_error"] = worst;
  s["tolerance"] = tolerance;
  const bool ok = worst <= tolerance;
  s["passed"] = ok;
  finish(config, dir, "nonabelian", s);
  result.exit_code = ok ? kExitOk : kExitTolerance;
  return result;
}

CommandResult cmd_pathint(const RunConfig& config, const std::string& sub) {
  if (sub != "check-poisson" && sub != "propagator" && sub != "classical-scan") {
    throw ConfigError("pathint", "unknown subcommand '" + sub + "'");
  }
  const OutputDir dir = prepare(config);
  if (sub == "check-poisson") return check_poisson(config, dir);
  if (sub == "propagator") return propagator(config, dir);
  return classical_scan(config, dir);
}

int run_command(const std::string& command, const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    validate(config);
    CommandResult result;
    if (command == "evolve") {
      result = cmd_evolve(config);
    } else if (command == "qpe") {
      result = cmd_qpe(config);
    } else if (command == "nonabelian") {
      result = cmd_nonabelian(config);
    } else if (command.rfind("pathint ", 0) == 0) {
      result = cmd_pathint(config, command.substr(8));
    } else {
      throw ConfigError("command", "unknown command '" + command + "'");
    }
    out << result.summary.dump() << '\n';
    if (result.exit_code == kExitTolerance) err << "ringqpe: tolerance check failed\n";
    return result.exit_code;
  } catch (const ConfigError& e) {
    err << "ringqpe: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NonHermitianError& e) {
    err << "ringqpe: config error: gauge: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    err << "ringqpe: I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const CostGuardError& e) {
    err << "ringqpe: cost guard: " << e.what() << '\n';
    return kExitCostGuard;
  } catch (const std::invalid_argument& e) {
    err << "ringqpe: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "ringqpe: error: " << e.what() << '\n';
    return kExitConfig;
  }
}

}  // namespace ringqpe::cli
