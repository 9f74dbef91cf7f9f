// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
// Usage: ringqpe_acceptance <path-to-ringqpe-cli> <scratch-dir>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <string>
#include <vector>

#include "ringqpe/abelian_ring.hpp"
#include "ringqpe/nonabelian.hpp"
#include "ringqpe/path_integral.hpp"
#include "ringqpe/qpe_pipeline.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using namespace ringqpe;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

RingConfig natural(double flux = 0.0) { return RingConfig{}.with_flux(flux); }

double relative_l2(const std::vector<cd>& a, const std::vector<cd>& b) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  return std::sqrt(num / den);
}

Outcome return_property() {
  const RingConfig c = natural();
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto s = testing::random_state(32, seed);
    worst = std::max(worst, distance(evolve(s, c, return_time(c)).state, s));
  }
  return {worst <= 1e-10, fmt("max ||evolve(s, t_R) - s|| = %.3g over 50 states (tol 1e-10)", worst)};
}

Outcome shift_property() {
  const AngleGrid grid(1024);
  double worst = 0.0;
  for (double flux : {0.1, 0.7, 1.3, 2.9, 4.0}) {
    const auto est = ring_qpe(natural(flux), 64, grid);
    worst = std::max(worst, std::abs(angular_difference(est.phase, wrap_angle(-2.0 * flux))));
  }
  return {worst <= grid.spacing(), fmt("max |phase - wrap(-2 Phi)| = %.3g (tol %.3g)", worst, grid.spacing())};
}

Outcome shift_identity() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> time(0.0, 30.0);
  std::uniform_real_distribution<double> flux(-4.0, 4.0);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double t = time(rng);
    const double f = flux(rng);
    const auto s = testing::random_state(24, 100 + i);
    worst = std::max(worst, shift_identity_residual(natural(f), s, t));
  }
  return {worst <= 1e-10, fmt("max residual = %.3g over 20 triples (tol 1e-10)", worst)};
}

Outcome per_mode_phase() {
  const RingConfig c = natural(0.7);
  const auto s = testing::random_state(8, 7);
  const auto e = evolve(s, c, return_time(c)).state;
  const cd ref = e.at(0) / s.at(0);
  double worst = 0.0;
  for (int m = -8; m <= 8; ++m) {
    const cd rel = (e.at(m) / s.at(m)) / ref;
    worst = std::max(worst, std::abs(rel - std::polar(1.0, 2.0 * 0.7 * m)));
  }
  return {worst <= 1e-12, fmt("max |ratio - e^{i 2 Phi m}| = %.3g, m in [-8, 8] (tol 1e-12)", worst)};
}

Outcome register_oracle() {
  const auto pr = register_qpe_distribution({3, 2.0 * kPi * 5.0 / 8.0});
  const double exact = std::abs(pr[5] - 1.0);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> flux(-3.0, 3.0);
  const AngleGrid grid(1024);
  int agree = 0;
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const auto cmp = compare_ring_vs_register(natural(flux(rng)), 100, 8, grid);
    agree += cmp.within_tolerance() ? 1 : 0;
    worst = std::max(worst, cmp.difference);
  }
  return {exact <= 1e-12 && agree == 10,
          fmt("|Pr(5) - 1| = %.3g; ring vs register %.0f/10 within tolerance (max diff %.3g, tol %.3g)", exact,
              agree, worst, 2.0 * kPi / 256.0)};
}

Outcome nonabelian() {
  const AngleGrid grid(1024);
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const int n = 2 + i % 3;
    const auto gauge = GaugeField::from_matrix(random_hermitian(n, 300 + i));
    const auto h = holonomy(gauge);
    for (int b = 0; b < n; ++b) {
      const auto est = nonabelian_qpe(gauge, b, natural(), 100, grid);
      worst = std::max(worst, std::abs(angular_difference(est.phase, wrap_angle(2.0 * h.eigenvalues[b]))));
    }
  }
  const RingConfig c = natural(0.7);
  const auto ring = ring_qpe(c, 100, grid);
  const auto one = nonabelian_qpe(GaugeField::abelian(c), 0, c, 100, grid);
  double dist = 0.0;
  for (std::size_t k = 0; k < ring.distribution.size(); ++k) {
    dist = std::max(dist, std::abs(ring.distribution[k] - one.distribution[k]));
  }
  const double phase = std::abs(angular_difference(one.phase, wrap_angle(-ring.phase)));
  const bool ok = worst <= grid.spacing() && dist <= 1e-12 && phase <= 1e-12;
  return {ok, fmt("max channel error %.3g (tol %.3g); N=1 reduction: distribution %.3g, eigenphase %.3g (tol 1e-12)",
                  worst, grid.spacing(), dist, phase)};
}

Outcome phase_space() {
  double worst = 0.0;
  for (double flux : {0.0, 0.7}) {
    PathSpec spec;
    spec.steps = 3;
    spec.momentum_cutoff = 6;
    spec.grid = AngleGrid(128);
    const RingConfig c = natural(flux);
    worst = std::max(worst, relative_l2(phase_space_propagator(c, spec),
                                        spectral_propagator(c, 6, spec.grid, return_time(c))));
  }
  return {worst <= 1e-6, fmt("max relative L2 = %.3g for Phi in {0, 0.7} (tol 1e-6)", worst)};
}

Outcome poisson() {
  // l = 40 cannot resolve 1e-6 with eta = 1e-3 dt: the momentum tail alone
  // exceeds it. Judged at l = 2048; the l = 40 numbers are reported too.
  const RingConfig c = natural(0.7);
  const double dt = kPi / 100.0;
  const auto r = poisson_step_check(c, dt, 0.3, 2048, 5);
  const auto small = poisson_step_check(c, dt, 0.3, 40, 5);
  bool monotone = true;
  double prev = INFINITY;
  for (int k = 0; k < 10; ++k) {
    const double ratio = winding_dominance_ratio(c, dt * std::ldexp(1.0, -k), 0.3);
    monotone = monotone && ratio < prev;
    prev = ratio;
  }
  return {r.relative_difference <= 1e-6 && monotone,
          fmt("l=2048, n_max=5: rel diff %.3g (tol 1e-6); ", r.relative_difference) +
              (monotone ? "winding ratio decreases over 10 halvings; " : "winding ratio NOT monotone; ") +
              fmt("l=40: rel diff %.3g, tail bound %.3g (tail-limited)", small.relative_difference,
                  small.lhs_tail_bound)};
}

Outcome minimizing() {
  const RingConfig c = natural(0.7);
  PathSpec spec;
  spec.steps = 100;
  spec.end = shift_angle(c);
  const Path p = minimizing_path(c, spec);
  const double h = 1e-6;
  double grad = 0.0;
  for (int j = 1; j < spec.steps; ++j) {
    Path up = p;
    Path down = p;
    up.angles[j] += h;
    down.angles[j] -= h;
    grad = std::max(grad, std::abs(action(up, c, spec) - action(down, c, spec)) / (2.0 * h));
  }
  const double eps = 0.01;
  const double measured = action(perturb(p, tent_increments(spec.steps, eps)), c, spec) - action(p, c, spec);
  const double predicted = c.hbar * spec.steps * spec.steps * eps * eps / (8.0 * kPi);
  const double cost_rel = std::abs(measured - predicted) / predicted;
  const double slope = (p.angles[1] - p.angles[0]) / time_step(c, spec);
  const double slope_rel = std::abs(slope + angular_velocity(c)) / angular_velocity(c);
  const bool ok = grad <= 1e-8 && cost_rel <= 1e-12 && slope_rel <= 1e-15;
  return {ok, fmt("gradient %.3g (tol 1e-8); tent cost rel err %.3g (tol 1e-12); slope rel err %.3g (tol 1e-15)",
                  grad, cost_rel, slope_rel)};
}

Outcome classical() {
  const std::vector<double> hbars{1.0, 0.1, 0.01};
  const double expected = std::sqrt(8.0 * kPi) / 2.0;
  double d_err = 0.0;
  double scaling = 0.0;
  for (int n : {100, 1000, 10000}) {
    const auto report = classical_limit_scan(natural(0.7), hbars, n, 2.0 / n);
    for (const auto& row : report.rows) {
      d_err = std::max(d_err, std::abs(row.max_deviation - expected));
      scaling = std::max(scaling, std::abs(row.return_time * row.hbar - 4.0 * kPi) / (4.0 * kPi));
    }
  }
  // Cost of the tent whose peak excursion is pi: N^2 (2 pi / N)^2 / (8 pi).
  const double reach_pi = 100.0 * 100.0 * std::pow(2.0 * kPi / 100.0, 2) / (8.0 * kPi);
  const bool ok = d_err <= 1e-9 && scaling <= 1e-12;
  return {ok, fmt("t_R*hbar = 4 pi to %.3g; d* = %.6f for all hbar, N (err %.3g); d* < pi, so reaching pi "
                  "costs dA/hbar = %.6f = pi/2, order one for every hbar",
                  scaling, expected, d_err, reach_pi)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism(const std::string& cli, const fs::path& scratch) {
  fs::remove_all(scratch);
  fs::create_directories(scratch);
  const fs::path gauge = scratch / "gauge.ini";
  std::ofstream(gauge) << "[gauge]\ndim = 3\nrandom_seed = 5\n";
  const std::vector<std::string> runs = {
      "evolve", "qpe --t-qubits 8 --samples 2000 --seed 42", "nonabelian --config " + gauge.string(),
      "pathint check-poisson", "pathint propagator", "pathint classical-scan --scan-steps 100,1000"};
  for (const char* tag : {"a", "b"}) {
    for (const auto& args : runs) {
      const std::string cmd =
          "\"" + cli + "\" " + args + " --out \"" + (scratch / tag).string() + "\" > /dev/null";
      if (std::system(cmd.c_str()) != 0) return {false, "command failed: " + args};
    }
  }
  int files = 0;
  for (const auto& entry : fs::directory_iterator(scratch / "a")) {
    const auto other = scratch / "b" / entry.path().filename();
    if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) {
      return {false, "differs: " + entry.path().filename().string()};
    }
    ++files;
  }
  return {files > 0, fmt("%.0f CSV/JSON/SVG files byte-identical across two runs", files)};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: %s <ringqpe-cli> <scratch-dir>\n", argv[0]);
    return 2;
  }
  const std::string cli = argv[1];
  const fs::path scratch = argv[2];

  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"return property", return_property},
      {"shift property", shift_property},
      {"exact evolution identity", shift_identity},
      {"per-mode AB phase", per_mode_phase},
      {"register oracle", register_oracle},
      {"non-abelian QPE", nonabelian},
      {"phase-space propagator", phase_space},
      {"Poisson identity", poisson},
      {"minimizing path", minimizing},
      {"classical-limit scan", classical},
      {"determinism", [&] { return determinism(cli, scratch); }},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
  }
  std::fflush(stdout);
  return failures == 0 ? 0 : 1;
}
