"""End-to-end checks of the ringqpe command-line tool.

Expects RINGQPE_CLI (path to the binary) and RINGQPE_SCHEMAS (schema directory).
"""

import csv
import json
import math
import os
import subprocess
import tempfile
import unittest
from pathlib import Path

import jsonschema

CLI = os.environ["RINGQPE_CLI"]
SCHEMAS = Path(os.environ["RINGQPE_SCHEMAS"])
TWO_PI = 2.0 * math.pi


def run(*args, cwd=None):
    return subprocess.run([CLI, *args], capture_output=True, text=True, cwd=cwd)


def read_csv(path):
    with open(path, newline="") as f:
        rows = list(csv.reader(f))
    return rows[0], [[float(x) for x in r] for r in rows[1:]]


def schema_for(command):
    name = command.replace(" ", "_").replace("-", "_")
    return json.loads((SCHEMAS / f"{name}.schema.json").read_text())


class CliTestCase(unittest.TestCase):
    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.tmp = Path(self._tmp.name)
        self.out = self.tmp / "out"

    def tearDown(self):
        self._tmp.cleanup()

    def ok(self, *args):
        r = run(*args, "--out", str(self.out))
        self.assertEqual(r.returncode, 0, r.stderr)
        lines = r.stdout.splitlines()
        self.assertEqual(len(lines), 1)
        summary = json.loads(lines[0])
        jsonschema.validate(summary, schema_for(summary["command"]))
        return summary

    def write_config(self, text):
        path = self.tmp / "run.ini"
        path.write_text(text)
        return str(path)


class Evolve(CliTestCase):
    def test_defaults(self):
        s = self.ok("evolve")
        self.assertEqual(len(s["times"]), 3)
        header, rows = read_csv(self.out / "evolve_t0.csv")
        self.assertEqual(header, ["phi", "re_psi", "im_psi", "density"])
        self.assertEqual(len(rows), 1024)
        for r in rows:
            self.assertTrue(-math.pi <= r[0] < math.pi)
        spacing = TWO_PI / 1024
        self.assertLessEqual(abs(s["peak_angles"][0]), spacing)
        self.assertLessEqual(abs(s["peak_angles"][2] - (-1.4)), spacing)
        for name in ("evolve_t0.svg", "evolve_t1.svg", "evolve_t2.svg", "evolve.json"):
            self.assertTrue((self.out / name).exists(), name)
        jsonschema.validate(json.loads((self.out / "evolve.json").read_text()), schema_for("evolve"))

    def test_zero_flux_returns(self):
        self.ok("evolve", "--flux", "0")
        _, first = read_csv(self.out / "evolve_t0.csv")
        _, last = read_csv(self.out / "evolve_t2.csv")
        worst = max(abs(a - b) for ra, rb in zip(first, last) for a, b in zip(ra, rb))
        self.assertLessEqual(worst, 1e-9)

    def test_format_subset(self):
        self.ok("evolve", "--format", "csv", "--times", "0")
        self.assertEqual(sorted(p.name for p in self.out.iterdir()), ["evolve_t0.csv"])


class Qpe(CliTestCase):
    def test_flux(self):
        s = self.ok("qpe", "--flux", "0.7")
        self.assertLessEqual(s["abs_error"], TWO_PI / 1024)
        self.assertAlmostEqual(s["flux_principal"], 0.7, delta=TWO_PI / 1024)
        header, rows = read_csv(self.out / "qpe_distribution.csv")
        self.assertEqual(header, ["phi", "probability_density"])

    def test_zero_flux(self):
        s = self.ok("qpe", "--flux", "0")
        self.assertLessEqual(abs(s["phase_estimate"]), 1e-9)

    def test_register_comparison(self):
        s = self.ok("qpe", "--t-qubits", "8")
        self.assertIn("register_peak", s)
        self.assertLessEqual(s["ring_register_difference"], TWO_PI / 256)
        _, rows = read_csv(self.out / "register_distribution.csv")
        self.assertEqual(len(rows), 256)
        self.assertAlmostEqual(sum(r[2] for r in rows), 1.0, places=12)

    def test_samples(self):
        s = self.ok("qpe", "--samples", "500", "--seed", "3")
        header, rows = read_csv(self.out / "samples.csv")
        self.assertEqual(header, ["index", "phi", "bin"])
        self.assertEqual(len(rows), 500)
        self.assertEqual(s["seed"], 3)

    def test_unresolvable_grid(self):
        r = run("qpe", "--grid", "64", "--out", str(self.out))
        self.assertEqual(r.returncode, 1)
        self.assertIn("numerics.grid", r.stderr)


class Nonabelian(CliTestCase):
    def test_one_dimensional_matches_qpe(self):
        cfg = self.write_config("[gauge]\ndim = 1\nmatrix = 0.7, 0\n")
        n = self.ok("nonabelian", "--config", cfg)
        q = self.ok("qpe", "--flux", "0.7")
        self.assertAlmostEqual(n["estimates"][0], -q["phase_estimate"], delta=1e-12)
        _, a = read_csv(self.out / "channel_0.csv")
        _, b = read_csv(self.out / "qpe_distribution.csv")
        self.assertLessEqual(max(abs(x[1] - y[1]) for x, y in zip(a, b)), 1e-12)

    def test_random_three_channels(self):
        cfg = self.write_config("[gauge]\ndim = 3\nrandom_seed = 17\n")
        s = self.ok("nonabelian", "--config", cfg)
        self.assertEqual(len(s["estimates"]), 3)
        for e in s["abs_errors"]:
            self.assertLessEqual(e, TWO_PI / 1024)
        for b in range(3):
            self.assertTrue((self.out / f"channel_{b}.csv").exists())

    def test_zero_gauge(self):
        cfg = self.write_config("[gauge]\ndim = 2\ncoefficients = 0 0 0 0\n")
        s = self.ok("nonabelian", "--config", cfg)
        for e in s["estimates"]:
            self.assertLessEqual(abs(e), 1e-9)

    def test_non_hermitian(self):
        cfg = self.write_config("[gauge]\ndim = 2\nmatrix = 0 0  1 0  0 0  0 0\n")
        r = run("nonabelian", "--config", cfg, "--out", str(self.out))
        self.assertEqual(r.returncode, 1)
        self.assertIn("1.414214", r.stderr)

    def test_missing_gauge(self):
        r = run("nonabelian", "--out", str(self.out))
        self.assertEqual(r.returncode, 1)
        self.assertIn("gauge", r.stderr)


class Pathint(CliTestCase):
    def test_check_poisson(self):
        s = self.ok("pathint", "check-poisson")
        self.assertLessEqual(s["relative_difference"], 1e-6)
        self.assertTrue(s["dominance_monotone"])
        header, _ = read_csv(self.out / "winding_dominance.csv")
        self.assertEqual(header, ["dt", "winding_ratio"])

    def test_check_poisson_tail_limited(self):
        r = run("pathint", "check-poisson", "--cutoff", "40", "--out", str(self.out))
        self.assertEqual(r.returncode, 4)
        self.assertFalse(json.loads(r.stdout)["passed"])

    def test_propagator(self):
        s = self.ok("pathint", "propagator")
        self.assertLessEqual(s["config_residual"], 5e-2)
        self.assertLessEqual(s["phase_space_residual"], 1e-6)

    def test_classical_scan(self):
        s = self.ok("pathint", "classical-scan")
        header, rows = read_csv(self.out / "classical_scan.csv")
        col = {h: i for i, h in enumerate(header)}
        d_star = math.sqrt(8 * math.pi) / 2
        for r in rows:
            self.assertAlmostEqual(r[col["return_time"]], 4 * math.pi / r[col["hbar"]], delta=1e-9)
            self.assertAlmostEqual(r[col["max_deviation"]], d_star, delta=1e-9)
        self.assertEqual(sorted({r[col["return_time"]] for r in rows}),
                         sorted([4 * math.pi, 40 * math.pi, 400 * math.pi]))
        header, _ = read_csv(self.out / "classical_paths.csv")
        self.assertTrue(all(h == "j" or "unwrapped" in h for h in header))

    def test_cost_guard(self):
        r = run("pathint", "propagator", "--steps", "7", "--out", str(self.out))
        self.assertEqual(r.returncode, 3)
        self.assertIn("N <=", r.stderr)


class Errors(CliTestCase):
    def test_unknown_key(self):
        cfg = self.write_config("[numerics]\ngirth = 3\n")
        r = run("qpe", "--config", cfg, "--out", str(self.out))
        self.assertEqual(r.returncode, 1)
        self.assertIn("numerics.girth", r.stderr)

    def test_unknown_flag(self):
        self.assertEqual(run("qpe", "--bogus").returncode, 1)

    def test_missing_subcommand(self):
        self.assertEqual(run().returncode, 1)

    def test_unwritable_output(self):
        blocker = self.tmp / "file"
        blocker.write_text("x")
        r = run("evolve", "--out", str(blocker / "sub"))
        self.assertEqual(r.returncode, 2)

    def test_flags_override_file(self):
        cfg = self.write_config("[physics]\nflux = 0.2\n")
        s = self.ok("qpe", "--config", cfg, "--flux", "0.5")
        self.assertEqual(s["flux"], 0.5)


class Determinism(CliTestCase):
    def test_byte_identical(self):
        a, b = self.tmp / "a", self.tmp / "b"
        for out in (a, b):
            for args in (["evolve"], ["qpe", "--samples", "200", "--seed", "9"]):
                r = run(*args, "--out", str(out))
                self.assertEqual(r.returncode, 0, r.stderr)
        names = sorted(p.name for p in a.iterdir())
        self.assertEqual(names, sorted(p.name for p in b.iterdir()))
        for name in names:
            self.assertEqual((a / name).read_bytes(), (b / name).read_bytes(), name)


if __name__ == "__main__":
    unittest.main(verbosity=2)
