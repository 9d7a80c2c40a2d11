"""Exit criteria for the package, one test per criterion.

Each test records a PASS/FAIL line that is printed in the pytest terminal summary
(and directly when this file is run as a script).
"""
import io
import itertools
import time
from pathlib import Path

import numpy as np
import pytest

from qgatecheck import iofmt
from qgatecheck.analysis import (DERIVED_OPERATIONS, MarginalGrid, classical_fidelity,
                                 fidelity_interval, full_report, grid_min_mass, grid_witness)
from qgatecheck.channel import (NoisyGateModel, average_fidelity_mc, choi_fidelity, ideal_model,
                                process_matrix, random_chi_diagonal, random_unitary_mixture,
                                truth_table)
from qgatecheck.cli import run

from conftest import ACCEPTANCE_LINES

# Inclusive tolerance bands; FLOAT_SLACK only absorbs binary representation error
# (0.0335 and 0.611 sit exactly on their band edges in decimal arithmetic).
FLOAT_SLACK = 1e-12


def within(value, target, tol):
    return abs(value - target) <= tol + FLOAT_SLACK


def record(number, title, failures, detail=""):
    status = "PASS" if not failures else "FAIL"
    line = f"[{status}] criterion {number}: {title}"
    if detail:
        line += f" -- {detail}"
    if failures:
        line += " | " + "; ".join(failures)
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert not failures, line


def random_models(n, seed):
    """Alternating Pauli-diagonal and coherent unitary-mixture models."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(n):
        if i % 2 == 0:
            out.append(random_chi_diagonal(rng, sparsity=rng.choice([0.0, 0.5, 0.9])))
        else:
            strength = [None, 0.05, 0.3][i % 3]
            out.append(random_unitary_mixture(rng, terms=int(rng.integers(1, 4)), strength=strength))
    return out


def test_criterion_1_fixture_reproduction():
    t0 = time.perf_counter()
    z, x = iofmt.load_fixture("z"), iofmt.load_fixture("x")
    r = full_report(z, x, 0.5)
    elapsed = time.perf_counter() - t0
    checks = [
        ("F_Z", r.f_z, 0.853, 0.0005), ("F_X", r.f_x, 0.867, 0.0005),
        ("lo", r.f_qp_lo, 0.720, 0.001), ("hi", r.f_qp_hi, 0.853, 0.0005),
        ("C_coarse", r.c_coarse, 0.440, 0.002), ("D_coarse", r.d_coarse, 0.440, 0.002),
    ]
    failures = [f"{n}={v:.6f} not {t}±{tol}" for n, v, t, tol in checks if not within(v, t, tol)]
    if elapsed >= 1.0:
        failures.append(f"runtime {elapsed:.2f}s >= 1s")
    record(1, "fixture reproduction", failures,
           f"F_Z={r.f_z:.5f} F_X={r.f_x:.5f} F_qp in [{r.f_qp_lo:.5f}, {r.f_qp_hi:.5f}] "
           f"C=D={r.c_coarse:.5f} ({elapsed * 1000:.0f} ms)")


def test_criterion_2_error_budget():
    r = full_report(iofmt.load_fixture("z"), iofmt.load_fixture("x"))
    expected = {("z", "C"): 0.052, ("z", "T"): 0.051, ("z", "B"): 0.044,
                ("x", "C"): 0.071, ("x", "T"): 0.034, ("x", "B"): 0.028}
    budgets = {"z": r.eta_z, "x": r.eta_x}
    failures = []
    for (basis, sym), target in expected.items():
        v = budgets[basis][sym]
        if not within(v, target, 0.0005):
            failures.append(f"eta_{basis}({sym})={v:.6f} not {target}±0.0005")
    record(2, "error budget", failures,
           "eta_z=" + ",".join(f"{r.eta_z[s]:.5f}" for s in "CTB")
           + " eta_x=" + ",".join(f"{r.eta_x[s]:.5f}" for s in "CTB"))


def test_criterion_3_refined_bounds():
    r = full_report(iofmt.load_fixture("z"), iofmt.load_fixture("x"), 0.5)
    checks = [("F_I", r.f_i_min, 0.842), ("F_C", r.f_c_min, 0.792), ("F_D", r.f_d_min, 0.806),
              ("C_refined", r.c_refined, 0.584), ("D_refined", r.d_refined, 0.612)]
    failures = [f"{n}={v:.6f} not {t}±0.001" for n, v, t in checks if not within(v, t, 0.001)]
    if not (r.f_d_min > r.f_c_min and r.d_refined > r.c_refined):
        failures.append("expected F_D > F_C and D_refined > C_refined")
    record(3, "refined derived bounds", failures,
           f"F_I={r.f_i_min:.5f} F_C={r.f_c_min:.5f} F_D={r.f_d_min:.5f} "
           f"C={r.c_refined:.5f} D={r.d_refined:.5f}")


@pytest.fixture(scope="module")
def models():
    return random_models(600, 2024)


def test_criterion_4_choi_identity(models):
    t0 = time.perf_counter()
    worst = max(abs(choi_fidelity(m) - process_matrix(m).fidelity) for m in models)
    elapsed = time.perf_counter() - t0
    kinds = {m.variant for m in models}
    failures = []
    if worst >= 1e-10:
        failures.append(f"max residual {worst:.2e}")
    if elapsed >= 10:
        failures.append(f"runtime {elapsed:.1f}s")
    if kinds != {"chi_diagonal", "unitary_mixture"} or len(models) < 500:
        failures.append("model set not mixed or too small")
    record(4, "entangled-pair fidelity equals chi_00,00", failures,
           f"{len(models)} models, max residual {worst:.1e}, {elapsed:.2f}s")


def test_criterion_5_classical_fidelity_identity(models):
    worst = 0.0
    coherent = 0
    for m in models:
        grid = process_matrix(m).flip_grid()
        chi = process_matrix(m).matrix
        coherent += np.max(np.abs(chi - np.diag(np.diag(chi)))) > 1e-6
        fz = classical_fidelity(truth_table(m, "z"))
        fx = classical_fidelity(truth_table(m, "x"))
        worst = max(worst, abs(fz - grid[0, :].sum()), abs(fx - grid[:, 0].sum()))
    failures = [] if worst < 1e-10 else [f"max residual {worst:.2e}"]
    if coherent == 0:
        failures.append("no coherent models exercised")
    record(5, "classical fidelities equal diagonal sums", failures,
           f"{len(models)} models ({coherent} with off-diagonal chi), max residual {worst:.1e}")


def test_criterion_6_soundness():
    rng = np.random.default_rng(606)
    n = 1000
    interval_misses = 0
    derived_misses = {k: 0 for k in DERIVED_OPERATIONS}
    for _ in range(n):
        m = random_chi_diagonal(rng, sparsity=rng.choice([0.0, 0.6, 0.9]))
        r = full_report(truth_table(m, "z"), truth_table(m, "x"))
        f = choi_fidelity(m)
        if not (r.f_qp_lo - 1e-9 <= f <= r.f_qp_hi + 1e-9):
            interval_misses += 1
        bounds = {"identity_zx": r.f_i_min, "entangler": r.f_c_min, "bell_analyzer": r.f_d_min}
        for kind, op in DERIVED_OPERATIONS.items():
            true = classical_fidelity(truth_table(m, op.input_kind))
            if bounds[kind] > true + 1e-9:
                derived_misses[kind] += 1
    failures = []
    if interval_misses:
        failures.append(f"{interval_misses} interval violations")
    failures += [f"{v} {k} violations" for k, v in derived_misses.items() if v]
    record(6, "interval and derived-bound soundness", failures, f"{n} Pauli-diagonal models")


def test_criterion_7_average_fidelity():
    t0 = time.perf_counter()
    models = {
        0.0: NoisyGateModel.from_chi_diagonal({"XI": 1.0}),
        0.5: NoisyGateModel.from_chi_diagonal({"II": 0.5, "ZX": 0.25, "YY": 0.25}),
        0.72: iofmt.load_fixture("model"),
        1.0: ideal_model(),
    }
    failures, parts = [], []
    for seed, (f_qp, m) in enumerate(models.items(), start=7000):
        assert abs(choi_fidelity(m) - f_qp) < 1e-12
        mean, stderr = average_fidelity_mc(m, 100_000, seed)
        expected = (f_qp * 4 + 1) / 5
        dev = abs(mean - expected)
        # the noiseless gate gives stderr 0; compare with float slack there
        if dev > 3 * stderr + FLOAT_SLACK:
            failures.append(f"F_qp={f_qp}: {mean:.5f} vs {expected:.5f} ({dev / stderr:.1f} sigma)")
        parts.append(f"{f_qp}->{mean:.4f}")
    elapsed = time.perf_counter() - t0
    if elapsed >= 30:
        failures.append(f"runtime {elapsed:.1f}s")
    record(7, "average fidelity (F_qp d + 1)/(d + 1)", failures,
           " ".join(parts) + f" ({elapsed:.1f}s)")


def test_criterion_8_optimizer():
    rng = np.random.default_rng(808)
    worst_gap = worst_marg = 0.0
    for _ in range(1000):
        rows, cols = rng.dirichlet(np.ones(4)), rng.dirichlet(np.ones(4))
        if rng.random() < 0.25:
            rows[rng.integers(4)] = 0.0
            rows /= rows.sum()
        grid = MarginalGrid(rows, cols)
        rset = [i for i in range(4) if rng.random() < 0.5] or [int(rng.integers(4))]
        cset = [j for j in range(4) if rng.random() < 0.5] or [int(rng.integers(4))]
        cells = set(itertools.product(rset, cset))
        closed = max(0.0, rows[rset].sum() + cols[cset].sum() - 1)
        exact = grid_min_mass(grid, cells, method="solver")
        worst_gap = max(worst_gap, abs(exact - closed))
        w = grid_witness(grid, cells, "min")
        worst_marg = max(worst_marg, np.max(np.abs(w.sum(axis=1) - rows)),
                         np.max(np.abs(w.sum(axis=0) - cols)))
        if w.min() < 0:
            worst_marg = np.inf
    failures = []
    if worst_gap >= 1e-10:
        failures.append(f"solver vs closed form {worst_gap:.2e}")
    if worst_marg >= 1e-9:
        failures.append(f"witness marginal residual {worst_marg:.2e}")
    record(8, "exact grid minimizer", failures,
           f"1000 pairs, max gap {worst_gap:.1e}, max marginal residual {worst_marg:.1e}")


def _cli(argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(argv, stdout=out, stderr=err)
    return code, out.getvalue()


def test_criterion_9_round_trip_and_determinism(tmp_path):
    rng = np.random.default_rng(909)
    worst = 0.0
    for i in range(100):
        m = random_unitary_mixture(rng) if i % 2 else random_chi_diagonal(rng)
        table = truth_table(m, ["z", "x", "zx", "xz", "bell"][i % 5])
        for fmt in ("json", "csv"):
            back = iofmt.parse_truth_table(iofmt.emit_truth_table(table, fmt), fmt)
            worst = max(worst, np.max(np.abs(back.probs - table.probs)))
    failures = [] if worst <= 1e-12 else [f"round-trip error {worst:.2e}"]

    assert _cli(["fixture", "--out-dir", str(tmp_path)])[0] == 0
    z, x, model = (str(tmp_path / f) for f in ("table1_z.json", "table1_x.json", "table3_model.json"))
    invocations = [
        ["analyze", "--z-table", z, "--x-table", x],
        ["analyze", "--z-table", z, "--x-table", x, "--markdown"],
        ["simulate", "--model", model, "--basis", "bell", "--shots", "1000", "--seed", "3"],
        ["verify", "--model", model, "--mc-samples", "5000", "--seed", "4"],
    ]
    for argv in invocations:
        first, second = _cli(argv), _cli(argv)
        if first != second or first[0] != 0:
            failures.append(f"non-deterministic or failing: {' '.join(argv[:1])}")
    record(9, "round trip and CLI determinism", failures,
           f"max round-trip error {worst:.1e}, {len(invocations)} CLI invocations repeated")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
