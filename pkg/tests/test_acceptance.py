"""End-to-end acceptance suite.

Each test checks one criterion at its stated tolerance and records a one-line
PASS/FAIL verdict, printed in the pytest terminal summary (and immediately,
when run with ``-s``).  Run alone with ``pytest tests/test_acceptance.py``.
"""

import filecmp
import math
import os

import numpy as np
import pytest

from stablab import cli, conv, dense, lab, measures, stab, weyl, wigner
from stablab.lab import ExperimentConfig

from conftest import ACCEPTANCE
from oracles import grid_conditional


def record(key, title, ok, detail):
    ACCEPTANCE[key] = (bool(ok), title, detail)
    print(f"[{'PASS' if ok else 'FAIL'}] {key}. {title}: {detail}")
    assert ok, detail


def generated_states():
    """States from every family over the (d, n) grid used throughout."""
    out = []
    for d, n, count in [(2, 1, 12), (2, 2, 30), (2, 3, 20), (3, 1, 12), (3, 2, 30), (3, 3, 6), (5, 1, 12), (7, 1, 12), (7, 2, 6)]:
        cfg = ExperimentConfig("uncertainty", d=d, n=n, count=count, seed=101)
        out += [(d, n, kind, rho) for kind, rho in lab.generate_states(cfg)]
    return out


UNCERTAINTY_RUNS = [(2, 1, 30), (2, 2, 30), (2, 3, 30), (3, 1, 30), (3, 2, 30), (3, 3, 20), (7, 1, 30), (7, 2, 20)]


def test_1_uncertainty():
    states = violations = misclassified = 0
    by_ineq = {}
    for d, n, count in UNCERTAINTY_RUNS:
        rep = lab.run_uncertainty(ExperimentConfig("uncertainty", d=d, n=n, count=count, seed=1))
        states += count
        for r in rep.rows:
            bad = not r.ok
            if "equality" in r.inequality:
                misclassified += bad
            else:
                violations += bad
            by_ineq.setdefault(r.inequality, set()).add(d)
        # independent cross-check of the equality verdicts against the predicates
        for row, (kind, rho) in zip(rep.tables["quantities.csv"][1], lab.generate_states(rep.config)):
            assert bool(row[5]) == stab.is_stabilizer(rho, d)
    ok = states >= 200 and violations == 0 and misclassified == 0
    ok &= {2, 3} <= by_ineq["S_max + ln chi_P >= n ln d"]
    ok &= {3, 7} <= by_ineq["S_max + ln chi_W >= n ln d"] and {3, 7} <= by_ineq["ln chi_P + ln chi_W >= 2n ln d"]
    record(1, "uncertainty suite", ok, f"{states} states, {violations} violations, {misclassified} misclassified equalities")


def test_2_mean_state():
    worst_two, worst_idem, worst_d = 0.0, 0.0, 0.0
    count = partial = 0
    for d, n, kind, rho in generated_states():
        m = stab.mean_state_threshold(rho, d).state
        worst_two = max(worst_two, np.linalg.norm(m - stab.mean_state_twirl(rho, d).state))
        worst_idem = max(worst_idem, np.linalg.norm(stab.mean_state(m, d) - m))
        gap = measures.relative_entropy(rho, m) - (measures.von_neumann_entropy(m) - measures.von_neumann_entropy(rho))
        worst_d = max(worst_d, abs(gap))
        count += 1
        partial += kind == "partial"
    ok = count >= 100 and partial > 0 and worst_two <= 1e-9 and worst_idem <= 1e-9 and worst_d <= 1e-6
    record(2, "mean-state cross-validation", ok,
           f"{count} states ({partial} partial-stabilizer), threshold/twirl {worst_two:.1e}, "
           f"idempotence {worst_idem:.1e}, relative-entropy identity {worst_d:.1e}")


def test_3_parseval_plancherel():
    kappa = wigner.sft_kernel_sign()
    worst_p = worst_w = worst_sft = 0.0
    count = 0
    for d, n, kind, rho in generated_states():
        purity = dense.purity(rho)
        xi = weyl.char_function(rho, d)
        worst_p = max(worst_p, abs((np.abs(xi.values) ** 2).sum() / d**n - purity))
        if d != 2:
            w = wigner.wigner_function(rho, d).values
            worst_w = max(worst_w, abs(purity - d**n * (w**2).sum()))
            worst_sft = max(worst_sft, np.abs(wigner.wigner_via_symplectic_ft(xi).values - w).max())
        count += 1
    ok = worst_p <= 1e-9 and worst_w <= 1e-9 and worst_sft <= 1e-10
    record(3, "Parseval / Plancherel", ok,
           f"{count} states, Parseval {worst_p:.1e}, Plancherel {worst_w:.1e}, "
           f"symplectic-FT vs direct {worst_sft:.1e} (kernel sign {kappa:+d})")


def test_4_extremality():
    qubits = lab.run_extremality(ExperimentConfig("extremality", d=2, n=2, count=100, seed=4))
    qutrits = lab.run_extremality(ExperimentConfig("extremality", d=3, n=2, count=50, seed=4))
    rows = qubits.rows + qutrits.rows
    measures_seen = {r.inequality for r in rows}
    ok = qubits.violations == 0 and qutrits.violations == 0 and len(measures_seen) == 6
    stalled = sum(bool(r.note) for r in rows)
    min_gap = min(r.gap for r in rows)
    record(4, "extremality suite", ok,
           f"100 two-qubit + 50 two-qutrit states, {len(rows)} rows, {qubits.violations + qutrits.violations} violations, "
           f"min gap {min_gap:.1e}, optimizer stalls {stalled}")


def test_5_convolution():
    worst = 0.0
    for i, params in enumerate(conv.find_params(7)):
        for k in range(5):
            a = dense.random_state(1, 7, k=1 + (k * 3) % 7, seed=i * 10 + k, label="acc-a")
            b = dense.random_state(1, 7, seed=i * 10 + k, label="acc-b")
            worst = max(worst, np.abs(conv.convolve(a, b, params, "fast") - conv.convolve(a, b, params, "dense")).max())
    enum_ok = conv.find_params(3) == [] and conv.find_params(5) == [] and len(conv.find_params(7)) == 4
    single = lab.run_monotonicity(ExperimentConfig("monotonicity", d=7, n=1, family="full", count=20, L=8, seed=5))
    bipart = lab.run_monotonicity(ExperimentConfig("monotonicity", d=7, n=2, family="full", count=3, L=4, seed=5))
    clt = lab.run_clt(ExperimentConfig("clt", d=7, n=1, family="full", count=20, L=8, seed=5))
    names = {r.inequality for r in bipart.rows}
    mono_ok = single.violations == 0 and bipart.violations == 0 and len(names) == 5
    clt_ok = clt.violations == 0
    ok = worst <= 1e-9 and enum_ok and mono_ok and clt_ok
    record(5, "convolution suite (d=7)", ok,
           f"fast/dense {worst:.1e}, enumeration {'ok' if enum_ok else 'wrong'}, "
           f"monotonicity violations {single.violations + bipart.violations}, CLT violations {clt.violations}, "
           f"qualifying L = {clt.summary['max_qualifying_L']}")


def test_6_optimizer():
    worst_c = 0.0
    for seed in range(30):
        rho = dense.random_state(2, 2, k=1 + seed % 4, seed=seed, label="acc-cont")
        closed = measures.conditional_entropy(rho, [0], 1.0, 2)
        near = measures.optimize_conditional(rho, [0], 1.0001, 2).value
        worst_c = max(worst_c, abs(near - closed))
    worst_g = 0.0
    below = 0
    for case in range(10):
        n = 2 if case < 6 else 3
        k = [None, 2, 3, 1][case % 4]
        rho = dense.random_state(n, 2, k=k, seed=case, label="acc-grid")
        alpha = 0.5 if case % 2 == 0 else 2.0
        g, _ = grid_conditional(rho, alpha, 2 ** (n - 1))
        v = measures.optimize_conditional(rho, list(range(n - 1)), alpha, 2).value
        worst_g = max(worst_g, abs(v - g))
        below += v < g - 1e-9
    ok = worst_c <= 1e-3 and worst_g <= 5e-3 and below == 0
    record(6, "optimizer certification", ok,
           f"alpha->1 continuity {worst_c:.1e} on 30 states, grid oracle {worst_g:.1e} on 10 cases")


def test_7_determinism(tmp_path):
    path = tmp_path / "rho.txt"
    path.write_text(dense.dumps_matrix(stab.partial_stabilizer_state(2, 3, 1, dense.make_rng(7, "det")), 3))
    commands = [
        ["uncertainty", "--count", "12", "--seed", "7"],
        ["extremality", "--count", "6", "--seed", "7", "--unit", "dits"],
        ["monotonicity", "--count", "3", "--seed", "7", "--L", "4"],
        ["clt", "--count", "4", "--seed", "7"],
        ["state", str(path)],
    ]
    differing = []
    for cmd in commands:
        dirs = [tmp_path / f"{cmd[0]}-{i}" for i in range(2)]
        for dd in dirs:
            assert cli.main([*cmd, "--out", str(dd)]) == 0
        files = sorted(os.listdir(dirs[0]))
        assert files == sorted(os.listdir(dirs[1])) and files
        _, mismatch, errors = filecmp.cmpfiles(dirs[0], dirs[1], files, shallow=False)
        differing += [f"{cmd[0]}/{f}" for f in mismatch + errors]
    record(7, "determinism", not differing, f"{len(commands)} subcommands rerun, differing files: {differing or 'none'}")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
