"""Experiment runner: seeded state batches checked against the uncertainty,
extremality and monotonicity inequalities, with CSV / JSON / .dat output.

Every quantity is computed in nats; the ``dits`` unit only rescales entropic
columns by ``1 / ln d`` at emission time, so verdicts never depend on it.
Cases are evaluated sequentially in case order, which keeps output files
byte-identical for a fixed configuration and seed.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import warnings
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__, zd
from .conv import COUPLING_CAP, ConvParams, default_params, find_params, iterate
from .dense import dumps_matrix, make_rng, num_qudits, random_state, rank_eps, validate_density
from .measures import (
    ConvergenceWarning,
    Bipartition,
    conditional_entropy,
    extremality_report,
    max_entropy,
)
from .stab import is_stabilizer, mean_state_threshold, partial_stabilizer_state, random_stabilizer_state
from .tolerances import TOL
from .weyl import MAX_TABLE_DIM, char_function, pauli_rank
from .wigner import wigner_function, wigner_rank

EXPERIMENTS = ("uncertainty", "extremality", "monotonicity", "clt")
FAMILIES = ("mixed", "stabilizer", "pure_stabilizer", "random", "full", "pure", "partial")
MIXED_CYCLE = ("stabilizer", "random", "partial", "pure_stabilizer", "pure", "full")
CLT_TARGET = 1e-3
CLT_FLOOR = 1e-12  # distances below this count as already converged


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    n: int = 2
    d: int = 3
    family: str = "mixed"
    count: int = 20
    seed: int = 0
    alphas: tuple = (0.5, 1.0, 2.0)
    s: int | None = None
    t: int | None = None
    L: int = 8
    out: str = "out"
    unit: str = "nats"

    def validate(self) -> "ExperimentConfig":
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}; choose from {EXPERIMENTS}")
        if not zd.is_prime(self.d):
            raise ConfigError(f"d must be prime, got {self.d}")
        if self.n < 1:
            raise ConfigError(f"n must be positive, got {self.n}")
        if self.count < 1:
            raise ConfigError(f"count must be positive, got {self.count}")
        if self.family not in FAMILIES:
            raise ConfigError(f"unknown state family {self.family!r}; choose from {FAMILIES}")
        if self.unit not in ("nats", "dits"):
            raise ConfigError(f"unit must be 'nats' or 'dits', got {self.unit!r}")
        if any(not a >= 0.5 for a in self.alphas) or not self.alphas:
            raise ConfigError(f"Renyi orders must be >= 1/2, got {self.alphas}")
        if self.d**self.n > MAX_TABLE_DIM:
            raise ConfigError(f"d^n = {self.d ** self.n} exceeds the phase-space table cap {MAX_TABLE_DIM}")
        if self.experiment == "extremality" and self.n < 2:
            raise ConfigError("extremality needs a bipartition, so n >= 2")
        if self.experiment in ("monotonicity", "clt"):
            if self.L < 1:
                raise ConfigError(f"L must be at least 1, got {self.L}")
            if self.n > 1 and self.d ** (2 * self.n) > COUPLING_CAP:
                raise ConfigError(f"d^2n = {self.d ** (2 * self.n)} exceeds the coupling cap {COUPLING_CAP}")
            self.params()
        return self

    def params(self) -> ConvParams:
        if self.s is None and self.t is None:
            if not find_params(self.d):
                raise ConfigError(f"d={self.d} admits no nontrivial convolution parameters; use d=7")
            return default_params(self.d)
        if self.s is None or self.t is None:
            raise ConfigError("give both --s and --t, or neither")
        try:
            return ConvParams(self.d, self.s, self.t)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def as_dict(self) -> dict:
        out = asdict(self)
        out["alphas"] = list(self.alphas)
        del out["out"]  # where files go is not part of the experiment
        return out


@dataclass
class Row:
    case: int
    family: str
    inequality: str
    lhs: float
    rhs: float
    gap: float
    ok: bool
    entropic: bool = True
    note: str = ""


@dataclass
class Report:
    experiment: str
    config: ExperimentConfig
    rows: list = field(default_factory=list)
    curves: dict = field(default_factory=dict)  # name -> list of (x, y)
    tables: dict = field(default_factory=dict)  # file name -> (header, rows, entropic column names)
    summary: dict = field(default_factory=dict)

    @property
    def violations(self) -> int:
        return sum(not r.ok for r in self.rows)

    def checks(self) -> dict:
        out = {}
        for r in self.rows:
            c = out.setdefault(r.inequality, {"cases": 0, "violations": 0, "min_gap": math.inf})
            c["cases"] += 1
            c["violations"] += int(not r.ok)
            c["min_gap"] = min(c["min_gap"], r.gap)
        return out

    def metadata(self) -> dict:
        return {
            "seed": self.config.seed,
            "tolerances": TOL.as_dict(),
            "version": __version__,
            "unit": self.config.unit,
        }


def unit_scale(config: ExperimentConfig) -> float:
    return 1 / math.log(config.d) if config.unit == "dits" else 1.0


# ---------------------------------------------------------------- state batches


def make_state(kind: str, n: int, d: int, rng: np.random.Generator) -> np.ndarray:
    dim = d**n
    if kind == "stabilizer":
        return random_stabilizer_state(n, d, int(rng.integers(0, n + 1)), rng)
    if kind == "pure_stabilizer":
        return random_stabilizer_state(n, d, n, rng)
    if kind == "random":
        return random_state(n, d, int(rng.integers(1, dim + 1)), seed=rng)
    if kind == "full":
        return random_state(n, d, None, seed=rng)
    if kind == "pure":
        return random_state(n, d, 1, seed=rng)
    if kind == "partial":
        rank = int(rng.integers(1, n + 1))
        k = int(rng.integers(1, d ** (n - rank) + 1))
        return partial_stabilizer_state(n, d, rank, rng, k)
    raise ConfigError(f"unknown state family {kind!r}")


def generate_states(config: ExperimentConfig) -> list[tuple[str, np.ndarray]]:
    """``count`` states; case k is drawn from its own labelled stream."""
    out = []
    for k in range(config.count):
        kind = MIXED_CYCLE[k % len(MIXED_CYCLE)] if config.family == "mixed" else config.family
        rng = make_rng(config.seed, f"{config.experiment}-{config.family}-{k}")
        out.append((kind, make_state(kind, config.n, config.d, rng)))
    return out


def default_cut(n: int) -> Bipartition:
    return Bipartition.of(list(range(n // 2)), n)


# ---------------------------------------------------------------- experiments


def uncertainty_rows(case: int, family: str, rho, d: int) -> tuple[list[Row], dict]:
    """The three rank inequalities and their equality verdicts for one state."""
    n = num_qudits(rho.shape[0], d)
    nlog = n * math.log(d)
    s_max = max_entropy(rho)
    log_p = math.log(pauli_rank(rho, d))
    stab = is_stabilizer(rho, d)
    pure = rank_eps(rho) == 1
    quantities = {"S_max": s_max, "ln_chi_P": log_p, "ln_chi_W": math.nan, "stabilizer": stab, "pure": pure}
    rows = []

    def check(name, lhs, rhs, predicted, label):
        gap = lhs - rhs
        rows.append(Row(case, family, name, lhs, rhs, gap, gap >= -TOL.log_slack))
        equal = abs(gap) <= TOL.log_slack
        rows.append(
            Row(case, family, f"{name} equality iff {label}", float(equal), float(predicted),
                float(equal != predicted), equal == predicted, entropic=False)
        )

    check("S_max + ln chi_P >= n ln d", s_max + log_p, nlog, stab, "stabilizer")
    if d != 2:
        log_w = math.log(wigner_rank(rho, d))
        quantities["ln_chi_W"] = log_w
        check("S_max + ln chi_W >= n ln d", s_max + log_w, nlog, stab and pure, "pure stabilizer")
        check("ln chi_P + ln chi_W >= 2n ln d", log_p + log_w, 2 * nlog, stab, "stabilizer")
    return rows, quantities


def run_uncertainty(config: ExperimentConfig) -> Report:
    config.validate()
    report = Report("uncertainty", config)
    table = []
    for case, (family, rho) in enumerate(generate_states(config)):
        rows, q = uncertainty_rows(case, family, rho, config.d)
        report.rows += rows
        table.append([case, family, q["S_max"], q["ln_chi_P"], q["ln_chi_W"], int(q["stabilizer"]), int(q["pure"])])
    header = ["case", "family", "S_max", "ln_chi_P", "ln_chi_W", "stabilizer", "pure"]
    report.tables["quantities.csv"] = (header, table, ("S_max", "ln_chi_P", "ln_chi_W"))
    stab = [r[0] for r in table if r[5]]
    report.summary = {"states": len(table), "stabilizers": len(stab), "pure_stabilizers": sum(r[5] and r[6] for r in table)}
    return report


_EXTREMALITY_NAMES = {
    "entropy": "S(rho) <= S(M(rho))",
    "entanglement_entropy": "S(A)_rho <= S(A)_M(rho)",
    "negativity": "N(rho) >= N(M(rho))",
}


def extremality_rows(case: int, family: str, rho, d: int, cut, alphas) -> list[Row]:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", ConvergenceWarning)
        report = extremality_report(rho, cut, d, alphas=alphas)
    stalled = sum(issubclass(w.category, ConvergenceWarning) for w in caught)
    rows = []
    for r in report:
        if r.measure.startswith("cond_entropy_"):
            a = r.measure.rsplit("_", 1)[1]
            name = f"S_{a}(A|B)_rho <= S_{a}(A|B)_M(rho)"
        else:
            name = _EXTREMALITY_NAMES[r.measure]
        note = f"optimizer stalled x{stalled}" if stalled and r.measure.startswith("cond") else ""
        rows.append(Row(case, family, name, r.value_rho, r.value_mean, r.gap, r.sign_ok, r.measure != "negativity", note))
    return rows


def run_extremality(config: ExperimentConfig) -> Report:
    config.validate()
    report = Report("extremality", config)
    cut = default_cut(config.n)
    for case, (family, rho) in enumerate(generate_states(config)):
        report.rows += extremality_rows(case, family, rho, config.d, cut, config.alphas)
    report.summary = {"states": config.count, "cut_A": list(cut.a), "cut_B": list(cut.b)}
    return report


def _monotone_rows(case, family, name, values, slack, entropic=True):
    rows = []
    for step in range(len(values) - 1):
        a, b = values[step], values[step + 1]
        rows.append(Row(case, family, name, a, b, b - a, b - a >= -slack, entropic, f"L={step}->{step + 1}"))
    return rows


def run_monotonicity(config: ExperimentConfig) -> Report:
    config.validate()
    report = Report("monotonicity", config)
    params = config.params()
    cut = default_cut(config.n) if config.n > 1 else None
    scale = unit_scale(config)
    for case, (family, rho) in enumerate(generate_states(config)):
        traj = iterate(rho, params, config.L, cut=cut, alpha=config.alphas[0])
        report.rows += _monotone_rows(case, family, "S nondecreasing", traj.column("entropy"), TOL.mono_slack)
        if cut is None:
            continue
        report.rows += _monotone_rows(case, family, "S(A) nondecreasing", traj.column("ent_entropy"), TOL.mono_slack)
        for i, alpha in enumerate(config.alphas):
            if i == 0:
                vals = traj.column("cond_entropy")
            else:
                vals = [conditional_entropy(s, cut, alpha, config.d) for s in traj.states]
            report.rows += _monotone_rows(case, family, f"S_{alpha:g}(A|B) nondecreasing", vals, TOL.opt_slack)
        report.tables[f"trajectory_case{case:03d}.csv"] = traj.to_csv(scale)
    report.summary = {"params": [params.s, params.t], "states": config.count}
    return report


def run_clt(config: ExperimentConfig) -> Report:
    config.validate()
    report = Report("clt", config)
    params = config.params()
    curves = []
    qualifying = []
    for case, (family, rho) in enumerate(generate_states(config)):
        traj = iterate(rho, params, config.L)
        dist = traj.column("trace_dist_to_mean")
        curves.append(dist)
        for step in range(config.L):
            a, b = dist[step], dist[step + 1]
            ok = b < a or (a <= CLT_FLOOR and b <= CLT_FLOOR)
            report.rows.append(Row(case, family, "trace distance strictly decreasing", a, b, a - b, ok, False, f"L={step}->{step + 1}"))
        report.rows.append(
            Row(case, family, f"final trace distance < {CLT_TARGET:g}", dist[-1], CLT_TARGET, CLT_TARGET - dist[-1],
                dist[-1] < CLT_TARGET, False, f"L={config.L}")
        )
        below = np.nonzero(dist < CLT_TARGET)[0]
        qualifying.append(int(below[0]) if below.size else None)
        report.curves[f"decay_case{case:03d}"] = list(enumerate(dist.tolist()))
    worst = np.max(np.array(curves), axis=0)
    report.curves["decay"] = list(enumerate(worst.tolist()))
    found = [q for q in qualifying if q is not None]
    report.summary = {
        "params": [params.s, params.t],
        "qualifying_L": qualifying,
        "max_qualifying_L": max(found) if len(found) == len(qualifying) else None,
    }
    return report


RUNNERS = {
    "uncertainty": run_uncertainty,
    "extremality": run_extremality,
    "monotonicity": run_monotonicity,
    "clt": run_clt,
}


def run(config: ExperimentConfig) -> Report:
    return RUNNERS[config.experiment](config)


# ---------------------------------------------------------------- single state


def analyze_state(rho, d: int, alphas=(0.5, 1.0, 2.0), unit: str = "nats", out: str = "out") -> Report:
    """Uncertainty and (for n >= 2) extremality rows for one state, plus its tables."""
    try:
        rho = validate_density(rho)
        n = num_qudits(rho.shape[0], d)
    except (ArithmeticError, ValueError) as exc:
        raise ConfigError(f"not a valid {d}-qudit density matrix: {exc}") from exc
    config = ExperimentConfig("uncertainty", n=n, d=d, count=1, alphas=tuple(alphas), unit=unit, out=out).validate()
    report = Report("state", config)
    rows, q = uncertainty_rows(0, "input", rho, d)
    report.rows += rows
    if n > 1:
        report.rows += extremality_rows(0, "input", rho, d, default_cut(n), config.alphas)
    mean = mean_state_threshold(rho, d)
    report.tables["char.csv"] = char_function(rho, d).to_csv()
    if d != 2:
        report.tables["wigner.csv"] = wigner_function(rho, d).to_csv()
    report.tables["mean_state.txt"] = dumps_matrix(mean.state, d)
    report.tables["group.json"] = mean.group.to_json() + "\n"
    report.summary = {
        "n": n,
        "rank": rank_eps(rho),
        "stabilizer": bool(q["stabilizer"]),
        "pauli_rank": pauli_rank(rho, d),
        "group_rank": mean.group.rank,
    }
    return report


# ---------------------------------------------------------------- emission


def _num(x, scale=1.0):
    if isinstance(x, (bool, np.bool_)):
        return int(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return repr(float(x) * scale)
    return x


def rows_csv(report: Report) -> str:
    scale = unit_scale(report.config)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["case", "family", "inequality", "lhs", "rhs", "gap", "verdict", "note"])
    for r in report.rows:
        s = scale if r.entropic else 1.0
        w.writerow([r.case, r.family, r.inequality, _num(r.lhs, s), _num(r.rhs, s), _num(r.gap, s),
                    "pass" if r.ok else "fail", r.note])
    return buf.getvalue()


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (float, np.floating)):
        return float(x) if math.isfinite(x) else None
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def report_json(report: Report) -> str:
    scale = unit_scale(report.config)
    checks = report.checks()
    entropic = {r.inequality for r in report.rows if r.entropic}
    for name, c in checks.items():
        if name in entropic:
            c["min_gap"] *= scale
    obj = {
        "experiment": report.experiment,
        "config": report.config.as_dict(),
        "metadata": report.metadata(),
        "checks": checks,
        "summary": report.summary,
        "violations": report.violations,
        "ok": report.violations == 0,
    }
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n"


def curve_dat(name: str, points) -> str:
    lines = [f"# {name}", "# x y"]
    lines += [f"{x} {float(y)!r}" for x, y in points]
    return "\n".join(lines) + "\n"


def _table_text(table, scale: float) -> str:
    if isinstance(table, str):
        return table
    header, rows, entropic = table
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    cols = {header.index(c) for c in entropic}
    for row in rows:
        w.writerow([_num(v, scale if i in cols else 1.0) for i, v in enumerate(row)])
    return buf.getvalue()


def emit(report: Report, out: str | None = None, formats=("csv", "json", "dat")) -> list[str]:
    """Write ``rows.csv``, ``report.json``, one ``<curve>.dat`` per curve and any tables."""
    out = report.config.out if out is None else out
    os.makedirs(out, exist_ok=True)
    scale = unit_scale(report.config)
    files = {}
    if "csv" in formats:
        files["rows.csv"] = rows_csv(report)
        for name, table in report.tables.items():
            files[name] = _table_text(table, scale)
    if "json" in formats:
        files["report.json"] = report_json(report)
    if "dat" in formats:
        for name, pts in report.curves.items():
            files[f"{name}.dat"] = curve_dat(name, pts)
    paths = []
    for name in sorted(files):
        path = os.path.join(out, name)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(files[name])
        paths.append(path)
    return paths
