"""Stabilizer groups, mean states and stabilizer-state synthesis.

The mean state ``M(rho)`` keeps the characteristic function on the points
where ``|Xi| = 1`` and zeroes it elsewhere.  It is built two ways: by that
thresholding directly, and as the average of ``w(y) rho w(y)^dag`` over the
symplectic complement of the stabilizer support.  The two must agree.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import zd
from .dense import num_qudits, validate_density
from .exceptions import CapExceededError, NumericalToleranceError
from .tolerances import TOL
from .weyl import CharTable, char_function, conjugate, inverse_char, weyl

TWIRL_CAP = 2**16


@dataclass(frozen=True, eq=False)
class StabilizerGroup:
    """Support subgroup of ``{x : |Xi(x)| = 1}`` plus ``Xi`` on its basis."""

    support: zd.PhaseSubgroup
    phases: tuple

    @property
    def d(self) -> int:
        return self.support.d

    @property
    def n(self) -> int:
        return self.support.n

    @property
    def rank(self) -> int:
        return self.support.rank

    def to_json(self) -> str:
        gens = [
            {"point": zd.format_point(x), "phase_re": float(c.real), "phase_im": float(c.imag)}
            for x, c in zip(self.support.basis, self.phases)
        ]
        return json.dumps({"d": self.d, "n": self.n, "generators": gens})

    @classmethod
    def from_json(cls, text: str) -> "StabilizerGroup":
        obj = json.loads(text)
        d, n = int(obj["d"]), int(obj["n"])
        pts = [zd.parse_point(g["point"], d) for g in obj["generators"]]
        phases = tuple(complex(g["phase_re"], g["phase_im"]) for g in obj["generators"])
        support = zd.PhaseSubgroup(d, n, np.array(pts, dtype=np.int64).reshape(-1, 2 * n))
        if not np.array_equal(support.basis, np.array(pts, dtype=np.int64).reshape(-1, 2 * n)):
            raise ValueError("generator points must be given in canonical (RREF) order")
        return cls(support, phases)


@dataclass(frozen=True, eq=False)
class MeanState:
    state: np.ndarray
    group: StabilizerGroup


def _group_from_table(table: CharTable, eps: float) -> StabilizerGroup:
    n, d = table.n, table.d
    mask = np.abs(table.values) >= 1 - eps
    pts = zd.all_points(n, d)[mask]
    support = zd.subgroup_from_points(pts, d, n)
    if support.order != mask.sum():
        raise NumericalToleranceError(
            f"unit-modulus set has {mask.sum()} points but spans {support.order}; not a subgroup"
        )
    if not support.is_isotropic():
        raise NumericalToleranceError("unit-modulus characteristic values do not form a commuting group")
    phases = tuple(complex(table[x]) for x in support.basis)
    return StabilizerGroup(support, phases)


def stabilizer_group(rho, d: int, eps: float = TOL.grp) -> StabilizerGroup:
    """The group ``G_rho`` of phase points with ``|Xi_rho(x)| >= 1 - eps``.

    Raises:
        NumericalToleranceError: if the detected set is not an isotropic
            subgroup, which for a valid state means the input is corrupted.
    """
    return _group_from_table(char_function(rho, d), eps)


def mean_state_threshold(rho, d: int, eps: float = TOL.grp) -> MeanState:
    table = char_function(rho, d)
    group = _group_from_table(table, eps)
    mask = np.abs(table.values) >= 1 - eps
    kept = CharTable(table.n, table.d, np.where(mask, table.values, 0))
    m = inverse_char(kept)
    m = 0.5 * (m + m.conj().T)
    return MeanState(validate_density(m), group)


def mean_state_twirl(rho, d: int, eps: float = TOL.grp) -> MeanState:
    """Average of ``w(y) rho w(y)^dag`` over y in the symplectic complement of G_rho.

    Terms are summed in lexicographic order of y.
    """
    rho = np.asarray(rho, dtype=complex)
    n = num_qudits(rho.shape[0], d)
    if d ** (2 * n) > TWIRL_CAP:
        raise CapExceededError(f"twirl enumeration capped at d^2n <= {TWIRL_CAP}")
    group = stabilizer_group(rho, d, eps)
    perp = zd.symplectic_complement(group.support)
    acc = np.zeros_like(rho)
    ys = perp.elements()
    for y in ys:
        acc += conjugate(rho, y, d)
    m = acc / len(ys)
    m = 0.5 * (m + m.conj().T)
    return MeanState(validate_density(m), group)


def mean_state(rho, d: int) -> np.ndarray:
    return mean_state_threshold(rho, d).state


def is_stabilizer(rho, d: int, tol: float = TOL.stab) -> bool:
    rho = np.asarray(rho, dtype=complex)
    return bool(np.linalg.norm(rho - mean_state(rho, d)) <= tol)


def _generator_matrix(x, tag, d: int) -> np.ndarray:
    w = weyl(x, d)
    if d == 2:
        if tag not in (1, -1):
            raise ValueError(f"qubit phase tag must be +1 or -1, got {tag!r}")
        return tag * w
    return np.exp(2j * np.pi * (int(tag) % d) / d) * w


def stabilizer_state_from_generators(gens, d: int, n: int | None = None) -> np.ndarray:
    """``d^-(n-r) prod_i E_k g_i^k`` for generators ``g_i`` given as ``(point, tag)``.

    The tag is a sign for d = 2 and an exponent ``c`` (``g = omega^c w(x)``) for odd d.

    Raises:
        ValueError: for non-commuting or dependent generator points.
        NumericalToleranceError: if the product is not a valid state.
    """
    d = zd.check_prime(d)
    gens = [(np.asarray(x, dtype=np.int64) % d, tag) for x, tag in gens]
    if not gens and n is None:
        raise ValueError("n is required when no generators are given")
    if gens:
        n_pts = gens[0][0].size // 2
        if n is not None and n != n_pts:
            raise ValueError(f"generator points describe {n_pts} qudits, expected {n}")
        n = n_pts
    dim = d**n
    pts = [x for x, _ in gens]
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if zd.symplectic_form(pts[i], pts[j], d):
                raise ValueError(f"generators {zd.format_point(pts[i])} and {zd.format_point(pts[j])} do not commute")
    r = len(gens)
    if r and zd.rref(np.array(pts), d).shape[0] != r:
        raise ValueError("generator points are linearly dependent")
    if r > n:
        raise ValueError(f"at most {n} independent commuting generators exist")
    rho = np.eye(dim, dtype=complex) / d ** (n - r)
    for x, tag in gens:
        g = _generator_matrix(x, tag, d)
        avg = np.zeros((dim, dim), dtype=complex)
        gk = np.eye(dim, dtype=complex)
        for _ in range(d):
            avg += gk
            gk = gk @ g
        rho = rho @ (avg / d)
    return validate_density(0.5 * (rho + rho.conj().T))


def random_stabilizer_generators(n: int, d: int, rank: int, rng: np.random.Generator) -> list:
    group = zd.random_isotropic(n, d, rank, rng)
    if d == 2:
        tags = [int(s) for s in rng.choice([1, -1], size=rank)]
    else:
        tags = [int(c) for c in rng.integers(0, d, size=rank)]
    return list(zip(group.basis, tags))


def random_stabilizer_state(n: int, d: int, rank: int | None, rng: np.random.Generator) -> np.ndarray:
    """Stabilizer state on a random isotropic group; pure when ``rank == n``."""
    rank = n if rank is None else rank
    return stabilizer_state_from_generators(random_stabilizer_generators(n, d, rank, rng), d, n)


def partial_stabilizer_state(n: int, d: int, rank: int, rng: np.random.Generator, k: int | None = None):
    """Random state confined to a joint eigenspace of a rank-``rank`` Weyl group.

    Its characteristic function has unit modulus on that group (so ``M`` is
    nontrivial) while, generically, the state is not itself a stabilizer.
    """
    gens = random_stabilizer_generators(n, d, rank, rng)
    proj = stabilizer_state_from_generators(gens, d, n) * d ** (n - rank)
    sub = d ** (n - rank)
    k = sub if k is None else min(k, sub)
    g = rng.standard_normal((d**n, k)) + 1j * rng.standard_normal((d**n, k))
    g = proj @ g
    rho = g @ g.conj().T
    rho = rho / np.trace(rho).real
    return validate_density(0.5 * (rho + rho.conj().T))
