"""Arithmetic and linear algebra over Z_d for prime d.

A phase point of an n-qudit system is stored as an integer vector of length
2n, ``x = (p_1, ..., p_n, q_1, ..., q_n)``.  All arrays returned by this module
are reduced into ``[0, d)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np


@lru_cache(maxsize=None)
def is_prime(d: int) -> bool:
    if d < 2:
        return False
    return all(d % k for k in range(2, int(d**0.5) + 1))


def check_prime(d: int) -> int:
    """Return ``d`` as an int, raising ``ValueError`` unless it is prime."""
    if int(d) != d or not is_prime(int(d)):
        raise ValueError(f"local dimension must be prime, got {d}")
    return int(d)


def inverse_mod(a: int, d: int) -> int:
    a %= d
    if a == 0:
        raise ZeroDivisionError(f"0 has no inverse mod {d}")
    return pow(a, -1, d)


def half(d: int) -> int:
    """The inverse of 2 in Z_d, i.e. (d+1)/2, for odd prime d."""
    if d % 2 == 0:
        raise ValueError("2 is not invertible mod an even modulus")
    return (d + 1) // 2


def phase_point(p, q, d: int) -> np.ndarray:
    p = np.atleast_1d(np.asarray(p, dtype=np.int64))
    q = np.atleast_1d(np.asarray(q, dtype=np.int64))
    if p.shape != q.shape or p.ndim != 1 or p.size == 0:
        raise ValueError("p and q must be nonempty vectors of equal length")
    return np.concatenate([p, q]) % d


def split(x) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x)
    n = x.shape[-1] // 2
    return x[..., :n], x[..., n:]


def symplectic_form(x, y, d: int) -> int:
    """The pairing ``[x, y] = p_x . q_y - q_x . p_y (mod d)``."""
    x = np.asarray(x, dtype=np.int64)
    y = np.asarray(y, dtype=np.int64)
    if x.shape != y.shape or x.ndim != 1 or x.size % 2:
        raise ValueError(f"phase points of mismatched shape {x.shape} vs {y.shape}")
    px, qx = split(x)
    py, qy = split(y)
    return int((px @ qy - qx @ py) % d)


def symplectic_matrix(n: int) -> np.ndarray:
    """J with ``[x, y] = x @ J @ y``."""
    eye = np.eye(n, dtype=np.int64)
    zero = np.zeros((n, n), dtype=np.int64)
    return np.block([[zero, eye], [-eye, zero]])


def all_points(n: int, d: int) -> np.ndarray:
    """Every phase point of V^n as rows, in lexicographic order of (p; q)."""
    grid = np.indices((d,) * (2 * n)).reshape(2 * n, -1).T
    return np.ascontiguousarray(grid, dtype=np.int64)


def point_index(x, d: int) -> int:
    """Position of ``x`` in :func:`all_points` order."""
    idx = 0
    for v in np.asarray(x, dtype=np.int64) % d:
        idx = idx * d + int(v)
    return idx


def format_point(x) -> str:
    """Serialize as ``"p1,...,pn;q1,...,qn"``."""
    p, q = split(np.asarray(x))
    return ",".join(str(int(v)) for v in p) + ";" + ",".join(str(int(v)) for v in q)


def parse_point(text: str, d: int) -> np.ndarray:
    try:
        ps, qs = text.strip().split(";")
        p = [int(v) for v in ps.split(",")]
        q = [int(v) for v in qs.split(",")]
    except ValueError as exc:
        raise ValueError(f"malformed phase point {text!r}") from exc
    return phase_point(p, q, d)


def rref(rows, d: int) -> np.ndarray:
    """Reduced row echelon form over Z_d with zero rows dropped.

    The RREF of a row space is unique, which makes it the canonical basis
    used throughout.
    """
    m = np.array(rows, dtype=np.int64, ndmin=2) % d
    n_rows, n_cols = m.shape
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        m[r] = (m[r] * inverse_mod(int(m[r, c]), d)) % d
        others = np.nonzero(m[:, c])[0]
        for i in others:
            if i != r:
                m[i] = (m[i] - m[i, c] * m[r]) % d
        r += 1
    return m[:r]


def nullspace(a, d: int) -> np.ndarray:
    """Basis (rows, in RREF) of ``{y : a @ y = 0 mod d}``."""
    a = np.array(a, dtype=np.int64, ndmin=2) % d
    n_cols = a.shape[1]
    red = rref(a, d) if a.size else np.zeros((0, n_cols), dtype=np.int64)
    pivots = []
    for row in red:
        pivots.append(int(np.nonzero(row)[0][0]))
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for f in free:
        v = np.zeros(n_cols, dtype=np.int64)
        v[f] = 1
        for row, pc in zip(red, pivots):
            v[pc] = (-row[f]) % d
        basis.append(v)
    if not basis:
        return np.zeros((0, n_cols), dtype=np.int64)
    return rref(basis, d)


@dataclass(frozen=True, eq=False)
class PhaseSubgroup:
    """A subgroup of V^n, stored by its canonical (RREF) basis."""

    d: int
    n: int
    basis: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=np.int64).reshape(-1, 2 * self.n)
        b = rref(b, self.d) if b.shape[0] else b
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)

    @property
    def rank(self) -> int:
        return self.basis.shape[0]

    @property
    def order(self) -> int:
        return self.d**self.rank

    def __contains__(self, x) -> bool:
        x = np.asarray(x, dtype=np.int64) % self.d
        if not x.any():
            return True
        if self.rank == 0:
            return False
        return rref(np.vstack([self.basis, x]), self.d).shape[0] == self.rank

    def __eq__(self, other) -> bool:
        if not isinstance(other, PhaseSubgroup):
            return NotImplemented
        return (self.d, self.n) == (other.d, other.n) and np.array_equal(self.basis, other.basis)

    def __hash__(self):
        return hash((self.d, self.n, self.basis.tobytes()))

    def __repr__(self):
        pts = ", ".join(format_point(b) for b in self.basis)
        return f"PhaseSubgroup(d={self.d}, n={self.n}, rank={self.rank}, basis=[{pts}])"

    def elements(self) -> np.ndarray:
        """All d^r elements, sorted lexicographically."""
        if self.rank == 0:
            return np.zeros((1, 2 * self.n), dtype=np.int64)
        coeffs = np.array(list(itertools.product(range(self.d), repeat=self.rank)), dtype=np.int64)
        pts = (coeffs @ self.basis) % self.d
        order = np.lexsort(pts.T[::-1])
        return pts[order]

    def is_isotropic(self) -> bool:
        b = self.basis
        if self.rank < 2:
            return True
        gram = (b @ symplectic_matrix(self.n) @ b.T) % self.d
        return not gram.any()


def subgroup_from_points(points, d: int, n: int | None = None) -> PhaseSubgroup:
    """Subgroup of V^n generated by ``points`` (Gaussian elimination mod d)."""
    pts = np.array(points, dtype=np.int64, ndmin=2)
    if pts.size == 0:
        if n is None:
            raise ValueError("cannot infer n from an empty point set")
        return PhaseSubgroup(d, n, np.zeros((0, 2 * n), dtype=np.int64))
    if pts.shape[1] % 2:
        raise ValueError("phase points must have even length 2n")
    if n is not None and pts.shape[1] != 2 * n:
        raise ValueError(f"expected points of length {2 * n}, got {pts.shape[1]}")
    return PhaseSubgroup(d, pts.shape[1] // 2, rref(pts, d))


def symplectic_complement(group: PhaseSubgroup) -> PhaseSubgroup:
    """``{y : [x, y] = 0 for all x in group}``, of rank 2n - r."""
    n, d = group.n, group.d
    if group.rank == 0:
        return PhaseSubgroup(d, n, np.eye(2 * n, dtype=np.int64))
    constraints = (group.basis @ symplectic_matrix(n)) % d
    return PhaseSubgroup(d, n, nullspace(constraints, d))


def random_isotropic(n: int, d: int, rank: int, rng: np.random.Generator) -> PhaseSubgroup:
    """Uniform-ish random isotropic subgroup of the given rank (rank <= n)."""
    if not 0 <= rank <= n:
        raise ValueError(f"isotropic rank must lie in [0, {n}], got {rank}")
    group = subgroup_from_points([], d, n)
    while group.rank < rank:
        perp = symplectic_complement(group)
        coeffs = rng.integers(0, d, size=perp.rank)
        v = (coeffs @ perp.basis) % d
        if v.any() and v not in group:
            group = subgroup_from_points(np.vstack([group.basis, v]), d, n)
    return group
