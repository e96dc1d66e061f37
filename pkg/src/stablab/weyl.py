"""Weyl (generalized Pauli) operators and the characteristic function.

For odd prime d, ``w(p, q) = omega^(-2^{-1} p q) Z^p X^q`` with
``X|k> = |k+1>`` and ``Z|k> = omega^k |k>``; for d = 2, ``w(p, q) = i^(-pq) Z^p X^q``.
Multi-qudit operators are tensor products over sites.

The characteristic function ``Xi(x) = Tr[rho w(x)^dag]`` is evaluated with one
n-dimensional FFT per shift vector ``q`` rather than by materializing all
d^{2n} Weyl matrices.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import zd
from .dense import num_qudits
from .tolerances import TOL

MAX_TABLE_DIM = 128


@lru_cache(maxsize=None)
def _digits(n: int, d: int) -> np.ndarray:
    """Row k holds the base-d digits of basis index k (qudit 0 first)."""
    return np.indices((d,) * n).reshape(n, -1).T.astype(np.int64)


def _index(digits: np.ndarray, d: int) -> np.ndarray:
    n = digits.shape[-1]
    weights = d ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return (digits % d) @ weights


def weyl_phase(p, q, d: int) -> complex:
    """Scalar ``c`` with ``w(p, q) = c Z^p X^q`` for vectors ``p``, ``q``."""
    p = np.asarray(p, dtype=np.int64) % d
    q = np.asarray(q, dtype=np.int64) % d
    pq = int(np.sum(p * q))
    if d == 2:
        return 1j ** (-pq % 4)
    return np.exp(-2j * np.pi * ((zd.half(d) * pq) % d) / d)


def clock_shift(d: int) -> tuple[np.ndarray, np.ndarray]:
    """Single-qudit ``(X, Z)``."""
    x = np.roll(np.eye(d, dtype=complex), 1, axis=0)
    z = np.diag(np.exp(2j * np.pi * np.arange(d) / d))
    return x, z


def weyl(x, d: int) -> np.ndarray:
    """Matrix of ``w(x)`` for a phase point ``x = (p; q)``."""
    d = zd.check_prime(d)
    x = np.asarray(x, dtype=np.int64) % d
    p, q = zd.split(x)
    n = p.size
    dim = d**n
    dig = _digits(n, d)
    # (Z^p X^q)[a, b] = omega^(p.a) delta(a, b + q)
    rows = np.arange(dim)
    cols = _index(dig - q, d)
    vals = np.exp(2j * np.pi * ((dig @ p) % d) / d) * weyl_phase(p, q, d)
    out = np.zeros((dim, dim), dtype=complex)
    out[rows, cols] = vals
    return out


@lru_cache(maxsize=None)
def _phase_table(n: int, d: int) -> np.ndarray:
    """``conj(c(p, q))`` on the (D, D) grid indexed by (p index, q index)."""
    dig = _digits(n, d)
    pq = dig @ dig.T  # integer p.q, not reduced
    if d == 2:
        return 1j ** (pq % 4)
    return np.exp(2j * np.pi * ((zd.half(d) * pq) % d) / d)


@lru_cache(maxsize=None)
def _shift_index(n: int, d: int) -> np.ndarray:
    """``S[q, c]`` = basis index of ``c - q``."""
    dig = _digits(n, d)
    return _index(dig[None, :, :] - dig[:, None, :], d)


@dataclass(frozen=True, eq=False)
class CharTable:
    """Characteristic function over V^n, flattened in lexicographic (p; q) order."""

    n: int
    d: int
    values: np.ndarray

    def grid(self) -> np.ndarray:
        """Values reshaped to ``(d^n, d^n)`` indexed by (p index, q index)."""
        D = self.d**self.n
        return self.values.reshape(D, D)

    def __getitem__(self, x) -> complex:
        return self.values[zd.point_index(x, self.d)]

    def support(self, eps: float = TOL.supp) -> np.ndarray:
        return np.abs(self.values) > eps

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("p;q,re,im\n")
        for x, v in zip(zd.all_points(self.n, self.d), self.values):
            buf.write(f"{zd.format_point(x)},{v.real:.17g},{v.imag:.17g}\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, d: int) -> "CharTable":
        lines = [ln for ln in text.splitlines()[1:] if ln.strip()]
        n = zd.parse_point(lines[0].rsplit(",", 2)[0], d).size // 2
        vals = np.zeros(d ** (2 * n), dtype=complex)
        for ln in lines:
            pt, re, im = ln.rsplit(",", 2)
            vals[zd.point_index(zd.parse_point(pt, d), d)] = complex(float(re), float(im))
        return cls(n, d, vals)


def _check_table_dim(dim: int):
    if dim > MAX_TABLE_DIM:
        from .exceptions import CapExceededError

        raise CapExceededError(f"full phase-space tables are capped at d^n <= {MAX_TABLE_DIM}, got {dim}")


def char_function(rho, d: int) -> CharTable:
    """``Xi(x) = Tr[rho w(x)^dag]`` for every x in V^n."""
    d = zd.check_prime(d)
    rho = np.asarray(rho, dtype=complex)
    dim = rho.shape[0]
    n = num_qudits(dim, d)
    _check_table_dim(dim)
    # Xi(p, q) = conj(c) * sum_c rho[c, c - q] omega^(-p.c)
    g = rho[np.arange(dim)[None, :], _shift_index(n, d)]  # g[q, c]
    g = g.reshape((dim,) + (d,) * n)
    f = np.fft.fftn(g, axes=tuple(range(1, n + 1))).reshape(dim, dim)  # f[q, p]
    grid = f.T * _phase_table(n, d)
    return CharTable(n, d, grid.reshape(-1))


def inverse_char(table: CharTable) -> np.ndarray:
    """``rho = d^-n sum_x Xi(x) w(x)``; no validity check on the result."""
    n, d = table.n, table.d
    dim = d**n
    coef = table.grid() * _phase_table(n, d).conj()  # Xi(p, q) c(p, q)
    coef = coef.T.reshape((dim,) + (d,) * n)  # [q, p...]
    # rho[c, c - q] = ifftn_p(Xi c)[c]
    vals = np.fft.ifftn(coef, axes=tuple(range(1, n + 1))).reshape(dim, dim)  # [q, c]
    rho = np.zeros((dim, dim), dtype=complex)
    rho[np.arange(dim)[None, :], _shift_index(n, d)] = vals
    return rho


def pauli_rank(rho, d: int, eps: float = TOL.supp) -> int:
    """Size of the support of the characteristic function."""
    return int(char_function(rho, d).support(eps).sum())


def conjugate(rho, x, d: int) -> np.ndarray:
    """``w(x) rho w(x)^dag`` via index permutation and diagonal phases."""
    rho = np.asarray(rho, dtype=complex)
    x = np.asarray(x, dtype=np.int64) % d
    p, q = zd.split(x)
    n = p.size
    dig = _digits(n, d)
    src = _index(dig - q, d)  # (X^q rho X^-q)[a, b] = rho[a - q, b - q]
    ph = np.exp(2j * np.pi * ((dig @ p) % d) / d)
    return ph[:, None] * rho[np.ix_(src, src)] * ph.conj()[None, :]
