"""Dense operator algebra on n-qudit Hilbert spaces.

Operators are plain complex ``numpy`` arrays.  Functions that need the tensor
structure take the local dimension ``d`` and infer the number of qudits from
the matrix size; qudit 0 is the most significant tensor factor.
"""

from __future__ import annotations

import io
import zlib
from dataclasses import dataclass
from functools import reduce
from typing import Iterable

import numpy as np

from .exceptions import NumericalToleranceError
from .tolerances import TOL


def num_qudits(dim: int, d: int) -> int:
    n = round(np.log(dim) / np.log(d))
    if d**n != dim:
        raise ValueError(f"dimension {dim} is not a power of {d}")
    return n


def kron(*ops) -> np.ndarray:
    """Tensor product of the given operators, left factor most significant."""
    if len(ops) == 1 and not isinstance(ops[0], np.ndarray):
        ops = tuple(ops[0])
    return reduce(np.kron, ops)


def is_hermitian(a, tol: float = TOL.herm) -> bool:
    a = np.asarray(a)
    return a.shape[0] == a.shape[1] and np.abs(a - a.conj().T).max() <= tol


def validate_density(rho, tol: float = TOL.herm) -> np.ndarray:
    """Check Hermiticity, unit trace and positivity; return ``rho`` as complex array.

    Raises:
        NumericalToleranceError: if any of the three conditions fails.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"density operator must be square, got shape {rho.shape}")
    if not np.isfinite(rho).all():
        raise NumericalToleranceError("density operator has non-finite entries")
    herm = np.abs(rho - rho.conj().T).max()
    if herm > tol:
        raise NumericalToleranceError(f"not Hermitian: deviation {herm:.3e}")
    tr = np.trace(rho).real
    if abs(tr - 1) > tol:
        raise NumericalToleranceError(f"trace {tr!r} differs from 1")
    lam_min = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0]
    if lam_min < -tol:
        raise NumericalToleranceError(f"negative eigenvalue {lam_min:.3e}")
    return rho


def _factor_dims(dim: int, d) -> list[int]:
    if np.isscalar(d):
        return [int(d)] * num_qudits(dim, int(d))
    dims = [int(v) for v in d]
    if int(np.prod(dims)) != dim:
        raise ValueError(f"factor dimensions {dims} do not multiply to {dim}")
    return dims


def _index_set(idx: Iterable[int], n: int, what: str) -> list[int]:
    if isinstance(idx, (int, np.integer)):
        idx = [idx]
    out = sorted(set(int(i) for i in idx))
    for i in out:
        if not 0 <= i < n:
            raise IndexError(f"{what} index {i} out of range for {n} factors")
    return out


def partial_trace(rho, keep, d) -> np.ndarray:
    """Trace out every factor not listed in ``keep``."""
    rho = np.asarray(rho)
    dims = _factor_dims(rho.shape[0], d)
    n = len(dims)
    keep = _index_set(keep, n, "keep")
    if not keep:
        raise ValueError("keep must name at least one subsystem")
    t = rho.reshape(dims + dims)
    traced = [i for i in range(n) if i not in keep]
    row = list(range(n))
    col = [n + i for i in range(n)]
    for i in traced:
        col[i] = row[i]
    out_idx = [row[i] for i in keep] + [col[i] for i in keep]
    dk = int(np.prod([dims[i] for i in keep]))
    return np.einsum(t, row + col, out_idx).reshape(dk, dk)


def partial_transpose(rho, part, d) -> np.ndarray:
    """Transpose the indices of the factors in ``part``."""
    rho = np.asarray(rho)
    dims = _factor_dims(rho.shape[0], d)
    n = len(dims)
    part = _index_set(part, n, "part")
    t = rho.reshape(dims + dims)
    axes = list(range(2 * n))
    for i in part:
        axes[i], axes[n + i] = axes[n + i], axes[i]
    return t.transpose(axes).reshape(rho.shape)


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def eig_hermitian(a) -> Spectrum:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending."""
    a = np.asarray(a, dtype=complex)
    scale = max(1.0, np.abs(a).max())
    if np.abs(a - a.conj().T).max() > TOL.herm * scale:
        raise ValueError("eig_hermitian requires a Hermitian matrix")
    lam, vec = np.linalg.eigh(0.5 * (a + a.conj().T))
    return Spectrum(lam[::-1].copy(), vec[:, ::-1].copy())


def _psd_eigh(a):
    a = np.asarray(a, dtype=complex)
    lam, vec = np.linalg.eigh(0.5 * (a + a.conj().T))
    if lam[0] < -TOL.psd * max(1.0, lam[-1]):
        raise NumericalToleranceError(f"operator is not PSD: eigenvalue {lam[0]:.3e}")
    return np.clip(lam, 0.0, None), vec


def matrix_power(a, s: float) -> np.ndarray:
    """``a**s`` for PSD ``a``; zero eigenvalues stay zero for any ``s``."""
    lam, vec = _psd_eigh(a)
    if s > 0:
        powed = lam**s
    else:
        powed = np.zeros_like(lam)
        pos = lam > rank_cutoff(lam)
        powed[pos] = lam[pos] ** s
    return (vec * powed) @ vec.conj().T


def matrix_log(a) -> np.ndarray:
    """Logarithm on the support of PSD ``a`` (zero on its kernel)."""
    lam, vec = _psd_eigh(a)
    out = np.zeros_like(lam)
    pos = lam > rank_cutoff(lam)
    out[pos] = np.log(lam[pos])
    return (vec * out) @ vec.conj().T


def trace_norm(a) -> float:
    return float(np.abs(np.linalg.eigvalsh(0.5 * (a + np.asarray(a).conj().T))).sum())


def rank_cutoff(eigenvalues) -> float:
    lam = np.asarray(eigenvalues)
    return TOL.rank * lam.size * max(float(lam.max()), 0.0)


def rank_eps(a) -> int:
    """Numerical rank: eigenvalues above ``1e-10 * dim * lambda_max``."""
    lam = np.linalg.eigvalsh(0.5 * (a + np.asarray(a).conj().T))
    return int((lam > rank_cutoff(lam)).sum())


def purity(rho) -> float:
    rho = np.asarray(rho)
    return float(np.real(np.vdot(rho, rho)))


def ket(index: int, dim: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[index] = 1
    return v


def projector(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


def maximally_mixed(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=complex) / dim


# --- randomness ----------------------------------------------------------


def make_rng(seed: int, label: str = "") -> np.random.Generator:
    """Counter-based (Philox) stream keyed by ``(seed, label)``.

    Distinct labels give statistically independent streams from one seed.
    """
    key = zlib.crc32(label.encode("utf-8"))
    ss = np.random.SeedSequence(int(seed) & (2**64 - 1), spawn_key=(key,))
    return np.random.Generator(np.random.Philox(ss))


def _rng(seed, label):
    if isinstance(seed, np.random.Generator):
        return seed
    return make_rng(seed, label)


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def random_pure(dim: int, rng: np.random.Generator) -> np.ndarray:
    psi = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return psi / np.linalg.norm(psi)


def random_state(n: int, d: int, k: int | None = None, seed=0, label: str = "state") -> np.ndarray:
    """Rank-``k`` state from the partial-trace (Hilbert-Schmidt induced) ensemble.

    ``seed`` may be an int (combined with ``label``) or a ``Generator``.
    """
    dim = d**n
    k = dim if k is None else int(k)
    if not 1 <= k <= dim:
        raise ValueError(f"rank must be in [1, {dim}], got {k}")
    rng = _rng(seed, label)
    g = rng.standard_normal((dim, k)) + 1j * rng.standard_normal((dim, k))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_local_unitary(n: int, d: int, seed=0, label: str = "local-unitary") -> np.ndarray:
    rng = _rng(seed, label)
    return kron([haar_unitary(d, rng) for _ in range(n)])


# --- serialization ---------------------------------------------------------


def dumps_matrix(a, d: int) -> str:
    """Text format: ``"dim d n"`` then ``"row col re im"`` per entry, row-major."""
    a = np.asarray(a, dtype=complex)
    dim = a.shape[0]
    n = num_qudits(dim, d)
    buf = io.StringIO()
    buf.write(f"{dim} {d} {n}\n")
    for i in range(dim):
        for j in range(dim):
            z = a[i, j]
            buf.write(f"{i} {j} {z.real:.17g} {z.imag:.17g}\n")
    return buf.getvalue()


def loads_matrix(text: str) -> tuple[np.ndarray, int]:
    """Inverse of :func:`dumps_matrix`; returns ``(matrix, d)``."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    try:
        dim, d, n = (int(v) for v in lines[0].split())
    except (IndexError, ValueError) as exc:
        raise ValueError("malformed matrix header, expected 'dim d n'") from exc
    if d**n != dim:
        raise ValueError(f"header inconsistent: {d}^{n} != {dim}")
    if len(lines) - 1 != dim * dim:
        raise ValueError(f"expected {dim * dim} entries, found {len(lines) - 1}")
    a = np.zeros((dim, dim), dtype=complex)
    for ln in lines[1:]:
        i, j, re, im = ln.split()
        a[int(i), int(j)] = complex(float(re), float(im))
    return a, d
