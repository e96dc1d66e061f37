"""Entropies, sandwiched Renyi quantities and entanglement measures.

All logarithms are natural.  Subsystems are qudit factors of equal local
dimension ``d``; a cut is given by the index set of part A, part B being the
complement.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import asdict, dataclass

import numpy as np

from .dense import (
    matrix_log,
    matrix_power,
    num_qudits,
    partial_trace,
    partial_transpose,
    rank_cutoff,
    rank_eps,
    trace_norm,
)
from .tolerances import TOL


class ConvergenceWarning(UserWarning):
    pass


@dataclass(frozen=True)
class Bipartition:
    a: tuple
    b: tuple

    @classmethod
    def of(cls, part_a, n: int) -> "Bipartition":
        a = tuple(sorted(set(int(i) for i in np.atleast_1d(part_a))))
        b = tuple(i for i in range(n) if i not in a)
        if not a or not b:
            raise ValueError(f"both sides of a bipartition must be nonempty, got A={a} of {n}")
        if any(not 0 <= i < n for i in a):
            raise IndexError(f"subsystem index out of range in {a} for {n} qudits")
        return cls(a, b)


def _cut(cut, n: int) -> Bipartition:
    if isinstance(cut, Bipartition):
        if sorted(cut.a + cut.b) != list(range(n)):
            raise ValueError(f"bipartition {cut} does not cover {n} qudits")
        return cut
    return Bipartition.of(cut, n)


def _check_alpha(alpha: float):
    if not alpha >= 0.5:
        raise ValueError(f"Renyi order must be >= 1/2, got {alpha}")


def _eigs(rho):
    rho = np.asarray(rho)
    return np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))


def von_neumann_entropy(rho) -> float:
    lam = _eigs(rho)
    lam = lam[lam > rank_cutoff(lam)]
    return float(-(lam * np.log(lam)).sum())


def max_entropy(rho) -> float:
    return math.log(rank_eps(rho))


def _support_violation(rho, sigma) -> bool:
    lam, vec = np.linalg.eigh(0.5 * (sigma + sigma.conj().T))
    kernel = vec[:, lam <= rank_cutoff(lam)]
    if kernel.shape[1] == 0:
        return False
    leak = np.real(np.trace(kernel.conj().T @ rho @ kernel))
    return leak > 1e-9


def relative_entropy(rho, sigma) -> float:
    """Umegaki ``Tr rho (log rho - log sigma)``; ``inf`` off support."""
    rho = np.asarray(rho, dtype=complex)
    sigma = np.asarray(sigma, dtype=complex)
    if _support_violation(rho, sigma):
        return math.inf
    return float(np.real(np.trace(rho @ (matrix_log(rho) - matrix_log(sigma)))))


def _sandwiched_q(rho, sigma, alpha: float) -> float:
    g = (1 - alpha) / (2 * alpha)
    s = matrix_power(sigma, g)
    return float(np.trace(matrix_power(s @ rho @ s, alpha)).real)


def renyi_divergence(rho, sigma, alpha: float) -> float:
    """Sandwiched Renyi divergence; ``alpha == 1`` gives the Umegaki relative entropy.

    Returns ``inf`` when ``alpha >= 1`` and the support of ``rho`` is not
    contained in that of ``sigma``, or when the overlap vanishes.
    """
    _check_alpha(alpha)
    if alpha == 1:
        return relative_entropy(rho, sigma)
    rho = np.asarray(rho, dtype=complex)
    sigma = np.asarray(sigma, dtype=complex)
    if alpha > 1 and _support_violation(rho, sigma):
        return math.inf
    q = _sandwiched_q(rho, sigma, alpha)
    if q <= 0:
        return math.inf
    return math.log(q) / (alpha - 1)


def _reorder(rho, order, d: int) -> np.ndarray:
    n = len(order)
    t = np.asarray(rho).reshape((d,) * (2 * n))
    return t.transpose(list(order) + [n + i for i in order]).reshape(rho.shape)


def entanglement_entropy(rho, cut, d: int) -> float:
    """``S(rho_A)``."""
    n = num_qudits(np.asarray(rho).shape[0], d)
    cut = _cut(cut, n)
    return von_neumann_entropy(partial_trace(rho, cut.a, d))


@dataclass
class ConditionalResult:
    value: float
    converged: bool
    iterations: int
    sigma_b: np.ndarray | None = None


def _powh(a, s: float, floor: float = 0.0) -> np.ndarray:
    """Hermitian power with eigenvalues clamped below at ``floor`` (0 for s > 0)."""
    lam, vec = np.linalg.eigh(0.5 * (a + a.conj().T))
    lam = np.maximum(lam, floor if s < 0 else 0.0)
    return (vec * lam**s) @ vec.conj().T


def _fixed_point(rho_ab, d_a, d_b, alpha, tol, max_iter, eta, reg, inverse_free=False) -> ConditionalResult:
    g = (1 - alpha) / (2 * alpha)
    eye_a = np.eye(d_a)
    eye_b = np.eye(d_b) / d_b
    floor = reg / d_b
    # (s rho s)^alpha = K (K^dag K)^(alpha-1) K^dag with K = s rho^(1/2), exact on supp(rho)
    lam, vec = np.linalg.eigh(rho_ab)
    keep = lam > rank_cutoff(lam)
    root = vec[:, keep] * np.sqrt(lam[keep])

    def objective(sig):
        k = np.kron(eye_a, _powh(sig, g, floor)) @ root
        return -math.log(np.trace(_powh(k.conj().T @ k, alpha)).real) / (alpha - 1)

    sigma = partial_trace(rho_ab, [1], [d_a, d_b])
    sigma = (1 - reg) * sigma + reg * eye_b
    best_sigma, best = sigma, objective(sigma)
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        k = np.kron(eye_a, _powh(sigma, g, floor)) @ root
        gram = k.conj().T @ k
        t = partial_trace(k @ _powh(gram, alpha - 1, 1e-300) @ k.conj().T, [1], [d_a, d_b])
        if inverse_free:
            new = t
        else:
            # B^dag B with B = t^(1/2alpha) sigma^-g stays PSD despite a large sigma^-g
            b = _powh(t, 1 / (2 * alpha)) @ _powh(sigma, -g, floor)
            new = b.conj().T @ b
        new = 0.5 * (new + new.conj().T)
        new /= np.trace(new).real
        nxt = (1 - eta) * sigma + eta * new
        nxt = (1 - reg) * nxt + reg * eye_b
        step = trace_norm(nxt - sigma) / 2
        sigma = nxt
        value = objective(sigma)
        if value > best:
            best_sigma, best = sigma, value
        if step < tol:
            converged = True
            break
    return ConditionalResult(best, converged, it, best_sigma)


def optimize_conditional(
    rho,
    cut,
    alpha: float,
    d: int,
    tol: float = TOL.opt_tol,
    max_iter: int = TOL.opt_max_iter,
    eta: float = TOL.opt_damping,
    reg: float = TOL.opt_reg,
) -> ConditionalResult:
    """``S_alpha(A|B) = -inf_sigma D_alpha(rho_AB || I_A (x) sigma_B)`` by damped fixed point.

    The iteration is ``sigma <- (1-eta) sigma + eta Psi(sigma)`` with
    ``Psi(sigma) ~ sigma^-g (Tr_A[(sigma^g rho sigma^g)^alpha])^(1/alpha) sigma^-g``,
    ``g = (1-alpha)/(2 alpha)``, whose fixed points are exactly the stationary
    points ``sigma ~ Tr_A[(sigma^g rho sigma^g)^alpha]`` of the variational problem.
    If that stalls for ``alpha < 1`` the inverse-free map
    ``Psi(sigma) ~ Tr_A[(sigma^g rho sigma^g)^alpha]`` is tried as well.

    ``value`` is the best ``-D_alpha`` seen, so it never exceeds the true
    conditional entropy even when ``converged`` is False.
    """
    _check_alpha(alpha)
    rho = np.asarray(rho, dtype=complex)
    n = num_qudits(rho.shape[0], d)
    cut = _cut(cut, n)
    rho_ab = _reorder(rho, cut.a + cut.b, d)
    d_a, d_b = d ** len(cut.a), d ** len(cut.b)
    if alpha == 1:
        rho_b = partial_trace(rho_ab, [1], [d_a, d_b])
        value = von_neumann_entropy(rho_ab) - von_neumann_entropy(rho_b)
        return ConditionalResult(value, True, 0, rho_b)
    res = _fixed_point(rho_ab, d_a, d_b, alpha, tol, max_iter, eta, reg)
    if not res.converged and alpha < 1:
        # boundary optima at small alpha: retry without inverse powers of sigma
        alt = _fixed_point(rho_ab, d_a, d_b, alpha, tol, max_iter, eta, reg, inverse_free=True)
        if alt.converged or alt.value > res.value:
            res = alt
    return res


def conditional_entropy(rho, cut, alpha: float, d: int) -> float:
    """Sandwiched Renyi conditional entropy; warns on optimizer non-convergence."""
    res = optimize_conditional(rho, cut, alpha, d)
    if not res.converged:
        warnings.warn(
            f"conditional entropy optimizer stopped after {res.iterations} iterations (alpha={alpha})",
            ConvergenceWarning,
            stacklevel=2,
        )
    return res.value


def negativity(rho, cut, d: int) -> float:
    """``(||rho^{T_B}||_1 - 1) / 2``."""
    n = num_qudits(np.asarray(rho).shape[0], d)
    cut = _cut(cut, n)
    return (trace_norm(partial_transpose(rho, cut.b, d)) - 1) / 2


@dataclass
class ExtremalityRow:
    measure: str
    value_rho: float
    value_mean: float
    gap: float
    sign_ok: bool


def extremality_report(rho, cut, d: int, alphas=(0.5, 1.0, 2.0), mean=None) -> list[ExtremalityRow]:
    """Compare each measure on ``rho`` and on its mean state.

    ``gap`` is oriented so that the inequality predicts ``gap >= 0``:
    ``value_mean - value_rho`` for the entropies, ``value_rho - value_mean``
    for negativity.
    """
    from .stab import mean_state

    rho = np.asarray(rho, dtype=complex)
    m = mean_state(rho, d) if mean is None else mean
    rows = []

    def add(name, f, increases, slack):
        a, b = f(rho), f(m)
        gap = (b - a) if increases else (a - b)
        rows.append(ExtremalityRow(name, a, b, gap, gap >= -slack))

    add("entropy", von_neumann_entropy, True, TOL.closed_slack)
    add("entanglement_entropy", lambda r: entanglement_entropy(r, cut, d), True, TOL.closed_slack)
    for alpha in alphas:
        slack = TOL.closed_slack if alpha == 1 else TOL.opt_slack
        add(f"cond_entropy_{alpha:g}", lambda r: conditional_entropy(r, cut, alpha, d), True, slack)
    add("negativity", lambda r: negativity(r, cut, d), False, TOL.closed_slack)
    return rows


def rows_to_json(rows) -> str:
    return json.dumps([asdict(r) for r in rows], indent=2, sort_keys=True)
