import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from stablab import dense
from stablab.exceptions import NumericalToleranceError

from conftest import bell

X = np.array([[0, 1], [1, 0]], dtype=complex)
Z = np.diag([1, -1]).astype(complex)


def test_kron_examples(rng):
    assert np.array_equal(dense.kron(np.eye(2), np.eye(2)), np.eye(4))
    zx = dense.kron(Z, X)
    oracle = np.zeros((4, 4), dtype=complex)
    for a in range(2):
        for b in range(2):
            for c in range(2):
                for e in range(2):
                    oracle[2 * a + b, 2 * c + e] = Z[a, c] * X[b, e]
    assert np.array_equal(zx, oracle)
    a, b, c, e = (rng.standard_normal((3, 3)) for _ in range(4))
    assert np.allclose(dense.kron(a, b) @ dense.kron(c, e), dense.kron(a @ c, b @ e))
    assert np.isclose(np.trace(dense.kron(a, b)), np.trace(a) * np.trace(b))


def test_partial_trace_examples():
    ra = dense.random_state(1, 3, seed=1)
    rb = dense.random_state(1, 3, seed=2)
    joint = np.kron(ra, rb)
    assert np.allclose(dense.partial_trace(joint, [0], 3), ra, atol=1e-14)
    assert np.allclose(dense.partial_trace(joint, [1], 3), rb, atol=1e-14)
    assert np.allclose(dense.partial_trace(bell(), [0], 2), np.eye(2) / 2)


def test_partial_trace_loop_oracle():
    rho = dense.random_state(2, 3, k=1, seed=3)
    t = rho.reshape(3, 3, 3, 3)
    oracle = np.zeros((3, 3), dtype=complex)
    for b1 in range(3):
        for b2 in range(3):
            for a in range(3):
                oracle[b1, b2] += t[a, b1, a, b2]
    assert np.abs(dense.partial_trace(rho, [1], 3) - oracle).max() <= 1e-12


def test_partial_trace_three_qubits_and_errors():
    states = [dense.random_state(1, 2, seed=s) for s in range(3)]
    joint = dense.kron(*states)
    assert np.allclose(dense.partial_trace(joint, [0, 2], 2), np.kron(states[0], states[2]))
    with pytest.raises(ValueError):
        dense.partial_trace(joint, [], 2)
    with pytest.raises(IndexError):
        dense.partial_trace(joint, [3], 2)


def test_partial_transpose():
    lam = np.linalg.eigvalsh(dense.partial_transpose(bell(), [1], 2))
    assert np.allclose(np.sort(lam), [-0.5, 0.5, 0.5, 0.5])
    rho = dense.random_state(2, 3, seed=4)
    twice = dense.partial_transpose(dense.partial_transpose(rho, [1], 3), [1], 3)
    assert np.abs(twice - rho).max() <= 1e-14
    prod = np.kron(dense.random_state(1, 2, seed=5), dense.random_state(1, 2, seed=6))
    assert np.allclose(np.linalg.eigvalsh(dense.partial_transpose(prod, [1], 2)), np.linalg.eigvalsh(prod))
    with pytest.raises(IndexError):
        dense.partial_transpose(rho, [2], 3)


def test_eig_hermitian():
    eig = dense.eig_hermitian(np.diag([0.2, 3.0, -1.0]))
    assert np.allclose(eig.eigenvalues, [3.0, 0.2, -1.0])
    assert np.allclose(dense.eig_hermitian(X).eigenvalues, [1, -1])
    rng = np.random.default_rng(81)
    g = rng.standard_normal((81, 81)) + 1j * rng.standard_normal((81, 81))
    a = g + g.conj().T
    eig = dense.eig_hermitian(a)
    norm = np.linalg.norm(a)
    assert np.linalg.norm(a - eig.reconstruct()) <= 1e-9 * norm
    v = eig.eigenvectors
    assert np.abs(v.conj().T @ v - np.eye(81)).max() <= 1e-9
    assert np.linalg.norm(a @ v - v * eig.eigenvalues, axis=0).max() <= 1e-9 * norm
    assert abs(eig.eigenvalues.sum() - np.trace(a).real) <= 1e-9
    with pytest.raises(ValueError):
        dense.eig_hermitian(g)


def test_spectrum_unitary_invariance(rng):
    a = dense.random_state(2, 3, seed=7)
    u = dense.haar_unitary(9, rng)
    b = u @ a @ u.conj().T
    assert np.abs(dense.eig_hermitian(a).eigenvalues - dense.eig_hermitian(b).eigenvalues).max() <= 1e-9
    h = a - np.eye(9) / 9
    assert abs(dense.trace_norm(h) - dense.trace_norm(u @ h @ u.conj().T)) <= 1e-9
    low = dense.random_state(2, 3, k=4, seed=8)
    assert dense.rank_eps(low) == dense.rank_eps(u @ low @ u.conj().T) == 4


def test_matrix_functions():
    rho = dense.random_state(2, 2, seed=9)
    assert np.allclose(dense.matrix_power(rho, 1), rho)
    half = dense.matrix_power(rho, 0.5)
    assert np.allclose(half @ half, rho)
    inv = dense.matrix_power(rho, -1)
    assert np.allclose(inv @ rho, np.eye(4))
    assert np.isclose(dense.trace_norm(rho), 1)
    assert dense.rank_eps(dense.projector([1, 1j, 0])) == 1
    log = dense.matrix_log(rho)
    lam, v = np.linalg.eigh(rho)
    assert np.allclose(log, (v * np.log(lam)) @ v.conj().T)
    with pytest.raises(NumericalToleranceError):
        dense.matrix_power(np.diag([1.0, -0.1]), 0.5)


def test_matrix_power_on_support():
    p = dense.projector([1, 0, 0]) * 0.5 + dense.projector([0, 1, 0]) * 0.5
    assert np.allclose(dense.matrix_power(p, -1), np.diag([2, 2, 0]))


def test_validate_density():
    rho = dense.random_state(1, 3, seed=10)
    assert dense.validate_density(rho) is not None
    with pytest.raises(NumericalToleranceError):
        dense.validate_density(rho * 1.1)
    with pytest.raises(NumericalToleranceError):
        dense.validate_density(np.diag([1.2, -0.2]))


def test_random_states():
    pure = dense.random_state(2, 3, k=1, seed=11)
    assert abs(dense.purity(pure) - 1) <= 1e-10
    full_a = dense.random_state(2, 3, seed=12)
    full_b = dense.random_state(2, 3, seed=12)
    assert np.array_equal(full_a, full_b)
    assert dense.rank_eps(full_a) == 9
    assert not np.array_equal(full_a, dense.random_state(2, 3, seed=12, label="other"))
    with pytest.raises(ValueError):
        dense.random_state(1, 2, k=3)


def test_random_pure_mean_is_maximally_mixed():
    rng = dense.make_rng(5, "monte-carlo")
    acc = np.zeros((2, 2), dtype=complex)
    for _ in range(10_000):
        acc += dense.projector(dense.random_pure(2, rng))
    assert dense.trace_norm(acc / 10_000 - np.eye(2) / 2) / 2 < 0.02


def test_local_unitary_is_product():
    u = dense.random_local_unitary(2, 3, seed=13)
    assert np.allclose(u @ u.conj().T, np.eye(9))
    # a product operator has operator-Schmidt rank one
    r = u.reshape(3, 3, 3, 3).transpose(0, 2, 1, 3).reshape(9, 9)
    assert np.linalg.matrix_rank(r, tol=1e-9) == 1


def test_make_rng_streams():
    a = dense.make_rng(7, "x").standard_normal(4)
    assert np.array_equal(a, dense.make_rng(7, "x").standard_normal(4))
    assert not np.array_equal(a, dense.make_rng(7, "y").standard_normal(4))


@given(st.integers(1, 2), st.sampled_from([2, 3]), st.integers(0, 10**6))
def test_matrix_serialization_roundtrip(n, d, seed):
    rho = dense.random_state(n, d, seed=seed)
    back, d2 = dense.loads_matrix(dense.dumps_matrix(rho, d))
    assert d2 == d and np.array_equal(back, rho)


def test_serialization_format():
    text = dense.dumps_matrix(np.eye(2) / 2, 2)
    assert text.splitlines()[:3] == ["2 2 1", "0 0 0.5 0", "0 1 0 0"]
    with pytest.raises(ValueError):
        dense.loads_matrix("4 2 3\n")
