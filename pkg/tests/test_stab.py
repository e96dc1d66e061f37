import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from stablab import dense, measures, stab, weyl, zd
from stablab.exceptions import CapExceededError, NumericalToleranceError

from conftest import bell

CASES = [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (7, 1)]


def test_group_examples():
    g = stab.stabilizer_group(np.eye(9) / 9, 3)
    assert g.rank == 0
    g = stab.stabilizer_group(dense.projector([1, 0, 0]), 3)
    assert g.rank == 1 and np.array_equal(g.support.basis, [[1, 0]])
    assert abs(g.phases[0] - 1) < 1e-12
    assert stab.stabilizer_group(dense.random_state(2, 3, seed=1), 3).rank == 0


def test_group_json_roundtrip():
    g = stab.stabilizer_group(bell(), 2)
    obj = g.to_json()
    back = stab.StabilizerGroup.from_json(obj)
    assert back.support == g.support and np.allclose(back.phases, g.phases)
    assert '"point": "1,1;0,0"' in obj


def test_threshold_examples():
    x, z = weyl.clock_shift(2)
    assert np.allclose(stab.mean_state((np.eye(2) + 0.5 * x) / 2, 2), np.eye(2) / 2)
    magic = (np.eye(2) + (z + x) / np.sqrt(2)) / 2
    assert np.allclose(stab.mean_state(magic, 2), np.eye(2) / 2)
    assert not stab.is_stabilizer(magic, 2)
    b = bell()
    assert np.abs(stab.mean_state(b, 2) - b).max() <= 1e-9
    assert stab.is_stabilizer(b, 2)


def test_twirl_examples():
    rho = dense.random_state(2, 2, seed=3)
    assert np.allclose(stab.mean_state_twirl(rho, 2).state, np.eye(4) / 4)
    b = bell()
    assert np.abs(stab.mean_state_twirl(b, 2).state - b).max() <= 1e-9
    with pytest.raises(CapExceededError):
        stab.mean_state_twirl(np.eye(3**5) / 3**5, 3)


def test_engineered_rank_one_group(rng):
    rho = stab.partial_stabilizer_state(2, 2, 1, rng)
    assert stab.stabilizer_group(rho, 2).rank == 1
    a = stab.mean_state_threshold(rho, 2).state
    b = stab.mean_state_twirl(rho, 2).state
    assert np.linalg.norm(a - b) <= 1e-9
    assert not stab.is_stabilizer(rho, 2)


def test_generator_examples():
    assert np.allclose(stab.stabilizer_state_from_generators([], 3, n=2), np.eye(9) / 9)
    rho = stab.stabilizer_state_from_generators([([1, 1, 0, 0], 1), ([0, 0, 1, 1], 1)], 2)
    assert np.abs(rho - bell()).max() <= 1e-12
    zero = stab.stabilizer_state_from_generators([([1, 0], 0)], 3)
    assert np.abs(zero - dense.projector([1, 0, 0])).max() <= 1e-12
    # phase tag c shifts the eigenvalue: omega^c Z fixes |k> with k = -c
    two = stab.stabilizer_state_from_generators([([1, 0], 1)], 3)
    assert np.abs(two - dense.projector([0, 0, 1])).max() <= 1e-12


def test_generator_errors():
    with pytest.raises(ValueError, match="commute"):
        stab.stabilizer_state_from_generators([([1, 0], 1), ([0, 1], 1)], 2)
    with pytest.raises(ValueError, match="dependent"):
        stab.stabilizer_state_from_generators([([1, 0, 0, 0], 1), ([1, 0, 0, 0], -1)], 2)
    with pytest.raises(ValueError):
        stab.stabilizer_state_from_generators([([1, 0], 1j)], 2)
    with pytest.raises(ValueError):
        stab.stabilizer_state_from_generators([], 2)


@pytest.mark.parametrize("d,n", CASES)
def test_synthesized_states_are_stabilizers(d, n, rng):
    for rank in range(n + 1):
        gens = stab.random_stabilizer_generators(n, d, rank, rng)
        rho = stab.stabilizer_state_from_generators(gens, d, n)
        assert stab.is_stabilizer(rho, d)
        g = stab.stabilizer_group(rho, d)
        assert g.rank == rank
        assert g.support == zd.subgroup_from_points([x for x, _ in gens], d, n)
        assert dense.rank_eps(rho) == d ** (n - rank)
        vals = np.abs(weyl.char_function(stab.mean_state(rho, d), d).values)
        assert np.all((np.abs(vals) < 1e-7) | (np.abs(vals - 1) < 1e-7))


def _states(d, n, seed):
    rng = dense.make_rng(seed, "stab-test")
    kinds = [
        lambda: dense.random_state(n, d, seed=rng),
        lambda: dense.random_state(n, d, k=1, seed=rng),
        lambda: stab.random_stabilizer_state(n, d, int(rng.integers(0, n + 1)), rng),
        lambda: stab.partial_stabilizer_state(n, d, int(rng.integers(1, n + 1)), rng, int(rng.integers(1, 4))),
    ]
    return [k() for k in kinds]


@given(st.sampled_from(CASES), st.integers(0, 10**6))
def test_mean_state_properties(dn, seed):
    d, n = dn
    for rho in _states(d, n, seed):
        m = stab.mean_state_threshold(rho, d).state
        assert np.linalg.norm(m - stab.mean_state_twirl(rho, d).state) <= 1e-9
        assert np.linalg.norm(stab.mean_state(m, d) - m) <= 1e-9
        s_rho, s_m = measures.von_neumann_entropy(rho), measures.von_neumann_entropy(m)
        assert s_rho <= s_m + 1e-8
        assert abs(measures.relative_entropy(rho, m) - (s_m - s_rho)) <= 1e-6


@given(st.sampled_from(CASES), st.integers(0, 10**6))
def test_weyl_covariance(dn, seed):
    d, n = dn
    rng = dense.make_rng(seed, "cov")
    y = rng.integers(0, d, 2 * n)
    for rho in _states(d, n, seed):
        moved = weyl.conjugate(rho, y, d)
        assert np.linalg.norm(stab.mean_state(moved, d) - weyl.conjugate(stab.mean_state(rho, d), y, d)) <= 1e-9


def test_generic_states_are_not_stabilizers():
    rng = dense.make_rng(0, "generic")
    for _ in range(1000):
        k = int(rng.integers(2, 5))
        assert not stab.is_stabilizer(dense.random_state(2, 2, k=k, seed=rng), 2)


def test_corrupted_table_is_rejected():
    # a unit-modulus set that is not closed under addition
    table = weyl.CharTable(1, 3, np.zeros(9, dtype=complex))
    table.values[0] = 1
    table.values[zd.point_index([1, 0], 3)] = 1
    with pytest.raises(NumericalToleranceError):
        stab._group_from_table(table, 1e-8)
