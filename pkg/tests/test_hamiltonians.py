import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from uflp_vqa.hamiltonians import (QuboForm, classical_full_cost, diagonal_table, from_pauli_z,
                                   mixer_pairs, qubo_full, qubo_pfs, to_pauli_z)
from uflp_vqa.model import REGISTRY, UflpInstance, brute_force, default_penalty, penalized_cost

INST1 = REGISTRY["instance-01"]
SMALL = [k for k, v in REGISTRY.items() if v.layout.total_qubits <= 14]


def all_bits(n):
    return ("".join(t) for t in itertools.product("01", repeat=n))


def row_penalty(inst, bits):
    y, _, _ = inst.layout.split(bits)
    return int(((y.sum(axis=1) - 1) ** 2).sum())


def test_triple_expansion():
    one = UflpInstance(m=1, n=1, D=[[0]], G=[0])
    q = qubo_pfs(one, 1)
    # layout order is y, x, z
    assert q.constant == 0
    assert q.linear == {0: 1, 1: 1, 2: 1}
    assert q.quadratic == {(0, 2): 2, (0, 1): -2, (1, 2): -2}
    for y, x, z in itertools.product((0, 1), repeat=3):
        assert q.eval(f"{y}{x}{z}") == (y + z - x) ** 2


def test_zero_costs_zero_penalty_empty():
    q = qubo_pfs(UflpInstance(m=2, n=2, D=[[0, 0], [0, 0]], G=[0, 0]), 0)
    assert q.constant == 0 and not q.linear and not q.quadratic


def test_pfs_trivial_state_instance_1():
    assert qubo_pfs(INST1, 10).eval("1010000000") == 29


def test_full_all_zero_instance_1():
    assert qubo_full(INST1, 10).eval("0" * 10) == 20


@pytest.mark.parametrize("key", SMALL)
def test_exhaustive_equivalence(key):
    inst = REGISTRY[key]
    lam = default_penalty(inst)
    pfs, full = qubo_pfs(inst, lam), qubo_full(inst, lam)
    for bits in all_bits(inst.layout.total_qubits):
        a = pfs.eval(bits)
        assert a == penalized_cost(inst, bits, lam)
        b = full.eval(bits)
        assert b == classical_full_cost(inst, bits, lam)
        assert b - a == lam * row_penalty(inst, bits)


@pytest.mark.parametrize("key", ["instance-11", "instance-12"])
def test_random_equivalence_22_qubits(key):
    inst = REGISTRY[key]
    lam = default_penalty(inst)
    pfs, full = qubo_pfs(inst, lam), qubo_full(inst, lam)
    rng = np.random.default_rng(22)
    for _ in range(100):
        bits = "".join(rng.choice(["0", "1"], 22))
        assert pfs.eval(bits) == penalized_cost(inst, bits, lam)
        assert full.eval(bits) == classical_full_cost(inst, bits, lam)


def test_full_equals_pfs_on_feasible():
    lam = 34
    pfs, full = qubo_pfs(INST1, lam), qubo_full(INST1, lam)
    for bits in all_bits(10):
        if row_penalty(INST1, bits) == 0:
            assert full.eval(bits) == pfs.eval(bits)


def test_negative_lambda_rejected():
    with pytest.raises(ValueError):
        qubo_pfs(INST1, -1)
    with pytest.raises(ValueError):
        qubo_full(INST1, -1)


@pytest.mark.parametrize("key", list(REGISTRY)[:10])
def test_full_penalty_global_min_is_oracle(key):
    inst = REGISTRY[key]
    lam = default_penalty(inst)
    N = inst.layout.total_qubits
    table = diagonal_table(qubo_full(inst, lam), N)
    assert table.min() == brute_force(inst, lam).optimal_value


def _random_qubo(rng, n):
    q = QuboForm(constant=float(rng.integers(-5, 5)))
    for a in range(n):
        q.add_linear(a, float(rng.integers(-9, 9)))
        for b in range(a + 1, n):
            if rng.random() < 0.5:
                q.add_quadratic(a, b, float(rng.integers(-9, 9)))
    return q


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_pauli_z_roundtrip(seed):
    rng = np.random.default_rng(seed)
    q = _random_qubo(rng, 6)
    back = from_pauli_z(*to_pauli_z(q))
    for bits in all_bits(6):
        assert back.eval(bits) == pytest.approx(q.eval(bits), abs=1e-12)


def test_pauli_z_eval_via_spins():
    q = qubo_pfs(INST1, 10)
    offset, h, J = to_pauli_z(q)
    for bits in itertools.islice(all_bits(10), 0, 1024, 37):
        z = [1 - 2 * int(c) for c in bits]
        e = offset + sum(c * z[a] for a, c in h.items()) + sum(c * z[a] * z[b] for (a, b), c in J.items())
        assert e == pytest.approx(q.eval(bits))


@pytest.mark.parametrize("m,n,want", [(2, 2, [(0, 1), (2, 3)]), (3, 2, [(0, 1), (2, 3), (4, 5)]),
                                      (1, 3, [(0, 1), (1, 2)])])
def test_mixer_pairs(m, n, want):
    mixer = mixer_pairs(m, n)
    assert list(mixer.pairs) == want
    assert len(mixer.pairs) == m * (n - 1)


def test_mixer_pairs_rejects_empty():
    with pytest.raises(ValueError):
        mixer_pairs(0, 2)


def test_table_zero_qubo():
    np.testing.assert_array_equal(diagonal_table(QuboForm(), 4), np.zeros(16))


def test_table_constant_qubo():
    np.testing.assert_array_equal(diagonal_table(QuboForm(constant=3.5), 3), np.full(8, 3.5))


def test_table_matches_eval():
    q = _random_qubo(np.random.default_rng(4), 7)
    table = diagonal_table(q, 7)
    for k, bits in enumerate(all_bits(7)):
        assert table[k] == q.eval(bits)


def test_table_feasible_minimum_instance_1():
    from uflp_vqa.model import feasible_mask

    table = diagonal_table(qubo_pfs(INST1, default_penalty(INST1)), 10)
    assert table[feasible_mask(INST1.layout)].min() == 16


def test_table_size_guard():
    with pytest.raises(ValueError):
        diagonal_table(QuboForm(), 25)


def test_table_qubo_too_wide():
    with pytest.raises(ValueError):
        diagonal_table(qubo_pfs(INST1, 1), 8)


def test_qubo_dumps_is_json():
    import json

    d = json.loads(qubo_pfs(INST1, 10).dumps())
    assert set(d) == {"constant", "linear", "quadratic"}
