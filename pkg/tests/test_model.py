import itertools
import json

import numpy as np
import pytest

from uflp_vqa.model import (REGISTRY, QubitLayout, UflpInstance, brute_force, default_penalty,
                            feasible_mask, get_instance, hard_feasible, load_instance,
                            penalized_cost, resolve_penalty, save_instance, trivial_feasible_bits,
                            uflp_cost)

INST1 = REGISTRY["instance-01"]


def naive_optimum(inst, lam):
    """Loop over every bitstring of the register; no vectorization shared with the package."""
    N = inst.layout.total_qubits
    best, arg = None, set()
    for tup in itertools.product("01", repeat=N):
        bits = "".join(tup)
        if not hard_feasible(bits, inst.layout):
            continue
        v = penalized_cost(inst, bits, lam)
        if best is None or v < best:
            best, arg = v, {bits}
        elif v == best:
            arg.add(bits)
    return best, arg


def test_uflp_cost_instance_1():
    assert uflp_cost(INST1, [[1, 0], [1, 0]], [1, 0]) == 16


def test_uflp_cost_zero():
    assert uflp_cost(INST1, np.zeros((2, 2)), [0, 0]) == 0


def test_uflp_cost_instance_2():
    assert uflp_cost(REGISTRY["instance-02"], [[0, 1], [0, 1]], [0, 1]) == 42


def test_uflp_cost_shape_mismatch():
    with pytest.raises(ValueError):
        uflp_cost(INST1, [[1, 0, 0], [1, 0, 0]], [1, 0])


def test_penalized_trivial_state():
    assert penalized_cost(INST1, "1010000000", 10) == 29


def test_penalized_zero_residual_equals_cost():
    lay = INST1.layout
    y = np.array([[0, 1], [1, 0]])
    x = np.array([1, 1])
    bits = lay.join(y, x, x[None, :] - y)
    assert penalized_cost(INST1, bits, 1000) == uflp_cost(INST1, y, x)


def test_penalized_lambda_zero():
    bits = "0110101101"
    y, x, _ = INST1.layout.split(bits)
    assert penalized_cost(INST1, bits, 0) == uflp_cost(INST1, y, x)


def test_penalized_length_mismatch():
    with pytest.raises(ValueError):
        penalized_cost(INST1, "101", 10)


def test_penalized_monotone_in_lambda():
    rng = np.random.default_rng(0)
    for _ in range(50):
        bits = "".join(rng.choice(["0", "1"], 10))
        vals = [penalized_cost(INST1, bits, lam) for lam in (0, 1, 5, 10, 60)]
        assert vals == sorted(vals)


@pytest.mark.parametrize("bits,ok", [("1010000000", True), ("1110000000", False),
                                     ("0000000000", False), ("0101111111", True)])
def test_hard_feasible(bits, ok):
    assert hard_feasible(bits, INST1.layout) is ok


def test_feasible_mask_matches_predicate():
    lay = QubitLayout(3, 2)
    mask = feasible_mask(lay)
    for k in range(0, 1 << 14, 97):
        assert mask[k] == hard_feasible(format(k, "014b"), lay)
    assert mask.sum() == 2 ** 3 * 2 ** 8


@pytest.mark.parametrize("m,n,want", [(2, 2, "1010000000"), (3, 2, "10101000000000"), (1, 1, "100")])
def test_trivial_feasible_bits(m, n, want):
    lay = QubitLayout(m, n)
    assert trivial_feasible_bits(lay) == want
    assert hard_feasible(want, lay)


def test_layout_indices():
    lay = QubitLayout(3, 2)
    assert lay.total_qubits == 14
    assert [lay.y_index(2, 1), lay.x_index(0), lay.z_index(0, 0), lay.z_index(2, 1)] == [5, 6, 8, 13]
    assert lay.constrained == list(range(6)) and lay.unconstrained == list(range(6, 14))


def test_layout_split_join_roundtrip():
    lay = QubitLayout(2, 3)
    bits = "010001101011001"[: lay.total_qubits]
    assert lay.join(*lay.split(bits)) == bits


def test_brute_force_instance_1_lambda_60():
    assert brute_force(INST1, 60).optimal_value == 16


def test_brute_force_instance_12():
    assert brute_force(REGISTRY["instance-12"], 100).optimal_value == 95


@pytest.mark.parametrize("key", ["instance-01", "instance-04", "instance-06"])
def test_brute_force_against_naive_loop(key):
    inst = REGISTRY[key]
    lam = default_penalty(inst)
    res = brute_force(inst, lam)
    best, arg = naive_optimum(inst, lam)
    assert res.optimal_value == best
    assert res.optimal_bits == arg


def test_brute_force_optimal_bits_are_consistent():
    for inst in REGISTRY.values():
        lam = default_penalty(inst)
        res = brute_force(inst, lam)
        for bits in res.optimal_bits:
            assert hard_feasible(bits, inst.layout)
            assert penalized_cost(inst, bits, lam) == res.optimal_value
        assert len(res.optimal_yx) >= 1


def test_brute_force_equals_true_uflp_optimum():
    # enumerate (y, x) with the exact slack completion z = x - y where feasible
    for inst in REGISTRY.values():
        m, n = inst.m, inst.n
        best = np.inf
        for choice in itertools.product(range(n), repeat=m):
            for x in itertools.product((0, 1), repeat=n):
                if all(x[j] for j in choice):
                    y = np.zeros((m, n))
                    y[np.arange(m), choice] = 1
                    best = min(best, uflp_cost(inst, y, x))
        assert brute_force(inst).optimal_value == best


def test_brute_force_size_guard():
    big = UflpInstance(m=6, n=4, D=[[1] * 4] * 6, G=[1] * 4)
    with pytest.raises(ValueError, match="too large"):
        brute_force(big)


def test_instance_12_has_two_optima():
    assert len(brute_force(REGISTRY["instance-12"]).optimal_yx) == 2


def test_default_penalty():
    assert default_penalty(INST1) == 2 * (10 + 7)
    assert resolve_penalty(INST1, None) == 34
    assert resolve_penalty(INST1, "default") == 34
    assert resolve_penalty(INST1, 10) == 10
    with pytest.raises(ValueError):
        resolve_penalty(INST1, -1)


def test_registry_shapes():
    assert len(REGISTRY) == 12
    sizes = [(i.m, i.n) for i in REGISTRY.values()]
    assert sizes == [(2, 2)] * 5 + [(3, 2)] * 5 + [(5, 2)] * 2


def test_get_instance_forms(tmp_path):
    assert get_instance("7") is REGISTRY["instance-07"]
    assert get_instance(REGISTRY["instance-03"]) is REGISTRY["instance-03"]
    path = tmp_path / "i.json"
    save_instance(REGISTRY["instance-09"], path)
    assert get_instance(str(path)) == REGISTRY["instance-09"]
    with pytest.raises(KeyError):
        get_instance("instance-99")


def test_instance_file_roundtrip(tmp_path):
    path = tmp_path / "seven.json"
    save_instance(REGISTRY["instance-07"], path)
    assert load_instance(path) == REGISTRY["instance-07"]


def _write(tmp_path, data):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    return path


def test_load_negative_cost_names_field(tmp_path):
    path = _write(tmp_path, {"m": 1, "n": 2, "D": [[1, -3]], "G": [1, 1]})
    with pytest.raises(ValueError, match="D"):
        load_instance(path)


def test_load_wrong_row_count(tmp_path):
    path = _write(tmp_path, {"m": 3, "n": 2, "D": [[1, 2], [3, 4]], "G": [1, 1]})
    with pytest.raises(ValueError, match="D: expected 3 rows"):
        load_instance(path)


def test_load_missing_field(tmp_path):
    path = _write(tmp_path, {"m": 1, "n": 1, "D": [[1]]})
    with pytest.raises(ValueError, match="G"):
        load_instance(path)


def test_load_not_json(tmp_path):
    path = tmp_path / "x.json"
    path.write_text("{nope")
    with pytest.raises(ValueError, match="JSON"):
        load_instance(path)


def test_instance_rejects_bad_shapes():
    with pytest.raises(ValueError, match="G"):
        UflpInstance(m=1, n=2, D=[[1, 2]], G=[1])
    with pytest.raises(ValueError):
        UflpInstance(m=0, n=2, D=[], G=[1, 1])
