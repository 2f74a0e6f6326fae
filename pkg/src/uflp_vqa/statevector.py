"""Dense statevector kernels.

Qubit ``k`` of an ``n``-qubit register sits at bit position ``n - 1 - k`` of
the basis index, so ``format(index, f"0{n}b")`` reads ``q0 q1 ... q_{n-1}``
left to right. Rotations follow ``R_A(theta) = exp(-i theta A / 2)``.

The array-level kernels (``*_array``) take and return flat complex arrays and
are what the circuit simulator calls in its inner loops. The ``StateVector``
wrappers validate their inputs and are the public entry points.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Union

import numpy as np

from . import _kernels as _k

MAX_QUBITS = 24

CostLike = Union[np.ndarray, Callable[[int], float]]


@dataclass
class StateVector:
    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=np.complex128)
        if self.amplitudes.shape != (1 << self.n_qubits,):
            raise ValueError(
                f"expected {1 << self.n_qubits} amplitudes for {self.n_qubits} qubits, "
                f"got shape {self.amplitudes.shape}"
            )

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def norm_squared(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def copy(self) -> "StateVector":
        return StateVector(self.n_qubits, self.amplitudes.copy())


def _check_n_qubits(n_qubits: int) -> None:
    if not 0 <= n_qubits <= MAX_QUBITS:
        raise ValueError(f"n_qubits must be in [0, {MAX_QUBITS}], got {n_qubits}")


def _check_qubit(state: StateVector, qubit: int) -> None:
    if not 0 <= qubit < state.n_qubits:
        raise ValueError(f"qubit {qubit} out of range for {state.n_qubits} qubits")


def bits_to_index(bits: str) -> int:
    if bits and set(bits) - {"0", "1"}:
        raise ValueError(f"bitstring may only contain 0/1, got {bits!r}")
    return int(bits, 2) if bits else 0


def index_to_bits(index: int, n_qubits: int) -> str:
    return format(index, f"0{n_qubits}b") if n_qubits else ""


def basis_state(n_qubits: int, bits: str) -> StateVector:
    _check_n_qubits(n_qubits)
    if len(bits) != n_qubits:
        raise ValueError(f"bitstring length {len(bits)} does not match n_qubits={n_qubits}")
    amps = np.zeros(1 << n_qubits, dtype=np.complex128)
    amps[bits_to_index(bits)] = 1.0
    return StateVector(n_qubits, amps)


def uniform_state(n_qubits: int) -> StateVector:
    _check_n_qubits(n_qubits)
    dim = 1 << n_qubits
    return StateVector(n_qubits, np.full(dim, 1.0 / np.sqrt(dim), dtype=np.complex128))


# -- 2x2 matrices ---------------------------------------------------------

_H = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2.0)
_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)


def rx_matrix(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=np.complex128)


def ry_matrix(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=np.complex128)


def rz_matrix(theta: float) -> np.ndarray:
    return np.array(
        [[np.exp(-0.5j * theta), 0], [0, np.exp(0.5j * theta)]], dtype=np.complex128
    )


def single_qubit_matrix(gate: str, theta: float | None = None) -> np.ndarray:
    gate = gate.upper()
    if gate == "H":
        return _H
    if gate == "X":
        return _X
    if gate in ("RX", "RY", "RZ"):
        if theta is None or not np.isfinite(theta):
            raise ValueError(f"{gate} needs a finite angle, got {theta!r}")
        return {"RX": rx_matrix, "RY": ry_matrix, "RZ": rz_matrix}[gate](float(theta))
    raise ValueError(f"unknown single-qubit gate {gate!r}")


def xy_matrix(beta: float) -> np.ndarray:
    """``exp(-i beta (XX + YY))`` in the ordered basis 00, 01, 10, 11."""
    c, s = np.cos(2 * beta), np.sin(2 * beta)
    u = np.eye(4, dtype=np.complex128)
    u[1, 1] = u[2, 2] = c
    u[1, 2] = u[2, 1] = -1j * s
    return u


# -- array kernels ----------------------------------------------------------
# Each returns a new array; the in-place loops live in ``_kernels``.


def apply_matrix_array(psi: np.ndarray, n_qubits: int, qubit: int, u: np.ndarray) -> np.ndarray:
    out = psi.copy()
    _k.apply_2x2(out, n_qubits - 1 - qubit, u[0, 0], u[0, 1], u[1, 0], u[1, 1])
    return out


def apply_cnot_array(psi: np.ndarray, n_qubits: int, control: int, target: int) -> np.ndarray:
    out = psi.copy()
    _k.apply_cnot(out, n_qubits - 1 - control, n_qubits - 1 - target)
    return out


def apply_xy_array(psi: np.ndarray, n_qubits: int, a: int, b: int, beta: float) -> np.ndarray:
    out = psi.copy()
    _k.apply_xy(out, n_qubits - 1 - a, n_qubits - 1 - b, np.cos(2 * beta), np.sin(2 * beta))
    return out


# -- public StateVector operations -----------------------------------------


def apply_single(state: StateVector, qubit: int, gate: str, theta: float | None = None) -> StateVector:
    """Apply ``H``, ``X``, ``RX``, ``RY`` or ``RZ`` (with angle ``theta``) to ``qubit``."""
    _check_qubit(state, qubit)
    u = single_qubit_matrix(gate, theta)
    return StateVector(state.n_qubits, apply_matrix_array(state.amplitudes, state.n_qubits, qubit, u))


def _check_pair(state: StateVector, a: int, b: int) -> None:
    _check_qubit(state, a)
    _check_qubit(state, b)
    if a == b:
        raise ValueError(f"two-qubit gate needs distinct qubits, got {a} twice")


def apply_cnot(state: StateVector, control: int, target: int) -> StateVector:
    _check_pair(state, control, target)
    return StateVector(state.n_qubits, apply_cnot_array(state.amplitudes, state.n_qubits, control, target))


def apply_xy(state: StateVector, a: int, b: int, beta: float) -> StateVector:
    """Apply ``exp(-i beta (X_a X_b + Y_a Y_b))`` exactly."""
    _check_pair(state, a, b)
    if not np.isfinite(beta):
        raise ValueError(f"beta must be finite, got {beta!r}")
    return StateVector(state.n_qubits, apply_xy_array(state.amplitudes, state.n_qubits, a, b, float(beta)))


def cost_table(cost: CostLike, n_qubits: int) -> np.ndarray:
    """Materialize a diagonal cost as a length ``2**n_qubits`` float array."""
    dim = 1 << n_qubits
    if callable(cost):
        table = np.fromiter((cost(b) for b in range(dim)), dtype=np.float64, count=dim)
    else:
        table = np.asarray(cost, dtype=np.float64)
    if table.shape != (dim,):
        raise ValueError(f"cost table must have {dim} entries, got shape {table.shape}")
    if not np.all(np.isfinite(table)):
        raise ValueError("cost table contains non-finite entries")
    return table


def apply_diagonal_phase(state: StateVector, cost: CostLike, gamma: float) -> StateVector:
    """Multiply amplitude ``b`` by ``exp(-i gamma cost(b))``."""
    table = cost_table(cost, state.n_qubits)
    return StateVector(state.n_qubits, state.amplitudes * np.exp(-1j * gamma * table))


def expectation_diagonal(state: StateVector, cost: CostLike) -> float:
    table = cost_table(cost, state.n_qubits)
    return float(state.probabilities @ table)


def probability_mass(state: StateVector, indices: Iterable[int]) -> float:
    idx = np.fromiter(indices, dtype=np.int64)
    if idx.size == 0:
        return 0.0
    if idx.min() < 0 or idx.max() >= state.amplitudes.size:
        raise ValueError("basis index out of range")
    idx = np.unique(idx)
    return float(np.sum(np.abs(state.amplitudes[idx]) ** 2))
