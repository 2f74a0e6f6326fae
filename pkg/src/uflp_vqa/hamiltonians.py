"""Diagonal cost Hamiltonians as QUBO forms, plus the XY mixer pair layout."""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from .model import UflpInstance
from .statevector import MAX_QUBITS


@dataclass
class QuboForm:
    """``constant + sum linear[a] b_a + sum quadratic[(a, b)] b_a b_b`` with ``a < b``."""

    constant: float = 0.0
    linear: dict = field(default_factory=dict)
    quadratic: dict = field(default_factory=dict)

    def add_linear(self, a: int, c) -> None:
        self.linear[a] = self.linear.get(a, 0) + c

    def add_quadratic(self, a: int, b: int, c) -> None:
        if a == b:
            # b_a**2 == b_a for binary variables
            self.add_linear(a, c)
            return
        key = (min(a, b), max(a, b))
        self.quadratic[key] = self.quadratic.get(key, 0) + c

    def pruned(self) -> "QuboForm":
        return QuboForm(
            self.constant,
            {a: c for a, c in sorted(self.linear.items()) if c != 0},
            {k: c for k, c in sorted(self.quadratic.items()) if c != 0},
        )

    def eval(self, bits) -> float:
        if isinstance(bits, str):
            bits = [int(ch) for ch in bits]
        total = self.constant
        for a, c in self.linear.items():
            if bits[a]:
                total += c
        for (a, b), c in self.quadratic.items():
            if bits[a] and bits[b]:
                total += c
        return total

    def max_index(self) -> int:
        keys = list(self.linear) + [b for _, b in self.quadratic]
        return max(keys, default=-1)

    def to_dict(self) -> dict:
        q = self.pruned()
        return {
            "constant": q.constant,
            "linear": [[a, c] for a, c in q.linear.items()],
            "quadratic": [[a, b, c] for (a, b), c in q.quadratic.items()],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _penalized_terms(instance: UflpInstance, penalty: float) -> QuboForm:
    lay = instance.layout
    q = QuboForm()
    for i in range(instance.m):
        for j in range(instance.n):
            q.add_linear(lay.y_index(i, j), instance.D[i][j])
    for j in range(instance.n):
        q.add_linear(lay.x_index(j), instance.G[j])
    # (y + z - x)^2 = y + z + x + 2yz - 2xy - 2xz on binaries
    for i in range(instance.m):
        for j in range(instance.n):
            y, z, x = lay.y_index(i, j), lay.z_index(i, j), lay.x_index(j)
            for a in (y, z, x):
                q.add_linear(a, penalty)
            q.add_quadratic(y, z, 2 * penalty)
            q.add_quadratic(x, y, -2 * penalty)
            q.add_quadratic(x, z, -2 * penalty)
    return q


def qubo_pfs(instance: UflpInstance, penalty: float) -> QuboForm:
    """Cost with only the slack-equality penalty; the one-hot rows are left to the mixer."""
    if penalty < 0:
        raise ValueError(f"lambda must be >= 0, got {penalty}")
    return _penalized_terms(instance, penalty).pruned()


def qubo_full(instance: UflpInstance, penalty: float) -> QuboForm:
    """Cost with both the one-hot row penalty and the slack-equality penalty."""
    if penalty < 0:
        raise ValueError(f"lambda must be >= 0, got {penalty}")
    q = _penalized_terms(instance, penalty)
    lay = instance.layout
    # (sum_j y_ij - 1)^2 = 1 - sum_j y_ij + 2 sum_{j<k} y_ij y_ik
    for i in range(instance.m):
        q.constant += penalty
        for j in range(instance.n):
            q.add_linear(lay.y_index(i, j), -penalty)
            for k in range(j + 1, instance.n):
                q.add_quadratic(lay.y_index(i, j), lay.y_index(i, k), 2 * penalty)
    return q.pruned()


def classical_full_cost(instance: UflpInstance, bits: str, penalty: float) -> float:
    """Objective plus penalty on both the one-hot rows and the slack equalities."""
    y, x, z = instance.layout.split(bits)
    D = np.asarray(instance.D)
    G = np.asarray(instance.G)
    rows = ((y.sum(axis=1) - 1) ** 2).sum().item()
    slack = ((y + z - x[None, :]) ** 2).sum().item()
    return (D * y).sum().item() + (G * x).sum().item() + penalty * (rows + slack)


def to_pauli_z(qubo: QuboForm) -> tuple[float, dict, dict]:
    """Rewrite with ``b = (1 - Z) / 2``; returns ``(offset, z_coeffs, zz_coeffs)``."""
    offset = qubo.constant
    h: dict = defaultdict(float)
    J: dict = {}
    for a, c in qubo.linear.items():
        offset += c / 2
        h[a] -= c / 2
    for (a, b), c in qubo.quadratic.items():
        offset += c / 4
        h[a] -= c / 4
        h[b] -= c / 4
        J[(a, b)] = J.get((a, b), 0) + c / 4
    return offset, dict(h), J


def from_pauli_z(offset: float, h: dict, J: dict) -> QuboForm:
    """Inverse of :func:`to_pauli_z` via ``Z = 1 - 2b``."""
    q = QuboForm(constant=offset)
    for a, c in h.items():
        q.constant += c
        q.add_linear(a, -2 * c)
    for (a, b), c in J.items():
        q.constant += c
        q.add_linear(a, -2 * c)
        q.add_linear(b, -2 * c)
        q.add_quadratic(a, b, 4 * c)
    return q


@dataclass(frozen=True)
class MixerSpec:
    pairs: tuple


def mixer_pairs(m: int, n: int) -> MixerSpec:
    """Nearest-neighbour XY chain inside every customer's one-hot block."""
    if m < 1 or n < 1:
        raise ValueError(f"m and n must be >= 1, got m={m}, n={n}")
    return MixerSpec(tuple((j + i * n, j + i * n + 1) for i in range(m) for j in range(n - 1)))


def diagonal_table(qubo: QuboForm, n_qubits: int) -> np.ndarray:
    """Evaluate ``qubo`` on every basis index (qubit 0 is the most significant bit)."""
    if n_qubits > MAX_QUBITS:
        raise ValueError(f"diagonal table for {n_qubits} qubits exceeds the {MAX_QUBITS}-qubit cap")
    if qubo.max_index() >= n_qubits:
        raise ValueError(f"QUBO references qubit {qubo.max_index()} but n_qubits={n_qubits}")
    dim = 1 << n_qubits
    idx = np.arange(dim, dtype=np.int64)
    bit_cache: dict[int, np.ndarray] = {}

    def bit(a: int) -> np.ndarray:
        if a not in bit_cache:
            bit_cache[a] = ((idx >> (n_qubits - 1 - a)) & 1).astype(bool)
        return bit_cache[a]

    table = np.full(dim, float(qubo.constant))
    for a, c in qubo.linear.items():
        table[bit(a)] += c
    for (a, b), c in qubo.quadratic.items():
        table[bit(a) & bit(b)] += c
    return table
