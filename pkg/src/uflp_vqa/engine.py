"""Circuit execution and reverse-sweep (adjoint) gradients.

Two execution plans share the same gate kernels:

* ``dense`` runs every gate on the full ``2**N`` amplitude array.
* ``factored`` is used when no gate crosses between certain contiguous qubit
  groups and the start state is a product state (VQA-PFS is the case that
  matters). Each group is simulated on its own small register and the
  diagonal cost is contracted against the groups' probability vectors, so a
  22-qubit VQA-PFS evaluation never touches a 4M-amplitude state.

For a diagonal observable ``C`` and state ``psi = U_K ... U_1 psi_0`` with
``U_k = exp(-i s theta G_k)``, the gradient is
``dE/dtheta = 2 s Im <lambda_k | G_k psi_k>`` where ``lambda_k`` is ``C psi``
pulled back through ``U_K ... U_{k+1}``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels as _k
from . import statevector as sv
from .ansatz import Circuit, Gate
from .statevector import StateVector

_HALF = {
    "RX": (0, 0.5, 0.5, 0),
    "RY": (0, -0.5j, 0.5j, 0),
    "RZ": (0.5, 0, 0, -0.5),
}


def _initial(initial: str, n: int) -> np.ndarray:
    if initial == "uniform":
        return sv.uniform_state(n).amplitudes
    return sv.basis_state(n, initial).amplitudes


def _apply(g: Gate, psi: np.ndarray, n: int, angle: float, phase) -> None:
    """Apply ``g`` at ``angle`` to ``psi`` in place."""
    k = g.kind
    q = g.qubits
    if k == "RY":
        _k.apply_ry(psi, n - 1 - q[0], np.cos(angle / 2), np.sin(angle / 2))
    elif k == "RX":
        _k.apply_rx(psi, n - 1 - q[0], np.cos(angle / 2), np.sin(angle / 2))
    elif k == "XY":
        _k.apply_xy(psi, n - 1 - q[0], n - 1 - q[1], np.cos(2 * angle), np.sin(2 * angle))
    elif k == "CNOT":
        _k.apply_cnot(psi, n - 1 - q[0], n - 1 - q[1])
    elif k == "DIAG_PHASE":
        _k.apply_phase(psi, phase, angle)
    else:
        u = sv.single_qubit_matrix(k, angle)
        _k.apply_2x2(psi, n - 1 - q[0], u[0, 0], u[0, 1], u[1, 0], u[1, 1])


def _apply_inverse(g: Gate, psi: np.ndarray, n: int, angle: float, phase) -> None:
    if g.kind == "H":
        _apply(g, psi, n, 0.0, phase)
    else:
        # CNOT and X are involutions; rotations invert by negating the angle
        _apply(g, psi, n, -angle, phase)


def _generator_inner(g: Gate, lam: np.ndarray, psi: np.ndarray, n: int, phase) -> complex:
    """``<lam| G |psi>`` for the generator ``G`` with ``dU/dangle = -i G U``."""
    k = g.kind
    if k == "XY":
        return _k.inner_xy(lam, psi, n - 1 - g.qubits[0], n - 1 - g.qubits[1])
    if k == "DIAG_PHASE":
        return _k.inner_diag(lam, psi, phase)
    h = _HALF[k]
    return _k.inner_2x2(lam, psi, n - 1 - g.qubits[0], complex(h[0]), complex(h[1]),
                        complex(h[2]), complex(h[3]))


@dataclass
class _Program:
    """A gate list on a (sub)register of ``n`` qubits."""

    n: int
    initial: str
    gates: list

    def run(self, params: np.ndarray, phase=None) -> np.ndarray:
        psi = _initial(self.initial, self.n)
        for g in self.gates:
            angle = 0.0 if g.slot is None else g.scale * params[g.slot]
            _apply(g, psi, self.n, angle, phase)
        return psi

    def backward(self, psi: np.ndarray, lam: np.ndarray, params: np.ndarray,
                 grad: np.ndarray, phase=None) -> None:
        """Accumulate ``d <psi|C|psi> / d params`` into ``grad`` given ``lam = C psi``.

        ``psi`` and ``lam`` are consumed (overwritten in place).
        """
        for g in reversed(self.gates):
            angle = 0.0 if g.slot is None else g.scale * params[g.slot]
            if g.slot is not None:
                grad[g.slot] += 2.0 * g.scale * _generator_inner(g, lam, psi, self.n, phase).imag
            _apply_inverse(g, psi, self.n, angle, phase)
            _apply_inverse(g, lam, self.n, angle, phase)


def _components(circuit: Circuit):
    """Contiguous qubit groups that no gate connects, or ``None`` if none exist."""
    if circuit.has_phase:
        return None
    parent = list(range(circuit.n_qubits))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for g in circuit.gates:
        for q in g.qubits[1:]:
            parent[find(q)] = find(g.qubits[0])
    groups: dict[int, list[int]] = {}
    for q in range(circuit.n_qubits):
        groups.setdefault(find(q), []).append(q)
    blocks = sorted(groups.values())
    if len(blocks) < 2:
        return None
    if any(b[-1] - b[0] + 1 != len(b) for b in blocks):
        return None
    return [(b[0], len(b)) for b in blocks]


def _kron_all(vectors) -> np.ndarray:
    out = np.ones(1)
    for v in vectors:
        out = np.kron(out, v)
    return out


class Evaluator:
    """Energy, gradient and output state of one circuit against a diagonal cost.

    ``phase_table`` drives any ``DIAG_PHASE`` gates and defaults to
    ``cost_table``. ``method`` is ``"auto"``, ``"dense"`` or ``"factored"``.
    """

    def __init__(self, circuit: Circuit, cost_table=None, phase_table=None, method: str = "auto"):
        self.circuit = circuit
        dim = 1 << circuit.n_qubits
        self.cost_table = None if cost_table is None else self._check_table(cost_table, dim)
        if phase_table is None:
            phase_table = cost_table
        if circuit.has_phase:
            if phase_table is None:
                raise ValueError("circuit contains a phase-separator gate but no diagonal table was given")
            phase_table = self._check_table(phase_table, dim)
        self.phase_table = phase_table

        blocks = _components(circuit)
        if method == "auto":
            method = "factored" if blocks else "dense"
        if method == "factored" and not blocks:
            raise ValueError("circuit does not split into independent qubit groups")
        if method not in ("dense", "factored"):
            raise ValueError(f"unknown method {method!r}")
        self.method = method

        if method == "dense":
            self.programs = [_Program(circuit.n_qubits, circuit.initial, list(circuit.gates))]
            self.blocks = [(0, circuit.n_qubits)]
        else:
            self.blocks = blocks
            self.programs = []
            for start, size in blocks:
                gates = [
                    Gate(g.kind, tuple(q - start for q in g.qubits), g.slot, g.scale)
                    for g in circuit.gates
                    if g.qubits and start <= g.qubits[0] < start + size
                ]
                init = "uniform" if circuit.initial == "uniform" else circuit.initial[start:start + size]
                self.programs.append(_Program(size, init, gates))

    @staticmethod
    def _check_table(table, dim: int) -> np.ndarray:
        table = np.asarray(table, dtype=np.float64)
        if table.shape != (dim,):
            raise ValueError(f"diagonal table must have {dim} entries, got shape {table.shape}")
        return table

    def _params(self, params) -> np.ndarray:
        params = np.asarray(params, dtype=np.float64)
        if params.shape != (self.circuit.n_params,):
            raise ValueError(f"expected {self.circuit.n_params} parameters, got shape {params.shape}")
        return params

    def _factor_states(self, params) -> list[np.ndarray]:
        return [prog.run(params, self.phase_table) for prog in self.programs]

    def state(self, params) -> StateVector:
        params = self._params(params)
        factors = self._factor_states(params)
        amps = factors[0] if len(factors) == 1 else _kron_all(factors)
        return StateVector(self.circuit.n_qubits, amps)

    def _expect(self, probs: list[np.ndarray], table: np.ndarray) -> float:
        if len(probs) == 1:
            return float(probs[0] @ table)
        return float(_kron_all(probs) @ table)

    def _marginal_cost(self, probs, c: int) -> np.ndarray:
        """Cost restricted to group ``c`` with every other group averaged out."""
        left = _kron_all(probs[:c])
        right = _kron_all(probs[c + 1:])
        t = self.cost_table.reshape(left.size, probs[c].size, right.size)
        return left @ (t @ right)

    def _require_cost(self):
        if self.cost_table is None:
            raise ValueError("no cost table attached to this evaluator")

    def value(self, params, extra_tables=()) -> float | tuple:
        self._require_cost()
        params = self._params(params)
        probs = [np.abs(f) ** 2 for f in self._factor_states(params)]
        energy = self._expect(probs, self.cost_table)
        if extra_tables:
            return energy, [self._expect(probs, t) for t in extra_tables]
        return energy

    def value_and_grad(self, params, extra_tables=()):
        """Return ``(energy, gradient, extras)``; extras are expectations of ``extra_tables``."""
        self._require_cost()
        params = self._params(params)
        factors = self._factor_states(params)
        probs = [np.abs(f) ** 2 for f in factors]
        grad = np.zeros(self.circuit.n_params)
        if len(factors) == 1:
            energy = float(probs[0] @ self.cost_table)
            self.programs[0].backward(factors[0].copy(), self.cost_table * factors[0], params, grad, self.phase_table)
        else:
            energy = None
            for c, (prog, psi) in enumerate(zip(self.programs, factors)):
                h = self._marginal_cost(probs, c)
                if energy is None:
                    energy = float(probs[c] @ h)
                if prog.gates:
                    prog.backward(psi.copy(), h * psi, params, grad)
        extras = [self._expect(probs, t) for t in extra_tables]
        return energy, grad, extras


def simulate(circuit: Circuit, params, diag=None, method: str = "auto") -> StateVector:
    """Prepare the initial state and apply every gate with its bound angle."""
    if circuit.has_phase and diag is None:
        raise ValueError("circuit contains a phase-separator gate but no diagonal table was given")
    return Evaluator(circuit, None, phase_table=diag, method=method).state(params)
