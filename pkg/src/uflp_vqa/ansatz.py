"""Parametric circuits for QAOA, QAOA+, HEA and VQA-PFS, and their resource counts."""

from __future__ import annotations

from dataclasses import dataclass, field

from .hamiltonians import MixerSpec, QuboForm, to_pauli_z
from .model import QubitLayout, trivial_feasible_bits

GATE_KINDS = ("H", "X", "RX", "RY", "RZ", "CNOT", "XY", "DIAG_PHASE")
PARAMETRIC = ("RX", "RY", "RZ", "XY", "DIAG_PHASE")


@dataclass(frozen=True)
class Gate:
    """One gate record.

    The bound angle is ``scale * params[slot]``. ``DIAG_PHASE`` acts on every
    qubit and takes its diagonal from the table handed to the simulator.
    """

    kind: str
    qubits: tuple
    slot: int | None = None
    scale: float = 1.0


@dataclass
class Circuit:
    n_qubits: int
    initial: str  # "uniform" or a bitstring of length n_qubits
    gates: list = field(default_factory=list)
    n_params: int = 0
    name: str = ""

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if self.initial != "uniform":
            if len(self.initial) != self.n_qubits or set(self.initial) - {"0", "1"}:
                raise ValueError(f"initial must be 'uniform' or a {self.n_qubits}-bit string")
        used = set()
        for g in self.gates:
            if g.kind not in GATE_KINDS:
                raise ValueError(f"unknown gate kind {g.kind!r}")
            if any(not 0 <= q < self.n_qubits for q in g.qubits):
                raise ValueError(f"{g.kind} operand out of range: {g.qubits}")
            if len(set(g.qubits)) != len(g.qubits):
                raise ValueError(f"{g.kind} has repeated operands {g.qubits}")
            if (g.slot is not None) != (g.kind in PARAMETRIC):
                raise ValueError(f"{g.kind} gate has an inconsistent parameter binding")
            if g.slot is not None:
                if not 0 <= g.slot < self.n_params:
                    raise ValueError(f"slot {g.slot} out of range for {self.n_params} params")
                used.add(g.slot)
        if len(used) != self.n_params:
            unused = sorted(set(range(self.n_params)) - used)
            raise ValueError(f"parameter slots never referenced: {unused}")

    @property
    def has_phase(self) -> bool:
        return any(g.kind == "DIAG_PHASE" for g in self.gates)

    def draw(self) -> str:
        """Text diagram, one row per qubit; columns are gates in program order."""
        rows = [[] for _ in range(self.n_qubits)]
        for g in self.gates:
            label = g.kind if g.slot is None else f"{g.kind}[{g.slot}]"
            if g.kind == "DIAG_PHASE":
                label = f"HP[{g.slot}]"
                marks = {q: label for q in range(self.n_qubits)}
            elif g.kind == "CNOT":
                marks = {g.qubits[0]: "@", g.qubits[1]: "(+)"}
            else:
                marks = {q: label for q in g.qubits}
            width = max(len(s) for s in marks.values())
            for q in range(self.n_qubits):
                rows[q].append(marks.get(q, "-" * width).center(width, "-"))
        init = ["+" if self.initial == "uniform" else self.initial[q] for q in range(self.n_qubits)]
        return "\n".join(
            f"q{q:<2d} |{init[q]}> -" + "-".join(rows[q]) + "-" for q in range(self.n_qubits)
        )


def _check_layers(p: int) -> None:
    if int(p) != p or p < 1:
        raise ValueError(f"number of layers p must be a positive integer, got {p!r}")


def build_qaoa(layout: QubitLayout, qubo: QuboForm, p: int) -> Circuit:
    """Standard QAOA: uniform start, full-penalty phase, transverse-field mixer.

    ``qubo`` is only used to check the register size; the phase gate reads its
    diagonal from the table supplied at simulation time.
    """
    _check_layers(p)
    N = layout.total_qubits
    if qubo.max_index() >= N:
        raise ValueError("QUBO does not fit the layout")
    gates = []
    for k in range(p):
        gates.append(Gate("DIAG_PHASE", (), slot=2 * k))
        gates.extend(Gate("RX", (q,), slot=2 * k + 1, scale=2.0) for q in range(N))
    return Circuit(N, "uniform", gates, 2 * p, name="qaoa")


def build_qaoa_plus(layout: QubitLayout, qubo: QuboForm, mixer: MixerSpec, p: int) -> Circuit:
    """QAOA+: feasible start, XY mixers on the one-hot blocks, shared RX on the rest."""
    _check_layers(p)
    N = layout.total_qubits
    if qubo.max_index() >= N:
        raise ValueError("QUBO does not fit the layout")
    gates = []
    for k in range(p):
        gamma, beta = 2 * k, 2 * k + 1
        gates.append(Gate("DIAG_PHASE", (), slot=gamma))
        gates.extend(Gate("XY", pair, slot=beta) for pair in mixer.pairs)
        gates.extend(Gate("RX", (q,), slot=beta, scale=2.0) for q in layout.unconstrained)
    return Circuit(N, trivial_feasible_bits(layout), gates, 2 * p, name="qaoa-plus")


def _hea_block(qubits, first_slot: int) -> list:
    gates = [Gate("RY", (q,), slot=first_slot + i) for i, q in enumerate(qubits)]
    gates.extend(Gate("CNOT", (a, b)) for a, b in zip(qubits, qubits[1:]))
    return gates


def build_hea(n_qubits: int, p: int) -> Circuit:
    """RY layer followed by a linear CNOT chain, repeated ``p`` times."""
    _check_layers(p)
    qubits = list(range(n_qubits))
    gates = []
    for k in range(p):
        gates.extend(_hea_block(qubits, k * n_qubits))
    return Circuit(n_qubits, "uniform", gates, p * n_qubits, name="hea")


def build_vqa_pfs(layout: QubitLayout, mixer: MixerSpec, p: int, final_mixer_only: bool = False) -> Circuit:
    """HEA on the unconstrained register, XY mixers on the one-hot blocks, no phase gate.

    Per layer the slots are ``l`` RY angles followed by one mixer angle. With
    ``final_mixer_only`` a single mixer layer closes the circuit instead and
    ``n_params`` becomes ``p * l + 1``.
    """
    _check_layers(p)
    if not mixer.pairs:
        # n == 1: no mixer gates exist, so mixer slots would be unused
        raise ValueError("VQA-PFS needs at least two facilities (n >= 2) for a mixer")
    free = layout.unconstrained
    l = len(free)
    gates = []
    slot = 0
    for k in range(p):
        gates.extend(_hea_block(free, slot))
        slot += l
        if not final_mixer_only:
            gates.extend(Gate("XY", pair, slot=slot) for pair in mixer.pairs)
            slot += 1
    if final_mixer_only:
        gates.extend(Gate("XY", pair, slot=slot) for pair in mixer.pairs)
        slot += 1
    return Circuit(layout.total_qubits, trivial_feasible_bits(layout), gates, slot, name="vqa-pfs")


# -- resources ----------------------------------------------------------------


@dataclass(frozen=True)
class ResourceReport:
    depth: int
    cnot_count: int
    param_gate_count: int
    param_count: int


def decompose(circuit: Circuit, qubo: QuboForm | None = None) -> list[tuple[str, tuple, bool]]:
    """Lower to ``(name, qubits, is_parametric)`` triples over {H, X, R*, CNOT}.

    The phase gate becomes one RZ per nonzero single-Z coefficient and a
    CNOT-RZ-CNOT ladder per nonzero ZZ coefficient. An XY pair costs four
    CNOTs and two rotations.
    """
    if circuit.has_phase and qubo is None:
        raise ValueError("circuit has a phase-separator gate; its QuboForm is required")
    phase_ops: list = []
    if qubo is not None:
        _, h, J = to_pauli_z(qubo)
        phase_ops += [("RZ", (a,), True) for a, c in sorted(h.items()) if c != 0]
        for (a, b), c in sorted(J.items()):
            if c != 0:
                phase_ops += [("CNOT", (a, b), False), ("RZ", (b,), True), ("CNOT", (a, b), False)]
    out = []
    for g in circuit.gates:
        if g.kind == "DIAG_PHASE":
            out.extend(phase_ops)
        elif g.kind == "XY":
            a, b = g.qubits
            # XX part then YY part, each a CNOT-sandwiched rotation
            out += [("CNOT", (a, b), False), ("RX", (a,), True), ("CNOT", (a, b), False),
                    ("CNOT", (a, b), False), ("RY", (a,), True), ("CNOT", (a, b), False)]
        else:
            out.append((g.kind, g.qubits, g.kind in PARAMETRIC))
    return out


def asap_depth(ops, n_qubits: int) -> int:
    free_at = [0] * n_qubits
    depth = 0
    for _, qubits, _ in ops:
        layer = max(free_at[q] for q in qubits) + 1
        for q in qubits:
            free_at[q] = layer
        depth = max(depth, layer)
    return depth


def resources(circuit: Circuit, qubo: QuboForm | None = None) -> ResourceReport:
    ops = decompose(circuit, qubo)
    return ResourceReport(
        depth=asap_depth(ops, circuit.n_qubits),
        cnot_count=sum(1 for name, _, _ in ops if name == "CNOT"),
        param_gate_count=sum(1 for *_, param in ops if param),
        param_count=circuit.n_params,
    )
