"""UFLP instances, qubit layout and the exhaustive classical oracle."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

BRUTE_FORCE_LIMIT = 1 << 26


@dataclass(frozen=True)
class UflpInstance:
    """Service costs ``D`` (m x n) and opening costs ``G`` (n,).

    ``penalty`` optionally pins the penalty weight used for this instance;
    when it is ``None`` callers fall back to :func:`default_penalty`.
    """

    m: int
    n: int
    D: tuple
    G: tuple
    name: str = "unnamed"
    known_optimal: float | None = None
    penalty: float | None = None

    def __post_init__(self):
        D = tuple(tuple(row) for row in self.D)
        G = tuple(self.G)
        object.__setattr__(self, "D", D)
        object.__setattr__(self, "G", G)
        if self.m < 1 or self.n < 1:
            raise ValueError(f"m and n must be >= 1, got m={self.m}, n={self.n}")
        if len(D) != self.m:
            raise ValueError(f"D: expected {self.m} rows, got {len(D)}")
        for i, row in enumerate(D):
            if len(row) != self.n:
                raise ValueError(f"D: row {i} has {len(row)} entries, expected {self.n}")
            if any(not np.isfinite(v) or v < 0 for v in row):
                raise ValueError(f"D: row {i} has a negative or non-finite entry")
        if len(G) != self.n:
            raise ValueError(f"G: expected {self.n} entries, got {len(G)}")
        if any(not np.isfinite(v) or v < 0 for v in G):
            raise ValueError("G: negative or non-finite entry")
        if self.penalty is not None and self.penalty < 0:
            raise ValueError(f"lambda must be >= 0, got {self.penalty}")

    @property
    def layout(self) -> "QubitLayout":
        return QubitLayout(self.m, self.n)

    def to_dict(self) -> dict:
        d = {"name": self.name, "m": self.m, "n": self.n,
             "D": [list(r) for r in self.D], "G": list(self.G)}
        if self.known_optimal is not None:
            d["known_optimal"] = self.known_optimal
        if self.penalty is not None:
            d["lambda"] = self.penalty
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "UflpInstance":
        missing = [k for k in ("m", "n", "D", "G") if k not in data]
        if missing:
            raise ValueError(f"instance is missing field(s): {', '.join(missing)}")
        return cls(
            m=int(data["m"]),
            n=int(data["n"]),
            D=data["D"],
            G=data["G"],
            name=str(data.get("name", "unnamed")),
            known_optimal=data.get("known_optimal"),
            penalty=data.get("lambda"),
        )


@dataclass(frozen=True)
class QubitLayout:
    """Register order: all ``y_ij`` (row-major), then ``x_j``, then ``z_ij``."""

    m: int
    n: int

    def y_index(self, i: int, j: int) -> int:
        return i * self.n + j

    def x_index(self, j: int) -> int:
        return self.m * self.n + j

    def z_index(self, i: int, j: int) -> int:
        return self.m * self.n + self.n + i * self.n + j

    @property
    def total_qubits(self) -> int:
        return 2 * self.m * self.n + self.n

    @property
    def constrained(self) -> list[int]:
        return list(range(self.m * self.n))

    @property
    def unconstrained(self) -> list[int]:
        return list(range(self.m * self.n, self.total_qubits))

    def split(self, bits: str) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Return ``(y, x, z)`` integer arrays from a bitstring."""
        if len(bits) != self.total_qubits:
            raise ValueError(f"bitstring length {len(bits)} != {self.total_qubits} qubits")
        arr = np.frombuffer(bits.encode(), dtype=np.uint8) - ord("0")
        if arr.size and arr.max() > 1:
            raise ValueError(f"bitstring may only contain 0/1, got {bits!r}")
        arr = arr.astype(np.int64)
        mn = self.m * self.n
        y = arr[:mn].reshape(self.m, self.n)
        x = arr[mn:mn + self.n]
        z = arr[mn + self.n:].reshape(self.m, self.n)
        return y, x, z

    def join(self, y, x, z) -> str:
        parts = np.concatenate([np.ravel(y), np.ravel(x), np.ravel(z)]).astype(int)
        return "".join(map(str, parts))


def default_penalty(instance: UflpInstance) -> float:
    return 2.0 * (max(max(r) for r in instance.D) + max(instance.G))


def resolve_penalty(instance: UflpInstance, penalty=None) -> float:
    if penalty is None or penalty == "default":
        penalty = instance.penalty if instance.penalty is not None else default_penalty(instance)
    penalty = float(penalty)
    if penalty < 0 or not np.isfinite(penalty):
        raise ValueError(f"lambda must be a finite value >= 0, got {penalty}")
    return penalty


def uflp_cost(instance: UflpInstance, y, x) -> float:
    y = np.asarray(y)
    x = np.asarray(x)
    if y.shape != (instance.m, instance.n) or x.shape != (instance.n,):
        raise ValueError(
            f"expected y of shape {(instance.m, instance.n)} and x of shape {(instance.n,)}, "
            f"got {y.shape} and {x.shape}"
        )
    D = np.asarray(instance.D)
    G = np.asarray(instance.G)
    return (D * y).sum().item() + (G * x).sum().item()


def penalized_cost(instance: UflpInstance, bits: str, penalty: float) -> float:
    """Objective plus ``penalty * sum (y_ij + z_ij - x_j)**2``."""
    if penalty < 0:
        raise ValueError(f"lambda must be >= 0, got {penalty}")
    y, x, z = instance.layout.split(bits)
    residual = y + z - x[None, :]
    return uflp_cost(instance, y, x) + penalty * (residual ** 2).sum().item()


def hard_feasible(bits: str, layout: QubitLayout) -> bool:
    y, _, _ = layout.split(bits)
    return bool(np.all(y.sum(axis=1) == 1))


def feasible_mask(layout: QubitLayout) -> np.ndarray:
    """Boolean table over all ``2**N`` basis indices marking hard-feasible strings."""
    N = layout.total_qubits
    mask = np.zeros(1 << layout.m * layout.n, dtype=bool)
    for choice in itertools.product(range(layout.n), repeat=layout.m):
        mask[sum(1 << (layout.m * layout.n - 1 - layout.y_index(i, j))
                 for i, j in enumerate(choice))] = True
    # y bits are the high bits, so every (x, z) completion inherits the row
    return np.repeat(mask, 1 << (N - layout.m * layout.n))


def trivial_feasible_bits(layout: QubitLayout) -> str:
    block = "1" + "0" * (layout.n - 1)
    return block * layout.m + "0" * (layout.m * layout.n + layout.n)


@dataclass
class OracleResult:
    optimal_value: float
    optimal_bits: set = field(default_factory=set)
    optimal_yx: set = field(default_factory=set)
    evaluated: int = 0


def brute_force(instance: UflpInstance, penalty: float | None = None) -> OracleResult:
    """Minimize the penalized cost over every hard-feasible bitstring.

    Enumerates the ``n**m`` one-hot y assignments against all ``2**(mn+n)``
    (x, z) completions. Every attaining bitstring is kept.
    """
    penalty = resolve_penalty(instance, penalty)
    m, n = instance.m, instance.n
    l = m * n + n
    size = n ** m * (1 << l)
    if size > BRUTE_FORCE_LIMIT:
        raise ValueError(
            f"instance too large for exhaustive search: {n}^{m} * 2^{l} = {size} "
            f"evaluations exceeds limit {BRUTE_FORCE_LIMIT}"
        )
    D = np.asarray(instance.D, dtype=np.float64)
    G = np.asarray(instance.G, dtype=np.float64)
    comp = np.arange(1 << l, dtype=np.int64)
    xz = ((comp[:, None] >> np.arange(l - 1, -1, -1)) & 1).astype(np.float64)
    x = xz[:, :n]
    z = xz[:, n:].reshape(-1, m, n)
    open_cost = x @ G

    best = np.inf
    winners: list[tuple[tuple, int]] = []
    for choice in itertools.product(range(n), repeat=m):
        y = np.zeros((m, n))
        y[np.arange(m), choice] = 1.0
        residual = y[None] + z - x[:, None, :]
        vals = (D * y).sum() + open_cost + penalty * (residual ** 2).sum(axis=(1, 2))
        low = vals.min()
        if low < best:
            best = low
            winners = []
        if low == best:
            winners.extend((choice, int(k)) for k in np.flatnonzero(vals == low))

    layout = instance.layout
    result = OracleResult(optimal_value=float(best), evaluated=size)
    for choice, k in winners:
        y = np.zeros((m, n), dtype=int)
        y[np.arange(m), choice] = 1
        xs = xz[k, :n].astype(int)
        zs = xz[k, n:].astype(int)
        result.optimal_bits.add(layout.join(y, xs, zs))
        result.optimal_yx.add((tuple(map(tuple, y)), tuple(xs)))
    return result


# Values transcribed from the instance tables (service matrix D, opening costs G,
# optimal value).
_TABLE = [
    ([[6, 10], [3, 5]], [7, 7], 16),
    ([[16, 10], [13, 15]], [17, 17], 42),
    ([[8, 15], [20, 15]], [9, 10], 30),
    ([[6, 20], [13, 25]], [20, 20], 39),
    ([[25, 20], [6, 17]], [27, 15], 52),
    ([[6, 10], [3, 1], [5, 4]], [7, 7], 21),
    ([[16, 10], [13, 5], [4, 10]], [17, 17], 42),
    ([[6, 10], [3, 5], [4, 1]], [27, 27], 40),
    ([[6, 20], [3, 15], [24, 1]], [10, 15], 35),
    ([[56, 10], [23, 5], [4, 18]], [27, 10], 43),
    ([[16, 10], [13, 15], [14, 10], [15, 18], [20, 25]], [7, 7], 82),
    ([[16, 10], [13, 15], [14, 10], [15, 18], [20, 25]], [17, 17], 95),
]

REGISTRY: dict[str, UflpInstance] = {
    f"instance-{k:02d}": UflpInstance(
        m=len(D), n=len(G), D=D, G=G, name=f"instance-{k:02d}", known_optimal=opt
    )
    for k, (D, G, opt) in enumerate(_TABLE, start=1)
}


def load_instance(path) -> UflpInstance:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise ValueError(f"{path}: expected a JSON object")
    try:
        return UflpInstance.from_dict(data)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"{path}: {exc}") from exc


def save_instance(instance: UflpInstance, path) -> None:
    Path(path).write_text(json.dumps(instance.to_dict(), indent=2) + "\n")


def get_instance(key) -> UflpInstance:
    """Resolve a registry key (``instance-07`` or ``7``) or an instance file path."""
    if isinstance(key, UflpInstance):
        return key
    key = str(key)
    if key in REGISTRY:
        return REGISTRY[key]
    if key.isdigit() and f"instance-{int(key):02d}" in REGISTRY:
        return REGISTRY[f"instance-{int(key):02d}"]
    path = Path(key)
    if path.exists():
        return load_instance(path)
    raise KeyError(f"unknown instance {key!r}: not a registry key or existing file")
