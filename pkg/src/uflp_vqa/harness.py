"""Experiment runner: build, optimize, score and report one or many configurations."""

from __future__ import annotations

import csv
import io
import json
import logging
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .ansatz import Circuit, ResourceReport, build_hea, build_qaoa, build_qaoa_plus, build_vqa_pfs, resources
from .engine import Evaluator
from .hamiltonians import QuboForm, diagonal_table, mixer_pairs, qubo_full, qubo_pfs
from .model import OracleResult, UflpInstance, brute_force, feasible_mask, get_instance, resolve_penalty
from .optimizer import AdamConfig, adam_minimize, iterations_to_plateau, random_init
from .statevector import StateVector, bits_to_index, probability_mass

logger = logging.getLogger(__name__)

ALGORITHMS = ("qaoa", "qaoa-plus", "hea", "vqa-pfs")

CSV_HEADER = [
    "instance", "algorithm", "p", "seed", "lambda", "final_loss", "success_prob",
    "iters_to_plateau", "depth", "cnots", "param_gates", "params", "infeasible_mass",
    "wall_seconds",
]


@dataclass
class ExperimentConfig:
    algorithm: str
    instance: str
    p: int = 1
    penalty: float | str = "default"
    seeds: list = field(default_factory=lambda: [0])
    adam: AdamConfig = field(default_factory=AdamConfig)
    output: str | None = None
    format: str = "csv"
    final_mixer_only: bool = False
    single_optimum: bool = False
    best_over_trajectory: bool = False
    timing: bool = True

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}; choose from {', '.join(ALGORITHMS)}")
        if int(self.p) != self.p or self.p < 1:
            raise ValueError(f"p must be a positive integer, got {self.p!r}")
        if not self.seeds:
            raise ValueError("seeds must be nonempty")
        if self.format not in ("csv", "json"):
            raise ValueError(f"format must be 'csv' or 'json', got {self.format!r}")


@dataclass
class Problem:
    """Everything needed to optimize one algorithm on one instance at one depth."""

    instance: UflpInstance
    algorithm: str
    p: int
    penalty: float
    circuit: Circuit
    qubo: QuboForm
    table: np.ndarray
    oracle: OracleResult


def build_problem(instance, algorithm: str, p: int, penalty=None, final_mixer_only: bool = False,
                  oracle: OracleResult | None = None) -> Problem:
    """Circuit plus the cost table it is scored against.

    QAOA and HEA search the whole register and are scored with both penalty
    groups; QAOA+ and VQA-PFS stay on the one-hot subspace and use only the
    slack penalty.
    """
    instance = get_instance(instance)
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}; choose from {', '.join(ALGORITHMS)}")
    lam = resolve_penalty(instance, penalty)
    layout = instance.layout
    N = layout.total_qubits
    mixer = mixer_pairs(instance.m, instance.n)
    if algorithm in ("qaoa", "hea"):
        qubo = qubo_full(instance, lam)
    else:
        qubo = qubo_pfs(instance, lam)
    if algorithm == "qaoa":
        circuit = build_qaoa(layout, qubo, p)
    elif algorithm == "qaoa-plus":
        circuit = build_qaoa_plus(layout, qubo, mixer, p)
    elif algorithm == "hea":
        circuit = build_hea(N, p)
    else:
        circuit = build_vqa_pfs(layout, mixer, p, final_mixer_only=final_mixer_only)
    table = diagonal_table(qubo, N)
    if oracle is None:
        oracle = brute_force(instance, lam)
    return Problem(instance, algorithm, p, lam, circuit, qubo, table, oracle)


def success_probability(state: StateVector, optimal_bits) -> float:
    """Probability mass on the optimal bitstrings (degenerate optima summed)."""
    optimal_bits = list(optimal_bits)
    if not optimal_bits:
        raise ValueError("optimal set is empty")
    if any(len(b) != state.n_qubits for b in optimal_bits):
        raise ValueError(f"optimal bitstrings must have {state.n_qubits} bits")
    return probability_mass(state, (bits_to_index(b) for b in optimal_bits))


def _optimal_set(oracle: OracleResult, single: bool) -> list[str]:
    bits = sorted(oracle.optimal_bits)
    return bits[:1] if single else bits


@dataclass
class SeedResult:
    seed: int
    final_loss: float
    success_prob: float
    iterations: int
    iters_to_plateau: int
    infeasible_mass: float
    wall_seconds: float | None
    losses: list
    best_success_prob: float | None = None


@dataclass
class RunRecord:
    config: dict
    instance: str
    penalty: float
    optimal_value: float
    resources: ResourceReport
    seeds: list
    aggregate: dict

    def rows(self) -> list[dict]:
        r = self.resources
        out = []
        for s in self.seeds:
            out.append({
                "instance": self.instance,
                "algorithm": self.config["algorithm"],
                "p": self.config["p"],
                "seed": s.seed,
                "lambda": self.penalty,
                "final_loss": s.final_loss,
                "success_prob": s.success_prob,
                "iters_to_plateau": s.iters_to_plateau,
                "depth": r.depth,
                "cnots": r.cnot_count,
                "param_gates": r.param_gate_count,
                "params": r.param_count,
                "infeasible_mass": s.infeasible_mass,
                "wall_seconds": "" if s.wall_seconds is None else s.wall_seconds,
            })
        return out

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "instance": self.instance,
            "lambda": self.penalty,
            "optimal_value": self.optimal_value,
            "resources": asdict(self.resources),
            "seeds": [asdict(s) for s in self.seeds],
            "aggregate": self.aggregate,
        }


def _run_seed(problem: Problem, evaluator: Evaluator, seed: int, cfg: AdamConfig,
              optimal: list[str], mask: np.ndarray, timing: bool,
              best_over_trajectory: bool) -> SeedResult:
    t0 = time.perf_counter()
    init = random_init(problem.circuit.n_params, seed)
    monitor = [mask]
    if best_over_trajectory:
        hit = np.zeros_like(mask)
        hit[[bits_to_index(b) for b in optimal]] = 1.0
        monitor.append(hit)
    traj = adam_minimize(problem.circuit, evaluator, init, cfg, monitor=monitor)
    final_loss = evaluator.value(traj.final_params)
    state = evaluator.state(traj.final_params)
    p_succ = success_probability(state, optimal)
    infeasible = max(float(traj.extras[:, 0].max()), float(state.probabilities @ mask))
    best = max(float(traj.extras[:, 1].max()), p_succ) if best_over_trajectory else None
    wall = round(time.perf_counter() - t0, 3) if timing else None
    return SeedResult(
        seed=seed,
        final_loss=final_loss,
        success_prob=p_succ,
        iterations=traj.iterations,
        iters_to_plateau=iterations_to_plateau(traj.losses, final_loss),
        infeasible_mass=infeasible,
        wall_seconds=wall,
        losses=traj.losses.tolist(),
        best_success_prob=best,
    )


def run(config: ExperimentConfig, problem: Problem | None = None, write: bool = True) -> RunRecord:
    """Optimize every seed of ``config`` and (optionally) write the report."""
    if problem is None:
        problem = build_problem(config.instance, config.algorithm, config.p, config.penalty,
                                config.final_mixer_only)
    evaluator = Evaluator(problem.circuit, problem.table)
    optimal = _optimal_set(problem.oracle, config.single_optimum)
    # infeasible mass is tracked for every algorithm: it is the diagnostic that
    # separates the feasible-space ansatzes from the penalty-only ones
    mask = (~feasible_mask(problem.instance.layout)).astype(np.float64)
    seeds = []
    for seed in config.seeds:
        res = _run_seed(problem, evaluator, int(seed), config.adam, optimal, mask,
                        config.timing, config.best_over_trajectory)
        logger.info("%s %s p=%d seed=%d loss=%.6g P=%.4g", problem.instance.name,
                    config.algorithm, config.p, seed, res.final_loss, res.success_prob)
        seeds.append(res)
    probs = np.array([s.success_prob for s in seeds])
    record = RunRecord(
        config=_config_echo(config),
        instance=problem.instance.name,
        penalty=problem.penalty,
        optimal_value=problem.oracle.optimal_value,
        resources=resources(problem.circuit, problem.qubo if problem.circuit.has_phase else None),
        seeds=seeds,
        aggregate={
            "mean_success_prob": float(probs.mean()),
            "median_success_prob": float(np.median(probs)),
            "max_success_prob": float(probs.max()),
        },
    )
    if write and config.output:
        write_records([record], config.output, config.format)
    return record


def _config_echo(config: ExperimentConfig) -> dict:
    d = asdict(config)
    d["adam"] = asdict(config.adam)
    d["instance"] = str(config.instance)
    return d


def compare(instances, algorithms, p_range, seeds, penalty="default", adam: AdamConfig = AdamConfig(),
            timing: bool = True, n_jobs: int = 1) -> list[RunRecord]:
    """Run the Cartesian product of instances x algorithms x depths over ``seeds``."""
    if not (instances and algorithms and p_range and seeds):
        raise ValueError("instances, algorithms, p_range and seeds must all be nonempty")
    cells = []
    for key in instances:
        inst = get_instance(key)
        oracle = brute_force(inst, resolve_penalty(inst, penalty))
        for alg in algorithms:
            for p in p_range:
                cells.append((inst, alg, p, oracle))

    def one(cell):
        inst, alg, p, oracle = cell
        problem = build_problem(inst, alg, p, penalty, oracle=oracle)
        cfg = ExperimentConfig(algorithm=alg, instance=inst.name, p=p, penalty=penalty,
                               seeds=list(seeds), adam=adam, timing=timing)
        return run(cfg, problem=problem, write=False)

    if n_jobs == 1:
        return [one(c) for c in cells]
    from joblib import Parallel, delayed

    return Parallel(n_jobs=n_jobs)(delayed(one)(c) for c in cells)


def records_to_csv(records) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_HEADER, lineterminator="\n")
    writer.writeheader()
    for rec in records:
        for row in rec.rows():
            writer.writerow({k: _fmt(v) for k, v in row.items()})
    return buf.getvalue()


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    return v


def write_records(records, path, fmt: str = "csv") -> Path:
    path = Path(path)
    if fmt == "csv":
        text = records_to_csv(records)
    elif fmt == "json":
        text = json.dumps([r.to_dict() for r in records], indent=2) + "\n"
    else:
        raise ValueError(f"format must be 'csv' or 'json', got {fmt!r}")
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write results to {path}: {exc}") from exc
    return path
