"""Exact simulation and benchmarking of variational ansatzes for facility location."""

from .ansatz import (Circuit, Gate, ResourceReport, build_hea, build_qaoa, build_qaoa_plus,
                     build_vqa_pfs, resources)
from .engine import Evaluator, simulate
from .estimator import VariationalUflpSolver
from .hamiltonians import MixerSpec, QuboForm, diagonal_table, mixer_pairs, qubo_full, qubo_pfs
from .harness import ExperimentConfig, RunRecord, build_problem, compare, run, success_probability
from .model import (REGISTRY, QubitLayout, UflpInstance, brute_force, hard_feasible, load_instance,
                    penalized_cost, trivial_feasible_bits, uflp_cost)
from .optimizer import AdamConfig, Trajectory, adam_minimize, cost, gradient, random_init
from .statevector import StateVector

__version__ = "0.1.0"
