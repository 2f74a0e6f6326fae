"""scikit-learn style front end.

``VariationalUflpSolver`` follows the estimator conventions (constructor only
stores hyperparameters, ``fit`` returns ``self``, learned state ends in ``_``)
so it works with ``clone``, ``get_params``/``set_params`` and parameter grids.
The "data" it fits is a UFLP instance rather than a feature matrix.
"""

from __future__ import annotations

import numbers

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .harness import ALGORITHMS, build_problem, success_probability
from .engine import Evaluator
from .model import UflpInstance, feasible_mask, get_instance
from .optimizer import AdamConfig, adam_minimize, iterations_to_plateau, random_init
from .statevector import index_to_bits


def check_instance(instance) -> UflpInstance:
    """Accept an instance, a registry key, a file path or a ``(D, G)`` pair."""
    if isinstance(instance, UflpInstance):
        return instance
    if isinstance(instance, tuple) and len(instance) == 2:
        D, G = instance
        D = np.asarray(D, dtype=float)
        G = np.asarray(G, dtype=float)
        if D.ndim != 2 or G.ndim != 1:
            raise ValueError(f"expected D of rank 2 and G of rank 1, got {D.shape} and {G.shape}")
        return UflpInstance(m=D.shape[0], n=D.shape[1], D=D.tolist(), G=G.tolist(), name="array")
    return get_instance(instance)


def check_layers(p) -> int:
    if not isinstance(p, numbers.Integral) or p < 1:
        raise ValueError(f"p must be a positive integer, got {p!r}")
    return int(p)


def check_params(params, n_params: int) -> np.ndarray:
    params = np.asarray(params, dtype=np.float64)
    if params.shape != (n_params,):
        raise ValueError(f"expected {n_params} parameters, got shape {params.shape}")
    if not np.all(np.isfinite(params)):
        raise ValueError("parameters must be finite")
    return params


class VariationalUflpSolver(BaseEstimator):
    """Train one of the four ansatzes on a UFLP instance.

    ``fit`` takes the instance as ``X``. The prediction methods accept ``X``
    only for signature compatibility and always answer for the fitted instance.

    Parameters
    ----------
    algorithm : {"vqa-pfs", "qaoa-plus", "qaoa", "hea"}
    p : int
        Number of layers.
    penalty : float or "default"
        Penalty weight; ``"default"`` uses the instance's own or the
        ``2 * (max D + max G)`` rule.
    learning_rate, max_iter : Adam step size and iteration budget.
    random_state : int
        Seed for the uniform ``[-pi, pi)`` initial angles.
    final_mixer_only : bool
        VQA-PFS variant with a single closing mixer layer.

    Attributes
    ----------
    circuit_, params_, loss_curve_, n_iter_, loss_, success_probability_,
    optimal_value_, iters_to_plateau_
    """

    def __init__(self, algorithm="vqa-pfs", p=2, penalty="default", learning_rate=0.05,
                 max_iter=300, random_state=0, final_mixer_only=False):
        self.algorithm = algorithm
        self.p = p
        self.penalty = penalty
        self.learning_rate = learning_rate
        self.max_iter = max_iter
        self.random_state = random_state
        self.final_mixer_only = final_mixer_only

    def fit(self, X, y=None):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"algorithm must be one of {ALGORITHMS}, got {self.algorithm!r}")
        instance = check_instance(X)
        p = check_layers(self.p)
        problem = build_problem(instance, self.algorithm, p, self.penalty, self.final_mixer_only)
        cfg = AdamConfig(learning_rate=self.learning_rate, max_iters=self.max_iter,
                         seed=self.random_state)
        ev = Evaluator(problem.circuit, problem.table)
        init = random_init(problem.circuit.n_params, self.random_state)
        traj = adam_minimize(problem.circuit, ev, init, cfg)

        self.instance_ = instance
        self.problem_ = problem
        self.circuit_ = problem.circuit
        self.params_ = traj.final_params
        self.loss_curve_ = traj.losses
        self.n_iter_ = traj.iterations
        self.loss_ = ev.value(traj.final_params)
        self.state_ = ev.state(traj.final_params)
        self.optimal_value_ = problem.oracle.optimal_value
        self.success_probability_ = success_probability(self.state_, problem.oracle.optimal_bits)
        self.iters_to_plateau_ = iterations_to_plateau(traj.losses, self.loss_)
        self._evaluator = ev
        return self

    def predict_proba(self, X=None) -> np.ndarray:
        """Probability of every basis bitstring under the trained circuit; ``X`` is ignored."""
        check_is_fitted(self)
        return self.state_.probabilities

    def predict(self, X=None) -> str:
        """Most likely hard-feasible bitstring (``y`` blocks, then ``x``, then ``z``)."""
        check_is_fitted(self)
        layout = self.instance_.layout
        probs = np.where(feasible_mask(layout), self.state_.probabilities, -1.0)
        return index_to_bits(int(np.argmax(probs)), layout.total_qubits)

    def decode(self, bits: str | None = None) -> tuple[np.ndarray, np.ndarray]:
        """Split a bitstring (default: :meth:`predict`) into ``(y, x)``."""
        check_is_fitted(self)
        bits = self.predict() if bits is None else bits
        y, x, _ = self.instance_.layout.split(bits)
        return y, x

    def score(self, X=None, y=None) -> float:
        """Success probability of the trained state."""
        check_is_fitted(self)
        return self.success_probability_

    def energy(self, params) -> float:
        check_is_fitted(self)
        return self._evaluator.value(check_params(params, self.circuit_.n_params))
