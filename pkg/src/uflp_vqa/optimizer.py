"""Adam on the variational energy with exact gradients."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .ansatz import Circuit
from .engine import Evaluator

logger = logging.getLogger(__name__)


class OptimizationError(RuntimeError):
    pass


@dataclass(frozen=True)
class AdamConfig:
    learning_rate: float = 0.05
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    max_iters: int = 300
    seed: int = 0
    plateau_stop: bool = False
    plateau_rtol: float = 1e-8
    plateau_patience: int = 20

    def __post_init__(self):
        if not self.learning_rate > 0:
            raise ValueError(f"learning_rate must be > 0, got {self.learning_rate}")
        if not (0 <= self.beta1 < 1 and 0 <= self.beta2 < 1):
            raise ValueError(f"beta1 and beta2 must lie in [0, 1), got {self.beta1}, {self.beta2}")
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be > 0, got {self.epsilon}")
        if int(self.max_iters) != self.max_iters or self.max_iters < 1:
            raise ValueError(f"max_iters must be a positive integer, got {self.max_iters}")


@dataclass
class Trajectory:
    losses: np.ndarray
    final_params: np.ndarray
    grad_norms: np.ndarray
    extras: np.ndarray = field(default_factory=lambda: np.zeros((0, 0)))

    @property
    def iterations(self) -> int:
        return len(self.losses)


def random_init(n_params: int, seed: int) -> np.ndarray:
    """I.i.d. uniform angles on ``[-pi, pi)``."""
    rng = np.random.default_rng(seed)
    return rng.uniform(-np.pi, np.pi, size=n_params)


def _evaluator(circuit, table) -> Evaluator:
    if isinstance(table, Evaluator):
        return table
    return Evaluator(circuit, table)


def cost(circuit: Circuit, params, diag_cost_table) -> float:
    """``<psi(params)| H |psi(params)>`` for the diagonal ``H`` given as a table."""
    return _evaluator(circuit, diag_cost_table).value(params)


def gradient(circuit: Circuit, params, diag_cost_table) -> np.ndarray:
    return _evaluator(circuit, diag_cost_table).value_and_grad(params)[1]


def adam_minimize(circuit: Circuit, diag_cost_table, init, cfg: AdamConfig = AdamConfig(),
                  monitor=()) -> Trajectory:
    """Run Adam from ``init``; ``losses[t]`` is the energy before update ``t``.

    ``monitor`` is a sequence of extra diagonal tables whose expectations are
    recorded at every iteration in ``Trajectory.extras``.
    """
    ev = _evaluator(circuit, diag_cost_table)
    theta = np.array(init, dtype=np.float64)
    if theta.shape != (circuit.n_params,):
        raise ValueError(f"init has shape {theta.shape}, expected ({circuit.n_params},)")
    m = np.zeros_like(theta)
    v = np.zeros_like(theta)
    losses, norms, extras = [], [], []
    still = 0
    for t in range(1, cfg.max_iters + 1):
        loss, grad, extra = ev.value_and_grad(theta, monitor)
        if not np.isfinite(loss) or not np.all(np.isfinite(grad)):
            raise OptimizationError(
                f"non-finite loss/gradient at iteration {t}: loss={loss}, "
                f"max|grad|={np.max(np.abs(grad))}, params={theta.tolist()}"
            )
        losses.append(loss)
        norms.append(float(np.linalg.norm(grad)))
        extras.append(extra)

        m = cfg.beta1 * m + (1 - cfg.beta1) * grad
        v = cfg.beta2 * v + (1 - cfg.beta2) * grad * grad
        m_hat = m / (1 - cfg.beta1 ** t)
        v_hat = v / (1 - cfg.beta2 ** t)
        theta = theta - cfg.learning_rate * m_hat / (np.sqrt(v_hat) + cfg.epsilon)

        if cfg.plateau_stop and t > 1:
            prev = losses[-2]
            if abs(loss - prev) <= cfg.plateau_rtol * max(abs(prev), 1e-300):
                still += 1
                if still >= cfg.plateau_patience:
                    logger.debug("plateau reached after %d iterations", t)
                    break
            else:
                still = 0
    return Trajectory(
        losses=np.asarray(losses),
        final_params=theta,
        grad_norms=np.asarray(norms),
        extras=np.asarray(extras, dtype=np.float64).reshape(len(losses), len(monitor)),
    )


def iterations_to_plateau(losses, final_loss: float, rtol: float = 0.01) -> int:
    """First iteration whose loss is within ``rtol`` (relative) of ``final_loss``."""
    losses = np.asarray(losses)
    hit = np.flatnonzero(np.abs(losses - final_loss) <= rtol * abs(final_loss))
    return int(hit[0]) if hit.size else len(losses)
