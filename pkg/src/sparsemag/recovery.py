"""FISTA solver for the LASSO sparse-recovery problem.

Minimises ||A x - m||_2^2 + lambda ||x||_1 (no 1/2 on the data term).  The
gradient Lipschitz constant is therefore 2 sigma_max^2; with
sigma_max <= 1/sqrt(2N) for any row-subsampled DST the largest safe step is
N, and the default keeps a 0.9 margin.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field

import numpy as np

from .transform import operator_norm_bound


def default_lambda() -> float:
    """Regularisation weight (Hz) tuned on simulated training data."""
    return 1.04


@dataclass
class LassoProblem:
    """Subsampled linear system with l1 regularisation."""

    operator: np.ndarray
    measurements: np.ndarray
    lam: float

    def __post_init__(self):
        self.operator = np.asarray(self.operator, dtype=float)
        self.measurements = np.asarray(self.measurements, dtype=float)
        if self.operator.ndim != 2:
            raise ValueError("operator must be a matrix")
        if self.measurements.shape != (self.operator.shape[0],):
            raise ValueError(
                f"measurement length {self.measurements.shape} does not match "
                f"operator rows {self.operator.shape[0]}"
            )
        if self.lam <= 0:
            raise ValueError("lambda must be positive")

    @property
    def n_grid(self) -> int:
        return self.operator.shape[1] + 1


@dataclass
class FistaConfig:
    step: float | None = None
    max_iters: int = 5000
    rel_tolerance: float = 1e-8


def safe_step(n_grid: int, margin: float = 0.9) -> float:
    """Largest safe FISTA step 1/(2 sigma_max^2) = N, scaled by ``margin``."""
    return margin / (2.0 * operator_norm_bound(n_grid) ** 2)


@dataclass
class RecoveryResult:
    waveform: np.ndarray
    objective_trace: np.ndarray = field(repr=False)
    iterations_used: int
    converged: bool


def soft_threshold(x, tau: float) -> np.ndarray:
    """Elementwise sign(x) * max(|x| - tau, 0)."""
    if tau < 0:
        raise ValueError("threshold must be non-negative")
    x = np.asarray(x, dtype=float)
    return np.sign(x) * np.maximum(np.abs(x) - tau, 0.0)


def objective(problem: LassoProblem, x) -> float:
    """||A x - m||_2^2 + lambda ||x||_1."""
    x = np.asarray(x, dtype=float)
    if x.shape != (problem.operator.shape[1],):
        raise ValueError(
            f"x length {x.shape} does not match operator columns "
            f"{problem.operator.shape[1]}"
        )
    residual = problem.operator @ x - problem.measurements
    return float(residual @ residual + problem.lam * np.abs(x).sum())


def fista_solve(problem: LassoProblem, config: FistaConfig | None = None) -> RecoveryResult:
    """Plain (non-monotone) FISTA from a zero start.

    Non-convergence within max_iters is reported via ``converged=False``,
    never raised.
    """
    if config is None:
        config = FistaConfig()
    step = config.step if config.step is not None else safe_step(problem.n_grid)

    a_mat = problem.operator
    m = problem.measurements
    x = np.zeros(a_mat.shape[1])
    y = x.copy()
    theta = 1.0
    trace = [objective(problem, x)]
    converged = False
    iterations = 0

    for iterations in range(1, config.max_iters + 1):
        gradient = 2.0 * (a_mat.T @ (a_mat @ y - m))
        x_next = soft_threshold(y - step * gradient, step * problem.lam)
        theta_next = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * theta**2))
        y = x_next + ((theta - 1.0) / theta_next) * (x_next - x)
        x, theta = x_next, theta_next

        value = objective(problem, x)
        trace.append(value)
        previous = trace[-2]
        scale = max(abs(previous), abs(value), 1e-300)
        if abs(previous - value) <= config.rel_tolerance * scale:
            converged = True
            break

    return RecoveryResult(
        waveform=x,
        objective_trace=np.array(trace),
        iterations_used=iterations,
        converged=converged,
    )


def result_to_csv(result: RecoveryResult, times, path):
    """Write the recovered waveform as ``time_s,recovered_hz`` rows."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["time_s", "recovered_hz"])
        for t, x in zip(times, result.waveform):
            writer.writerow([repr(float(t)), repr(float(x))])


def result_metadata_to_json(result: RecoveryResult, lam: float, path):
    with open(path, "w") as fh:
        json.dump(
            {
                "lambda": lam,
                "iterations_used": result.iterations_used,
                "converged": result.converged,
                "final_objective": float(result.objective_trace[-1]),
            },
            fh,
        )
