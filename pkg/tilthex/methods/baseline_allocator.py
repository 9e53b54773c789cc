"""Joint cant-angle and spin-rate allocation by grid search, the comparison baseline"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np
from numpy.linalg import lstsq

from tilthex.errors import AllocationFailure, ConfigError, SolverFailure
from tilthex.methods.allocation import Allocation
from tilthex.methods.cant_selector import cost
from tilthex.methods.platform_model import BodyWrench
from tilthex.params import ALPHA_MIN

logger = logging.getLogger(__name__)

# objectives closer than this are treated as ties
OBJECTIVE_TIE_TOL = 1e-9


def _kkt_violation(grad: np.ndarray, on_bound: np.ndarray) -> float:
    """Largest violation of the first-order conditions of the box problem"""
    violation = grad * on_bound
    free = on_bound == 0
    violation[free] = np.abs(grad[free])
    return float(np.max(violation)) if violation.size else 0.0


# pylint: disable=invalid-name,too-many-locals,too-many-branches,too-many-statements
def bounded_least_squares(
    A: np.ndarray,
    b: np.ndarray,
    lb: np.ndarray,
    ub: np.ndarray,
    tol: float = 1e-9,
    max_iter: int = 60,
    x_lsq: Optional[np.ndarray] = None,
) -> np.ndarray:
    """
    Minimize ||A x - b||^2 subject to lb <= x <= ub by active-set iteration

    Starts from the unconstrained solution clipped to the box, then frees the
    bound variable with the most promising gradient until the first-order
    conditions hold.

    Args:
        A: system matrix
        b: right-hand side
        lb: lower bounds
        ub: upper bounds
        tol: first-order tolerance, relative to ||A^T b||
        max_iter: cap on the main-loop iterations
        x_lsq: unconstrained solution if already known

    Returns:
        The minimizer

    Raises:
        SolverFailure: the iteration cap was reached before convergence

    Examples:
        >>> A = np.eye(2)
        >>> x = bounded_least_squares(A, np.array([2.0, -1.0]), np.zeros(2), np.ones(2))
        >>> x.tolist()
        [1.0, 0.0]
    """
    _, n = A.shape
    lb = np.broadcast_to(np.asarray(lb, dtype=float), (n,))
    ub = np.broadcast_to(np.asarray(ub, dtype=float), (n,))
    x = (lstsq(A, b, rcond=None)[0] if x_lsq is None else x_lsq).astype(float)
    on_bound = np.zeros(n)

    mask = x <= lb
    x[mask] = lb[mask]
    on_bound[mask] = -1
    mask = x >= ub
    x[mask] = ub[mask]
    on_bound[mask] = 1

    scale = float(np.linalg.norm(A.T @ b))
    threshold = tol * scale if scale > 0 else tol

    # shrink the free set until its least-squares solution is feasible
    free_set = np.flatnonzero(on_bound == 0)
    while free_set.size > 0:
        bound_part = b - A @ (x * (on_bound != 0))
        z = lstsq(A[:, free_set], bound_part, rcond=None)[0]
        below = z < lb[free_set]
        above = z > ub[free_set]
        x[free_set[below]] = lb[free_set[below]]
        on_bound[free_set[below]] = -1
        x[free_set[above]] = ub[free_set[above]]
        on_bound[free_set[above]] = 1
        inside = ~(below | above)
        x[free_set[inside]] = z[inside]
        if inside.all():
            break
        free_set = free_set[inside]

    residual = A @ x - b
    cost_value = 0.5 * float(residual @ residual)
    grad = A.T @ residual

    for _ in range(max_iter):
        if _kkt_violation(grad, on_bound) <= threshold:
            return x

        on_bound[int(np.argmax(grad * on_bound))] = 0
        while True:
            free_set = np.flatnonzero(on_bound == 0)
            x_free = x[free_set]
            lb_free, ub_free = lb[free_set], ub[free_set]
            bound_part = b - A @ (x * (on_bound != 0))
            z = lstsq(A[:, free_set], bound_part, rcond=None)[0]

            low = np.flatnonzero(z < lb_free)
            high = np.flatnonzero(z > ub_free)
            violated = np.concatenate((low, high))
            if violated.size == 0:
                x[free_set] = z
                break

            # step towards z until the first free variable hits its bound
            steps = np.concatenate(
                (lb_free[low] - x_free[low], ub_free[high] - x_free[high])
            ) / (z[violated] - x_free[violated])
            first = int(np.argmin(steps))
            x[free_set] = x_free + steps[first] * (z - x_free)
            on_bound[free_set[violated[first]]] = -1 if first < low.size else 1

        residual = A @ x - b
        new_cost = 0.5 * float(residual @ residual)
        stalled = cost_value - new_cost < tol * cost_value
        cost_value = new_cost
        grad = A.T @ residual
        if stalled:
            violation = _kkt_violation(grad, on_bound)
            if violation > threshold:
                logger.debug(
                    "Bounded least squares stalled, first-order violation %.3g "
                    "above %.3g",
                    violation,
                    threshold,
                )
            return x

    if _kkt_violation(grad, on_bound) <= threshold:
        return x
    raise SolverFailure(
        f"Bounded least squares did not converge in { max_iter } iterations"
    )


# pylint: enable=invalid-name,too-many-locals,too-many-branches,too-many-statements


@dataclass(frozen=True)
class BaselineConfig:
    """Grid, cost weights and inner-solver settings of the baseline

    Attributes:
        alpha_grid_step: spacing of the searched cant angles [rad]
        c1: weight on the distance from the untilted configuration
        c2: weight on the change from the current angle
        max_iter: iteration cap of the inner solver
        tol: first-order tolerance of the inner solver
    """

    alpha_grid_step: float = float(np.deg2rad(1.0))
    c1: float = 0.5
    c2: float = 0.5
    max_iter: int = 60
    tol: float = 1e-9

    def __post_init__(self):
        if self.alpha_grid_step <= 0:
            raise ConfigError(
                f"Grid step must be positive, got { self.alpha_grid_step }"
            )
        if self.tol <= 0:
            raise ConfigError(f"Tolerance must be positive, got { self.tol }")
        if self.max_iter < 1:
            raise ConfigError(f"max_iter must be at least 1, got { self.max_iter }")


@dataclass(frozen=True)
class BaselineResult:
    """Selected pair, its objective and the wall-clock solve time [s]"""

    alpha_star: float
    u_star: np.ndarray
    t_solve: float
    objective: float
    residual: float


class BaselineAllocator(Allocation):
    """Responsible for the joint optimization over cant angle and inputs"""

    def _baseline_grid(self, step: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Grid angles with their allocation matrices and pseudo-inverses, cached"""
        cache: Dict[float, Tuple[np.ndarray, np.ndarray, np.ndarray]]
        try:
            cache = self._baseline_cache  # type: ignore[has-type]
        except AttributeError:
            # pylint: disable=attribute-defined-outside-init
            cache = self._baseline_cache = {}
        if step not in cache:
            count = int(round((2.0 * np.pi / 3.0) / step))
            alphas = ALPHA_MIN + step * np.arange(count)
            alphas[np.abs(alphas) < 1e-12] = 0.0
            mats = np.array([self.build_matrices(float(a)).C for a in alphas])
            cache[step] = (alphas, mats, np.linalg.pinv(mats))
        return cache[step]

    def baseline_allocate(
        self,
        wrench_star: BodyWrench,
        alpha_cur: float,
        config: Optional[BaselineConfig] = None,
    ) -> BaselineResult:
        """
        Jointly choose the cant angle and inputs minimizing residual plus cost

        Every grid angle gets an exact box-constrained least-squares solve; the
        pair with the smallest ||C u - w||^2 + J(alpha, alpha_cur) wins, ties
        going to the smaller |alpha| and then the smaller alpha.

        Args:
            wrench_star: desired body wrench
            alpha_cur: current cant angle [rad]
            config: grid and solver settings

        Returns:
            Selected angle and inputs, objective, residual norm and solve time

        Raises:
            AllocationFailure: the inner solver failed at every grid angle

        Examples:
            >>> hover = BodyWrench(np.array([0.0, 0.0, 34.335]), np.zeros(3))
            >>> res = hexa.baseline_allocate(hover, np.deg2rad(25))
            >>> res.residual < 1e-6
            True
        """
        config = config if config is not None else BaselineConfig()
        target = wrench_star.as_vector()
        alphas, mats, pinvs = self._baseline_grid(config.alpha_grid_step)
        start = time.perf_counter()

        u_max = self.params.u_max
        lower, upper = np.zeros(6), np.full(6, u_max)
        unconstrained = pinvs @ target

        solved: List[Tuple[float, int, np.ndarray, float]] = []
        for k, alpha in enumerate(alphas):
            try:
                u = bounded_least_squares(
                    mats[k],
                    target,
                    lower,
                    upper,
                    tol=config.tol,
                    max_iter=config.max_iter,
                    x_lsq=unconstrained[k].copy(),
                )
            except SolverFailure as err:
                logger.debug(
                    "Baseline solve failed at %.2f deg: %s", np.rad2deg(alpha), err
                )
                continue
            residual = mats[k] @ u - target
            sq_residual = float(residual @ residual)
            objective = sq_residual + cost(alpha, alpha_cur, config.c1, config.c2)
            solved.append((objective, k, u, sq_residual))

        t_solve = time.perf_counter() - start
        if not solved:
            raise AllocationFailure("Baseline solver failed at every grid angle")
        lowest = min(entry[0] for entry in solved)
        objective, k, u, sq_residual = min(
            (entry for entry in solved if entry[0] <= lowest + OBJECTIVE_TIE_TOL),
            key=lambda entry: (abs(float(alphas[entry[1]])), float(alphas[entry[1]])),
        )
        return BaselineResult(
            alpha_star=float(alphas[k]),
            u_star=np.clip(u, 0.0, u_max),
            t_solve=t_solve,
            objective=objective,
            residual=float(np.sqrt(sq_residual)),
        )
