"""
Deterministic minimization over a `SearchSpace`.

`grid_sweep` visits the Cartesian product of per-parameter grids in the fixed
parameter order and keeps the first of equally good points. `refine` is a compass
pattern search: it tries ``± step`` along every free coordinate, moves to the best
improving trial point and halves the step when none improves.
"""
import itertools
import logging
import time
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Union

import numpy as np

from ..lgengine.sequential import IdentityViolationError
from ..linalg.tolerances import DEFAULT_TOLERANCES, Tolerances
from .objectives import Objective, get_objective
from .space import SearchSpace

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-9
DEFAULT_BUDGET = 100_000


@dataclass
class TraceStep:
    """An improving evaluation."""
    evaluation: int
    value: float
    params: Dict[str, float]


@dataclass
class SearchResult:
    """Best point found by a search, with the improving steps that led to it."""
    objective: str
    method: str
    best_value: float
    best_params: Dict[str, float]
    evaluations: int
    trace: List[TraceStep] = field(default_factory=list)
    converged: bool = True
    final_step: Optional[float] = None
    grid: List[dict] = field(default_factory=list)
    """Every grid point with its value, kept on request for plotting."""

    def as_dict(self) -> dict:
        return asdict(self)


def _resolve(objective: Union[str, Objective]) -> tuple:
    if isinstance(objective, str):
        return objective, get_objective(objective)
    return getattr(objective, "__name__", "custom"), objective


def _evaluate(space: SearchSpace, objective: Objective, params: Dict[str, float]) -> float:
    return float(objective(space.scenario(params)))


def grid_sweep(
    space: SearchSpace,
    objective: Union[str, Objective],
    resolution: int,
    keep_grid: bool = False,
) -> SearchResult:
    """Evaluate ``objective`` on a regular grid of ``resolution`` points per free
    parameter and return the best point. With ``keep_grid`` every evaluated point is
    stored in `SearchResult.grid`."""
    if resolution < 2:
        raise ValueError(f"Resolution must be at least 2, got {resolution}")
    space.check_nonempty()
    name, function = _resolve(objective)

    start_time = time.perf_counter()
    grids = [space.grid(param, resolution) for param in space.names]
    best_value, best_params, trace, grid = np.inf, None, [], []
    evaluations = 0
    for values in itertools.product(*grids):
        params = space.params(values)
        value = _evaluate(space, function, params)
        evaluations += 1
        if keep_grid:
            grid.append({**dict(zip(space.names, values)), "value": value})
        if value < best_value:
            best_value, best_params = value, params
            trace.append(TraceStep(evaluations, value, params))

    end_time = time.perf_counter()
    logger.info(
        f"Grid sweep of {name} with {evaluations} points took "
        f"{end_time - start_time:.2f} seconds, best value {best_value:.12g}"
    )
    return SearchResult(
        objective=name,
        method="grid",
        best_value=best_value,
        best_params=best_params,
        evaluations=evaluations,
        trace=trace,
        grid=grid,
    )


def refine(
    space: SearchSpace,
    objective: Union[str, Objective],
    start: Dict[str, float],
    step: float = 0.1,
    tol: float = DEFAULT_TOL,
    budget: int = DEFAULT_BUDGET,
) -> SearchResult:
    """Pattern search from ``start`` until the step drops below ``tol`` or ``budget``
    evaluations are used. An exhausted budget flags the result as unconverged."""
    space.check_nonempty()
    name, function = _resolve(objective)
    if not space.contains(start):
        raise ValueError(f"Start point {start} lies outside the search space")

    start_time = time.perf_counter()
    current = [float(start[param]) for param in space.names]
    best_params = space.params(current)
    best_value = _evaluate(space, function, best_params)
    evaluations = 1
    trace = [TraceStep(evaluations, best_value, best_params)]

    while step >= tol and evaluations < budget:
        trial_best, trial_values = best_value, None
        for index, param in enumerate(space.names):
            for direction in (1., -1.):
                if evaluations >= budget:
                    break
                trial = list(current)
                trial[index] = space.project(param, current[index] + direction * step)
                value = _evaluate(space, function, space.params(trial))
                evaluations += 1
                if value < trial_best:
                    trial_best, trial_values = value, trial

        if trial_values is None:
            step /= 2.
            continue

        current = trial_values
        best_value, best_params = trial_best, space.params(current)
        trace.append(TraceStep(evaluations, best_value, best_params))

    converged = step < tol
    end_time = time.perf_counter()
    if not converged:
        logger.warning(
            f"Refinement of {name} exhausted its budget of {budget} evaluations "
            f"at step {step:.3e}"
        )
    logger.info(
        f"Refinement of {name} took {end_time - start_time:.2f} seconds, "
        f"best value {best_value:.12g}"
    )
    return SearchResult(
        objective=name,
        method="refine",
        best_value=best_value,
        best_params=best_params,
        evaluations=evaluations,
        trace=trace,
        converged=converged,
        final_step=step,
    )


def sweep_and_refine(
    space: SearchSpace,
    objective: Union[str, Objective],
    resolution: int,
    step: Optional[float] = None,
    tol: float = DEFAULT_TOL,
    budget: int = DEFAULT_BUDGET,
    keep_grid: bool = False,
) -> SearchResult:
    """`grid_sweep` followed by `refine` from the best grid point, starting with
    the grid spacing of the widest free parameter as the step. The refined result
    carries the evaluations and the grid of both stages."""
    coarse = grid_sweep(space, objective, resolution, keep_grid)
    if step is None:
        step = max(high - low for low, high in space.free.values()) / resolution
    fine = refine(space, objective, coarse.best_params, step, tol, budget)
    fine.evaluations += coarse.evaluations
    fine.grid = coarse.grid
    return fine


def revalidate(
    result: SearchResult,
    space: SearchSpace,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> float:
    """Re-evaluate the reported optimum from scratch and return the residual.

    Raises an `IdentityViolationError` if the fresh value differs from the reported
    one by more than the identity tolerance.
    """
    function = get_objective(result.objective)
    value = _evaluate(space, function, result.best_params)
    residual = abs(value - result.best_value)
    if residual > tol.identity:
        raise IdentityViolationError(
            f"Optimum of {result.objective} re-evaluates to {value}, "
            f"not {result.best_value}"
        )
    return residual
