"""Certified box-constrained global minimization.

Two engines share one outcome type:

* ``minimize`` -- deterministic best-first interval branch-and-bound.  Nodes
  are pruned when a constraint is interval-certified violated or when the
  objective's interval lower bound cannot beat the incumbent by more than
  ``tol_opt``.  Incumbents come from box midpoints and corners that pass the
  ``tol_feas`` feasibility check.

* ``grid_minimize`` -- brute-force evaluation on a dense tensor grid,
  kept deliberately independent of the interval machinery so it can serve
  as a cross-checking oracle.
"""
from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .domains import BoxDomain
from .expr import Expr, Interval, evaluate, evaluate_array, interval_eval


class NodeBudgetExceeded(RuntimeError):
    """Branch-and-bound exhausted its node budget before certifying a result."""


@dataclass(frozen=True)
class ConstraintSpec:
    """Inequality ``expr <= 0`` (sense "le") or ``expr >= 0`` (sense "ge")."""

    expr: Expr
    sense: str = "le"

    def __post_init__(self):
        if self.sense not in ("le", "ge"):
            raise ValueError(f"sense must be 'le' or 'ge', got {self.sense!r}")

    def satisfied(self, value: float, tol_feas: float) -> bool:
        if self.sense == "le":
            return value <= tol_feas
        return value >= -tol_feas

    def certified_violated(self, iv: Interval, tol_feas: float) -> bool:
        if self.sense == "le":
            return iv.lo > tol_feas
        return iv.hi < -tol_feas


@dataclass(frozen=True)
class MinimizeOutcome:
    status: str  # "optimal" | "infeasible"
    minimizer: Optional[dict[str, float]] = None
    value: Optional[float] = None
    value_bounds: Optional[Interval] = None

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


INFEASIBLE = MinimizeOutcome("infeasible")


def _point_feasible(constraints: Sequence[ConstraintSpec],
                    point: Mapping[str, float], tol_feas: float) -> bool:
    return all(c.satisfied(evaluate(c.expr, point), tol_feas) for c in constraints)


def minimize(objective: Expr,
             constraints: Sequence[ConstraintSpec],
             box: BoxDomain,
             tol_opt: float = 1e-6,
             tol_feas: float = 1e-9,
             node_budget: int = 1_000_000,
             min_width: float = 1e-9) -> MinimizeOutcome:
    """Globally minimize ``objective`` over ``box`` subject to ``constraints``.

    Returns the first certified incumbent achieving the final value; the
    search order is deterministic, so repeated calls give identical outcomes.
    """
    if tol_opt <= 0.0:
        raise ValueError("tol_opt must be positive")
    if tol_feas < 0.0:
        raise ValueError("tol_feas must be nonnegative")
    constraints = tuple(constraints)

    heap: list = []
    counter = itertools.count()
    best_val = float("inf")
    best_pt: Optional[dict[str, float]] = None
    retired_lb = float("inf")   # lbs of min-width nodes kept as feasible
    pruned_lb = float("inf")    # lbs of nodes pruned against the incumbent

    def consider(point: dict[str, float]):
        nonlocal best_val, best_pt
        if not _point_feasible(constraints, point, tol_feas):
            return
        v = evaluate(objective, point)
        if v < best_val:
            best_val = v
            best_pt = dict(point)

    def push(b: BoxDomain):
        nonlocal retired_lb, pruned_lb
        for c in constraints:
            if c.certified_violated(interval_eval(c.expr, b), tol_feas):
                return
        mid = b.midpoint()
        consider(mid)
        for corner in b.corners():
            consider(corner)
        lb = interval_eval(objective, b).lo
        if b.max_width <= min_width:
            # undecided node at minimum width: keep it (through its midpoint)
            # only if the midpoint passes the feasibility check
            if _point_feasible(constraints, mid, tol_feas):
                retired_lb = min(retired_lb, lb)
            return
        if best_pt is not None and lb > best_val - tol_opt:
            pruned_lb = min(pruned_lb, lb)
            return
        heapq.heappush(heap, (lb, next(counter), b))

    push(box)
    frontier_lb = float("inf")
    pops = 0
    while heap:
        lb, _, b = heapq.heappop(heap)
        if best_pt is not None and lb >= best_val - tol_opt:
            frontier_lb = lb  # minimal lb among all remaining nodes
            break
        pops += 1
        if pops > node_budget:
            raise NodeBudgetExceeded(f"node budget {node_budget} exhausted")
        left, right = b.bisect()
        push(left)
        push(right)

    if best_pt is None:
        return INFEASIBLE
    lo = min(frontier_lb, retired_lb, pruned_lb, best_val)
    return MinimizeOutcome("optimal", best_pt, best_val, Interval(lo, best_val))


def grid_minimize(objective: Expr,
                  constraints: Sequence[ConstraintSpec],
                  box: BoxDomain,
                  points_per_axis: int,
                  tol_feas: float = 1e-9) -> MinimizeOutcome:
    """Brute-force minimization over the full tensor grid (endpoints included)."""
    if points_per_axis < 2:
        raise ValueError("points_per_axis must be at least 2")
    axes = [np.linspace(lo, hi, points_per_axis) for _, lo, hi in box.coords]
    grids = np.meshgrid(*axes, indexing="ij")
    env = {name: g for name, g in zip(box.names, grids)}
    shape = grids[0].shape

    vals = np.broadcast_to(np.asarray(evaluate_array(objective, env), dtype=float), shape)
    feas = np.ones(shape, dtype=bool)
    for c in constraints:
        cv = np.broadcast_to(np.asarray(evaluate_array(c.expr, env), dtype=float), shape)
        feas &= (cv <= tol_feas) if c.sense == "le" else (cv >= -tol_feas)
    if not feas.any():
        return INFEASIBLE
    masked = np.where(feas, vals, np.inf)
    idx = np.unravel_index(int(np.argmin(masked)), shape)
    point = {name: float(axes[i][idx[i]]) for i, name in enumerate(box.names)}
    value = float(masked[idx])
    return MinimizeOutcome("optimal", point, value, Interval(value, value))
