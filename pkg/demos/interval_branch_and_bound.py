"""The deterministic global solver on its own.

Solves a constrained one-dimensional problem with the interval
branch-and-bound routine and cross-checks the answer on a dense grid.
The branch-and-bound result carries certified value bounds; the grid value
must land inside them (up to mesh error).
"""
from gsiplab import (BoxDomain, ConstraintSpec, grid_minimize, minimize,
                     parse_expression)

objective = parse_expression("(x - 0.3)^2 + 0.1*x")
constraint = ConstraintSpec(parse_expression("0.1 - x"), "le")  # x >= 0.1
box = BoxDomain([("x", -1.0, 1.0)])

out = minimize(objective, [constraint], box, tol_opt=1e-9)
print(f"branch-and-bound: x* = {out.minimizer['x']:.9f}, "
      f"value = {out.value:.9f}")
print(f"certified bounds: [{out.value_bounds.lo:.9f}, "
      f"{out.value_bounds.hi:.9f}]")

oracle = grid_minimize(objective, [constraint], box, 100001)
print(f"dense-grid check: x* = {oracle.minimizer['x']:.9f}, "
      f"value = {oracle.value:.9f}")

infeasible = minimize(objective, [ConstraintSpec(parse_expression("2 + x"), "le")],
                      box)
print(f"\nwith the impossible constraint x <= -2: status = {infeasible.status}")
