"""Worst-case and best-case mass on a set of flip-grid cells.

The marginals are the two error budgets. The closed form for product sets
is compared with the exact max-flow solver, and a witness grid is printed.
"""
import numpy as np

from qgatecheck import MarginalGrid, error_budget, grid_max_mass, grid_min_mass, grid_witness
from qgatecheck.analysis import derived_cells
from qgatecheck.iofmt import load_fixture

grid = MarginalGrid.from_budgets(error_budget(load_fixture("z")), error_budget(load_fixture("x")))

for name in ("identity_zx", "entangler", "bell_analyzer"):
    cells = derived_cells(name)
    lo = grid_min_mass(grid, cells)
    exact = grid_min_mass(grid, cells, method="solver")
    hi = grid_max_mass(grid, cells)
    print(f"{name:14s} min {lo:.5f} (solver {exact:.5f})  max {hi:.5f}")

np.set_printoptions(precision=4, suppress=True)
print("witness for the minimal entangler fidelity:")
print(grid_witness(grid, derived_cells("entangler"), "min"))
