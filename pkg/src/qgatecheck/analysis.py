"""Bounds on quantum figures of merit from two complementary classical truth tables.

Everything here works on classical data only: a Z-basis table, an X-basis table and the
flip-pattern grid of diagonal process-matrix elements they constrain. The grid has rows
indexed by the Z-basis flip mask and columns by the X-basis flip mask; observed error
budgets fix its row and column sums, nothing else.
"""
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, NamedTuple, Optional, Set, Tuple

import numpy as np

from . import _flow
from .gates import (BasisKind, basis_family, flip_pattern, pattern_mask, pattern_symbol,
                    preserved_errors)

# Published tables quote probabilities to three decimals, so a row of four entries may
# miss unit sum by up to 4 * 0.0005. Count tables are normalized exactly.
ROW_SUM_TOL = 2e-3
MARGINAL_TOL = 2e-3


class InfeasibleMarginals(ValueError):
    pass


def _n_qubits(d: int) -> int:
    n = int(round(np.log2(d)))
    if 2 ** n != d:
        raise ValueError(f"table dimension {d} is not a power of two")
    return n


@dataclass(frozen=True, eq=False)
class TruthTable:
    """
    Output probabilities of a classical test: ``probs[k, j]`` is the probability of
    reading output member ``j`` for input ``k``; ``permutation[k]`` is the correct output.

    Probability entries are kept as given. ``counts`` is set when the table came from
    finite statistics, in which case ``probs`` is its row-normalized form.
    """
    basis: BasisKind
    probs: np.ndarray
    permutation: Tuple[int, ...] = None
    counts: Optional[np.ndarray] = None
    row_tol: float = ROW_SUM_TOL

    def __post_init__(self):
        object.__setattr__(self, "basis", BasisKind.parse(self.basis))
        probs = np.array(self.probs, dtype=float)
        if probs.ndim != 2 or probs.shape[0] != probs.shape[1]:
            raise ValueError(f"truth table must be square, got shape {probs.shape}")
        if not np.all(np.isfinite(probs)):
            raise ValueError("truth table has non-finite entries")
        if np.any(probs < 0):
            raise ValueError("truth table has negative entries")
        sums = probs.sum(axis=1)
        bad = np.nonzero(np.abs(sums - 1) > self.row_tol)[0]
        if bad.size:
            raise ValueError(f"row {int(bad[0])} sums to {sums[bad[0]]:.6g}, not 1")
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)

        perm = self.permutation
        if perm is None:
            perm = basis_family(self.basis).permutation
        perm = tuple(int(p) for p in perm)
        if sorted(perm) != list(range(len(probs))):
            raise ValueError(f"{perm} is not a permutation of 0..{len(probs) - 1}")
        object.__setattr__(self, "permutation", perm)
        _n_qubits(len(probs))

    @classmethod
    def from_counts(cls, basis, counts, permutation=None) -> "TruthTable":
        counts = np.array(counts)
        if not np.issubdtype(counts.dtype, np.integer):
            if np.any(counts != np.round(counts)):
                raise ValueError("counts must be integers")
            counts = counts.astype(np.int64)
        if np.any(counts < 0):
            raise ValueError("counts must be nonnegative")
        totals = counts.sum(axis=1)
        if np.any(totals == 0):
            raise ValueError("every row needs at least one count")
        counts.setflags(write=False)
        return cls(basis, counts / totals[:, None], permutation, counts=counts, row_tol=1e-6)

    @property
    def d(self) -> int:
        return self.probs.shape[0]

    @property
    def n_qubits(self) -> int:
        return _n_qubits(self.d)

    @property
    def provenance(self) -> str:
        return "exact" if self.counts is None else "counts"

    @property
    def shots(self) -> Optional[Tuple[int, ...]]:
        if self.counts is None:
            return None
        return tuple(int(s) for s in self.counts.sum(axis=1))


def classical_fidelity(table: TruthTable) -> float:
    """Probability of the correct output averaged over all inputs of the table."""
    k = np.arange(table.d)
    return float(np.mean(table.probs[k, list(table.permutation)]))


@dataclass(frozen=True, eq=False)
class ErrorBudget:
    """Distribution of output flip patterns, ``eta[mask]``, observed in one basis."""
    basis: BasisKind
    eta: np.ndarray

    @property
    def n_qubits(self) -> int:
        return _n_qubits(len(self.eta))

    def __getitem__(self, symbol) -> float:
        return float(self.eta[pattern_mask(symbol, self.n_qubits)])

    def as_dict(self) -> Dict[str, float]:
        n = self.n_qubits
        masks = _mask_order(n)
        return {pattern_symbol(m, n): float(self.eta[m]) for m in masks}


def _mask_order(n_qubits: int):
    if n_qubits == 2:
        return [pattern_mask(s) for s in ("0", "C", "T", "B")]
    return list(range(2 ** n_qubits))


def error_budget(table: TruthTable) -> ErrorBudget:
    """``eta(p) = (1/d) sum_k probs[k, perm(k) XOR p]`` for every flip mask ``p``."""
    d = table.d
    k = np.arange(d)
    perm = np.array(table.permutation)
    eta = np.array([np.mean(table.probs[k, perm ^ p]) for p in range(d)])
    return ErrorBudget(table.basis, eta)


class FidelityInterval(NamedTuple):
    lo: float
    hi: float
    lo_unclamped: float


def fidelity_interval(f_z: float, f_x: float) -> FidelityInterval:
    """Range of process fidelities compatible with two complementary classical fidelities."""
    for f in (f_z, f_x):
        if not 0 <= f <= 1 + 1e-12:
            raise ValueError(f"classical fidelity {f} outside [0, 1]")
    raw = f_z + f_x - 1
    return FidelityInterval(max(0.0, raw), min(f_z, f_x), raw)


def capability_bound(fidelity: float, b: float) -> float:
    """
    Witness lower bound on entanglement capability.

    :param fidelity: minimal probability of producing the intended maximally entangled output.
    :param b: largest overlap any separable state can have with that output (1/M for M x M).
    """
    if not 0 < b < 1:
        raise ValueError(f"witness parameter b={b} must lie strictly between 0 and 1")
    return (fidelity - b) / (1 - b)


def discrimination_bound(fidelity: float) -> float:
    return 2 * fidelity - 1


@dataclass(frozen=True, eq=False)
class MarginalGrid:
    """
    Joint distribution of (Z flip, X flip) constrained only by its marginals.

    ``rows[j_z]`` and ``cols[j_x]`` are indexed by flip mask.
    """
    rows: np.ndarray
    cols: np.ndarray
    tol: float = MARGINAL_TOL

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=float)
        cols = np.asarray(self.cols, dtype=float)
        if rows.ndim != 1 or rows.shape != cols.shape:
            raise ValueError("row and column marginals must be vectors of equal length")
        _n_qubits(len(rows))
        if np.any(rows < -1e-12) or np.any(cols < -1e-12):
            raise ValueError("marginals must be nonnegative")
        for name, m in (("row", rows), ("column", cols)):
            if abs(m.sum() - 1) > self.tol:
                raise InfeasibleMarginals(f"{name} marginals sum to {m.sum():.9g}, not 1")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)

    @classmethod
    def from_budgets(cls, eta_z: ErrorBudget, eta_x: ErrorBudget) -> "MarginalGrid":
        return cls(eta_z.eta, eta_x.eta)

    @property
    def size(self) -> int:
        return len(self.rows)

    @property
    def n_qubits(self) -> int:
        return _n_qubits(self.size)

    def unit_marginals(self) -> Tuple[np.ndarray, np.ndarray]:
        r = np.clip(self.rows, 0, None)
        c = np.clip(self.cols, 0, None)
        return r / r.sum(), c / c.sum()


def _normalize_cells(cells, n_qubits: int) -> FrozenSet[Tuple[int, int]]:
    out = set()
    for cell in cells:
        if isinstance(cell, str) and len(cell) == 2 and n_qubits == 2:
            cell = (cell[0], cell[1])
        jz, jx = cell
        out.add((pattern_mask(jz, n_qubits), pattern_mask(jx, n_qubits)))
    if not out:
        raise ValueError("cell set must be nonempty")
    return frozenset(out)


def _product_factors(cells: FrozenSet[Tuple[int, int]]):
    rows = {r for r, _ in cells}
    cols = {c for _, c in cells}
    if len(cells) == len(rows) * len(cols):
        return sorted(rows), sorted(cols)
    return None


def _mask(cells, size) -> np.ndarray:
    m = np.zeros((size, size), dtype=bool)
    for r, c in cells:
        m[r, c] = True
    return m


def grid_min_mass(grid: MarginalGrid, cells, method: str = "auto") -> float:
    """
    Least mass any grid with the given marginals can put on ``cells``.

    Cells are (j_z, j_x) pairs given as masks or symbols (``("T", "C")`` or ``"TC"``).
    Product sets R x C use the closed form max(0, rows[R] + cols[C] - 1); anything else
    (or ``method="solver"``) is solved exactly as a max-flow problem on the complement.
    """
    cells = _normalize_cells(cells, grid.n_qubits)
    factors = _product_factors(cells)
    if method == "auto" and factors is not None:
        r, c = factors
        return max(0.0, float(grid.rows[r].sum() + grid.cols[c].sum() - 1))
    if method not in ("auto", "solver"):
        raise ValueError(f"unknown method {method!r}")
    return float(np.sum(grid_witness(grid, cells, "min")[_mask(cells, grid.size)]))


def grid_max_mass(grid: MarginalGrid, cells, method: str = "auto") -> float:
    """Largest mass any grid with the given marginals can put on ``cells``."""
    cells = _normalize_cells(cells, grid.n_qubits)
    factors = _product_factors(cells)
    if method == "auto" and factors is not None:
        r, c = factors
        return float(min(grid.rows[r].sum(), grid.cols[c].sum()))
    if method not in ("auto", "solver"):
        raise ValueError(f"unknown method {method!r}")
    return float(np.sum(grid_witness(grid, cells, "max")[_mask(cells, grid.size)]))


def grid_witness(grid: MarginalGrid, cells, sense: str = "min") -> np.ndarray:
    """
    A feasible grid attaining the min (or max) mass on ``cells``.

    The optimum pushes as much mass as possible onto the complement (for ``min``) or onto
    the cells themselves (for ``max``); the leftover marginals are then filled northwest-
    corner first. Marginals are rescaled to unit total beforehand.
    """
    cells = _normalize_cells(cells, grid.n_qubits)
    inside = _mask(cells, grid.size)
    if sense == "min":
        target = ~inside
    elif sense == "max":
        target = inside
    else:
        raise ValueError(f"sense must be 'min' or 'max', got {sense!r}")
    rows, cols = grid.unit_marginals()
    g = _flow.max_transport(rows, cols, target)
    rest_r = np.clip(rows - g.sum(axis=1), 0, None)
    rest_c = np.clip(cols - g.sum(axis=0), 0, None)
    return g + _flow.northwest_fill(rest_r, rest_c)


class DerivedOperation(NamedTuple):
    input_kind: BasisKind
    output_kind: BasisKind


DERIVED_OPERATIONS = {
    "identity_zx": DerivedOperation(BasisKind.ZX_EIGEN, BasisKind.ZX_EIGEN),
    "entangler": DerivedOperation(BasisKind.XZ_EIGEN, BasisKind.BELL),
    "bell_analyzer": DerivedOperation(BasisKind.BELL, BasisKind.XZ_EIGEN),
}


def derived_cells(kind: str) -> FrozenSet[Tuple[int, int]]:
    """Flip-pattern cells of the errors that leave the outputs of a derived operation intact."""
    if kind not in DERIVED_OPERATIONS:
        raise ValueError(f"unknown derived operation {kind!r}")
    labels = preserved_errors(DERIVED_OPERATIONS[kind].output_kind)
    return frozenset((fp.j_z, fp.j_x) for fp in map(flip_pattern, labels))


def derived_fidelity_bound(kind: str, grid: MarginalGrid) -> float:
    return grid_min_mass(grid, derived_cells(kind))


@dataclass(frozen=True, eq=False)
class FidelityReport:
    f_z: float
    f_x: float
    f_qp_lo: float
    f_qp_lo_unclamped: float
    f_qp_hi: float
    b: float
    c_coarse: float
    c_coarse_raw: float
    d_coarse: float
    d_coarse_raw: float
    f_i_min: float
    f_c_min: float
    f_d_min: float
    c_refined: float
    c_refined_raw: float
    d_refined: float
    d_refined_raw: float
    eta_z: ErrorBudget
    eta_x: ErrorBudget
    min_fqp_grid: np.ndarray
    z_table: Optional[TruthTable] = field(default=None, repr=False)
    x_table: Optional[TruthTable] = field(default=None, repr=False)


def full_report(z_table: TruthTable, x_table: TruthTable, b: float = 0.5) -> FidelityReport:
    if z_table.basis is not BasisKind.Z_PRODUCT:
        raise ValueError(f"Z table has basis {z_table.basis.value!r}")
    if x_table.basis is not BasisKind.X_PRODUCT:
        raise ValueError(f"X table has basis {x_table.basis.value!r}")
    if z_table.d != x_table.d:
        raise ValueError("Z and X tables differ in dimension")

    f_z, f_x = classical_fidelity(z_table), classical_fidelity(x_table)
    lo, hi, lo_raw = fidelity_interval(f_z, f_x)
    eta_z, eta_x = error_budget(z_table), error_budget(x_table)
    grid = MarginalGrid.from_budgets(eta_z, eta_x)

    c_raw = capability_bound(lo_raw, b)
    d_raw = discrimination_bound(lo_raw)
    f_i = derived_fidelity_bound("identity_zx", grid)
    f_c = derived_fidelity_bound("entangler", grid)
    f_d = derived_fidelity_bound("bell_analyzer", grid)
    cr_raw = capability_bound(f_c, b)
    dr_raw = discrimination_bound(f_d)
    return FidelityReport(
        f_z=f_z, f_x=f_x, f_qp_lo=lo, f_qp_lo_unclamped=lo_raw, f_qp_hi=hi, b=b,
        c_coarse=max(0.0, c_raw), c_coarse_raw=c_raw,
        d_coarse=max(0.0, d_raw), d_coarse_raw=d_raw,
        f_i_min=f_i, f_c_min=f_c, f_d_min=f_d,
        c_refined=max(0.0, cr_raw), c_refined_raw=cr_raw,
        d_refined=max(0.0, dr_raw), d_refined_raw=dr_raw,
        eta_z=eta_z, eta_x=eta_x,
        min_fqp_grid=grid_witness(grid, {(0, 0)}, "min"),
        z_table=z_table, x_table=x_table,
    )
