"""Linear program container, solver backends, and LP-file export.

Two interchangeable backends sit behind :func:`solve_lp`: the bundled
revised simplex (``method="simplex"``, exact duals from the final basis,
deterministic) and HiGHS via :mod:`scipy.optimize.linprog`
(``method="highs"``, the default for production-size rolling-horizon runs).
Both return the same :class:`LpSolution` shape with row duals following the
d(objective)/d(rhs) sensitivity convention.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.optimize
import scipy.sparse as sp

from . import simplex


@dataclass
class LinearProgram:
    """min c'x over rows ``a_matrix x (sense) rhs`` and bounds ``lower <= x <= upper``.

    ``col_names`` and ``row_names`` map every column/row to its model
    entity and hour (for example ``p:12:3`` or ``bal:4:0``).
    ``objective_offset`` carries constant objective terms so reported
    objectives match the modeled cost expression exactly.
    """

    c: np.ndarray
    a_matrix: sp.csr_matrix
    senses: np.ndarray  # 'E' | 'L' | 'G' per row
    rhs: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    col_names: list[str] = field(default_factory=list)
    row_names: list[str] = field(default_factory=list)
    objective_offset: float = 0.0

    @property
    def n_rows(self) -> int:
        return self.a_matrix.shape[0]

    @property
    def n_cols(self) -> int:
        return self.a_matrix.shape[1]

    def check(self) -> "LinearProgram":
        m, n = self.a_matrix.shape
        problems = []
        if len(self.c) != n:
            problems.append(f"objective length {len(self.c)} != {n} columns")
        if len(self.rhs) != m or len(self.senses) != m:
            problems.append("rhs/senses length mismatch with rows")
        if len(self.lower) != n or len(self.upper) != n:
            problems.append("bounds length mismatch with columns")
        if self.col_names and (
            len(self.col_names) != n or len(set(self.col_names)) != n
        ):
            problems.append("column names missing or not unique")
        if self.row_names and (
            len(self.row_names) != m or len(set(self.row_names)) != m
        ):
            problems.append("row names missing or not unique")
        if problems:
            raise ValueError("; ".join(problems))
        return self


@dataclass
class LpSolution:
    status: str  # optimal | infeasible | unbounded
    x: np.ndarray | None
    duals: np.ndarray | None  # per row, d(objective)/d(rhs)
    reduced_costs: np.ndarray | None  # per column, c - A'y
    objective: float | None

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


def solve_lp(
    lp: LinearProgram, method: str = "highs", tolerance: float = 1e-9
) -> LpSolution:
    """Solve ``lp``; deterministic for identical input on either backend."""
    lp.check()
    if method == "simplex":
        status, x, y, rc, obj = simplex.solve_bounded(
            lp.c, lp.a_matrix, lp.senses, lp.rhs, lp.lower, lp.upper,
            tolerance=tolerance,
        )
    elif method == "highs":
        status, x, y, rc, obj = _solve_highs(lp, tolerance)
    else:
        raise ValueError(f"unknown LP method {method!r}")
    if status != "optimal":
        return LpSolution(status, None, None, None, None)
    return LpSolution(status, x, y, rc, obj + lp.objective_offset)


def _solve_highs(lp: LinearProgram, tolerance: float = 1e-9):
    senses = np.asarray(lp.senses)
    eq_mask = senses == "E"
    le_mask = senses == "L"
    ge_mask = senses == "G"
    a = lp.a_matrix.tocsr()

    a_eq = a[eq_mask] if eq_mask.any() else None
    b_eq = lp.rhs[eq_mask] if eq_mask.any() else None
    ub_parts, ub_rhs = [], []
    if le_mask.any():
        ub_parts.append(a[le_mask])
        ub_rhs.append(lp.rhs[le_mask])
    if ge_mask.any():
        ub_parts.append(-a[ge_mask])
        ub_rhs.append(-lp.rhs[ge_mask])
    a_ub = sp.vstack(ub_parts, format="csr") if ub_parts else None
    b_ub = np.concatenate(ub_rhs) if ub_parts else None

    res = scipy.optimize.linprog(
        lp.c,
        A_ub=a_ub,
        b_ub=b_ub,
        A_eq=a_eq,
        b_eq=b_eq,
        bounds=np.column_stack([lp.lower, lp.upper]),
        method="highs",
        options={
            "primal_feasibility_tolerance": max(tolerance, 1e-10),
            "dual_feasibility_tolerance": max(tolerance, 1e-10),
        },
    )
    if res.status == 2:
        return "infeasible", None, None, None, None
    if res.status == 3:
        return "unbounded", None, None, None, None
    if not res.success:
        raise RuntimeError(f"HiGHS failed: {res.message}")

    duals = np.zeros(len(lp.rhs))
    if eq_mask.any():
        duals[eq_mask] = res.eqlin.marginals
    if le_mask.any() or ge_mask.any():
        ineq = res.ineqlin.marginals
        k = 0
        if le_mask.any():
            n_le = int(le_mask.sum())
            duals[le_mask] = ineq[:n_le]
            k = n_le
        if ge_mask.any():
            # Rows were negated for linprog; flip the sensitivity back.
            duals[ge_mask] = -ineq[k:]
    rc = res.lower.marginals + res.upper.marginals
    return "optimal", res.x, duals, rc, float(res.fun)


def verify_solution(lp: LinearProgram, sol: LpSolution, tol: float = 1e-6) -> dict:
    """Feasibility residuals and duality gap for an optimal solution.

    Used by tests and the simulation engine's self-checks; returns a dict of
    diagnostics rather than raising.
    """
    assert sol.optimal and sol.x is not None
    ax = lp.a_matrix @ sol.x
    res_eq = 0.0
    res_ineq = 0.0
    for i, s in enumerate(lp.senses):
        if s == "E":
            res_eq = max(res_eq, abs(ax[i] - lp.rhs[i]))
        elif s == "L":
            res_ineq = max(res_ineq, ax[i] - lp.rhs[i])
        else:
            res_ineq = max(res_ineq, lp.rhs[i] - ax[i])
    res_bounds = max(
        float(np.max(lp.lower - sol.x, initial=0.0)),
        float(np.max(sol.x - lp.upper, initial=0.0)),
    )
    # Dual objective: b'y plus bound terms picked by reduced-cost sign.
    rc = sol.reduced_costs
    pos = np.clip(rc, 0.0, None)
    neg = np.clip(rc, None, 0.0)
    lower_term = np.where(pos > 0, np.where(np.isfinite(lp.lower), lp.lower, 0.0) * pos, 0.0)
    upper_term = np.where(neg < 0, np.where(np.isfinite(lp.upper), lp.upper, 0.0) * neg, 0.0)
    dual_obj = float(lp.rhs @ sol.duals + lower_term.sum() + upper_term.sum())
    primal_obj = float(lp.c @ sol.x)
    gap = abs(primal_obj - dual_obj) / max(1.0, abs(primal_obj))
    return {
        "residual_eq": float(res_eq),
        "residual_ineq": float(res_ineq),
        "residual_bounds": res_bounds,
        "duality_gap": gap,
        "feasible": res_eq <= tol and res_ineq <= tol and res_bounds <= tol,
    }


def _lp_name(name: str) -> str:
    return name.replace(":", "_").replace(" ", "_")


def write_lp_file(lp: LinearProgram, path: str | Path) -> None:
    """Export in the plain-text CPLEX LP interchange format."""
    path = Path(path)
    cols = lp.col_names or [f"x{j}" for j in range(lp.n_cols)]
    rows = lp.row_names or [f"r{i}" for i in range(lp.n_rows)]
    cols = [_lp_name(c) for c in cols]
    rows = [_lp_name(r) for r in rows]
    a = lp.a_matrix.tocsr()
    lines = ["Minimize", " obj:"]
    terms = [
        f" {'+' if cj >= 0 else '-'} {abs(cj):.17g} {cols[j]}"
        for j, cj in enumerate(lp.c)
        if cj != 0.0
    ]
    lines[-1] += "".join(terms) if terms else " 0 " + cols[0]
    lines.append("Subject To")
    op = {"E": "=", "L": "<=", "G": ">="}
    for i in range(lp.n_rows):
        start, end = a.indptr[i], a.indptr[i + 1]
        body = "".join(
            f" {'+' if v >= 0 else '-'} {abs(v):.17g} {cols[j]}"
            for j, v in zip(a.indices[start:end], a.data[start:end])
        )
        lines.append(f" {rows[i]}:{body} {op[lp.senses[i]]} {lp.rhs[i]:.17g}")
    lines.append("Bounds")
    for j in range(lp.n_cols):
        lo, hi = lp.lower[j], lp.upper[j]
        if not np.isfinite(lo) and not np.isfinite(hi):
            lines.append(f" {cols[j]} free")
        elif np.isfinite(lo) and np.isfinite(hi):
            lines.append(f" {lo:.17g} <= {cols[j]} <= {hi:.17g}")
        elif np.isfinite(lo):
            lines.append(f" {cols[j]} >= {lo:.17g}")
        else:
            lines.append(f" {cols[j]} <= {hi:.17g}")
    lines.append("End")
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text("\n".join(lines) + "\n")
    tmp.replace(path)
