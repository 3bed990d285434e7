"""Revised simplex for bounded-variable linear programs.

Solves min c'x subject to row constraints (=, <=, >=) and box bounds,
returning row duals and reduced costs read from the final basis. The
implementation works on sparse column data, refactorizes the basis with a
dense LU each iteration (this solver targets desk-scale programs; large
rolling-horizon runs use the HiGHS backend), uses Dantzig pricing with
ties broken by lowest column index, and falls back to Bland's rule when
the objective stalls, which guarantees termination.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg
import scipy.sparse as sp

_RC_TOL = 1e-9
_FEAS_TOL = 1e-9
_PIVOT_TOL = 1e-10
_STALL_LIMIT = 50


class SimplexError(RuntimeError):
    """Internal solver failure (iteration limit, singular basis)."""


class _Exhausted(Exception):
    pass


def solve_bounded(
    c: np.ndarray,
    a_matrix: sp.spmatrix,
    senses: np.ndarray,
    rhs: np.ndarray,
    lower: np.ndarray,
    upper: np.ndarray,
    max_iterations: int = 50_000,
    tolerance: float = _RC_TOL,
):
    """Two-phase revised simplex.

    Returns ``(status, x, duals, reduced_costs, objective)`` where status is
    one of ``optimal``, ``infeasible``, ``unbounded``. Duals follow the
    sensitivity convention d(objective)/d(rhs); reduced costs are c - A'y.
    """
    m, n = a_matrix.shape
    c = np.asarray(c, dtype=float)
    rhs = np.asarray(rhs, dtype=float)

    # Standard form: append one slack per row. Equality slacks are fixed at 0.
    slack_lo = np.zeros(m)
    slack_hi = np.zeros(m)
    for i, s in enumerate(senses):
        if s == "L":
            slack_hi[i] = np.inf
        elif s == "G":
            slack_lo[i] = -np.inf
        elif s != "E":
            raise ValueError(f"unknown row sense {s!r}")

    full_a = sp.hstack([sp.csc_matrix(a_matrix), sp.eye(m, format="csc")], format="csc")
    lo = np.concatenate([lower, slack_lo])
    hi = np.concatenate([upper, slack_hi])
    cost2 = np.concatenate([c, np.zeros(m)])

    state = _State(full_a, lo, hi, rhs, n_structural=n)
    state.rc_tol = max(tolerance, 1e-12)
    phase1_needed = state.crash_basis()

    if phase1_needed:
        status = state.run(state.phase1_cost(), max_iterations)
        if status == "unbounded":  # cannot happen: phase-1 objective >= 0
            raise SimplexError("phase 1 reported unbounded")
        if state.objective(state.phase1_cost()) > 1e-7 * max(1.0, np.abs(rhs).sum()):
            return "infeasible", None, None, None, None
        state.drop_artificials()

    status = state.run(np.concatenate([cost2, np.zeros(state.n_art)]), max_iterations)
    if status == "unbounded":
        return "unbounded", None, None, None, None

    x = state.x[:n].copy()
    cost_full = np.concatenate([cost2, np.zeros(state.n_art)])
    y = state.duals(cost_full)
    rc = c - a_matrix.T.dot(y)
    return "optimal", x, y, rc, float(c @ x)


class _State:
    """Mutable simplex state over the augmented (structural+slack+artificial) LP."""

    def __init__(self, full_a, lo, hi, rhs, n_structural):
        self.a = full_a  # csc, structural + slack columns
        self.lo = lo
        self.hi = hi
        self.rhs = rhs
        self.n_struct = n_structural
        self.m = full_a.shape[0]
        self.n_total = full_a.shape[1]
        self.n_art = 0
        self.art_sign = np.zeros(0)
        self.rc_tol = _RC_TOL
        self.basis = np.zeros(self.m, dtype=int)
        self.x = np.zeros(self.n_total)
        self.nonbasic_at_upper = np.zeros(self.n_total, dtype=bool)
        self.in_basis = np.zeros(self.n_total, dtype=bool)

    # -- setup -----------------------------------------------------------

    def crash_basis(self) -> bool:
        """Start from the slack basis; add artificials where slacks cannot
        absorb the residual. Returns True when artificials were needed."""
        n, m = self.n_total, self.m
        for j in range(n):
            if np.isfinite(self.lo[j]):
                self.x[j] = self.lo[j]
            elif np.isfinite(self.hi[j]):
                self.x[j] = self.hi[j]
                self.nonbasic_at_upper[j] = True
            else:
                self.x[j] = 0.0

        resid = self.rhs - self.a[:, : self.n_struct] @ self.x[: self.n_struct]
        art_rows, art_signs, art_values = [], [], []
        for i in range(m):
            slack = self.n_struct + i
            if self.lo[slack] - _FEAS_TOL <= resid[i] <= self.hi[slack] + _FEAS_TOL:
                self.basis[i] = slack
                self.x[slack] = resid[i]
                self.in_basis[slack] = True
            else:
                # Slack pinned at the bound nearest the residual; artificial
                # covers the remainder with its sign folded into the column.
                pinned = float(np.clip(resid[i], self.lo[slack], self.hi[slack]))
                self.x[slack] = pinned
                self.nonbasic_at_upper[slack] = pinned == self.hi[slack] and np.isfinite(
                    self.hi[slack]
                )
                leftover = resid[i] - pinned
                art_rows.append(i)
                art_signs.append(1.0 if leftover >= 0 else -1.0)
                art_values.append(abs(leftover))
        if not art_rows:
            return False

        k = len(art_rows)
        signs = np.array(art_signs)
        art = sp.csc_matrix(
            (signs, (np.array(art_rows), np.arange(k))), shape=(self.m, k)
        )
        self.a = sp.hstack([self.a, art], format="csc")
        self.n_art = k
        self.art_sign = signs
        self.lo = np.concatenate([self.lo, np.zeros(k)])
        self.hi = np.concatenate([self.hi, np.full(k, np.inf)])
        self.x = np.concatenate([self.x, np.array(art_values)])
        self.nonbasic_at_upper = np.concatenate(
            [self.nonbasic_at_upper, np.zeros(k, dtype=bool)]
        )
        self.in_basis = np.concatenate([self.in_basis, np.zeros(k, dtype=bool)])
        for pos, row in enumerate(art_rows):
            col = self.n_total + pos
            self.basis[row] = col
            self.in_basis[col] = True
        self.n_total += k
        return True

    def phase1_cost(self) -> np.ndarray:
        cost = np.zeros(self.n_total)
        cost[self.n_total - self.n_art :] = 1.0
        return cost

    def drop_artificials(self) -> None:
        """Pivot leftover zero-valued artificials out of the basis; pin every
        artificial to zero so phase 2 cannot reuse them."""
        art_start = self.n_total - self.n_art
        for i in range(self.m):
            col = self.basis[i]
            if col < art_start:
                continue
            binv = self._factor()
            row = np.zeros(self.m)
            row[i] = 1.0
            btrow = scipy.linalg.lu_solve(binv, row, trans=1)
            replacement = -1
            for j in range(art_start):
                if self.in_basis[j] or self.lo[j] == self.hi[j]:
                    continue
                piv = btrow @ self.a[:, [j]].toarray().ravel()
                if abs(piv) > 1e-8:
                    replacement = j
                    break
            if replacement >= 0:
                self.in_basis[col] = False
                self.nonbasic_at_upper[col] = False
                self.basis[i] = replacement
                self.in_basis[replacement] = True
                # Degenerate swap: the entering column keeps its bound value.
        self.lo[art_start:] = 0.0
        self.hi[art_start:] = 0.0

    # -- core iteration ----------------------------------------------------

    def _factor(self):
        basis_mat = self.a[:, self.basis].toarray()
        return scipy.linalg.lu_factor(basis_mat)

    def objective(self, cost) -> float:
        return float(cost @ self.x)

    def duals(self, cost) -> np.ndarray:
        binv = self._factor()
        return scipy.linalg.lu_solve(binv, cost[self.basis], trans=1)

    def _refresh_basic_values(self, binv) -> None:
        # Basic values drift under incremental pivot updates; recompute them
        # exactly from the factored basis once per iteration.
        x_nb = self.x.copy()
        x_nb[self.basis] = 0.0
        resid = self.rhs - self.a @ x_nb
        self.x[self.basis] = scipy.linalg.lu_solve(binv, resid)

    def run(self, cost, max_iterations) -> str:
        stall = 0
        last_obj = self.objective(cost)
        for _ in range(max_iterations):
            binv = self._factor()
            self._refresh_basic_values(binv)
            y = scipy.linalg.lu_solve(binv, cost[self.basis], trans=1)
            entering, direction = self._price(cost, y, bland=stall >= _STALL_LIMIT)
            if entering < 0:
                return "optimal"
            w = scipy.linalg.lu_solve(binv, self.a[:, [entering]].toarray().ravel())
            try:
                step, leave_pos, leave_to_upper = self._ratio(entering, direction, w)
            except _Exhausted:
                return "unbounded"
            self._pivot(entering, direction, w, step, leave_pos, leave_to_upper)
            obj = self.objective(cost)
            if obj < last_obj - 1e-12 * (1.0 + abs(last_obj)):
                stall = 0
            else:
                stall += 1
            last_obj = obj
        raise SimplexError(f"iteration limit {max_iterations} reached")

    def _price(self, cost, y, bland: bool):
        rc = cost - self.a.T.dot(y)
        free = ~np.isfinite(self.lo) & ~np.isfinite(self.hi)
        fixed = self.lo == self.hi
        can_up = ~self.in_basis & ~fixed & (
            (~self.nonbasic_at_upper & (rc < -self.rc_tol)) | (free & (rc < -self.rc_tol))
        )
        can_down = ~self.in_basis & ~fixed & (
            (self.nonbasic_at_upper & (rc > self.rc_tol)) | (free & (rc > self.rc_tol))
        )
        eligible = can_up | can_down
        if not eligible.any():
            return -1, 0
        idx = np.flatnonzero(eligible)
        if bland:
            j = int(idx[0])
        else:
            j = int(idx[np.argmax(np.abs(rc[idx]))])
            best = np.abs(rc[j])
            tied = idx[np.abs(rc[idx]) >= best - 1e-15]
            j = int(tied.min())
        return j, (1 if can_up[j] else -1)

    def _ratio(self, entering, direction, w):
        # Entering moves by direction * t; basic values move by -direction * t * w.
        own_cap = np.inf
        if direction > 0 and np.isfinite(self.hi[entering]):
            own_cap = self.hi[entering] - self.x[entering]
        elif direction < 0 and np.isfinite(self.lo[entering]):
            own_cap = self.x[entering] - self.lo[entering]

        g = direction * w
        xb = self.x[self.basis]
        lob = self.lo[self.basis]
        hib = self.hi[self.basis]
        best_t = own_cap
        leave_pos = -1
        leave_to_upper = False
        for i in range(self.m):
            if g[i] > _PIVOT_TOL and np.isfinite(lob[i]):
                t = (xb[i] - lob[i]) / g[i]
                hits_upper = False
            elif g[i] < -_PIVOT_TOL and np.isfinite(hib[i]):
                t = (xb[i] - hib[i]) / g[i]
                hits_upper = True
            else:
                continue
            t = max(t, 0.0)
            if t < best_t - 1e-12 or (
                t <= best_t + 1e-12
                and leave_pos >= 0
                and self.basis[i] < self.basis[leave_pos]
            ):
                best_t = t
                leave_pos = i
                leave_to_upper = hits_upper
        if not np.isfinite(best_t):
            raise _Exhausted
        return best_t, leave_pos, leave_to_upper

    def _pivot(self, entering, direction, w, step, leave_pos, leave_to_upper):
        self.x[self.basis] -= direction * step * w
        self.x[entering] += direction * step
        if leave_pos < 0:
            # Bound flip: the entering variable ran to its opposite bound.
            self.nonbasic_at_upper[entering] = direction > 0
            return
        leaving = self.basis[leave_pos]
        self.in_basis[leaving] = False
        self.nonbasic_at_upper[leaving] = leave_to_upper
        self.x[leaving] = self.hi[leaving] if leave_to_upper else self.lo[leaving]
        self.basis[leave_pos] = entering
        self.in_basis[entering] = True
        self.nonbasic_at_upper[entering] = False
