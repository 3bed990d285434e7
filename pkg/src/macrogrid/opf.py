"""Rolling-horizon multi-period DC optimal power flow.

The horizon is cut into fixed-length windows (24 hours by default); each
window is one linear program whose hour-0 ramp constraints are anchored to
the final dispatch of the preceding window, so ramp limits bridge the
individual problems. Load shedding carries a large penalty so every window
stays feasible; locational marginal prices are the duals of the nodal
balance rows and branch congestion prices come from the capacity bounds of
the flow variables.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd
import scipy.sparse as sp

from .lp import LinearProgram, LpSolution, solve_lp, write_lp_file
from .model import (
    Fuel,
    Network,
    ProfileSet,
    availability_matrix,
    bus_demand_matrix,
    validate_profiles,
)

MU_TOL = 1e-9


class SimulationError(RuntimeError):
    """Raised when a window LP fails to solve to optimality."""

    def __init__(self, message: str, window_index: int | None = None):
        super().__init__(message)
        self.window_index = window_index


@dataclass(frozen=True)
class WindowOptions:
    """Knobs for one rolling-horizon run."""

    window_hours: int = 24
    shed_penalty: float = 10_000.0  # $/MWh, must exceed every marginal cost
    curtailment_cost: float = 0.0  # $/MWh on spilled solar/wind energy
    lp_tolerance: float = 1e-9
    lp_method: str = "highs"  # "highs" or the bundled "simplex"
    export_lp_dir: str | None = None

    def validate(self, net: Network) -> None:
        if self.window_hours < 1:
            raise ValueError("window_hours must be >= 1")
        max_cost = max((g.marginal_cost for g in net.generators), default=0.0)
        if self.shed_penalty <= max_cost:
            raise ValueError(
                f"shed_penalty {self.shed_penalty} must exceed the highest "
                f"marginal cost ({max_cost})"
            )


class _WindowIndex:
    """Column/row layout of one window LP.

    Columns, entity-major then hour: dispatch p, angles theta, AC flow f,
    DC flow fd, shed s. Rows: nodal balance, then AC flow definition, then
    ramp pairs for generators whose ramp limit can actually bind.
    """

    def __init__(self, net: Network, hours: int):
        self.hours = hours
        self.n_gen = len(net.generators)
        self.n_bus = len(net.buses)
        self.n_br = len(net.branches)
        self.n_dc = len(net.dc_elements)
        h = hours
        self.p0 = 0
        self.th0 = self.p0 + self.n_gen * h
        self.f0 = self.th0 + self.n_bus * h
        self.fd0 = self.f0 + self.n_br * h
        self.s0 = self.fd0 + self.n_dc * h
        self.n_cols = self.s0 + self.n_bus * h
        self.bal0 = 0
        self.def0 = self.n_bus * h
        self.ramp0 = self.def0 + self.n_br * h
        # Ramp rows only where the limit can bind (limit below capacity).
        self.ramp_gens = [
            i for i, g in enumerate(net.generators) if g.ramp_limit < g.capacity
        ]

    def p(self, g: int, t: int) -> int:
        return self.p0 + g * self.hours + t

    def theta(self, b: int, t: int) -> int:
        return self.th0 + b * self.hours + t

    def f(self, br: int, t: int) -> int:
        return self.f0 + br * self.hours + t

    def fd(self, d: int, t: int) -> int:
        return self.fd0 + d * self.hours + t

    def s(self, b: int, t: int) -> int:
        return self.s0 + b * self.hours + t

    def n_ramp_rows(self, with_initial: bool) -> int:
        links = self.hours - 1 + (1 if with_initial else 0)
        return 2 * len(self.ramp_gens) * links


def build_window_lp(
    net: Network,
    profiles: ProfileSet,
    window_index: int,
    initial_dispatch: dict[int, float] | None,
    opts: WindowOptions,
) -> LinearProgram:
    """Assemble the multi-period DC-OPF LP for one window.

    Per hour and bus: sum of local generation plus net imported flow plus
    shed equals demand. AC flow is defined as base_mva * B * (theta_i -
    theta_j) and capped at the branch rating; DC flow is a free variable
    within +/- capacity. Hour-to-hour dispatch moves are limited by ramp
    rates, anchored on ``initial_dispatch`` when one is given.
    """
    h_all = profiles.horizon_hours
    start = window_index * opts.window_hours
    if window_index < 0 or start >= h_all:
        raise ValueError(f"window {window_index} outside profile horizon ({h_all} h)")
    hours = min(opts.window_hours, h_all - start)
    idx = _WindowIndex(net, hours)

    if initial_dispatch:
        missing = [g.id for g in net.generators if g.id not in initial_dispatch]
        if missing:
            raise ValueError(f"initial_dispatch missing generators: {missing}")

    demand = bus_demand_matrix(net, profiles)[start : start + hours]  # (h, B)
    avail = availability_matrix(net, profiles)[start : start + hours]  # (h, G)

    bus_pos = {b.id: i for i, b in enumerate(net.buses)}
    h = hours
    th = np.arange(h)

    rows, cols, vals = [], [], []

    def add(r, c, v):
        rows.append(np.asarray(r, dtype=int))
        cols.append(np.asarray(c, dtype=int))
        vals.append(np.asarray(v, dtype=float))

    # Nodal balance: generation entries.
    for g_i, gen in enumerate(net.generators):
        b_i = bus_pos[gen.bus]
        add(idx.bal0 + b_i * h + th, idx.p0 + g_i * h + th, np.ones(h))
    # Shed entries.
    all_bus_hours = np.arange(idx.n_bus * h)
    add(idx.bal0 + all_bus_hours, idx.s0 + all_bus_hours, np.ones(idx.n_bus * h))
    # AC flow entries in balance and flow-definition rows.
    for br_i, br in enumerate(net.branches):
        i_pos, j_pos = bus_pos[br.from_bus], bus_pos[br.to_bus]
        fcol = idx.f0 + br_i * h + th
        add(idx.bal0 + i_pos * h + th, fcol, -np.ones(h))
        add(idx.bal0 + j_pos * h + th, fcol, np.ones(h))
        defrow = idx.def0 + br_i * h + th
        coeff = net.base_mva * br.susceptance
        add(defrow, fcol, np.ones(h))
        add(defrow, idx.th0 + i_pos * h + th, np.full(h, -coeff))
        add(defrow, idx.th0 + j_pos * h + th, np.full(h, coeff))
    # DC flow entries.
    for d_i, dce in enumerate(net.dc_elements):
        i_pos, j_pos = bus_pos[dce.from_bus], bus_pos[dce.to_bus]
        dcol = idx.fd0 + d_i * h + th
        add(idx.bal0 + i_pos * h + th, dcol, -np.ones(h))
        add(idx.bal0 + j_pos * h + th, dcol, np.ones(h))

    n_base_rows = idx.ramp0
    senses = ["E"] * n_base_rows
    rhs = np.concatenate([demand.T.ravel(), np.zeros(idx.n_br * h)])

    row_names = [
        f"bal:{b.id}:{start + t}" for b in net.buses for t in range(h)
    ] + [f"def:{br.id}:{start + t}" for br in net.branches for t in range(h)]

    # Ramp rows: |p_t - p_{t-1}| <= R, anchored on initial dispatch if given.
    ramp_rhs = []
    next_row = idx.ramp0
    for g_i in idx.ramp_gens:
        gen = net.generators[g_i]
        if initial_dispatch:
            p0 = float(initial_dispatch[gen.id])
            add([next_row], [idx.p(g_i, 0)], [1.0])
            ramp_rhs.append(gen.ramp_limit + p0)
            row_names.append(f"rampup:{gen.id}:{start}")
            add([next_row + 1], [idx.p(g_i, 0)], [-1.0])
            ramp_rhs.append(gen.ramp_limit - p0)
            row_names.append(f"rampdn:{gen.id}:{start}")
            next_row += 2
        for t in range(1, h):
            add(
                [next_row, next_row, next_row + 1, next_row + 1],
                [idx.p(g_i, t), idx.p(g_i, t - 1), idx.p(g_i, t), idx.p(g_i, t - 1)],
                [1.0, -1.0, -1.0, 1.0],
            )
            ramp_rhs.extend([gen.ramp_limit, gen.ramp_limit])
            row_names.append(f"rampup:{gen.id}:{start + t}")
            row_names.append(f"rampdn:{gen.id}:{start + t}")
            next_row += 2
    senses += ["L"] * len(ramp_rhs)
    rhs = np.concatenate([rhs, np.array(ramp_rhs)])

    n_rows = next_row
    a_matrix = sp.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(n_rows, idx.n_cols),
    ).tocsr()

    lower = np.zeros(idx.n_cols)
    upper = np.full(idx.n_cols, np.inf)
    # Dispatch: [0, capacity] or [0, available] for profiled plants.
    upper[idx.p0 : idx.th0] = avail.T.ravel()
    # Angles: free, except reference buses pinned to zero.
    lower[idx.th0 : idx.f0] = -np.inf
    refs = set(net.reference_buses.values())
    for b_i, bus in enumerate(net.buses):
        if bus.id in refs:
            sl = slice(idx.th0 + b_i * h, idx.th0 + (b_i + 1) * h)
            lower[sl] = 0.0
            upper[sl] = 0.0
    # Flows: symmetric capacity bounds.
    br_caps = np.repeat([br.capacity for br in net.branches], h)
    lower[idx.f0 : idx.fd0] = -br_caps
    upper[idx.f0 : idx.fd0] = br_caps
    dc_caps = np.repeat([d.capacity for d in net.dc_elements], h)
    lower[idx.fd0 : idx.s0] = -dc_caps
    upper[idx.fd0 : idx.s0] = dc_caps

    c = np.zeros(idx.n_cols)
    offset = 0.0
    for g_i, gen in enumerate(net.generators):
        c[idx.p0 + g_i * h : idx.p0 + (g_i + 1) * h] = gen.marginal_cost
    if opts.curtailment_cost:
        for g_i, gen in enumerate(net.generators):
            if gen.profiled and gen.fuel in (Fuel.SOLAR, Fuel.WIND):
                c[idx.p0 + g_i * h : idx.p0 + (g_i + 1) * h] -= opts.curtailment_cost
                offset += opts.curtailment_cost * float(avail[:, g_i].sum())
    c[idx.s0 :] = opts.shed_penalty

    col_names = (
        [f"p:{g.id}:{start + t}" for g in net.generators for t in range(h)]
        + [f"th:{b.id}:{start + t}" for b in net.buses for t in range(h)]
        + [f"f:{br.id}:{start + t}" for br in net.branches for t in range(h)]
        + [f"fd:{d.id}:{start + t}" for d in net.dc_elements for t in range(h)]
        + [f"s:{b.id}:{start + t}" for b in net.buses for t in range(h)]
    )

    return LinearProgram(
        c=c,
        a_matrix=a_matrix,
        senses=np.array(senses),
        rhs=rhs,
        lower=lower,
        upper=upper,
        col_names=col_names,
        row_names=row_names,
        objective_offset=offset,
    ).check()


@dataclass
class SimulationResult:
    """Hourly primal and dual trajectories of one rolling-horizon run.

    Arrays are (hours, entities) with entity columns ordered as in the id
    tuples. ``bus_demand`` echoes the input demand allocation so the result
    is self-contained for settlement and conservation checks.
    """

    gen_ids: tuple[int, ...]
    bus_ids: tuple[int, ...]
    branch_ids: tuple[int, ...]
    dc_ids: tuple[int, ...]
    dispatch: np.ndarray
    angle: np.ndarray
    ac_flow: np.ndarray
    dc_flow: np.ndarray
    shed: np.ndarray
    lmp: np.ndarray
    branch_mu: np.ndarray
    dc_mu: np.ndarray
    bus_demand: np.ndarray
    fuel_cost: float
    objective: float
    solve_log: list[dict] = field(default_factory=list)

    @property
    def hours(self) -> int:
        return self.dispatch.shape[0]


def _unpack_window(
    net: Network, idx: _WindowIndex, sol: LpSolution
) -> dict[str, np.ndarray]:
    h = idx.hours

    def block(start: int, count: int) -> np.ndarray:
        return sol.x[start : start + count * h].reshape(count, h).T

    def mu_block(start: int, count: int) -> np.ndarray:
        rc = np.abs(sol.reduced_costs[start : start + count * h])
        rc[rc < MU_TOL] = 0.0
        return rc.reshape(count, h).T

    return {
        "dispatch": block(idx.p0, idx.n_gen),
        "angle": block(idx.th0, idx.n_bus),
        "ac_flow": block(idx.f0, idx.n_br),
        "dc_flow": block(idx.fd0, idx.n_dc),
        "shed": block(idx.s0, idx.n_bus),
        "lmp": sol.duals[idx.bal0 : idx.bal0 + idx.n_bus * h].reshape(idx.n_bus, h).T,
        "branch_mu": mu_block(idx.f0, idx.n_br),
        "dc_mu": mu_block(idx.fd0, idx.n_dc),
    }


def simulate_horizon(
    net: Network, profiles: ProfileSet, opts: WindowOptions | None = None
) -> SimulationResult:
    """Run the full horizon window by window and stitch the results.

    Window k's hour-0 ramp is anchored at window k-1's final dispatch; the
    first window has free initial conditions. Total fuel cost excludes the
    shed-penalty and curtailment-cost terms.
    """
    opts = opts or WindowOptions()
    opts.validate(net)
    validate_profiles(profiles, net)
    h_all = profiles.horizon_hours
    n_windows = (h_all + opts.window_hours - 1) // opts.window_hours

    pieces: list[dict[str, np.ndarray]] = []
    log: list[dict] = []
    initial: dict[int, float] | None = None
    objective = 0.0
    for k in range(n_windows):
        lp = build_window_lp(net, profiles, k, initial, opts)
        if opts.export_lp_dir:
            out = Path(opts.export_lp_dir)
            out.mkdir(parents=True, exist_ok=True)
            write_lp_file(lp, out / f"window_{k:03d}.lp")
        sol = solve_lp(lp, method=opts.lp_method, tolerance=opts.lp_tolerance)
        if not sol.optimal:
            raise SimulationError(
                f"window {k}: LP terminated {sol.status}", window_index=k
            )
        hours = min(opts.window_hours, h_all - k * opts.window_hours)
        idx = _WindowIndex(net, hours)
        piece = _unpack_window(net, idx, sol)
        pieces.append(piece)
        objective += sol.objective
        log.append(
            {
                "window": k,
                "status": sol.status,
                "objective": sol.objective,
                "rows": lp.n_rows,
                "cols": lp.n_cols,
            }
        )
        final = piece["dispatch"][-1]
        initial = {g.id: float(final[i]) for i, g in enumerate(net.generators)}

    stacked = {
        key: np.vstack([p[key] for p in pieces]) for key in pieces[0]
    }
    costs = np.array([g.marginal_cost for g in net.generators])
    fuel_cost = float((stacked["dispatch"] * costs).sum())
    return SimulationResult(
        gen_ids=tuple(g.id for g in net.generators),
        bus_ids=tuple(b.id for b in net.buses),
        branch_ids=tuple(br.id for br in net.branches),
        dc_ids=tuple(d.id for d in net.dc_elements),
        bus_demand=bus_demand_matrix(net, profiles),
        fuel_cost=fuel_cost,
        objective=objective,
        solve_log=log,
        **stacked,
    )


def extract_lmps(result: SimulationResult) -> pd.DataFrame:
    """Locational marginal prices as an (hour x bus id) table.

    Positive values mean serving one more MWh at the bus raises system cost.
    """
    return pd.DataFrame(result.lmp, columns=list(result.bus_ids))


@dataclass(frozen=True)
class CurtailmentSeries:
    """Per-plant spilled energy, MW by hour; hydro kept apart from solar/wind."""

    renewable: pd.DataFrame
    hydro: pd.DataFrame

    @property
    def total(self) -> pd.Series:
        return self.renewable.sum(axis=1)


def curtailment_series(
    result: SimulationResult, net: Network, profiles: ProfileSet
) -> CurtailmentSeries:
    """Available-minus-dispatched for every profiled plant."""
    avail = availability_matrix(net, profiles)
    ren_cols, hyd_cols = {}, {}
    for i, g in enumerate(net.generators):
        if not g.profiled:
            continue
        series = avail[:, i] - result.dispatch[:, i]
        if g.fuel in (Fuel.SOLAR, Fuel.WIND):
            ren_cols[g.id] = series
        elif g.fuel == Fuel.HYDRO:
            hyd_cols[g.id] = series
    return CurtailmentSeries(
        renewable=pd.DataFrame(ren_cols, index=range(result.hours)),
        hydro=pd.DataFrame(hyd_cols, index=range(result.hours)),
    )


def availability_frame(net: Network, profiles: ProfileSet, fuels=(Fuel.SOLAR, Fuel.WIND)) -> pd.DataFrame:
    """Available MW by hour for profiled plants of the given fuels."""
    avail = availability_matrix(net, profiles)
    cols = {
        g.id: avail[:, i]
        for i, g in enumerate(net.generators)
        if g.profiled and g.fuel in fuels
    }
    return pd.DataFrame(cols, index=range(profiles.horizon_hours))
