"""Reported metrics: generation mix, curtailment, emissions, investment
costs, payback, seam transfers, pass-through, regression, payments.

Everything here is a pure function over immutable simulation results, so
metrics parallelize freely across scenarios.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from .model import Fuel, Network, Seam
from .opf import SimulationResult

MWH_PER_TWH = 1e6
TONS_PER_MMMT = 1e6
DOLLARS_PER_BUSD = 1e9


class AnalyticsError(ValueError):
    pass


# --- cost model -------------------------------------------------------------


@dataclass(frozen=True)
class CostBook:
    """Unit investment costs: $/MW for plant, transformers, and converter
    terminals; $/(MW-mile) for lines; optional per-state multipliers.

    Generation defaults follow the wind/solar cost-to-capacity ratios of the
    scenario tables this toolkit reproduces; transmission defaults are
    deliberately round data inputs, not derived constants.
    """

    solar_capex: float = 1.085e6  # $/MW
    wind_capex: float = 1.377e6  # $/MW
    ac_line_cost: float = 1900.0  # $/(MW-mile)
    transformer_cost: float = 70_000.0  # $/MW
    dc_line_cost: float = 513.0  # $/(MW-mile)
    dc_terminal_cost: float = 135_000.0  # $/MW per terminal
    terminals_per_b2b: int = 2  # a back-to-back station is two converters
    regional_multipliers: dict[str, float] = field(default_factory=dict)

    def multiplier(self, state: str) -> float:
        return self.regional_multipliers.get(state, 1.0)

    def validate(self) -> "CostBook":
        numbers = [
            self.solar_capex, self.wind_capex, self.ac_line_cost,
            self.transformer_cost, self.dc_line_cost, self.dc_terminal_cost,
        ]
        if any(v < 0 for v in numbers) or self.terminals_per_b2b < 0:
            raise AnalyticsError("cost book entries must be >= 0")
        if any(v < 0 for v in self.regional_multipliers.values()):
            raise AnalyticsError("regional multipliers must be >= 0")
        return self


def costbook_from_dict(data: dict) -> CostBook:
    return CostBook(
        solar_capex=float(data.get("solar_capex", CostBook.solar_capex)),
        wind_capex=float(data.get("wind_capex", CostBook.wind_capex)),
        ac_line_cost=float(data.get("ac_line_cost", CostBook.ac_line_cost)),
        transformer_cost=float(data.get("transformer_cost", CostBook.transformer_cost)),
        dc_line_cost=float(data.get("dc_line_cost", CostBook.dc_line_cost)),
        dc_terminal_cost=float(data.get("dc_terminal_cost", CostBook.dc_terminal_cost)),
        terminals_per_b2b=int(data.get("terminals_per_b2b", CostBook.terminals_per_b2b)),
        regional_multipliers={
            str(k): float(v) for k, v in data.get("regional_multipliers", {}).items()
        },
    ).validate()


# --- generation and emissions ------------------------------------------------


def generation_mix(
    result: SimulationResult,
    net: Network,
    group_by: str = "fuel",
    profiles=None,
) -> pd.DataFrame:
    """Dispatched TWh by fuel, state, or interconnection.

    With ``profiles`` supplied, solar/wind rows also report curtailed TWh.
    """
    if group_by not in ("fuel", "state", "interconnection"):
        raise AnalyticsError(f"unknown group_by {group_by!r}")

    def key(g):
        if group_by == "fuel":
            return g.fuel.value
        bus = net.bus_by_id[g.bus]
        return bus.state if group_by == "state" else bus.interconnection.value

    energy = result.dispatch.sum(axis=0)
    twh: dict[str, float] = {}
    curtailed: dict[str, float] = {}
    avail = None
    if profiles is not None:
        from .model import availability_matrix

        avail = availability_matrix(net, profiles)
    for i, g in enumerate(net.generators):
        k = key(g)
        twh[k] = twh.get(k, 0.0) + float(energy[i]) / MWH_PER_TWH
        if avail is not None and g.fuel in (Fuel.SOLAR, Fuel.WIND):
            spilled = float(avail[:, i].sum() - energy[i]) / MWH_PER_TWH
            curtailed[k] = curtailed.get(k, 0.0) + spilled
    frame = pd.DataFrame(
        {
            "twh": pd.Series(twh, dtype=float),
            "curtailed_twh": pd.Series(curtailed, dtype=float),
        }
    ).fillna(0.0)
    frame.index.name = group_by
    return frame.sort_index()


@dataclass(frozen=True)
class EmissionTotals:
    co2: float  # MMmt
    nox: float
    so2: float
    by_state: pd.DataFrame  # index state, columns co2/nox/so2 (MMmt)
    by_fuel: pd.DataFrame


def emissions(result: SimulationResult, net: Network) -> EmissionTotals:
    """Pollutant totals (million metric tons) with state and fuel breakdowns."""
    energy = result.dispatch.sum(axis=0)
    rows_state: dict[str, np.ndarray] = {}
    rows_fuel: dict[str, np.ndarray] = {}
    for i, g in enumerate(net.generators):
        tons = energy[i] * np.array([g.co2_rate, g.nox_rate, g.so2_rate])
        state = net.bus_state(g.bus)
        rows_state[state] = rows_state.get(state, np.zeros(3)) + tons
        rows_fuel[g.fuel.value] = rows_fuel.get(g.fuel.value, np.zeros(3)) + tons
    cols = ["co2", "nox", "so2"]
    by_state = pd.DataFrame(rows_state, index=cols).T.sort_index() / TONS_PER_MMMT
    by_fuel = pd.DataFrame(rows_fuel, index=cols).T.sort_index() / TONS_PER_MMMT
    totals = by_state.sum()
    return EmissionTotals(
        co2=float(totals["co2"]),
        nox=float(totals["nox"]),
        so2=float(totals["so2"]),
        by_state=by_state,
        by_fuel=by_fuel,
    )


def emissions_delta_map(
    baseline: EmissionTotals, scenario: EmissionTotals
) -> pd.DataFrame:
    """Per-state scenario-minus-baseline emission changes (MMmt)."""
    if set(baseline.by_state.index) != set(scenario.by_state.index):
        raise AnalyticsError(
            "mismatched state sets between baseline and scenario emissions"
        )
    return (scenario.by_state - baseline.by_state).sort_index()


# --- curtailment --------------------------------------------------------------


@dataclass(frozen=True)
class CurtailmentStats:
    median_gw: float  # median over hours of total curtailed GW
    median_share: float  # median of curtailed/available over hours with supply
    heatmap_mw: np.ndarray  # (24, weeks) mean curtailment by hour-of-day x week
    exceedance_mw: np.ndarray  # hourly totals sorted descending


def curtailment_stats(
    curtailment: pd.DataFrame, availability: pd.DataFrame
) -> CurtailmentStats:
    """Distribution statistics of system-wide solar/wind curtailment.

    Hours with zero available energy are excluded from the share median.
    """
    if len(curtailment) != len(availability):
        raise AnalyticsError("curtailment and availability series lengths differ")
    total = curtailment.to_numpy().sum(axis=1) if curtailment.shape[1] else np.zeros(
        len(curtailment)
    )
    avail = availability.to_numpy().sum(axis=1) if availability.shape[1] else np.zeros(
        len(availability)
    )
    hours = len(total)
    with_supply = avail > 0
    share = total[with_supply] / avail[with_supply]
    weeks = max(1, -(-hours // 168))
    heatmap = np.full((24, weeks), np.nan)
    hod = np.arange(hours) % 24
    week = np.arange(hours) // 168
    for w in range(weeks):
        for h in range(24):
            mask = (hod == h) & (week == w)
            if mask.any():
                heatmap[h, w] = total[mask].mean()
    return CurtailmentStats(
        median_gw=float(np.median(total)) / 1000.0 if hours else 0.0,
        median_share=float(np.median(share)) if share.size else 0.0,
        heatmap_mw=heatmap,
        exceedance_mw=np.sort(total)[::-1],
    )


# --- investment and payback ---------------------------------------------------


@dataclass(frozen=True)
class CapacityAdditions:
    """New generation, MW by state."""

    solar_mw: dict[str, float] = field(default_factory=dict)
    wind_mw: dict[str, float] = field(default_factory=dict)


def investment_cost(
    additions: CapacityAdditions | None,
    plan=None,
    design=None,
    book: CostBook | None = None,
    net: Network | None = None,
) -> dict[str, float]:
    """Investment breakdown in $B: wind, solar, AC lines, transformers,
    DC lines, and B2B converter upgrades.

    ``plan`` is an expansion plan (AC upgrades), ``design`` a Macro Grid
    design; ``net`` is only needed when B2B upgrades omit their previous
    capacities.
    """
    book = (book or CostBook()).validate()
    out = {k: 0.0 for k in ("wind", "solar", "ac_lines", "transformers", "dc_lines", "b2b")}

    if additions is not None:
        for state, mw in additions.wind_mw.items():
            if mw < 0:
                raise AnalyticsError(f"negative wind addition for {state}")
            out["wind"] += mw * book.wind_capex * book.multiplier(state)
        for state, mw in additions.solar_mw.items():
            if mw < 0:
                raise AnalyticsError(f"negative solar addition for {state}")
            out["solar"] += mw * book.solar_capex * book.multiplier(state)

    if plan is not None:
        for up in plan.upgrades:
            mult = book.multiplier(up.state)
            if up.kind.value == "transformer":
                out["transformers"] += up.added_mw * book.transformer_cost * mult
            else:
                out["ac_lines"] += up.added_mw_miles * book.ac_line_cost * mult

    if design is not None:
        b2b_mw = design.upgraded_b2b_mw(net)
        out["b2b"] += b2b_mw * book.dc_terminal_cost * book.terminals_per_b2b
        for line in design.new_dc_lines:
            out["dc_lines"] += (
                line.capacity_mw * line.length_mi * book.dc_line_cost
                + line.capacity_mw * book.dc_terminal_cost * 2
            )

    out = {k: v / DOLLARS_PER_BUSD for k, v in out.items()}
    out["total"] = sum(out.values())
    return out


@dataclass(frozen=True)
class OperatingPoint:
    """Annualized quantities a payback comparison needs."""

    investment_busd: float
    fuel_busd_per_year: float
    co2_mmmt_per_year: float


def payback(
    baseline: OperatingPoint, scenario: OperatingPoint, carbon_price: float = 0.0
) -> float:
    """Simple payback in years: extra investment over annual savings.

    Savings are avoided fuel cost plus monetized avoided CO2 at
    ``carbon_price`` $/ton. Returns ``inf`` when there are no annual
    savings (no payback).
    """
    delta_invest = scenario.investment_busd - baseline.investment_busd
    if delta_invest < 0:
        raise AnalyticsError("scenario investment below baseline; nothing to pay back")
    if delta_invest == 0:
        return 0.0
    fuel_saving = baseline.fuel_busd_per_year - scenario.fuel_busd_per_year
    co2_saving_busd = (
        carbon_price
        * (baseline.co2_mmmt_per_year - scenario.co2_mmmt_per_year)
        * TONS_PER_MMMT
        / DOLLARS_PER_BUSD
    )
    denom = fuel_saving + co2_saving_busd
    if denom <= 0:
        return math.inf
    return delta_invest / denom


# --- seam transfers and pass-through ------------------------------------------

#: Canonical exporting side of each seam (forward direction of Table-style
#: ledgers): East->West, East->ERCOT, West->ERCOT.
_SEAM_FORWARD = {
    Seam.EAST_WEST: "Eastern",
    Seam.EAST_ERCOT: "Eastern",
    Seam.WEST_ERCOT: "Western",
}


@dataclass(frozen=True)
class SeamTransfer:
    forward_twh: float
    reverse_twh: float
    capacity_factor: float

    @property
    def ratio(self) -> float:
        if self.reverse_twh == 0:
            return math.inf if self.forward_twh > 0 else 0.0
        return self.forward_twh / self.reverse_twh


@dataclass(frozen=True)
class SeamLedger:
    seams: dict[Seam, SeamTransfer]
    overall_capacity_factor: float


def oriented_seam_flow(result: SimulationResult, net: Network, seam: Seam) -> np.ndarray:
    """Hourly MW across ``seam``, positive in the canonical forward direction."""
    flow = np.zeros(result.hours)
    fwd_side = _SEAM_FORWARD[seam]
    for j, dc_id in enumerate(result.dc_ids):
        element = net.dc_by_id[dc_id]
        if element.seam != seam:
            continue
        sign = 1.0 if net.bus_by_id[element.from_bus].interconnection.value == fwd_side else -1.0
        flow += sign * result.dc_flow[:, j]
    return flow


def seam_transfers(result: SimulationResult, net: Network) -> SeamLedger:
    """Directional energy and utilization of every interconnection seam."""
    hours = result.hours
    seams: dict[Seam, SeamTransfer] = {}
    total_abs = 0.0
    total_cap = 0.0
    for seam in (Seam.EAST_WEST, Seam.EAST_ERCOT, Seam.WEST_ERCOT):
        ids = [
            (j, net.dc_by_id[dc_id])
            for j, dc_id in enumerate(result.dc_ids)
            if net.dc_by_id[dc_id].seam == seam
        ]
        if not ids:
            continue
        fwd_side = _SEAM_FORWARD[seam]
        forward = 0.0
        reverse = 0.0
        for j, element in ids:
            sign = (
                1.0
                if net.bus_by_id[element.from_bus].interconnection.value == fwd_side
                else -1.0
            )
            signed = sign * result.dc_flow[:, j]
            forward += float(np.clip(signed, 0.0, None).sum())
            reverse += float(-np.clip(signed, None, 0.0).sum())
        abs_sum = float(np.abs(result.dc_flow[:, [j for j, _ in ids]]).sum())
        cap = sum(e.capacity for _, e in ids)
        seams[seam] = SeamTransfer(
            forward_twh=forward / MWH_PER_TWH,
            reverse_twh=reverse / MWH_PER_TWH,
            capacity_factor=abs_sum / (cap * hours) if cap else 0.0,
        )
        total_abs += abs_sum
        total_cap += cap
    overall = total_abs / (total_cap * hours) if total_cap else 0.0
    return SeamLedger(seams=seams, overall_capacity_factor=overall)


def integrate_directional_twh(flow_mw: np.ndarray) -> tuple[float, float]:
    """Split an hourly signed MW series into (forward, reverse) TWh."""
    arr = np.asarray(flow_mw, dtype=float)
    fwd = float(np.clip(arr, 0.0, None).sum()) / MWH_PER_TWH
    rev = float(-np.clip(arr, None, 0.0).sum()) / MWH_PER_TWH
    return fwd, rev


@dataclass(frozen=True)
class PassthroughHub:
    """A terminal (for example inside ERCOT) joined to two foreign seams."""

    buses: tuple[int, ...]
    east_element: int  # DC element toward the Eastern side
    west_element: int  # DC element toward the Western side


def passthrough(
    result: SimulationResult, net: Network, hub: PassthroughHub
) -> np.ndarray:
    """Hourly MW passing through the hub, positive East-to-West.

    Power counts as pass-through only when one designated element imports
    into the hub while the other simultaneously exports, and only up to the
    smaller of the two.
    """
    if hub.east_element == hub.west_element:
        raise AnalyticsError("hub must designate two distinct dc elements")
    dc_pos = {dc_id: j for j, dc_id in enumerate(result.dc_ids)}
    for el_id in (hub.east_element, hub.west_element):
        if el_id not in dc_pos:
            raise AnalyticsError(f"hub element {el_id} not in simulation result")
        if net.dc_by_id[el_id].seam in (None, Seam.INTRA):
            raise AnalyticsError(f"hub element {el_id} does not cross a seam")

    hub_buses = set(hub.buses)

    def inbound(el_id: int) -> np.ndarray:
        element = net.dc_by_id[el_id]
        flow = result.dc_flow[:, dc_pos[el_id]]
        # Positive element flow runs from_bus -> to_bus.
        if element.to_bus in hub_buses:
            return flow
        if element.from_bus in hub_buses:
            return -flow
        raise AnalyticsError(f"hub element {el_id} does not touch the hub buses")

    from_east = inbound(hub.east_element)  # >0 when East feeds the hub
    from_west = inbound(hub.west_element)
    east_to_west = np.minimum(np.clip(from_east, 0.0, None), np.clip(-from_west, 0.0, None))
    west_to_east = np.minimum(np.clip(from_west, 0.0, None), np.clip(-from_east, 0.0, None))
    return east_to_west - west_to_east


# --- regression ---------------------------------------------------------------


@dataclass(frozen=True)
class RegressionFit:
    beta0: float
    beta_east: float
    beta_west: float
    r2: float


def flow_share_regression(
    flow: np.ndarray, share_east: np.ndarray, share_west: np.ndarray
) -> RegressionFit:
    """OLS of seam flow on the two renewable-share series, with a constant.

    Raises on collinear regressors. A constant flow yields r2 = 0 by
    convention (there is no variance to explain).
    """
    y = np.asarray(flow, dtype=float)
    e = np.asarray(share_east, dtype=float)
    w = np.asarray(share_west, dtype=float)
    if not (len(y) == len(e) == len(w)):
        raise AnalyticsError("series lengths differ")
    if len(y) < 3:
        raise AnalyticsError("need at least 3 observations")
    x = np.column_stack([np.ones(len(y)), e, w])
    if np.linalg.matrix_rank(x) < 3:
        raise AnalyticsError("collinear regressors: normal equations are singular")
    beta, _, _, _ = np.linalg.lstsq(x, y, rcond=None)
    residuals = y - x @ beta
    sse = float(residuals @ residuals)
    sst = float(((y - y.mean()) ** 2).sum())
    r2 = 0.0 if sst == 0.0 else 1.0 - sse / sst
    return RegressionFit(
        beta0=float(beta[0]),
        beta_east=float(beta[1]),
        beta_west=float(beta[2]),
        r2=min(max(r2, 0.0), 1.0),
    )


# --- payments ------------------------------------------------------------------


@dataclass(frozen=True)
class PaymentsSummary:
    consumer_busd: float
    generator_busd: float
    by_goal_status: pd.DataFrame | None = None

    @property
    def surplus_busd(self) -> float:
        return self.consumer_busd - self.generator_busd


def payments(
    result: SimulationResult, net: Network, goal_states: set[str] | None = None
) -> PaymentsSummary:
    """LMP-based settlement: what consumers pay and generators receive.

    Consumers are charged only for served load (demand minus shed). The
    difference between the two sides is the congestion surplus. With
    ``goal_states`` given, both sides are split by whether the state has a
    clean-energy goal.
    """
    served = result.bus_demand - result.shed
    consumer_by_bus = (result.lmp * served).sum(axis=0)
    gen_pos = {b: i for i, b in enumerate(result.bus_ids)}
    generator_by_gen = np.zeros(len(result.gen_ids))
    for i, gid in enumerate(result.gen_ids):
        bus = net.gen_by_id[gid].bus
        generator_by_gen[i] = float(
            (result.lmp[:, gen_pos[bus]] * result.dispatch[:, i]).sum()
        )

    consumer = float(consumer_by_bus.sum()) / DOLLARS_PER_BUSD
    generator = float(generator_by_gen.sum()) / DOLLARS_PER_BUSD

    split = None
    if goal_states is not None:
        rows = {
            "with_goals": {"consumer_busd": 0.0, "generator_busd": 0.0},
            "without_goals": {"consumer_busd": 0.0, "generator_busd": 0.0},
        }
        for j, bid in enumerate(result.bus_ids):
            key = "with_goals" if net.bus_by_id[bid].state in goal_states else "without_goals"
            rows[key]["consumer_busd"] += float(consumer_by_bus[j]) / DOLLARS_PER_BUSD
        for i, gid in enumerate(result.gen_ids):
            state = net.bus_state(net.gen_by_id[gid].bus)
            key = "with_goals" if state in goal_states else "without_goals"
            rows[key]["generator_busd"] += float(generator_by_gen[i]) / DOLLARS_PER_BUSD
        split = pd.DataFrame(rows).T
        split["surplus_busd"] = split["consumer_busd"] - split["generator_busd"]
    return PaymentsSummary(
        consumer_busd=consumer, generator_busd=generator, by_goal_status=split
    )


def congestion_rent_total(result: SimulationResult, net: Network) -> float:
    """Total AC-branch and DC-element congestion rent, in $."""
    br_caps = np.array([net.branch_by_id[b].capacity for b in result.branch_ids])
    dc_caps = np.array([net.dc_by_id[d].capacity for d in result.dc_ids])
    rent = float((result.branch_mu * br_caps).sum())
    if dc_caps.size:
        rent += float((result.dc_mu * dc_caps).sum())
    return rent
