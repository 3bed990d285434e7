"""Scenario transformations: fleet changes, demand growth, renewable
buildout, goal pooling, and HVDC (Macro Grid) design application.

All operations are pure: they take a Network/ProfileSet and return new
objects, so scenarios can be built and compared side by side.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from .analytics import CostBook

from .model import (
    CLEAN_FUELS,
    PROFILED_FUELS,
    RENEWABLE_FUELS,
    DcElement,
    DcKind,
    Fuel,
    Generator,
    Network,
    ProfileSet,
    seam_between,
    validate_network,
)
from .opf import SimulationResult

MWH_PER_TWH = 1e6


class ScenarioError(ValueError):
    """Raised for unsatisfiable or inconsistent scenario specifications."""


@dataclass(frozen=True)
class GoalSpec:
    """Clean-energy targets and the pooling rules for sharing them.

    ``fractions`` maps state code to its goal share of annual demand.
    States listed together in a pool may jointly satisfy the sum of their
    targets; with ``cross_seam_pooling`` False every pool must sit inside
    a single interconnection.
    """

    fractions: dict[str, float]
    goal_kind: str = "clean"  # "renewable" (solar+wind+geothermal) or "clean"
    pools: tuple[tuple[str, ...], ...] = ()
    cross_seam_pooling: bool = False

    def qualifying_fuels(self) -> frozenset[Fuel]:
        if self.goal_kind == "renewable":
            return RENEWABLE_FUELS
        if self.goal_kind == "clean":
            return frozenset(CLEAN_FUELS)
        raise ScenarioError(f"unknown goal_kind {self.goal_kind!r}")

    def effective_pools(self) -> tuple[tuple[str, ...], ...]:
        """Declared pools plus a singleton pool for each unpooled goal state."""
        pooled = {s for pool in self.pools for s in pool}
        singles = tuple(
            (s,) for s in sorted(self.fractions) if s not in pooled
        )
        return tuple(tuple(p) for p in self.pools) + singles

    def validate(self, net: Network | None = None) -> "GoalSpec":
        problems = []
        for state, frac in self.fractions.items():
            if not (0.0 <= frac <= 1.0):
                problems.append(f"goal for {state} outside [0, 1]: {frac}")
        seen: set[str] = set()
        for pool in self.pools:
            for state in pool:
                if state in seen:
                    problems.append(f"state {state} appears in two pools")
                seen.add(state)
                if state not in self.fractions:
                    problems.append(f"pooled state {state} has no goal")
        self.qualifying_fuels()
        if net is not None and not self.cross_seam_pooling:
            state_icx: dict[str, set] = {}
            for z in net.zones:
                state_icx.setdefault(z.state, set()).add(z.interconnection)
            for pool in self.pools:
                touched = set()
                for state in pool:
                    touched |= state_icx.get(state, set())
                if len(touched) > 1:
                    names = ", ".join(sorted(x.value for x in touched))
                    problems.append(
                        f"pool {pool} spans interconnections ({names}) but "
                        "cross_seam_pooling is off"
                    )
        if problems:
            raise ScenarioError("; ".join(problems))
        return self


@dataclass(frozen=True)
class PoolResult:
    states: tuple[str, ...]
    target_twh: float
    delivered_twh: float

    @property
    def met(self) -> bool:
        return self.delivered_twh >= self.target_twh - 1e-9 * max(1.0, self.target_twh)


def goal_accounting(
    result: SimulationResult,
    net: Network,
    profiles: ProfileSet,
    goals: GoalSpec,
) -> list[PoolResult]:
    """Target vs delivered energy for every pool over the simulated horizon.

    Delivered energy is what qualifying plants in the pooled states actually
    dispatched (generation that was curtailed never counts); targets are the
    goal fractions applied to each state's demand.
    """
    goals.validate(net)
    state_demand: dict[str, float] = {}
    for z in net.zones:
        state_demand[z.state] = state_demand.get(z.state, 0.0) + float(
            profiles.demand[z.id].sum()
        )
    fuels = goals.qualifying_fuels()
    gen_energy = result.dispatch.sum(axis=0)
    delivered_by_state: dict[str, float] = {}
    for i, g in enumerate(net.generators):
        if g.fuel in fuels:
            state = net.bus_state(g.bus)
            delivered_by_state[state] = delivered_by_state.get(state, 0.0) + float(
                gen_energy[i]
            )

    out = []
    for pool in goals.effective_pools():
        target = sum(
            goals.fractions[s] * state_demand.get(s, 0.0) for s in pool
        )
        delivered = sum(delivered_by_state.get(s, 0.0) for s in pool)
        out.append(
            PoolResult(
                states=tuple(pool),
                target_twh=target / MWH_PER_TWH,
                delivered_twh=delivered / MWH_PER_TWH,
            )
        )
    return out


@dataclass(frozen=True)
class FleetChangeSet:
    """Retirements, additions, and per-(state, fuel) capacity scaling."""

    retirements: tuple[int, ...] = ()
    additions: tuple[Generator, ...] = ()
    scale_factors: dict[tuple[str, Fuel], float] = field(default_factory=dict)


def apply_fleet_changes(net: Network, changes: FleetChangeSet) -> Network:
    """Retire, scale, and append generators; everything else untouched."""
    known = {g.id for g in net.generators}
    unknown = [gid for gid in changes.retirements if gid not in known]
    if unknown:
        raise ScenarioError(f"retiring unknown generator ids: {unknown}")
    for factor in changes.scale_factors.values():
        if factor < 0:
            raise ScenarioError("scale factors must be >= 0")

    retired = set(changes.retirements)
    gens: list[Generator] = []
    for g in net.generators:
        if g.id in retired:
            continue
        factor = changes.scale_factors.get((net.bus_state(g.bus), g.fuel))
        if factor is not None and factor != 1.0:
            g = replace(g, capacity=g.capacity * factor)
        gens.append(g)

    bus_ids = {b.id for b in net.buses}
    for add in changes.additions:
        if add.bus not in bus_ids:
            raise ScenarioError(f"generator addition {add.id} at unknown bus {add.bus}")
        if add.id in known:
            raise ScenarioError(f"generator addition reuses id {add.id}")
        if add.fuel in PROFILED_FUELS and not add.profiled:
            add = replace(add, profiled=True)
        gens.append(add)
    return net.with_generators(gens)


def scale_demand(
    profiles: ProfileSet,
    net: Network,
    years: int,
    growth_override: dict[int, float] | None = None,
) -> ProfileSet:
    """Compound each zone's demand by its growth rate; shapes are preserved."""
    override = growth_override or {}
    demand = {}
    for z in net.zones:
        rate = override.get(z.id, z.demand_growth)
        demand[z.id] = profiles.demand[z.id] * (1.0 + rate) ** years
    return ProfileSet(
        horizon_hours=profiles.horizon_hours,
        demand=demand,
        availability=dict(profiles.availability),
    )


def add_renewables_proportional(
    net: Network, state_targets: dict[str, tuple[float, float]]
) -> Network:
    """Grow each state's solar/wind fleets to hit (solar_mw, wind_mw) additions.

    Every existing plant in the state is scaled by the same factor, so the
    plant mix and its availability profiles are reused unchanged. States
    with no existing capacity of a targeted fuel are rejected: proportional
    scaling cannot site greenfield plants.
    """
    factors: dict[tuple[str, Fuel], float] = {}
    for state, (solar_add, wind_add) in state_targets.items():
        for fuel, add in ((Fuel.SOLAR, solar_add), (Fuel.WIND, wind_add)):
            if add == 0:
                continue
            if add < 0:
                raise ScenarioError(f"negative {fuel.value} target for {state}")
            existing = sum(
                g.capacity
                for g in net.generators
                if g.fuel == fuel and net.bus_state(g.bus) == state
            )
            if existing <= 0:
                raise ScenarioError(
                    f"state {state} has no existing {fuel.value} capacity; "
                    "explicit siting required"
                )
            factors[(state, fuel)] = (existing + add) / existing

    gens = []
    for g in net.generators:
        factor = factors.get((net.bus_state(g.bus), g.fuel))
        if factor is not None:
            g = replace(g, capacity=g.capacity * factor)
        gens.append(g)
    return net.with_generators(gens)


@dataclass(frozen=True)
class B2bUpgrade:
    dc_element: int
    new_capacity_mw: float
    label: str = ""
    prev_capacity_mw: float | None = None  # recorded for costing


@dataclass(frozen=True)
class NewDcLine:
    from_bus: int
    to_bus: int
    capacity_mw: float
    length_mi: float
    label: str = ""


@dataclass(frozen=True)
class MacroGridDesign:
    """An HVDC expansion: converter-station upgrades plus new DC lines."""

    name: str = "custom"
    b2b_upgrades: tuple[B2bUpgrade, ...] = ()
    new_dc_lines: tuple[NewDcLine, ...] = ()

    def upgraded_b2b_mw(self, net: Network | None = None) -> float:
        """Total capacity added at existing converter stations."""
        total = 0.0
        for up in self.b2b_upgrades:
            prev = up.prev_capacity_mw
            if prev is None:
                if net is None:
                    raise ScenarioError(
                        f"upgrade of element {up.dc_element} lacks a previous "
                        "capacity and no network was given"
                    )
                prev = net.dc_by_id[up.dc_element].capacity
            total += up.new_capacity_mw - prev
        return total

    def new_line_mw(self) -> float:
        return sum(line.capacity_mw for line in self.new_dc_lines)

    def new_line_mw_miles(self) -> float:
        return sum(line.capacity_mw * line.length_mi for line in self.new_dc_lines)


def apply_macrogrid_design(net: Network, design: MacroGridDesign) -> Network:
    """Raise B2B capacities and append the design's new DC lines.

    Seam labels of new lines are inferred from the interconnections of
    their endpoint buses. Capacity reductions are rejected.
    """
    by_id = dict(net.dc_by_id)
    for up in design.b2b_upgrades:
        if up.dc_element not in by_id:
            raise ScenarioError(f"design upgrades unknown dc element {up.dc_element}")
        old = by_id[up.dc_element]
        if up.new_capacity_mw < old.capacity:
            raise ScenarioError(
                f"dc element {up.dc_element}: downgrade {old.capacity} -> "
                f"{up.new_capacity_mw} MW not allowed"
            )
        by_id[up.dc_element] = replace(old, capacity=up.new_capacity_mw)

    elements = [by_id[e.id] for e in net.dc_elements]
    next_id = max((e.id for e in net.dc_elements), default=0) + 1
    bus_ids = {b.id for b in net.buses}
    for line in design.new_dc_lines:
        if line.from_bus not in bus_ids or line.to_bus not in bus_ids:
            raise ScenarioError(
                f"new dc line references unknown bus "
                f"({line.from_bus} or {line.to_bus})"
            )
        seam = seam_between(
            net.bus_by_id[line.from_bus].interconnection,
            net.bus_by_id[line.to_bus].interconnection,
        )
        elements.append(
            DcElement(
                id=next_id,
                from_bus=line.from_bus,
                to_bus=line.to_bus,
                capacity=line.capacity_mw,
                kind=DcKind.LINE,
                length=line.length_mi,
                seam=seam,
            )
        )
        next_id += 1
    return net.with_dc_elements(elements)


# --- serialization ---------------------------------------------------------


def design_to_dict(design: MacroGridDesign) -> dict:
    return {
        "name": design.name,
        "b2b_upgrades": [
            {
                "dc_element": u.dc_element,
                "new_capacity_mw": u.new_capacity_mw,
                "label": u.label,
                "prev_capacity_mw": u.prev_capacity_mw,
            }
            for u in design.b2b_upgrades
        ],
        "new_dc_lines": [
            {
                "from_bus": l.from_bus,
                "to_bus": l.to_bus,
                "capacity_mw": l.capacity_mw,
                "length_mi": l.length_mi,
                "label": l.label,
            }
            for l in design.new_dc_lines
        ],
    }


def design_from_dict(data: dict) -> MacroGridDesign:
    return MacroGridDesign(
        name=data.get("name", "custom"),
        b2b_upgrades=tuple(
            B2bUpgrade(
                dc_element=int(u["dc_element"]),
                new_capacity_mw=float(u["new_capacity_mw"]),
                label=u.get("label", ""),
                prev_capacity_mw=(
                    float(u["prev_capacity_mw"])
                    if u.get("prev_capacity_mw") is not None
                    else None
                ),
            )
            for u in data.get("b2b_upgrades", [])
        ),
        new_dc_lines=tuple(
            NewDcLine(
                from_bus=int(l["from_bus"]),
                to_bus=int(l["to_bus"]),
                capacity_mw=float(l["capacity_mw"]),
                length_mi=float(l["length_mi"]),
                label=l.get("label", ""),
            )
            for l in data.get("new_dc_lines", [])
        ),
    )


def load_design(path: str | Path) -> MacroGridDesign:
    with open(path) as fh:
        return design_from_dict(json.load(fh))


@dataclass(frozen=True)
class ScenarioSpec:
    """Everything needed to turn a base-year dataset into a target year."""

    name: str
    base_year: int = 2020
    target_year: int = 2030
    fleet_changes: FleetChangeSet = field(default_factory=FleetChangeSet)
    demand_growth_override: dict[int, float] = field(default_factory=dict)
    #: per-state (solar MW, wind MW) additions; None means solve-by-expansion
    #: (no pre-build, the expansion loop must deliver existing renewables).
    renewable_additions: dict[str, tuple[float, float]] | None = None
    goals: GoalSpec = field(default_factory=lambda: GoalSpec(fractions={}))
    design: MacroGridDesign | None = None
    cost_book: "CostBook | None" = None

    @property
    def years(self) -> int:
        return self.target_year - self.base_year


def build_scenario(
    net: Network,
    profiles: ProfileSet,
    spec: ScenarioSpec,
    apply_design: bool = True,
) -> tuple[Network, ProfileSet]:
    """Apply a full scenario: fleet, demand growth, renewables, HVDC design."""
    out = apply_fleet_changes(net, spec.fleet_changes)
    if spec.renewable_additions:
        out = add_renewables_proportional(out, spec.renewable_additions)
    if apply_design and spec.design is not None:
        out = apply_macrogrid_design(out, spec.design)
    validate_network(out)
    new_profiles = scale_demand(
        profiles, net, spec.years, spec.demand_growth_override
    )
    return out, new_profiles


def scenario_from_dict(data: dict) -> ScenarioSpec:
    from .analytics import CostBook, costbook_from_dict

    fc = data.get("fleet_changes", {})
    additions = tuple(
        Generator(
            id=int(g["id"]),
            bus=int(g["bus"]),
            fuel=Fuel(g["fuel"]),
            capacity=float(g["capacity_mw"]),
            marginal_cost=float(g["marginal_cost"]),
            ramp_limit=float(g["ramp_mw_h"]),
            co2_rate=float(g.get("co2_t_mwh", 0.0)),
            nox_rate=float(g.get("nox_t_mwh", 0.0)),
            so2_rate=float(g.get("so2_t_mwh", 0.0)),
            profiled=bool(g.get("profiled", False)),
        )
        for g in fc.get("additions", [])
    )
    scale = {
        (str(row["state"]), Fuel(row["fuel"])): float(row["factor"])
        for row in fc.get("scale_factors", [])
    }
    goals_data = data.get("goals", {})
    goals = GoalSpec(
        fractions={str(k): float(v) for k, v in goals_data.get("fractions", {}).items()},
        goal_kind=goals_data.get("goal_kind", "clean"),
        pools=tuple(tuple(p) for p in goals_data.get("pools", [])),
        cross_seam_pooling=bool(goals_data.get("cross_seam_pooling", False)),
    )
    additions_raw = data.get("renewable_additions", "solve-by-expansion")
    if additions_raw == "solve-by-expansion" or additions_raw is None:
        renewable_additions = None
    else:
        renewable_additions = {
            str(state): (
                float(v.get("solar_mw", 0.0)),
                float(v.get("wind_mw", 0.0)),
            )
            for state, v in additions_raw.items()
        }
    design = data.get("design")
    cost_book = data.get("cost_book")
    return ScenarioSpec(
        name=str(data.get("name", "scenario")),
        base_year=int(data.get("base_year", 2020)),
        target_year=int(data.get("target_year", 2030)),
        fleet_changes=FleetChangeSet(
            retirements=tuple(int(x) for x in fc.get("retirements", [])),
            additions=additions,
            scale_factors=scale,
        ),
        demand_growth_override={
            int(k): float(v)
            for k, v in data.get("demand_growth_override", {}).items()
        },
        renewable_additions=renewable_additions,
        goals=goals,
        design=design_from_dict(design) if design else None,
        cost_book=costbook_from_dict(cost_book) if cost_book else CostBook(),
    )


def load_scenario(path: str | Path) -> ScenarioSpec:
    path = Path(path)
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ScenarioError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if isinstance(data.get("design"), str):
        # Designs may be referenced by path relative to the scenario file.
        data = dict(data)
        with open(path.parent / data["design"]) as fh:
            data["design"] = json.load(fh)
    return scenario_from_dict(data)
