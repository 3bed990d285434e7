"""Grid data model: buses, branches, DC elements, generators, zones, profiles.

Networks and profile sets are immutable after construction; every transform
in the toolkit returns a new object. Validation is collected into itemized
violation lists so that dataset problems can be reported all at once.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from functools import cached_property

import numpy as np

ZONE_SHARE_TOL = 1e-9
DEMAND_GROWTH_BAND = (-0.05, 0.10)

MW_MILE_PER_TW_MILE = 1e6


class ValidationError(ValueError):
    """Raised when a network or profile set violates a structural invariant.

    ``violations`` holds one human-readable message per problem found.
    """

    def __init__(self, violations):
        if isinstance(violations, str):
            violations = [violations]
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class Interconnection(str, enum.Enum):
    WESTERN = "Western"
    EASTERN = "Eastern"
    ERCOT = "ERCOT"


class Fuel(str, enum.Enum):
    COAL = "coal"
    NG = "ng"
    NUCLEAR = "nuclear"
    HYDRO = "hydro"
    SOLAR = "solar"
    WIND = "wind"
    GEOTHERMAL = "geothermal"
    OIL = "oil"
    OTHER = "other"


#: Fuels whose hourly output is capped by an availability profile.
PROFILED_FUELS = frozenset({Fuel.SOLAR, Fuel.WIND, Fuel.HYDRO})
#: Fuels counting toward renewable-energy goals.
RENEWABLE_FUELS = frozenset({Fuel.SOLAR, Fuel.WIND, Fuel.GEOTHERMAL})
#: Fuels counting toward clean-energy goals.
CLEAN_FUELS = RENEWABLE_FUELS | {Fuel.HYDRO, Fuel.NUCLEAR}


class BranchKind(str, enum.Enum):
    LINE = "line"
    TRANSFORMER = "transformer"


class DcKind(str, enum.Enum):
    B2B = "b2b"
    LINE = "line"


class Seam(str, enum.Enum):
    EAST_WEST = "East-West"
    EAST_ERCOT = "East-ERCOT"
    WEST_ERCOT = "West-ERCOT"
    INTRA = "intra"


def seam_between(a: Interconnection, b: Interconnection) -> Seam:
    """Seam crossed by an element whose endpoints sit in ``a`` and ``b``."""
    if a == b:
        return Seam.INTRA
    pair = {a, b}
    if pair == {Interconnection.EASTERN, Interconnection.WESTERN}:
        return Seam.EAST_WEST
    if pair == {Interconnection.EASTERN, Interconnection.ERCOT}:
        return Seam.EAST_ERCOT
    return Seam.WEST_ERCOT


@dataclass(frozen=True)
class Bus:
    id: int
    zone_id: int
    state: str
    interconnection: Interconnection
    demand_share: float  # fraction of the zone's hourly demand served here


@dataclass(frozen=True)
class AcBranch:
    id: int
    from_bus: int
    to_bus: int
    susceptance: float  # per-unit
    capacity: float  # MW
    length: float  # miles; 0 for transformers
    kind: BranchKind = BranchKind.LINE


@dataclass(frozen=True)
class DcElement:
    id: int
    from_bus: int
    to_bus: int
    capacity: float  # MW
    kind: DcKind = DcKind.B2B
    length: float = 0.0  # miles; 0 for back-to-back stations
    seam: Seam | None = None


@dataclass(frozen=True)
class Generator:
    id: int
    bus: int
    fuel: Fuel
    capacity: float  # MW
    marginal_cost: float  # $/MWh
    ramp_limit: float  # MW/h
    co2_rate: float = 0.0  # tons/MWh
    nox_rate: float = 0.0
    so2_rate: float = 0.0
    profiled: bool = False


@dataclass(frozen=True)
class Zone:
    id: int
    name: str
    state: str
    interconnection: Interconnection
    demand_growth: float = 0.0  # fraction/year


@dataclass(frozen=True)
class Network:
    """Static grid: all component tables plus the per-unit power base."""

    buses: tuple[Bus, ...]
    branches: tuple[AcBranch, ...]
    dc_elements: tuple[DcElement, ...]
    generators: tuple[Generator, ...]
    zones: tuple[Zone, ...]
    base_mva: float = 100.0
    name: str = ""

    @cached_property
    def bus_by_id(self) -> dict[int, Bus]:
        return {b.id: b for b in self.buses}

    @cached_property
    def branch_by_id(self) -> dict[int, AcBranch]:
        return {br.id: br for br in self.branches}

    @cached_property
    def dc_by_id(self) -> dict[int, DcElement]:
        return {d.id: d for d in self.dc_elements}

    @cached_property
    def gen_by_id(self) -> dict[int, Generator]:
        return {g.id: g for g in self.generators}

    @cached_property
    def zone_by_id(self) -> dict[int, Zone]:
        return {z.id: z for z in self.zones}

    @cached_property
    def reference_buses(self) -> dict[Interconnection, int]:
        """One angle-reference bus per interconnection: the lowest bus id."""
        refs: dict[Interconnection, int] = {}
        for bus in self.buses:
            cur = refs.get(bus.interconnection)
            if cur is None or bus.id < cur:
                refs[bus.interconnection] = bus.id
        return refs

    def bus_state(self, bus_id: int) -> str:
        return self.bus_by_id[bus_id].state

    def with_branches(self, branches) -> "Network":
        return replace(self, branches=tuple(branches))

    def with_dc_elements(self, dc_elements) -> "Network":
        return replace(self, dc_elements=tuple(dc_elements))

    def with_generators(self, generators) -> "Network":
        return replace(self, generators=tuple(generators))


@dataclass(frozen=True)
class ProfileSet:
    """Hourly zone demand (MW) and per-plant availability (fraction of capacity).

    ``demand`` maps zone id to an array of length ``horizon_hours``;
    ``availability`` maps profiled generator id likewise, values in [0, 1].
    """

    horizon_hours: int
    demand: dict[int, np.ndarray]
    availability: dict[int, np.ndarray]

    def zone_demand(self, zone_id: int) -> np.ndarray:
        return self.demand[zone_id]


def _dupes(ids):
    seen, dup = set(), []
    for i in ids:
        if i in seen:
            dup.append(i)
        seen.add(i)
    return dup


def network_violations(net: Network) -> list[str]:
    """Collect every invariant violation in ``net`` (empty list when clean)."""
    out: list[str] = []
    for label, ids in (
        ("bus", [b.id for b in net.buses]),
        ("branch", [b.id for b in net.branches]),
        ("dc element", [d.id for d in net.dc_elements]),
        ("generator", [g.id for g in net.generators]),
        ("zone", [z.id for z in net.zones]),
    ):
        for d in _dupes(ids):
            out.append(f"duplicate {label} id {d}")

    zone_ids = {z.id for z in net.zones}
    bus_ids = {b.id for b in net.buses}

    for z in net.zones:
        lo, hi = DEMAND_GROWTH_BAND
        if not (lo <= z.demand_growth <= hi):
            out.append(
                f"zone {z.id}: demand_growth {z.demand_growth} outside sanity band [{lo}, {hi}]"
            )

    zone_share: dict[int, float] = {z.id: 0.0 for z in net.zones}
    for b in net.buses:
        if b.zone_id not in zone_ids:
            out.append(f"bus {b.id}: dangling zone reference {b.zone_id}")
            continue
        zone = net.zone_by_id[b.zone_id]
        if not (0.0 <= b.demand_share <= 1.0):
            out.append(f"bus {b.id}: demand_share {b.demand_share} outside [0, 1]")
        if b.interconnection != zone.interconnection:
            out.append(
                f"bus {b.id}: interconnection {b.interconnection.value} differs from "
                f"zone {zone.id} ({zone.interconnection.value})"
            )
        zone_share[b.zone_id] = zone_share.get(b.zone_id, 0.0) + b.demand_share
    for zid, total in zone_share.items():
        if abs(total - 1.0) > ZONE_SHARE_TOL and total != 0.0:
            out.append(f"zone {zid}: bus demand_share sums to {total}, expected 1")

    for br in net.branches:
        ctx = f"branch {br.id}"
        if br.from_bus == br.to_bus:
            out.append(f"{ctx}: from_bus equals to_bus ({br.from_bus})")
        for end in (br.from_bus, br.to_bus):
            if end not in bus_ids:
                out.append(f"{ctx}: dangling bus reference {end}")
        if br.from_bus in bus_ids and br.to_bus in bus_ids:
            a = net.bus_by_id[br.from_bus].interconnection
            b = net.bus_by_id[br.to_bus].interconnection
            if a != b:
                out.append(
                    f"{ctx}: AC branch joins interconnections {a.value} and {b.value}"
                )
        if br.capacity <= 0:
            out.append(f"{ctx}: capacity {br.capacity} must be > 0")
        if br.susceptance <= 0:
            out.append(f"{ctx}: susceptance {br.susceptance} must be > 0")
        if br.length < 0:
            out.append(f"{ctx}: negative length {br.length}")
        if br.kind == BranchKind.TRANSFORMER and br.length != 0:
            out.append(f"{ctx}: transformer must have length 0, got {br.length}")

    for d in net.dc_elements:
        ctx = f"dc element {d.id}"
        for end in (d.from_bus, d.to_bus):
            if end not in bus_ids:
                out.append(f"{ctx}: dangling bus reference {end}")
        if d.capacity <= 0:
            out.append(f"{ctx}: capacity {d.capacity} must be > 0")
        if d.kind == DcKind.B2B and d.length != 0:
            out.append(f"{ctx}: back-to-back station must have length 0, got {d.length}")
        if d.from_bus in bus_ids and d.to_bus in bus_ids:
            expected = seam_between(
                net.bus_by_id[d.from_bus].interconnection,
                net.bus_by_id[d.to_bus].interconnection,
            )
            if d.seam is not None and d.seam != expected:
                out.append(
                    f"{ctx}: declared seam {d.seam.value} does not match endpoints "
                    f"({expected.value})"
                )

    for g in net.generators:
        ctx = f"generator {g.id}"
        if g.bus not in bus_ids:
            out.append(f"{ctx}: dangling bus reference {g.bus}")
        if g.capacity < 0:
            out.append(f"{ctx}: negative capacity {g.capacity}")
        if g.ramp_limit < 0:
            out.append(f"{ctx}: negative ramp_limit {g.ramp_limit}")
        for rate, name in ((g.co2_rate, "co2"), (g.nox_rate, "nox"), (g.so2_rate, "so2")):
            if rate < 0:
                out.append(f"{ctx}: negative {name} rate {rate}")
        if g.fuel in PROFILED_FUELS and not g.profiled:
            out.append(f"{ctx}: fuel {g.fuel.value} must be profiled")

    out.extend(_connectivity_violations(net))
    return out


def _ac_adjacency(net: Network) -> dict[int, list[int]]:
    adj: dict[int, list[int]] = {b.id: [] for b in net.buses}
    for br in net.branches:
        if br.from_bus in adj and br.to_bus in adj:
            adj[br.from_bus].append(br.to_bus)
            adj[br.to_bus].append(br.from_bus)
    return adj


def _ac_components(net: Network) -> list[set[int]]:
    adj = _ac_adjacency(net)
    seen: set[int] = set()
    comps: list[set[int]] = []
    for b in net.buses:
        if b.id in seen:
            continue
        stack, comp = [b.id], set()
        while stack:
            cur = stack.pop()
            if cur in comp:
                continue
            comp.add(cur)
            stack.extend(n for n in adj[cur] if n not in comp)
        seen |= comp
        comps.append(comp)
    return comps


def _connectivity_violations(net: Network) -> list[str]:
    out = []
    comps = _ac_components(net)
    by_icx: dict[Interconnection, int] = {}
    for comp in comps:
        labels = {net.bus_by_id[b].interconnection for b in comp}
        if len(labels) > 1:
            names = ", ".join(sorted(x.value for x in labels))
            out.append(f"AC component spanning interconnections: {names}")
            continue
        icx = labels.pop()
        by_icx[icx] = by_icx.get(icx, 0) + 1
    for icx, count in by_icx.items():
        if count > 1:
            out.append(
                f"disconnected interconnection: {icx.value} splits into {count} AC components"
            )
    return out


def validate_network(net: Network) -> Network:
    """Raise :class:`ValidationError` if any invariant fails; return ``net``."""
    violations = network_violations(net)
    if violations:
        raise ValidationError(violations)
    return net


def profile_violations(profiles: ProfileSet, net: Network) -> list[str]:
    """Collect profile-set problems against ``net`` (empty list when clean)."""
    out: list[str] = []
    hh = profiles.horizon_hours
    for zid, series in profiles.demand.items():
        if zid not in net.zone_by_id:
            out.append(f"demand column for unknown zone {zid}")
        if len(series) != hh:
            out.append(f"demand series for zone {zid} has {len(series)} hours, expected {hh}")
        if np.any(np.asarray(series) < 0):
            out.append(f"negative demand in zone {zid}")
    for z in net.zones:
        if z.id not in profiles.demand:
            out.append(f"zone {z.id} missing from demand profiles")
    for gid, series in profiles.availability.items():
        if len(series) != hh:
            out.append(
                f"availability series for generator {gid} has {len(series)} hours, expected {hh}"
            )
        arr = np.asarray(series)
        if arr.size and (arr.min() < 0.0 or arr.max() > 1.0):
            hour = int(np.argmax((arr < 0.0) | (arr > 1.0)))
            out.append(
                f"generator {gid}: availability {arr[hour]:g} at hour {hour} outside [0, 1]"
            )
    for g in net.generators:
        if g.profiled and g.id not in profiles.availability:
            out.append(f"profiled generator {g.id} missing an availability column")
    return out


def validate_profiles(profiles: ProfileSet, net: Network) -> ProfileSet:
    violations = profile_violations(profiles, net)
    if violations:
        raise ValidationError(violations)
    return profiles


def interconnection_partition(net: Network) -> dict[int, Interconnection]:
    """Map each bus to its interconnection from AC connectivity alone.

    The connected components of the AC-branch graph must agree with the
    declared labels; a component mixing labels raises ValidationError.
    """
    out: dict[int, Interconnection] = {}
    for comp in _ac_components(net):
        labels = {net.bus_by_id[b].interconnection for b in comp}
        if len(labels) > 1:
            names = ", ".join(sorted(x.value for x in labels))
            raise ValidationError(
                [f"AC component spanning interconnections: {names}"]
            )
        label = labels.pop()
        for b in comp:
            out[b] = label
    return out


@dataclass(frozen=True)
class MwMileTotals:
    """Capacity-distance aggregates in TW-miles (1 TW-mile = 1e6 MW-miles)."""

    ac_tw_miles: float
    dc_tw_miles: float


def aggregate_mw_miles(net: Network) -> MwMileTotals:
    """Sum capacity x length over AC branches; DC lines reported separately."""
    ac = sum(br.capacity * br.length for br in net.branches)
    dc = sum(d.capacity * d.length for d in net.dc_elements)
    return MwMileTotals(ac / MW_MILE_PER_TW_MILE, dc / MW_MILE_PER_TW_MILE)


def bus_demand_matrix(net: Network, profiles: ProfileSet) -> np.ndarray:
    """Hourly demand per bus, shape (horizon_hours, n_buses) in bus order."""
    out = np.zeros((profiles.horizon_hours, len(net.buses)))
    for j, bus in enumerate(net.buses):
        out[:, j] = profiles.demand[bus.zone_id] * bus.demand_share
    return out


def availability_matrix(net: Network, profiles: ProfileSet) -> np.ndarray:
    """Available MW per generator, shape (horizon_hours, n_generators).

    Dispatchable units get their full capacity every hour.
    """
    out = np.empty((profiles.horizon_hours, len(net.generators)))
    for j, g in enumerate(net.generators):
        if g.profiled:
            out[:, j] = profiles.availability[g.id] * g.capacity
        else:
            out[:, j] = g.capacity
    return out
