#!/usr/bin/env python3
"""Regenerate the bundled fixture datasets.

Every fixture is deterministic given --seed, and small enough to audit by
hand. Run from the repository root:

    python scripts/generate_fixtures.py --out fixtures --seed 0
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from macrogrid.io import save_dataset
from macrogrid.model import (
    AcBranch,
    BranchKind,
    Bus,
    DcElement,
    DcKind,
    Fuel,
    Generator,
    Interconnection,
    Network,
    ProfileSet,
    Zone,
    validate_network,
    validate_profiles,
)

W, E, T = Interconnection.WESTERN, Interconnection.EASTERN, Interconnection.ERCOT


def write_json(path: Path, data) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        json.dump(data, fh, indent=2, sort_keys=True)
        fh.write("\n")


# --- 3bus: the smallest complete dataset -------------------------------------


def make_threebus(out: Path) -> None:
    zones = (Zone(1, "coast", "CA", W, 0.01),)
    buses = (
        Bus(1, 1, "CA", W, 0.2),
        Bus(2, 1, "CA", W, 0.3),
        Bus(3, 1, "CA", W, 0.5),
    )
    branches = (
        AcBranch(1, 1, 2, 10.0, 100.0, 120.0),
        AcBranch(2, 2, 3, 10.0, 60.0, 80.0),
        AcBranch(3, 1, 3, 5.0, 40.0, 150.0),
    )
    gens = (
        Generator(1, 1, Fuel.WIND, 80.0, 0.0, 80.0, profiled=True),
        Generator(2, 2, Fuel.NG, 100.0, 30.0, 40.0, co2_rate=0.4,
                  nox_rate=0.0003, so2_rate=0.0001),
        Generator(3, 3, Fuel.COAL, 60.0, 20.0, 10.0, co2_rate=1.0,
                  nox_rate=0.0006, so2_rate=0.0012),
    )
    net = validate_network(Network(buses, branches, (), gens, zones, name="3bus"))

    hours = 48
    t = np.arange(hours)
    demand = 100.0 + 30.0 * np.sin(2 * np.pi * (t - 9) / 24.0)
    wind = 0.6 - 0.3 * np.sin(2 * np.pi * (t - 9) / 24.0)
    profiles = ProfileSet(
        hours,
        {1: np.round(demand, 2)},
        {1: np.round(np.clip(wind, 0.0, 1.0), 3)},
    )
    validate_profiles(profiles, net)
    save_dataset(net, profiles, out / "3bus")
    write_json(
        out / "3bus" / "base.json",
        {
            "name": "base",
            "base_year": 2020,
            "target_year": 2020,
            "renewable_additions": "solve-by-expansion",
            "goals": {
                "goal_kind": "renewable",
                "fractions": {"CA": 0.3},
                "pools": [["CA"]],
                "cross_seam_pooling": False,
            },
        },
    )


# --- bottleneck: cheap remote wind behind an undersized corridor ---------------


def make_bottleneck(out: Path) -> None:
    zones = (Zone(1, "desert", "NM", W, 0.0),)
    buses = (
        Bus(1, 1, "NM", W, 0.0),  # wind site, no load
        Bus(2, 1, "NM", W, 0.2),
        Bus(3, 1, "NM", W, 0.8),  # main load center
    )
    branches = (
        AcBranch(1, 1, 2, 8.0, 10.0, 200.0),  # the corridor to upgrade
        AcBranch(2, 2, 3, 8.0, 200.0, 50.0),
    )
    gens = (
        Generator(1, 1, Fuel.WIND, 60.0, 0.0, 60.0, profiled=True),
        Generator(2, 3, Fuel.NG, 100.0, 40.0, 100.0, co2_rate=0.5,
                  nox_rate=0.0003, so2_rate=0.0001),
    )
    net = validate_network(
        Network(buses, branches, (), gens, zones, name="bottleneck")
    )
    hours = 48
    profiles = ProfileSet(
        hours,
        {1: np.full(hours, 50.0)},
        {1: np.ones(hours)},
    )
    validate_profiles(profiles, net)
    save_dataset(net, profiles, out / "bottleneck")
    write_json(
        out / "bottleneck" / "scenario.json",
        {
            "name": "bottleneck-goal",
            "base_year": 2020,
            "target_year": 2030,
            "renewable_additions": "solve-by-expansion",
            "goals": {
                "goal_kind": "renewable",
                "fractions": {"NM": 0.6},
                "pools": [["NM"]],
                "cross_seam_pooling": False,
            },
        },
    )


# --- mini-US: three interconnections, four weeks ------------------------------

# Zone table: id, name, state, interconnection, growth, mean demand MW.
MINIUS_ZONES = [
    (1, "pacific-nw", "WA", W, 0.010, 1200.0),
    (2, "california", "CA", W, 0.009, 3000.0),
    (3, "southwest", "AZ", W, 0.012, 1100.0),
    (4, "plains-north", "MN", E, 0.008, 1500.0),
    (5, "plains-south", "OK", E, 0.008, 1200.0),
    (6, "midwest", "IL", E, 0.007, 2800.0),
    (7, "northeast", "NY", E, 0.006, 2500.0),
    (8, "southeast", "GA", E, 0.011, 2200.0),
    (9, "texas", "TX", T, 0.017, 3000.0),
]

# Bus table: id, zone, share. Names are for the reader; only ids matter.
MINIUS_BUSES = [
    # WA: 1 Seattle load, 2 Columbia hydro, 3 east-WA wind / seam edge
    (1, 1, 0.70), (2, 1, 0.25), (3, 1, 0.05),
    # CA: 4 NorCal, 5 SoCal, 6 desert solar, 7 gas hub
    (4, 2, 0.30), (5, 2, 0.50), (6, 2, 0.05), (7, 2, 0.15),
    # AZ: 8 Phoenix, 9 solar field, 10 nuclear / east edge
    (8, 3, 0.70), (9, 3, 0.10), (10, 3, 0.20),
    # MN: 11 cities, 12 wind belt, 13 west edge
    (11, 4, 0.80), (12, 4, 0.15), (14, 4, 0.05),
    # OK: 15 load, 16 wind belt, 17 west edge
    (15, 5, 0.70), (16, 5, 0.20), (17, 5, 0.10),
    # IL: 18 Chicago, 19 downstate
    (18, 6, 0.75), (19, 6, 0.25),
    # NY: 20 NYC, 21 upstate hydro
    (20, 7, 0.80), (21, 7, 0.20),
    # GA: 22 Atlanta, 23 coastal
    (22, 8, 0.70), (23, 8, 0.30),
    # TX: 24 Dallas, 25 Houston, 26 west-TX wind, 27 Sweetwater hub, 28 solar
    (24, 9, 0.35), (25, 9, 0.40), (26, 9, 0.10), (27, 9, 0.05), (29, 9, 0.10),
]

# Branches: id, from, to, susceptance, capacity MW, length mi, kind.
MINIUS_BRANCHES = [
    # Western internal
    (1, 1, 2, 8.0, 1400.0, 150.0, "line"),
    (2, 2, 3, 6.0, 700.0, 180.0, "line"),
    (3, 2, 4, 5.0, 1100.0, 600.0, "line"),     # NW-California intertie
    (4, 4, 5, 8.0, 2200.0, 380.0, "line"),
    (5, 5, 6, 7.0, 2400.0, 150.0, "line"),     # desert solar feed-in
    (6, 5, 7, 9.0, 1500.0, 60.0, "line"),
    (7, 5, 8, 5.0, 1100.0, 360.0, "line"),     # CA-AZ corridor
    (8, 8, 9, 8.0, 1800.0, 80.0, "line"),      # AZ solar feed-in
    (9, 8, 10, 9.0, 1400.0, 0.0, "transformer"),
    (10, 6, 9, 4.0, 900.0, 250.0, "line"),
    (11, 3, 10, 3.0, 400.0, 800.0, "line"),    # long inland spine
    # Eastern internal
    (12, 11, 12, 8.0, 700.0, 120.0, "line"),   # MN wind feed-in
    (13, 11, 14, 7.0, 500.0, 150.0, "line"),
    (14, 12, 14, 6.0, 400.0, 100.0, "line"),
    (15, 11, 18, 6.0, 1000.0, 400.0, "line"),  # MN-Chicago
    (16, 15, 16, 8.0, 800.0, 140.0, "line"),   # OK wind feed-in
    (17, 15, 17, 7.0, 500.0, 120.0, "line"),
    (18, 16, 17, 6.0, 400.0, 90.0, "line"),
    (19, 15, 19, 5.0, 900.0, 450.0, "line"),   # OK-downstate IL (Memphis-ish path)
    (20, 18, 19, 9.0, 1800.0, 0.0, "transformer"),
    (21, 18, 20, 5.0, 1600.0, 700.0, "line"),  # Chicago-NYC
    (22, 20, 21, 8.0, 1500.0, 250.0, "line"),
    (23, 19, 22, 5.0, 900.0, 500.0, "line"),   # downstate-Atlanta
    (24, 22, 23, 8.0, 1000.0, 220.0, "line"),
    (25, 15, 22, 4.0, 500.0, 750.0, "line"),   # OK-GA long path
    (26, 12, 18, 5.0, 600.0, 430.0, "line"),   # wind belt direct to Chicago
    # ERCOT internal
    (27, 24, 25, 9.0, 2200.0, 240.0, "line"),
    (28, 24, 26, 7.0, 800.0, 260.0, "line"),   # west TX wind corridor
    (29, 26, 27, 8.0, 600.0, 40.0, "line"),
    (30, 25, 29, 8.0, 600.0, 150.0, "line"),   # TX solar feed-in
    (31, 24, 27, 6.0, 700.0, 230.0, "line"),
]

# Generators: id, bus, fuel, cap MW, $/MWh, ramp MW/h, co2, nox, so2, profiled.
MINIUS_GENERATORS = [
    # Western
    (1, 2, "hydro", 1800.0, 1.0, 1800.0, 0, 0, 0, True),
    (2, 3, "wind", 400.0, 0.5, 400.0, 0, 0, 0, True),
    (3, 1, "ng", 900.0, 34.0, 450.0, 0.42, 0.0003, 0.0001, False),
    (4, 4, "ng", 1200.0, 32.0, 600.0, 0.42, 0.0003, 0.0001, False),
    (5, 6, "solar", 1200.0, 0.2, 1200.0, 0, 0, 0, True),
    (6, 7, "ng", 2600.0, 36.0, 1300.0, 0.40, 0.0003, 0.0001, False),
    (7, 5, "wind", 300.0, 0.5, 300.0, 0, 0, 0, True),
    (8, 9, "solar", 900.0, 0.2, 900.0, 0, 0, 0, True),
    (9, 10, "nuclear", 1000.0, 7.0, 160.0, 0, 0, 0, False),
    (10, 8, "coal", 900.0, 21.0, 300.0, 0.95, 0.0006, 0.0011, False),
    (11, 8, "ng", 800.0, 38.0, 400.0, 0.45, 0.0003, 0.0001, False),
    # Eastern
    (12, 12, "wind", 1200.0, 0.5, 1200.0, 0, 0, 0, True),
    (13, 16, "wind", 1500.0, 0.5, 1500.0, 0, 0, 0, True),
    (14, 11, "coal", 1100.0, 20.0, 350.0, 0.98, 0.0007, 0.0013, False),
    (15, 11, "ng", 900.0, 33.0, 450.0, 0.43, 0.0003, 0.0001, False),
    (16, 15, "ng", 1200.0, 31.0, 600.0, 0.43, 0.0003, 0.0001, False),
    (17, 15, "coal", 700.0, 22.0, 230.0, 0.97, 0.0007, 0.0013, False),
    (18, 18, "nuclear", 1500.0, 6.0, 240.0, 0, 0, 0, False),
    (19, 18, "coal", 1500.0, 19.0, 500.0, 0.99, 0.0007, 0.0014, False),
    (20, 19, "ng", 1500.0, 35.0, 750.0, 0.42, 0.0003, 0.0001, False),
    (21, 20, "ng", 2300.0, 39.0, 1150.0, 0.40, 0.0002, 0.0001, False),
    (22, 21, "hydro", 900.0, 1.0, 900.0, 0, 0, 0, True),
    (23, 21, "nuclear", 700.0, 6.5, 120.0, 0, 0, 0, False),
    (24, 22, "coal", 1300.0, 21.0, 430.0, 0.96, 0.0006, 0.0012, False),
    (25, 22, "ng", 1400.0, 34.0, 700.0, 0.42, 0.0003, 0.0001, False),
    (26, 23, "solar", 400.0, 0.2, 400.0, 0, 0, 0, True),
    (27, 23, "ng", 900.0, 37.0, 450.0, 0.41, 0.0003, 0.0001, False),
    (28, 19, "wind", 300.0, 0.5, 300.0, 0, 0, 0, True),
    # ERCOT
    (29, 26, "wind", 2000.0, 0.5, 2000.0, 0, 0, 0, True),
    (30, 29, "solar", 700.0, 0.2, 700.0, 0, 0, 0, True),
    (31, 24, "ng", 1800.0, 30.0, 900.0, 0.44, 0.0003, 0.0001, False),
    (32, 25, "ng", 2200.0, 33.0, 1100.0, 0.44, 0.0003, 0.0001, False),
    (33, 25, "coal", 800.0, 22.0, 260.0, 0.97, 0.0007, 0.0013, False),
    (34, 24, "nuclear", 1000.0, 6.0, 160.0, 0, 0, 0, False),
]

# Existing cross-seam B2B stations (tiny, as today): id, from, to, cap MW.
MINIUS_DC = [
    (1, 17, 10, 200.0),  # OK west edge <-> AZ east edge (East-West)
    (2, 14, 3, 150.0),   # MN west edge <-> WA east edge (East-West)
    (3, 16, 24, 300.0),  # OK wind belt <-> Dallas (East-ERCOT)
]


def minius_network() -> Network:
    zones = tuple(Zone(z[0], z[1], z[2], z[3], z[4]) for z in MINIUS_ZONES)
    zone_by_id = {z.id: z for z in zones}
    buses = tuple(
        Bus(b[0], b[1], zone_by_id[b[1]].state, zone_by_id[b[1]].interconnection, b[2])
        for b in MINIUS_BUSES
    )
    branches = tuple(
        AcBranch(b[0], b[1], b[2], b[3], b[4], b[5], BranchKind(b[6]))
        for b in MINIUS_BRANCHES
        if b[6] is not None
    )
    dc = tuple(DcElement(d[0], d[1], d[2], d[3], DcKind.B2B) for d in MINIUS_DC)
    gens = tuple(
        Generator(g[0], g[1], Fuel(g[2]), g[3], g[4], g[5],
                  co2_rate=g[6], nox_rate=g[7], so2_rate=g[8], profiled=g[9])
        for g in MINIUS_GENERATORS
    )
    return validate_network(
        Network(buses, branches, dc, gens, zones, base_mva=100.0, name="minius")
    )


def minius_profiles(net: Network, seed: int) -> ProfileSet:
    """Four weeks of hourly demand and availability.

    Solar follows a clear diurnal bell (West peaks later in UTC-ish model
    time), wind is strongest at night with multi-day weather systems, and
    demand peaks in the early evening.
    """
    rng = np.random.default_rng(seed)
    hours = 672
    t = np.arange(hours)
    hod = t % 24

    demand = {}
    for zid, _, state, icx, _, base in MINIUS_ZONES:
        evening = 1.0 + 0.22 * np.cos(2 * np.pi * (hod - 18) / 24.0)
        weekday = np.where((t // 24) % 7 < 5, 1.04, 0.93)
        weekly = 1.0 + 0.05 * np.sin(2 * np.pi * t / (24.0 * 9.0) + zid)
        noise = 1.0 + 0.02 * rng.standard_normal(hours)
        demand[zid] = np.round(base * evening * weekday * weekly * np.clip(noise, 0.9, 1.1), 2)

    availability = {}
    for g in net.generators:
        if not g.profiled:
            continue
        icx = net.bus_by_id[g.bus].interconnection
        if g.fuel == Fuel.SOLAR:
            # West sun lags East by a few model hours.
            lag = {W: 2.0, E: -1.0, T: 0.5}[icx]
            sun = np.sin(np.pi * (hod - 6.0 - lag) / 12.0)
            day = np.clip(sun, 0.0, None) ** 1.2
            season = 1.0 - 0.15 * np.sin(2 * np.pi * t / (24.0 * 14.0) + g.id)
            series = 0.95 * day * season
        elif g.fuel == Fuel.WIND:
            night = 0.54 + 0.21 * np.cos(2 * np.pi * (hod - 2.0) / 24.0)
            system = 0.25 * np.sin(2 * np.pi * t / (24.0 * 3.1) + 0.8 * g.id)
            gust = 0.05 * rng.standard_normal(hours)
            series = night + system + gust
        else:  # hydro: steady with a gentle seasonal ramp
            series = 0.55 + 0.1 * np.sin(2 * np.pi * t / (24.0 * 21.0) + g.id)
        availability[g.id] = np.round(np.clip(series, 0.0, 1.0), 3)
    return ProfileSet(hours, demand, availability)


#: Ambitious clean-energy fractions (current-goal states stepped up).
MINIUS_AMBITIOUS_FRACTIONS = {
    "WA": 0.54, "CA": 0.72, "AZ": 0.72,
    "MN": 0.87, "OK": 0.87, "IL": 0.70, "NY": 0.54,
    "TX": 0.59,
}

#: Per-state (solar MW, wind MW) additions for the ambitious scenarios.
MINIUS_AMBITIOUS_ADDITIONS = {
    "WA": {"solar_mw": 0.0, "wind_mw": 1200.0},
    "CA": {"solar_mw": 3500.0, "wind_mw": 600.0},
    "AZ": {"solar_mw": 2500.0, "wind_mw": 0.0},
    "MN": {"solar_mw": 0.0, "wind_mw": 3800.0},
    "OK": {"solar_mw": 0.0, "wind_mw": 5500.0},
    "IL": {"solar_mw": 0.0, "wind_mw": 900.0},
    "TX": {"solar_mw": 2200.0, "wind_mw": 3000.0},
}

MINIUS_COSTBOOK = {
    "solar_capex": 1.085e6,
    "wind_capex": 1.377e6,
    "ac_line_cost": 1900.0,
    "transformer_cost": 70000.0,
    "dc_line_cost": 513.0,
    "dc_terminal_cost": 135000.0,
    "terminals_per_b2b": 2,
}


def minius_designs() -> dict[str, dict]:
    """Design analogues mirroring the four Macro Grid layouts."""
    d1 = {"name": "Design1", "b2b_upgrades": [], "new_dc_lines": []}
    d2a = {
        "name": "Design2a",
        "b2b_upgrades": [
            {"dc_element": 1, "new_capacity_mw": 3600.0, "label": "OK-AZ B2B",
             "prev_capacity_mw": 200.0},
            {"dc_element": 2, "new_capacity_mw": 2600.0, "label": "MN-WA B2B",
             "prev_capacity_mw": 150.0},
            {"dc_element": 3, "new_capacity_mw": 1500.0, "label": "OK-TX B2B",
             "prev_capacity_mw": 300.0},
        ],
        "new_dc_lines": [],
    }
    d2b = {
        "name": "Design2b",
        "b2b_upgrades": [
            {"dc_element": 1, "new_capacity_mw": 1200.0, "label": "OK-AZ B2B",
             "prev_capacity_mw": 200.0},
            {"dc_element": 2, "new_capacity_mw": 900.0, "label": "MN-WA B2B",
             "prev_capacity_mw": 150.0},
            {"dc_element": 3, "new_capacity_mw": 1500.0, "label": "OK-TX B2B",
             "prev_capacity_mw": 300.0},
        ],
        "new_dc_lines": [
            {"from_bus": 12, "to_bus": 1, "capacity_mw": 2500.0,
             "length_mi": 1400.0, "label": "MN wind - Seattle"},
            {"from_bus": 16, "to_bus": 5, "capacity_mw": 2500.0,
             "length_mi": 1300.0, "label": "OK wind - SoCal"},
        ],
    }
    d3 = {
        "name": "Design3",
        "b2b_upgrades": [],
        "new_dc_lines": [
            {"from_bus": 12, "to_bus": 1, "capacity_mw": 1300.0,
             "length_mi": 1400.0, "label": "MN wind - Seattle"},
            {"from_bus": 16, "to_bus": 5, "capacity_mw": 1300.0,
             "length_mi": 1300.0, "label": "OK wind - SoCal"},
            {"from_bus": 16, "to_bus": 22, "capacity_mw": 1200.0,
             "length_mi": 750.0, "label": "OK wind - Atlanta"},
            {"from_bus": 16, "to_bus": 27, "capacity_mw": 1200.0,
             "length_mi": 250.0, "label": "OK wind - Sweetwater"},
            {"from_bus": 27, "to_bus": 9, "capacity_mw": 1200.0,
             "length_mi": 650.0, "label": "Sweetwater - AZ solar"},
            {"from_bus": 12, "to_bus": 20, "capacity_mw": 1200.0,
             "length_mi": 1000.0, "label": "MN wind - NYC"},
        ],
    }
    return {"design1": d1, "design2a": d2a, "design2b": d2b, "design3": d3}


def make_minius(out: Path, seed: int) -> None:
    net = minius_network()
    profiles = minius_profiles(net, seed)
    validate_profiles(profiles, net)
    root = out / "minius"
    save_dataset(net, profiles, root)

    designs = minius_designs()
    for stem, design in designs.items():
        write_json(root / "designs" / f"{stem}.json", design)

    goal_states = sorted(MINIUS_AMBITIOUS_FRACTIONS)
    for stem, design in designs.items():
        scenario = {
            "name": f"ambitious-{stem}",
            "base_year": 2020,
            "target_year": 2030,
            "renewable_additions": MINIUS_AMBITIOUS_ADDITIONS,
            "goals": {
                "goal_kind": "renewable",
                "fractions": MINIUS_AMBITIOUS_FRACTIONS,
                "pools": [goal_states],
                "cross_seam_pooling": True,
            },
            "design": f"designs/{stem}.json",
            "cost_book": MINIUS_COSTBOOK,
        }
        write_json(root / f"ambitious-{stem}.json", scenario)

    write_json(
        root / "current-goals.json",
        {
            "name": "current-goals",
            "base_year": 2020,
            "target_year": 2030,
            "renewable_additions": {
                "CA": {"solar_mw": 900.0, "wind_mw": 150.0},
                "AZ": {"solar_mw": 400.0, "wind_mw": 0.0},
                "WA": {"solar_mw": 0.0, "wind_mw": 250.0},
                "MN": {"solar_mw": 0.0, "wind_mw": 700.0},
                "OK": {"solar_mw": 0.0, "wind_mw": 800.0},
                "TX": {"solar_mw": 500.0, "wind_mw": 900.0},
            },
            "goals": {
                "goal_kind": "renewable",
                "fractions": {
                    "WA": 0.12, "CA": 0.28, "AZ": 0.22,
                    "MN": 0.35, "OK": 0.35, "IL": 0.18, "NY": 0.12,
                    "TX": 0.28,
                },
                "pools": [["WA", "CA", "AZ"], ["MN", "OK", "IL", "NY"], ["TX"]],
                "cross_seam_pooling": False,
            },
            "design": None,
            "cost_book": MINIUS_COSTBOOK,
        },
    )


# --- US-scale Macro Grid designs ----------------------------------------------
#
# Reference converter-station upgrade sets and the 16-line HVDC overlay.
# Station ids are 1..9 in table order; a dataset using these files must
# number its stations accordingly. Line endpoints of the overlay are
# dataset-specific: from_bus/to_bus here are abstract slot numbers (101+)
# that must be re-bound before the design can be applied to a network.

US_B2B_STATIONS = [
    # label, seam, previous MW, Design 2a MW, Design 2b MW
    ("Blackwater", "East-West", 200.0, 399.0, 234.0),
    ("Eddy", "East-West", 200.0, 2895.0, 338.0),
    ("Lamar", "East-West", 210.0, 9541.0, 2285.0),
    ("Miles City", "East-West", 200.0, 2957.0, 1319.0),
    ("Oklaunion", "East-ERCOT", 200.0, 3871.0, 3871.0),
    ("Rapid City", "East-West", 200.0, 4166.0, 1589.0),
    ("Sidney", "East-West", 200.0, 1108.0, 1255.0),
    ("Stegal", "East-West", 100.0, 5943.0, 1782.0),
    ("Welsh", "East-ERCOT", 600.0, 4271.0, 4271.0),
]

US_D2B_LINES = [
    ("Washington - Iowa", 9500.0),
    ("Utah - Missouri", 9500.0),
    ("Arizona - Oklahoma", 9500.0),
]

US_D3_LINES = [
    ("Orlando FL - Atlanta GA", "Eastern", "Eastern"),
    ("Atlanta GA - Panola TX", "Eastern", "Eastern"),
    ("Panola TX - St. Louis MO", "Eastern", "Eastern"),
    ("Panola TX - Sweetwater TX", "Eastern", "ERCOT"),
    ("St. Louis MO - Brush CO", "Eastern", "Western"),
    ("St. Louis MO - Davenport IA", "Eastern", "Eastern"),
    ("Davenport IA - Minneapolis MN", "Eastern", "Eastern"),
    ("Minneapolis MN - Colstrip MT", "Eastern", "Western"),
    ("Colstrip MT - Seattle WA", "Western", "Western"),
    ("Seattle WA - Reno NV", "Western", "Western"),
    ("Reno NV - Victorville CA", "Western", "Western"),
    ("Victorville CA - Las Vegas NV", "Western", "Western"),
    ("Las Vegas NV - Brush CO", "Western", "Western"),
    ("Brush CO - Amarillo TX", "Western", "Eastern"),
    ("Victorville CA - Palo Verde AZ", "Western", "Western"),
    ("Palo Verde AZ - Sweetwater TX", "Western", "ERCOT"),
]


def make_us_designs(out: Path) -> None:
    root = out / "designs"
    write_json(
        root / "us_design2a_b2b.json",
        {
            "name": "Design2a",
            "b2b_upgrades": [
                {"dc_element": i + 1, "new_capacity_mw": d2a,
                 "prev_capacity_mw": prev, "label": label, "seam": seam}
                for i, (label, seam, prev, d2a, _) in enumerate(US_B2B_STATIONS)
            ],
            "new_dc_lines": [],
        },
    )
    write_json(
        root / "us_design2b_hvdc.json",
        {
            "name": "Design2b",
            "b2b_upgrades": [
                {"dc_element": i + 1, "new_capacity_mw": d2b,
                 "prev_capacity_mw": prev, "label": label, "seam": seam}
                for i, (label, seam, prev, _, d2b) in enumerate(US_B2B_STATIONS)
            ],
            "new_dc_lines": [
                {"from_bus": 101 + k, "to_bus": 201 + k, "capacity_mw": mw,
                 "length_mi": 0.0, "label": label}
                for k, (label, mw) in enumerate(US_D2B_LINES)
            ],
            "_note": "line endpoints and lengths are dataset-specific; re-bind before applying",
        },
    )
    write_json(
        root / "us_design3_overlay.json",
        {
            "name": "Design3",
            "b2b_upgrades": [],
            "new_dc_lines": [
                {"from_bus": 101 + k, "to_bus": 201 + k, "capacity_mw": 8000.0,
                 "length_mi": 0.0, "label": label,
                 "from_interconnect": a, "to_interconnect": b}
                for k, (label, a, b) in enumerate(US_D3_LINES)
            ],
            "_note": "line endpoints and lengths are dataset-specific; re-bind before applying",
        },
    )


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path, default=Path("fixtures"))
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument(
        "--only", choices=["3bus", "bottleneck", "minius", "designs"], default=None
    )
    args = parser.parse_args()
    if args.only in (None, "3bus"):
        make_threebus(args.out)
    if args.only in (None, "bottleneck"):
        make_bottleneck(args.out)
    if args.only in (None, "minius"):
        make_minius(args.out, args.seed)
    if args.only in (None, "designs"):
        make_us_designs(args.out)
    print(f"fixtures written under {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
