"""Dataset directory I/O.

A dataset is a directory of plain CSV tables plus a ``manifest.json``:

* ``buses.csv``        id, zone_id, state, interconnection, demand_share
* ``branches.csv``     id, from, to, susceptance, capacity_mw, length_mi, kind
* ``dclines.csv``      id, from, to, capacity_mw, kind, length_mi
* ``generators.csv``   id, bus, fuel, capacity_mw, marginal_cost, ramp_mw_h,
                       co2_t_mwh, nox_t_mwh, so2_t_mwh, profiled
* ``zones.csv``        id, name, state, interconnection, demand_growth
* ``demand.csv``       hour x zone id (wide)
* ``availability.csv`` hour x profiled generator id (wide)
* ``manifest.json``    horizon_hours, base_mva, name

Unknown extra columns are ignored so datasets may carry annotations.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

import numpy as np
import pandas as pd

from .model import (
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
    seam_between,
    validate_network,
    validate_profiles,
)


class DatasetError(ValueError):
    """Raised for malformed dataset directories (missing files, bad columns)."""


_BUS_COLS = ["id", "zone_id", "state", "interconnection", "demand_share"]
_BRANCH_COLS = ["id", "from", "to", "susceptance", "capacity_mw", "length_mi", "kind"]
_DC_COLS = ["id", "from", "to", "capacity_mw", "kind", "length_mi"]
_GEN_COLS = [
    "id", "bus", "fuel", "capacity_mw", "marginal_cost", "ramp_mw_h",
    "co2_t_mwh", "nox_t_mwh", "so2_t_mwh", "profiled",
]
_ZONE_COLS = ["id", "name", "state", "interconnection", "demand_growth"]


def _read_table(dataset_dir: Path, name: str, required: list[str]) -> pd.DataFrame:
    path = dataset_dir / name
    if not path.exists():
        raise DatasetError(f"missing file: {path}")
    df = pd.read_csv(path, float_precision="round_trip")
    missing = [c for c in required if c not in df.columns]
    if missing:
        raise DatasetError(f"{name}: missing columns {', '.join(missing)}")
    return df


def _parse_bool(value) -> bool:
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    return str(value).strip().lower() in {"1", "true", "yes"}


def load_manifest(dataset_dir: str | os.PathLike) -> dict:
    path = Path(dataset_dir) / "manifest.json"
    if not path.exists():
        raise DatasetError(f"missing file: {path}")
    with open(path) as fh:
        return json.load(fh)


def load_network(dataset_dir: str | os.PathLike) -> Network:
    """Load and fully validate the network tables of a dataset directory."""
    d = Path(dataset_dir)
    manifest = load_manifest(d)

    zones_df = _read_table(d, "zones.csv", _ZONE_COLS)
    buses_df = _read_table(d, "buses.csv", _BUS_COLS)
    branches_df = _read_table(d, "branches.csv", _BRANCH_COLS)
    dc_df = _read_table(d, "dclines.csv", _DC_COLS)
    gens_df = _read_table(d, "generators.csv", _GEN_COLS)

    try:
        zones = tuple(
            Zone(
                id=int(r.id),
                name=str(r.name),
                state=str(r.state),
                interconnection=Interconnection(r.interconnection),
                demand_growth=float(r.demand_growth),
            )
            for r in zones_df.itertuples(index=False)
        )
        buses = tuple(
            Bus(
                id=int(r.id),
                zone_id=int(r.zone_id),
                state=str(r.state),
                interconnection=Interconnection(r.interconnection),
                demand_share=float(r.demand_share),
            )
            for r in buses_df.itertuples(index=False)
        )
        branches = tuple(
            AcBranch(
                id=int(row["id"]),
                from_bus=int(row["from"]),
                to_bus=int(row["to"]),
                susceptance=float(row["susceptance"]),
                capacity=float(row["capacity_mw"]),
                length=float(row["length_mi"]),
                kind=BranchKind(row["kind"]),
            )
            for _, row in branches_df.iterrows()
        )
        dc_elements = tuple(
            DcElement(
                id=int(row["id"]),
                from_bus=int(row["from"]),
                to_bus=int(row["to"]),
                capacity=float(row["capacity_mw"]),
                kind=DcKind(row["kind"]),
                length=float(row["length_mi"]),
            )
            for _, row in dc_df.iterrows()
        )
        generators = tuple(
            Generator(
                id=int(r.id),
                bus=int(r.bus),
                fuel=Fuel(r.fuel),
                capacity=float(r.capacity_mw),
                marginal_cost=float(r.marginal_cost),
                ramp_limit=float(r.ramp_mw_h),
                co2_rate=float(r.co2_t_mwh),
                nox_rate=float(r.nox_t_mwh),
                so2_rate=float(r.so2_t_mwh),
                profiled=_parse_bool(r.profiled),
            )
            for r in gens_df.itertuples(index=False)
        )
    except ValueError as exc:
        raise DatasetError(f"{d}: {exc}") from exc

    net = Network(
        buses=buses,
        branches=branches,
        dc_elements=dc_elements,
        generators=generators,
        zones=zones,
        base_mva=float(manifest.get("base_mva", 100.0)),
        name=str(manifest.get("name", d.name)),
    )
    validate_network(net)
    # Stamp seams now that endpoints are known to resolve.
    stamped = tuple(
        DcElement(
            id=e.id, from_bus=e.from_bus, to_bus=e.to_bus, capacity=e.capacity,
            kind=e.kind, length=e.length,
            seam=seam_between(
                net.bus_by_id[e.from_bus].interconnection,
                net.bus_by_id[e.to_bus].interconnection,
            ),
        )
        for e in dc_elements
    )
    return net.with_dc_elements(stamped)


def _read_wide(path: Path, kind: str) -> tuple[int, dict[int, np.ndarray]]:
    if not path.exists():
        raise DatasetError(f"missing file: {path}")
    df = pd.read_csv(path, float_precision="round_trip")
    if "hour" not in df.columns:
        raise DatasetError(f"{path.name}: missing 'hour' column")
    df = df.sort_values("hour")
    series = {}
    for col in df.columns:
        if col == "hour":
            continue
        try:
            key = int(col)
        except ValueError as exc:
            raise DatasetError(f"{path.name}: non-integer {kind} column '{col}'") from exc
        series[key] = df[col].to_numpy(dtype=float)
    return len(df), series


def load_profiles(dataset_dir: str | os.PathLike, net: Network) -> ProfileSet:
    """Load demand/availability profiles and validate them against ``net``."""
    d = Path(dataset_dir)
    manifest = load_manifest(d)
    horizon = int(manifest["horizon_hours"])

    n_dem, demand = _read_wide(d / "demand.csv", "zone")
    n_avail, availability = _read_wide(d / "availability.csv", "generator")
    if n_dem != horizon:
        raise DatasetError(
            f"demand.csv has {n_dem} rows but manifest declares horizon_hours={horizon}"
        )
    if n_avail != horizon:
        raise DatasetError(
            f"availability.csv has {n_avail} rows, demand has {horizon}: length mismatch"
        )

    profiles = ProfileSet(horizon_hours=horizon, demand=demand, availability=availability)
    validate_profiles(profiles, net)
    return profiles


def load_dataset(dataset_dir: str | os.PathLike) -> tuple[Network, ProfileSet]:
    net = load_network(dataset_dir)
    return net, load_profiles(dataset_dir, net)


def _atomic_to_csv(df: pd.DataFrame, path: Path) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    df.to_csv(tmp, index=False)
    os.replace(tmp, path)


def save_network(net: Network, dataset_dir: str | os.PathLike, horizon_hours: int | None = None) -> None:
    """Write the network tables (and manifest) of a dataset directory.

    ``save_network`` followed by :func:`load_network` reproduces the network
    exactly, so upgraded grids can be re-consumed by every other command.
    """
    d = Path(dataset_dir)
    d.mkdir(parents=True, exist_ok=True)
    _atomic_to_csv(
        pd.DataFrame(
            [
                {
                    "id": z.id, "name": z.name, "state": z.state,
                    "interconnection": z.interconnection.value,
                    "demand_growth": z.demand_growth,
                }
                for z in net.zones
            ],
            columns=_ZONE_COLS,
        ),
        d / "zones.csv",
    )
    _atomic_to_csv(
        pd.DataFrame(
            [
                {
                    "id": b.id, "zone_id": b.zone_id, "state": b.state,
                    "interconnection": b.interconnection.value,
                    "demand_share": b.demand_share,
                }
                for b in net.buses
            ],
            columns=_BUS_COLS,
        ),
        d / "buses.csv",
    )
    _atomic_to_csv(
        pd.DataFrame(
            [
                {
                    "id": br.id, "from": br.from_bus, "to": br.to_bus,
                    "susceptance": br.susceptance, "capacity_mw": br.capacity,
                    "length_mi": br.length, "kind": br.kind.value,
                }
                for br in net.branches
            ],
            columns=_BRANCH_COLS,
        ),
        d / "branches.csv",
    )
    _atomic_to_csv(
        pd.DataFrame(
            [
                {
                    "id": e.id, "from": e.from_bus, "to": e.to_bus,
                    "capacity_mw": e.capacity, "kind": e.kind.value,
                    "length_mi": e.length,
                }
                for e in net.dc_elements
            ],
            columns=_DC_COLS,
        ),
        d / "dclines.csv",
    )
    _atomic_to_csv(
        pd.DataFrame(
            [
                {
                    "id": g.id, "bus": g.bus, "fuel": g.fuel.value,
                    "capacity_mw": g.capacity, "marginal_cost": g.marginal_cost,
                    "ramp_mw_h": g.ramp_limit, "co2_t_mwh": g.co2_rate,
                    "nox_t_mwh": g.nox_rate, "so2_t_mwh": g.so2_rate,
                    "profiled": g.profiled,
                }
                for g in net.generators
            ],
            columns=_GEN_COLS,
        ),
        d / "generators.csv",
    )
    manifest = {"name": net.name, "base_mva": net.base_mva}
    if horizon_hours is not None:
        manifest["horizon_hours"] = int(horizon_hours)
    elif (d / "manifest.json").exists():
        manifest["horizon_hours"] = load_manifest(d).get("horizon_hours")
    tmp = d / "manifest.json.tmp"
    with open(tmp, "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    os.replace(tmp, d / "manifest.json")


def save_profiles(profiles: ProfileSet, dataset_dir: str | os.PathLike) -> None:
    d = Path(dataset_dir)
    d.mkdir(parents=True, exist_ok=True)
    hours = np.arange(profiles.horizon_hours)
    dem = pd.DataFrame({"hour": hours})
    for zid in sorted(profiles.demand):
        dem[str(zid)] = profiles.demand[zid]
    _atomic_to_csv(dem, d / "demand.csv")
    avail = pd.DataFrame({"hour": hours})
    for gid in sorted(profiles.availability):
        avail[str(gid)] = profiles.availability[gid]
    _atomic_to_csv(avail, d / "availability.csv")


def save_dataset(
    net: Network, profiles: ProfileSet, dataset_dir: str | os.PathLike
) -> None:
    save_network(net, dataset_dir, horizon_hours=profiles.horizon_hours)
    save_profiles(profiles, dataset_dir)
