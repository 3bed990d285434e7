"""Reading and writing run artifacts.

A results directory is self-contained: the scenario-applied network (as a
nested dataset), the hourly primal/dual tables, and a summary JSON. CSVs
carry 6 significant digits for stable golden files; JSON keeps full
precision. All files are written to a temp name and renamed, so a crashed
run never leaves a partial file behind.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

import numpy as np
import pandas as pd

from .io import load_dataset, load_manifest, save_dataset
from .model import Network, ProfileSet
from .opf import SimulationResult

CSV_FLOAT_FORMAT = "%.6g"

#: Hourly tables: file stem -> (result attribute, entity-id attribute)
_HOURLY_TABLES = {
    "dispatch": ("dispatch", "gen_ids"),
    "angle": ("angle", "bus_ids"),
    "ac_flow": ("ac_flow", "branch_ids"),
    "dc_flow": ("dc_flow", "dc_ids"),
    "shed": ("shed", "bus_ids"),
    "lmp": ("lmp", "bus_ids"),
    "branch_mu": ("branch_mu", "branch_ids"),
    "dc_mu": ("dc_mu", "dc_ids"),
    "bus_demand": ("bus_demand", "bus_ids"),
}


def write_csv(frame: pd.DataFrame, path: str | Path, index: bool = False) -> None:
    path = Path(path)
    tmp = path.with_suffix(path.suffix + ".tmp")
    frame.to_csv(tmp, index=index, float_format=CSV_FLOAT_FORMAT)
    os.replace(tmp, path)


def write_json(data: dict, path: str | Path) -> None:
    path = Path(path)
    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "w") as fh:
        json.dump(data, fh, indent=2, sort_keys=True)
        fh.write("\n")
    os.replace(tmp, path)


def _wide(values: np.ndarray, ids) -> pd.DataFrame:
    frame = pd.DataFrame(values, columns=[str(i) for i in ids])
    frame.insert(0, "hour", np.arange(values.shape[0]))
    return frame


def save_result(
    result: SimulationResult,
    net: Network,
    profiles: ProfileSet,
    out_dir: str | Path,
    summary: dict | None = None,
    scenario_doc: dict | None = None,
) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for stem, (attr, ids_attr) in _HOURLY_TABLES.items():
        write_csv(_wide(getattr(result, attr), getattr(result, ids_attr)), out / f"{stem}.csv")
    save_dataset(net, profiles, out / "network")
    if summary is not None:
        write_json(summary, out / "summary.json")
    if scenario_doc is not None:
        write_json(scenario_doc, out / "scenario.json")


def _read_wide_csv(path: Path) -> tuple[tuple[int, ...], np.ndarray]:
    frame = pd.read_csv(path, float_precision="round_trip").sort_values("hour")
    ids = tuple(int(c) for c in frame.columns if c != "hour")
    values = frame[[str(i) for i in ids]].to_numpy(dtype=float)
    return ids, values


def load_result(results_dir: str | Path) -> tuple[Network, ProfileSet, SimulationResult, dict]:
    """Rehydrate a results directory written by :func:`save_result`."""
    d = Path(results_dir)
    net, profiles = load_dataset(d / "network")
    tables = {}
    id_sets = {}
    for stem, (attr, ids_attr) in _HOURLY_TABLES.items():
        ids, values = _read_wide_csv(d / f"{stem}.csv")
        tables[attr] = values
        id_sets[ids_attr] = ids
    with open(d / "summary.json") as fh:
        summary = json.load(fh)
    result = SimulationResult(
        gen_ids=id_sets["gen_ids"],
        bus_ids=id_sets["bus_ids"],
        branch_ids=id_sets["branch_ids"],
        dc_ids=id_sets["dc_ids"],
        fuel_cost=float(summary.get("fuel_cost_usd", 0.0)),
        objective=float(summary.get("objective_usd", 0.0)),
        solve_log=[],
        **tables,
    )
    return net, profiles, result, summary


def load_summary(results_dir: str | Path) -> dict:
    with open(Path(results_dir) / "summary.json") as fh:
        return json.load(fh)


def results_horizon(results_dir: str | Path) -> int:
    return int(load_manifest(Path(results_dir) / "network")["horizon_hours"])
