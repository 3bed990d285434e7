"""Command-line entry point: validate | simulate | expand | report.

Outputs are deterministic for identical inputs (fixed orderings, fixed
float formatting, atomic writes), so downstream golden-file comparisons
are byte-stable. The ``MACROGRID_LOG`` environment variable sets the log
level (DEBUG, INFO, WARNING, ...).
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd

from . import analytics, artifacts
from .expansion import (
    ExpansionParams,
    ExpansionStalledError,
    expand_until_goal,
    save_plan,
)
from .io import DatasetError, load_dataset, load_network, load_profiles
from .model import (
    RENEWABLE_FUELS,
    Interconnection,
    Network,
    Seam,
    ValidationError,
    network_violations,
    profile_violations,
)
from .opf import (
    SimulationError,
    SimulationResult,
    WindowOptions,
    availability_frame,
    curtailment_series,
    simulate_horizon,
)
from .scenario import (
    ScenarioError,
    ScenarioSpec,
    build_scenario,
    design_to_dict,
    goal_accounting,
    load_scenario,
)

LOG = logging.getLogger("macrogrid")


@dataclass
class RunConfig:
    """Resolved invocation: paths, tuning flags, and the fixture seed."""

    dataset: Path | None = None
    scenario: Path | None = None
    out: Path | None = None
    windows: int = 24
    shed_penalty: float = 10_000.0
    max_iterations: int = 50
    alpha: float = 0.5
    top_k: int = 10
    baseline: Path | None = None
    carbon_prices: tuple[float, ...] = (0.0,)
    export_lp: bool = False
    seed: int = 0


def _setup_logging() -> None:
    level = os.environ.get("MACROGRID_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")


def _window_options(cfg: RunConfig, out: Path | None) -> WindowOptions:
    export_dir = str(out / "lp") if (cfg.export_lp and out is not None) else None
    return WindowOptions(
        window_hours=cfg.windows,
        shed_penalty=cfg.shed_penalty,
        export_lp_dir=export_dir,
    )


def cmd_validate(cfg: RunConfig) -> int:
    problems: list[str] = []
    try:
        net = load_network(cfg.dataset)
    except (DatasetError, ValidationError) as exc:
        problems.extend(getattr(exc, "violations", [str(exc)]))
        net = None
    if net is not None:
        problems.extend(network_violations(net))
        try:
            profiles = load_profiles(cfg.dataset, net)
            problems.extend(profile_violations(profiles, net))
        except (DatasetError, ValidationError) as exc:
            problems.extend(getattr(exc, "violations", [str(exc)]))
    report = {
        "dataset": str(cfg.dataset),
        "valid": not problems,
        "violations": sorted(set(problems)),
    }
    if cfg.out is not None:
        cfg.out.mkdir(parents=True, exist_ok=True)
        artifacts.write_json(report, cfg.out / "validation.json")
    if problems:
        print(f"INVALID: {cfg.dataset} ({len(report['violations'])} problems)")
        for v in report["violations"]:
            print(f"  - {v}")
        return 1
    print(f"OK: {cfg.dataset}")
    return 0


def _renewable_share(result: SimulationResult, net: Network, icx: Interconnection) -> np.ndarray:
    gen_mask = np.array(
        [
            net.bus_by_id[g.bus].interconnection == icx and g.fuel in RENEWABLE_FUELS
            for g in (net.gen_by_id[i] for i in result.gen_ids)
        ]
    )
    bus_mask = np.array(
        [net.bus_by_id[b].interconnection == icx for b in result.bus_ids]
    )
    renewable = result.dispatch[:, gen_mask].sum(axis=1) if gen_mask.any() else np.zeros(result.hours)
    demand = result.bus_demand[:, bus_mask].sum(axis=1)
    return np.divide(renewable, demand, out=np.zeros_like(renewable), where=demand > 0)


def _build_summary(
    spec: ScenarioSpec,
    net: Network,
    profiles,
    result: SimulationResult,
    investment: dict[str, float],
) -> dict:
    em = analytics.emissions(result, net)
    pools = goal_accounting(result, net, profiles, spec.goals) if spec.goals.fractions else []
    ledger = analytics.seam_transfers(result, net)
    return {
        "scenario": spec.name,
        "hours": result.hours,
        "fuel_cost_usd": result.fuel_cost,
        "fuel_cost_busd": result.fuel_cost / 1e9,
        "objective_usd": result.objective,
        "shed_mwh": float(result.shed.sum()),
        "co2_mmmt": em.co2,
        "nox_mmmt": em.nox,
        "so2_mmmt": em.so2,
        "investment_busd": investment,
        "goal_pools": [
            {
                "states": list(p.states),
                "target_twh": p.target_twh,
                "delivered_twh": p.delivered_twh,
                "met": p.met,
            }
            for p in pools
        ],
        "goals_met": all(p.met for p in pools) if pools else None,
        "seams": {
            seam.value: {
                "forward_twh": t.forward_twh,
                "reverse_twh": t.reverse_twh,
                "capacity_factor": t.capacity_factor,
            }
            for seam, t in ledger.seams.items()
        },
        "overall_dc_capacity_factor": ledger.overall_capacity_factor,
    }


def _scenario_investment(spec: ScenarioSpec, pre_design_net: Network, plan=None) -> dict:
    additions = analytics.CapacityAdditions(
        solar_mw={s: v[0] for s, v in (spec.renewable_additions or {}).items()},
        wind_mw={s: v[1] for s, v in (spec.renewable_additions or {}).items()},
    )
    return analytics.investment_cost(
        additions,
        plan=plan,
        design=spec.design,
        book=spec.cost_book,
        net=pre_design_net,
    )


def _scenario_doc(spec: ScenarioSpec) -> dict:
    return {
        "name": spec.name,
        "goal_kind": spec.goals.goal_kind,
        "goal_fractions": dict(sorted(spec.goals.fractions.items())),
        "pools": [list(p) for p in spec.goals.pools],
        "cross_seam_pooling": spec.goals.cross_seam_pooling,
        "design": design_to_dict(spec.design) if spec.design else None,
    }


def cmd_simulate(cfg: RunConfig) -> int:
    net, profiles = load_dataset(cfg.dataset)
    spec = load_scenario(cfg.scenario)
    LOG.info(
        "loaded %s: %d buses, %d branches, %d generators, %d h",
        cfg.dataset, len(net.buses), len(net.branches), len(net.generators),
        profiles.horizon_hours,
    )
    pre_design, _ = build_scenario(net, profiles, spec, apply_design=False)
    sim_net, sim_profiles = build_scenario(net, profiles, spec, apply_design=True)
    result = simulate_horizon(sim_net, sim_profiles, _window_options(cfg, cfg.out))
    investment = _scenario_investment(spec, pre_design)
    summary = _build_summary(spec, sim_net, sim_profiles, result, investment)
    artifacts.save_result(
        result, sim_net, sim_profiles, cfg.out,
        summary=summary, scenario_doc=_scenario_doc(spec),
    )
    curt = curtailment_series(result, sim_net, sim_profiles)
    frame = curt.renewable.copy()
    frame.insert(0, "hour", range(len(frame)))
    artifacts.write_csv(frame, cfg.out / "curtailment.csv")
    avail = availability_frame(sim_net, sim_profiles)
    avail.insert(0, "hour", range(len(avail)))
    artifacts.write_csv(avail, cfg.out / "availability_renewable.csv")
    print(f"simulated {result.hours} h: fuel cost ${result.fuel_cost:,.0f}, "
          f"shed {summary['shed_mwh']:.1f} MWh -> {cfg.out}")
    return 0


def cmd_expand(cfg: RunConfig) -> int:
    net, profiles = load_dataset(cfg.dataset)
    spec = load_scenario(cfg.scenario)
    sim_net, sim_profiles = build_scenario(net, profiles, spec, apply_design=False)
    pre_design = sim_net
    params = ExpansionParams(
        top_k=cfg.top_k,
        upgrade_factor=cfg.alpha,
        max_iterations=cfg.max_iterations,
    )
    opts = _window_options(cfg, cfg.out)
    try:
        final_net, plan = expand_until_goal(
            sim_net, sim_profiles, spec.goals, spec.design, params, opts
        )
    except ExpansionStalledError as exc:
        print(f"STALLED: {exc}")
        return 2

    cfg.out.mkdir(parents=True, exist_ok=True)
    save_plan(plan, cfg.out)
    result = plan.final_result
    if result is None:
        artifacts.write_json(
            {"met": plan.met, "iterations": 0}, cfg.out / "summary.json"
        )
        print("no iterations run (max-iterations 0): goals unmet")
        return 1
    investment = _scenario_investment(spec, pre_design, plan=plan)
    summary = _build_summary(spec, final_net, sim_profiles, result, investment)
    summary["expansion"] = {
        "met": plan.met,
        "iterations": len(plan.iterations),
        "added_tw_miles": plan.total_added_tw_miles,
    }
    artifacts.save_result(
        result, final_net, sim_profiles, cfg.out,
        summary=summary, scenario_doc=_scenario_doc(spec),
    )
    status = "met" if plan.met else "NOT met (iteration budget exhausted)"
    print(
        f"expansion {status}: {len(plan.upgrades)} upgrades, "
        f"{plan.total_added_tw_miles:.4f} TW-miles over "
        f"{len(plan.iterations)} iterations -> {cfg.out}"
    )
    return 0 if plan.met else 1


def _report_frames(name: str, results_dir: Path, carbon_prices, baseline=None):
    """Per-scenario analytics frames keyed by output file stem."""
    net, profiles, result, summary = artifacts.load_result(results_dir)
    scenario_path = results_dir / "scenario.json"
    goal_states: set[str] = set()
    if scenario_path.exists():
        with open(scenario_path) as fh:
            goal_states = set(json.load(fh).get("goal_fractions", {}))

    frames: dict[str, pd.DataFrame] = {}
    mix = analytics.generation_mix(result, net, "fuel", profiles=profiles).reset_index()
    mix.insert(0, "scenario", name)
    frames["mix"] = mix

    curt = curtailment_series(result, net, profiles)
    avail = availability_frame(net, profiles)
    stats = analytics.curtailment_stats(curt.renewable, avail)
    total = curt.renewable.sum(axis=1).to_numpy() if curt.renewable.shape[1] else np.zeros(result.hours)
    frames["curtailment"] = pd.DataFrame(
        [
            {
                "scenario": name,
                "median_gw": stats.median_gw,
                "median_share": stats.median_share,
                "p95_gw": float(np.percentile(total, 95)) / 1000.0,
                "max_gw": float(total.max()) / 1000.0 if total.size else 0.0,
            }
        ]
    )

    em = analytics.emissions(result, net)
    em_rows = [
        {"scenario": name, "state": "ALL", "co2_mmmt": em.co2,
         "nox_mmmt": em.nox, "so2_mmmt": em.so2}
    ]
    for state, row in em.by_state.iterrows():
        em_rows.append(
            {"scenario": name, "state": state, "co2_mmmt": row["co2"],
             "nox_mmmt": row["nox"], "so2_mmmt": row["so2"]}
        )
    frames["emissions"] = pd.DataFrame(em_rows)

    inv = summary.get("investment_busd", {})
    frames["costs"] = pd.DataFrame(
        [{"scenario": name, "category": k, "busd": v} for k, v in sorted(inv.items())]
    )

    ledger = analytics.seam_transfers(result, net)
    seam_rows = []
    for seam, t in ledger.seams.items():
        seam_rows.append(
            {
                "scenario": name, "seam": seam.value,
                "forward_twh": t.forward_twh, "reverse_twh": t.reverse_twh,
                "ratio": t.ratio if math.isfinite(t.ratio) else np.nan,
                "capacity_factor": t.capacity_factor,
            }
        )
    seam_rows.append(
        {
            "scenario": name, "seam": "overall", "forward_twh": np.nan,
            "reverse_twh": np.nan, "ratio": np.nan,
            "capacity_factor": ledger.overall_capacity_factor,
        }
    )
    frames["seams"] = pd.DataFrame(seam_rows)

    ew_flow = analytics.oriented_seam_flow(result, net, Seam.EAST_WEST)
    if np.any(ew_flow != 0.0):
        fit = analytics.flow_share_regression(
            ew_flow / 1000.0,
            _renewable_share(result, net, Interconnection.EASTERN),
            _renewable_share(result, net, Interconnection.WESTERN),
        )
        frames["regression"] = pd.DataFrame(
            [
                {
                    "scenario": name, "constant_gw": fit.beta0,
                    "east_share_coeff_gw": fit.beta_east,
                    "west_share_coeff_gw": fit.beta_west, "r2": fit.r2,
                }
            ]
        )
    else:
        frames["regression"] = pd.DataFrame(
            columns=["scenario", "constant_gw", "east_share_coeff_gw",
                     "west_share_coeff_gw", "r2"]
        )

    pay = analytics.payments(result, net, goal_states=goal_states or None)
    pay_rows = [
        {"scenario": name, "group": "total", "consumer_busd": pay.consumer_busd,
         "generator_busd": pay.generator_busd, "surplus_busd": pay.surplus_busd}
    ]
    if pay.by_goal_status is not None:
        for group, row in pay.by_goal_status.iterrows():
            pay_rows.append(
                {"scenario": name, "group": group,
                 "consumer_busd": row["consumer_busd"],
                 "generator_busd": row["generator_busd"],
                 "surplus_busd": row["surplus_busd"]}
            )
    frames["payments"] = pd.DataFrame(pay_rows)

    if baseline is not None:
        base_summary = baseline
        point = analytics.OperatingPoint(
            investment_busd=float(summary.get("investment_busd", {}).get("total", 0.0)),
            fuel_busd_per_year=float(summary["fuel_cost_busd"]),
            co2_mmmt_per_year=float(summary["co2_mmmt"]),
        )
        base_point = analytics.OperatingPoint(
            investment_busd=float(base_summary.get("investment_busd", {}).get("total", 0.0)),
            fuel_busd_per_year=float(base_summary["fuel_cost_busd"]),
            co2_mmmt_per_year=float(base_summary["co2_mmmt"]),
        )
        rows = []
        for price in carbon_prices:
            years = analytics.payback(base_point, point, price)
            rows.append(
                {
                    "scenario": name, "carbon_price_usd_per_ton": price,
                    "payback_years": years if math.isfinite(years) else "no payback",
                }
            )
        frames["payback"] = pd.DataFrame(rows)
    return frames, net, result


def cmd_report(cfg: RunConfig, results_dirs: list[Path]) -> int:
    horizons = [artifacts.results_horizon(d) for d in results_dirs]
    if len(set(horizons)) > 1:
        print(f"error: results have mismatched horizons: {horizons}")
        return 1
    baseline_summary = None
    baseline_emissions = None
    if cfg.baseline is not None:
        baseline_summary = artifacts.load_summary(cfg.baseline)
        base_net, _, base_result, _ = artifacts.load_result(cfg.baseline)
        baseline_emissions = analytics.emissions(base_result, base_net)

    collected: dict[str, list[pd.DataFrame]] = {}
    delta_rows = []
    for d in results_dirs:
        name = artifacts.load_summary(d).get("scenario", d.name)
        frames, net, result = _report_frames(
            name, d, cfg.carbon_prices, baseline=baseline_summary
        )
        for stem, frame in frames.items():
            collected.setdefault(stem, []).append(frame)
        if baseline_emissions is not None:
            delta = analytics.emissions_delta_map(
                baseline_emissions, analytics.emissions(result, net)
            )
            for state, row in delta.iterrows():
                delta_rows.append(
                    {"scenario": name, "state": state,
                     "co2_mmmt": row["co2"], "nox_mmmt": row["nox"],
                     "so2_mmmt": row["so2"]}
                )

    cfg.out.mkdir(parents=True, exist_ok=True)
    for stem, frames in sorted(collected.items()):
        artifacts.write_csv(pd.concat(frames, ignore_index=True), cfg.out / f"{stem}.csv")
    if baseline_summary is not None:
        artifacts.write_csv(pd.DataFrame(delta_rows), cfg.out / "emissions_delta.csv")
    elif tuple(cfg.carbon_prices) != (0.0,):
        # payback.csv needs a baseline; an explicit carbon price without one
        # is a mistake worth failing on rather than silently dropping.
        print("error: --carbon-price given but no --baseline for payback", file=sys.stderr)
        return 1
    print(f"report written to {cfg.out} ({', '.join(sorted(collected))})")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="macrogrid",
        description="Production-cost simulation and transmission-expansion toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, dataset=True, scenario=True):
        if dataset:
            p.add_argument("--dataset", type=Path, required=True, help="dataset directory")
        if scenario:
            p.add_argument("--scenario", type=Path, required=True, help="scenario JSON file")
        p.add_argument("--out", type=Path, required=True, help="output directory")
        p.add_argument("--windows", type=int, default=24, metavar="N",
                       help="hours per optimization window (default 24)")
        p.add_argument("--shed-penalty", type=float, default=10_000.0, metavar="X")
        p.add_argument("--export-lp", action="store_true",
                       help="write one LP-format file per window")
        p.add_argument("--seed", type=int, default=0, help="fixture-generation seed")

    v = sub.add_parser("validate", help="check a dataset's structural invariants")
    v.add_argument("--dataset", type=Path, required=True)
    v.add_argument("--out", type=Path, default=None,
                   help="directory for the machine-readable validation.json")

    s = sub.add_parser("simulate", help="run the rolling-horizon dispatch")
    common(s)

    e = sub.add_parser("expand", help="run the congestion-guided expansion loop")
    common(e)
    e.add_argument("--max-iterations", type=int, default=50, metavar="N")
    e.add_argument("--alpha", type=float, default=0.5, metavar="X",
                   help="multiplicative capacity step per upgrade")
    e.add_argument("--top-k", type=int, default=10, metavar="N",
                   help="branches upgraded per iteration")

    r = sub.add_parser("report", help="compute the analytics CSV bundle")
    r.add_argument("results", type=Path, nargs="+", help="simulation output dirs")
    r.add_argument("--out", type=Path, required=True)
    r.add_argument("--baseline", type=Path, default=None,
                   help="baseline results dir for payback and delta maps")
    r.add_argument("--carbon-price", type=float, action="append", default=None,
                   metavar="P", help="$/ton CO2 (repeatable)")
    return parser


def main(argv: list[str] | None = None) -> int:
    _setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig(
        dataset=getattr(args, "dataset", None),
        scenario=getattr(args, "scenario", None),
        out=getattr(args, "out", None),
        windows=getattr(args, "windows", 24),
        shed_penalty=getattr(args, "shed_penalty", 10_000.0),
        max_iterations=getattr(args, "max_iterations", 50),
        alpha=getattr(args, "alpha", 0.5),
        top_k=getattr(args, "top_k", 10),
        baseline=getattr(args, "baseline", None),
        carbon_prices=tuple(getattr(args, "carbon_price", None) or (0.0,)),
        export_lp=getattr(args, "export_lp", False),
        seed=getattr(args, "seed", 0),
    )
    try:
        if args.command == "validate":
            return cmd_validate(cfg)
        if args.command == "simulate":
            return cmd_simulate(cfg)
        if args.command == "expand":
            return cmd_expand(cfg)
        if args.command == "report":
            return cmd_report(cfg, list(args.results))
    except (DatasetError, ValidationError, ScenarioError, SimulationError,
            analytics.AnalyticsError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
