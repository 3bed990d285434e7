"""Congestion-guided AC transmission expansion.

The loop re-simulates the full horizon, scores every branch by congestion
rent per MW-mile, upgrades the best candidates multiplicatively, and stops
once all goal pools report their delivered energy at or above target.
Upgrades only scale existing corridors; no new AC corridors are created.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
import pandas as pd

from .model import BranchKind, Network, ProfileSet
from .opf import SimulationResult, WindowOptions, simulate_horizon
from .scenario import (
    GoalSpec,
    MacroGridDesign,
    PoolResult,
    apply_macrogrid_design,
    goal_accounting,
)


LOG = logging.getLogger(__name__)


class ExpansionStalledError(RuntimeError):
    """No congested candidates left while goals remain unmet.

    Signals that renewable capacity, not transmission, is the binding
    constraint for the scenario.
    """


@dataclass(frozen=True)
class ExpansionParams:
    binding_tol: float = 0.01  # branch counts as binding within 1% of its cap
    min_binding_frequency: float = 0.05
    top_k: int = 10
    upgrade_factor: float = 0.5  # cap <- cap * (1 + factor)
    max_iterations: int = 50

    def validate(self) -> "ExpansionParams":
        if not (0.0 < self.binding_tol <= 0.1):
            raise ValueError("binding_tol must be in (0, 0.1]")
        if self.upgrade_factor <= 0:
            raise ValueError("upgrade_factor must be > 0")
        if self.top_k < 1:
            raise ValueError("top_k must be >= 1")
        return self


@dataclass(frozen=True)
class CongestionStats:
    """Per-branch congestion summary over a simulation."""

    branch_ids: tuple[int, ...]
    binding_frequency: np.ndarray  # share of hours |f| >= (1-tol)*cap
    congestion_rent: np.ndarray  # $ = sum_t mu * cap
    benefit_per_mw_mile: np.ndarray  # rent / (cap * max(length, 1 mile))


def congestion_stats(
    result: SimulationResult, net: Network, binding_tol: float = 0.01
) -> CongestionStats:
    caps = np.array([br.capacity for br in net.branches])
    lengths = np.array([max(br.length, 1.0) for br in net.branches])
    if len(net.branches) == 0:
        empty = np.zeros(0)
        return CongestionStats((), empty, empty, empty)
    binding = np.abs(result.ac_flow) >= (1.0 - binding_tol) * caps
    frequency = binding.mean(axis=0)
    rent = (result.branch_mu * caps).sum(axis=0)
    benefit = rent / (caps * lengths)
    return CongestionStats(result.branch_ids, frequency, rent, benefit)


def rank_upgrades(stats: CongestionStats, params: ExpansionParams) -> list[int]:
    """Branch ids worth upgrading: frequently binding, best benefit first."""
    candidates = [
        (stats.benefit_per_mw_mile[i], stats.branch_ids[i])
        for i in range(len(stats.branch_ids))
        if stats.binding_frequency[i] >= params.min_binding_frequency
    ]
    candidates.sort(key=lambda item: (-item[0], item[1]))
    return [bid for _, bid in candidates[: params.top_k]]


@dataclass(frozen=True)
class UpgradeRecord:
    branch_id: int
    old_capacity: float
    new_capacity: float
    added_mw_miles: float
    length: float
    kind: BranchKind
    state: str  # from-endpoint state, used for regional cost multipliers
    iteration: int = 0

    @property
    def added_mw(self) -> float:
        return self.new_capacity - self.old_capacity


def apply_upgrades(
    net: Network, ids: list[int], upgrade_factor: float, iteration: int = 0
) -> tuple[Network, list[UpgradeRecord]]:
    """Scale the listed branch capacities by (1 + upgrade_factor)."""
    unknown = [i for i in ids if i not in net.branch_by_id]
    if unknown:
        raise ValueError(f"upgrading unknown branch ids: {unknown}")
    wanted = set(ids)
    records = []
    branches = []
    for br in net.branches:
        if br.id in wanted:
            new_cap = br.capacity * (1.0 + upgrade_factor)
            records.append(
                UpgradeRecord(
                    branch_id=br.id,
                    old_capacity=br.capacity,
                    new_capacity=new_cap,
                    added_mw_miles=(new_cap - br.capacity) * br.length,
                    length=br.length,
                    kind=br.kind,
                    state=net.bus_state(br.from_bus),
                    iteration=iteration,
                )
            )
            br = replace(br, capacity=new_cap)
        branches.append(br)
    order = {bid: k for k, bid in enumerate(ids)}
    records.sort(key=lambda r: order[r.branch_id])
    return net.with_branches(branches), records


@dataclass
class IterationLog:
    iteration: int
    pools: list[PoolResult]
    all_met: bool
    fuel_cost: float
    objective: float
    cumulative_upgrade_tw_miles: float
    upgraded_branches: list[int] = field(default_factory=list)


@dataclass
class ExpansionPlan:
    """Ordered upgrade list plus the per-iteration goal/cost trail."""

    upgrades: list[UpgradeRecord] = field(default_factory=list)
    iterations: list[IterationLog] = field(default_factory=list)
    met: bool = False
    final_result: SimulationResult | None = None

    @property
    def total_added_mw_miles(self) -> float:
        return sum(u.added_mw_miles for u in self.upgrades)

    @property
    def total_added_tw_miles(self) -> float:
        return self.total_added_mw_miles / 1e6


def expand_until_goal(
    net: Network,
    profiles: ProfileSet,
    goals: GoalSpec,
    design: MacroGridDesign | None = None,
    params: ExpansionParams | None = None,
    opts: WindowOptions | None = None,
) -> tuple[Network, ExpansionPlan]:
    """Upgrade congested branches until every goal pool is met.

    ``design`` is applied before the first simulation when given (pass None
    if the network already carries it). Terminates on goal, iteration
    budget, or raises :class:`ExpansionStalledError` when goals are unmet
    but nothing congests.
    """
    params = (params or ExpansionParams()).validate()
    if design is not None:
        net = apply_macrogrid_design(net, design)

    plan = ExpansionPlan()
    result: SimulationResult | None = None
    for it in range(params.max_iterations):
        result = simulate_horizon(net, profiles, opts)
        pools = goal_accounting(result, net, profiles, goals)
        all_met = all(p.met for p in pools)
        LOG.info(
            "iteration %d: delivered %s / target %s TWh, met=%s",
            it,
            [f"{p.delivered_twh:.6g}" for p in pools],
            [f"{p.target_twh:.6g}" for p in pools],
            all_met,
        )
        plan.iterations.append(
            IterationLog(
                iteration=it,
                pools=pools,
                all_met=all_met,
                fuel_cost=result.fuel_cost,
                objective=result.objective,
                cumulative_upgrade_tw_miles=plan.total_added_tw_miles,
            )
        )
        if all_met:
            plan.met = True
            break
        stats = congestion_stats(result, net, params.binding_tol)
        ranked = rank_upgrades(stats, params)
        if not ranked:
            raise ExpansionStalledError(
                "expansion stalled: goals unmet but no branch shows frequent "
                "congestion (add renewable capacity instead)"
            )
        if it == params.max_iterations - 1:
            break
        net, records = apply_upgrades(net, ranked, params.upgrade_factor, iteration=it)
        plan.upgrades.extend(records)
        plan.iterations[-1].upgraded_branches = list(ranked)
    plan.final_result = result
    return net, plan


def plan_to_frame(plan: ExpansionPlan) -> pd.DataFrame:
    return pd.DataFrame(
        [
            {
                "iteration": u.iteration,
                "branch_id": u.branch_id,
                "old_capacity_mw": u.old_capacity,
                "new_capacity_mw": u.new_capacity,
                "added_mw_miles": u.added_mw_miles,
                "length_mi": u.length,
                "kind": u.kind.value,
                "state": u.state,
            }
            for u in plan.upgrades
        ],
        columns=[
            "iteration", "branch_id", "old_capacity_mw", "new_capacity_mw",
            "added_mw_miles", "length_mi", "kind", "state",
        ],
    )


def iteration_log_to_dict(plan: ExpansionPlan) -> dict:
    return {
        "met": plan.met,
        "total_added_tw_miles": plan.total_added_tw_miles,
        "iterations": [
            {
                "iteration": log.iteration,
                "all_met": log.all_met,
                "fuel_cost": log.fuel_cost,
                "objective": log.objective,
                "cumulative_upgrade_tw_miles": log.cumulative_upgrade_tw_miles,
                "upgraded_branches": log.upgraded_branches,
                "pools": [
                    {
                        "states": list(p.states),
                        "target_twh": p.target_twh,
                        "delivered_twh": p.delivered_twh,
                        "met": p.met,
                    }
                    for p in log.pools
                ],
            }
            for log in plan.iterations
        ],
    }


def save_plan(plan: ExpansionPlan, out_dir: str | Path) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    tmp = out / "plan.csv.tmp"
    plan_to_frame(plan).to_csv(tmp, index=False, float_format="%.6g")
    tmp.replace(out / "plan.csv")
    tmp = out / "iterations.json.tmp"
    with open(tmp, "w") as fh:
        json.dump(iteration_log_to_dict(plan), fh, indent=2, sort_keys=True)
        fh.write("\n")
    tmp.replace(out / "iterations.json")
