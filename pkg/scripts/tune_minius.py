#!/usr/bin/env python3
"""Tuning harness for the mini-US fixture: runs the four design expansions
and prints the qualitative signatures the acceptance suite checks."""

import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from macrogrid.analytics import seam_transfers, oriented_seam_flow
from macrogrid.expansion import ExpansionParams, expand_until_goal
from macrogrid.io import load_dataset
from macrogrid.model import Seam
from macrogrid.opf import WindowOptions
from macrogrid.scenario import build_scenario, goal_accounting, load_scenario

ROOT = Path(__file__).resolve().parents[1] / "fixtures" / "minius"


def run(design_stem: str):
    net, profiles = load_dataset(ROOT)
    spec = load_scenario(ROOT / f"ambitious-{design_stem}.json")
    snet, sprof = build_scenario(net, profiles, spec, apply_design=False)
    t0 = time.time()
    final, plan = expand_until_goal(
        snet, sprof, spec.goals, spec.design,
        ExpansionParams(top_k=4, upgrade_factor=0.4), WindowOptions(),
    )
    dt = time.time() - t0
    res = plan.final_result
    first = plan.iterations[0]
    ledger = seam_transfers(res, final)
    ew = ledger.seams.get(Seam.EAST_WEST)
    flow = oriented_seam_flow(res, final, Seam.EAST_WEST)
    hod = np.arange(res.hours) % 24
    day = flow[(hod >= 11) & (hod <= 16)].mean()
    night = flow[(hod <= 4) | (hod >= 21)].mean()
    print(
        f"{design_stem:9s} met={plan.met} iters={len(plan.iterations):2d} "
        f"ac_added={plan.total_added_tw_miles:7.3f} TWmi "
        f"it0 delivered={first.pools[0].delivered_twh:6.3f}/{first.pools[0].target_twh:6.3f} "
        f"E->W={ew.forward_twh if ew else 0:6.3f} W->E={ew.reverse_twh if ew else 0:6.3f} "
        f"dayEW={day:8.1f} nightEW={night:8.1f} cf={ledger.overall_capacity_factor:.2f} "
        f"({dt:.0f}s)"
    )
    return plan


if __name__ == "__main__":
    stems = sys.argv[1:] or ["design1", "design2a", "design2b", "design3"]
    for stem in stems:
        run(stem)
