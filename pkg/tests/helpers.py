"""Shared builders and independent oracles for the test suite.

The oracles here deliberately avoid the package's own code paths: the LP
oracle enumerates vertices by brute force, and the dispatch oracle builds a
single monolithic LP with substituted flows (no flow variables), solved
straight through scipy.
"""

from __future__ import annotations

import itertools

import numpy as np
import scipy.optimize

from macrogrid.model import (
    AcBranch,
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
)


def two_bus_congested():
    """Cheap generation behind a 30 MW line, expensive local unit, 50 MW load."""
    zones = (Zone(1, "z", "CA", Interconnection.WESTERN, 0.01),)
    buses = (
        Bus(1, 1, "CA", Interconnection.WESTERN, 0.0),
        Bus(2, 1, "CA", Interconnection.WESTERN, 1.0),
    )
    branches = (AcBranch(1, 1, 2, susceptance=1.0, capacity=30.0, length=100.0),)
    gens = (
        Generator(1, 1, Fuel.NG, 100.0, 10.0, 1000.0),
        Generator(2, 2, Fuel.NG, 100.0, 50.0, 1000.0),
    )
    net = Network(buses, branches, (), gens, zones, base_mva=100.0)
    return validate_network(net)


def flat_profiles(net, hours, demand_mw, availability=None):
    demand = {z.id: np.full(hours, float(demand_mw)) for z in net.zones}
    avail = availability or {}
    avail = {
        g.id: np.asarray(avail.get(g.id, np.ones(hours)), dtype=float)
        for g in net.generators
        if g.profiled
    }
    return ProfileSet(hours, demand, avail)


def random_network(rng: np.random.Generator, max_buses=6, max_branches=8, with_dc=False):
    """A connected single-interconnection test grid with random parameters."""
    n_bus = int(rng.integers(2, max_buses + 1))
    zones = (Zone(1, "z", "CA", Interconnection.WESTERN, 0.0),)
    shares = rng.random(n_bus) + 0.05
    shares /= shares.sum()
    buses = tuple(
        Bus(i + 1, 1, "CA", Interconnection.WESTERN, float(shares[i]))
        for i in range(n_bus)
    )
    branches = []
    # Random spanning tree keeps the grid connected.
    order = rng.permutation(n_bus) + 1
    for k in range(1, n_bus):
        a = int(order[k])
        b = int(order[int(rng.integers(0, k))])
        branches.append(
            AcBranch(
                id=k,
                from_bus=a,
                to_bus=b,
                susceptance=float(rng.uniform(1, 10)),
                capacity=float(rng.uniform(30, 200)),
                length=float(rng.uniform(10, 200)),
            )
        )
    extra = int(rng.integers(0, max(1, max_branches - n_bus + 2)))
    next_id = n_bus
    for _ in range(extra):
        if len(branches) >= max_branches:
            break
        a, b = rng.choice(np.arange(1, n_bus + 1), size=2, replace=False)
        branches.append(
            AcBranch(
                id=next_id,
                from_bus=int(a),
                to_bus=int(b),
                susceptance=float(rng.uniform(1, 10)),
                capacity=float(rng.uniform(30, 200)),
                length=float(rng.uniform(10, 200)),
            )
        )
        next_id += 1
    dc = ()
    if with_dc and n_bus >= 3:
        a, b = rng.choice(np.arange(1, n_bus + 1), size=2, replace=False)
        dc = (
            DcElement(1, int(a), int(b), capacity=float(rng.uniform(10, 80)),
                      kind=DcKind.B2B),
        )
    n_gen = int(rng.integers(1, 5))
    gens = tuple(
        Generator(
            id=i + 1,
            bus=int(rng.integers(1, n_bus + 1)),
            fuel=Fuel.NG,
            capacity=float(rng.uniform(40, 150)),
            marginal_cost=float(rng.uniform(5, 80)),
            ramp_limit=float(rng.uniform(20, 200)),
        )
        for i in range(n_gen)
    )
    net = Network(buses, tuple(branches), dc, gens, zones, base_mva=100.0)
    return validate_network(net)


def random_profiles(rng: np.random.Generator, net, hours):
    total_cap = sum(g.capacity for g in net.generators)
    base = rng.uniform(0.3, 0.7) * total_cap
    swing = rng.uniform(0.05, 0.2) * base
    t = np.arange(hours)
    demand = base + swing * np.sin(2 * np.pi * t / 24 + rng.uniform(0, 6))
    return ProfileSet(hours, {1: np.clip(demand, 1.0, None)}, {})


# --- independent oracles -----------------------------------------------------


def lp_vertex_oracle(c, a_matrix, senses, rhs, lower, upper):
    """Brute-force optimum of a small LP by enumerating basic feasible points.

    Every combination of n active constraints (equalities always active,
    plus inequality rows and finite bounds) is solved as a square system
    and checked for feasibility. Only suitable for a handful of variables.
    """
    a = np.asarray(a_matrix.todense() if hasattr(a_matrix, "todense") else a_matrix)
    n = a.shape[1]
    eqs = []
    ineqs = []  # (row, b) meaning row @ x <= b
    for i, s in enumerate(senses):
        if s == "E":
            eqs.append((a[i], rhs[i]))
        elif s == "L":
            ineqs.append((a[i], rhs[i]))
        else:
            ineqs.append((-a[i], -rhs[i]))
    for j in range(n):
        e = np.zeros(n)
        e[j] = 1.0
        if np.isfinite(upper[j]):
            ineqs.append((e.copy(), upper[j]))
        if np.isfinite(lower[j]):
            ineqs.append((-e.copy(), -lower[j]))

    best = np.inf
    best_x = None
    for k in range(0, n + 1):
        for combo in itertools.combinations(range(len(ineqs)), k):
            rows = [r for r, _ in eqs] + [ineqs[j][0] for j in combo]
            vals = [b for _, b in eqs] + [ineqs[j][1] for j in combo]
            m = np.array(rows)
            if m.shape[0] < n or np.linalg.matrix_rank(m) < n:
                continue
            x, *_ = np.linalg.lstsq(m, np.array(vals), rcond=None)
            if np.max(np.abs(m @ x - np.array(vals))) > 1e-8:
                continue  # active set is inconsistent, not a vertex
            ok = all(abs(r @ x - b) <= 1e-7 for r, b in eqs) and all(
                r @ x <= b + 1e-7 for r, b in ineqs
            )
            if ok:
                val = float(np.dot(c, x))
                if val < best - 1e-12:
                    best = val
                    best_x = x
    return best, best_x


def monolithic_dispatch_oracle(net, profiles, shed_penalty=10_000.0):
    """Full-horizon dispatch optimum with flows substituted out.

    Variables are dispatch, angles, DC flows, and shed over every hour at
    once; AC limits become inequality rows on angle differences and ramps
    span the whole horizon with no window seams. Returns the optimal
    objective value.
    """
    H = profiles.horizon_hours
    G, B = len(net.generators), len(net.buses)
    D = len(net.dc_elements)
    bus_pos = {b.id: i for i, b in enumerate(net.buses)}
    npv = G * H + B * H + D * H + B * H  # p, theta, fd, s

    def p_col(g, t):
        return g * H + t

    def th_col(b, t):
        return G * H + b * H + t

    def fd_col(d, t):
        return G * H + B * H + d * H + t

    def s_col(b, t):
        return G * H + B * H + D * H + b * H + t

    from macrogrid.model import availability_matrix, bus_demand_matrix

    demand = bus_demand_matrix(net, profiles)
    avail = availability_matrix(net, profiles)

    a_eq = []
    b_eq = []
    for t in range(H):
        for b_i, bus in enumerate(net.buses):
            row = np.zeros(npv)
            for g_i, g in enumerate(net.generators):
                if bus_pos[g.bus] == b_i:
                    row[p_col(g_i, t)] = 1.0
            row[s_col(b_i, t)] = 1.0
            for br in net.branches:
                coef = net.base_mva * br.susceptance
                i_pos, j_pos = bus_pos[br.from_bus], bus_pos[br.to_bus]
                if i_pos == b_i:  # outgoing flow coef*(th_i - th_j)
                    row[th_col(i_pos, t)] -= coef
                    row[th_col(j_pos, t)] += coef
                elif j_pos == b_i:
                    row[th_col(i_pos, t)] += coef
                    row[th_col(j_pos, t)] -= coef
            for d_i, el in enumerate(net.dc_elements):
                if bus_pos[el.from_bus] == b_i:
                    row[fd_col(d_i, t)] -= 1.0
                elif bus_pos[el.to_bus] == b_i:
                    row[fd_col(d_i, t)] += 1.0
            a_eq.append(row)
            b_eq.append(demand[t, b_i])

    a_ub = []
    b_ub = []
    for t in range(H):
        for br in net.branches:
            coef = net.base_mva * br.susceptance
            i_pos, j_pos = bus_pos[br.from_bus], bus_pos[br.to_bus]
            row = np.zeros(npv)
            row[th_col(i_pos, t)] = coef
            row[th_col(j_pos, t)] = -coef
            a_ub.append(row.copy())
            b_ub.append(br.capacity)
            a_ub.append(-row)
            b_ub.append(br.capacity)
    for g_i, g in enumerate(net.generators):
        if g.ramp_limit >= g.capacity:
            continue
        for t in range(1, H):
            row = np.zeros(npv)
            row[p_col(g_i, t)] = 1.0
            row[p_col(g_i, t - 1)] = -1.0
            a_ub.append(row.copy())
            b_ub.append(g.ramp_limit)
            a_ub.append(-row)
            b_ub.append(g.ramp_limit)

    bounds = []
    refs = set(net.reference_buses.values())
    for g_i in range(G):
        for t in range(H):
            bounds.append((0.0, float(avail[t, g_i])))
    for b_i, bus in enumerate(net.buses):
        pin = bus.id in refs
        for _ in range(H):
            bounds.append((0.0, 0.0) if pin else (None, None))
    for d_i, el in enumerate(net.dc_elements):
        for _ in range(H):
            bounds.append((-el.capacity, el.capacity))
    for _ in range(B * H):
        bounds.append((0.0, None))

    c = np.zeros(npv)
    for g_i, g in enumerate(net.generators):
        c[p_col(g_i, 0) : p_col(g_i, 0) + H] = g.marginal_cost
    c[G * H + B * H + D * H :] = shed_penalty

    res = scipy.optimize.linprog(
        c,
        A_ub=np.array(a_ub) if a_ub else None,
        b_ub=np.array(b_ub) if b_ub else None,
        A_eq=np.array(a_eq),
        b_eq=np.array(b_eq),
        bounds=bounds,
        method="highs",
    )
    assert res.success, res.message
    return float(res.fun)
