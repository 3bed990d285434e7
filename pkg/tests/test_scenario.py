import numpy as np
import pytest

from helpers import flat_profiles, two_bus_congested

from macrogrid.io import load_dataset
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
    Seam,
    Zone,
    validate_network,
)
from macrogrid.opf import WindowOptions, simulate_horizon
from macrogrid.scenario import (
    B2bUpgrade,
    FleetChangeSet,
    GoalSpec,
    MacroGridDesign,
    NewDcLine,
    ScenarioError,
    apply_fleet_changes,
    apply_macrogrid_design,
    add_renewables_proportional,
    design_from_dict,
    design_to_dict,
    goal_accounting,
    scale_demand,
)

W, E, T = Interconnection.WESTERN, Interconnection.EASTERN, Interconnection.ERCOT


def fleet_net():
    zones = (Zone(1, "z", "TX", T, 0.01),)
    buses = (
        Bus(1, 1, "TX", T, 0.5),
        Bus(2, 1, "TX", T, 0.5),
    )
    branches = (AcBranch(1, 1, 2, 5.0, 500.0, 50.0),)
    gens = (
        Generator(1, 1, Fuel.COAL, 60_000.0, 20.0, 1000.0, co2_rate=1.0),
        Generator(2, 2, Fuel.COAL, 40_000.0, 22.0, 1000.0, co2_rate=1.0),
        Generator(3, 2, Fuel.NG, 50_000.0, 30.0, 1000.0, co2_rate=0.4),
    )
    return validate_network(Network(buses, branches, (), gens, zones))


class TestFleetChanges:
    def test_scaling_matches_retirement_arithmetic(self):
        # 100 GW of coal scaled by 0.65 leaves 65 GW.
        net = fleet_net()
        out = apply_fleet_changes(
            net, FleetChangeSet(scale_factors={("TX", Fuel.COAL): 0.65})
        )
        coal = sum(g.capacity for g in out.generators if g.fuel == Fuel.COAL)
        assert coal == pytest.approx(65_000.0)
        ng = sum(g.capacity for g in out.generators if g.fuel == Fuel.NG)
        assert ng == pytest.approx(50_000.0)  # untouched

    def test_empty_changeset_is_identity(self):
        net = fleet_net()
        out = apply_fleet_changes(net, FleetChangeSet())
        assert out.generators == net.generators
        assert out.buses == net.buses

    def test_addition_enforces_profiled(self):
        net = fleet_net()
        add = Generator(9, 2, Fuel.WIND, 10.0, 0.0, 10.0, profiled=False)
        out = apply_fleet_changes(net, FleetChangeSet(additions=(add,)))
        assert len(out.generators) == len(net.generators) + 1
        assert out.gen_by_id[9].profiled is True

    def test_unknown_retirement_rejected(self):
        with pytest.raises(ScenarioError, match="unknown generator"):
            apply_fleet_changes(fleet_net(), FleetChangeSet(retirements=(77,)))

    def test_addition_id_reuse_rejected(self):
        add = Generator(1, 2, Fuel.NG, 10.0, 10.0, 10.0)
        with pytest.raises(ScenarioError, match="reuses id"):
            apply_fleet_changes(fleet_net(), FleetChangeSet(additions=(add,)))

    def test_addition_at_unknown_bus_rejected(self):
        add = Generator(9, 99, Fuel.NG, 10.0, 10.0, 10.0)
        with pytest.raises(ScenarioError, match="unknown bus"):
            apply_fleet_changes(fleet_net(), FleetChangeSet(additions=(add,)))


class TestScaleDemand:
    def test_compounding_factor(self):
        net = two_bus_congested()
        profiles = flat_profiles(net, 4, 100.0)
        net = Network(
            net.buses, net.branches, net.dc_elements, net.generators,
            (Zone(1, "z", "CA", W, 0.01),), net.base_mva,
        )
        out = scale_demand(profiles, net, 10)
        np.testing.assert_allclose(out.demand[1], 100.0 * 1.01 ** 10)
        assert out.demand[1][0] == pytest.approx(110.46, abs=0.01)

    def test_zero_growth_identity(self):
        net = two_bus_congested()
        net = Network(
            net.buses, net.branches, net.dc_elements, net.generators,
            (Zone(1, "z", "CA", W, 0.0),), net.base_mva,
        )
        profiles = flat_profiles(net, 4, 100.0)
        out = scale_demand(profiles, net, 10)
        np.testing.assert_array_equal(out.demand[1], profiles.demand[1])

    def test_two_zone_aggregate_growth(self):
        zones = (Zone(1, "a", "CA", W, 0.009), Zone(2, "b", "WA", W, 0.017))
        buses = (Bus(1, 1, "CA", W, 1.0), Bus(2, 2, "WA", W, 1.0))
        branches = (AcBranch(1, 1, 2, 5.0, 100.0, 10.0),)
        gens = (Generator(1, 1, Fuel.NG, 100.0, 20.0, 100.0),)
        net = validate_network(Network(buses, branches, (), gens, zones))
        profiles = ProfileSet(2, {1: np.full(2, 100.0), 2: np.full(2, 100.0)}, {})
        out = scale_demand(profiles, net, 10)
        base = 200.0
        scaled = float(out.demand[1][0] + out.demand[2][0])
        growth = scaled / base - 1.0
        # Hand compounding: mean of 9.4% and 18.4% is about 13.9%.
        assert growth == pytest.approx(0.139, abs=0.002)

    def test_override_wins(self):
        net = two_bus_congested()
        profiles = flat_profiles(net, 2, 100.0)
        out = scale_demand(profiles, net, 10, growth_override={1: 0.0})
        np.testing.assert_array_equal(out.demand[1], profiles.demand[1])


class TestRenewableBuildout:
    def wind_state(self):
        zones = (Zone(1, "z", "KS", E, 0.0),)
        buses = (Bus(1, 1, "KS", E, 1.0), Bus(2, 1, "KS", E, 0.0))
        branches = (AcBranch(1, 1, 2, 5.0, 100.0, 10.0),)
        gens = (
            Generator(1, 1, Fuel.WIND, 10.0, 0.0, 10.0, profiled=True),
            Generator(2, 2, Fuel.WIND, 30.0, 0.0, 30.0, profiled=True),
            Generator(3, 1, Fuel.NG, 50.0, 30.0, 50.0),
        )
        return validate_network(Network(buses, branches, (), gens, zones))

    def test_proportional_split(self):
        out = add_renewables_proportional(self.wind_state(), {"KS": (0.0, 40.0)})
        assert out.gen_by_id[1].capacity == pytest.approx(20.0)
        assert out.gen_by_id[2].capacity == pytest.approx(60.0)

    def test_zero_target_identity(self):
        net = self.wind_state()
        out = add_renewables_proportional(net, {"KS": (0.0, 0.0)})
        assert out.generators == net.generators

    def test_ratios_preserved_on_doubling(self):
        net = self.wind_state()
        existing = [g.capacity for g in net.generators if g.fuel == Fuel.WIND]
        out = add_renewables_proportional(net, {"KS": (0.0, sum(existing))})
        scaled = [g.capacity for g in out.generators if g.fuel == Fuel.WIND]
        assert sum(scaled) == pytest.approx(2 * sum(existing), rel=1e-12)
        for before, after in zip(existing, scaled):
            assert after / before == pytest.approx(2.0, rel=1e-12)

    def test_greenfield_state_rejected(self):
        with pytest.raises(ScenarioError, match="no existing solar"):
            add_renewables_proportional(self.wind_state(), {"KS": (10.0, 0.0)})


def seam_net():
    zones = (
        Zone(1, "w", "AZ", W, 0.0),
        Zone(2, "e", "OK", E, 0.0),
        Zone(3, "t", "TX", T, 0.0),
    )
    buses = (
        Bus(1, 1, "AZ", W, 1.0),
        Bus(2, 2, "OK", E, 1.0),
        Bus(3, 3, "TX", T, 1.0),
    )
    gens = (Generator(1, 1, Fuel.NG, 100.0, 20.0, 100.0),)
    dc = (DcElement(1, 2, 1, 200.0, DcKind.B2B, seam=Seam.EAST_WEST),)
    return validate_network(Network(buses, (), dc, gens, zones))


class TestMacroGridDesign:
    def test_b2b_upgrade_applies(self):
        net = seam_net()
        design = MacroGridDesign(
            name="Design2a",
            b2b_upgrades=(B2bUpgrade(1, 2895.0, label="Eddy"),),
        )
        out = apply_macrogrid_design(net, design)
        assert out.dc_by_id[1].capacity == 2895.0
        assert net.dc_by_id[1].capacity == 200.0  # input untouched

    def test_new_lines_appended_with_inferred_seams(self):
        net = seam_net()
        design = MacroGridDesign(
            name="Design2b",
            new_dc_lines=(
                NewDcLine(2, 1, 9500.0, 1200.0),
                NewDcLine(2, 3, 9500.0, 400.0),
                NewDcLine(1, 3, 9500.0, 700.0),
            ),
        )
        out = apply_macrogrid_design(net, design)
        assert len(out.dc_elements) == len(net.dc_elements) + 3
        new = [e for e in out.dc_elements if e.id > 1]
        assert [e.seam for e in new] == [
            Seam.EAST_WEST, Seam.EAST_ERCOT, Seam.WEST_ERCOT,
        ]
        assert all(e.kind == DcKind.LINE for e in new)

    def test_downgrade_rejected(self):
        net = seam_net()
        design = MacroGridDesign(b2b_upgrades=(B2bUpgrade(1, 50.0),))
        with pytest.raises(ScenarioError, match="downgrade"):
            apply_macrogrid_design(net, design)

    def test_unknown_element_rejected(self):
        design = MacroGridDesign(b2b_upgrades=(B2bUpgrade(42, 500.0),))
        with pytest.raises(ScenarioError, match="unknown dc element"):
            apply_macrogrid_design(seam_net(), design)

    def test_never_touches_ac_branches(self, minius_dir):
        from macrogrid.scenario import load_design

        net, _ = load_dataset(minius_dir)
        design = load_design(minius_dir / "designs" / "design2b.json")
        out = apply_macrogrid_design(net, design)
        assert out.branches == net.branches
        for e in net.dc_elements:
            assert out.dc_by_id[e.id].capacity >= e.capacity

    def test_design_json_roundtrip(self):
        design = MacroGridDesign(
            name="Design3",
            b2b_upgrades=(B2bUpgrade(1, 500.0, label="Welsh", prev_capacity_mw=200.0),),
            new_dc_lines=(NewDcLine(2, 1, 8000.0, 900.0, label="x"),),
        )
        assert design_from_dict(design_to_dict(design)) == design


class TestGoalAccounting:
    def test_target_from_goal_fraction(self):
        # 60% of a 339 TWh annual demand is 203.4 TWh.
        zones = (Zone(1, "z", "CA", W, 0.0),)
        buses = (Bus(1, 1, "CA", W, 1.0),)
        gens = (Generator(1, 1, Fuel.SOLAR, 1.0, 0.0, 1.0, profiled=True),)
        net = validate_network(Network(buses, (), (), gens, zones))
        hours = 4
        per_hour = 339e6 / hours  # MWh demand summing to 339 TWh
        profiles = ProfileSet(
            hours, {1: np.full(hours, per_hour)}, {1: np.zeros(hours)}
        )
        goals = GoalSpec(fractions={"CA": 0.6}, goal_kind="renewable")
        from macrogrid.opf import SimulationResult

        result = SimulationResult(
            gen_ids=(1,), bus_ids=(1,), branch_ids=(), dc_ids=(),
            dispatch=np.zeros((hours, 1)), angle=np.zeros((hours, 1)),
            ac_flow=np.zeros((hours, 0)), dc_flow=np.zeros((hours, 0)),
            shed=np.zeros((hours, 1)), lmp=np.zeros((hours, 1)),
            branch_mu=np.zeros((hours, 0)), dc_mu=np.zeros((hours, 0)),
            bus_demand=np.full((hours, 1), per_hour),
            fuel_cost=0.0, objective=0.0,
        )
        pools = goal_accounting(result, net, profiles, goals)
        assert len(pools) == 1
        assert pools[0].target_twh == pytest.approx(203.4)
        assert not pools[0].met

    def test_zero_goal_trivially_met(self):
        net = two_bus_congested()
        profiles = flat_profiles(net, 4, 50.0)
        res = simulate_horizon(net, profiles, WindowOptions(window_hours=4))
        pools = goal_accounting(res, net, profiles, GoalSpec(fractions={"CA": 0.0}))
        assert pools[0].met

    def test_pool_delivery_matches_hand_sum(self, threebus_dir):
        net, profiles = load_dataset(threebus_dir)
        res = simulate_horizon(net, profiles, WindowOptions())
        goals = GoalSpec(
            fractions={"CA": 0.5}, goal_kind="renewable", pools=(("CA",),)
        )
        pools = goal_accounting(res, net, profiles, goals)
        wind_idx = [i for i, g in enumerate(net.generators) if g.fuel == Fuel.WIND]
        hand = sum(float(res.dispatch[:, i].sum()) for i in wind_idx) / 1e6
        assert pools[0].delivered_twh == pytest.approx(hand, rel=1e-12)

    def test_delivered_bounded_by_available(self, threebus_dir):
        from macrogrid.model import availability_matrix

        net, profiles = load_dataset(threebus_dir)
        res = simulate_horizon(net, profiles, WindowOptions())
        goals = GoalSpec(fractions={"CA": 0.9}, goal_kind="renewable")
        pools = goal_accounting(res, net, profiles, goals)
        avail = availability_matrix(net, profiles)
        qualifying = sum(
            float(avail[:, i].sum())
            for i, g in enumerate(net.generators)
            if g.fuel == Fuel.WIND
        ) / 1e6
        assert pools[0].delivered_twh <= qualifying + 1e-12

    def test_pool_validation(self):
        with pytest.raises(ScenarioError, match="no goal"):
            GoalSpec(fractions={"CA": 0.5}, pools=(("CA", "WA"),)).validate()
        with pytest.raises(ScenarioError, match="two pools"):
            GoalSpec(
                fractions={"CA": 0.5, "WA": 0.5},
                pools=(("CA", "WA"), ("CA",)),
            ).validate()

    def test_cross_seam_pool_needs_flag(self):
        net = seam_net()
        goals = GoalSpec(
            fractions={"AZ": 0.5, "OK": 0.5},
            pools=(("AZ", "OK"),),
            cross_seam_pooling=False,
        )
        with pytest.raises(ScenarioError, match="cross_seam_pooling"):
            goals.validate(net)
        GoalSpec(
            fractions={"AZ": 0.5, "OK": 0.5},
            pools=(("AZ", "OK"),),
            cross_seam_pooling=True,
        ).validate(net)
