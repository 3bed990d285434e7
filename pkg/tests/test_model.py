import numpy as np
import pytest

from helpers import random_network, two_bus_congested

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
    ValidationError,
    Zone,
    aggregate_mw_miles,
    interconnection_partition,
    network_violations,
    profile_violations,
    seam_between,
    validate_network,
)


def minimal_net(**overrides):
    parts = dict(
        buses=(
            Bus(1, 1, "CA", Interconnection.WESTERN, 0.5),
            Bus(2, 1, "CA", Interconnection.WESTERN, 0.5),
        ),
        branches=(AcBranch(1, 1, 2, 5.0, 100.0, 50.0),),
        dc_elements=(),
        generators=(Generator(1, 1, Fuel.NG, 50.0, 20.0, 50.0),),
        zones=(Zone(1, "z", "CA", Interconnection.WESTERN, 0.01),),
    )
    parts.update(overrides)
    return Network(**parts)


def test_valid_network_passes():
    validate_network(minimal_net())


def test_demand_share_must_sum_to_one():
    net = minimal_net(
        buses=(
            Bus(1, 1, "CA", Interconnection.WESTERN, 0.5),
            Bus(2, 1, "CA", Interconnection.WESTERN, 0.6),
        )
    )
    msgs = network_violations(net)
    assert any("demand_share sums" in m for m in msgs)


def test_dangling_branch_reference_names_branch():
    net = minimal_net(branches=(AcBranch(7, 1, 99, 5.0, 100.0, 50.0),))
    msgs = network_violations(net)
    assert any("branch 7" in m and "99" in m for m in msgs)


def test_cross_interconnection_ac_branch_rejected():
    net = minimal_net(
        buses=(
            Bus(1, 1, "CA", Interconnection.WESTERN, 1.0),
            Bus(2, 2, "TX", Interconnection.ERCOT, 1.0),
        ),
        zones=(
            Zone(1, "w", "CA", Interconnection.WESTERN, 0.0),
            Zone(2, "e", "TX", Interconnection.ERCOT, 0.0),
        ),
    )
    msgs = network_violations(net)
    assert any("joins interconnections" in m for m in msgs)


def test_disconnected_interconnection_detected():
    net = minimal_net(branches=())
    msgs = network_violations(net)
    assert any("disconnected interconnection" in m for m in msgs)


def test_duplicate_ids_detected():
    net = minimal_net(
        generators=(
            Generator(1, 1, Fuel.NG, 50.0, 20.0, 50.0),
            Generator(1, 2, Fuel.NG, 50.0, 20.0, 50.0),
        )
    )
    assert any("duplicate generator id 1" in m for m in network_violations(net))


def test_profiled_fuel_enforced():
    net = minimal_net(
        generators=(Generator(1, 1, Fuel.WIND, 50.0, 0.0, 50.0, profiled=False),)
    )
    assert any("must be profiled" in m for m in network_violations(net))


def test_transformer_length_must_be_zero():
    from macrogrid.model import BranchKind

    net = minimal_net(
        branches=(AcBranch(1, 1, 2, 5.0, 100.0, 30.0, BranchKind.TRANSFORMER),)
    )
    assert any("transformer must have length 0" in m for m in network_violations(net))


def test_b2b_length_must_be_zero():
    net = minimal_net(
        dc_elements=(DcElement(1, 1, 2, 100.0, DcKind.B2B, length=10.0),)
    )
    assert any("length 0" in m for m in network_violations(net))


def test_seam_between():
    assert seam_between(Interconnection.EASTERN, Interconnection.WESTERN) == Seam.EAST_WEST
    assert seam_between(Interconnection.WESTERN, Interconnection.EASTERN) == Seam.EAST_WEST
    assert seam_between(Interconnection.EASTERN, Interconnection.ERCOT) == Seam.EAST_ERCOT
    assert seam_between(Interconnection.ERCOT, Interconnection.WESTERN) == Seam.WEST_ERCOT
    assert seam_between(Interconnection.ERCOT, Interconnection.ERCOT) == Seam.INTRA


class TestPartition:
    def test_single_component(self):
        net = two_bus_congested()
        part = interconnection_partition(net)
        assert part == {1: Interconnection.WESTERN, 2: Interconnection.WESTERN}

    def test_two_components_joined_by_dc(self):
        # Hand-built 4-bus grid: Eastern pair and ERCOT pair, one B2B between.
        zones = (
            Zone(1, "e", "IL", Interconnection.EASTERN, 0.0),
            Zone(2, "t", "TX", Interconnection.ERCOT, 0.0),
        )
        buses = (
            Bus(1, 1, "IL", Interconnection.EASTERN, 0.5),
            Bus(2, 1, "IL", Interconnection.EASTERN, 0.5),
            Bus(3, 2, "TX", Interconnection.ERCOT, 0.5),
            Bus(4, 2, "TX", Interconnection.ERCOT, 0.5),
        )
        branches = (
            AcBranch(1, 1, 2, 5.0, 100.0, 10.0),
            AcBranch(2, 3, 4, 5.0, 100.0, 10.0),
        )
        dc = (DcElement(1, 2, 3, 200.0, DcKind.B2B),)
        gens = (Generator(1, 1, Fuel.NG, 50.0, 20.0, 50.0),)
        net = validate_network(Network(buses, branches, dc, gens, zones))
        part = interconnection_partition(net)
        assert part[1] == part[2] == Interconnection.EASTERN
        assert part[3] == part[4] == Interconnection.ERCOT

    def test_mixed_component_raises(self):
        net = minimal_net(
            buses=(
                Bus(1, 1, "CA", Interconnection.WESTERN, 1.0),
                Bus(2, 2, "IL", Interconnection.EASTERN, 1.0),
            ),
            zones=(
                Zone(1, "w", "CA", Interconnection.WESTERN, 0.0),
                Zone(2, "e", "IL", Interconnection.EASTERN, 0.0),
            ),
        )
        with pytest.raises(ValidationError):
            interconnection_partition(net)

    def test_partition_covers_every_bus_exactly_once(self):
        rng = np.random.default_rng(7)
        for _ in range(10):
            net = random_network(rng)
            part = interconnection_partition(net)
            assert sorted(part) == sorted(b.id for b in net.buses)


class TestMwMiles:
    def test_single_branch(self):
        net = minimal_net(branches=(AcBranch(1, 1, 2, 5.0, 1000.0, 100.0),))
        assert aggregate_mw_miles(net).ac_tw_miles == pytest.approx(0.1)

    def test_empty(self):
        net = minimal_net(branches=())
        totals = aggregate_mw_miles(net)
        assert totals.ac_tw_miles == 0.0
        assert totals.dc_tw_miles == 0.0

    def test_two_branches_hand_sum(self):
        net = minimal_net(
            branches=(
                AcBranch(1, 1, 2, 5.0, 500.0, 200.0),
                AcBranch(2, 1, 2, 5.0, 1000.0, 50.0),
            )
        )
        assert aggregate_mw_miles(net).ac_tw_miles == pytest.approx(0.15)

    def test_additive_over_disjoint_branch_sets(self):
        rng = np.random.default_rng(3)
        net = random_network(rng, max_buses=6, max_branches=8)
        k = len(net.branches) // 2
        first = net.with_branches(net.branches[:k])
        second = net.with_branches(net.branches[k:])
        total = aggregate_mw_miles(net)
        assert total.ac_tw_miles == pytest.approx(
            aggregate_mw_miles(first).ac_tw_miles
            + aggregate_mw_miles(second).ac_tw_miles
        )

    def test_dc_reported_separately(self):
        net = minimal_net(
            dc_elements=(DcElement(1, 1, 2, 2000.0, DcKind.LINE, length=500.0),)
        )
        totals = aggregate_mw_miles(net)
        assert totals.dc_tw_miles == pytest.approx(1.0)
        assert totals.ac_tw_miles == pytest.approx(0.005)


class TestProfileValidation:
    def test_availability_out_of_range(self):
        net = minimal_net(
            generators=(Generator(1, 1, Fuel.WIND, 50.0, 0.0, 50.0, profiled=True),)
        )
        profiles = ProfileSet(2, {1: np.array([10.0, 10.0])}, {1: np.array([0.5, 1.3])})
        msgs = profile_violations(profiles, net)
        assert any("generator 1" in m and "hour 1" in m for m in msgs)

    def test_length_mismatch(self):
        net = minimal_net()
        profiles = ProfileSet(4, {1: np.ones(2)}, {})
        assert any("expected 4" in m for m in profile_violations(profiles, net))

    def test_missing_profiled_column(self):
        net = minimal_net(
            generators=(Generator(1, 1, Fuel.SOLAR, 50.0, 0.0, 50.0, profiled=True),)
        )
        profiles = ProfileSet(2, {1: np.ones(2)}, {})
        assert any("missing an availability column" in m for m in profile_violations(profiles, net))
