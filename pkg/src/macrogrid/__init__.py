"""Production-cost modeling for multi-interconnection power grids."""

from .model import (
    AcBranch,
    Bus,
    BranchKind,
    DcElement,
    DcKind,
    Fuel,
    Generator,
    Interconnection,
    MwMileTotals,
    Network,
    ProfileSet,
    Seam,
    ValidationError,
    Zone,
    aggregate_mw_miles,
    interconnection_partition,
    network_violations,
    validate_network,
    validate_profiles,
)
from .io import (
    DatasetError,
    load_dataset,
    load_network,
    load_profiles,
    save_dataset,
    save_network,
    save_profiles,
)
from .lp import LinearProgram, LpSolution, solve_lp, write_lp_file
from .opf import (
    CurtailmentSeries,
    SimulationError,
    SimulationResult,
    WindowOptions,
    build_window_lp,
    curtailment_series,
    extract_lmps,
    simulate_horizon,
)
from .scenario import (
    B2bUpgrade,
    FleetChangeSet,
    GoalSpec,
    MacroGridDesign,
    NewDcLine,
    PoolResult,
    ScenarioError,
    ScenarioSpec,
    add_renewables_proportional,
    apply_fleet_changes,
    apply_macrogrid_design,
    build_scenario,
    goal_accounting,
    load_design,
    load_scenario,
    scale_demand,
)
from .expansion import (
    CongestionStats,
    ExpansionParams,
    ExpansionPlan,
    ExpansionStalledError,
    UpgradeRecord,
    apply_upgrades,
    congestion_stats,
    expand_until_goal,
    rank_upgrades,
)
from .analytics import (
    AnalyticsError,
    CapacityAdditions,
    CostBook,
    CurtailmentStats,
    EmissionTotals,
    OperatingPoint,
    PassthroughHub,
    PaymentsSummary,
    RegressionFit,
    SeamLedger,
    congestion_rent_total,
    curtailment_stats,
    emissions,
    emissions_delta_map,
    flow_share_regression,
    generation_mix,
    integrate_directional_twh,
    investment_cost,
    oriented_seam_flow,
    passthrough,
    payback,
    payments,
    seam_transfers,
)

__version__ = "0.1.0"
