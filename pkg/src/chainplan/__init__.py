"""Placement planning and analytic performance models for SmartNIC/CPU service chains."""

from .model import (
    DEFAULT_PCIE_LATENCY_US,
    LoadState,
    Placement,
    Scenario,
    ServiceChain,
    ValidationReport,
    Violation,
    VnfInstance,
    VnfSpec,
    builtin_table1,
    validate,
)
from .oracle import (
    ChainTooLongError,
    PlacementRecord,
    VerificationReport,
    border_peel_closure,
    enumerate_placements,
    verify_plan,
)
from .perf import PerfEstimate, count_crossings, estimate_latency, estimate_perf
from .planner import (
    BorderSets,
    MigrationPlan,
    MigrationStep,
    PlanOutcome,
    check_alleviated,
    check_cpu_headroom,
    identify_borders,
    plan_naive,
    plan_pam,
    select_candidate,
)
from .reports import emit_report, parse_timeline_csv, timeline_to_csv
from .resources import UtilizationReport, is_overloaded, max_chain_throughput, utilization
from .scenario_io import (
    ScenarioFormatError,
    ScenarioValidationError,
    TracePoint,
    load_scenario,
    load_trace,
    save_scenario,
    scenario_from_dict,
    scenario_to_dict,
)
from .simulate import ComparisonReport, PolicyResult, TimelineRecord, compare, run_trace

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_PCIE_LATENCY_US",
    "BorderSets",
    "ChainTooLongError",
    "ComparisonReport",
    "LoadState",
    "MigrationPlan",
    "MigrationStep",
    "PerfEstimate",
    "PlacementRecord",
    "Placement",
    "PlanOutcome",
    "PolicyResult",
    "Scenario",
    "ScenarioFormatError",
    "ScenarioValidationError",
    "ServiceChain",
    "TimelineRecord",
    "TracePoint",
    "UtilizationReport",
    "ValidationReport",
    "VerificationReport",
    "Violation",
    "VnfInstance",
    "VnfSpec",
    "border_peel_closure",
    "builtin_table1",
    "check_alleviated",
    "check_cpu_headroom",
    "compare",
    "count_crossings",
    "emit_report",
    "enumerate_placements",
    "estimate_latency",
    "estimate_perf",
    "identify_borders",
    "is_overloaded",
    "load_scenario",
    "load_trace",
    "max_chain_throughput",
    "parse_timeline_csv",
    "plan_naive",
    "plan_pam",
    "run_trace",
    "save_scenario",
    "scenario_from_dict",
    "scenario_to_dict",
    "select_candidate",
    "timeline_to_csv",
    "utilization",
    "validate",
    "verify_plan",
]
