"""Service chain data model: placements, vNF specs, scenarios, validation."""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Mapping

DEFAULT_PCIE_LATENCY_US = 10.0


class Placement(Enum):
    """Where a vNF instance (or a chain anchor) sits."""

    SMARTNIC = "SmartNIC"
    CPU = "CPU"

    @classmethod
    def parse(cls, text: str) -> "Placement":
        for member in cls:
            if member.value == text:
                return member
        raise ValueError(f"unknown placement {text!r} (expected 'SmartNIC' or 'CPU')")

    def other(self) -> "Placement":
        return Placement.CPU if self is Placement.SMARTNIC else Placement.SMARTNIC


@dataclass(frozen=True)
class VnfSpec:
    """Throughput capacities (Gbps) and per-packet processing latencies (us) of one vNF type."""

    name: str
    cap_smartnic: float
    cap_cpu: float
    proc_latency_smartnic: float = 0.0
    proc_latency_cpu: float = 0.0

    def capacity(self, device: Placement) -> float:
        return self.cap_smartnic if device is Placement.SMARTNIC else self.cap_cpu

    def proc_latency(self, device: Placement) -> float:
        return self.proc_latency_smartnic if device is Placement.SMARTNIC else self.proc_latency_cpu


@dataclass(frozen=True)
class VnfInstance:
    id: str
    spec: str
    placement: Placement


@dataclass(frozen=True)
class ServiceChain:
    """Ordered vNF instances in traffic order, bracketed by the NIC-side anchors.

    Anchors default to the SmartNIC because packets physically enter and
    leave the host through the NIC; a chain-head vNF on the SmartNIC is
    therefore not adjacent to the CPU.
    """

    vnfs: tuple[VnfInstance, ...]
    ingress_anchor: Placement = Placement.SMARTNIC
    egress_anchor: Placement = Placement.SMARTNIC

    def __len__(self) -> int:
        return len(self.vnfs)

    def placements(self) -> tuple[Placement, ...]:
        return tuple(v.placement for v in self.vnfs)

    def placement_sequence(self) -> tuple[Placement, ...]:
        """Placements as traffic sees them: ingress anchor, every vNF, egress anchor."""
        return (self.ingress_anchor, *(v.placement for v in self.vnfs), self.egress_anchor)

    def index_of(self, vnf_id: str) -> int:
        for i, v in enumerate(self.vnfs):
            if v.id == vnf_id:
                return i
        raise KeyError(vnf_id)

    def with_placement(self, index: int, placement: Placement) -> "ServiceChain":
        vnfs = list(self.vnfs)
        vnfs[index] = replace(vnfs[index], placement=placement)
        return replace(self, vnfs=tuple(vnfs))

    def with_placements(self, placements: tuple[Placement, ...]) -> "ServiceChain":
        if len(placements) != len(self.vnfs):
            raise ValueError("placement vector length does not match chain length")
        vnfs = tuple(replace(v, placement=p) for v, p in zip(self.vnfs, placements))
        return replace(self, vnfs=vnfs)

    def on_device(self, device: Placement) -> tuple[VnfInstance, ...]:
        return tuple(v for v in self.vnfs if v.placement is device)


@dataclass(frozen=True)
class LoadState:
    """Current chain throughput in Gbps, uniform along the chain."""

    theta_cur: float


@dataclass(frozen=True)
class Scenario:
    chain: ServiceChain
    specs: Mapping[str, VnfSpec]
    load: LoadState
    pcie_latency_us: float = DEFAULT_PCIE_LATENCY_US


@dataclass(frozen=True)
class Violation:
    code: str
    where: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def codes(self) -> tuple[str, ...]:
        return tuple(v.code for v in self.violations)


def builtin_table1() -> dict[str, VnfSpec]:
    """Built-in capacity profile for the four stock vNF types.

    The load balancer's SmartNIC capacity is only known to exceed 10 Gbps;
    15 is a documented stand-in, and the shipped scenarios keep the load
    balancer on the CPU so the exact value never changes an outcome.
    Processing latencies default to 0 and are overridable per scenario.
    """
    specs = (
        VnfSpec("Firewall", cap_smartnic=10.0, cap_cpu=4.0),
        VnfSpec("Logger", cap_smartnic=2.0, cap_cpu=4.0),
        VnfSpec("Monitor", cap_smartnic=3.2, cap_cpu=10.0),
        VnfSpec("LoadBalancer", cap_smartnic=15.0, cap_cpu=4.0),
    )
    return {s.name: s for s in specs}


def validate(scenario: Scenario) -> ValidationReport:
    """Check every model invariant.

    A passing scenario is accepted by every other module without further
    checks; each kind of violation is reported under its own code with the
    offending field.
    """
    violations: list[Violation] = []
    chain = scenario.chain

    if not chain.vnfs:
        violations.append(Violation("empty_chain", "chain", "chain has no vNF instances"))

    seen: set[str] = set()
    for v in chain.vnfs:
        if v.id in seen:
            violations.append(
                Violation("duplicate_vnf_id", f"chain[{v.id}]", f"vNF id {v.id!r} appears more than once")
            )
        seen.add(v.id)
        if v.spec not in scenario.specs:
            violations.append(
                Violation(
                    "unresolved_spec_reference",
                    f"chain[{v.id}].spec",
                    f"vNF {v.id!r} references unknown spec {v.spec!r}",
                )
            )

    for name, spec in scenario.specs.items():
        if spec.cap_smartnic <= 0:
            violations.append(
                Violation("non_positive_capacity", f"specs[{name}].cap_smartnic",
                          f"capacity must be > 0, got {spec.cap_smartnic}")
            )
        if spec.cap_cpu <= 0:
            violations.append(
                Violation("non_positive_capacity", f"specs[{name}].cap_cpu",
                          f"capacity must be > 0, got {spec.cap_cpu}")
            )
        if spec.proc_latency_smartnic < 0:
            violations.append(
                Violation("negative_latency", f"specs[{name}].proc_latency_smartnic",
                          f"processing latency must be >= 0, got {spec.proc_latency_smartnic}")
            )
        if spec.proc_latency_cpu < 0:
            violations.append(
                Violation("negative_latency", f"specs[{name}].proc_latency_cpu",
                          f"processing latency must be >= 0, got {spec.proc_latency_cpu}")
            )

    if scenario.load.theta_cur < 0:
        violations.append(
            Violation("negative_load", "load.theta_cur",
                      f"throughput must be >= 0, got {scenario.load.theta_cur}")
        )
    if scenario.pcie_latency_us < 0:
        violations.append(
            Violation("negative_pcie_latency", "pcie_latency_us",
                      f"crossing latency must be >= 0, got {scenario.pcie_latency_us}")
        )

    return ValidationReport(tuple(violations))
