"""Hot-spot migration planning for SmartNIC/CPU service chains.

Two policies share one greedy loop. The border policy (`plan_pam`) only
migrates vNFs sitting next to a CPU neighbor, so no plan it emits adds PCIe
crossings. The bottleneck baseline (`plan_naive`) picks from every SmartNIC
vNF and may split a SmartNIC run in two, paying two extra crossings.

Both pick the candidate with the smallest SmartNIC capacity (it releases the
most SmartNIC utilization per step), skip candidates the CPU cannot absorb,
and stop as soon as the SmartNIC fits strictly under capacity.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Mapping

from .model import LoadState, Placement, ServiceChain, VnfSpec
from .resources import is_overloaded, utilization

REJECT_CPU_HEADROOM = "cpu_headroom"
REASON_MIN_CAPACITY = "min_smartnic_capacity"


@dataclass(frozen=True)
class BorderSets:
    """Chain indices of SmartNIC vNFs adjacent to a CPU neighbor.

    `left` members have their upstream neighbor on the CPU, `right` members
    their downstream one; anchors count as neighbors. A singleton SmartNIC
    run is in both sets.
    """

    left: frozenset[int]
    right: frozenset[int]

    @property
    def union(self) -> frozenset[int]:
        return self.left | self.right


class PlanOutcome(Enum):
    NOT_OVERLOADED = "NotOverloaded"
    RESOLVED = "Resolved"
    SCALE_OUT_REQUIRED = "ScaleOutRequired"


@dataclass(frozen=True)
class MigrationStep:
    vnf_id: str
    source: Placement
    target: Placement
    reason: str = REASON_MIN_CAPACITY
    selected_as_candidate: bool = True


@dataclass(frozen=True)
class MigrationPlan:
    """Ordered migration steps plus the outcome and resulting chain.

    `rejected_candidates` lists vNFs that were selected but skipped because
    the CPU could not absorb them. `post_chain` is the input chain with
    exactly `steps` applied, in order.
    """

    steps: tuple[MigrationStep, ...]
    outcome: PlanOutcome
    rejected_candidates: tuple[tuple[str, str], ...]
    post_chain: ServiceChain


def identify_borders(chain: ServiceChain) -> BorderSets:
    """Find the SmartNIC vNFs whose neighbor (anchors included) is on the CPU.

    With the default SmartNIC anchors a chain-head SmartNIC vNF is not a
    left border: its upstream neighbor is the NIC itself.
    """
    seq = chain.placement_sequence()
    left: set[int] = set()
    right: set[int] = set()
    for i, vnf in enumerate(chain.vnfs):
        if vnf.placement is not Placement.SMARTNIC:
            continue
        if seq[i] is Placement.CPU:
            left.add(i)
        if seq[i + 2] is Placement.CPU:
            right.add(i)
    return BorderSets(frozenset(left), frozenset(right))


def select_candidate(
    chain: ServiceChain,
    borders: BorderSets,
    specs: Mapping[str, VnfSpec],
) -> str | None:
    """Border member with minimum SmartNIC capacity; lowest chain index on ties."""
    if not borders.union:
        return None
    idx = min(borders.union, key=lambda i: (specs[chain.vnfs[i].spec].cap_smartnic, i))
    return chain.vnfs[idx].id


def check_cpu_headroom(
    chain: ServiceChain,
    specs: Mapping[str, VnfSpec],
    candidate: str,
    load: LoadState,
) -> bool:
    """Would moving `candidate` keep the CPU strictly under capacity?

    The CPU sum reflects the chain as passed in, so migrations applied
    earlier in the same planning round are already counted.
    """
    cpu = utilization(chain, specs, Placement.CPU, load).utilization
    spec = specs[chain.vnfs[chain.index_of(candidate)].spec]
    return cpu + load.theta_cur / spec.cap_cpu < 1.0


def check_alleviated(
    chain: ServiceChain,
    specs: Mapping[str, VnfSpec],
    candidate: str,
    load: LoadState,
) -> bool:
    """Is the SmartNIC strictly under capacity once `candidate` is gone?"""
    total = sum(
        load.theta_cur / specs[v.spec].cap_smartnic
        for v in chain.vnfs
        if v.placement is Placement.SMARTNIC and v.id != candidate
    )
    return total < 1.0


@dataclass(frozen=True)
class _Iteration:
    """One selection round, kept so tests can audit the greedy choice."""

    pool: tuple[tuple[int, str, float], ...]  # (chain index, vnf id, smartnic capacity)
    selected: str
    headroom_ok: bool
    alleviated: bool | None  # None when the candidate was rejected


def _plan(
    chain: ServiceChain,
    specs: Mapping[str, VnfSpec],
    load: LoadState,
    *,
    borders_only: bool,
) -> tuple[MigrationPlan, tuple[_Iteration, ...]]:
    if not is_overloaded(chain, specs, Placement.SMARTNIC, load):
        return MigrationPlan((), PlanOutcome.NOT_OVERLOADED, (), chain), ()

    work = chain
    steps: list[MigrationStep] = []
    rejected: list[tuple[str, str]] = []
    iterations: list[_Iteration] = []

    if borders_only:
        borders = identify_borders(chain)
        left, right = set(borders.left), set(borders.right)
        pool: set[int] = set()
    else:
        left, right = set(), set()
        pool = {i for i, v in enumerate(chain.vnfs) if v.placement is Placement.SMARTNIC}

    outcome = PlanOutcome.SCALE_OUT_REQUIRED
    while True:
        candidates = sorted(left | right) if borders_only else sorted(pool)
        snapshot = tuple(
            (i, work.vnfs[i].id, specs[work.vnfs[i].spec].cap_smartnic) for i in candidates
        )
        if not candidates:
            break
        idx = min(candidates, key=lambda i: (specs[work.vnfs[i].spec].cap_smartnic, i))
        cand_id = work.vnfs[idx].id

        if not check_cpu_headroom(work, specs, cand_id, load):
            rejected.append((cand_id, REJECT_CPU_HEADROOM))
            iterations.append(_Iteration(snapshot, cand_id, False, None))
            left.discard(idx)
            right.discard(idx)
            pool.discard(idx)
            continue

        alleviated = check_alleviated(work, specs, cand_id, load)
        steps.append(MigrationStep(cand_id, Placement.SMARTNIC, Placement.CPU))
        work = work.with_placement(idx, Placement.CPU)
        iterations.append(_Iteration(snapshot, cand_id, True, alleviated))

        if borders_only:
            was_left, was_right = idx in left, idx in right
            left.discard(idx)
            right.discard(idx)
            # A migrated border exposes its same-side SmartNIC neighbor.
            if was_left and idx + 1 < len(work.vnfs) and work.vnfs[idx + 1].placement is Placement.SMARTNIC:
                left.add(idx + 1)
            if was_right and idx - 1 >= 0 and work.vnfs[idx - 1].placement is Placement.SMARTNIC:
                right.add(idx - 1)
        else:
            pool.discard(idx)

        if alleviated:
            outcome = PlanOutcome.RESOLVED
            break

    return MigrationPlan(tuple(steps), outcome, tuple(rejected), work), tuple(iterations)


def plan_pam(
    chain: ServiceChain, specs: Mapping[str, VnfSpec], load: LoadState
) -> MigrationPlan:
    """Push-aside migration: drain minimum-capacity border vNFs to the CPU.

    Never adds PCIe crossings. Returns NotOverloaded untouched plans when the
    SmartNIC already fits, and ScaleOutRequired when the border pool empties
    while the SmartNIC is still over capacity.
    """
    return _plan(chain, specs, load, borders_only=True)[0]


def plan_naive(
    chain: ServiceChain, specs: Mapping[str, VnfSpec], load: LoadState
) -> MigrationPlan:
    """Bottleneck baseline: same loop, but any SmartNIC vNF may be picked.

    Picking an interior vNF splits a SmartNIC run and costs two extra PCIe
    crossings. The CPU headroom check is kept even though a pure bottleneck
    rule would skip it; without it the baseline could emit infeasible plans.
    """
    return _plan(chain, specs, load, borders_only=False)[0]
