"""Linear utilization model and the chain throughput bound it implies.

A vNF's resource consumption grows linearly with its throughput, so at chain
throughput theta it uses the fraction theta / capacity of its device. Device
utilization is the sum of those fractions over the hosted vNFs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

from .model import LoadState, Placement, ServiceChain, VnfSpec


@dataclass(frozen=True)
class UtilizationReport:
    """Demand ratio on one device; exceeds 1 when the device is a hot spot.

    The ratio is not clamped: a value above 1 shows how far over capacity the
    demand is.
    """

    device: Placement
    utilization: float
    per_vnf: tuple[tuple[str, float], ...]


def utilization(
    chain: ServiceChain,
    specs: Mapping[str, VnfSpec],
    device: Placement,
    load: LoadState,
) -> UtilizationReport:
    """Summed demand ratio theta_cur / capacity over the vNFs hosted on `device`.

    Anchors contribute nothing; a device hosting no vNFs reports 0.
    """
    per_vnf = tuple(
        (v.id, load.theta_cur / specs[v.spec].capacity(device))
        for v in chain.vnfs
        if v.placement is device
    )
    return UtilizationReport(device, sum(r for _, r in per_vnf), per_vnf)


def is_overloaded(
    chain: ServiceChain,
    specs: Mapping[str, VnfSpec],
    device: Placement,
    load: LoadState,
) -> bool:
    """A device is a hot spot when demand reaches capacity (ratio >= 1)."""
    return utilization(chain, specs, device, load).utilization >= 1.0


def max_chain_throughput(chain: ServiceChain, specs: Mapping[str, VnfSpec]) -> float:
    """Largest throughput at which neither device is overloaded.

    Each device bounds the chain by 1 / sum(1 / cap_i) over its hosted vNFs;
    a device hosting nothing imposes no bound. Finite for any non-empty
    chain.
    """
    best = math.inf
    for device in Placement:
        inv = sum(
            1.0 / specs[v.spec].capacity(device)
            for v in chain.vnfs
            if v.placement is device
        )
        if inv > 0.0:
            best = min(best, 1.0 / inv)
    return best
