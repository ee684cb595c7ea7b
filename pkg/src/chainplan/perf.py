"""PCIe crossing counts and the additive latency/throughput estimate.

Latency is modeled as per-vNF processing time on its device plus a fixed
cost per SmartNIC/CPU crossing; no queueing. Crossing-count deltas between
placements are therefore exact latency deltas whenever processing latencies
do not depend on the device.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .model import ServiceChain, VnfSpec
from .resources import max_chain_throughput


@dataclass(frozen=True)
class PerfEstimate:
    crossings: int
    latency_us: float
    max_throughput_gbps: float


def count_crossings(chain: ServiceChain) -> int:
    """Adjacent placement changes along [ingress anchor, vNFs..., egress anchor]."""
    seq = chain.placement_sequence()
    return sum(1 for a, b in zip(seq, seq[1:]) if a is not b)


def estimate_latency(
    chain: ServiceChain, specs: Mapping[str, VnfSpec], pcie_latency_us: float
) -> float:
    proc = sum(specs[v.spec].proc_latency(v.placement) for v in chain.vnfs)
    return proc + count_crossings(chain) * pcie_latency_us


def estimate_perf(
    chain: ServiceChain, specs: Mapping[str, VnfSpec], pcie_latency_us: float
) -> PerfEstimate:
    """Bundle crossings, latency, and the sustainable-throughput bound."""
    return PerfEstimate(
        crossings=count_crossings(chain),
        latency_us=estimate_latency(chain, specs, pcie_latency_us),
        max_throughput_gbps=max_chain_throughput(chain, specs),
    )
