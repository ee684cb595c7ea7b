from __future__ import annotations

import itertools
import json
import random
from dataclasses import asdict, replace

import pytest

import golden
import independent_oracle as oracle_script
import randgen
from chainplan import (
    BorderSets,
    LoadState,
    Placement,
    PlanOutcome,
    ServiceChain,
    VnfInstance,
    VnfSpec,
    check_alleviated,
    check_cpu_headroom,
    count_crossings,
    identify_borders,
    plan_naive,
    plan_pam,
    select_candidate,
    utilization,
)
from chainplan.planner import _plan

S = Placement.SMARTNIC
C = Placement.CPU


def direct_border_scan(chain: ServiceChain) -> tuple[set[int], set[int]]:
    """Reference scan: spell the neighbor rule out position by position."""
    left, right = set(), set()
    n = len(chain.vnfs)
    for i, vnf in enumerate(chain.vnfs):
        if vnf.placement is not S:
            continue
        upstream = chain.ingress_anchor if i == 0 else chain.vnfs[i - 1].placement
        downstream = chain.egress_anchor if i == n - 1 else chain.vnfs[i + 1].placement
        if upstream is C:
            left.add(i)
        if downstream is C:
            right.add(i)
    return left, right


class TestIdentifyBorders:
    def test_golden_chain(self, fig1_chain):
        borders = identify_borders(fig1_chain)
        assert borders.left == {1}  # Logger
        assert borders.right == {3}  # Firewall

    def test_all_cpu_chain_has_no_borders(self):
        borders = identify_borders(golden.chain_of("CCCC"))
        assert borders.left == frozenset()
        assert borders.right == frozenset()

    def test_two_smartnic_segments(self):
        # [A@S, B@C, C@S, D@S, E@C] with SmartNIC anchors
        borders = identify_borders(golden.chain_of("SCSSC"))
        assert borders.left == {2}
        assert borders.right == {0, 3}

    def test_all_smartnic_chain_with_smartnic_anchors_has_no_borders(self):
        borders = identify_borders(golden.chain_of("SSS"))
        assert borders.union == frozenset()

    def test_cpu_anchor_makes_chain_head_a_left_border(self):
        borders = identify_borders(golden.chain_of("SS", ingress=C))
        assert borders.left == {0}

    def test_singleton_segment_is_in_both_sets(self):
        borders = identify_borders(golden.chain_of("CSC"))
        assert borders.left == {1}
        assert borders.right == {1}

    def test_members_are_on_smartnic(self):
        rng = random.Random(3)
        for _ in range(100):
            chain, _, _ = randgen.random_scenario(rng)
            for i in identify_borders(chain).union:
                assert chain.vnfs[i].placement is S

    def test_matches_direct_scan_exhaustively(self):
        anchors = (S, C)
        for n in range(1, 9):
            for bits in itertools.product("SC", repeat=n):
                for ingress, egress in itertools.product(anchors, anchors):
                    chain = golden.chain_of("".join(bits), ingress=ingress, egress=egress)
                    borders = identify_borders(chain)
                    left, right = direct_border_scan(chain)
                    assert borders.left == left
                    assert borders.right == right

    def test_matches_direct_scan_on_random_chains(self):
        rng = random.Random(4)
        for _ in range(200):
            chain, _, _ = randgen.random_scenario(rng)
            borders = identify_borders(chain)
            left, right = direct_border_scan(chain)
            assert (borders.left, borders.right) == (left, right)


class TestSelectCandidate:
    def test_logger_beats_firewall(self, fig1_chain, fig1_specs):
        borders = identify_borders(fig1_chain)
        assert select_candidate(fig1_chain, borders, fig1_specs) == "Logger"

    def test_empty_union_returns_none(self, fig1_chain, fig1_specs):
        empty = BorderSets(frozenset(), frozenset())
        assert select_candidate(fig1_chain, empty, fig1_specs) is None

    def test_equal_capacities_tie_break_on_lowest_index(self):
        specs = {
            "pad": VnfSpec("pad", cap_smartnic=4.0, cap_cpu=4.0),
            "four": VnfSpec("four", cap_smartnic=4.0, cap_cpu=4.0),
        }
        chain = ServiceChain(
            (
                VnfInstance("x", "pad", C),
                VnfInstance("a", "four", S),
                VnfInstance("y", "pad", C),
                VnfInstance("b", "four", S),
                VnfInstance("z", "pad", C),
            )
        )
        borders = identify_borders(chain)
        assert borders.union == {1, 3}
        assert select_candidate(chain, borders, specs) == "a"


class TestCpuHeadroom:
    def test_golden_chain_logger_at_1_2(self, fig1_chain, fig1_specs):
        assert check_cpu_headroom(fig1_chain, fig1_specs, "Logger", LoadState(1.2))
        assert oracle_script.cpu_headroom_values()[1.2] < 1.0

    def test_zero_load_always_passes(self, fig1_chain, fig1_specs):
        assert check_cpu_headroom(fig1_chain, fig1_specs, "Logger", LoadState(0.0))

    def test_golden_chain_logger_at_1_5_fails(self, fig1_chain, fig1_specs):
        assert not check_cpu_headroom(fig1_chain, fig1_specs, "Logger", LoadState(1.5))
        assert oracle_script.cpu_headroom_values()[1.5] >= 1.0


class TestAlleviated:
    def test_golden_chain_without_logger(self, fig1_chain, fig1_specs):
        assert check_alleviated(fig1_chain, fig1_specs, "Logger", LoadState(1.2))

    def test_candidate_is_only_smartnic_vnf(self, fig1_specs):
        chain = ServiceChain(
            (VnfInstance("x", "LoadBalancer", C), VnfInstance("Logger", "Logger", S))
        )
        assert check_alleviated(chain, fig1_specs, "Logger", LoadState(100.0))

    def test_monitor_override_at_1_6_fails(self, fig1_chain):
        specs = golden.monitor_bottleneck_specs()
        assert not check_alleviated(fig1_chain, specs, "Logger", LoadState(1.6))


class TestPlanPam:
    def test_golden_chain_migrates_logger(self, fig1_chain, fig1_specs):
        plan = plan_pam(fig1_chain, fig1_specs, LoadState(1.2))
        assert [s.vnf_id for s in plan.steps] == ["Logger"]
        assert plan.outcome is PlanOutcome.RESOLVED
        assert plan.rejected_candidates == ()
        load = LoadState(1.2)
        s_util = utilization(plan.post_chain, fig1_specs, S, load).utilization
        c_util = utilization(plan.post_chain, fig1_specs, C, load).utilization
        expected_s, expected_c = oracle_script.golden_post_border_migration_utils(1.2)
        assert s_util == pytest.approx(expected_s, abs=1e-12)
        assert c_util == pytest.approx(expected_c, abs=1e-12)

    def test_underloaded_chain_is_left_alone(self, fig1_chain, fig1_specs):
        plan = plan_pam(fig1_chain, fig1_specs, LoadState(0.5))
        assert plan.outcome is PlanOutcome.NOT_OVERLOADED
        assert plan.steps == ()
        assert plan.post_chain == fig1_chain
        assert oracle_script.underload_utilization(0.5) < 1.0

    def test_two_step_scenario_promotes_monitor(self, fig1_chain):
        specs = golden.two_step_specs()
        plan = plan_pam(fig1_chain, specs, LoadState(1.6))
        assert [s.vnf_id for s in plan.steps] == ["Logger", "Monitor"]
        assert plan.outcome is PlanOutcome.RESOLVED
        assert count_crossings(plan.post_chain) == count_crossings(fig1_chain)
        expected_steps, expected_residual = oracle_script.two_step_hand_trace()
        assert [s.vnf_id for s in plan.steps] == expected_steps
        s_util = utilization(plan.post_chain, specs, S, LoadState(1.6)).utilization
        assert s_util == pytest.approx(expected_residual, abs=1e-12)

    def test_headroom_rejections_are_recorded(self, fig1_chain, fig1_specs):
        # At 1.5 Gbps the CPU cannot absorb either border vNF.
        plan = plan_pam(fig1_chain, fig1_specs, LoadState(1.5))
        assert plan.outcome is PlanOutcome.SCALE_OUT_REQUIRED
        assert plan.steps == ()
        assert plan.rejected_candidates == (
            ("Logger", "cpu_headroom"),
            ("Firewall", "cpu_headroom"),
        )
        assert plan.post_chain == fig1_chain

    def test_steps_are_smartnic_to_cpu(self, fig1_chain):
        plan = plan_pam(fig1_chain, golden.two_step_specs(), LoadState(1.6))
        for step in plan.steps:
            assert step.source is S
            assert step.target is C
            assert step.selected_as_candidate

    def test_singleton_segment_migrated_once(self):
        specs = {
            "slow": VnfSpec("slow", cap_smartnic=1.0, cap_cpu=16.0),
            "pad": VnfSpec("pad", cap_smartnic=16.0, cap_cpu=16.0),
        }
        chain = ServiceChain(
            (
                VnfInstance("x", "pad", C),
                VnfInstance("mid", "slow", S),
                VnfInstance("y", "pad", C),
            )
        )
        borders = identify_borders(chain)
        assert borders.left == borders.right == {1}
        plan = plan_pam(chain, specs, LoadState(1.2))
        assert [s.vnf_id for s in plan.steps] == ["mid"]
        assert plan.outcome is PlanOutcome.RESOLVED

    def test_no_borders_means_scale_out_without_steps(self, fig1_specs):
        chain = ServiceChain(
            (VnfInstance("Logger", "Logger", S), VnfInstance("Monitor", "Monitor", S))
        )
        plan = plan_pam(chain, fig1_specs, LoadState(3.0))
        assert plan.outcome is PlanOutcome.SCALE_OUT_REQUIRED
        assert plan.steps == ()


class TestPlanNaive:
    def test_monitor_bottleneck_migrates_monitor(self, fig1_chain):
        specs = golden.monitor_bottleneck_specs()
        plan = plan_naive(fig1_chain, specs, LoadState(1.0))
        assert [s.vnf_id for s in plan.steps] == ["Monitor"]
        assert plan.outcome is PlanOutcome.RESOLVED

    def test_underloaded_chain_is_left_alone(self, fig1_chain, fig1_specs):
        plan = plan_naive(fig1_chain, fig1_specs, LoadState(0.5))
        assert plan.outcome is PlanOutcome.NOT_OVERLOADED
        assert plan.steps == ()

    def test_golden_chain_coincides_with_border_policy(self, fig1_chain, fig1_specs):
        # Logger holds the global minimum capacity and is also a border.
        plan = plan_naive(fig1_chain, fig1_specs, LoadState(1.2))
        assert [s.vnf_id for s in plan.steps] == ["Logger"]
        assert plan == plan_pam(fig1_chain, fig1_specs, LoadState(1.2))

    def test_can_migrate_interior_vnfs(self, fig1_chain):
        specs = golden.monitor_bottleneck_specs()
        plan = plan_naive(fig1_chain, specs, LoadState(1.0))
        post = plan.post_chain
        assert post.vnfs[2].placement is C  # Monitor was interior
        assert count_crossings(post) == count_crossings(fig1_chain) + 2


class TestPlanProperties:
    def test_border_policy_never_adds_crossings(self):
        rng = random.Random(11)
        for _ in range(300):
            chain, specs, load = randgen.random_scenario(rng)
            plan = plan_pam(chain, specs, load)
            assert count_crossings(plan.post_chain) <= count_crossings(chain)

    def test_crossing_decrease_matches_drained_interior_segments(self):
        rng = random.Random(12)
        for _ in range(300):
            chain, specs, load = randgen.random_scenario(rng)
            plan = plan_pam(chain, specs, load)
            migrated = {s.vnf_id for s in plan.steps}
            drained = 0
            seq = chain.placement_sequence()
            i = 0
            while i < len(chain.vnfs):
                if chain.vnfs[i].placement is S:
                    j = i
                    while j + 1 < len(chain.vnfs) and chain.vnfs[j + 1].placement is S:
                        j += 1
                    flanked = seq[i] is C and seq[j + 2] is C
                    if flanked and all(v.id in migrated for v in chain.vnfs[i : j + 1]):
                        drained += 1
                    i = j + 1
                else:
                    i += 1
            decrease = count_crossings(chain) - count_crossings(plan.post_chain)
            assert decrease == 2 * drained

    def test_resolved_plans_leave_both_devices_feasible(self):
        rng = random.Random(13)
        for _ in range(300):
            chain, specs, load = randgen.random_scenario(rng)
            plan = plan_pam(chain, specs, load)
            if plan.outcome is PlanOutcome.RESOLVED:
                assert utilization(plan.post_chain, specs, S, load).utilization < 1.0
                assert utilization(plan.post_chain, specs, C, load).utilization < 1.0

    def test_post_chain_is_input_with_steps_applied(self):
        rng = random.Random(14)
        for _ in range(200):
            chain, specs, load = randgen.random_scenario(rng)
            for planner in (plan_pam, plan_naive):
                plan = planner(chain, specs, load)
                work = chain
                for step in plan.steps:
                    work = work.with_placement(work.index_of(step.vnf_id), C)
                assert work == plan.post_chain

    def test_selected_candidate_always_releases_the_most(self):
        rng = random.Random(15)
        for _ in range(200):
            chain, specs, load = randgen.random_scenario(rng)
            _, iterations = _plan(chain, specs, load, borders_only=True)
            for it in iterations:
                best = min(it.pool, key=lambda entry: (entry[2], entry[0]))
                assert it.selected == best[1]

    def test_determinism_byte_identical_plans(self):
        rng = random.Random(16)
        for _ in range(50):
            chain, specs, load = randgen.random_scenario(rng)
            for planner in (plan_pam, plan_naive):
                a = planner(chain, specs, load)
                b = planner(chain, specs, load)
                assert a == b
                dump = lambda p: json.dumps(asdict(p), default=str)
                assert dump(a) == dump(b)


class TestLoadBalancerStandIn:
    def test_smartnic_capacity_value_never_changes_golden_outcomes(self):
        # The profile only pins the load balancer's SmartNIC capacity as
        # "> 10"; any stand-in must leave every shipped scenario unchanged.
        cases = (
            (golden.golden_specs(), 1.2),
            (golden.monitor_bottleneck_specs(), 1.0),
            (golden.two_step_specs(), 1.6),
        )
        chain = golden.golden_chain()
        for specs, theta in cases:
            load = LoadState(theta)
            reference = (plan_pam(chain, specs, load), plan_naive(chain, specs, load))
            for cap in (10.01, 100.0):
                varied = dict(specs)
                varied["LoadBalancer"] = replace(specs["LoadBalancer"], cap_smartnic=cap)
                got_pam = plan_pam(chain, varied, load)
                got_naive = plan_naive(chain, varied, load)
                assert [s.vnf_id for s in got_pam.steps] == [
                    s.vnf_id for s in reference[0].steps
                ]
                assert got_pam.outcome is reference[0].outcome
                assert [s.vnf_id for s in got_naive.steps] == [
                    s.vnf_id for s in reference[1].steps
                ]
                assert got_naive.outcome is reference[1].outcome
                assert got_pam.post_chain.placements() == reference[0].post_chain.placements()
