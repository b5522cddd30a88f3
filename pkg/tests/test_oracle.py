from __future__ import annotations

import logging
import statistics

import numpy as np
import pytest

from swarmplan.core.inspection_graph import Trajectory, build_graph, tree_cost, visit_increment
from swarmplan.core.oracle import _TreeSolver, enumerate_trees, exact_plan
from swarmplan.core.swarm_planner import plan, validate
from swarmplan.errors import InstanceTooLarge
from swarmplan.harness.experiment import plan_is_valid

from tests.conftest import fleet_of, make_scenario, random_scenario

logger = logging.getLogger(__name__)


def test_single_point(uav, env, radio):
    sc = make_scenario([(25.0, 75.0)])
    result = exact_plan(sc, [uav], env, radio)
    assert result.feasible
    assert result.optimal_cost == pytest.approx(visit_increment(uav, env, radio, sc.points[0], sc.points[1]))


def test_collinear_optimum_picks_the_cheaper_of_chain_and_star(uav, env, radio, collinear):
    g = build_graph(collinear, uav, env, radio)
    chain = 2 * g.weight(0, 1) + g.weight(1, 2)
    star = g.weight(0, 1) + g.weight(0, 2)
    # b's cumulative energy on the chain also carries the dwell at a
    assert star < chain
    result = exact_plan(collinear, [uav], env, radio)
    assert result.optimal_cost == pytest.approx(min(chain, star))
    assert result.trajectories[0].parents == {1: 0, 2: 0}


def test_enumeration_counts_labeled_rooted_trees():
    # (n + 1)^(n - 1) labeled trees on n + 1 vertices
    assert sum(1 for _ in enumerate_trees([1, 2, 3])) == 16
    assert sum(1 for _ in enumerate_trees([1, 2, 3, 4])) == 125


def test_subset_dp_matches_enumeration(uav, env, radio):
    rng = np.random.default_rng(10)
    for _ in range(10):
        sc = random_scenario(rng, 5)
        g = build_graph(sc, uav, env, radio)
        solver = _TreeSolver(g, 5)
        ids = [1, 2, 3, 4, 5]
        for mask in (0b11111, 0b10101, 0b01110, 0b00001):
            group = [v for v in ids if mask >> (v - 1) & 1]
            brute = min(tree_cost(Trajectory.from_parents(0, p, g)) for p in enumerate_trees(group))
            assert solver.best(0, mask) == pytest.approx(brute, rel=1e-12)
            rebuilt = Trajectory.from_parents(0, solver.parents(mask), g)
            assert tree_cost(rebuilt) == pytest.approx(brute, rel=1e-12)


def test_planner_is_never_below_the_optimum(uav, env, radio):
    rng = np.random.default_rng(20)
    ratios = []
    for _ in range(50):
        n = int(rng.integers(1, 8))
        k = int(rng.integers(1, 3))
        sc = random_scenario(rng, n)
        fleet = fleet_of(k, uav)
        optimum = exact_plan(sc, fleet, env, radio)
        heuristic = plan(sc, fleet, env, radio)
        assert heuristic.feasible
        assert heuristic.total_cost >= optimum.optimal_cost * (1 - 1e-9)
        ratios.append(heuristic.total_cost / optimum.optimal_cost)
    logger.info("planner/optimum cost ratio: median %.3f, max %.3f", statistics.median(ratios), max(ratios))


def test_optimum_respects_budgets(uav, env, radio, collinear):
    g = build_graph(collinear, uav, env, radio)
    budget = g.weight(0, 2) * 1.01
    fleet = fleet_of(2, uav, [budget, budget])
    result = exact_plan(collinear, fleet, env, radio)
    assert result.feasible
    assert sorted(len(group) for group in result.assignment) == [1, 1]
    assert validate(collinear, fleet, result.to_plan_result(), env, radio).ok


def test_infeasible_budgets(uav, env, radio, collinear):
    fleet = fleet_of(2, uav, [10.0, 10.0])
    result = exact_plan(collinear, fleet, env, radio)
    assert not result.feasible
    assert result.optimal_cost == float("inf")
    as_plan = result.to_plan_result()
    assert not as_plan.feasible
    assert as_plan.uncovered == (1, 2)
    assert plan_is_valid(as_plan, validate(collinear, fleet, as_plan, env, radio))


def test_empty_scenario(uav, env, radio):
    result = exact_plan(make_scenario([]), [uav], env, radio)
    assert result.optimal_cost == 0.0


@pytest.mark.parametrize("n,k", [(9, 1), (3, 4)])
def test_instance_caps(uav, env, radio, n, k):
    sc = random_scenario(np.random.default_rng(0), n)
    with pytest.raises(InstanceTooLarge):
        exact_plan(sc, fleet_of(k, uav), env, radio)


def test_optimal_plans_pass_validation(uav, env, radio):
    rng = np.random.default_rng(30)
    for _ in range(40):
        n = int(rng.integers(1, 7))
        k = int(rng.integers(1, 4))
        sc = random_scenario(rng, n)
        budgets = list(rng.uniform(2_000.0, 20_000.0, size=k))
        fleet = fleet_of(k, uav, budgets)
        result = exact_plan(sc, fleet, env, radio).to_plan_result()
        assert plan_is_valid(result, validate(sc, fleet, result, env, radio))


def test_optimum_ignores_fleet_order(uav, env, radio):
    rng = np.random.default_rng(31)
    for _ in range(20):
        sc = random_scenario(rng, int(rng.integers(2, 7)))
        budgets = list(rng.uniform(3_000.0, 30_000.0, size=3))
        perm = [int(i) for i in rng.permutation(3)]
        a = exact_plan(sc, fleet_of(3, uav, budgets), env, radio)
        b = exact_plan(sc, fleet_of(3, uav, [budgets[i] for i in perm]), env, radio)
        assert a.feasible == b.feasible
        if a.feasible:
            assert b.optimal_cost == pytest.approx(a.optimal_cost, rel=1e-12)
