from __future__ import annotations

import numpy as np
import pytest

from swarmplan.core.inspection_graph import ROOT, Trajectory, build_graph, edge_weight_sum, tree_cost
from swarmplan.core.jmst import JmstConfig, PrimGrowth, budgeted_jmst, prim_tree
from swarmplan.core.oracle import enumerate_trees
from swarmplan.errors import InsufficientVertices

from tests.conftest import random_scenario


def test_zero_vertices_is_the_root(uav, env, radio, collinear):
    g = build_graph(collinear, uav, env, radio)
    t = prim_tree(g, ROOT, 0)
    assert t.order == (ROOT,)
    assert tree_cost(t) == 0.0


def test_collinear_points_grow_into_a_chain(uav, env, radio, collinear):
    g = build_graph(collinear, uav, env, radio)
    t = prim_tree(g, ROOT, 2)
    assert t.parents == {1: 0, 2: 1}
    assert t.order == (0, 1, 2)


def test_too_many_vertices(uav, env, radio, collinear):
    g = build_graph(collinear, uav, env, radio)
    with pytest.raises(InsufficientVertices):
        prim_tree(g, ROOT, 3)
    with pytest.raises(InsufficientVertices):
        PrimGrowth(g, np.array([True, True, False])).grow_to(2)


def test_full_prim_tree_is_a_minimum_spanning_tree(uav, env, radio):
    rng = np.random.default_rng(2)
    for _ in range(8):
        sc = random_scenario(rng, 5)
        g = build_graph(sc, uav, env, radio)
        prim = prim_tree(g, ROOT, 5)
        best = min(
            edge_weight_sum(Trajectory.from_parents(0, parents, g), g)
            for parents in enumerate_trees(sc.inspection_ids)
        )
        assert edge_weight_sum(prim, g) == pytest.approx(best, rel=1e-9)


def test_prefixes_are_nested(uav, env, radio):
    rng = np.random.default_rng(4)
    sc = random_scenario(rng, 20)
    growth = PrimGrowth(build_graph(sc, uav, env, radio))
    previous = growth.tree(0)
    for i in range(1, 21):
        t = growth.tree(i)
        assert previous.inspected < t.inspected
        assert all(t.parents[v] == p for v, p in previous.parents.items())
        assert growth.cost(i) >= growth.cost(i - 1)
        previous = t
    assert growth.next_cost(20) == float("inf")


def test_allowed_mask_restricts_the_tree(uav, env, radio):
    rng = np.random.default_rng(8)
    sc = random_scenario(rng, 10)
    g = build_graph(sc, uav, env, radio)
    allowed = np.zeros(11, dtype=bool)
    allowed[[2, 5, 7]] = True
    growth = PrimGrowth(g, allowed)
    assert growth.capacity == 3
    assert growth.tree(3).inspected == {2, 5, 7}


def test_zero_budget_gives_the_root(uav, env, radio, collinear):
    g = build_graph(collinear, uav, env, radio)
    assert budgeted_jmst(g, 0.0, JmstConfig(lam=1.0)).order == (ROOT,)


def test_budget_boundary_is_inclusive(uav, env, radio):
    rng = np.random.default_rng(12)
    sc = random_scenario(rng, 6)
    g = build_graph(sc, uav, env, radio)
    full = prim_tree(g, ROOT, 6)
    lam = 2.0
    t = budgeted_jmst(g, tree_cost(full) / lam, JmstConfig(lam=lam))
    assert t.order == full.order


def test_budget_admitting_one_vertex(uav, env, radio, collinear):
    g = build_graph(collinear, uav, env, radio)
    one = g.weight(0, 1)
    assert one < tree_cost(prim_tree(g, ROOT, 2))
    t = budgeted_jmst(g, one, JmstConfig(lam=1.0))
    assert t.inspected == {1}


def test_cost_stays_within_lambda_budget(uav, env, radio):
    rng = np.random.default_rng(31)
    for _ in range(500):
        n = int(rng.integers(1, 31))
        sc = random_scenario(rng, n)
        g = build_graph(sc, uav, env, radio)
        budget = float(rng.uniform(0.0, 2e5))
        lam = float(rng.uniform(1.0, 3.0))
        t = budgeted_jmst(g, budget, JmstConfig(lam=lam))
        assert tree_cost(t) <= lam * budget
        if len(t) - 1 < n:
            # the next Prim vertex would not have fit
            assert PrimGrowth(g).cost(len(t)) > lam * budget


def test_max_vertices_caps_the_tree(uav, env, radio):
    rng = np.random.default_rng(13)
    g = build_graph(random_scenario(rng, 12), uav, env, radio)
    t = budgeted_jmst(g, 1e12, JmstConfig(lam=2.0, max_vertices=4))
    assert len(t.inspected) == 4


def test_edge_sum_mode_admits_more_vertices(uav, env, radio):
    rng = np.random.default_rng(14)
    g = build_graph(random_scenario(rng, 15), uav, env, radio)
    budget = 3e4
    cumulative = budgeted_jmst(g, budget, JmstConfig(lam=1.0))
    edge_sum = budgeted_jmst(g, budget, JmstConfig(lam=1.0, cost_mode="edge_sum"))
    assert len(edge_sum) >= len(cumulative)
    assert edge_weight_sum(edge_sum, g) <= budget


def test_reused_growth_gives_the_same_tree(uav, env, radio):
    rng = np.random.default_rng(15)
    g = build_graph(random_scenario(rng, 15), uav, env, radio)
    growth = PrimGrowth(g)
    small = budgeted_jmst(g, 1e4, growth=growth)
    large = budgeted_jmst(g, 5e4, growth=growth)
    assert small.order == budgeted_jmst(g, 1e4).order
    assert large.order == budgeted_jmst(g, 5e4).order


@pytest.mark.parametrize("kwargs", [{"lam": 0.5}, {"max_vertices": 0}, {"cost_mode": "bogus"}])
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        JmstConfig(**kwargs)


def test_negative_budget(uav, env, radio, collinear):
    with pytest.raises(ValueError):
        budgeted_jmst(build_graph(collinear, uav, env, radio), -1.0)


def test_larger_budgets_never_shrink_the_tree(uav, env, radio):
    rng = np.random.default_rng(53)
    for _ in range(200):
        sc = random_scenario(rng, int(rng.integers(1, 25)))
        g = build_graph(sc, uav, env, radio)
        growth = PrimGrowth(g)
        budgets = np.sort(rng.uniform(0.0, 2e5, size=5))
        sizes = [len(budgeted_jmst(g, float(b), growth=growth)) for b in budgets]
        assert sizes == sorted(sizes)
