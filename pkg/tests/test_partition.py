import random

import pytest

from submatch import (
    PartitionConfig,
    UnsplittableTreeError,
    build_candidate_tree,
    build_query_plan,
    host_match,
    partition_factor,
    partition_tree,
    project_tree,
    tree_metrics,
    within_budgets,
)
from submatch import Graph
from submatch import fixtures

import helpers


def test_factor_ratio_rule():
    tree, _ = fixtures.partition_example()
    # size exactly twice the budget, degree within its budget
    config = PartitionConfig(size_budget=-(-tree.size_bytes // 2), degree_budget=16)
    assert partition_factor(tree, config, 0) == 2


def test_factor_is_one_within_budgets():
    tree, _ = fixtures.partition_example()
    config = PartitionConfig()
    assert partition_factor(tree, config, 0) == 1


def test_factor_matches_direct_formula_on_random_budgets():
    rng = random.Random(8)
    for data, query, plan, _ in helpers.solvable_instances(10, 20_000, max_data=40):
        tree = build_candidate_tree(data, query, plan)
        for _ in range(5):
            config = PartitionConfig(
                size_budget=rng.randint(17, max(18, tree.size_bytes * 2)),
                degree_budget=rng.randint(1, 16),
            )
            u = rng.choice(range(plan.num_vertices))
            expected = max(
                -(-tree.size_bytes // config.size_budget),
                -(-tree.max_degree // config.degree_budget),
                1,
            )
            expected = max(1, min(expected, len(tree.candidates[u])))
            assert partition_factor(tree, config, u) == expected


def test_project_fixture_reaches_example_sets():
    tree, plan = fixtures.partition_example()
    part_a = project_tree(tree, plan, 0, [1])
    assert part_a.candidates == [[1], [3, 5], [6, 8], [9, 10]]
    part_b = project_tree(tree, plan, 0, [2])
    assert part_b.candidates == [[2], [4], [6, 7, 8], [9]]


def test_project_full_part_is_identity():
    tree, plan = fixtures.partition_example()
    assert project_tree(tree, plan, 0, tree.candidates[0]) == tree
    data, query = fixtures.worked_data(), fixtures.worked_query()
    qplan = build_query_plan(query, data)
    qtree = build_candidate_tree(data, query, qplan)
    assert project_tree(qtree, qplan, qplan.root, qtree.candidates[qplan.root]) == qtree


def test_project_singletons_cover_and_restrict():
    for data, query, plan, _ in helpers.solvable_instances(8, 21_000, max_data=35):
        tree = build_candidate_tree(data, query, plan)
        u = plan.root
        if not tree.candidates[u]:
            continue
        union: dict[int, set] = {w: set() for w in range(plan.num_vertices)}
        for v in tree.candidates[u]:
            sub = project_tree(tree, plan, u, [v])
            for w in range(plan.num_vertices):
                sub_set = set(sub.candidates[w])
                union[w] |= sub_set
                assert sub_set <= set(tree.candidates[w])
                for key, lists in sub.tree_adj.items():
                    for vv, row in lists.items():
                        assert set(row) <= set(tree.tree_adj[key].get(vv, ()))
        for w in range(plan.num_vertices):
            if plan.position[w] > plan.position[u]:
                # every refined candidate survives in at least one part:
                # its parent-link chain reaches some root candidate
                assert union[w] == set(tree.candidates[w])


def test_project_handles_child_before_parent_order():
    # cycle query planned with an order that maps a tree child before its
    # parent; candidate 16 is reachable only through that child link
    from submatch.plan import QueryPlan
    from submatch.candidate_tree import CandidateTree

    plan = QueryPlan.assemble(
        root=0,
        parent=[None, 0, 1, 0],
        children=[[1, 3], [2], [], []],
        non_tree=[[], [], [3], [2]],
        order=[0, 3, 2, 1],
        bfs_order=[0, 1, 3, 2],
    )
    tree = CandidateTree.assemble(
        candidates=[[10], [11, 14, 16], [12, 15], [13]],
        tree_adj={
            (0, 1): {10: [11, 14]},
            (1, 2): {11: [12], 14: [15], 16: [12]},
            (0, 3): {10: [13]},
        },
        non_tree_adj={(2, 3): {12: [13]}, (3, 2): {13: [12]}},
    )
    sub = project_tree(tree, plan, 0, [10])
    assert sub.candidates[3] == [13]
    assert sub.candidates[2] == [12]  # 15 has no link to the retained 13
    assert sub.candidates[1] == [11, 14, 16]  # 16 retained via its child link
    assert sub.tree_adj[(1, 2)] == {11: [12], 16: [12]}


def test_partition_noop_when_within_budgets():
    tree, plan = fixtures.partition_example()
    emitted = []
    count = partition_tree(tree, plan, 0, PartitionConfig(), emitted.append)
    assert count == 1 and emitted == [tree]


def collect_partitions(tree, plan, config):
    parts = []
    count = partition_tree(tree, plan, 0, config, parts.append)
    assert count == len(parts)
    return parts


def test_partitions_are_disjoint_complete_and_within_budgets():
    checked = 0
    for data, query, plan, expected in helpers.solvable_instances(40, 22_000, max_data=45):
        tree = build_candidate_tree(data, query, plan)
        if tree.size_bytes <= 64:
            continue
        config = PartitionConfig(size_budget=max(65, tree.size_bytes // 3), degree_budget=8, port_limit=16)
        try:
            parts = collect_partitions(tree, plan, config)
        except UnsplittableTreeError:
            continue
        whole = host_match(tree, plan)
        pieces = []
        for part in parts:
            size, degree = tree_metrics(part)
            assert size <= config.size_budget
            assert degree <= config.degree_budget
            pieces.extend(host_match(part, plan))
        assert len(pieces) == len(set(pieces)), "partitions overlap"
        assert sorted(pieces) == whole
        checked += 1
    assert checked >= 20


def test_unsplittable_chain_reports_vertex():
    # two-vertex query over a two-vertex data graph: every candidate set is
    # a singleton, so only the byte budget can force a split and it never can
    data = Graph.from_edges([0, 1], [(0, 1)])
    query = Graph.from_edges([0, 1], [(0, 1)])
    plan = build_query_plan(query, data)
    tree = build_candidate_tree(data, query, plan)
    config = PartitionConfig(size_budget=17, degree_budget=16)
    with pytest.raises(UnsplittableTreeError) as err:
        partition_tree(tree, plan, 0, config, lambda part: None)
    assert 0 <= err.value.query_vertex < 2


def test_empty_tree_over_budget_emits_nothing():
    data = fixtures.worked_data()
    query = Graph.from_edges([0, 9, 2, 3], [(0, 1), (0, 2), (1, 2), (2, 3)])
    plan = build_query_plan(query, data)
    tree = build_candidate_tree(data, query, plan)
    assert any(not c for c in tree.candidates)
    config = PartitionConfig(size_budget=17)
    assert partition_tree(tree, plan, 0, config, lambda part: None) == 0


def test_fixed_k_splits_into_k_parts():
    tree, plan = fixtures.partition_example()
    config = PartitionConfig(size_budget=tree.size_bytes - 1, fixed_k=2)
    parts = collect_partitions(tree, plan, config)
    assert len(parts) == 2
    assert parts[0].candidates[0] == [1]
    assert parts[1].candidates[0] == [2]


def test_config_validation():
    with pytest.raises(ValueError):
        PartitionConfig(degree_budget=0)
    with pytest.raises(ValueError):
        PartitionConfig(degree_budget=32, port_limit=16)
    with pytest.raises(ValueError):
        PartitionConfig(size_budget=16)
    with pytest.raises(ValueError):
        PartitionConfig(fixed_k=1)


def test_within_budgets_matches_metrics():
    tree, _ = fixtures.partition_example()
    assert within_budgets(tree, PartitionConfig())
    assert not within_budgets(tree, PartitionConfig(size_budget=tree.size_bytes - 1))
