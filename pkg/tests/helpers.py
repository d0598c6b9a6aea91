"""Shared instance generators for the test suite.

Everything is driven by explicit seeds so failures replay exactly.
"""

from __future__ import annotations

import random

from submatch import (
    Graph,
    build_candidate_tree,
    build_query_plan,
    random_connected_query,
    random_graph,
)
from submatch.oracle import brute_force_embeddings


def make_instance(seed: int, *, max_data=60, min_data=10, max_query=7, min_query=3):
    """One random (data, query) pair with label-compatible query vertices."""
    rng = random.Random(seed)
    n = rng.randint(min_data, max_data)
    p = rng.uniform(0.08, 0.3)
    labels = rng.randint(2, 5)
    data = random_graph(n, p, labels, rng)
    present = sorted(set(data.labels))
    nq = rng.randint(min_query, max_query)
    extra = rng.randint(0, 3)
    query = random_connected_query(nq, extra, present, rng)
    return data, query


def solvable_instances(count: int, master_seed: int, *, max_embeddings=5000, **kwargs):
    """Deterministic stream of instances whose oracle answer stays small.

    Instances whose query outgrows the data graph's degrees entirely are
    still kept (empty answers are legal); only blowups are skipped so
    test runtimes stay bounded.
    """
    out = []
    seed = master_seed
    while len(out) < count:
        seed += 1
        data, query = make_instance(seed, **kwargs)
        try:
            plan = build_query_plan(query, data)
        except ValueError:
            continue
        expected = brute_force_embeddings(query, data, plan.order)
        if len(expected) > max_embeddings:
            continue
        out.append((data, query, plan, expected))
    return out


def built_instances(count: int, master_seed: int, **kwargs):
    """solvable_instances plus the constructed candidate tree."""
    out = []
    for data, query, plan, expected in solvable_instances(count, master_seed, **kwargs):
        out.append((data, query, plan, build_candidate_tree(data, query, plan), expected))
    return out


def add_random_edges(graph: Graph, count: int, rng: random.Random) -> Graph:
    """Copy of `graph` with up to `count` fresh random edges added."""
    existing = set(graph.edges())
    missing = [
        (a, b)
        for a in range(graph.num_vertices)
        for b in range(a + 1, graph.num_vertices)
        if (a, b) not in existing
    ]
    rng.shuffle(missing)
    return Graph.from_edges(list(graph.labels), sorted(existing | set(missing[:count])))
