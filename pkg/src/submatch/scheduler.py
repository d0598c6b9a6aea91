"""Split matching work between the host matcher and the pipeline kernel.

Each partitioned tree is routed by its estimated workload: the host side
takes it only while the host's cumulative share would stay below the
configured fraction of all routed work. Host-routed trees are cached and
matched by plain backtracking after partitioning finishes; kernel-routed
trees run through the pipeline immediately.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .candidate_tree import CandidateTree, build_candidate_tree, estimate_workload
from .graph import Graph
from .kernel import (
    DEFAULT_CAPACITY,
    CycleModel,
    RoundTrace,
    cycle_estimate,
    pipeline_enumerate,
)
from .partition import PartitionConfig, partition_tree
from .plan import QueryPlan, build_query_plan

JOB_VARIANTS = ("basic", "task", "sep", "share")


@dataclass
class SchedulerState:
    """Routing accumulators: host share threshold and per-side workloads."""

    delta: float = 0.1
    w_c: int = 0
    w_f: int = 0
    host_queue: list[CandidateTree] = field(default_factory=list)

    def __post_init__(self):
        if not 0.0 <= self.delta <= 1.0:
            raise ValueError("delta must lie in [0, 1]")


def route_tree(state: SchedulerState, tree: CandidateTree, workload: int) -> str:
    """Route one tree; returns "host" or "kernel" and updates the state.

    Host wins only under the strict share test
    w_c + w < delta * (w_c + w_f + w), so delta=0 sends everything to
    the kernel. Host trees are cached for deferred matching.
    """
    if state.w_c + workload < state.delta * (state.w_c + state.w_f + workload):
        state.w_c += workload
        state.host_queue.append(tree)
        return "host"
    state.w_f += workload
    return "kernel"


def host_match(tree: CandidateTree, plan: QueryPlan) -> list[tuple[int, ...]]:
    """Backtracking matcher over the candidate tree alone.

    Depth-first along the matching order, extending through the stored
    parent lists and checking injectivity plus every earlier non-tree
    neighbor through the stored non-tree lists. Never reads the data
    graph. Results are order-aligned tuples, sorted.
    """
    order = plan.order
    results: list[tuple[int, ...]] = []
    mapping: list[int] = []
    used: set[int] = set()

    def extend(depth: int) -> None:
        if depth == len(order):
            results.append(tuple(mapping))
            return
        u = order[depth]
        p = plan.parent[u]
        if depth == 0:
            pool = tree.candidates[u]
        else:
            pool = tree.tree_adj.get((p, u), {}).get(mapping[plan.position[p]], ())
        for v in pool:
            if v in used:
                continue
            ok = True
            for un in plan.earlier_non_tree[u]:
                row = tree.non_tree_adj.get((un, u), {}).get(mapping[plan.position[un]], ())
                if v not in row:
                    ok = False
                    break
            if ok:
                mapping.append(v)
                used.add(v)
                extend(depth + 1)
                mapping.pop()
                used.remove(v)

    extend(0)
    results.sort()
    return results


@dataclass
class JobStats:
    """Aggregated statistics of one end-to-end matching job."""

    embeddings: int
    partitions: int
    w_c: int
    w_f: int
    cycles_basic: float
    cycles_task: float
    cycles_sep: float
    wall_ms: float
    host_trees: int = 0
    kernel_trees: int = 0
    results_generated: int = 0
    edge_tasks_generated: int = 0
    routing_log: list[tuple[int, str]] = field(default_factory=list)
    traces: list[RoundTrace] = field(default_factory=list)

    def to_report(self) -> dict:
        """The stable external JSON schema, cycles at 1-cycle precision."""
        return {
            "embeddings": self.embeddings,
            "partitions": self.partitions,
            "w_c": self.w_c,
            "w_f": self.w_f,
            "cycles_basic": round(self.cycles_basic),
            "cycles_task": round(self.cycles_task),
            "cycles_sep": round(self.cycles_sep),
            "wall_ms": round(self.wall_ms, 3),
        }


def run_job(
    data: Graph,
    query: Graph,
    config: PartitionConfig,
    state: SchedulerState,
    variant: str = "share",
    *,
    capacity: int = DEFAULT_CAPACITY,
    model: CycleModel | None = None,
    collect_trace: bool = False,
) -> tuple[list[tuple[int, ...]], JobStats]:
    """Plan, build, partition, route, match on both sides, and merge.

    The merged embedding list is sorted lexicographically and is
    independent of the share threshold, the kernel variant, and the
    partition budgets. `variant` selects the kernel pipeline flavor;
    "share" runs the sep pipeline and is the mode under which a nonzero
    host share is meaningful.
    """
    if variant not in JOB_VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    start = time.perf_counter()
    plan = build_query_plan(query, data)
    tree = build_candidate_tree(data, query, plan)
    if model is None:
        model = CycleModel()

    embeddings: list[tuple[int, ...]] = []
    routing_log: list[tuple[int, str]] = []
    traces: list[RoundTrace] = [] if collect_trace else None  # type: ignore[assignment]
    kernel_trees = 0

    def dispatch(part: CandidateTree) -> None:
        nonlocal kernel_trees
        workload = estimate_workload(part, plan).total
        side = route_tree(state, part, workload)
        routing_log.append((workload, side))
        if side == "kernel":
            kernel_trees += 1
            found, _ = pipeline_enumerate(
                part, plan, variant, capacity, model, port_limit=config.port_limit, trace=traces
            )
            embeddings.extend(found)

    partitions = partition_tree(tree, plan, 0, config, dispatch)

    host_trees = len(state.host_queue)
    for cached in state.host_queue:
        embeddings.extend(host_match(cached, plan))
    state.host_queue.clear()

    embeddings.sort()
    wall_ms = (time.perf_counter() - start) * 1000.0
    stats = JobStats(
        embeddings=len(embeddings),
        partitions=partitions,
        w_c=state.w_c,
        w_f=state.w_f,
        cycles_basic=cycle_estimate(model, "basic", capacity),
        cycles_task=cycle_estimate(model, "task", capacity),
        cycles_sep=cycle_estimate(model, "sep", capacity),
        wall_ms=wall_ms,
        host_trees=host_trees,
        kernel_trees=kernel_trees,
        results_generated=model.results_generated,
        edge_tasks_generated=model.edge_tasks_generated,
        routing_log=routing_log,
        traces=traces if collect_trace else [],
    )
    return embeddings, stats
