"""Subgraph matching over a partitionable candidate search tree.

The package builds a complete candidate index for a labeled query over a
labeled data graph, splits it under memory and list-length budgets,
schedules the pieces between a host backtracking matcher and a batched
dataflow pipeline, enumerates all embeddings exactly, and reports
closed-form plus event-driven cycle-cost estimates for the pipeline.
"""

from .candidate_tree import (
    CandidateTree,
    WorkloadTable,
    build_candidate_tree,
    dump_tree,
    estimate_workload,
    tree_metrics,
)
from .graph import Graph, GraphFormatError, candidates_by_local_features, graph_to_text, load_graph, save_graph
from .kernel import (
    CycleModel,
    EdgeTask,
    ResultBuffer,
    RoundTrace,
    TaskBatch,
    VisitedTask,
    cycle_estimate,
    generate_batch,
    pipeline_enumerate,
    pipeline_fill_slack,
    simulate_dataflow_schedule,
    synchronize,
    validate_edges,
    validate_visited,
)
from .oracle import OracleGuardError, brute_force_embeddings, brute_force_tree_walks
from .partition import (
    PartitionConfig,
    UnsplittableTreeError,
    partition_factor,
    partition_tree,
    project_tree,
    within_budgets,
)
from .plan import DisconnectedQueryError, QueryPlan, build_query_plan
from .randgraph import powerlaw_graph, random_connected_query, random_graph
from .scheduler import JobStats, SchedulerState, host_match, route_tree, run_job

__all__ = [
    "CandidateTree",
    "CycleModel",
    "DisconnectedQueryError",
    "EdgeTask",
    "Graph",
    "GraphFormatError",
    "JobStats",
    "OracleGuardError",
    "PartitionConfig",
    "QueryPlan",
    "ResultBuffer",
    "RoundTrace",
    "SchedulerState",
    "TaskBatch",
    "UnsplittableTreeError",
    "VisitedTask",
    "WorkloadTable",
    "brute_force_embeddings",
    "brute_force_tree_walks",
    "build_candidate_tree",
    "build_query_plan",
    "candidates_by_local_features",
    "cycle_estimate",
    "dump_tree",
    "estimate_workload",
    "generate_batch",
    "graph_to_text",
    "host_match",
    "load_graph",
    "partition_factor",
    "partition_tree",
    "pipeline_enumerate",
    "pipeline_fill_slack",
    "powerlaw_graph",
    "project_tree",
    "random_connected_query",
    "random_graph",
    "route_tree",
    "run_job",
    "save_graph",
    "simulate_dataflow_schedule",
    "synchronize",
    "tree_metrics",
    "validate_edges",
    "validate_visited",
    "within_budgets",
]
