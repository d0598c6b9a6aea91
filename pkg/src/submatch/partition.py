"""Recursive splitting of a candidate tree under size and degree budgets.

A tree over budget at the current matching-order vertex u has C(u) cut
into k even contiguous chunks; each chunk is projected into a complete
sub-tree whose downstream candidates are exactly those reachable from
the chunk, so the chunks' embedding sets partition the original's.
Recursion advances to the next order position once C(u) is a singleton.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .candidate_tree import BASE_HEADER_BYTES, AdjacencyMap, CandidateTree
from .plan import QueryPlan


@dataclass(frozen=True)
class PartitionConfig:
    """Budgets for one loadable tree: bytes, list length, and the port cap."""

    size_budget: int = 262_144
    degree_budget: int = 16
    port_limit: int = 16
    fixed_k: int | None = None

    def __post_init__(self):
        if self.degree_budget < 1:
            raise ValueError("degree_budget must be >= 1")
        if self.degree_budget > self.port_limit:
            raise ValueError("degree_budget must not exceed port_limit")
        if self.size_budget <= BASE_HEADER_BYTES:
            raise ValueError(f"size_budget must exceed the {BASE_HEADER_BYTES}-byte base header")
        if self.fixed_k is not None and self.fixed_k < 2:
            raise ValueError("fixed_k must be >= 2 when set")


class UnsplittableTreeError(RuntimeError):
    """Budgets still violated after the matching order was exhausted."""

    def __init__(self, message: str, query_vertex: int):
        super().__init__(message)
        self.query_vertex = query_vertex


def within_budgets(tree: CandidateTree, config: PartitionConfig) -> bool:
    return tree.size_bytes <= config.size_budget and tree.max_degree <= config.degree_budget


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def partition_factor(tree: CandidateTree, config: PartitionConfig, u: int) -> int:
    """k = min(ceil(max(size/size_budget, degree/degree_budget)), |C(u)|), at least 1."""
    ratio = max(
        _ceil_div(tree.size_bytes, config.size_budget),
        _ceil_div(tree.max_degree, config.degree_budget),
        1,
    )
    return max(1, min(ratio, len(tree.candidates[u])))


def project_tree(tree: CandidateTree, plan: QueryPlan, u: int, part: Sequence[int]) -> CandidateTree:
    """Restrict the tree to the candidates of u in `part`.

    Vertices before u in the matching order keep their full candidate
    sets; u keeps exactly `part`; each later vertex keeps the candidates
    reachable from the retained set of at least one earlier query
    neighbor, evaluated level by level in order (so reachability from
    `part` is transitive). All adjacency lists are re-restricted to the
    retained candidates.
    """
    if not part:
        raise ValueError("part must be non-empty")
    pos_u = plan.position[u]
    part_set = set(part)
    if not part_set <= set(tree.candidates[u]):
        raise ValueError("part must be a subset of the candidates of u")

    retained: list[set[int]] = [
        set(tree.candidates[w]) if plan.position[w] < pos_u else set() for w in range(plan.num_vertices)
    ]
    retained[u] = part_set

    for pos in range(pos_u + 1, plan.num_vertices):
        w = plan.order[pos]
        linked: set[int] = set()
        for w_from, key, keyed_by_w in _earlier_links(plan, w):
            lists = tree.tree_adj.get(key) or tree.non_tree_adj.get(key) or {}
            if keyed_by_w:
                # lists map w's candidates to the earlier vertex's
                keep = retained[w_from]
                linked.update(v for v, row in lists.items() if any(x in keep for x in row))
            else:
                for v_from in retained[w_from]:
                    linked.update(lists.get(v_from, ()))
        retained[w] = linked & set(tree.candidates[w])

    def restrict(groups: AdjacencyMap) -> AdjacencyMap:
        out: AdjacencyMap = {}
        for (a, b), lists in groups.items():
            keep_a, keep_b = retained[a], retained[b]
            new_lists = {}
            for v, row in lists.items():
                if v not in keep_a:
                    continue
                new_row = [x for x in row if x in keep_b]
                if new_row:
                    new_lists[v] = new_row
            out[(a, b)] = new_lists
        return out

    return CandidateTree.assemble(
        [sorted(retained[w]) for w in range(plan.num_vertices)],
        restrict(tree.tree_adj),
        restrict(tree.non_tree_adj),
    )


def _earlier_links(plan: QueryPlan, w: int):
    """Query neighbors of w earlier in the order, with their list keys.

    Yields (earlier vertex, adjacency key, whether the key's lists are
    indexed by w's own candidates). Tree lists are stored parent-first,
    so a tree child that precedes w in the order flips the indexing.
    """
    p = plan.parent[w]
    if p is not None and plan.position[p] < plan.position[w]:
        yield p, (p, w), False
    for c in plan.children[w]:
        if plan.position[c] < plan.position[w]:
            yield c, (w, c), True
    for un in plan.non_tree[w]:
        if plan.position[un] < plan.position[w]:
            yield un, (un, w), False


def partition_tree(
    tree: CandidateTree,
    plan: QueryPlan,
    index: int,
    config: PartitionConfig,
    sink: Callable[[CandidateTree], None],
) -> int:
    """Emit budget-compliant sub-trees covering the input's search space.

    Returns the number of emitted trees. Trees with an empty candidate
    set hold no embeddings and are dropped rather than split further.
    Raises UnsplittableTreeError if the order is exhausted while budgets
    are still violated.
    """
    if within_budgets(tree, config):
        sink(tree)
        return 1
    if any(not c for c in tree.candidates):
        return 0
    if index >= plan.num_vertices:
        worst = max(
            ((len(row), key[0]) for key, lists in list(tree.tree_adj.items()) + list(tree.non_tree_adj.items()) for row in lists.values()),
            default=(0, plan.order[-1]),
        )
        raise UnsplittableTreeError(
            f"budgets still violated after exhausting the matching order (query vertex {worst[1]})",
            worst[1],
        )

    u = plan.order[index]
    cand = tree.candidates[u]
    if config.fixed_k is not None:
        k = max(1, min(config.fixed_k, len(cand)))
    else:
        k = partition_factor(tree, config, u)

    base, extra = divmod(len(cand), k)
    emitted = 0
    start = 0
    for i in range(k):
        size = base + (1 if i < extra else 0)
        part = cand[start : start + size]
        start += size
        sub = project_tree(tree, plan, u, part)
        if within_budgets(sub, config):
            sink(sub)
            emitted += 1
        elif len(sub.candidates[u]) == 1:
            emitted += partition_tree(sub, plan, index + 1, config, sink)
        else:
            emitted += partition_tree(sub, plan, index, config, sink)
    return emitted
