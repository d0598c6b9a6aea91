"""The candidate search tree: a complete, partitionable search space.

For each query vertex u the tree stores the candidate set C(u); for each
tree edge (parent, child) it stores, per parent candidate, the child
candidates adjacent in the data graph; for each non-tree query edge it
stores the analogous lists in both directions. Any embedding can be
enumerated by walking these lists alone, never touching the data graph.

Construction is one top-down pass (local-feature filter plus a link to
at least one parent candidate), one bottom-up pass removing candidates
with an empty list toward any child, and one top-down sweep removing
candidates no surviving parent candidate links to. After those passes
the structure is a fixpoint: re-running refinement removes nothing.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .graph import Graph, candidates_by_local_features
from .plan import QueryPlan

BASE_HEADER_BYTES = 16
LIST_HEADER_BYTES = 8
ENTRY_BYTES = 4

AdjacencyMap = dict[tuple[int, int], dict[int, list[int]]]


@dataclass
class CandidateTree:
    """Candidate sets plus per-candidate adjacency lists.

    tree_adj is keyed (parent, child) and maps each parent candidate to
    its sorted child candidates. non_tree_adj holds both directed views
    of every non-tree query edge. size_bytes and max_degree are cached;
    tree_metrics recomputes them from scratch.
    """

    candidates: list[list[int]]
    tree_adj: AdjacencyMap
    non_tree_adj: AdjacencyMap
    size_bytes: int = 0
    max_degree: int = 0

    @staticmethod
    def assemble(candidates, tree_adj, non_tree_adj) -> "CandidateTree":
        tree = CandidateTree(
            candidates=[sorted(c) for c in candidates],
            tree_adj=tree_adj,
            non_tree_adj=non_tree_adj,
        )
        tree.size_bytes, tree.max_degree = tree_metrics(tree)
        return tree

    def stored_lists(self):
        for groups in (self.tree_adj, self.non_tree_adj):
            for per_cand in groups.values():
                yield from per_cand.values()


def tree_metrics(tree: CandidateTree) -> tuple[int, int]:
    """Recompute (size_bytes, max_degree) from the stored lists.

    Accounting: 4 bytes per stored candidate id and adjacency entry,
    8 bytes per list header (candidate sets included), 16 bytes base.
    """
    size = BASE_HEADER_BYTES
    for cand in tree.candidates:
        size += LIST_HEADER_BYTES + ENTRY_BYTES * len(cand)
    max_degree = 0
    for lst in tree.stored_lists():
        size += LIST_HEADER_BYTES + ENTRY_BYTES * len(lst)
        max_degree = max(max_degree, len(lst))
    return size, max_degree


def build_candidate_tree(data: Graph, query: Graph, plan: QueryPlan) -> CandidateTree:
    """Construct and refine the candidate tree for (query, data)."""
    n = query.num_vertices
    local = [candidates_by_local_features(data, query, u) for u in range(n)]

    cand: list[list[int]] = [[] for _ in range(n)]
    cand_set: list[set[int]] = [set() for _ in range(n)]
    tree_adj: AdjacencyMap = {}

    # Top-down: candidates must pass local features and touch a parent candidate.
    cand[plan.root] = list(local[plan.root])
    cand_set[plan.root] = set(cand[plan.root])
    for u in plan.bfs_order[1:]:
        p = plan.parent[u]
        assert p is not None
        local_set = set(local[u])
        lists: dict[int, list[int]] = {}
        linked: set[int] = set()
        for vp in cand[p]:
            row = [w for w in data.adj[vp] if w in local_set]
            if row:
                lists[vp] = row
                linked.update(row)
        tree_adj[(p, u)] = lists
        cand[u] = sorted(linked)
        cand_set[u] = linked

    # Bottom-up: drop candidates whose list toward any child is empty.
    for u in reversed(plan.bfs_order):
        kids = plan.children[u]
        if not kids:
            continue
        survivors = []
        for v in cand[u]:
            ok = True
            for c in kids:
                row = [w for w in tree_adj[(u, c)].get(v, ()) if w in cand_set[c]]
                if row:
                    tree_adj[(u, c)][v] = row
                else:
                    ok = False
                    break
            if ok:
                survivors.append(v)
            else:
                for c in kids:
                    tree_adj[(u, c)].pop(v, None)
        cand[u] = survivors
        cand_set[u] = set(survivors)

    # Top-down: drop candidates no surviving parent candidate links to.
    for u in plan.bfs_order[1:]:
        p = plan.parent[u]
        lists = tree_adj[(p, u)]
        for vp in list(lists):
            if vp not in cand_set[p]:
                del lists[vp]
        linked = set()
        for row in lists.values():
            linked.update(row)
        removed = cand_set[u] - linked
        if removed:
            cand[u] = [v for v in cand[u] if v not in removed]
            cand_set[u] = set(cand[u])
            for c in plan.children[u]:
                for v in removed:
                    tree_adj[(u, c)].pop(v, None)

    # Entries may point at candidates the sweep removed later; filter once.
    for (p, u), lists in tree_adj.items():
        keep = cand_set[u]
        for vp in list(lists):
            lists[vp] = [w for w in lists[vp] if w in keep]

    # Non-tree lists, both directions, built after refinement.
    non_tree_adj: AdjacencyMap = {}
    for u in range(n):
        for un in plan.non_tree[u]:
            target = cand_set[un]
            lists = {}
            for v in cand[u]:
                row = [w for w in data.adj[v] if w in target]
                if row:
                    lists[v] = row
            non_tree_adj[(u, un)] = lists

    return CandidateTree.assemble(cand, tree_adj, non_tree_adj)


@dataclass
class WorkloadTable:
    """Per-candidate counts of tree-only walks through the suffix below it.

    counts[u][v] is 1 for leaves and otherwise the product over children
    of the sum of counts over v's stored list toward that child. total
    sums the root candidates and estimates the tree's workload.
    """

    counts: list[dict[int, int]] = field(default_factory=list)
    total: int = 0


def estimate_workload(tree: CandidateTree, plan: QueryPlan) -> WorkloadTable:
    """Bottom-up dynamic program counting tree-only candidate walks."""
    counts: list[dict[int, int]] = [{} for _ in range(plan.num_vertices)]
    for u in reversed(plan.bfs_order):
        kids = plan.children[u]
        for v in tree.candidates[u]:
            value = 1
            for c in kids:
                value *= sum(counts[c].get(w, 0) for w in tree.tree_adj.get((u, c), {}).get(v, ()))
                if value == 0:
                    break
            counts[u][v] = value
    total = sum(counts[plan.root].values())
    return WorkloadTable(counts=counts, total=total)


def dump_tree(tree: CandidateTree) -> str:
    """Deterministic text dump used by golden-file tests.

    One ``C(u): ...`` line per query vertex, then one ``N[a->b][v]: ...``
    line per stored adjacency list, keys ascending.
    """
    lines = []
    for u, cand in enumerate(tree.candidates):
        lines.append(f"C({u}): {' '.join(map(str, cand))}".rstrip())
    groups = dict(tree.tree_adj)
    groups.update(tree.non_tree_adj)
    for a, b in sorted(groups):
        per_cand = groups[(a, b)]
        for v in sorted(per_cand):
            if per_cand[v]:
                lines.append(f"N[{a}->{b}][{v}]: {' '.join(map(str, per_cand[v]))}")
    return "\n".join(lines) + "\n"
