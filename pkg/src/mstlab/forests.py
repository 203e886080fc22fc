"""Spanning forests: Kruskal, the no-cheaper-path criterion, tree queries.

The two MST characterizations are implemented independently on purpose:
`kruskal_mst` grows a forest greedily under the strict total order, while
`criterion_filter` keeps an edge iff no path joins its endpoints using only
strictly cheaper edges. On any finite graph they must agree exactly.
"""

from __future__ import annotations

from collections import deque

from .errors import ContractError, DisconnectedError
from .graphs import Graph, bfs_distances, is_connected
from .labels import derive_seed, sort_edges

# Exhaustive path enumeration is permitted only this far.
EXHAUSTIVE_VERTEX_CAP = 12


class DisjointSet:
    """Union-find with union by rank and path halving."""

    __slots__ = ("parent", "rank", "count")

    def __init__(self, size: int):
        self.parent = list(range(size))
        self.rank = [0] * size
        self.count = size  # number of classes

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> int | None:
        """Merge the classes of a and b; return the surviving root, or None if already merged."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return None
        rank = self.rank
        if rank[ra] < rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if rank[ra] == rank[rb]:
            rank[ra] += 1
        self.count -= 1
        return ra


class ForestEdgeSet:
    """Acyclic edge set over an explicit vertex hull inside some host graph."""

    __slots__ = ("edges", "vertices", "spanning", "_adjacency")

    def __init__(self, edges, vertices=None, spanning=False):
        self.edges = frozenset(edges)
        if vertices is None:
            vertices = frozenset(x for e in self.edges for x in e)
        self.vertices = frozenset(vertices)
        self.spanning = spanning
        self._adjacency = None

    def adjacency(self) -> dict[int, list[int]]:
        """Sorted neighbor lists; built lazily, covers every hull vertex."""
        if self._adjacency is None:
            adjacency = {v: [] for v in self.vertices}
            for u, v in self.edges:
                adjacency[u].append(v)
                adjacency[v].append(u)
            for nbrs in adjacency.values():
                nbrs.sort()
            self._adjacency = adjacency
        return self._adjacency

    def component_count(self) -> int:
        # acyclic, so components = vertices - edges
        return len(self.vertices) - len(self.edges)

    def validate(self) -> None:
        """Check edges sit inside the hull and form no cycle."""
        dsu_ids = {v: i for i, v in enumerate(sorted(self.vertices))}
        dsu = DisjointSet(len(dsu_ids))
        for u, v in self.edges:
            if u not in dsu_ids or v not in dsu_ids:
                raise ContractError(f"edge ({u}, {v}) leaves the vertex hull")
            if dsu.union(dsu_ids[u], dsu_ids[v]) is None:
                raise ContractError(f"edge ({u}, {v}) closes a cycle")


def kruskal_mst(g: Graph, labeling, strict: bool = False) -> ForestEdgeSet:
    """Greedy forest under the strict total order; spanning tree iff g is connected.

    With strict=True a disconnected input raises instead of returning a forest.
    """
    dsu = DisjointSet(g.vertex_count)
    chosen = []
    for e in sort_edges(labeling, g.edges):
        if dsu.union(e[0], e[1]) is not None:
            chosen.append(e)
    spanning = g.vertex_count > 0 and dsu.count == 1
    if strict and not spanning:
        raise DisconnectedError(
            f"graph has {dsu.count} components; spanning tree required"
        )
    return ForestEdgeSet(chosen, vertices=range(g.vertex_count), spanning=spanning)


def _has_cheaper_simple_path(g: Graph, labeling, labels, edge) -> bool:
    # Depth-first enumeration of simple paths from u, pruned to strictly
    # cheaper edges; returns at the first path reaching v.
    u, v = edge
    bound = (labels[edge], edge)
    adjacency = g.adjacency
    on_path = [False] * g.vertex_count
    on_path[u] = True
    stack = [(u, iter(adjacency[u]))]
    while stack:
        x, it = stack[-1]
        advanced = False
        for w in it:
            f = (x, w) if x < w else (w, x)
            if (labels[f], f) >= bound:
                continue
            if w == v:
                return True
            if on_path[w]:
                continue
            on_path[w] = True
            stack.append((w, iter(adjacency[w])))
            advanced = True
            break
        if not advanced:
            on_path[x] = False
            stack.pop()
    return False


def _cheaper_reachable(g: Graph, labeling, labels, edge) -> bool:
    # Breadth-first reachability from u over strictly cheaper edges.
    u, v = edge
    bound = (labels[edge], edge)
    adjacency = g.adjacency
    seen = [False] * g.vertex_count
    seen[u] = True
    queue = deque([u])
    while queue:
        x = queue.popleft()
        for w in adjacency[x]:
            if seen[w]:
                continue
            f = (x, w) if x < w else (w, x)
            if (labels[f], f) >= bound:
                continue
            if w == v:
                return True
            seen[w] = True
            queue.append(w)
    return False


def criterion_filter(g: Graph, labeling, mode: str = "auto") -> ForestEdgeSet:
    """Keep each edge iff no path joins its endpoints using only cheaper edges.

    mode: "exhaustive" enumerates simple paths (small graphs only),
    "bfs" runs per-edge reachability, "auto" picks by size.
    """
    if mode == "auto":
        mode = "exhaustive" if g.vertex_count <= EXHAUSTIVE_VERTEX_CAP else "bfs"
    if mode == "exhaustive" and g.vertex_count > EXHAUSTIVE_VERTEX_CAP:
        raise ValueError(
            f"exhaustive mode is capped at {EXHAUSTIVE_VERTEX_CAP} vertices, "
            f"got {g.vertex_count}"
        )
    if mode not in ("exhaustive", "bfs"):
        raise ValueError(f"unknown mode {mode!r}")
    has_path = _has_cheaper_simple_path if mode == "exhaustive" else _cheaper_reachable
    labels = {e: labeling.label(e) for e in g.edges}
    kept = [e for e in g.edges if not has_path(g, labeling, labels, e)]
    spanning = g.vertex_count > 0 and len(kept) == g.vertex_count - 1
    return ForestEdgeSet(kept, vertices=range(g.vertex_count), spanning=spanning)


def complete_subtree(g: Graph, partial: ForestEdgeSet, trial_seed: int) -> ForestEdgeSet:
    """Extend a partial subtree to a random spanning tree of a connected graph.

    Vertices at hop distance k from the partial hull each attach to one
    uniformly chosen neighbor at distance k - 1; the choice is derived from
    (trial_seed, vertex id), so the result is reproducible and independent of
    processing order.
    """
    if not is_connected(g):
        raise DisconnectedError("completion requires a connected host graph")
    if not partial.vertices:
        raise ContractError("partial subtree must contain at least one vertex")
    for v in partial.vertices:
        if not 0 <= v < g.vertex_count:
            raise ContractError(f"partial vertex {v} outside host graph")
    host_edges = set(g.edges)
    for e in partial.edges:
        if e not in host_edges:
            raise ContractError(f"partial edge {e} not in host graph")
    partial.validate()
    if len(partial.edges) != len(partial.vertices) - 1:
        raise ContractError("partial subtree must be connected over its hull")

    dist = bfs_distances(g, sorted(partial.vertices))
    edges = list(partial.edges)
    for v in range(g.vertex_count):
        dv = dist[v]
        if dv <= 0:
            continue
        eligible = [w for w in g.adjacency[v] if dist[w] == dv - 1]
        pick = eligible[derive_seed(trial_seed, v) % len(eligible)]
        edges.append((v, pick) if v < pick else (pick, v))
    return ForestEdgeSet(edges, vertices=range(g.vertex_count), spanning=True)


def tree_path(t: ForestEdgeSet, u: int, v: int) -> list[int]:
    """Unique path from u to v inside the forest, as a vertex list."""
    if u not in t.vertices or v not in t.vertices:
        raise ValueError(f"vertex {u if u not in t.vertices else v} not in the forest")
    if u == v:
        return [u]
    adjacency = t.adjacency()
    parent = {u: None}
    queue = deque([u])
    while queue:
        x = queue.popleft()
        for w in adjacency[x]:
            if w not in parent:
                parent[w] = x
                if w == v:
                    path = [v]
                    while path[-1] != u:
                        path.append(parent[path[-1]])
                    path.reverse()
                    return path
                queue.append(w)
    raise DisconnectedError(f"vertices {u} and {v} lie in different forest components")


def tree_distance(t: ForestEdgeSet, u: int, v: int) -> int:
    """Edge count of the unique forest path between u and v."""
    return len(tree_path(t, u, v)) - 1


def tree_distances_from(t: ForestEdgeSet, root: int) -> dict[int, int]:
    """Hop distances from root to every vertex in its forest component."""
    if root not in t.vertices:
        raise ValueError(f"vertex {root} not in the forest")
    adjacency = t.adjacency()
    dist = {root: 0}
    queue = deque([root])
    while queue:
        x = queue.popleft()
        dx = dist[x]
        for w in adjacency[x]:
            if w not in dist:
                dist[w] = dx + 1
                queue.append(w)
    return dist
