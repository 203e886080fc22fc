"""Certified forest membership on finite windows of larger (possibly infinite) graphs.

A window is a finite chunk of an ambient graph together with the set of its
vertices that may have unseen ambient neighbors (the boundary). For each
window edge we certify its fate in the ambient minimal spanning forest:

- Removed: some window path joins the endpoints using only strictly cheaper
  edges. Such a path is ambient-valid, so the verdict is final.
- Retained: the strictly-cheaper cluster of the smaller endpoint is entirely
  interior (touches no boundary vertex) and misses the other endpoint. No
  ambient extension can add a cheaper path, so the verdict is final.
- Unknown: the cluster reaches the boundary; a larger window must decide.

Labels are evaluated on ambient vertex keys, so nested windows of one ambient
graph see consistent labels under one seed.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass

from .errors import CapacityError, ContractError
from .forests import DisjointSet
from .graphs import (
    Graph,
    RootedTreeSpec,
    bfs_distances,
    build_grid_box,
    build_rooted_tree,
    direct_product,
)
from .labels import sort_edges

DEFAULT_NODE_BUDGET = 10**6

# Grid windows embed into the plane lattice with this coordinate offset.
_GRID_OFFSET = 1 << 20


class EdgeState(enum.Enum):
    REMOVED = "removed"
    RETAINED = "retained"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class EdgeVerdict:
    """Outcome of certifying one window edge, with its evidence."""

    state: EdgeState
    witness_path: tuple[int, ...] | None = None  # cheaper path u..v (Removed)
    cluster: frozenset | None = None  # interior cheaper-cluster of u (Retained)
    budget_exceeded: bool = False


class Window:
    """Finite window of an ambient graph. Treat all attributes as read-only.

    ambient_ids maps window vertex ids to ambient vertex keys (None means the
    window is the whole ambient graph and ids coincide).
    """

    __slots__ = (
        "graph",
        "boundary",
        "core",
        "ambient_ids",
        "descriptor",
        "_ambient_edges",
        "_edge_set",
    )

    def __init__(self, graph: Graph, boundary, core, ambient_ids=None, descriptor=""):
        n = graph.vertex_count
        boundary = frozenset(boundary)
        core = frozenset(core)
        for v in boundary | core:
            if not 0 <= v < n:
                raise ContractError(f"window vertex {v} outside the graph")
        if boundary & core:
            raise ContractError("core vertices cannot lie on the boundary")
        if ambient_ids is not None:
            ambient_ids = tuple(ambient_ids)
            if len(ambient_ids) != n or len(set(ambient_ids)) != n:
                raise ContractError("ambient_ids must be a bijection over window vertices")
        self.graph = graph
        self.boundary = boundary
        self.core = core
        self.ambient_ids = ambient_ids
        self.descriptor = descriptor or graph.describe()
        self._ambient_edges = None
        self._edge_set = None

    def edge_set(self) -> frozenset:
        if self._edge_set is None:
            self._edge_set = frozenset(self.graph.edges)
        return self._edge_set

    def ambient_edge(self, edge) -> tuple[int, int]:
        """Canonical ambient key pair for a window edge."""
        if self.ambient_ids is None:
            return edge
        a, b = self.ambient_ids[edge[0]], self.ambient_ids[edge[1]]
        return (a, b) if a < b else (b, a)

    def ambient_edges(self) -> list[tuple[int, int]]:
        """Ambient key pairs aligned with graph.edges; built lazily."""
        if self._ambient_edges is None:
            if self.ambient_ids is None:
                self._ambient_edges = self.graph.edges
            else:
                self._ambient_edges = [self.ambient_edge(e) for e in self.graph.edges]
        return self._ambient_edges


def full_window(g: Graph, descriptor: str = "") -> Window:
    """The entire finite graph as a window: no boundary, every vertex in the core."""
    return Window(g, frozenset(), range(g.vertex_count), None, descriptor)


def _core_from_boundary(g: Graph, boundary, margin: int):
    if margin < 0:
        raise ValueError(f"margin must be >= 0, got {margin}")
    if not boundary:
        return frozenset(range(g.vertex_count))
    dist = bfs_distances(g, sorted(boundary))
    return frozenset(v for v in range(g.vertex_count) if dist[v] < 0 or dist[v] >= margin)


def tree_product_window(d: int, b: int, radius: int, margin: int = 2) -> Window:
    """Window of the product of two infinite d- and b-regular trees.

    The window graph is the product of the two depth-`radius` balls; depth
    ids nest across radii, so windows at increasing radius are nested and
    share ambient vertex keys (x << 32 | y).
    """
    left = build_rooted_tree(RootedTreeSpec(d, radius))
    right = build_rooted_tree(RootedTreeSpec(b, radius))
    g = direct_product(left, right)
    codec = g.meta.codec
    depth_l = bfs_distances(left, [0])
    depth_r = bfs_distances(right, [0])
    rc = right.vertex_count
    boundary = [
        codec.encode(x, y)
        for x in range(left.vertex_count)
        for y in range(rc)
        if depth_l[x] == radius or depth_r[y] == radius
    ]
    ambient_ids = [
        (x << 32) | y for x in range(left.vertex_count) for y in range(rc)
    ]
    core = _core_from_boundary(g, boundary, margin)
    descriptor = f"tree-product(d={d},b={b},R={radius},margin={margin})"
    return Window(g, boundary, core, ambient_ids, descriptor)


def grid_window(width: int, height: int, margin: int = 2) -> Window:
    """Axis-aligned box of the plane lattice, centered on the origin.

    Centering makes boxes of increasing even (or odd) size nested, with
    ambient keys derived from absolute lattice coordinates.
    """
    g = build_grid_box(width, height)
    if max(width, height) >= _GRID_OFFSET:
        raise CapacityError(f"grid window side must stay below {_GRID_OFFSET}")
    lo_r, lo_c = -(height // 2), -(width // 2)
    boundary = []
    ambient_ids = []
    for r in range(height):
        for c in range(width):
            if r in (0, height - 1) or c in (0, width - 1):
                boundary.append(r * width + c)
            ambient_ids.append(((r + lo_r + _GRID_OFFSET) << 32) | (c + lo_c + _GRID_OFFSET))
    core = _core_from_boundary(g, boundary, margin)
    descriptor = f"grid(w={width},h={height},margin={margin})"
    return Window(g, boundary, core, ambient_ids, descriptor)


def classify_edge(w: Window, labeling, edge, node_budget: int = DEFAULT_NODE_BUDGET) -> EdgeVerdict:
    """Certify one window edge by search from its smaller endpoint.

    Explores the cluster reachable from u through strictly cheaper edges.
    Reaching v yields Removed (with a witness path); an exhausted interior
    cluster yields Retained (with the cluster); touching the boundary, or
    running past node_budget, yields Unknown.
    """
    u, v = edge
    if edge not in w.edge_set():
        raise ContractError(f"edge {edge!r} is not a window edge")
    ambient = w.ambient_edge(edge)
    bound = (labeling.label(ambient), ambient)
    adjacency = w.graph.adjacency
    parent = {u: None}
    queue = deque([u])
    truncated = False
    while queue:
        x = queue.popleft()
        for y in adjacency[x]:
            if y in parent:
                continue
            f = (x, y) if x < y else (y, x)
            af = w.ambient_edge(f)
            if (labeling.label(af), af) >= bound:
                continue
            if y == v:
                path = [v, x]
                while path[-1] != u:
                    path.append(parent[path[-1]])
                path.reverse()
                return EdgeVerdict(EdgeState.REMOVED, witness_path=tuple(path))
            if len(parent) >= node_budget:
                truncated = True
                break
            parent[y] = x
            queue.append(y)
        if truncated:
            break
    if truncated:
        return EdgeVerdict(EdgeState.UNKNOWN, budget_exceeded=True)
    cluster = frozenset(parent)
    if cluster & w.boundary:
        return EdgeVerdict(EdgeState.UNKNOWN)
    return EdgeVerdict(EdgeState.RETAINED, cluster=cluster)


class WindowClassification:
    """Per-edge verdict states for one window, with summary counts."""

    __slots__ = ("window", "states", "budget_exceeded", "retained", "removed", "unknown")

    def __init__(self, window: Window, states, budget_exceeded=frozenset()):
        self.window = window
        self.states = states
        self.budget_exceeded = frozenset(budget_exceeded)
        self.retained = sum(1 for s in states.values() if s is EdgeState.RETAINED)
        self.removed = sum(1 for s in states.values() if s is EdgeState.REMOVED)
        self.unknown = sum(1 for s in states.values() if s is EdgeState.UNKNOWN)

    def by_ambient_key(self) -> dict[tuple[int, int], EdgeState]:
        return {self.window.ambient_edge(e): s for e, s in self.states.items()}


def classify_window(
    w: Window, labeling, method: str = "sweep", node_budget: int = DEFAULT_NODE_BUDGET
) -> WindowClassification:
    """Certify every window edge.

    The sweep method processes edges in increasing label order with a
    union-find over strictly-cheaper connectivity, tracking which components
    touch the boundary; it matches per-edge search exactly (the per-edge
    method remains available, and honors node_budget).
    """
    if method == "per-edge":
        states = {}
        flagged = []
        for e in w.graph.edges:
            verdict = classify_edge(w, labeling, e, node_budget=node_budget)
            states[e] = verdict.state
            if verdict.budget_exceeded:
                flagged.append(e)
        return WindowClassification(w, states, flagged)
    if method != "sweep":
        raise ValueError(f"unknown method {method!r}")

    g = w.graph
    dsu = DisjointSet(g.vertex_count)
    touches_boundary = bytearray(g.vertex_count)
    for v in w.boundary:
        touches_boundary[v] = 1
    states = {}
    for e in sort_edges(labeling, g.edges, keys=w.ambient_edges()):
        ru, rv = dsu.find(e[0]), dsu.find(e[1])
        if ru == rv:
            states[e] = EdgeState.REMOVED
            continue
        if touches_boundary[ru]:
            states[e] = EdgeState.UNKNOWN
        else:
            states[e] = EdgeState.RETAINED
        root = dsu.union(ru, rv)
        touches_boundary[root] = touches_boundary[ru] | touches_boundary[rv]
    return WindowClassification(w, states)


@dataclass(frozen=True)
class CensusRecord:
    """Component census of the certified-retained forest over the window core.

    core_components counts distinct retained-forest components meeting the
    core; pending Unknown edges can only merge components later, so it is an
    upper bound on the ambient count restricted to this core.
    """

    retained: int
    removed: int
    unknown: int
    core_vertices: int
    core_components: int


def census_components(w: Window, c: WindowClassification) -> CensusRecord:
    """Count distinct retained-forest components that meet the window core."""
    dsu = DisjointSet(w.graph.vertex_count)
    for e, state in c.states.items():
        if state is EdgeState.RETAINED:
            dsu.union(e[0], e[1])
    roots = {dsu.find(v) for v in w.core}
    return CensusRecord(
        retained=c.retained,
        removed=c.removed,
        unknown=c.unknown,
        core_vertices=len(w.core),
        core_components=len(roots),
    )
