"""Finite simple graphs: rooted trees, grid boxes, direct products, edge-list IO.

Vertex ids are dense integers 0..n-1. Edges are canonical pairs (u, v) with
u < v. Adjacency lists are sorted, so iteration order never depends on how a
graph was assembled.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass

from .errors import CapacityError, EdgeListFormatError

# Default cap on vertices and edges; generators check it before allocating.
DEFAULT_CAPACITY = 50_000_000


@dataclass(frozen=True)
class ProductVertexCodec:
    """Row-major bijection (i, j) <-> i * right_count + j for product vertices."""

    left_count: int
    right_count: int

    def encode(self, i: int, j: int) -> int:
        return i * self.right_count + j

    def decode(self, v: int) -> tuple[int, int]:
        return divmod(v, self.right_count)

    @property
    def size(self) -> int:
        return self.left_count * self.right_count


@dataclass(frozen=True)
class RootedTreeSpec:
    """Tree in which every vertex has degree `degree` except the depth-`depth` leaves.

    The root (id 0) has `degree` children; interior vertices have degree - 1
    children; leaves sit exactly `depth` steps from the root.
    """

    degree: int
    depth: int

    ROOT = 0

    def __post_init__(self):
        if self.degree < 2:
            raise ValueError(f"degree must be >= 2, got {self.degree}")
        if self.depth < 1:
            raise ValueError(f"depth must be >= 1, got {self.depth}")

    def vertex_count(self) -> int:
        d, n = self.degree, self.depth
        if d == 2:
            return 2 * n + 1
        return 1 + d * ((d - 1) ** n - 1) // (d - 2)


@dataclass(frozen=True)
class GraphMeta:
    """Provenance descriptor attached to generated graphs."""

    kind: str
    params: tuple[tuple[str, int], ...] = ()
    root: int | None = None
    codec: ProductVertexCodec | None = None

    def describe(self) -> str:
        if not self.params:
            return self.kind
        inner = ",".join(f"{k}={v}" for k, v in self.params)
        return f"{self.kind}({inner})"


class Graph:
    """Immutable simple undirected graph. Treat all attributes as read-only."""

    __slots__ = ("vertex_count", "edges", "adjacency", "meta")

    def __init__(self, vertex_count, edges, meta=None, capacity=DEFAULT_CAPACITY):
        if vertex_count < 0:
            raise ValueError("vertex_count must be nonnegative")
        if vertex_count > capacity or len(edges) > capacity:
            raise CapacityError(
                f"{vertex_count} vertices / {len(edges)} edges exceeds capacity {capacity}"
            )
        edges = sorted(edges)
        adjacency = [[] for _ in range(vertex_count)]
        prev = None
        for e in edges:
            u, v = e
            if not 0 <= u < v < vertex_count:
                raise ValueError(f"edge {e!r} is not canonical for {vertex_count} vertices")
            if e == prev:
                raise ValueError(f"duplicate edge {e!r}")
            prev = e
            adjacency[u].append(v)
            adjacency[v].append(u)
        for nbrs in adjacency:
            nbrs.sort()
        self.vertex_count = vertex_count
        self.edges = edges
        self.adjacency = adjacency
        self.meta = meta

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def describe(self) -> str:
        return self.meta.describe() if self.meta is not None else "custom"


def build_rooted_tree(spec: RootedTreeSpec, capacity=DEFAULT_CAPACITY) -> Graph:
    """Build the tree with BFS-ordered ids: each level's vertices are contiguous.

    Level ordering makes id assignment depend only on a vertex's position, not
    on the total depth, so the depth-n tree is an induced prefix of the
    depth-(n+1) tree.
    """
    total = spec.vertex_count()
    if total > capacity:
        raise CapacityError(f"tree with {total} vertices exceeds capacity {capacity}")
    d = spec.degree
    edges = []
    next_id = 1
    level = [0]
    for _ in range(spec.depth):
        nxt = []
        for parent in level:
            children = d if parent == 0 else d - 1
            for _ in range(children):
                edges.append((parent, next_id))
                nxt.append(next_id)
                next_id += 1
        level = nxt
    assert next_id == total
    meta = GraphMeta("rooted-tree", (("d", d), ("n", spec.depth)), root=0)
    return Graph(total, edges, meta, capacity=capacity)


def build_grid_box(width: int, height: int, capacity=DEFAULT_CAPACITY) -> Graph:
    """Axis-aligned box of the square lattice; id = row * width + col."""
    if width < 1 or height < 1:
        raise ValueError(f"grid sides must be >= 1, got {width}x{height}")
    total = width * height
    if total > capacity:
        raise CapacityError(f"grid with {total} vertices exceeds capacity {capacity}")
    edges = []
    for r in range(height):
        base = r * width
        for c in range(width):
            v = base + c
            if c + 1 < width:
                edges.append((v, v + 1))
            if r + 1 < height:
                edges.append((v, v + width))
    meta = GraphMeta("grid", (("w", width), ("h", height)))
    return Graph(total, edges, meta, capacity=capacity)


def direct_product(left: Graph, right: Graph, capacity=DEFAULT_CAPACITY) -> Graph:
    """Direct product: (x1,y1) ~ (x2,y2) iff equal in one coordinate, adjacent in the other."""
    codec = ProductVertexCodec(left.vertex_count, right.vertex_count)
    total = codec.size
    edge_total = (
        left.vertex_count * right.edge_count + right.vertex_count * left.edge_count
    )
    if total > capacity or edge_total > capacity:
        raise CapacityError(
            f"product with {total} vertices / {edge_total} edges exceeds capacity {capacity}"
        )
    rc = right.vertex_count
    edges = []
    for x in range(left.vertex_count):
        base = x * rc
        for y1, y2 in right.edges:
            edges.append((base + y1, base + y2))
    for x1, x2 in left.edges:
        b1, b2 = x1 * rc, x2 * rc
        for y in range(rc):
            edges.append((b1 + y, b2 + y))
    root = None
    if left.meta is not None and right.meta is not None:
        if left.meta.root is not None and right.meta.root is not None:
            root = codec.encode(left.meta.root, right.meta.root)
    meta = GraphMeta(
        f"product({left.describe()},{right.describe()})", (), root=root, codec=codec
    )
    return Graph(total, edges, meta, capacity=capacity)


def bfs_distances(g: Graph, sources) -> list[int]:
    """Hop distances from the source set; -1 where unreachable."""
    dist = [-1] * g.vertex_count
    queue = deque()
    for s in sources:
        if dist[s] == -1:
            dist[s] = 0
            queue.append(s)
    adjacency = g.adjacency
    while queue:
        v = queue.popleft()
        dv = dist[v]
        for w in adjacency[v]:
            if dist[w] == -1:
                dist[w] = dv + 1
                queue.append(w)
    return dist


def graph_distance(g: Graph, u: int, v: int) -> int | None:
    """Hop distance between u and v; None if they are in different components."""
    n = g.vertex_count
    if not (0 <= u < n and 0 <= v < n):
        raise ValueError(f"vertex ids must be in [0, {n}), got {u}, {v}")
    if u == v:
        return 0
    dist = [-1] * n
    dist[u] = 0
    queue = deque([u])
    adjacency = g.adjacency
    while queue:
        x = queue.popleft()
        dx = dist[x]
        for w in adjacency[x]:
            if dist[w] == -1:
                if w == v:
                    return dx + 1
                dist[w] = dx + 1
                queue.append(w)
    return None


def is_connected(g: Graph) -> bool:
    if g.vertex_count == 0:
        return True
    return bfs_distances(g, [0]).count(-1) == 0


_HEADER_RE = re.compile(r"^# vertices=(\d+) edges=(\d+) kind=(\S+)$")


def write_edge_list(g: Graph, path, extra_header_lines=()) -> None:
    """Write `# vertices=<n> edges=<m> kind=<descriptor>` then one `u v` line per edge."""
    with open(path, "w", newline="\n") as fh:
        fh.write(f"# vertices={g.vertex_count} edges={g.edge_count} kind={g.describe()}\n")
        for line in extra_header_lines:
            fh.write(f"# {line}\n")
        for u, v in g.edges:
            fh.write(f"{u} {v}\n")


def read_edge_list(path, capacity=DEFAULT_CAPACITY) -> Graph:
    """Parse an edge-list file; raise EdgeListFormatError with a line number on bad input."""
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise EdgeListFormatError(path, 1, "empty file; expected header line")
    m = _HEADER_RE.match(lines[0])
    if m is None:
        raise EdgeListFormatError(
            path, 1, "expected header '# vertices=<n> edges=<m> kind=<descriptor>'"
        )
    vertex_count, edge_count, kind = int(m.group(1)), int(m.group(2)), m.group(3)
    edges = []
    for line_no, line in enumerate(lines[1:], start=2):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise EdgeListFormatError(path, line_no, f"expected 'u v', got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise EdgeListFormatError(path, line_no, f"non-integer vertex id in {line!r}")
        if not 0 <= u < v < vertex_count:
            raise EdgeListFormatError(
                path, line_no, f"edge ({u}, {v}) is not canonical for {vertex_count} vertices"
            )
        edges.append((u, v))
    if len(edges) != edge_count:
        raise EdgeListFormatError(
            path, len(lines), f"header promises {edge_count} edges, found {len(edges)}"
        )
    try:
        return Graph(vertex_count, edges, GraphMeta(kind), capacity=capacity)
    except ValueError as exc:
        raise EdgeListFormatError(path, 1, str(exc))
