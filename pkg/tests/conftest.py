"""Shared test helpers: random graph generators, a tie-capable labeling stub,
cycle sampling, and the acceptance-line reporter."""

from __future__ import annotations

import random

from mstlab import Graph

ACCEPTANCE_RESULTS = []


def record_acceptance(name: str, ok: bool, detail: str) -> None:
    line = f"[ACCEPTANCE] {name}: {'PASS' if ok else 'FAIL'} ({detail})"
    ACCEPTANCE_RESULTS.append(line)
    print(line, flush=True)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_RESULTS:
        terminalreporter.write_sep("-", "acceptance criteria")
        for line in ACCEPTANCE_RESULTS:
            terminalreporter.write_line(line)


def random_connected_graph(rng: random.Random, n_min=2, n_max=9, extra_prob=0.3) -> Graph:
    """Random spanning tree plus independent extra edges; always connected."""
    n = rng.randint(n_min, n_max)
    edges = set()
    for v in range(1, n):
        u = rng.randrange(v)
        edges.add((u, v))
    for u in range(n):
        for v in range(u + 1, n):
            if (u, v) not in edges and rng.random() < extra_prob:
                edges.add((u, v))
    return Graph(n, sorted(edges))


def random_graph(rng: random.Random, n_min=2, n_max=12, edge_prob=0.3) -> Graph:
    """Erdos-Renyi-style graph; may be disconnected."""
    n = rng.randint(n_min, n_max)
    edges = [
        (u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < edge_prob
    ]
    return Graph(n, edges)


class DictLabeling:
    """Explicit label table obeying the same ordering contract; ties allowed."""

    def __init__(self, labels: dict):
        self.labels = {tuple(k): v for k, v in labels.items()}

    def label(self, edge) -> float:
        return self.labels[tuple(edge)]

    def order_key(self, edge):
        return (self.label(edge), tuple(edge))

    def precedes(self, e1, e2) -> bool:
        return self.order_key(e1) < self.order_key(e2)


def walk_cycle(rng: random.Random, g: Graph, attempts=200):
    """Simple cycle (vertex list, length >= 3) from a non-backtracking random walk."""
    n = g.vertex_count
    for _ in range(attempts):
        v = rng.randrange(n)
        if not g.adjacency[v]:
            continue
        walk = [v]
        pos = {v: 0}
        prev = None
        for _ in range(2 * n + 4):
            nbrs = [w for w in g.adjacency[walk[-1]] if w != prev]
            if not nbrs:
                break
            prev = walk[-1]
            nxt = nbrs[rng.randrange(len(nbrs))]
            if nxt in pos:
                cycle = walk[pos[nxt] :]
                if len(cycle) >= 3:
                    return cycle
                break
            pos[nxt] = len(walk)
            walk.append(nxt)
    return None


def fundamental_cycle(rng: random.Random, g: Graph):
    """Simple cycle through a random non-tree edge of a BFS tree; None if acyclic."""
    n = g.vertex_count
    root = rng.randrange(n)
    parent = {root: None}
    order = [root]
    head = 0
    while head < len(order):
        x = order[head]
        head += 1
        for w in g.adjacency[x]:
            if w not in parent:
                parent[w] = x
                order.append(w)
    tree = {
        (min(x, p), max(x, p)) for x, p in parent.items() if p is not None
    }
    candidates = [
        e for e in g.edges if e not in tree and e[0] in parent and e[1] in parent
    ]
    if not candidates:
        return None
    u, v = candidates[rng.randrange(len(candidates))]

    def path_to_root(x):
        path = [x]
        while parent[path[-1]] is not None:
            path.append(parent[path[-1]])
        return path

    pu, pv = path_to_root(u), path_to_root(v)
    in_pu = set(pu)
    lca = next(x for x in pv if x in in_pu)
    return pu[: pu.index(lca) + 1] + list(reversed(pv[: pv.index(lca)]))


def random_cycle(rng: random.Random, g: Graph):
    """Walk-found cycle when available, else a fundamental cycle; None if acyclic."""
    return walk_cycle(rng, g) or fundamental_cycle(rng, g)


def cycle_edges(cycle):
    """Canonical edge list of a vertex cycle, including the closing edge."""
    pairs = list(zip(cycle, cycle[1:] + cycle[:1]))
    return [(min(a, b), max(a, b)) for a, b in pairs]
