"""Deterministic i.i.d.-uniform edge labels in counter mode.

Each canonical edge key (u, v) is hashed together with a 64-bit seed through
the splitmix64 finalizer; the top 53 bits become a float in [0, 1). Labels are
a pure function of (seed, key), so any subset of edges can be labeled in any
order, on any worker, with identical results.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MULT1 = 0xBF58476D1CE4E5B9
_MULT2 = 0x94D049BB133111EB


def mix64(x: int) -> int:
    """splitmix64 finalizer on a 64-bit word."""
    z = (x + _GAMMA) & _MASK64
    z = ((z ^ (z >> 30)) * _MULT1) & _MASK64
    z = ((z ^ (z >> 27)) * _MULT2) & _MASK64
    return z ^ (z >> 31)


def _mix_bulk(z: np.ndarray) -> np.ndarray:
    # uint64 arrays only: scalar numpy uint64 arithmetic warns on wraparound.
    z = z + np.uint64(_GAMMA)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MULT1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MULT2)
    return z ^ (z >> np.uint64(31))


def derive_seed(master_seed: int, index: int) -> int:
    """Per-trial (or per-stream) seed; independent of evaluation order."""
    return mix64(mix64(master_seed & _MASK64) ^ (index & _MASK64))


def parse_seed(text: str) -> int:
    """Parse a seed given as decimal or 0x-prefixed hex; must fit in 64 bits."""
    value = int(text, 0)
    if not 0 <= value <= _MASK64:
        raise ValueError(f"seed must fit in 64 unsigned bits, got {text!r}")
    return value


class EdgeLabeling:
    """Uniform-[0, 1) labels keyed by canonical (u, v) pairs under one seed."""

    __slots__ = ("seed", "_h0")

    def __init__(self, seed: int):
        self.seed = seed & _MASK64
        self._h0 = mix64(self.seed)

    def label(self, edge) -> float:
        """Label of a canonical edge key; 53-bit resolution."""
        u, v = edge
        if not 0 <= u < v:
            raise ValueError(f"edge key must satisfy 0 <= u < v, got {edge!r}")
        h = mix64(mix64(self._h0 ^ (u & _MASK64)) ^ (v & _MASK64))
        return (h >> 11) * 2.0**-53

    def label_pair(self, u: int, v: int) -> float:
        """Label of an unordered endpoint pair, evaluated through the canonical key."""
        if u == v:
            raise ValueError("self-loops carry no label")
        return self.label((u, v) if u < v else (v, u))

    def order_key(self, edge):
        """Sort key realizing the strict total order: label, then canonical key."""
        return (self.label(edge), edge)

    def precedes(self, e1, e2) -> bool:
        """True iff e1 comes strictly before e2; distinct edges never compare equal."""
        return self.order_key(e1) < self.order_key(e2)

    def labels_array(self, us, vs) -> np.ndarray:
        """Vectorized labels for canonical key arrays (no canonicality check)."""
        us = np.asarray(us, dtype=np.uint64)
        vs = np.asarray(vs, dtype=np.uint64)
        h = _mix_bulk(_mix_bulk(np.uint64(self._h0) ^ us) ^ vs)
        return (h >> np.uint64(11)).astype(np.float64) * 2.0**-53


def sort_edges(labeling, edges, keys=None) -> list:
    """Edges in increasing total order; vectorized when the labeling supports it.

    `keys` optionally supplies the canonical label keys for each edge when they
    differ from the edge tuples themselves (windows label by ambient keys).
    """
    if keys is None:
        keys = edges
    if isinstance(labeling, EdgeLabeling) and len(edges) > 64:
        us = np.fromiter((k[0] for k in keys), dtype=np.uint64, count=len(keys))
        vs = np.fromiter((k[1] for k in keys), dtype=np.uint64, count=len(keys))
        labels = labeling.labels_array(us, vs)
        order = np.lexsort((vs, us, labels))
        return [edges[i] for i in order.tolist()]
    return [e for _, e in sorted(zip(keys, edges), key=lambda t: (labeling.label(t[0]), t[0]))]
