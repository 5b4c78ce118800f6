"""Separations of a digraph: order, crossing, closeness, and vertex cuts.

A separation is an ordered pair of vertex sets (A, B) covering V with no arc
from A\\B to B\\A; its order is |A n B|.  Everything here is pure and safe to
use concurrently on a shared read-only digraph.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .digraph import SemiCompleteDigraph, bits, mask_of
from .errors import InputFormatError

__all__ = [
    "Separation",
    "separation_from_sets",
    "is_separation",
    "crosses",
    "k_close",
    "sort_cross_free",
    "min_vertex_cut",
    "CutResult",
]


@dataclass(frozen=True)
class Separation:
    """Vertex-set pair stored as bitmasks; ``order`` is the cut size."""

    a_mask: int
    b_mask: int

    @property
    def order(self) -> int:
        return (self.a_mask & self.b_mask).bit_count()

    @property
    def A(self) -> frozenset:
        return frozenset(bits(self.a_mask))

    @property
    def B(self) -> frozenset:
        return frozenset(bits(self.b_mask))

    def __repr__(self):
        return f"Separation(A={sorted(self.A)}, B={sorted(self.B)})"


def separation_from_sets(A, B) -> Separation:
    return Separation(mask_of(A), mask_of(B))


def is_separation(D: SemiCompleteDigraph, A, B=None):
    """Check the separation conditions; returns ``(ok, order)``.

    Accepts two vertex collections or a single Separation.  ``order`` is
    |A n B| regardless of validity.
    """
    if isinstance(A, Separation):
        a, b = A.a_mask, A.b_mask
    else:
        a, b = mask_of(A), mask_of(B)
    order = (a & b).bit_count()
    if (a | b) != D.full:
        return False, order
    strict_b = b & ~a
    for u in bits(a & ~b):
        if D.out[u] & strict_b:
            return False, order
    return True, order


def crosses(s1: Separation, s2: Separation) -> bool:
    """True unless one separation is nested in the other."""
    a1, b1, a2, b2 = s1.a_mask, s1.b_mask, s2.a_mask, s2.b_mask
    if (a2 & ~a1) == 0 and (b1 & ~b2) == 0:  # A2<=A1 and B1<=B2
        return False
    if (a1 & ~a2) == 0 and (b2 & ~b1) == 0:  # A1<=A2 and B2<=B1
        return False
    return True


def k_close(s1: Separation, s2: Separation, k: int) -> bool:
    """Closeness test for two non-crossing separations.

    Orientation is normalized internally so that A <= C and D <= B; the test
    is |(B\\A) n (C\\D)| < k * |order difference|.  Crossing inputs are
    rejected.  Equal orders are never k-close (the threshold is zero).
    """
    a1, b1, a2, b2 = s1.a_mask, s1.b_mask, s2.a_mask, s2.b_mask
    if (a1 & ~a2) == 0 and (b2 & ~b1) == 0:
        lo_a, lo_b, hi_a, hi_b = a1, b1, a2, b2
    elif (a2 & ~a1) == 0 and (b1 & ~b2) == 0:
        lo_a, lo_b, hi_a, hi_b = a2, b2, a1, b1
    else:
        raise InputFormatError("k_close needs non-crossing separations")
    between = (lo_b & ~lo_a) & (hi_a & ~hi_b)
    return between.bit_count() < k * abs(s1.order - s2.order)


def sort_cross_free(family):
    """Order a cross-free family so that A grows and B shrinks.

    Sorts by (|A| ascending, |B| descending) and then verifies the
    containment chain, which fails exactly when some pair crosses.
    """
    members = sorted(
        set(family),
        key=lambda s: (s.a_mask.bit_count(), -s.b_mask.bit_count(), s.a_mask, -s.b_mask),
    )
    for prev, cur in zip(members, members[1:]):
        if (prev.a_mask & ~cur.a_mask) or (cur.b_mask & ~prev.b_mask):
            raise InputFormatError(f"family is not cross-free: {prev} vs {cur}")
    return members


@dataclass(frozen=True)
class CutResult:
    """Outcome of a bounded vertex-cut computation.

    When ``exceeded`` is false, ``cut`` is a minimum vertex cut (disjoint
    from sources, sinks, and infinite-capacity vertices) whose removal
    disconnects the sources from the sinks, and ``paths`` are ``len(cut)``
    internally vertex-disjoint source-to-sink paths (Menger duality).  When
    ``exceeded`` is true, ``cut`` is None and ``paths`` holds ``limit + 1``
    witness paths instead.
    """

    exceeded: bool
    cut: frozenset | None
    paths: tuple

    @property
    def flow_value(self) -> int:
        return len(self.paths)


def min_vertex_cut(
    D: SemiCompleteDigraph,
    sources,
    sinks,
    infinite_cap=(),
    limit: int = 0,
    unit_endpoints: bool = False,
) -> CutResult:
    """Minimum vertex cut between vertex sets via unit-augmenting max flow.

    Every vertex is split into an in/out node pair; vertices in
    ``infinite_cap`` (and, unless ``unit_endpoints``, the sources and sinks)
    are uncuttable.  One unit is pushed per augmentation and the search stops
    as soon as ``limit + 1`` units fit, per the early-termination contract.
    With ``unit_endpoints`` each source/sink carries at most one path, so the
    witness paths are fully vertex-disjoint.
    """
    n = D.n
    src = sorted(set(sources))
    snk = sorted(set(sinks))
    inf = set(infinite_cap)
    overlap = set(src) & set(snk)
    if overlap and not overlap <= inf and not unit_endpoints:
        raise InputFormatError(
            "sources and sinks may only overlap on infinite-capacity vertices"
        )
    if not src or not snk:
        return CutResult(False, frozenset(), ())

    INF = limit + 2
    S, T = 2 * n, 2 * n + 1
    cap = {}
    adj = [[] for _ in range(2 * n + 2)]
    forward = []

    def add(u, v, c):
        if (u, v) not in cap:
            cap[(u, v)] = 0
            adj[u].append(v)
        if (v, u) not in cap:
            cap[(v, u)] = 0
            adj[v].append(u)
        cap[(u, v)] += c
        forward.append((u, v))

    srcset, snkset = set(src), set(snk)
    for v in range(n):
        uncuttable = v in inf or (not unit_endpoints and (v in srcset or v in snkset))
        add(2 * v, 2 * v + 1, INF if uncuttable else 1)
    for u in range(n):
        for v in bits(D.out[u]):
            add(2 * u + 1, 2 * v, INF)
    for v in src:
        add(S, 2 * v, 1 if unit_endpoints else INF)
    for v in snk:
        add(2 * v + 1, T, 1 if unit_endpoints else INF)

    flow = 0
    while flow <= limit:
        parent = {S: S}
        queue = deque([S])
        while queue:
            u = queue.popleft()
            if u == T:
                break
            for v in adj[u]:
                if v not in parent and cap[(u, v)] > 0:
                    parent[v] = u
                    queue.append(v)
        if T not in parent:
            break
        v = T
        while v != S:
            u = parent[v]
            cap[(u, v)] -= 1
            cap[(v, u)] += 1
            v = u
        flow += 1

    # Flow on a constructed arc equals its reverse residual (no constructed
    # arc has a constructed anti-parallel twin in the split graph).
    flow_used = {}
    for (u, v) in forward:
        f = cap.get((v, u), 0)
        if f > 0:
            flow_used[(u, v)] = f

    def take_path():
        node = S
        walk = [S]
        pos = {S: 0}
        while node != T:
            nxt = None
            for v in adj[node]:
                if flow_used.get((node, v), 0) > 0:
                    nxt = v
                    break
            if nxt is None:
                return None
            flow_used[(node, nxt)] -= 1
            if flow_used[(node, nxt)] == 0:
                del flow_used[(node, nxt)]
            if nxt in pos:
                # hit a flow cycle: its arcs are already cancelled, resume there
                i = pos[nxt]
                for dead in walk[i + 1 :]:
                    pos.pop(dead, None)
                walk = walk[: i + 1]
                node = nxt
                continue
            pos[nxt] = len(walk)
            walk.append(nxt)
            node = nxt
        verts = [nd // 2 for nd in walk[1:-1] if nd % 2 == 0]
        return tuple(verts)

    paths = []
    for _ in range(flow):
        p = take_path()
        if p is not None:
            paths.append(p)

    if flow > limit:
        return CutResult(True, None, tuple(paths))

    reach = {S}
    queue = deque([S])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in reach and cap[(u, v)] > 0:
                reach.add(v)
                queue.append(v)
    cut = []
    for v in range(n):
        if v in inf or v in srcset or v in snkset:
            continue
        if 2 * v in reach and 2 * v + 1 not in reach:
            cut.append(v)
    return CutResult(False, frozenset(cut), tuple(paths))
