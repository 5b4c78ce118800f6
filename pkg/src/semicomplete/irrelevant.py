"""Irrelevant-vertex identification inside a large triple.

Given a rooted immersion instance whose host contains a big enough triple
(A, B, C) disjoint from the roots, the two-phase degree procedure outputs a
vertex x in B whose deletion preserves the answer.  Phase one classifies
in-neighbours of each B-vertex by their out-degree into B and keeps the
vertices whose problematic in-neighbours can be rerouted; phase two repeats
the argument on out-neighbours.  Every cardinality claim along the way is
asserted at runtime: the counting arguments are what make the output safe,
so a violated count is a hard error, not a warning (except in opportunistic
mode, which offers no preservation guarantee).

The rerouting arguments themselves are proof content; the procedure only
identifies x, and the preservation contract is validated empirically by
``check_answer_preserved``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .digraph import PatternDigraph, RootedHost, SemiCompleteDigraph, bits, mask_of
from .errors import BudgetExceededError, InputFormatError, ThresholdError
from .triples import Triple

__all__ = [
    "p_threshold",
    "IrrelevantVertexReport",
    "find_irrelevant_vertex",
    "check_answer_preserved",
    "flow_checkable",
]


def p_threshold(k: int) -> int:
    """Required triple size: 80k^2 + 80k + 5."""
    if k < 0:
        raise InputFormatError("threshold parameter must be nonnegative")
    return 80 * k * k + 80 * k + 5


@dataclass(frozen=True)
class IrrelevantVertexReport:
    x: int
    X: tuple
    phase1_branch: str
    phase2_branch: str
    R: dict = field(repr=False)
    G: dict = field(repr=False)
    R2: dict = field(repr=False)
    G2: dict = field(repr=False)
    s_size: int
    s_prime_size: int
    thresholds: dict


def _assert_count(name: str, actual: int, needed: int, strict: bool):
    if actual < needed:
        msg = f"{name}: have {actual}, need {needed}"
        if strict:
            raise ThresholdError(msg)


def _check_semicomplete_aux(arcs: dict, verts) -> bool:
    verts = list(verts)
    for i, u in enumerate(verts):
        for v in verts[i + 1 :]:
            if v not in arcs.get(u, ()) and u not in arcs.get(v, ()):
                return False
    return True


def find_irrelevant_vertex(
    H: PatternDigraph,
    rooted_host: RootedHost,
    triple: Triple,
    k: int | None = None,
    opportunistic: bool = False,
) -> IrrelevantVertexReport:
    """Identify a deletable vertex in the B-part of the triple.

    ``k`` is the rerouting parameter (the number of solution paths that ever
    need rerouting); it defaults to the pattern size |V(H)| + |E(H)|.  The
    triple must have at least p(k) vertices per part and be disjoint from
    the roots.  In opportunistic mode the threshold preconditions are
    skipped and no preservation guarantee is given.
    """
    T = rooted_host.host
    roots = set(rooted_host.roots)
    if k is None:
        k = H.n + len(H.arcs)
    strict = not opportunistic
    need = p_threshold(k)
    parts = set(triple.a) | set(triple.b) | set(triple.c)
    if parts & roots:
        raise InputFormatError("triple parts must be disjoint from the roots")
    if strict and triple.k < need:
        raise ThresholdError(f"triple size {triple.k} below p({k}) = {need}")

    A = set(triple.a)
    B = list(triple.b)
    C = set(triple.c)
    b_mask = mask_of(B)
    thresholds = {
        "k": k,
        "p(k)": need,
        "out_into_B": 6 * k,
        "in_from_B": 8 * k,
        "deg_S": 6 * k * k + 6 * k,
        "deg_S_prime": 8 * k * k + 8 * k,
        "X_size": 16 * k * k + 16 * k + 1,
    }

    # phase 1: in-neighbours of b outside A, split by out-degree into B
    R = {}
    G = {}
    out_into_B = {v: (T.out[v] & b_mask).bit_count() for v in range(T.n)}
    for b in B:
        rb = []
        gb = []
        for v in bits(T.in_[b]):
            if v in A:
                continue
            if out_into_B[v] >= 6 * k:
                rb.append(v)
            else:
                gb.append(v)
        R[b] = tuple(rb)
        G[b] = tuple(gb)
    B_empty = sorted(b for b in B if not G[b])
    x_size_needed = 16 * k * k + 16 * k + 1
    if len(B_empty) >= x_size_needed:
        X = tuple(B_empty)
        phase1 = "B_empty"
        s_size = 0
    else:
        B_g = sorted(b for b in B if G[b])
        _assert_count("|B_g|", len(B_g), 4 * x_size_needed, strict)
        # S on B_g: arc (b1, b2) iff every v in G[b1] is in G[b2] or has an
        # out-neighbour in G[b2]
        g_masks = {b: mask_of(G[b]) for b in B_g}
        s_arcs = {b: set() for b in B_g}
        for b1 in B_g:
            for b2 in B_g:
                if b1 == b2:
                    continue
                gm2 = g_masks[b2]
                ok = True
                for v in G[b1]:
                    if (gm2 >> v) & 1 or (T.out[v] & gm2):
                        continue
                    ok = False
                    break
                if ok:
                    s_arcs[b1].add(b2)
        if not _check_semicomplete_aux(s_arcs, B_g):
            raise ThresholdError("auxiliary digraph S is not semi-complete")
        deg_s = 6 * k * k + 6 * k
        X = tuple(sorted(b for b in B_g if len(s_arcs[b]) >= deg_s))
        _assert_count("|X|", len(X), x_size_needed, strict)
        phase1 = "aux_S"
        s_size = len(B_g)

    # phase 2: out-neighbours of b outside C, split by in-degree from B
    R2 = {}
    G2 = {}
    in_from_B = {v: (T.in_[v] & b_mask).bit_count() for v in range(T.n)}
    for b in X:
        rb = []
        gb = []
        for v in bits(T.out[b]):
            if v in C:
                continue
            if in_from_B[v] >= 8 * k:
                rb.append(v)
            else:
                gb.append(v)
        R2[b] = tuple(rb)
        G2[b] = tuple(gb)
    empties = sorted(b for b in X if not G2[b])
    if empties:
        x = empties[0]
        phase2 = "G2_empty"
        s_prime_size = 0
    else:
        # S' on X: arc (b1, b2) iff every v2 in G2[b2] sees some v1 in G2[b1]
        # with v1 = v2 or an arc (v1, v2)
        g2_masks = {b: mask_of(G2[b]) for b in X}
        s2_in_deg = {b: 0 for b in X}
        s2_arcs = {b: set() for b in X}
        for b1 in X:
            gm1 = g2_masks[b1]
            for b2 in X:
                if b1 == b2:
                    continue
                ok = True
                for v2 in G2[b2]:
                    if (gm1 >> v2) & 1 or (T.in_[v2] & gm1):
                        continue
                    ok = False
                    break
                if ok:
                    s2_arcs[b1].add(b2)
                    s2_in_deg[b2] += 1
        if not _check_semicomplete_aux(s2_arcs, X):
            raise ThresholdError("auxiliary digraph S' is not semi-complete")
        deg_s2 = 8 * k * k + 8 * k
        qualified = sorted(b for b in X if s2_in_deg[b] >= deg_s2)
        _assert_count("high in-degree vertex in S'", len(qualified), 1, strict)
        if not qualified:
            qualified = sorted(X)  # opportunistic fallback
        x = qualified[0]
        phase2 = "aux_S_prime"
        s_prime_size = len(X)

    return IrrelevantVertexReport(
        x=x,
        X=tuple(X),
        phase1_branch=phase1,
        phase2_branch=phase2,
        R=R,
        G=G,
        R2=R2,
        G2=G2,
        s_size=s_size,
        s_prime_size=s_prime_size,
        thresholds=thresholds,
    )


def flow_checkable(H: PatternDigraph) -> bool:
    """True when the rooted-immersion answer reduces to a single max flow.

    That is the case when all arcs of H join one ordered pair of roots and
    every other vertex is an isolated root.
    """
    if not H.arcs:
        return True
    pairs = {(u, v) for u, v in H.arcs}
    if len(pairs) != 1:
        return False
    (u, v) = next(iter(pairs))
    roots = set(H.roots)
    if u not in roots or v not in roots:
        return False
    for w in range(H.n):
        if w in (u, v):
            continue
        deg = sum(1 for a, b in H.arcs if w in (a, b))
        if deg:
            return False
    return True


def _edge_disjoint_flow(T: SemiCompleteDigraph, s: int, t: int, want: int) -> bool:
    """At least ``want`` edge-disjoint s->t paths (unit arc capacities)."""
    if want <= 0 or s == t:
        return True
    from collections import deque

    cap = {}

    def capacity(u, v):
        got = cap.get((u, v))
        if got is not None:
            return got
        return 1 if T.has_arc(u, v) else 0

    flow = 0
    while flow < want:
        parent = {s: None}
        queue = deque([s])
        while queue and t not in parent:
            u = queue.popleft()
            for v in bits(T.out[u] | T.in_[u]):
                if v not in parent and capacity(u, v) > 0:
                    parent[v] = u
                    queue.append(v)
        if t not in parent:
            return False
        v = t
        while parent[v] is not None:
            u = parent[v]
            cap[(u, v)] = capacity(u, v) - 1
            cap[(v, u)] = capacity(v, u) + 1
            v = u
        flow += 1
    return True


def _rooted_answer(H: PatternDigraph, rooted_host: RootedHost) -> bool:
    T = rooted_host.host
    if flow_checkable(H):
        if not H.arcs:
            return T.n >= H.n
        root_of = dict(zip(H.roots, rooted_host.roots))
        (u, v) = next(iter({(a, b) for a, b in H.arcs}))
        if T.n < H.n:
            return False
        return _edge_disjoint_flow(T, root_of[u], root_of[v], len(H.arcs))
    from .oracles import brute_force_containment

    return brute_force_containment(H, T, "rooted-immersion", host_roots=rooted_host.roots)


def check_answer_preserved(H: PatternDigraph, rooted_host: RootedHost, x: int) -> bool:
    """Solve rooted immersion on T and on T minus x; true iff answers agree.

    Works for flow-checkable patterns at any size and falls back to the
    brute-force oracle on small hosts; refuses anything else.
    """
    T = rooted_host.host
    if x in rooted_host.roots:
        raise InputFormatError("the deleted vertex may not be a root")
    if not flow_checkable(H) and T.n > 6:
        raise BudgetExceededError(
            "answer preservation needs a flow-checkable pattern or a tiny host",
            estimate=T.n,
            budget=6,
        )
    before = _rooted_answer(H, rooted_host)
    from .digraph import induced_subdigraph

    sub, mapping = induced_subdigraph(T, [v for v in range(T.n) if v != x])
    fwd = {v: i for i, v in enumerate(mapping)}
    after_host = RootedHost(sub, tuple(fwd[r] for r in rooted_host.roots))
    after = _rooted_answer(H, after_host)
    return before == after
