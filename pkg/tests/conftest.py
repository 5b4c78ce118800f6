"""Shared builders for crafted hosts used by the irrelevant-vertex tests."""

import random

from semicomplete.digraph import RootedHost, SemiCompleteDigraph
from semicomplete.triples import verify_triple


def build_triple_host(
    m: int,
    seed: int = 0,
    phase1_spoilers: bool = False,
    phase2_spoilers: bool = False,
    yes_instance: bool = True,
):
    """Tournament containing an m-triple (A, B, C), two roots, and spoilers.

    Layout order: s, A, q-spoilers, B, C, r-spoilers, t with default arcs
    pointing from earlier to later in the order, then targeted overrides:
    the C-to-A matching, root behaviour (source/sink for a YES instance,
    inverted for NO), r-spoilers that give every B vertex a problematic
    in-neighbour (forcing the auxiliary digraph S), and q-spoilers doing the
    same for out-neighbours (forcing S').

    Returns ``(rooted_host, triple, meta)`` with the verified m-triple.
    """
    rng = random.Random(seed)
    n_r = (m + 4) // 5 + 1 if phase1_spoilers else 0
    n_q = (m + 6) // 7 + 1 if phase2_spoilers else 0
    ids = {}
    order = []

    def alloc(name, count):
        start = len(order)
        for i in range(count):
            order.append(f"{name}{i}")
        ids[name] = list(range(start, start + count))
        return ids[name]

    (s_id,) = alloc("s", 1)
    A = alloc("a", m)
    Q = alloc("q", n_q)
    B = alloc("b", m)
    C = alloc("c", m)
    R = alloc("r", n_r)
    (t_id,) = alloc("t", 1)
    n = len(order)

    out = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            out[i] |= 1 << j

    def flip(u, v):
        # force arc u -> v regardless of the default direction
        out[v] &= ~(1 << u)
        out[u] |= 1 << v

    for i in range(m):
        flip(C[i], A[i])
    if not yes_instance:
        # s becomes a sink and t a source: no s -> t linkage survives
        for v in range(n):
            if v != s_id:
                flip(v, s_id)
            if v != t_id:
                flip(t_id, v)
    if phase1_spoilers:
        targets = list(B)
        rng.shuffle(targets)
        for i, r in enumerate(R):
            mine = targets[5 * i : 5 * i + 5]
            for b in mine:
                flip(r, b)
    if phase2_spoilers:
        targets = list(B)
        rng.shuffle(targets)
        for i, q in enumerate(Q):
            mine = targets[7 * i : 7 * i + 7]
            for b in mine:
                flip(b, q)

    host = SemiCompleteDigraph(n, out_masks=out)
    roots = (s_id, t_id)
    triple = verify_triple(host, A, B, C)
    assert triple is not None, "crafted host must contain the triple"
    meta = {"A": A, "B": B, "C": C, "s": s_id, "t": t_id, "m": m}
    return RootedHost(host, roots), triple, meta
