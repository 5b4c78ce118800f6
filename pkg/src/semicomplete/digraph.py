"""Host and pattern digraphs: representations, validation, and generators.

Hosts are semi-complete, hence dense, so adjacency is stored as one bit-row
per vertex: bit ``v`` of ``out[u]`` is set iff the arc ``(u, v)`` is present.
Vertices are 0-based contiguous integers throughout the library; the 1-based
convention applies to files only.

All structures are immutable after construction and safe to share between
threads.  Generators are pure functions of their arguments; the random
tournament generator draws one orientation bit per unordered pair from
``random.Random(seed)`` (CPython's Mersenne Twister), so a seed pins the
output exactly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import InputFormatError

__all__ = [
    "SemiCompleteDigraph",
    "PatternDigraph",
    "RootedHost",
    "ClassFlags",
    "validate_class",
    "scc_reverse_topological_order",
    "subdivide_loops",
    "gen_transitive",
    "gen_random_tournament",
    "gen_random_semicomplete",
    "gen_counterexample",
    "counterexample_triple_parts",
    "induced_subdigraph",
    "mask_of",
    "bits",
]


def mask_of(vertices) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def bits(mask: int):
    """Yield set bit positions of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class SemiCompleteDigraph:
    """Simple digraph with at least one arc between every pair of distinct vertices."""

    __slots__ = ("n", "out", "in_", "full")

    def __init__(self, n: int, arcs=None, out_masks=None):
        if n < 1:
            raise InputFormatError("host digraph needs at least one vertex")
        self.n = n
        self.full = (1 << n) - 1
        if out_masks is not None:
            out = list(out_masks)
        else:
            out = [0] * n
            for u, v in arcs:
                if not (0 <= u < n and 0 <= v < n):
                    raise InputFormatError(f"arc ({u},{v}) out of range for n={n}")
                if u == v:
                    raise InputFormatError(f"loop at vertex {u} not allowed in a host digraph")
                out[u] |= 1 << v
        self.out = tuple(out)
        in_ = [0] * n
        for u in range(n):
            if out[u] & (1 << u):
                raise InputFormatError(f"loop at vertex {u} not allowed in a host digraph")
            m = out[u]
            while m:
                low = m & -m
                in_[low.bit_length() - 1] |= 1 << u
                m ^= low
        self.in_ = tuple(in_)
        for u in range(n):
            covered = self.out[u] | self.in_[u] | (1 << u)
            if covered != self.full:
                missing = next(bits(self.full & ~covered))
                raise InputFormatError(
                    f"not semi-complete: no arc between vertices {u} and {missing}"
                )

    def has_arc(self, u: int, v: int) -> bool:
        return bool(self.out[u] >> v & 1)

    def arcs(self):
        for u in range(self.n):
            for v in bits(self.out[u]):
                yield (u, v)

    def arc_count(self) -> int:
        return sum(m.bit_count() for m in self.out)

    @property
    def is_tournament(self) -> bool:
        return all((self.out[u] & self.in_[u]) == 0 for u in range(self.n))

    def out_degree(self, u: int) -> int:
        return self.out[u].bit_count()

    def in_degree(self, u: int) -> int:
        return self.in_[u].bit_count()

    def __eq__(self, other):
        return (
            isinstance(other, SemiCompleteDigraph)
            and self.n == other.n
            and self.out == other.out
        )

    def __hash__(self):
        return hash((self.n, self.out))

    def __repr__(self):
        return f"SemiCompleteDigraph(n={self.n}, arcs={self.arc_count()})"


@dataclass(frozen=True)
class PatternDigraph:
    """Small loop-free multidigraph with an ordered (possibly empty) root list.

    ``arcs`` is an ordered tuple; repeated entries encode multiplicity.
    ``size`` is vertex count plus total arc multiplicity.
    """

    n: int
    arcs: tuple
    roots: tuple = ()

    def __post_init__(self):
        if self.n < 0:
            raise InputFormatError("pattern vertex count must be nonnegative")
        for u, v in self.arcs:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InputFormatError(f"pattern arc ({u},{v}) out of range")
            if u == v:
                raise InputFormatError(
                    f"pattern has a loop at {u}; run subdivide_loops first"
                )
        if len(set(self.roots)) != len(self.roots):
            raise InputFormatError("pattern roots must be pairwise distinct")
        for r in self.roots:
            if not 0 <= r < self.n:
                raise InputFormatError(f"pattern root {r} out of range")

    @property
    def size(self) -> int:
        return self.n + len(self.arcs)


@dataclass(frozen=True)
class RootedHost:
    """Host digraph together with an ordered list of distinct root vertices."""

    host: SemiCompleteDigraph
    roots: tuple = ()

    def __post_init__(self):
        if len(set(self.roots)) != len(self.roots):
            raise InputFormatError("host roots must be pairwise distinct")
        for r in self.roots:
            if not 0 <= r < self.host.n:
                raise InputFormatError(f"host root {r} out of range")


@dataclass(frozen=True)
class ClassFlags:
    simple: bool
    semicomplete: bool
    tournament: bool


def validate_class(n: int, arcs) -> ClassFlags:
    """Classify a raw digraph given as an explicit arc list (loops allowed).

    Pure classification: ``semicomplete`` implies ``simple``; ``tournament``
    implies both.
    """
    arcs = list(arcs)
    seen = set()
    simple = True
    for u, v in arcs:
        if not (0 <= u < n and 0 <= v < n):
            raise InputFormatError(f"arc ({u},{v}) out of range for n={n}")
        if u == v or (u, v) in seen:
            simple = False
        seen.add((u, v))
    semicomplete = simple
    tournament = simple
    if simple:
        for u in range(n):
            for v in range(u + 1, n):
                fwd = (u, v) in seen
                bwd = (v, u) in seen
                if not (fwd or bwd):
                    semicomplete = tournament = False
                elif fwd and bwd:
                    tournament = False
            if not semicomplete:
                break
    else:
        semicomplete = tournament = False
    return ClassFlags(simple=simple, semicomplete=semicomplete, tournament=tournament)


def scc_reverse_topological_order(D: SemiCompleteDigraph):
    """Strongly connected components of ``D``, sink side first.

    Components are returned as ``F_1, ..., F_h`` (tuples of sorted vertices)
    such that every arc between distinct components goes from a later
    component to an earlier one; hence each prefix union is the A-side of an
    order-0 separation.
    """
    n = D.n
    out = D.out
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack = []
    comps = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        # iterative Tarjan; components complete sink-first
        work = [(root, iter(bits(out[root])))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, iter(bits(out[w]))))
                    advanced = True
                    break
                elif on_stack[w]:
                    if index[w] < low[v]:
                        low[v] = index[w]
            if advanced:
                continue
            work.pop()
            if work:
                pv = work[-1][0]
                if low[v] < low[pv]:
                    low[pv] = low[v]
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(tuple(sorted(comp)))
    return comps


def subdivide_loops(n: int, arcs) -> PatternDigraph:
    """Replace each loop ``(u,u)`` by a fresh vertex ``w`` and arcs ``(u,w),(w,u)``.

    Answer-preserving for containment and immersion queries; the result is
    loop-free.  Non-loop arcs keep their order; subdivision arcs are appended
    in input order.
    """
    plain = []
    extra = []
    next_v = n
    for u, v in arcs:
        if u == v:
            plain_w = next_v
            next_v += 1
            extra.append((u, plain_w))
            extra.append((plain_w, u))
        else:
            plain.append((u, v))
    return PatternDigraph(next_v, tuple(plain) + tuple(extra))


def gen_transitive(n: int) -> SemiCompleteDigraph:
    """Transitive tournament with arcs ``v_i -> v_j`` for ``i < j``."""
    out = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            out[i] |= 1 << j
    return SemiCompleteDigraph(n, out_masks=out)


def gen_random_tournament(n: int, seed: int) -> SemiCompleteDigraph:
    """Seeded random tournament: one orientation bit per unordered pair."""
    rng = random.Random(seed)
    out = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if rng.getrandbits(1):
                out[i] |= 1 << j
            else:
                out[j] |= 1 << i
    return SemiCompleteDigraph(n, out_masks=out)


def gen_random_semicomplete(n: int, seed: int, extra_rate: float = 0.25) -> SemiCompleteDigraph:
    """Seeded random semi-complete digraph.

    Starts from the seeded tournament and adds the reverse arc of each pair
    independently with probability ``extra_rate`` (same RNG stream, so the
    output is a pure function of the arguments).
    """
    rng = random.Random(seed)
    out = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if rng.getrandbits(1):
                out[i] |= 1 << j
            else:
                out[j] |= 1 << i
            if rng.random() < extra_rate:
                out[i] |= 1 << j
                out[j] |= 1 << i
    return SemiCompleteDigraph(n, out_masks=out)


def gen_counterexample(n: int) -> RootedHost:
    """The 2n-vertex tournament in which exactly one vertex-disjoint linkage exists.

    Vertices ``a_i`` are ``0..n-1`` and ``b_i`` are ``n..2n-1`` (for
    ``i = 1..n``).  Roots are ``(s1, t1, s2, t2) = (a_1, a_n, b_n, b_1)``;
    the unique solution to the two-pair disjoint-paths instance is the pair
    of chains ``a_1 .. a_n`` and ``b_n .. b_1``, which together cover every
    vertex.
    """
    if n < 4 or n % 2 != 0:
        raise InputFormatError("counterexample generator needs an even n >= 4")

    def a(i):
        return i - 1

    def b(i):
        return n + i - 1

    out = [0] * (2 * n)
    for i in range(1, n):
        out[a(i)] |= 1 << a(i + 1)
    for j in range(1, n + 1):
        for i in range(1, j - 1):
            out[a(j)] |= 1 << a(i)
    for i in range(1, n):
        out[b(i + 1)] |= 1 << b(i)
    for j in range(1, n + 1):
        for i in range(j + 2, n + 1):
            out[b(j)] |= 1 << b(i)
    for i in range(1, n + 1):
        out[a(i)] |= 1 << b(i)
    for j in range(1, n + 1):
        for i in range(1, n + 1):
            if i != j:
                out[b(j)] |= 1 << a(i)
    host = SemiCompleteDigraph(2 * n, out_masks=out)
    return RootedHost(host, roots=(a(1), a(n), b(n), b(1)))


def counterexample_triple_parts(n: int):
    """The canonical (n/2 - 1)-triple parts of ``gen_counterexample(n)``.

    Returns ``(A, B, C)`` as sorted tuples: the b-side block, the top a-block
    trimmed to n/2 - 1 vertices, and the bottom a-block.
    """
    h = n // 2 - 1
    A = tuple(n + i for i in range(h))            # b_1 .. b_{n/2-1}
    B = tuple(range(n - h, n))                    # a_{n/2+2} .. a_n
    C = tuple(range(h))                           # a_1 .. a_{n/2-1}
    return A, B, C


def induced_subdigraph(D: SemiCompleteDigraph, S):
    """Subdigraph induced by vertex set ``S`` with a stable renumbering.

    Returns ``(sub, mapping)`` where ``mapping[i]`` is the original vertex of
    new vertex ``i``; the mapping lists ``S`` in ascending order.
    """
    verts = sorted(set(S))
    if not verts:
        raise InputFormatError("induced subdigraph of an empty vertex set")
    pos = {v: i for i, v in enumerate(verts)}
    out = [0] * len(verts)
    for i, v in enumerate(verts):
        m = D.out[v]
        for w in verts:
            if m >> w & 1:
                out[i] |= 1 << pos[w]
    return SemiCompleteDigraph(len(verts), out_masks=out), verts
