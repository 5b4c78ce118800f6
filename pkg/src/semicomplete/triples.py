"""Triples: verification, extraction from jungles, and the universal embedding.

A k-triple is three disjoint k-sets (A, B, C) with A complete to B, B
complete to C, and a perfect C-to-A matching; it topologically contains
every sufficiently small digraph and obstructs pathwidth below k - 1.

The theoretical jungle-to-triple pipeline needs jungles of size f(k), a
tower far beyond any computable host, so extraction also runs in an
opportunistic mode that tries the same construction at whatever sizes are
available; soundness is preserved because every returned triple is verified.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

from .digraph import PatternDigraph, SemiCompleteDigraph, bits, mask_of
from .errors import BudgetExceededError, InputFormatError, ThresholdError
from .separations import min_vertex_cut

__all__ = [
    "Triple",
    "verify_triple",
    "find_transitive_subtournament",
    "TripleExtraction",
    "triple_from_jungle",
    "ramsey_upper",
    "f_threshold",
    "f_threshold_log2",
    "embed_in_triple",
    "find_large_triple",
]

_SUBSET_SEARCH_MAX_K = 5
_F_MATERIALIZE_MAX_BITS = 1 << 24


@dataclass(frozen=True)
class Triple:
    """Ordered parts with the matching pairing c_i -> a_i."""

    k: int
    a: tuple
    b: tuple
    c: tuple


def _bipartite_matching(pairs, left, right):
    """Maximum matching on explicit pairs; returns dict left->right."""
    match_l = {}
    match_r = {}
    adj = {x: [y for (xx, y) in pairs if xx == x] for x in left}

    def try_augment(x, seen):
        for y in adj.get(x, ()):
            if y in seen:
                continue
            seen.add(y)
            if y not in match_r or try_augment(match_r[y], seen):
                match_l[x] = y
                match_r[y] = x
                return True
        return False

    for x in left:
        try_augment(x, set())
    return match_l


def verify_triple(T: SemiCompleteDigraph, A, B, C):
    """Check the completeness conditions and find a C-to-A matching.

    Returns an ordered Triple or None.  The orderings of the parts beyond
    the matching pairing are immaterial given completeness, so parts are
    ordered by vertex id with C aligned to the matching.
    """
    A, B, C = (tuple(sorted(set(p))) for p in (A, B, C))
    k = len(A)
    if not (len(B) == len(C) == k):
        raise InputFormatError("triple parts must have equal sizes")
    if k == 0:
        raise InputFormatError("triple parts must be nonempty")
    if len(set(A) | set(B) | set(C)) != 3 * k:
        return None
    b_mask = mask_of(B)
    c_mask = mask_of(C)
    for a in A:
        if (T.out[a] & b_mask) != b_mask:
            return None
    for b in B:
        if (T.out[b] & c_mask) != c_mask:
            return None
    pairs = [(c, a) for c in C for a in A if T.has_arc(c, a)]
    match = _bipartite_matching(pairs, C, A)
    if len(match) != k:
        return None
    ordered_a = tuple(sorted(match.values()))
    back = {a: c for c, a in match.items()}
    ordered_c = tuple(back[a] for a in ordered_a)
    return Triple(k, ordered_a, tuple(B), ordered_c)


def find_transitive_subtournament(T: SemiCompleteDigraph, target: int):
    """A transitive vertex sequence of length >= floor(log2 n), greedily extended.

    One arc of every 2-cycle is dropped first (keeping the arc with the
    smaller source id); the median-pivot recursion then guarantees the
    logarithmic size, and a greedy insertion pass grows the sequence further.
    Returns the sequence, or None when it falls short of ``target``.
    """
    n = T.n
    out = list(T.out)
    for u in range(n):
        for v in bits(out[u] & T.in_[u]):
            if u < v:
                out[v] &= ~(1 << u)

    def chain(sub_mask):
        if sub_mask == 0:
            return []
        best_v = None
        best_bal = -1
        for v in bits(sub_mask):
            o = (out[v] & sub_mask).bit_count()
            i = sub_mask.bit_count() - 1 - o
            bal = min(o, i)
            if bal > best_bal:
                best_bal = bal
                best_v = v
        v = best_v
        out_side = out[v] & sub_mask
        in_side = sub_mask & ~out_side & ~(1 << v)
        if out_side.bit_count() >= in_side.bit_count():
            return [v] + chain(out_side)
        return chain(in_side) + [v]

    seq = chain(T.full)
    # greedy insertion pass over the remaining vertices
    for v in range(n):
        if v in seq:
            continue
        pos = 0
        while pos < len(seq) and (out[seq[pos]] >> v) & 1:
            pos += 1
        if all((out[v] >> x) & 1 for x in seq[pos:]):
            seq.insert(pos, v)
    if len(seq) < target:
        return None
    return tuple(seq)


@dataclass(frozen=True)
class TripleExtraction:
    triple: Triple | None
    reason: str | None


def ramsey_upper(k: int) -> int:
    """Known exact diagonal Ramsey numbers for small k, else the binomial bound."""
    exact = {1: 1, 2: 2, 3: 6, 4: 18}
    if k in exact:
        return exact[k]
    return comb(2 * k - 2, k - 1)


def f_threshold_log2(k: int) -> int:
    """Exact log2 of the jungle-size threshold: 12 * 2^(R(2k, 2k))."""
    return 12 * (2 ** ramsey_upper(2 * k))


def f_threshold(k: int) -> int:
    """The jungle-size threshold as an exact integer.

    Already astronomically large at k = 1 (2^48); for k >= 3 the number has
    more bits than can be materialized, so comparisons should go through
    ``f_threshold_log2`` instead.
    """
    log2 = f_threshold_log2(k)
    if log2 > _F_MATERIALIZE_MAX_BITS:
        raise BudgetExceededError(
            f"f({k}) has {log2} bits; compare via f_threshold_log2 instead",
            estimate=log2,
            budget=_F_MATERIALIZE_MAX_BITS,
        )
    return 1 << log2


def triple_from_jungle(
    T: SemiCompleteDigraph,
    jungle,
    k: int,
    opportunistic: bool = False,
) -> TripleExtraction:
    """Extract a k-triple along the transitive-set / disjoint-paths route.

    In the default (theoretical) mode the jungle must have at least f(k)
    vertices, which no computable host meets; opportunistic mode runs the
    same construction at whatever sizes are available and relies on output
    verification for soundness.  Any returned triple is verified.
    """
    if k < 1:
        raise InputFormatError("triple size must be at least 1")
    if k > _SUBSET_SEARCH_MAX_K:
        raise BudgetExceededError(
            f"subset search is exponential in k; capped at {_SUBSET_SEARCH_MAX_K}, "
            f"estimated C(|Q|, {k})^3 candidates",
            estimate=k,
            budget=_SUBSET_SEARCH_MAX_K,
        )
    jungle_verts = tuple(sorted(set(getattr(jungle, "vertices", jungle))))
    if not opportunistic:
        # |jungle| >= f(k) = 2^(12 * 2^R(2k,2k)): compare via bit length since
        # the threshold itself cannot always be materialized
        need_log2 = f_threshold_log2(k)
        if len(jungle_verts).bit_length() <= need_log2:
            return TripleExtraction(None, "threshold")
    X = find_transitive_subtournament(T, 2)
    if X is None or len(X) < 2:
        return TripleExtraction(None, "no transitive set")
    # prefer a transitive set inside the jungle region when one is big enough
    region = set(jungle_verts)
    X_in_region = tuple(v for v in X if v in region)
    if len(X_in_region) >= 2 * k:
        X = X_in_region
    half = len(X) // 2
    if half == 0:
        return TripleExtraction(None, "transitive set too small")
    X1 = X[:half]
    X2 = X[half : 2 * half]
    q_paths = half
    res = min_vertex_cut(T, set(X2), set(X1), limit=q_paths - 1, unit_endpoints=True)
    if not res.exceeded:
        return TripleExtraction(None, "too few disjoint return paths")
    paths = res.paths
    # minimal induced support: drop vertices while the paths survive
    keep = set(range(T.n))
    needed = set(X1) | set(X2)
    for v in range(T.n):
        if v in needed:
            continue
        trial = keep - {v}
        sub_paths = _paths_within(T, X2, X1, trial, q_paths)
        if sub_paths is not None:
            keep = trial
            paths = sub_paths
    Q = set()
    for p in paths:
        Q.update(p[:2])
        Q.update(p[-2:])
    Q = tuple(sorted(Q))
    if len(Q) < 3 * k:
        return TripleExtraction(None, "endpoint pool too small")
    full_cost = comb(len(Q), k) ** 3
    if full_cost <= 2_000_000:
        for A in combinations(Q, k):
            rest1 = tuple(x for x in Q if x not in A)
            for B in combinations(rest1, k):
                rest2 = tuple(x for x in rest1 if x not in B)
                for C in combinations(rest2, k):
                    triple = verify_triple(T, A, B, C)
                    if triple is not None:
                        return TripleExtraction(triple, None)
        return TripleExtraction(None, "no triple in endpoint pool")
    # enumerate the middle part only and complete it via dominator pools
    b_cost = comb(len(Q), k)
    if b_cost > 200_000:
        raise BudgetExceededError(
            f"triple subset search needs about {b_cost} middle parts",
            estimate=b_cost,
            budget=200_000,
        )
    q_mask = mask_of(Q)
    for B in combinations(Q, k):
        b_mask = mask_of(B)
        a_pool = q_mask & ~b_mask
        c_pool = q_mask & ~b_mask
        for b in B:
            a_pool &= T.in_[b]
            c_pool &= T.out[b]
        shared = a_pool & c_pool
        a_only = a_pool & ~shared
        c_only = c_pool & ~shared
        # assign shared vertices where the pools run short, ascending ids
        a_list = list(bits(a_only))
        c_list = list(bits(c_only))
        for v in bits(shared):
            if len(a_list) < len(c_list):
                a_list.append(v)
            else:
                c_list.append(v)
        if len(a_list) < k or len(c_list) < k:
            continue
        pairs = [(c, a) for c in c_list for a in a_list if T.has_arc(c, a)]
        match = _bipartite_matching(pairs, c_list, a_list)
        if len(match) < k:
            continue
        chosen = sorted(match.items())[:k]
        triple = verify_triple(T, [a for _c, a in chosen], B, [c for c, _a in chosen])
        if triple is not None:
            return TripleExtraction(triple, None)
    return TripleExtraction(None, "no triple in endpoint pool")


def _paths_within(T, sources, sinks, allowed, count):
    """``count`` fully disjoint paths inside ``allowed``, or None."""
    sub_mask = mask_of(allowed)
    masked = [T.out[v] & sub_mask if (sub_mask >> v) & 1 else 0 for v in range(T.n)]
    shadow = SemiCompleteDigraph.__new__(SemiCompleteDigraph)
    shadow.n = T.n
    shadow.out = tuple(masked)
    in_ = [0] * T.n
    for u in range(T.n):
        for v in bits(masked[u]):
            in_[v] |= 1 << u
    shadow.in_ = tuple(in_)
    shadow.full = T.full
    res = min_vertex_cut(shadow, set(sources), set(sinks), limit=count - 1, unit_endpoints=True)
    if res.exceeded and len(res.paths) >= count:
        return res.paths
    return None


def embed_in_triple(H: PatternDigraph, triple: Triple):
    """Constructive expansion of H in a triple.

    Vertices map to distinct b's; arc number t maps to the path
    b_u -> c_j -> a_j -> b_v through matching pair j = (t + 1) mod k, so the
    paths are internally vertex-disjoint.  Requires max(|V(H)|, |E(H)|) <= k
    (sufficient for the construction; the conventional |H| <= k bound
    implies it).
    """
    from .dp import Model

    k = triple.k
    if H.n > k or len(H.arcs) > k:
        raise InputFormatError(
            f"pattern needs max(|V|, |E|) <= {k} to embed in a {k}-triple"
        )
    if any(u == v for u, v in H.arcs):
        raise InputFormatError("pattern must be loop-free")
    eta = {u: triple.b[u] for u in range(H.n)}
    paths = []
    for t, (u, v) in enumerate(H.arcs):
        j = (t + 1) % k
        paths.append((triple.b[u], triple.c[j], triple.a[j], triple.b[v]))
    return Model(eta, tuple(paths))


def find_large_triple(T: SemiCompleteDigraph, k: int, avoid=(), opportunistic: bool = True):
    """Best-effort search for a verified k-triple disjoint from ``avoid``.

    Tries the jungle-route extraction when the subset search is affordable,
    then a greedy grower: starting from a seed vertex, the middle part B is
    extended one vertex at a time so that the pools of common in-dominators
    and common out-dominated vertices stay as large as possible; the parts
    A and C are then completed from those pools via a matching.  Every
    result is verified before being returned.
    """
    avoid = set(avoid)
    if k <= _SUBSET_SEARCH_MAX_K:
        got = triple_from_jungle(T, range(T.n), k, opportunistic=opportunistic)
        if got.triple is not None and not (
            set(got.triple.a) | set(got.triple.b) | set(got.triple.c)
        ) & avoid:
            return got.triple
    if 3 * k > T.n - len(avoid):
        return None
    avoid_mask = mask_of(avoid)
    usable = T.full & ~avoid_mask
    seeds = sorted(
        bits(usable), key=lambda v: (-min(T.out_degree(v), T.in_degree(v)), v)
    )[:8]
    for seed in seeds:
        b_set = [seed]
        b_mask = 1 << seed
        common_in = T.in_[seed] & usable
        common_out = T.out[seed] & usable
        while len(b_set) < k:
            best = None
            best_score = -1
            cand_mask = usable & ~b_mask
            for x in bits(cand_mask):
                ci = common_in & T.in_[x] & ~(b_mask | (1 << x))
                co = common_out & T.out[x] & ~(b_mask | (1 << x))
                score = min(ci.bit_count(), co.bit_count())
                if score > best_score:
                    best_score = score
                    best = x
            if best is None or best_score < k:
                break
            b_set.append(best)
            b_mask |= 1 << best
            common_in &= T.in_[best]
            common_out &= T.out[best]
        if len(b_set) < k:
            continue
        a_pool_mask = common_in & ~b_mask
        c_pool_mask = common_out & ~b_mask
        shared = a_pool_mask & c_pool_mask
        a_list = list(bits(a_pool_mask & ~shared))
        c_list = list(bits(c_pool_mask & ~shared))
        for v in bits(shared):
            if len(a_list) < len(c_list):
                a_list.append(v)
            else:
                c_list.append(v)
        if len(a_list) < k or len(c_list) < k:
            continue
        pairs = [(c, a) for c in c_list for a in a_list if T.has_arc(c, a)]
        match = _bipartite_matching(pairs, c_list, a_list)
        if len(match) < k:
            continue
        chosen = sorted(match.items())[:k]
        triple = verify_triple(
            T, [a for _c, a in chosen], b_set, [c for c, _a in chosen]
        )
        if triple is not None:
            return triple
    return None
