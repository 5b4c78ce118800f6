"""Brute-force reference implementations.

These back the derived expected values in the test suite and the acceptance
criteria.  They deliberately share no code with the main algorithm modules
beyond the graph-core types (a test enforces that), and they may be
exponentially slow within their budgets; the budgets are hard errors, not
silent truncation.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations

from .digraph import PatternDigraph, SemiCompleteDigraph, bits
from .errors import BudgetExceededError

__all__ = [
    "OracleBudget",
    "BUDGET",
    "exact_pathwidth",
    "exact_cutwidth",
    "brute_force_containment",
    "brute_force_separations",
    "brute_force_vdp",
]


@dataclass(frozen=True)
class OracleBudget:
    pathwidth_max_n: int = 18
    cutwidth_max_n: int = 16
    containment_max_n: int = 6
    # raised from 16 so the n=10 counterexample host (20 vertices) is coverable
    vdp_max_n: int = 20


BUDGET = OracleBudget()


def _check_budget(n: int, cap: int, what: str):
    if n > cap:
        raise BudgetExceededError(f"{what} oracle capped at {cap} vertices, got {n}", n, cap)


def exact_pathwidth(D: SemiCompleteDigraph, witness: bool = False):
    """Exact directed pathwidth by subset dynamic programming.

    Uses the vertex-layout formulation: bags are read off an introduction
    order where a vertex stays active until its last out-neighbour has been
    introduced.  Returns the width, or ``(width, bags)`` with ``witness``.
    """
    _check_budget(D.n, BUDGET.pathwidth_max_n, "pathwidth")
    n = D.n
    out = D.out
    in_ = D.in_
    full = D.full
    # g[S] = min over intro orders of S of the max bag size so far
    g = {0: 0}
    parent = {0: None} if witness else None
    order_by_count = sorted(range(1, full + 1), key=lambda m: m.bit_count())
    for S in order_by_count:
        best = None
        best_v = None
        notS = ~S & full
        # vertices of S with an out-neighbour outside S stay active for any last-v
        active = 0
        m = S
        while m:
            low = m & -m
            u = low.bit_length() - 1
            m ^= low
            if out[u] & notS:
                active |= low
        base = active.bit_count()
        for v in bits(S):
            prev = g.get(S ^ (1 << v))
            if prev is None:
                continue
            vbit = 1 << v
            if active & vbit:
                bag = base + (in_[v] & S & ~active & ~vbit).bit_count()
            else:
                bag = base + 1 + (in_[v] & S & ~active & ~vbit).bit_count()
            cost = prev if prev > bag else bag
            if best is None or cost < best:
                best = cost
                best_v = v
        g[S] = best
        if witness:
            parent[S] = best_v
    width = g[full] - 1
    if not witness:
        return width
    order = []
    S = full
    while S:
        v = parent[S]
        order.append(v)
        S ^= 1 << v
    order.reverse()
    bags = []
    placed = 0
    for v in order:
        placed |= 1 << v
        notS = ~placed & full
        bag = {v}
        for u in bits(placed):
            if u != v and out[u] & (notS | (1 << v)):
                bag.add(u)
        bags.append(frozenset(bag))
    return width, tuple(bags)


def exact_cutwidth(D: SemiCompleteDigraph, witness: bool = False):
    """Exact cutwidth by subset DP over prefixes of the vertex order."""
    _check_budget(D.n, BUDGET.cutwidth_max_n, "cutwidth")
    n = D.n
    full = D.full
    out = D.out
    cost = [0] * (full + 1)
    for S in range(1, full + 1):
        # arcs from outside S back into S
        c = 0
        notS = ~S & full
        for u in bits(notS):
            c += (out[u] & S).bit_count()
        cost[S] = c
    g = {0: 0}
    parent = {0: None} if witness else None
    for S in sorted(range(1, full + 1), key=lambda m: m.bit_count()):
        best = None
        best_v = None
        for v in bits(S):
            prev = g[S ^ (1 << v)]
            if best is None or prev < best:
                best = prev
                best_v = v
        # cost[full] is 0, so the final prefix never contributes a cut
        g[S] = max(best, cost[S])
        if witness:
            parent[S] = best_v
    width = g[full]
    if not witness:
        return width
    order = []
    S = full
    while S:
        v = parent[S]
        order.append(v)
        S ^= 1 << v
    order.reverse()
    return width, tuple(order)


def _simple_paths(D, start, goal, banned_vertices, banned_arcs):
    """Yield simple directed paths start->goal avoiding banned resources."""
    n = D.n
    stack = [(start, (start,), 1 << start)]
    while stack:
        v, path, used = stack.pop()
        if v == goal:
            yield path
            continue
        for w in bits(D.out[v]):
            if used >> w & 1:
                continue
            if w != goal and w in banned_vertices:
                continue
            if w == goal and goal in banned_vertices:
                continue
            if (v, w) in banned_arcs:
                continue
            stack.append((w, path + (w,), used | (1 << w)))


def brute_force_containment(
    H: PatternDigraph,
    T: SemiCompleteDigraph,
    mode: str,
    host_roots=(),
) -> bool:
    """Exhaustive containment test.

    ``mode`` is ``topological``, ``immersion``, or ``rooted-immersion``.
    Vertex images are injective in every mode; paths are edge-disjoint for
    immersions and additionally internally vertex-disjoint (avoiding all
    images) for topological containment.
    """
    if mode not in ("topological", "immersion", "rooted-immersion"):
        raise ValueError(f"unknown mode {mode!r}")
    _check_budget(T.n, BUDGET.containment_max_n, "containment")
    k = H.n
    if k == 0:
        return True
    if k > T.n:
        return False
    verts = list(range(T.n))
    rooted = mode == "rooted-immersion"
    if rooted and len(H.roots) != len(host_roots):
        raise ValueError("root lists must have matching lengths")

    def assignments():
        fixed = {}
        if rooted:
            for hu, tv in zip(H.roots, host_roots):
                fixed[hu] = tv
        free_h = [u for u in range(k) if u not in fixed]
        used = set(fixed.values())
        pool = [v for v in verts if v not in used]
        for perm in permutations(pool, len(free_h)):
            eta = dict(fixed)
            eta.update(zip(free_h, perm))
            yield eta

    arcs = list(H.arcs)

    def place_paths(eta, idx, used_arcs, used_interior):
        if idx == len(arcs):
            return True
        hu, hv = arcs[idx]
        s, t = eta[hu], eta[hv]
        if mode == "topological":
            images = set(eta.values())
            banned = used_interior | (images - {s, t})
        else:
            banned = set()
        for path in _simple_paths(T, s, t, banned, used_arcs):
            path_arcs = set(zip(path, path[1:]))
            if path_arcs & used_arcs:
                continue
            interior = set(path[1:-1])
            if mode == "topological" and (interior & used_interior or interior & set(eta.values())):
                continue
            if place_paths(
                eta,
                idx + 1,
                used_arcs | path_arcs,
                used_interior | interior if mode == "topological" else used_interior,
            ):
                return True
        return False

    for eta in assignments():
        ok = True
        for hu, hv in arcs:
            if eta[hu] == eta[hv]:
                ok = False
                break
        if not ok:
            continue
        if place_paths(eta, 0, set(), set()):
            return True
    return False


def brute_force_separations(D: SemiCompleteDigraph, max_order: int, predicate=None):
    """All separations of order <= max_order, optionally filtered.

    Enumerates A\\B over all subsets, then the small complement of B\\A
    within the arc-free region (a 2^n * poly filter).
    """
    _check_budget(D.n, 16, "separation enumeration")
    from .separations import Separation

    n = D.n
    full = D.full
    out = D.out
    found = []
    for P in range(full + 1):
        # vertices reachable from P in one arc cannot lie in B\A
        blocked = P
        for u in bits(P):
            blocked |= out[u]
        q_base = full & ~blocked
        fixed_cut = full & ~P & ~q_base
        room = max_order - fixed_cut.bit_count()
        if room < 0:
            continue
        q_list = list(bits(q_base))
        for drop_size in range(0, min(room, len(q_list)) + 1):
            for combo in combinations(q_list, drop_size):
                W = 0
                for v in combo:
                    W |= 1 << v
                Q = q_base & ~W
                a_mask = P | (full & ~P & ~Q)
                b_mask = full & ~P
                sep = Separation(a_mask, b_mask)
                if predicate is None or predicate(sep):
                    found.append(sep)
    return found


def brute_force_vdp(T: SemiCompleteDigraph, pairs, limit: int | None = None):
    """All systems of pairwise vertex-disjoint paths linking the given pairs.

    Returns a list of path tuples in a deterministic order.  Prunes partial
    systems whose remaining pairs are already disconnected.  ``limit`` stops
    the search once that many solutions are found.
    """
    _check_budget(T.n, BUDGET.vdp_max_n, "vertex-disjoint paths")
    pairs = list(pairs)
    solutions = []

    def reachable(src, dst, banned):
        if src in banned or dst in banned:
            return False
        seen = 1 << src
        frontier = 1 << src
        banned_mask = 0
        for v in banned:
            banned_mask |= 1 << v
        while frontier:
            nxt = 0
            for v in bits(frontier):
                nxt |= T.out[v]
            nxt &= ~seen & ~banned_mask
            if (nxt >> dst) & 1:
                return True
            seen |= nxt
            frontier = nxt
        return (seen >> dst) & 1 == 1

    def extend(idx, used, acc):
        if limit is not None and len(solutions) >= limit:
            return
        if idx == len(pairs):
            solutions.append(tuple(acc))
            return
        s, t = pairs[idx]
        if s in used or t in used:
            return

        def dfs(v, path, pused):
            if limit is not None and len(solutions) >= limit:
                return
            for w in sorted(bits(T.out[v])):
                if w == t:
                    acc.append(tuple(path) + (t,))
                    extend(idx + 1, used | pused, acc)
                    acc.pop()
                    continue
                if w in used or w in pused:
                    continue
                # prune: target still reachable, later pairs still linkable
                new_pused = pused | {w}
                if not reachable(w, t, (used | new_pused) - {w, t}):
                    continue
                dead = False
                for s2, t2 in pairs[idx + 1 :]:
                    if s2 in new_pused or s2 in used or t2 in new_pused or t2 in used:
                        dead = True
                        break
                    if not reachable(s2, t2, (used | new_pused) - {s2, t2}):
                        dead = True
                        break
                if dead:
                    continue
                path.append(w)
                dfs(w, path, new_pused)
                path.pop()

        dfs(s, [s], {s, t})

    extend(0, set(), [])
    return solutions
