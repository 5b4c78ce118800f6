"""End-to-end solvers: topological containment, rooted immersion, and
vertex-deletion distance to an immersion-closed class.

All three follow the same WIN/WIN loop: approximate pathwidth at a deepening
parameter; a narrow decomposition feeds the signature DP, a large obstacle
either certifies the answer outright (a big enough verified triple
topologically contains the pattern) or yields an irrelevant vertex to
delete.  The theoretical thresholds behind the existence guarantees are
towers (f(1) = 2^48), so the drivers deepen iteratively instead and stay
sound by verifying every positive witness and deciding every negative via
the exact DP; running out of affordable moves is reported as exhaustion,
distinct from a NO.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb

from .digraph import (
    PatternDigraph,
    RootedHost,
    SemiCompleteDigraph,
    induced_subdigraph,
)
from .dp import (
    DEFAULT_STATE_BUDGET,
    dp_rooted_immersion,
    dp_topological_containment,
    verify_model,
)
from .errors import BudgetExceededError, InputFormatError
from .irrelevant import find_irrelevant_vertex, flow_checkable, p_threshold, _rooted_answer
from .pathwidth import PathDecomposition, approximate_pathwidth, verify_path_decomposition
from .triples import embed_in_triple, f_threshold_log2, find_large_triple, verify_triple

__all__ = [
    "SolveReport",
    "solve_topological_containment",
    "solve_rooted_immersion",
    "solve_pi_kv",
]


@dataclass(frozen=True)
class SolveReport:
    answer: bool | None
    status: str  # "decided" or "exhausted"
    method: str
    certificate: dict = field(default_factory=dict)
    iterations: int = 0
    deletions: tuple = ()
    notes: tuple = ()

    @property
    def decided(self) -> bool:
        return self.status == "decided"


def _deepening_ks(n: int):
    # above a few dozen vertices the refinement layers cannot produce a
    # DP-narrow decomposition anyway (the width guarantee is 4k^2 + 7k), so
    # only the component-prefix level is worth paying for
    if n > 40:
        return [1]
    ks = []
    k = 1
    while True:
        ks.append(k)
        if 4 * k * k + 7 * k >= n - 1 or k >= n:
            break
        k *= 2
    return ks


def solve_topological_containment(
    H: PatternDigraph,
    T: SemiCompleteDigraph,
    profile: str = "opportunistic",
    budget: int = DEFAULT_STATE_BUDGET,
) -> SolveReport:
    """Decide whether H is topologically contained in T.

    Every YES carries a verified witness (an embedding into a verified
    triple, or a DP model); every NO comes from the exact DP on a verified
    decomposition.  The triple branch needs parts of size
    max(|V(H)|, |E(H)|), which the embedding construction actually uses.
    """
    if profile not in ("opportunistic", "theoretical"):
        raise InputFormatError(f"unknown profile {profile!r}")
    needed = max(H.n, len(H.arcs), 1)
    if H.n == 0:
        return SolveReport(True, "decided", "trivial")
    notes = []
    iterations = 0
    saw_wide_decomposition = False
    for k in _deepening_ks(T.n):
        iterations += 1
        result = approximate_pathwidth(T, k, use_shortcut=False)
        if result.kind == "jungle":
            jungle = result.jungle
            if len(jungle.vertices).bit_length() > f_threshold_log2(H.size):
                return SolveReport(
                    True,
                    "decided",
                    "jungle-threshold",
                    certificate={"jungle": jungle.vertices},
                    iterations=iterations,
                    notes=tuple(notes),
                )
            triple = find_large_triple(
                T, needed, opportunistic=(profile != "theoretical")
            )
            if triple is not None:
                model = embed_in_triple(H, triple)
                if not verify_model(H, T, model, "topological"):
                    raise RuntimeError("triple embedding failed verification")
                return SolveReport(
                    True,
                    "decided",
                    "triple-embedding",
                    certificate={
                        "triple": (triple.a, triple.b, triple.c),
                        "model": model,
                    },
                    iterations=iterations,
                    notes=tuple(notes),
                )
            notes.append(f"k={k}: jungle but no size-{needed} triple")
            continue
        dec = result.decomposition
        try:
            ans, model = dp_topological_containment(
                H, T, dec, budget=budget, want_witness=True
            )
        except BudgetExceededError as exc:
            notes.append(f"k={k}: DP over budget ({exc.estimate} states)")
            saw_wide_decomposition = True
            continue
        if ans and not verify_model(H, T, model, "topological"):
            raise RuntimeError("DP witness failed verification")
        return SolveReport(
            ans,
            "decided",
            "dp",
            certificate={"decomposition": dec.bags, "model": model},
            iterations=iterations,
            notes=tuple(notes),
        )
    if saw_wide_decomposition:
        triple = find_large_triple(T, needed, opportunistic=(profile != "theoretical"))
        if triple is not None:
            model = embed_in_triple(H, triple)
            if verify_model(H, T, model, "topological"):
                return SolveReport(
                    True,
                    "decided",
                    "triple-embedding",
                    certificate={"triple": (triple.a, triple.b, triple.c), "model": model},
                    iterations=iterations,
                    notes=tuple(notes),
                )
    return SolveReport(
        None, "exhausted", "none", iterations=iterations, notes=tuple(notes)
    )


def solve_rooted_immersion(
    H: PatternDigraph,
    rooted_host: RootedHost,
    profile: str = "opportunistic",
    budget: int = DEFAULT_STATE_BUDGET,
) -> SolveReport:
    """Decide rooted immersion of H into the rooted host.

    Iterates at most |V(T)| times: a narrow decomposition of the host minus
    its roots (re-adding the roots to every bag) feeds the DP; a large
    obstacle yields a verified triple of size p(number of pattern arcs) and
    an irrelevant vertex, which is deleted before the next round.  When
    neither move is affordable, flow-checkable patterns are decided exactly
    by max flow; anything else is reported as exhausted.
    """
    if profile not in ("opportunistic", "theoretical"):
        raise InputFormatError(f"unknown profile {profile!r}")
    if len(H.roots) != len(rooted_host.roots):
        raise InputFormatError("root lists must have matching lengths")
    k_irr = max(1, len(H.arcs))
    need_triple = p_threshold(k_irr)
    notes = []
    deletions = []
    cur = rooted_host
    for iteration in range(rooted_host.host.n):
        T = cur.host
        roots = cur.roots
        non_roots = [v for v in range(T.n) if v not in roots]
        dec = None
        jungle_seen = False
        if not non_roots:
            dec = PathDecomposition((frozenset(range(T.n)),))
        else:
            sub, mapping = induced_subdigraph(T, non_roots)
            for k in _deepening_ks(sub.n):
                result = approximate_pathwidth(sub, k, use_shortcut=False)
                if result.kind == "decomposition":
                    bags = tuple(
                        frozenset(mapping[i] for i in bag) | set(roots)
                        for bag in result.decomposition.bags
                    )
                    dec = PathDecomposition(bags)
                    ok, _w = verify_path_decomposition(T, dec.bags)
                    if not ok:
                        raise RuntimeError("root re-insertion broke the decomposition")
                    break
                jungle_seen = True
        if dec is not None:
            try:
                ans, model = dp_rooted_immersion(
                    H, T, dec, host_roots=roots, budget=budget, want_witness=True
                )
                if ans and not verify_model(
                    H, T, model, "rooted-immersion", host_roots=roots
                ):
                    raise RuntimeError("DP witness failed verification")
                return SolveReport(
                    ans,
                    "decided",
                    "dp",
                    certificate={"decomposition": dec.bags, "model": model},
                    iterations=iteration + 1,
                    deletions=tuple(deletions),
                    notes=tuple(notes),
                )
            except BudgetExceededError as exc:
                notes.append(f"iteration {iteration}: DP over budget ({exc.estimate})")
        if jungle_seen or dec is None:
            triple = find_large_triple(
                T, need_triple, avoid=roots, opportunistic=(profile != "theoretical")
            )
            if triple is not None:
                report = find_irrelevant_vertex(H, cur, triple, k=k_irr)
                x = report.x
                sub2, mapping2 = induced_subdigraph(
                    T, [v for v in range(T.n) if v != x]
                )
                fwd = {v: i for i, v in enumerate(mapping2)}
                deletions.append(x)
                cur = RootedHost(sub2, tuple(fwd[r] for r in roots))
                continue
            notes.append(f"iteration {iteration}: no p({k_irr}) = {need_triple} triple")
        if flow_checkable(H):
            ans = _rooted_answer(H, cur)
            return SolveReport(
                ans,
                "decided",
                "flow",
                certificate={"paths": len(H.arcs)},
                iterations=iteration + 1,
                deletions=tuple(deletions),
                notes=tuple(notes),
            )
        return SolveReport(
            None,
            "exhausted",
            "none",
            iterations=iteration + 1,
            deletions=tuple(deletions),
            notes=tuple(notes),
        )
    return SolveReport(
        None,
        "exhausted",
        "deletion-limit",
        iterations=rooted_host.host.n,
        deletions=tuple(deletions),
        notes=tuple(notes),
    )


def _immerses(H: PatternDigraph, T: SemiCompleteDigraph, budget: int) -> bool:
    if H.n == 0:
        return True
    if T.n == 0 or H.n > T.n:
        return False
    if T.n <= 6:
        from .oracles import brute_force_containment

        return brute_force_containment(H, T, "immersion")
    from .oracles import BUDGET, exact_pathwidth

    if T.n <= BUDGET.pathwidth_max_n:
        _w, bags = exact_pathwidth(T, witness=True)
        dec = PathDecomposition(bags)
    else:
        result = approximate_pathwidth(T, 2, use_shortcut=False)
        if result.kind != "decomposition":
            result = approximate_pathwidth(T, 4)
        dec = result.decomposition
    return dp_rooted_immersion(H, T, dec, budget=budget)


def solve_pi_kv(
    T: SemiCompleteDigraph,
    k: int,
    obstructions,
    c_pi: int | None = None,
    budget: int = DEFAULT_STATE_BUDGET,
) -> SolveReport:
    """Can at most k vertices be deleted so no obstruction immerses?

    The obstruction family must be explicit and finite.  With a known class
    pathwidth bound ``c_pi``, a verified jungle of size c_pi + k + 2 gives an
    immediate NO; otherwise deletion sets are searched by size then
    lexicographically, which is brute force by design.
    """
    if k < 0:
        raise InputFormatError("deletion budget must be nonnegative")
    obstructions = list(obstructions)
    if not obstructions:
        return SolveReport(True, "decided", "no-obstructions", certificate={"deleted": ()})
    notes = []
    if c_pi is not None:
        kk = c_pi + k + 2
        result = approximate_pathwidth(T, kk, use_shortcut=False)
        if result.kind == "jungle":
            return SolveReport(
                False,
                "decided",
                "jungle-bound",
                certificate={"jungle": result.jungle.vertices},
                notes=tuple(notes),
            )
        notes.append(f"no ({kk})-jungle; falling back to deletion search")
    total = sum(comb(T.n, s) for s in range(0, min(k, T.n) + 1)) * len(obstructions)
    if total > 2_000_000:
        raise BudgetExceededError(
            f"deletion search needs about {total} containment tests",
            estimate=total,
            budget=2_000_000,
        )
    for size in range(0, min(k, T.n) + 1):
        for X in combinations(range(T.n), size):
            if size == T.n:
                return SolveReport(
                    True, "decided", "deletion-search", certificate={"deleted": X}
                )
            rest = [v for v in range(T.n) if v not in X]
            sub, _mapping = induced_subdigraph(T, rest)
            if any(_immerses(Hi, sub, budget) for Hi in obstructions):
                continue
            return SolveReport(
                True,
                "decided",
                "deletion-search",
                certificate={"deleted": X},
                notes=tuple(notes),
            )
    return SolveReport(False, "decided", "deletion-search", notes=tuple(notes))
