"""Derandomized covering families for the balanced-cut search.

A covering family for universe U and capacities (p, q) is a list of subsets
R such that every disjoint pair (A, B) with |A| <= p and |B| <= q is split
by some member: A inside R and B wholly outside.  Only the covering contract
matters downstream; construction strategy is a cost trade-off.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

from .digraph import bits
from .errors import BudgetExceededError

__all__ = ["CoveringFamily", "build_covering_family", "verify_covering_family"]

_DIRECT_LIMIT = 200_000
_VERIFY_PAIR_LIMIT = 10_000_000


@dataclass(frozen=True)
class CoveringFamily:
    universe: int
    p: int
    q: int
    masks: tuple
    strategy: str

    @property
    def subsets(self):
        return tuple(frozenset(bits(m)) for m in self.masks)

    def __len__(self):
        return len(self.masks)


def _direct_masks(u_size: int, p: int, q: int):
    """All subsets of size <= min(p, q), complemented when q is the small side.

    Covers because R = A (or R = U \\ B) always splits the pair; sizes beyond
    min(p, q) are unnecessary since shrinking A or B only helps.
    """
    full = (1 << u_size) - 1
    small = min(p, q)
    masks = []
    for size in range(0, min(small, u_size) + 1):
        for combo in combinations(range(u_size), size):
            m = 0
            for v in combo:
                m |= 1 << v
            masks.append(m if p <= q else full & ~m)
    return tuple(masks)


def _is_prime(x: int) -> bool:
    if x < 2:
        return False
    d = 2
    while d * d <= x:
        if x % d == 0:
            return False
        d += 1
    return True


def _hash_splitter_masks(u_size: int, p: int, q: int):
    """FKS-style family: x -> (a*x mod P) mod z^2 with per-function p-subsets.

    For the small side s = min(p, q), every s-subset is perfectly hashed by
    some multiplier a, so picking all preimage unions of s-element label sets
    yields the covering property; members are complemented when the small
    side is q.
    """
    s, big = (p, False) if p <= q else (q, True)
    full = (1 << u_size) - 1
    z = min(p + q, u_size)
    m = max(z * z, 1)
    P = max(u_size + 1, m + 1, 2)
    while not _is_prime(P):
        P += 1
    masks = []
    seen = set()
    for a in range(1, P):
        buckets = [0] * m
        for x in range(u_size):
            buckets[(a * x) % P % m] |= 1 << x
        for labels in combinations(range(m), min(s, m)):
            mask = 0
            for lb in labels:
                mask |= buckets[lb]
            if big:
                mask = full & ~mask
            if mask not in seen:
                seen.add(mask)
                masks.append(mask)
    # R = A itself is needed when |A| < s and padding cannot reach size s
    for size in range(0, min(s, u_size)):
        for combo in combinations(range(u_size), size):
            mask = 0
            for v in combo:
                mask |= 1 << v
            if big:
                mask = full & ~mask
            if mask not in seen:
                seen.add(mask)
                masks.append(mask)
    return tuple(masks)


def build_covering_family(u_size: int, p: int, q: int, strategy: str | None = None) -> CoveringFamily:
    """Build a covering family for (p, q) over universe ``range(u_size)``.

    Strategy ladder: a single-set family when min(p, q) = 0; direct
    enumeration of all small subsets (complement trick applied when p > q)
    while affordable; otherwise the prime-modulus hash splitter.  Emitted
    order is deterministic, so downstream searches are reproducible.
    """
    if p < 0 or q < 0 or u_size < 0:
        raise ValueError("capacities and universe size must be nonnegative")
    full = (1 << u_size) - 1
    if strategy is None:
        if p == 0 or q == 0:
            strategy = "one-set"
        else:
            small = min(p, q)
            cost = sum(comb(u_size, i) for i in range(0, min(small, u_size) + 1))
            if cost <= _DIRECT_LIMIT:
                strategy = "direct"
            else:
                z = min(p + q, u_size)
                hash_cost = (u_size + 2) * comb(max(z * z, 1), min(small, z * z))
                if min(cost, hash_cost) > 5_000_000:
                    raise BudgetExceededError(
                        f"covering family for ({u_size}, {p}, {q}) needs at least "
                        f"{min(cost, hash_cost)} members",
                        estimate=min(cost, hash_cost),
                        budget=5_000_000,
                    )
                strategy = "hash-splitter"
    if strategy == "one-set":
        masks = (0,) if p == 0 else (full,)
    elif strategy == "direct":
        masks = _direct_masks(u_size, p, q)
    elif strategy == "hash-splitter":
        masks = _hash_splitter_masks(u_size, p, q)
    else:
        raise ValueError(f"unknown covering-family strategy {strategy!r}")
    return CoveringFamily(u_size, p, q, masks, strategy)


def verify_covering_family(family: CoveringFamily, p: int, q: int) -> bool:
    """Exhaustively check the covering property for capacities (p, q).

    Refuses instances whose disjoint-pair count exceeds the enumeration
    guard, reporting the estimate.
    """
    u = family.universe
    pairs = 0
    for i in range(0, min(p, u) + 1):
        inner = sum(comb(u - i, j) for j in range(0, min(q, u - i) + 1))
        pairs += comb(u, i) * inner
    if pairs > _VERIFY_PAIR_LIMIT:
        raise BudgetExceededError(
            f"covering verification needs {pairs} pairs (limit {_VERIFY_PAIR_LIMIT})",
            estimate=pairs,
            budget=_VERIFY_PAIR_LIMIT,
        )
    masks = family.masks
    universe = list(range(u))
    for asize in range(0, min(p, u) + 1):
        for acombo in combinations(universe, asize):
            amask = 0
            for v in acombo:
                amask |= 1 << v
            rest = [v for v in universe if not (amask >> v) & 1]
            for bsize in range(0, min(q, len(rest)) + 1):
                for bcombo in combinations(rest, bsize):
                    bmask = 0
                    for v in bcombo:
                        bmask |= 1 << v
                    ok = False
                    for r in masks:
                        if (amask & ~r) == 0 and (bmask & r) == 0:
                            ok = True
                            break
                    if not ok:
                        return False
    return True
