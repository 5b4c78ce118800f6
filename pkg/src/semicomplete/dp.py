"""Signature dynamic programming for rooted immersion and topological containment.

The table state of a partial model on a separation (A, B) records, per
pattern vertex, a placement (a cut vertex, the forgotten marker F, or the
unknown marker U) and, per pattern edge, the endpoint signature of its
maximal subpaths inside A, plus an equivalence relation tying F-beginnings
that stand for the same forgotten vertex.  The host being semi-complete is
what makes the markers sufficient: a future vertex always has an arc into
any forgotten vertex, so only the identity of shared forgotten entry points
matters, not the vertices themselves.

Two engineering choices keep the tables at desk scale:

* forward propagation: only states realizable as genuine partial models are
  materialized, instead of the astronomically loose full enumeration (which
  still guards ``enumerate_signatures``);
* subpath order is quotiented away: a signature here is a multiset of
  endpoint pairs with designated start/end pairs (set once the corresponding
  pattern endpoint is placed).  The visit order of not-yet-connected
  subpaths is not committed by any past choice, so states differing only in
  that order are interchangeable; stitching decides the order later.  The
  standalone ``enumerate_signatures`` keeps the ordered form.

State invariants:

* per edge, every cut vertex appears at most once among pair entries (the
  two entries of a one-vertex pair ``(x, x)`` count as one appearance);
* a pair end may be F exactly when the edge's head is placed at F, and that
  pair is the designated end;
* a placed tail begins the designated start pair and a placed head ends the
  designated end pair (F markers when the placement is F); edges with a
  placed endpoint have non-empty signatures;
* placements on cut vertices are injective;
* the equivalence classes partition exactly the F-beginning pairs, at most
  one pair per edge per class; the start pairs of all out-edges of an
  F-placed tail share one class, and distinct F-placed tails get distinct
  classes.

In topological mode a host vertex plays at most one role (image, subpath
endpoint, or interior); interiors leave the signature, so a consumed-vertex
mask rides along with the state.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

from .digraph import PatternDigraph, SemiCompleteDigraph
from .errors import BudgetExceededError, InputFormatError
from .pathwidth import PathDecomposition, verify_path_decomposition

__all__ = [
    "NicePathDecomposition",
    "make_nice",
    "signature_space_bound",
    "enumerate_signatures",
    "dp_rooted_immersion",
    "dp_topological_containment",
    "Model",
    "verify_model",
    "DEFAULT_STATE_BUDGET",
]

U = -1
F = -2

DEFAULT_STATE_BUDGET = 10_000_000


@dataclass(frozen=True)
class NicePathDecomposition:
    """Introduce/Forget event sequence; the implied first and last bags are empty."""

    n: int
    events: tuple

    def bags(self):
        cur = frozenset()
        out = [cur]
        for op, v in self.events:
            cur = cur | {v} if op == "intro" else cur - {v}
            out.append(cur)
        return out


def make_nice(decomposition) -> NicePathDecomposition:
    """Forget-then-introduce between consecutive bags; 2|V| events total."""
    bags = (
        decomposition.bags
        if isinstance(decomposition, PathDecomposition)
        else tuple(frozenset(b) for b in decomposition)
    )
    if not bags:
        raise InputFormatError("cannot make an empty decomposition nice")
    first = {}
    last = {}
    for i, bag in enumerate(bags):
        for v in bag:
            first.setdefault(v, i)
            last[v] = i
    for v, lo in first.items():
        for i in range(lo, last[v] + 1):
            if v not in bags[i]:
                raise InputFormatError(f"vertex {v} has a non-contiguous bag interval")
    events = []
    cur = set()
    for bag in bags:
        for v in sorted(cur - bag):
            events.append(("forget", v))
            cur.discard(v)
        for v in sorted(bag - cur):
            events.append(("intro", v))
            cur.add(v)
    for v in sorted(cur):
        events.append(("forget", v))
    n = len(first)
    if len(events) != 2 * n:
        raise InputFormatError("vertices must be introduced and forgotten exactly once")
    return NicePathDecomposition(n, tuple(events))


def _bell(n: int) -> int:
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


def signature_space_bound(k: int, ell: int, m: int) -> int:
    """Loose enumeration bound for |V(H)| = k, |E(H)| = ell, cut size m."""
    per_edge = (m + 2) ** m * factorial(m) * (m + 2)
    return (m + 2) ** k * per_edge**ell * _bell((m + 1) * ell)


# ---------------------------------------------------------------------------
# states
#
# A pair record is (b, e, is_start, is_end, label); label is -1 unless b is
# F.  An edge signature is a tuple of records sorted by (b, e, flags); the
# whole state is (placements, edge_signatures, consumed_mask) after label
# canonicalization.


def _sort_records(records):
    """Canonical record order plus the source index of each slot."""
    order = sorted(range(len(records)), key=lambda i: records[i][:4])
    return tuple(records[i] for i in order), tuple(order)


def _canon(place, edges, consumed):
    mapping = {}
    out = []
    for records in edges:
        row = []
        for b, e, s, en, lbl in records:
            if lbl < 0:
                row.append((b, e, s, en, -1))
            else:
                if lbl not in mapping:
                    mapping[lbl] = len(mapping)
                row.append((b, e, s, en, mapping[lbl]))
        out.append(tuple(row))
    return (tuple(place), tuple(out), consumed)


class _Ctx:
    __slots__ = ("arcs", "kv", "T", "mode", "root_image", "pattern_roots")

    def __init__(self, H: PatternDigraph, T: SemiCompleteDigraph, mode: str, host_roots):
        self.arcs = list(H.arcs)
        self.kv = H.n
        self.T = T
        self.mode = mode
        self.root_image = {tv: hu for hu, tv in zip(H.roots, host_roots)}
        self.pattern_roots = set(H.roots)


def _initial_state(ctx):
    return (tuple([U] * ctx.kv), tuple(() for _ in ctx.arcs), 0)


def _accept_state(ctx):
    place = tuple([F] * ctx.kv)
    tail_class = {}
    edges = []
    for t, _h in ctx.arcs:
        tail_class.setdefault(t, len(tail_class))
        edges.append(((F, F, True, True, tail_class[t]),))
    return _canon(place, tuple(edges), 0)


# ---------------------------------------------------------------------------
# introduce transitions
#
# One action per edge; an action is
#   (proto_records, out_vs, out_cls, in_vs, demoted, uses_v, op)
# where proto_records are the unsorted new records, out_vs / in_vs are cut
# vertices whose arc with v is consumed, out_cls are class labels whose arc
# into the shared forgotten vertex is consumed, and demoted are endpoints
# that became interiors (tracked in topological mode).  ``op`` drives the
# witness replay and refers to indices of the predecessor's record order.


def _edge_actions(ctx, records, v, role, tail_anchored, head_anchored):
    T = ctx.T
    acts = []
    n = len(records)

    if role == "none":
        return [(records, (), (), (), (), False, ("same",))]

    if role == "out":
        # the path starts at v: create or adopt the start pair
        acts.append(
            (records + ((v, v, True, False, -1),), (), (), (), (), True, ("new", False))
        )
        for i, (b, e, s, en, lbl) in enumerate(records):
            newrec = (v, e, True, en, -1)
            rest = records[:i] + records[i + 1 :]
            if b == F:
                acts.append((rest + (newrec,), (), (lbl,), (), (), True, ("front", i)))
            elif T.has_arc(v, b):
                demoted = (b,) if ctx.mode == "topological" else ()
                acts.append((rest + (newrec,), (b,), (), (), demoted, True, ("front", i)))
        return acts

    if role == "in":
        acts.append(
            (records + ((v, v, False, True, -1),), (), (), (), (), True, ("new", False))
        )
        for i, (b, e, s, en, lbl) in enumerate(records):
            if e == F:
                continue
            if T.has_arc(e, v):
                demoted = (e,) if ctx.mode == "topological" else ()
                newrec = (b, v, s, True, lbl)
                rest = records[:i] + records[i + 1 :]
                acts.append((rest + (newrec,), (), (), (e,), demoted, True, ("back", i)))
        return acts

    # role == "free"
    acts.append((records, (), (), (), (), False, ("same",)))
    for i, (b, e, s, en, lbl) in enumerate(records):
        if not (s and tail_anchored):
            newrec = (v, e, s, en, -1)
            rest = records[:i] + records[i + 1 :]
            if b == F:
                acts.append((rest + (newrec,), (), (lbl,), (), (), True, ("front", i)))
            elif T.has_arc(v, b):
                demoted = (b,) if ctx.mode == "topological" else ()
                acts.append((rest + (newrec,), (b,), (), (), demoted, True, ("front", i)))
        if e != F and not (en and head_anchored) and T.has_arc(e, v):
            demoted = (e,) if ctx.mode == "topological" else ()
            newrec = (b, v, s, en, lbl)
            rest = records[:i] + records[i + 1 :]
            acts.append((rest + (newrec,), (), (), (e,), demoted, True, ("back", i)))
        # stitch pair i onto pair j through v
        if e == F or en:
            continue
        for j, (b2, e2, s2, en2, lbl2) in enumerate(records):
            if j == i or s2:
                continue
            if not T.has_arc(e, v):
                continue
            merged = (b, e2, s, en2, lbl)
            rest = tuple(r for idx, r in enumerate(records) if idx not in (i, j))
            if b2 == F:
                demoted = (e, v) if ctx.mode == "topological" else ()
                acts.append(
                    (rest + (merged,), (), (lbl2,), (e,), demoted, True, ("merge", i, j))
                )
            elif T.has_arc(v, b2):
                demoted = (e, b2, v) if ctx.mode == "topological" else ()
                acts.append(
                    (rest + (merged,), (b2,), (), (e,), demoted, True, ("merge", i, j))
                )
    acts.append(
        (records + ((v, v, False, False, -1),), (), (), (), (), True, ("new", None))
    )
    return acts


def _intro_successors(ctx, state, v, action_cache):
    """Yield (successor, action_record) pairs for introducing host vertex v."""
    place, edges, consumed = state
    forced = ctx.root_image.get(v)
    if forced is not None:
        if place[forced] != U:
            return
        placements = [forced]
    else:
        placements = [None] + [
            u for u in range(ctx.kv) if place[u] == U and u not in ctx.pattern_roots
        ]
    n_edges = len(ctx.arcs)
    for pu in placements:
        options = []
        for ei, (t, h) in enumerate(ctx.arcs):
            if pu is not None and t == pu:
                role = "out"
            elif pu is not None and h == pu:
                role = "in"
            elif pu is not None and ctx.mode == "topological":
                role = "none"
            else:
                role = "free"
            ta = place[t] != U
            ha = place[h] != U
            key = (edges[ei], role, ta, ha)
            got = action_cache.get(key)
            if got is None:
                got = _edge_actions(ctx, edges[ei], v, role, ta, ha)
                action_cache[key] = got
            options.append(got)
        new_place = list(place)
        if pu is not None:
            new_place[pu] = v
        base_place = tuple(new_place)

        stack = [(0, (), frozenset(), frozenset(), frozenset(), (), 0, ())]
        while stack:
            ei, acc, used_out, used_cls, used_in, demoted, v_used, descr = stack.pop()
            if ei == n_edges:
                new_consumed = consumed
                if ctx.mode == "topological":
                    for d in demoted:
                        new_consumed |= 1 << d
                yield _canon(base_place, acc, new_consumed), (pu, descr)
                continue
            for proto, out_vs, out_cls, in_vs, dem, uses, op in options[ei]:
                if ctx.mode == "topological" and pu is None and uses and v_used >= 1:
                    continue
                if any(x in used_out for x in out_vs):
                    continue
                if any(x in used_cls for x in out_cls):
                    continue
                if any(x in used_in for x in in_vs):
                    continue
                sorted_recs, src = _sort_records(proto)
                stack.append(
                    (
                        ei + 1,
                        acc + (sorted_recs,),
                        used_out | set(out_vs),
                        used_cls | set(out_cls),
                        used_in | set(in_vs),
                        demoted + dem,
                        v_used + (1 if uses else 0),
                        descr + ((op, src),),
                    )
                )


# ---------------------------------------------------------------------------
# forget transitions


def _forget_successor(ctx, state, w):
    place, edges, consumed = state
    uw = None
    for u in range(ctx.kv):
        if place[u] == w:
            uw = u
            break
    FRESH = 1 << 20  # renumbered by _canon; genuine labels stay far below
    new_edges = []
    perms = []
    for ei, records in enumerate(edges):
        _t, h = ctx.arcs[ei]
        proto = []
        for b, e, s, en, lbl in records:
            nb, ne, nl = b, e, lbl
            if b == w and e == w:
                # a one-vertex subpath at w survives only as the path's end
                if uw is not None and h == uw and en:
                    nb, ne, nl = F, F, FRESH
                else:
                    return None, None
            elif b == w:
                nb, nl = F, FRESH
            elif e == w:
                # leaving w after its forget is impossible unless the path ends there
                if uw is not None and h == uw and en:
                    ne = F
                else:
                    return None, None
            proto.append((nb, ne, s, en, nl))
        sorted_recs, src = _sort_records(tuple(proto))
        new_edges.append(sorted_recs)
        perms.append(src)
    new_place = list(place)
    if uw is not None:
        new_place[uw] = F
    state2 = _canon(tuple(new_place), tuple(new_edges), consumed & ~(1 << w))
    return state2, tuple(perms)


# ---------------------------------------------------------------------------
# driver and witness replay


def _replay_edge(frags, op, src, v):
    kind = op[0]
    if kind == "same":
        out = list(frags)
    elif kind == "new":
        out = list(frags) + [[v]]
    elif kind == "front":
        i = op[1]
        out = [f for idx, f in enumerate(frags) if idx != i] + [[v] + frags[i]]
    elif kind == "back":
        i = op[1]
        out = [f for idx, f in enumerate(frags) if idx != i] + [frags[i] + [v]]
    elif kind == "merge":
        i, j = op[1], op[2]
        out = [f for idx, f in enumerate(frags) if idx not in (i, j)] + [
            frags[i] + [v] + frags[j]
        ]
    else:
        raise AssertionError(f"unknown replay op {op!r}")
    return [out[s] for s in src]


def _viable(ctx, state, future_mask, remaining_intros):
    """Sound forward pruning: drop states whose outstanding obligations
    provably exceed the remaining introduce steps.

    Every unknown placement needs one future vertex; an edge with p pairs
    needs p - 1 stitching steps; a pair end at a cut vertex must later leave
    via an arc into the future (one distinct arc per pair), a non-start pair
    beginning likewise needs an arc from the future; the members of an
    equivalence class need pairwise distinct future extenders.
    """
    place, edges, _consumed = state
    T = ctx.T
    if sum(1 for p in place if p == U) > remaining_intros:
        return False
    class_members = {}
    for records in edges:
        if len(records) - 1 > remaining_intros:
            return False
        ends_at = {}
        begins_at = {}
        for b, e, s, en, lbl in records:
            if e >= 0 and not en:
                ends_at[e] = ends_at.get(e, 0) + 1
            if b >= 0 and not s:
                begins_at[b] = begins_at.get(b, 0) + 1
            if b == F and not s:
                class_members[lbl] = class_members.get(lbl, 0) + 1
        for e, cnt in ends_at.items():
            if (T.out[e] & future_mask).bit_count() < cnt:
                return False
        for b, cnt in begins_at.items():
            if (T.in_[b] & future_mask).bit_count() < cnt:
                return False
    for cnt in class_members.values():
        if cnt > remaining_intros:
            return False
    return True


def _run_dp(H, T, decomposition, mode, host_roots, budget, want_witness):
    if any(u == v for u, v in H.arcs):
        raise InputFormatError("pattern must be loop-free; run subdivide_loops first")
    ok, _width = verify_path_decomposition(T, decomposition.bags)
    if not ok:
        raise InputFormatError("invalid path decomposition for the host")
    nice = make_nice(decomposition)
    ctx = _Ctx(H, T, mode, host_roots)
    if H.n == 0:
        return True, Model({}, ())
    frontier = {_initial_state(ctx): None}
    layers = [frontier] if want_witness else None
    future = T.full
    remaining = sum(1 for op, _x in nice.events if op == "intro")
    for op, x in nice.events:
        nxt = {}
        if op == "intro":
            future &= ~(1 << x)
            remaining -= 1
            cache = {}
            for state in frontier:
                for succ, action in _intro_successors(ctx, state, x, cache):
                    if succ not in nxt and _viable(ctx, succ, future, remaining):
                        nxt[succ] = (state, ("intro", x, action)) if want_witness else None
        else:
            for state in frontier:
                succ, perms = _forget_successor(ctx, state, x)
                if succ is not None and succ not in nxt and _viable(
                    ctx, succ, future, remaining
                ):
                    nxt[succ] = (state, ("forget", x, perms)) if want_witness else None
        if len(nxt) > budget:
            raise BudgetExceededError(
                f"DP frontier exceeded {budget} states at event ({op}, {x})",
                estimate=len(nxt),
                budget=budget,
            )
        frontier = nxt
        if want_witness:
            layers.append(frontier)
    goal = _accept_state(ctx)
    if goal not in frontier:
        return False, None
    if not want_witness:
        return True, None
    chain = []
    state = goal
    for depth in range(len(layers) - 1, 0, -1):
        prev_state, action = layers[depth][state]
        chain.append(action)
        state = prev_state
    chain.reverse()
    eta = {}
    fragments = [[] for _ in ctx.arcs]
    for action in chain:
        kind, x, payload = action
        if kind == "forget":
            fragments = [
                [frags[s] for s in src] for frags, src in zip(fragments, payload)
            ]
            continue
        pu, descr = payload
        if pu is not None:
            eta[pu] = x
        fragments = [
            _replay_edge(frags, op, src, x)
            for frags, (op, src) in zip(fragments, descr)
        ]
    paths = []
    for frags in fragments:
        if len(frags) != 1:
            raise AssertionError("witness replay did not yield a single path per edge")
        paths.append(tuple(frags[0]))
    return True, Model(dict(eta), tuple(paths))


def dp_rooted_immersion(
    H: PatternDigraph,
    T: SemiCompleteDigraph,
    decomposition: PathDecomposition,
    host_roots=(),
    budget: int = DEFAULT_STATE_BUDGET,
    want_witness: bool = False,
):
    """Decide rooted immersion of H into T along a path decomposition.

    Roots of H map to ``host_roots`` in order; paths are edge-disjoint and
    vertex images injective.  Returns the answer, or ``(answer, model)``
    when a witness is requested.
    """
    if len(H.roots) != len(host_roots):
        raise InputFormatError("root lists must have matching lengths")
    if len(set(host_roots)) != len(host_roots):
        raise InputFormatError("host roots must be distinct")
    for tv in host_roots:
        if not 0 <= tv < T.n:
            raise InputFormatError(f"host root {tv} out of range")
    ans, model = _run_dp(H, T, decomposition, "immersion", host_roots, budget, want_witness)
    return (ans, model) if want_witness else ans


def dp_topological_containment(
    H: PatternDigraph,
    T: SemiCompleteDigraph,
    decomposition: PathDecomposition,
    budget: int = DEFAULT_STATE_BUDGET,
    want_witness: bool = False,
):
    """Decide topological containment of H in T along a path decomposition.

    Paths are internally vertex-disjoint and arc-disjoint; vertex images are
    injective.
    """
    ans, model = _run_dp(H, T, decomposition, "topological", (), budget, want_witness)
    return (ans, model) if want_witness else ans


# ---------------------------------------------------------------------------
# models


@dataclass(frozen=True)
class Model:
    """Vertex images plus one host path per pattern edge, in arc order."""

    vertex_map: dict
    edge_paths: tuple


def verify_model(
    H: PatternDigraph,
    T: SemiCompleteDigraph,
    model: Model,
    mode: str,
    host_roots=(),
) -> bool:
    """Check paths, endpoints, root preservation, and the mode's disjointness."""
    if mode not in ("topological", "immersion", "rooted-immersion"):
        raise InputFormatError(f"unknown mode {mode!r}")
    eta = model.vertex_map
    if sorted(eta.keys()) != list(range(H.n)):
        return False
    if len(set(eta.values())) != H.n:
        return False
    if not all(0 <= x < T.n for x in eta.values()):
        return False
    if mode == "rooted-immersion":
        if len(host_roots) != len(H.roots):
            return False
        for hu, tv in zip(H.roots, host_roots):
            if eta[hu] != tv:
                return False
    if len(model.edge_paths) != len(H.arcs):
        return False
    used_arcs = set()
    used_interior = set()
    images = set(eta.values())
    for (t, h), path in zip(H.arcs, model.edge_paths):
        if len(path) < 2 or path[0] != eta[t] or path[-1] != eta[h]:
            return False
        if len(set(path)) != len(path):
            return False
        for a, b in zip(path, path[1:]):
            if not T.has_arc(a, b):
                return False
            if (a, b) in used_arcs:
                return False
            used_arcs.add((a, b))
        if mode == "topological":
            interior = set(path[1:-1])
            if interior & images or interior & used_interior:
                return False
            used_interior |= interior
    return True


# ---------------------------------------------------------------------------
# standalone signature enumeration (ordered, per the table-state definition)


def enumerate_signatures(H: PatternDigraph, cut, budget: int = DEFAULT_STATE_BUDGET):
    """All valid immersion signatures of H over the given cut, each once.

    Signatures here keep the subpath order (the table-state definition); the
    DP itself runs on the order quotient.  Validity follows the module-level
    invariants.  Refuses when the loose cardinality bound exceeds the
    budget, reporting the estimate.  Deterministic order.
    """
    if any(u == v for u, v in H.arcs):
        raise InputFormatError("pattern must be loop-free")
    cut = sorted(set(cut))
    m = len(cut)
    arcs = list(H.arcs)
    bound = signature_space_bound(H.n, len(arcs), m)
    if bound > budget:
        raise BudgetExceededError(
            f"signature bound {bound} exceeds budget {budget}",
            estimate=bound,
            budget=budget,
        )

    placements = []

    def gen_place(idx, cur, used):
        if idx == H.n:
            placements.append(tuple(cur))
            return
        for val in [U, F] + cut:
            if val >= 0 and val in used:
                continue
            cur.append(val)
            gen_place(idx + 1, cur, used | {val} if val >= 0 else used)
            cur.pop()

    gen_place(0, [], set())

    def edge_sigs(t_place, h_place):
        out = []

        def accept(seq):
            if not seq:
                return t_place == U and h_place == U
            b0 = seq[0][0]
            eh = seq[-1][1]
            if t_place == F and b0 != F:
                return False
            if t_place >= 0 and b0 != t_place:
                return False
            if h_place == F and eh != F:
                return False
            if h_place >= 0 and eh != h_place:
                return False
            if eh == F and h_place != F:
                return False
            return True

        def gen(seq, used):
            if accept(seq):
                out.append(tuple(seq))
            if len(seq) > m or (seq and seq[-1][1] == F):
                return
            for b in [F] + cut:
                if b != F and b in used:
                    continue
                for e in [F] + cut:
                    if e != F and e != b and e in used:
                        continue
                    used_now = {x for x in (b, e) if x != F}
                    seq.append((b, e))
                    gen(seq, used | used_now)
                    seq.pop()

        gen([], set())
        return out

    def partitions(items):
        if not items:
            yield []
            return
        first, rest = items[0], items[1:]
        for sub in partitions(rest):
            for i in range(len(sub)):
                yield sub[:i] + [sub[i] + [first]] + sub[i + 1 :]
            yield [[first]] + sub

    results = []
    seen = set()
    for place in placements:
        per_edge = []
        feasible = True
        for t, h in arcs:
            choices = edge_sigs(place[t], place[h])
            if not choices:
                feasible = False
                break
            per_edge.append(choices)
        if not feasible:
            continue

        def assemble(ei, acc):
            if ei == len(arcs):
                yield tuple(acc)
                return
            for choice in per_edge[ei]:
                acc.append(choice)
                yield from assemble(ei + 1, acc)
                acc.pop()

        for sigs in assemble(0, []):
            fpos = [
                (ei, pi)
                for ei, sig in enumerate(sigs)
                for pi, (b, _e) in enumerate(sig)
                if b == F
            ]
            anchored_tail = {}
            for ei, (t, _h) in enumerate(arcs):
                if place[t] == F:
                    anchored_tail[(ei, 0)] = t
            by_tail = {}
            for p, t in anchored_tail.items():
                by_tail.setdefault(t, set()).add(p)
            for part in partitions(fpos):
                ok = True
                for cls in part:
                    edges_in = [e for e, _p in cls]
                    if len(set(edges_in)) != len(edges_in):
                        ok = False
                        break
                    tails = {anchored_tail[p] for p in cls if p in anchored_tail}
                    if len(tails) > 1:
                        ok = False
                        break
                    if tails:
                        (t,) = tails
                        if not by_tail[t] <= set(cls):
                            ok = False
                            break
                if not ok:
                    continue
                key = (place, sigs, tuple(tuple(sorted(cls)) for cls in map(sorted, part)))
                labels = {}
                for ci, cls in enumerate(part):
                    for pos in cls:
                        labels[pos] = ci
                canon_labels = tuple(
                    tuple(labels.get((ei, pi), -1) for pi in range(len(sig)))
                    for ei, sig in enumerate(sigs)
                )
                # renumber by first appearance for canonical identity
                remap = {}
                final_labels = []
                for row in canon_labels:
                    new_row = []
                    for lbl in row:
                        if lbl < 0:
                            new_row.append(-1)
                        else:
                            if lbl not in remap:
                                remap[lbl] = len(remap)
                            new_row.append(remap[lbl])
                    final_labels.append(tuple(new_row))
                sig_state = (place, sigs, tuple(final_labels))
                if sig_state not in seen:
                    seen.add(sig_state)
                    results.append(sig_state)
    return results
