"""Clique-width expressions from path decompositions.

A width-p decomposition yields a (p + 2)-label expression: active bag
vertices hold distinct labels 1..p+1, forgotten vertices share label p+2.
Introduction joins the new vertex to bag members per the host's arcs and to
the forgotten class when it dominates all forgotten vertices (always the
case in a semi-complete host, since forgotten-to-future arcs are impossible);
forgetting relabels to the forgotten class.  Whole-graph replay equality is
the correctness check.
"""

from __future__ import annotations

from dataclasses import dataclass

from .digraph import SemiCompleteDigraph, bits
from .errors import InputFormatError

__all__ = ["CliquewidthExpression", "cwexpr_from_decomposition", "evaluate_cwexpr"]


@dataclass(frozen=True)
class CliquewidthExpression:
    """Operation tree: intro i(v), union, relabel i->j, join i,j."""

    root: tuple
    label_count: int
    n: int


def cwexpr_from_decomposition(T: SemiCompleteDigraph, decomposition) -> CliquewidthExpression:
    from .dp import make_nice
    from .pathwidth import PathDecomposition, verify_path_decomposition

    bags = (
        decomposition.bags
        if isinstance(decomposition, PathDecomposition)
        else tuple(frozenset(b) for b in decomposition)
    )
    ok, width = verify_path_decomposition(T, bags)
    if not ok:
        raise InputFormatError("invalid path decomposition for this host")
    nice = make_nice(bags)
    forgotten_label = width + 2
    free = set(range(1, width + 2))
    label_of = {}
    forgotten = []
    expr = None
    used_labels = set()
    intros_left = sum(1 for op, _v in nice.events if op == "intro")
    for op, v in nice.events:
        if op == "intro":
            intros_left -= 1
            q = min(free)
            free.discard(q)
            used_labels.add(q)
            node = ("intro", q, v)
            expr = node if expr is None else ("union", expr, node)
            for w, qw in label_of.items():
                if T.has_arc(v, w):
                    expr = ("join", q, qw, expr)
                if T.has_arc(w, v):
                    expr = ("join", qw, q, expr)
            label_of[v] = q
            if forgotten and all(T.has_arc(v, w) for w in forgotten):
                expr = ("join", q, forgotten_label, expr)
                used_labels.add(forgotten_label)
        else:
            if intros_left == 0:
                # relabels after the last introduction cannot change the graph
                continue
            q = label_of.pop(v)
            expr = ("relabel", q, forgotten_label, expr)
            used_labels.add(forgotten_label)
            free.add(q)
            forgotten.append(v)
    return CliquewidthExpression(expr, len(used_labels), T.n)


def evaluate_cwexpr(expr: CliquewidthExpression):
    """Replay the tree; returns ``(vertices, arcs, labels)``.

    ``labels`` maps each vertex to its final label.
    """
    root = expr.root if isinstance(expr, CliquewidthExpression) else expr

    # iterative post-order evaluation; values are (labels: dict v->lbl, arcs: set)
    done = {}
    stack = [root]
    while stack:
        node = stack.pop()
        if id(node) in done:
            continue
        kind = node[0]
        if kind == "intro":
            _k, lbl, v = node
            done[id(node)] = ({v: lbl}, set())
            continue
        children = (
            [node[1], node[2]] if kind == "union" else [node[3]] if kind in ("join", "relabel") else None
        )
        if children is None:
            raise InputFormatError(f"unknown expression node {node[0]!r}")
        missing = [c for c in children if id(c) not in done]
        if missing:
            stack.append(node)
            stack.extend(missing)
            continue
        if kind == "union":
            l1, a1 = done[id(node[1])]
            l2, a2 = done[id(node[2])]
            overlap = set(l1) & set(l2)
            if overlap:
                raise InputFormatError(f"disjoint union reuses vertices {sorted(overlap)}")
            labels = dict(l1)
            labels.update(l2)
            done[id(node)] = (labels, a1 | a2)
        elif kind == "join":
            _k, i, j, child = node
            if i == j:
                raise InputFormatError("join requires two distinct labels")
            labels, arcs = done[id(child)]
            arcs = set(arcs)
            src = [v for v, lb in labels.items() if lb == i]
            dst = [v for v, lb in labels.items() if lb == j]
            for a in src:
                for b in dst:
                    arcs.add((a, b))
            done[id(node)] = (labels, arcs)
        else:  # relabel
            _k, i, j, child = node
            labels, arcs = done[id(child)]
            labels = {v: (j if lb == i else lb) for v, lb in labels.items()}
            done[id(node)] = (labels, arcs)
    labels, arcs = done[id(root)]
    return frozenset(labels), frozenset(arcs), labels
