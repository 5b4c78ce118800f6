"""Text formats for digraphs, patterns, decompositions, triples, and separations.

All files are 1-based.  Digraph file: first line ``n m``, then ``m`` lines
``u v`` (arc u->v).  Pattern file: first line ``n m t``, second line the
``t`` root vertices (blank when t=0), then ``m`` arc lines where duplicates
encode multiplicity and ``u u`` is a loop.  Decomposition file: one bag per
line; ``#`` starts a comment.  Parsing is strict: out-of-range ids and wrong
counts are rejected.
"""

from __future__ import annotations

from .digraph import PatternDigraph, SemiCompleteDigraph, bits, mask_of
from .errors import InputFormatError
from .separations import Separation

__all__ = [
    "parse_digraph",
    "format_digraph",
    "parse_pattern",
    "format_pattern",
    "parse_decomposition",
    "format_decomposition",
    "parse_triple_parts",
    "format_triple",
    "parse_separation",
    "format_separation",
]


def _ints(tokens, count, what):
    if len(tokens) != count:
        raise InputFormatError(f"expected {count} integers for {what}, got {len(tokens)}")
    try:
        return [int(t) for t in tokens]
    except ValueError as exc:
        raise InputFormatError(f"non-integer token in {what}: {exc}") from None


def _content_lines(text):
    for raw in text.splitlines():
        line = raw.split("#", 1)[0]
        yield line


def parse_digraph(text: str):
    """Parse a raw digraph file into ``(n, arcs)`` without classification."""
    lines = [ln for ln in _content_lines(text)]
    # keep blank lines out, but remember none are significant for digraphs
    body = [ln.split() for ln in lines if ln.split()]
    if not body:
        raise InputFormatError("empty digraph file")
    n, m = _ints(body[0], 2, "digraph header")
    if n < 0 or m < 0:
        raise InputFormatError("negative counts in digraph header")
    if len(body) - 1 != m:
        raise InputFormatError(f"digraph header promises {m} arcs, file has {len(body) - 1}")
    arcs = []
    seen = set()
    for row in body[1:]:
        u, v = _ints(row, 2, "digraph arc")
        if not (1 <= u <= n and 1 <= v <= n):
            raise InputFormatError(f"arc ({u},{v}) out of range 1..{n}")
        if (u, v) in seen:
            raise InputFormatError(f"duplicate arc ({u},{v}) in digraph file")
        seen.add((u, v))
        arcs.append((u - 1, v - 1))
    return n, arcs


def format_digraph(D: SemiCompleteDigraph) -> str:
    rows = [f"{D.n} {D.arc_count()}"]
    rows.extend(f"{u + 1} {v + 1}" for u, v in D.arcs())
    return "\n".join(rows) + "\n"


def parse_pattern(text: str) -> PatternDigraph:
    lines = list(_content_lines(text))
    idx = 0
    while idx < len(lines) and not lines[idx].split():
        idx += 1
    if idx == len(lines):
        raise InputFormatError("empty pattern file")
    n, m, t = _ints(lines[idx].split(), 3, "pattern header")
    if n < 0 or m < 0 or t < 0:
        raise InputFormatError("negative counts in pattern header")
    idx += 1
    if idx >= len(lines):
        if t > 0:
            raise InputFormatError("pattern file missing root line")
        root_tokens = []
    else:
        root_tokens = lines[idx].split()
        idx += 1
    roots = _ints(root_tokens, t, "pattern roots")
    for r in roots:
        if not 1 <= r <= n:
            raise InputFormatError(f"pattern root {r} out of range 1..{n}")
    arcs = []
    rest = [ln.split() for ln in lines[idx:] if ln.split()]
    if len(rest) != m:
        raise InputFormatError(f"pattern header promises {m} arcs, file has {len(rest)}")
    for row in rest:
        u, v = _ints(row, 2, "pattern arc")
        if not (1 <= u <= n and 1 <= v <= n):
            raise InputFormatError(f"pattern arc ({u},{v}) out of range 1..{n}")
        arcs.append((u - 1, v - 1))
    raw_roots = tuple(r - 1 for r in roots)
    loops = [(u, v) for u, v in arcs if u == v]
    if loops:
        from .digraph import subdivide_loops

        pat = subdivide_loops(n, arcs)
        return PatternDigraph(pat.n, pat.arcs, raw_roots)
    return PatternDigraph(n, tuple(arcs), raw_roots)


def format_pattern(H: PatternDigraph) -> str:
    rows = [f"{H.n} {len(H.arcs)} {len(H.roots)}"]
    rows.append(" ".join(str(r + 1) for r in H.roots))
    rows.extend(f"{u + 1} {v + 1}" for u, v in H.arcs)
    return "\n".join(rows) + "\n"


def parse_decomposition(text: str, n: int):
    """Parse bags (one per line, 1-based) into a tuple of frozensets."""
    bags = []
    for line in _content_lines(text):
        tokens = line.split()
        if not tokens:
            continue
        bag = set()
        for t in tokens:
            try:
                v = int(t)
            except ValueError:
                raise InputFormatError(f"non-integer bag entry {t!r}") from None
            if not 1 <= v <= n:
                raise InputFormatError(f"bag vertex {v} out of range 1..{n}")
            bag.add(v - 1)
        bags.append(frozenset(bag))
    if not bags:
        raise InputFormatError("decomposition file has no bags")
    return tuple(bags)


def format_decomposition(bags) -> str:
    return "\n".join(" ".join(str(v + 1) for v in sorted(bag)) for bag in bags) + "\n"


def parse_triple_parts(text: str, n: int):
    """Parse a triple file: three non-comment lines listing A, B, C (1-based)."""
    rows = []
    for line in _content_lines(text):
        tokens = line.split()
        if tokens:
            rows.append(tokens)
    if len(rows) != 3:
        raise InputFormatError(f"triple file needs exactly 3 part lines, got {len(rows)}")
    parts = []
    for tokens in rows:
        part = []
        for t in tokens:
            try:
                v = int(t)
            except ValueError:
                raise InputFormatError(f"non-integer triple entry {t!r}") from None
            if not 1 <= v <= n:
                raise InputFormatError(f"triple vertex {v} out of range 1..{n}")
            part.append(v - 1)
        parts.append(tuple(part))
    return tuple(parts)


def format_triple(triple) -> str:
    rows = [
        " ".join(str(v + 1) for v in triple.a),
        " ".join(str(v + 1) for v in triple.b),
        " ".join(str(v + 1) for v in triple.c),
        "matching: " + " ".join(f"{c + 1}->{a + 1}" for c, a in zip(triple.c, triple.a)),
    ]
    return "\n".join(rows) + "\n"


def parse_separation(text: str, n: int) -> Separation:
    """Parse the debug form ``A: 1 2 | B: 3 4`` (1-based)."""
    if "|" not in text:
        raise InputFormatError("separation text must contain '|'")
    left, right = text.split("|", 1)
    left = left.strip()
    right = right.strip()
    if not left.startswith("A:") or not right.startswith("B:"):
        raise InputFormatError("separation text must look like 'A: ... | B: ...'")
    sides = []
    for chunk in (left[2:], right[2:]):
        side = set()
        for t in chunk.split():
            try:
                v = int(t)
            except ValueError:
                raise InputFormatError(f"non-integer separation entry {t!r}") from None
            if not 1 <= v <= n:
                raise InputFormatError(f"separation vertex {v} out of range 1..{n}")
            side.add(v - 1)
        sides.append(side)
    return Separation(mask_of(sides[0]), mask_of(sides[1]))


def format_separation(sep: Separation) -> str:
    a = " ".join(str(v + 1) for v in bits(sep.a_mask))
    b = " ".join(str(v + 1) for v in bits(sep.b_mask))
    return f"A: {a} | B: {b}"
