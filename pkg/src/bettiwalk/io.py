"""Text formats for complexes and graphs.

Complex file::

    complex <n>
    <facet vertices separated by spaces>
    ...

Graph file::

    graph <n>
    <u> <v>
    ...

Lines starting with ``#`` and blank lines are ignored, duplicates are
dropped. Integer labels are used as-is and must lie in ``[1, n]``. If any
label is not an integer, all labels are treated as names and numbered
``1, 2, ...`` in order of first appearance.
"""

from __future__ import annotations

import warnings
from pathlib import Path

from .complexes import CliqueComplex, GeneralComplex, SimplicialComplex
from .errors import ClosureWarning, ParseError


def _tokens(text: str) -> tuple[str, int, list[tuple[int, list[str]]]]:
    header = None
    body = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if header is None:
            parts = line.split()
            if len(parts) != 2 or parts[0] not in ("complex", "graph"):
                raise ParseError("expected header 'complex <n>' or 'graph <n>'", lineno)
            try:
                n = int(parts[1])
            except ValueError:
                raise ParseError(f"vertex count {parts[1]!r} is not an integer", lineno) from None
            if n < 1:
                raise ParseError("vertex count must be positive", lineno)
            header = (parts[0], n)
            continue
        body.append((lineno, line.split()))
    if header is None:
        raise ParseError("empty input")
    return header[0], header[1], body


def _labeler(n: int, body: list[tuple[int, list[str]]]):
    try:
        for _, toks in body:
            for t in toks:
                int(t)
    except ValueError:
        names: dict[str, int] = {}

        def by_name(tok: str, lineno: int) -> int:
            if tok not in names:
                if len(names) == n:
                    raise ParseError(f"more than {n} distinct vertex labels", lineno)
                names[tok] = len(names) + 1
            return names[tok]

        return by_name

    def literal(tok: str, lineno: int) -> int:
        v = int(tok)
        if not 1 <= v <= n:
            raise ParseError(f"vertex {v} out of range [1, {n}]", lineno)
        return v

    return literal


def parse_text(text: str) -> SimplicialComplex:
    kind, n, body = _tokens(text)
    label = _labeler(n, body)
    if kind == "graph":
        edges = set()
        for lineno, toks in body:
            if len(toks) != 2:
                raise ParseError(f"an edge needs exactly two vertices, got {len(toks)}", lineno)
            u, v = (label(t, lineno) for t in toks)
            if u == v:
                raise ParseError(f"self-loop at vertex {u}", lineno)
            edges.add((min(u, v), max(u, v)))
        return CliqueComplex(n, sorted(edges))

    listed = set()
    for lineno, toks in body:
        verts = [label(t, lineno) for t in toks]
        if len(set(verts)) != len(verts):
            raise ParseError("repeated vertex in face", lineno)
        listed.add(tuple(sorted(verts)))
    cplx = GeneralComplex(n, sorted(listed))
    # a list containing non-maximal faces is read as an explicit face list
    explicit = len(cplx.facets) < len(listed)
    if explicit:
        missing = sum(len(cplx.faces(k)) for k in range(cplx.dim + 1)) - len(listed)
        if missing:
            warnings.warn(f"face list not downward closed; added {missing} faces", ClosureWarning, stacklevel=2)
    return cplx


def parse_input(path) -> SimplicialComplex:
    """Read a complex (``complex`` header) or clique complex (``graph`` header)."""
    return parse_text(Path(path).read_text())


def format_complex(cplx: SimplicialComplex, comments: list[str] | None = None) -> str:
    lines = [f"# {c}" for c in comments or []]
    if isinstance(cplx, CliqueComplex):
        lines.append(f"graph {cplx.n}")
        lines.extend(f"{u} {v}" for u, v in cplx.edges)
    else:
        lines.append(f"complex {cplx.n}")
        lines.extend(" ".join(map(str, f)) for f in cplx.facets)
    return "\n".join(lines) + "\n"


def write_complex(cplx: SimplicialComplex, path, comments: list[str] | None = None) -> None:
    Path(path).write_text(format_complex(cplx, comments))
