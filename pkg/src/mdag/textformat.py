"""Plain-text graph documents, DOT export and JSON encodings.

Grammar (one section per line, continuation lines allowed)::

    document  := (section | comment | blank)*
    section   := NAME ":" token*          NAME in vertices, edges, faces, latent
    edges     := (VERTEX "->" VERTEX)*
    faces     := ("{" VERTEX ("," VERTEX)* "}")*
    comment   := "#" anything

A missing ``vertices:`` section is inferred from the other sections.
"""

import re
from dataclasses import dataclass

from .errors import CycleError, InputError, ParseError
from .graph import MDag, as_mdag
from .projection import RESERVED_PREFIX

SECTIONS = ("vertices", "edges", "faces", "latent")

_NAME = r"[^\s{},:#@\-][^\s{},:#\-]*"
_NAME_RE = re.compile(_NAME + r"\Z")
_HEADER = re.compile(r"\s*([A-Za-z_]+)\s*:")
_FACE = re.compile(r"\{[^{}]*\}")
_TOKEN = re.compile(r"\{[^{}]*\}?|\S+")


@dataclass(frozen=True)
class GraphDocument:
    """Parsed document; ``latent`` lists vertices to be treated as hidden."""

    text: str
    graph: MDag
    latent: frozenset = frozenset()

    @property
    def observed(self):
        return frozenset(self.graph.vertices) - self.latent


def _check_name(name, line, col):
    if name.startswith(RESERVED_PREFIX):
        raise ParseError(f"vertex names may not start with {RESERVED_PREFIX!r}: {name!r}", line, col)
    if not _NAME_RE.match(name):
        raise ParseError(f"bad vertex name {name!r}", line, col)
    return name


def _split_sections(text):
    sections = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        m = _HEADER.match(line)
        start = 0
        if m:
            name = m.group(1)
            if name not in SECTIONS:
                raise ParseError(f"unknown section {name!r}", lineno, m.start(1) + 1)
            if name in sections:
                raise ParseError(f"duplicate section {name!r}", lineno, m.start(1) + 1)
            sections[name] = []
            current = name
            start = m.end()
        elif current is None:
            raise ParseError("expected a section header such as 'vertices:'", lineno, len(line) - len(line.lstrip()) + 1)
        for tok in _TOKEN.finditer(line, start):
            sections[current].append((tok.group(0), lineno, tok.start() + 1))
    return sections


def parse_document(text):
    sections = _split_sections(text)
    declared = None
    if "vertices" in sections:
        declared = {}
        for tok, line, col in sections["vertices"]:
            for piece in tok.split(","):
                if piece:
                    declared.setdefault(_check_name(piece, line, col), (line, col))
    known = dict(declared or {})

    def vertex(name, line, col):
        _check_name(name, line, col)
        if declared is not None and name not in declared:
            raise ParseError(f"unknown vertex {name!r}", line, col)
        known.setdefault(name, (line, col))
        return name

    edges = []
    where = {}
    for tok, line, col in sections.get("edges", []):
        parts = tok.split("->")
        if len(parts) < 2 or any(not p for p in parts):
            raise ParseError(f"expected an edge 'a->b', got {tok!r}", line, col)
        names = []
        offset = col
        for p in parts:
            names.append(vertex(p, line, offset))
            offset += len(p) + 2
        for a, b in zip(names, names[1:]):
            if a == b:
                raise ParseError(f"self-loop {a}->{a} is not allowed", line, col)
            edges.append((a, b))
            where.setdefault((a, b), (line, col))
    faces = []
    for tok, line, col in sections.get("faces", []):
        if not _FACE.fullmatch(tok):
            raise ParseError(f"expected a face '{{a,b,...}}', got {tok!r}", line, col)
        body = tok[1:-1]
        members = [p.strip() for p in body.split(",")]
        if not body.strip() or any(not p for p in members):
            raise ParseError(f"empty vertex in face {tok!r}", line, col)
        faces.append({vertex(p, line, col) for p in members})
    latent = set()
    for tok, line, col in sections.get("latent", []):
        for piece in tok.split(","):
            if piece:
                latent.add(vertex(piece, line, col))
    try:
        g = MDag(known, edges, faces)
    except CycleError as exc:
        a, b = exc.cycle[0], exc.cycle[1]
        line, col = where.get((a, b), (None, None))
        raise ParseError(str(exc), line, col) from exc
    except InputError as exc:
        raise ParseError(str(exc)) from exc
    return GraphDocument(text, g, frozenset(latent))


def parse_mdag(text):
    return parse_document(text).graph


def serialize(g, latent=()):
    """Canonical text: sorted vertices, edges and non-trivial facets."""
    g = as_mdag(g)
    lines = [
        "vertices: " + " ".join(g.vertices),
        "edges: " + " ".join(f"{a}->{b}" for a, b in g.dag.sorted_edges()),
        "faces: " + " ".join("{" + ",".join(sorted(f)) + "}" for f in g.nontrivial_facets),
    ]
    if latent:
        lines.append("latent: " + " ".join(sorted(latent)))
    return "\n".join(line.rstrip() for line in lines) + "\n"


def serialize_document(doc):
    return serialize(doc.graph, doc.latent)


def _q(name):
    return '"' + name.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(g, name="mdag"):
    """DOT digraph; each non-trivial facet becomes a small red point node
    with arrows to its members."""
    g = as_mdag(g)
    out = [f"digraph {name} {{", "  node [shape=circle];"]
    for v in g.vertices:
        out.append(f"  {_q(v)};")
    for a, b in g.dag.sorted_edges():
        out.append(f"  {_q(a)} -> {_q(b)} [color=blue];")
    for f in g.nontrivial_facets:
        hub = _q(RESERVED_PREFIX + ",".join(sorted(f)))
        out.append(f"  {hub} [shape=point, color=red, label=\"\"];")
        for v in sorted(f):
            out.append(f"  {hub} -> {_q(v)} [color=red];")
    out.append("}")
    return "\n".join(out) + "\n"


def mdag_to_json(g):
    g = as_mdag(g)
    return {
        "vertices": list(g.vertices),
        "edges": [list(e) for e in g.dag.sorted_edges()],
        "facets": [sorted(f) for f in g.nontrivial_facets],
    }


def mdag_from_json(obj):
    return MDag(obj["vertices"], [tuple(e) for e in obj.get("edges", [])], obj.get("facets", []))
