"""Problem files, JSON graph serialization and DOT output."""

from __future__ import annotations

import re
from dataclasses import dataclass

from .dag import Dag
from .relations import NAME_RE, Constraint, Relation, Universe


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class ProblemFile:
    taxa: tuple[str, ...] | None
    requires: tuple[Constraint, ...]
    forbids: tuple[Constraint, ...]

    def mentioned(self) -> set[str]:
        out: set[str] = set()
        for c in self.requires + self.forbids:
            for p in c:
                out.update(p)
        return out

    @property
    def universe(self) -> Universe:
        return Universe(self.taxa if self.taxa is not None else self.mentioned())

    def relations(self) -> tuple[Universe, Relation, Relation]:
        u = self.universe
        return u, Relation.from_constraints(u, self.requires), Relation.from_constraints(u, self.forbids)


DIRECTIVES = ("taxa", "require", "forbid")


def parse_constraint_text(body: str, line: int | None = None) -> Constraint:
    tokens = body.split()
    if "<" not in tokens:
        raise ParseError(f"expected 'a b < c d', got {body.strip()!r}", line)
    k = tokens.index("<")
    left, right = tokens[:k], tokens[k + 1:]
    if len(left) != 2 or len(right) != 2:
        raise ParseError(f"a constraint needs exactly four taxa, got {len(left) + len(right)}", line)
    for name in left + right:
        if not NAME_RE.match(name):
            raise ParseError(f"invalid taxon name {name!r}", line)
    return Constraint(tuple(left), tuple(right))


def parse_problem(text: str) -> ProblemFile:
    taxa: tuple[str, ...] | None = None
    taxa_line = None
    req: list[Constraint] = []
    forb: list[Constraint] = []
    where: list[tuple[int, Constraint]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, body = line.partition(":")
        head = head.strip()
        if not sep or head not in DIRECTIVES:
            raise ParseError(f"unknown directive {head!r}", lineno)
        if head == "taxa":
            if taxa is not None:
                raise ParseError("duplicate 'taxa:' line", lineno)
            names = body.split()
            if not names:
                raise ParseError("'taxa:' needs at least one name", lineno)
            for name in names:
                if not NAME_RE.match(name):
                    raise ParseError(f"invalid taxon name {name!r}", lineno)
            taxa, taxa_line = tuple(names), lineno
            continue
        c = parse_constraint_text(body, lineno)
        (req if head == "require" else forb).append(c)
        where.append((lineno, c))
    if taxa is not None:
        declared = set(taxa)
        for lineno, c in where:
            for p in c:
                for name in p:
                    if name not in declared:
                        raise ParseError(f"taxon {name!r} is not declared on line {taxa_line}", lineno)
    problem = ProblemFile(taxa, tuple(req), tuple(forb))
    if taxa is None and not problem.mentioned():
        raise ParseError("the taxon set is empty", max(1, len(text.splitlines())))
    return problem


def format_constraint(c: Constraint) -> str:
    return f"{c.lower.lo} {c.lower.hi} < {c.upper.lo} {c.upper.hi}"


def format_problem(p: ProblemFile) -> str:
    lines = []
    if p.taxa is not None:
        lines.append("taxa: " + " ".join(p.taxa))
    lines += ["require: " + format_constraint(c) for c in p.requires]
    lines += ["forbid: " + format_constraint(c) for c in p.forbids]
    return "\n".join(lines) + "\n"


def dag_to_json(g: Dag) -> dict:
    vertices = []
    for v in g.vertices:
        item: dict = {"id": v}
        if v in g.labels:
            item["label"] = g.labels[v]
        if v in g.tags:
            item["tag"] = g.tags[v]
        vertices.append(item)
    return {"vertices": vertices, "arcs": [list(a) for a in sorted(g.arcs)]}


def dag_from_json(data: dict, universe: Universe | None = None) -> Dag:
    """Inverse of :func:`dag_to_json`. Without ``universe`` the taxon set is
    read from the labels. Structural problems raise ``ValueError``."""
    try:
        verts = data["vertices"]
        ids = [int(v["id"]) for v in verts]
        labels = {int(v["id"]): str(v["label"]) for v in verts if "label" in v}
        tags = {int(v["id"]): str(v["tag"]) for v in verts if "tag" in v}
        arcs = [(int(a), int(b)) for a, b in data["arcs"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed graph document: {exc}") from exc
    if len(set(ids)) != len(ids):
        raise ValueError("duplicate vertex ids")
    known = set(ids)
    for a, b in arcs:
        if a not in known or b not in known:
            raise ValueError(f"arc ({a}, {b}) mentions an undeclared vertex")
    u = universe if universe is not None else Universe(labels.values())
    return Dag(u, arcs, labels, vertices=ids, tags=tags)


def display_label(g: Dag, v: int) -> str:
    if v in g.labels:
        return g.labels[v]
    tag = g.tags.get(v)
    if tag is None:
        return f"v{v}"
    if tag.startswith("class:"):
        return "{" + tag[len("class:"):] + "}"
    return tag


def _dot_id(g: Dag, v: int) -> str:
    # '#' cannot occur in a taxon name, so internal ids never collide with leaves
    return f'"{g.labels[v]}"' if v in g.labels else f'"#{v}"'


def emit_dot(g: Dag, name: str = "G") -> str:
    lines = [f"digraph {name} {{"]
    for v in g.vertices:
        attrs = f'label="{display_label(g, v)}", id="v{v}"'
        if v in g.labels:
            attrs = "shape=box, " + attrs
        lines.append(f"  {_dot_id(g, v)} [{attrs}];")
    for a, b in sorted(g.arcs):
        lines.append(f"  {_dot_id(g, a)} -> {_dot_id(g, b)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


_DOT_NODE = re.compile(r'^\s*"([^"]+)"\s*\[(.*)\];\s*$')
_DOT_EDGE = re.compile(r'^\s*"([^"]+)"\s*->\s*"([^"]+)"\s*;\s*$')
_DOT_LABEL = re.compile(r'label="([^"]*)"')
_DOT_ID = re.compile(r'\bid="v(\d+)"')


def _tag_of_label(label: str) -> str | None:
    if label.startswith("{") and label.endswith("}"):
        return "class:" + label[1:-1]
    if label.startswith("ext:") or label == "rho":
        return label
    return None


def dag_from_dot(text: str, universe: Universe | None = None) -> Dag:
    """Read back the output of :func:`emit_dot` (not arbitrary DOT)."""
    names: dict[str, int] = {}
    labels: dict[int, str] = {}
    tags: dict[int, str] = {}
    arcs: list[tuple[int, int]] = []
    leaves: list[tuple[str, str]] = []
    for line in text.splitlines():
        m = _DOT_NODE.match(line)
        if m:
            node, attrs = m.groups()
            lab = _DOT_LABEL.search(attrs)
            label = lab.group(1) if lab else node
            vid = _DOT_ID.search(attrs)
            if node.startswith("#"):
                v = int(node[1:])
                names[node] = v
                tag = _tag_of_label(label)
                if tag:
                    tags[v] = tag
            elif vid:
                v = int(vid.group(1))
                names[node] = v
                labels[v] = label
            else:
                leaves.append((node, label))
            continue
        m = _DOT_EDGE.match(line)
        if m:
            arcs.append(m.groups())  # type: ignore[arg-type]
    nxt = max(names.values(), default=-1) + 1
    for node, label in leaves:
        names[node] = nxt
        labels[nxt] = label
        nxt += 1
    try:
        int_arcs = [(names[a], names[b]) for a, b in arcs]
    except KeyError as exc:
        raise ValueError(f"edge mentions undeclared node {exc}") from exc
    u = universe if universe is not None else Universe(labels.values())
    return Dag(u, int_arcs, labels, vertices=names.values(), tags=tags)

