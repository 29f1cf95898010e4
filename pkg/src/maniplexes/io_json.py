"""JSON and DOT codecs for colored graphs, ranked posets, and voltages.

Three document kinds, recognized by their keys:

* graph: ``{"rank": n, "vertices": ["a", ...], "edges": [{"color": 0,
  "ends": ["a", "b"]}, ...]}``.  One entry in ``ends`` means a semi-edge,
  two equal entries a loop.  Dart ids follow edge-list order, two per
  link or loop (the first oriented first-to-second) and one per
  semi-edge, matching ``ColoredGraph.from_edges``.
* poset: ``{"rank": n, "faces": [{"id": "v1", "rank": 0}, ...],
  "covers": [["v1", "e3"], ...]}``.  The least and greatest faces may be
  omitted; they are synthesized with ids "least"/"greatest" (prefixed
  with underscores if those ids are taken).
* voltage: the graph document plus ``{"group": {"type": "boolean",
  "dim": 4}`` or ``{"type": "table", "table": [[...]]}`` and
  ``"voltages": [{"edge": 3, "from": "a", "value": "0100"}]}``.
  ``edge`` indexes the edge list, ``from`` orients links (semi-edges
  omit it, loops take the first dart), Boolean values are bit strings
  and table values element ids.  Unlisted edges carry the identity, and
  the edges with identity voltage on both darts must span every
  component; assignments violating that are rejected, regauge first.

Schema problems raise SchemaError; semantic preconditions raise
ValueError from the library.  Serialization is deterministic: edges in
dart order, covers sorted, no hash-order iteration anywhere.
"""

from __future__ import annotations

from typing import Optional, Sequence, Union

import numpy as np

from . import _kernels
from .colored_graph import ColoredGraph, Partition, components
from .group import BooleanGroup, TableGroup
from .poset import RankedPoset, flags_of
from .premaniplex import Premaniplex
from .voltage import VoltageAssignment

Group = Union[BooleanGroup, TableGroup]


class SchemaError(ValueError):
    """Well-formed JSON that does not match a document schema."""


def _field(obj: dict, key: str, kind, where: str):
    if key not in obj:
        raise SchemaError(f"{where} is missing {key!r}")
    val = obj[key]
    if kind is int and isinstance(val, bool) or not isinstance(val, kind):
        raise SchemaError(f"{where}[{key!r}] must be {kind.__name__},"
                          f" got {type(val).__name__}")
    return val


def kind_of(obj) -> str:
    """Which document schema a parsed JSON object claims to follow."""
    if not isinstance(obj, dict):
        raise SchemaError("document must be a JSON object")
    if "faces" in obj or "covers" in obj:
        return "poset"
    if "group" in obj or "voltages" in obj:
        return "voltage"
    if "vertices" in obj or "edges" in obj:
        return "graph"
    raise SchemaError("document has none of the known keys"
                      " (faces/covers, group/voltages, vertices/edges)")


def parse_graph(obj) -> tuple[ColoredGraph, tuple[str, ...]]:
    if not isinstance(obj, dict):
        raise SchemaError("graph document must be a JSON object")
    rank = _field(obj, "rank", int, "graph")
    if rank < 0:
        raise SchemaError("graph rank must be nonnegative")
    vertices = _field(obj, "vertices", list, "graph")
    for v in vertices:
        if not isinstance(v, str):
            raise SchemaError(f"vertex name {v!r} is not a string")
    index = {v: k for k, v in enumerate(vertices)}
    if len(index) != len(vertices):
        raise SchemaError("vertex names are not unique")
    edges = _field(obj, "edges", list, "graph")
    specs = []
    for k, e in enumerate(edges):
        if not isinstance(e, dict):
            raise SchemaError(f"edge {k} must be an object")
        c = _field(e, "color", int, f"edge {k}")
        if not 0 <= c < rank:
            raise SchemaError(f"edge {k} color {c} out of range for rank {rank}")
        ends = _field(e, "ends", list, f"edge {k}")
        if not 1 <= len(ends) <= 2:
            raise SchemaError(f"edge {k} needs 1 or 2 ends, got {len(ends)}")
        for v in ends:
            if v not in index:
                raise SchemaError(f"edge {k} references unknown vertex {v!r}")
        if len(ends) == 1:
            specs.append((c, index[ends[0]]))
        else:
            specs.append((c, index[ends[0]], index[ends[1]]))
    g = ColoredGraph.from_edges(len(vertices), rank, specs)
    return g, tuple(vertices)


def serialize_graph(g: ColoredGraph,
                    names: Optional[Sequence[str]] = None) -> dict:
    names = _vertex_names(g, names)
    edges = []
    for d in g.edge_reps():
        entry = {"color": int(g.color[d]), "ends": [names[int(g.initial[d])]]}
        if int(g.inverse[d]) != d:
            entry["ends"].append(names[g.terminal(d)])
        edges.append(entry)
    return {"rank": g.rank, "vertices": list(names), "edges": edges}


def _vertex_names(g: ColoredGraph, names) -> tuple[str, ...]:
    if names is None:
        return tuple(str(v) for v in range(g.n_vertices))
    names = tuple(names)
    if len(names) != g.n_vertices:
        raise ValueError(f"need {g.n_vertices} vertex names, got {len(names)}")
    return names


def parse_poset(obj) -> RankedPoset:
    if not isinstance(obj, dict):
        raise SchemaError("poset document must be a JSON object")
    rank = _field(obj, "rank", int, "poset")
    if rank < 0:
        raise SchemaError("poset rank must be nonnegative")
    faces = _field(obj, "faces", list, "poset")
    ids: list[str] = []
    rank_of: list[int] = []
    for k, f in enumerate(faces):
        if not isinstance(f, dict):
            raise SchemaError(f"face {k} must be an object")
        fid = _field(f, "id", str, f"face {k}")
        r = _field(f, "rank", int, f"face {k}")
        if not -1 <= r <= rank:
            raise SchemaError(f"face {fid!r} rank {r} outside [-1, {rank}]")
        ids.append(fid)
        rank_of.append(r)
    index = {fid: k for k, fid in enumerate(ids)}
    if len(index) != len(ids):
        raise SchemaError("face ids are not unique")
    covers = []
    for k, pair in enumerate(_field(obj, "covers", list, "poset")):
        if not (isinstance(pair, list) and len(pair) == 2):
            raise SchemaError(f"cover {k} must be a two-element list")
        for fid in pair:
            if fid not in index:
                raise SchemaError(f"cover {k} references unknown face {fid!r}")
        covers.append((index[pair[0]], index[pair[1]]))
    for r, generated in ((-1, "least"), (rank, "greatest")):
        if r in rank_of:
            continue
        fid = generated
        while fid in index:
            fid = "_" + fid
        index[fid] = len(ids)
        ids.append(fid)
        rank_of.append(r)
        near = 0 if r == -1 else rank - 1
        me = index[fid]
        for k, rr in enumerate(rank_of[:me]):
            if rr == near:
                covers.append((me, k) if r == -1 else (k, me))
    return RankedPoset(rank, rank_of, covers, ids)


def serialize_poset(p: RankedPoset) -> dict:
    ids = face_ids(p)
    faces = [{"id": ids[f], "rank": int(p.rank_of[f])}
             for f in range(p.n_faces)]
    covers = [[ids[lo], ids[hi]] for lo, hi in p.covers]
    return {"rank": p.rank, "faces": faces, "covers": covers}


def face_ids(p: RankedPoset) -> list[str]:
    names = p.names
    if (names is not None and all(isinstance(nm, str) for nm in names)
            and len(set(names)) == p.n_faces):
        return list(names)
    # unnamed or structured faces fall back to positional ids
    return [f"f{f}" for f in range(p.n_faces)]


def face_chain_names(p: RankedPoset) -> tuple[str, ...]:
    """One name per flag: its proper faces' ids joined bottom-up with '/'."""
    ids = face_ids(p)
    return tuple("/".join(ids[f] for f in chain[1:-1])
                 for chain in flags_of(p))


def parse_group(obj) -> Group:
    if not isinstance(obj, dict):
        raise SchemaError("group must be a JSON object")
    kind = _field(obj, "type", str, "group")
    if kind == "boolean":
        dim = _field(obj, "dim", int, "group")
        if dim < 0:
            raise SchemaError("boolean group dimension must be nonnegative")
        return BooleanGroup(dim)
    if kind == "table":
        table = _field(obj, "table", list, "group")
        try:
            return TableGroup(table)
        except ValueError as err:
            raise SchemaError(f"bad multiplication table: {err}") from err
    raise SchemaError(f"unknown group type {kind!r}")


def serialize_group(group: Group) -> dict:
    if isinstance(group, BooleanGroup):
        return {"type": "boolean", "dim": group.dim}
    return {"type": "table", "table": [[int(x) for x in row]
                                       for row in group.mul]}


def parse_element(group: Group, value, where: str) -> int:
    if isinstance(group, BooleanGroup):
        if not isinstance(value, str):
            raise SchemaError(f"{where} must be a bit string")
        try:
            return group.parse(value)
        except ValueError as err:
            raise SchemaError(f"{where}: {err}") from err
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(f"{where} must be a table element id")
    if not 0 <= value < group.order:
        raise SchemaError(f"{where} id {value} out of range")
    return value


def format_element(group: Group, value: int):
    return group.format(value) if isinstance(group, BooleanGroup) else int(value)


def _edge_darts(g: ColoredGraph) -> list[tuple[int, ...]]:
    return [(d,) if int(g.inverse[d]) == d else (d, int(g.inverse[d]))
            for d in g.edge_reps()]


def _trivial_edges_span(va: VoltageAssignment) -> bool:
    g = va.base.graph
    ident = va.group.identity
    tails, heads = [], []
    for d in g.edge_reps():
        e = int(g.inverse[d])
        if e != d and int(va.volt[d]) == ident and int(va.volt[e]) == ident:
            tails.append(int(g.initial[d]))
            heads.append(g.terminal(d))
    labels = _kernels.component_labels(
        g.n_vertices, np.asarray(tails, dtype=np.int64),
        np.asarray(heads, dtype=np.int64))
    return Partition(labels) == components(g, range(g.rank))


def parse_voltage(obj) -> tuple[VoltageAssignment, tuple[str, ...]]:
    g, names = parse_graph(obj)
    group = parse_group(_field(obj, "group", dict, "voltage document"))
    index = {v: k for k, v in enumerate(names)}
    darts = _edge_darts(g)
    volt = np.full(g.n_darts, group.identity, dtype=np.int64)
    for k, entry in enumerate(_field(obj, "voltages", list, "voltage document")):
        if not isinstance(entry, dict):
            raise SchemaError(f"voltage {k} must be an object")
        idx = _field(entry, "edge", int, f"voltage {k}")
        if not 0 <= idx < len(darts):
            raise SchemaError(f"voltage {k} references unknown edge {idx}")
        value = parse_element(group, _field(entry, "value", object,
                                             f"voltage {k}"),
                               f"voltage {k} value")
        pair = darts[idx]
        if len(pair) == 1:
            if "from" in entry:
                raise SchemaError(f"voltage {k}: semi-edges take no 'from'")
            volt[pair[0]] = value
            continue
        src = _field(entry, "from", str, f"voltage {k}")
        if src not in index:
            raise SchemaError(f"voltage {k} 'from' names unknown vertex {src!r}")
        d, e = pair
        if index[src] == int(g.initial[d]):
            volt[d], volt[e] = value, group.inv(value)
        elif index[src] == int(g.initial[e]):
            volt[e], volt[d] = value, group.inv(value)
        else:
            raise SchemaError(f"voltage {k} 'from' vertex {src!r} is not an"
                              f" end of edge {idx}")
    va = VoltageAssignment(Premaniplex(g), group, volt)
    if not _trivial_edges_span(va):
        raise ValueError("identity-voltage edges must contain a spanning"
                         " tree of every component: regauge first")
    return va, names


def serialize_voltage(va: VoltageAssignment,
                      names: Optional[Sequence[str]] = None) -> dict:
    if not _trivial_edges_span(va):
        raise ValueError("identity-voltage edges must contain a spanning"
                         " tree of every component: regauge first")
    g = va.base.graph
    names = _vertex_names(g, names)
    obj = serialize_graph(g, names)
    obj["group"] = serialize_group(va.group)
    entries = []
    ident = va.group.identity
    for idx, pair in enumerate(_edge_darts(g)):
        d = pair[0]
        value = int(va.volt[d])
        if all(int(va.volt[x]) == ident for x in pair):
            continue
        entry = {"edge": idx}
        if len(pair) == 2:
            entry["from"] = names[int(g.initial[d])]
        entry["value"] = format_element(va.group, value)
        entries.append(entry)
    obj["voltages"] = entries
    return obj


# ColorBrewer Dark2: fixed 8-entry palette, color index i uses entry i mod 8
PALETTE = ("#1b9e77", "#d95f02", "#7570b3", "#e7298a",
           "#66a61e", "#e6ab02", "#a6761d", "#666666")


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def graph_to_dot(g: ColoredGraph, names: Optional[Sequence[str]] = None,
                 edge_labels: Optional[dict[int, str]] = None) -> str:
    """DOT rendering: one line per edge, colored by the palette.

    Semi-edges become half-edges, a doubled line to an invisible stub
    node.  edge_labels may add a suffix (say a voltage) per edge index.
    """
    names = _vertex_names(g, names)
    lines = ["graph {", "  node [shape=circle fontsize=11];"]
    for v in names:
        lines.append(f"  {_quote(v)};")
    for idx, d in enumerate(g.edge_reps()):
        c = int(g.color[d])
        col = PALETTE[c % len(PALETTE)]
        label = str(c)
        if edge_labels and idx in edge_labels:
            label += " " + edge_labels[idx]
        u = _quote(names[int(g.initial[d])])
        if int(g.inverse[d]) == d:
            stub = _quote(f"__semi{idx}")
            lines.append(f"  {stub} [shape=point width=0.02 label=\"\"];")
            lines.append(f"  {u} -- {stub} [color=\"{col}:{col}\""
                         f" label={_quote(label)} fontcolor=\"{col}\"];")
        else:
            w = _quote(names[g.terminal(d)])
            lines.append(f"  {u} -- {w} [color=\"{col}\""
                         f" label={_quote(label)} fontcolor=\"{col}\"];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def hasse_to_dot(p: RankedPoset) -> str:
    """Hasse diagram with one horizontal layer per rank."""
    ids = face_ids(p)
    lines = ["graph {", "  rankdir=BT;", "  node [shape=box fontsize=11];"]
    for r in range(-1, p.rank + 1):
        layer = p.faces_of_rank(r)
        if not layer:
            continue
        row = " ".join(f"{_quote(ids[f])};" for f in layer)
        lines.append("  { rank=same; " + row + " }")
    for lo, hi in p.covers:
        lines.append(f"  {_quote(ids[lo])} -- {_quote(ids[hi])};")
    lines.append("}")
    return "\n".join(lines) + "\n"
