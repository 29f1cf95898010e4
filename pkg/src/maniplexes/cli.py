"""Command-line front end over the JSON document formats.

Subcommands cover validation, polytopality, flag graphs and posets,
duality, chains, automorphisms and symmetry types, voltage derivation
and checking, subgroup and coset intersection, coset and regular
polytopes, the caterpillar pipeline, and DOT export.  Every command
prints one JSON report to stdout with sorted keys, so replays are byte
identical; payloads embed in the report unless ``--out`` routes them to
a file.

Exit codes: 0 when the command completed (verdicts such as
``polytopal: false`` live in the report), 2 for usage errors (argparse),
3 for malformed JSON, 4 for schema violations, and 5 for violated
preconditions.  The environment variable MANIPLEX_MAX_FLAGS (default
100000) caps the size of any derived graph.
"""

from __future__ import annotations

import argparse
import json
import os
from typing import Optional

import numpy as np

from .caterpillar import (CaterpillarWord, boolean_voltages,
                          build_korbit_polytope, caterpillar_to_premaniplex,
                          classify_caterpillar, generate_korbit_word)
from .colored_graph import ColoredGraph
from .coset_geometry import build_coset_polytope, build_regular_polytope
from .group import BooleanGroup, CosetHandle, closure, coset_intersect, \
    intersect_subgroups
from .io_json import (SchemaError, face_chain_names, format_element,
                      graph_to_dot, hasse_to_dot, kind_of, parse_element,
                      parse_graph, parse_group, parse_poset, parse_voltage,
                      serialize_graph, serialize_poset, serialize_voltage)
from .poset import (dual_poset, flag_graph, polytopality_report,
                    poset_from_maniplex)
from .premaniplex import (Premaniplex, chains_of_type, dual_premaniplex,
                          is_maniplex, spip_check, wpip_check)
from .symmetry import automorphism_group, flag_orbits, symmetry_type_graph
from .voltage import (check_derived_maniplex, check_polytopal_voltage,
                      derived_graph, full_voltage_battery)

EXIT_OK = 0
EXIT_MALFORMED_JSON = 3
EXIT_SCHEMA = 4
EXIT_PRECONDITION = 5


class MalformedInput(Exception):
    """Unreadable file or JSON that does not parse at all."""


def _load(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as err:
        raise MalformedInput(f"cannot read {path}: {err.strerror}") from err
    except json.JSONDecodeError as err:
        raise MalformedInput(f"{path} is not valid JSON: {err}") from err


def _plain(x):
    """Witnesses and reports reduced to JSON-safe values."""
    if isinstance(x, (bool, str)) or x is None:
        return x
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted(_plain(v) for v in x)
    if isinstance(x, np.ndarray):
        return [_plain(v) for v in x]
    return str(x)


def _flag_cap() -> int:
    return int(os.environ.get("MANIPLEX_MAX_FLAGS", "100000"))


def _check_cap(n_flags: int):
    cap = _flag_cap()
    if n_flags > cap:
        raise ValueError(f"derived graph would have {n_flags} flags,"
                         f" over the MANIPLEX_MAX_FLAGS cap of {cap}")


def _emit(args, report: dict, key: str, payload, text: Optional[str] = None):
    """Inline the payload, or write it to --out and record the artifact."""
    out = getattr(args, "out", None)
    if out is None:
        report[key] = payload if text is None else text
        return report
    with open(out, "w", encoding="utf-8") as fh:
        if text is None:
            fh.write(json.dumps(payload, indent=2, sort_keys=False) + "\n")
        else:
            fh.write(text)
    report["artifacts"] = [out]
    return report


def _graph_input(obj) -> tuple[ColoredGraph, tuple[str, ...]]:
    kind = kind_of(obj)
    if kind == "voltage":
        va, names = parse_voltage(obj)
        return va.base.graph, names
    if kind != "graph":
        raise ValueError(f"expected a graph document, got a {kind}")
    return parse_graph(obj)


def _maniplex_input(obj) -> tuple[Premaniplex, tuple[str, ...]]:
    g, names = _graph_input(obj)
    m = Premaniplex(g)
    ok, why = is_maniplex(m)
    if not ok:
        raise ValueError(f"input is not a maniplex: {why}")
    return m, names


def cmd_validate(args) -> dict:
    obj = _load(args.file)
    kind = kind_of(obj)
    if kind == "poset":
        p = parse_poset(obj)
        return {"kind": "poset", "summary": "ranked poset",
                "rank": p.rank, "faces": p.n_faces}
    if kind == "voltage":
        va, _ = parse_voltage(obj)
        return {"kind": "voltage", "summary": "voltage assignment",
                "rank": va.base.rank, "vertices": va.base.n_vertices,
                "group_order": int(va.group.order)}
    g, _ = parse_graph(obj)
    report = {"kind": "graph", "rank": g.rank, "vertices": g.n_vertices,
              "edges": len(g.edge_reps())}
    try:
        m = Premaniplex(g)
    except ValueError as err:
        report["premaniplex"] = False
        report["maniplex"] = False
        report["detail"] = str(err)
        report["summary"] = "colored graph, not a premaniplex"
        return report
    report["premaniplex"] = True
    ok, why = is_maniplex(m)
    report["maniplex"] = ok
    if ok:
        report["summary"] = "maniplex"
    else:
        flavor = "semi-edges" if why.startswith("semi-edge") else "parallel edges"
        report["summary"] = f"premaniplex, not a maniplex ({flavor})"
        report["detail"] = why
    return report


def cmd_polytopal(args) -> dict:
    obj = _load(args.file)
    if kind_of(obj) == "poset":
        if args.weak or args.strong:
            raise ValueError("--weak/--strong select a path check and only"
                             " apply to graph documents")
        rep = polytopality_report(parse_poset(obj))
        return {"kind": "poset", "polytopal": rep.is_polytope,
                "flagged": rep.is_flagged, "diamond": rep.is_diamond,
                "strongly_connected": rep.is_strongly_connected,
                "witness": _plain(rep.witness)}
    m, _ = _maniplex_input(obj)
    if args.weak:
        ok, witness = wpip_check(m)
        return {"kind": "graph", "check": "wpip", "polytopal": ok,
                "witness": _plain(witness)}
    ok = spip_check(m)
    return {"kind": "graph", "check": "spip", "polytopal": ok}


def cmd_flag_graph(args) -> dict:
    p = parse_poset(_load(args.file))
    g = flag_graph(p)
    payload = serialize_graph(g, face_chain_names(p))
    return _emit(args, {"flags": g.n_vertices}, "graph", payload)


def cmd_poset(args) -> dict:
    m, _ = _maniplex_input(_load(args.file))
    p = poset_from_maniplex(m)
    counts = [len(p.faces_of_rank(r)) for r in range(p.rank)]
    return _emit(args, {"rank": p.rank, "face_counts": counts},
                 "poset", serialize_poset(p))


def cmd_dual(args) -> dict:
    obj = _load(args.file)
    kind = kind_of(obj)
    if kind == "poset":
        q = dual_poset(parse_poset(obj))
        return _emit(args, {"kind": "poset", "rank": q.rank},
                     "poset", serialize_poset(q))
    g, names = _graph_input(obj)
    flipped = ColoredGraph(g.n_vertices, g.rank, g.initial, g.inverse,
                           g.rank - 1 - g.color)
    return _emit(args, {"kind": "graph", "rank": g.rank},
                 "graph", serialize_graph(flipped, names))


def cmd_chains(args) -> dict:
    m, names = _maniplex_input(_load(args.file))
    K = _csv_ints(args.type)
    part = chains_of_type(m, K)
    blocks = [[names[v] for v in block] for block in part.blocks()]
    return {"type": sorted(K), "count": part.n_blocks, "chains": blocks}


def cmd_autgroup(args) -> dict:
    m, _ = _maniplex_input(_load(args.file))
    autos = automorphism_group(m)
    return {"order": len(autos),
            "flag_permutations": [_plain(a.flag_perm) for a in autos]}


def _auto_subset(m: Premaniplex, spec: Optional[str]):
    autos = automorphism_group(m)
    if spec is None:
        return autos
    picked = []
    for i in _csv_ints(spec):
        if not 0 <= i < len(autos):
            raise ValueError(f"automorphism index {i} out of range"
                             f" (group order {len(autos)})")
        picked.append(autos[i])
    return picked


def cmd_orbits(args) -> dict:
    m, _ = _maniplex_input(_load(args.file))
    part = flag_orbits(m, _auto_subset(m, args.subgroup))
    return {"orbits": part.n_blocks, "labels": _plain(part.labels)}


def cmd_stg(args) -> dict:
    m, _ = _maniplex_input(_load(args.file))
    stg = symmetry_type_graph(m, _auto_subset(m, args.subgroup))
    return _emit(args, {"orbits": stg.n_orbits}, "graph",
                 serialize_graph(stg.premaniplex.graph))


def cmd_derive(args) -> dict:
    va, names = parse_voltage(_load(args.file))
    _check_cap(va.base.n_vertices * int(va.group.order))
    g = derived_graph(va)
    derived_names = tuple(
        f"{names[v]}@{format_element(va.group, a)}"
        for v in range(va.base.n_vertices)
        for a in va.group.elements())
    m = Premaniplex(g)
    report = {"flags": g.n_vertices, "maniplex": is_maniplex(m)[0]}
    return _emit(args, report, "graph", serialize_graph(g, derived_names))


def cmd_check_voltage(args) -> dict:
    va, _ = parse_voltage(_load(args.file))
    battery = "full" if args.full else "reduced"
    mani_ok, mani_why = check_derived_maniplex(va)
    if not mani_ok:
        # the polytopality batteries presuppose a derived maniplex
        return {"battery": battery, "maniplex": False,
                "maniplex_witness": _plain(mani_why),
                "polytopal": False, "witness": None}
    check = full_voltage_battery if args.full else check_polytopal_voltage
    poly_ok, poly_why = check(va)
    return {"battery": battery, "maniplex": True,
            "maniplex_witness": None,
            "polytopal": poly_ok, "witness": _plain(poly_why)}


def cmd_intersect(args) -> dict:
    if (args.dim is None) == (args.group is None):
        raise ValueError("give exactly one of --dim or --group")
    group = (BooleanGroup(args.dim) if args.dim is not None
             else parse_group(_load(args.group)))
    A = closure(group, _element_csv(group, args.a))
    B = closure(group, _element_csv(group, args.b))
    if (args.rep_a is None) != (args.rep_b is None):
        raise ValueError("coset intersection needs both --rep-a and --rep-b")
    if args.rep_a is not None:
        ca = CosetHandle(A, parse_element(group, _token_element(group, args.rep_a),
                                          "--rep-a"), "right")
        cb = CosetHandle(B, parse_element(group, _token_element(group, args.rep_b),
                                          "--rep-b"), "right")
        got = coset_intersect(ca, cb)
        if got is None:
            return {"kind": "cosets", "empty": True}
        return {"kind": "cosets", "empty": False, "size": got.subgroup.size,
                "elements": [format_element(group, x) for x in got.elements()]}
    meet = intersect_subgroups(A, B)
    return {"kind": "subgroups", "size": meet.size,
            "elements": [format_element(group, x) for x in meet.elements()]}


def cmd_coset_polytope(args) -> dict:
    va, _ = parse_voltage(_load(args.voltages))
    _check_cap(va.base.n_vertices * int(va.group.order))
    p = build_coset_polytope(va)
    counts = [len(p.faces_of_rank(r)) for r in range(p.rank)]
    return _emit(args, {"rank": p.rank, "face_counts": counts},
                 "poset", serialize_poset(p))


def cmd_regular(args) -> dict:
    group = parse_group(_load(args.group))
    gens = _element_csv(group, args.gens)
    p = build_regular_polytope(group, gens)
    counts = [len(p.faces_of_rank(r)) for r in range(p.rank)]
    return _emit(args, {"rank": p.rank, "face_counts": counts,
                        "string_c_group": True},
                 "poset", serialize_poset(p))


def cmd_caterpillar_build(args) -> dict:
    cw = CaterpillarWord(args.rank, _csv_ints(args.word))
    x = caterpillar_to_premaniplex(cw)
    names = tuple(f"x{v}" for v in range(x.n_vertices))
    report = {"rank": cw.rank, "word": list(cw.word),
              "vertices": x.n_vertices}
    return _emit(args, report, "graph", serialize_graph(x.graph, names))


def cmd_caterpillar_classify(args) -> dict:
    cw = CaterpillarWord(args.rank, _csv_ints(args.word))
    if args.confirm:
        _check_cap((cw.length + 1)
                   * int(boolean_voltages(cw).group.order))
    cls = classify_caterpillar(cw, confirm=args.confirm)
    return {"rank": cw.rank, "word": list(cw.word),
            "symmetric": cls.symmetric, "boolean_stg": cls.boolean_stg,
            "case3": _plain(cls.case3), "case4": _plain(cls.case4),
            "confirmed": cls.confirmed}


def cmd_caterpillar_korbit(args) -> dict:
    cw = generate_korbit_word(args.rank, args.orbits)
    _check_cap((cw.length + 1) * int(boolean_voltages(cw).group.order))
    poset, rep = build_korbit_polytope(args.rank, args.orbits)
    report = {"word": list(rep.word), "boolean_dim": rep.boolean_dim,
              "flags": rep.n_flags, "aut_order": rep.aut_order,
              "aut_is_boolean": rep.aut_is_boolean, "orbits": rep.orbits,
              "stg_is_caterpillar": rep.stg_is_caterpillar}
    if args.emit is None:
        return report
    with open(args.emit, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(serialize_poset(poset), indent=2) + "\n")
    report["artifacts"] = [args.emit]
    return report


def cmd_export_dot(args) -> dict:
    obj = _load(args.file)
    kind = kind_of(obj)
    if kind == "poset":
        text = hasse_to_dot(parse_poset(obj))
    elif kind == "voltage":
        va, names = parse_voltage(obj)
        g = va.base.graph
        ident = va.group.identity
        labels = {idx: str(format_element(va.group, int(va.volt[d])))
                  for idx, d in enumerate(g.edge_reps())
                  if int(va.volt[d]) != ident
                  or int(va.volt[g.inverse[d]]) != ident}
        text = graph_to_dot(g, names, labels)
    else:
        g, names = parse_graph(obj)
        text = graph_to_dot(g, names)
    return _emit(args, {"kind": kind}, "dot", None, text=text)


def _csv_ints(spec: str) -> tuple[int, ...]:
    spec = spec.strip()
    if not spec:
        return ()
    try:
        return tuple(int(tok) for tok in spec.split(","))
    except ValueError as err:
        raise ValueError(f"expected comma-separated integers, got {spec!r}") \
            from err


def _token_element(group, token: str):
    # Boolean elements stay bit strings; table ids are plain integers.
    if isinstance(group, BooleanGroup):
        return token
    return int(token) if token.lstrip("-").isdigit() else token


def _element_csv(group, spec: str) -> tuple[int, ...]:
    return tuple(parse_element(group, _token_element(group, tok),
                               f"element {tok!r}")
                 for tok in spec.split(",") if tok.strip())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="maniplex",
        description="Maniplexes, polytopes, voltages, and caterpillars.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(func=func)
        return p

    p = add("validate", cmd_validate, help="identify and validate a document")
    p.add_argument("file")

    p = add("polytopal", cmd_polytopal,
            help="path-intersection or poset polytopality check")
    p.add_argument("file")
    flavor = p.add_mutually_exclusive_group()
    flavor.add_argument("--weak", action="store_true")
    flavor.add_argument("--strong", action="store_true")

    p = add("flag-graph", cmd_flag_graph, help="flag graph of a poset")
    p.add_argument("file")
    p.add_argument("--out")

    p = add("poset", cmd_poset, help="face poset of a maniplex")
    p.add_argument("file")
    p.add_argument("--out")

    p = add("dual", cmd_dual, help="reverse colors or flip a poset")
    p.add_argument("file")
    p.add_argument("--out")

    p = add("chains", cmd_chains, help="chains of a given type")
    p.add_argument("file")
    p.add_argument("--type", required=True, metavar="CSV")

    p = add("autgroup", cmd_autgroup, help="automorphism group of a maniplex")
    p.add_argument("file")

    p = add("orbits", cmd_orbits, help="flag orbits under automorphisms")
    p.add_argument("file")
    p.add_argument("--subgroup", metavar="CSV")

    p = add("stg", cmd_stg, help="symmetry type graph")
    p.add_argument("file")
    p.add_argument("--subgroup", metavar="CSV")
    p.add_argument("--out")

    p = add("derive", cmd_derive, help="derived graph of a voltage assignment")
    p.add_argument("file")
    p.add_argument("--out")

    p = add("check-voltage", cmd_check_voltage,
            help="maniplexity and polytopality batteries for voltages")
    p.add_argument("file")
    p.add_argument("--full", action="store_true")

    p = add("intersect", cmd_intersect,
            help="subgroup or coset intersection")
    p.add_argument("--dim", type=int)
    p.add_argument("--group", metavar="FILE")
    p.add_argument("--a", required=True, metavar="CSV")
    p.add_argument("--b", required=True, metavar="CSV")
    p.add_argument("--rep-a")
    p.add_argument("--rep-b")

    p = add("coset-polytope", cmd_coset_polytope,
            help="polytope from a polytopal voltage assignment")
    p.add_argument("--voltages", required=True, metavar="FILE")
    p.add_argument("--out")

    p = add("regular", cmd_regular,
            help="regular polytope from a string C-group")
    p.add_argument("--group", required=True, metavar="FILE")
    p.add_argument("--gens", required=True, metavar="CSV")
    p.add_argument("--out")

    cat = sub.add_parser("caterpillar", help="caterpillar pipelines")
    csub = cat.add_subparsers(dest="subcommand", required=True)
    p = csub.add_parser("build", help="caterpillar premaniplex of a word")
    p.set_defaults(func=cmd_caterpillar_build)
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--word", default="", metavar="CSV")
    p.add_argument("--out")
    p = csub.add_parser("classify", help="structural cases of a word")
    p.set_defaults(func=cmd_caterpillar_classify)
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--word", default="", metavar="CSV")
    p.add_argument("--confirm", action="store_true")
    p = csub.add_parser("korbit", help="k-orbit n-polytope pipeline")
    p.set_defaults(func=cmd_caterpillar_korbit)
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--orbits", type=int, required=True)
    p.add_argument("--emit", metavar="FILE")

    p = add("export-dot", cmd_export_dot, help="DOT rendering of a document")
    p.add_argument("file")
    p.add_argument("--out")

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = args.func(args)
        status, code = "ok", EXIT_OK
    except MalformedInput as err:
        report, status, code = {"error": str(err)}, "fail", EXIT_MALFORMED_JSON
    except SchemaError as err:
        report, status, code = {"error": str(err)}, "fail", EXIT_SCHEMA
    except ValueError as err:
        report, status, code = {"error": str(err)}, "fail", EXIT_PRECONDITION
    print(json.dumps({"status": status, **report}, indent=2, sort_keys=True))
    return code


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
