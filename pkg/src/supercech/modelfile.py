"""Declarative text format for gluing data, sheaf specs and gt models.

Grammar (line oriented; ``#`` starts a comment; indentation is free)::

    format 1
    chart NAME
      fiber x [y ...]
      base t [...]            # optional
      odd Q
    overlap A B               # ordered; declare both directions
    triple A B C              # optional
    transition A B            # expressions in A-coordinates
      <target-coord> = <expression>
      theta_K = <expression>
    family t [...]            # flags base coordinates (declared on charts)
    base_odd N                # trailing N odd generators are base directions
    splitting_type J          # optional declaration
    sheaf NAME
      rank R
      matrix A B              # R rows of R comma-separated expressions
        <entry>, <entry>, ...
    gtmodel NAME
      fiber_sheaf SHEAFNAME
      base_rank N
      theta A B               # N rows of fiber-rank comma-separated entries
        <entry>, ...

A file holds at most one gluing-data block (charts/overlaps/transitions) and
any number of named sheaves and gt models.  Expressions follow the grammar of
:mod:`supercech.parsing`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ParseError
from .gluing import SuperGluingData, SuperTransition
from .parsing import ExpressionParser
from .secondary import GtModel, gt_model
from .sheaf import SheafSpec
from .spaces import Chart, Cover, ReducedSpace

FORMAT_VERSION = 1


@dataclass
class ModelDocument:
    gluing: SuperGluingData | None = None
    sheaves: dict[str, SheafSpec] = field(default_factory=dict)
    gt_models: dict[str, GtModel] = field(default_factory=dict)
    base_odd: int = 0
    declared_splitting_type: int | None = None
    base_atlas: dict | None = None   # glued-family metadata


def _tokens(line: str) -> list[str]:
    return line.split()


def parse_model_text(text: str) -> ModelDocument:
    lines = text.splitlines()
    charts: list[Chart] = []
    chart_data: dict[str, dict] = {}
    overlaps: list[tuple[str, str]] = []
    triples: list[tuple[str, str, str]] = []
    transitions_raw: dict[tuple[str, str], list[tuple[str, str, int]]] = {}
    family_vars: tuple[str, ...] = ()
    base_odd = 0
    declared = None
    atlas = None
    sheaves_raw: dict[str, dict] = {}
    gt_raw: dict[str, dict] = {}

    mode = None           # ("chart", name) | ("transition", a, b) | ("sheaf", name) | ...
    current = None

    def flush_chart(name):
        d = chart_data[name]
        charts.append(Chart(name, tuple(d.get("fiber", ())),
                            tuple(d.get("base", ())), d.get("odd", 0)))

    pending_chart = None
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        toks = _tokens(line)
        head = toks[0]
        indented = raw[0] in " \t"

        if not indented:
            if pending_chart is not None:
                flush_chart(pending_chart)
                pending_chart = None
            mode = None
            if head == "format":
                if len(toks) != 2 or int(toks[1]) != FORMAT_VERSION:
                    raise ParseError(f"unsupported format version {toks[1:]}", lineno, 1)
            elif head == "chart":
                name = toks[1]
                chart_data[name] = {}
                pending_chart = name
                mode = ("chart", name)
            elif head == "overlap":
                overlaps.append((toks[1], toks[2]))
            elif head == "triple":
                triples.append((toks[1], toks[2], toks[3]))
            elif head == "transition":
                key = (toks[1], toks[2])
                transitions_raw[key] = []
                mode = ("transition", key)
            elif head == "family":
                family_vars = tuple(toks[1:])
            elif head == "base_odd":
                base_odd = int(toks[1])
            elif head == "splitting_type":
                declared = int(toks[1])
            elif head == "sheaf":
                sheaves_raw[toks[1]] = {"rank": None, "matrices": {}}
                mode = ("sheaf", toks[1])
            elif head == "gtmodel":
                gt_raw[toks[1]] = {"fiber_sheaf": None, "base_rank": None, "theta": {}}
                mode = ("gtmodel", toks[1])
            elif head == "baseatlas":
                atlas = {}
                mode = ("baseatlas", atlas)
            else:
                raise ParseError(f"unknown directive {head!r}", lineno, 1)
            continue

        if mode is None:
            raise ParseError("indented line outside any block", lineno, 1)
        kind = mode[0]
        if kind == "chart":
            d = chart_data[mode[1]]
            if head == "fiber":
                d["fiber"] = tuple(toks[1:])
            elif head == "base":
                d["base"] = tuple(toks[1:])
            elif head == "odd":
                d["odd"] = int(toks[1])
            else:
                raise ParseError(f"unknown chart field {head!r}", lineno, 1)
        elif kind == "transition":
            if "=" not in line:
                raise ParseError("transition lines read <coord> = <expression>", lineno, 1)
            lhs, rhs = line.split("=", 1)
            transitions_raw[mode[1]].append((lhs.strip(), rhs.strip(), lineno))
        elif kind == "sheaf":
            d = sheaves_raw[mode[1]]
            if head == "rank":
                d["rank"] = int(toks[1])
            elif head == "matrix":
                d["current"] = (toks[1], toks[2])
                d["matrices"][(toks[1], toks[2])] = []
            else:
                d["matrices"][d["current"]].append((line.strip(), lineno))
        elif kind == "gtmodel":
            d = gt_raw[mode[1]]
            if head == "fiber_sheaf":
                d["fiber_sheaf"] = toks[1]
            elif head == "base_rank":
                d["base_rank"] = int(toks[1])
            elif head == "theta":
                d["current"] = (toks[1], toks[2])
                d["theta"][(toks[1], toks[2])] = []
            else:
                d["theta"][d["current"]].append((line.strip(), lineno))
        elif kind == "baseatlas":
            atlas = mode[1]
            if head == "base_vars":
                atlas["base_vars"] = tuple(toks[1:])
            elif head == "witness_exponent":
                atlas["witness_exponent"] = int(toks[1])
            else:
                raise ParseError(f"unknown base-atlas field {head!r}", lineno, 1)
    if pending_chart is not None:
        flush_chart(pending_chart)

    doc = ModelDocument(base_odd=base_odd, declared_splitting_type=declared,
                        base_atlas=atlas)
    chart_map = {c.name: c for c in charts}

    if transitions_raw:
        cover = Cover(charts, overlaps, triples)
        transitions = {}
        for (a, b), assignments in transitions_raw.items():
            src, tgt = chart_map[a], chart_map[b]
            parser = ExpressionParser(src.vars, src.odd_rank)
            even, odd = {}, {}
            for lhs, rhs, lineno in assignments:
                value = parser.parse(rhs, line=lineno)
                if lhs.startswith("theta_"):
                    odd[int(lhs.split("_", 1)[1])] = value
                else:
                    even[lhs] = value
            transitions[(a, b)] = SuperTransition(src, tgt, even, odd)
        doc.gluing = SuperGluingData(cover, transitions, family_vars, declared)

    space = None
    if sheaves_raw or gt_raw:
        space = _reduced_space_for_sheaves(doc, charts, overlaps, triples)
    for name, d in sheaves_raw.items():
        rank = d["rank"]
        mats = {}
        for key, rows in d["matrices"].items():
            src = chart_map[key[0]]
            parser = ExpressionParser(src.vars, 0)
            m = []
            for text_row, lineno in rows:
                entries = [parser.parse_poly(e.strip(), lineno)
                           for e in text_row.split(",")]
                if len(entries) != rank:
                    raise ParseError(f"matrix row has {len(entries)} entries, want {rank}",
                                     lineno, 1)
                m.append(entries)
            if len(m) != rank:
                raise ParseError(f"matrix {key} has {len(m)} rows, want {rank}")
            mats[key] = m
        doc.sheaves[name] = SheafSpec(space, rank, mats)
    for name, d in gt_raw.items():
        fiber = doc.sheaves[d["fiber_sheaf"]]
        n = d["base_rank"]
        theta_sections = {}
        for key, rows in d["theta"].items():
            src = chart_map[key[0]]
            parser = ExpressionParser(src.vars, 0)
            flat = []
            for text_row, lineno in rows:
                entries = [parser.parse_poly(e.strip(), lineno)
                           for e in text_row.split(",")]
                if len(entries) != fiber.rank:
                    raise ParseError(f"theta row has {len(entries)} entries, "
                                     f"want {fiber.rank}", lineno, 1)
                flat.extend(entries)
            if len(flat) != n * fiber.rank:
                raise ParseError(f"theta {key} must have {n} rows")
            theta_sections[key] = flat
        doc.gt_models[name] = gt_model(space, fiber, n, theta_sections)
    return doc


def _reduced_space_for_sheaves(doc, charts, overlaps, triples) -> ReducedSpace:
    # sheaf matrices live on the reduced space of the file's gluing data; a
    # purely even block (odd 0, even transitions only) serves when the file
    # describes sheaves rather than a supermanifold
    if doc.gluing is None:
        raise ParseError("sheaf/gtmodel sections need gluing data for the coordinate maps")
    space, _ = doc.gluing.reduce()
    return space


def parse_model_file(path) -> ModelDocument:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_model_text(fh.read())


# ------------------------------------------------------------------ writers


def write_gluing(g: SuperGluingData, declared: int | None = None) -> str:
    out = [f"format {FORMAT_VERSION}", ""]
    for name in g.cover.order:
        ch = g.cover.chart(name)
        out.append(f"chart {name}")
        if ch.fiber_vars:
            out.append("  fiber " + " ".join(ch.fiber_vars))
        if ch.base_vars:
            out.append("  base " + " ".join(ch.base_vars))
        out.append(f"  odd {ch.odd_rank}")
        out.append("")
    for (a, b) in g.cover.overlaps:
        out.append(f"overlap {a} {b}")
    for (a, b, c) in g.cover.triples:
        out.append(f"triple {a} {b} {c}")
    out.append("")
    for (a, b) in g.cover.overlaps:
        t = g.transitions[(a, b)]
        out.append(f"transition {a} {b}")
        for v in t.target.vars:
            out.append(f"  {v} = {t.even_maps[v]}")
        for k in range(1, t.target.odd_rank + 1):
            out.append(f"  theta_{k} = {t.odd_maps[k]}")
        out.append("")
    if g.base_vars:
        out.append("family " + " ".join(g.base_vars))
    if declared is not None:
        out.append(f"splitting_type {declared}")
    return "\n".join(out).rstrip() + "\n"


def write_sheaf(name: str, spec: SheafSpec) -> str:
    out = [f"sheaf {name}", f"  rank {spec.rank}"]
    for (a, b), m in spec.matrices.items():
        out.append(f"  matrix {a} {b}")
        for row in m:
            out.append("    " + ", ".join(str(e) for e in row))
    return "\n".join(out) + "\n"


def write_gt_model(name: str, m: GtModel, fiber_sheaf_name: str) -> str:
    out = [f"gtmodel {name}",
           f"  fiber_sheaf {fiber_sheaf_name}",
           f"  base_rank {m.base_rank}"]
    for (a, b), flat in m.theta.sections.items():
        out.append(f"  theta {a} {b}")
        for i in range(m.base_rank):
            row = flat[i * m.fiber_rank:(i + 1) * m.fiber_rank]
            out.append("    " + ", ".join(str(e) for e in row))
    return "\n".join(out) + "\n"


def write_document(doc: ModelDocument) -> str:
    parts = []
    if doc.gluing is not None:
        parts.append(write_gluing(doc.gluing, doc.declared_splitting_type))
    else:
        parts.append(f"format {FORMAT_VERSION}\n")
    if doc.base_odd:
        parts.append(f"base_odd {doc.base_odd}\n")
    for name, spec in doc.sheaves.items():
        parts.append(write_sheaf(name, spec))
    fiber_names = {id(spec): name for name, spec in doc.sheaves.items()}
    for name, m in doc.gt_models.items():
        fname = fiber_names.get(id(m.fiber_spec), "fiber")
        parts.append(write_gt_model(name, m, fname))
    if doc.base_atlas:
        block = ["baseatlas"]
        if "base_vars" in doc.base_atlas:
            block.append("  base_vars " + " ".join(doc.base_atlas["base_vars"]))
        if "witness_exponent" in doc.base_atlas:
            block.append(f"  witness_exponent {doc.base_atlas['witness_exponent']}")
        parts.append("\n".join(block) + "\n")
    return "\n".join(parts)
