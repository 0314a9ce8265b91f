"""Command-line front end.

Commands operate on model files (see :mod:`supercech.modelfile`) and print
either human-readable text or a line-oriented ``key=value`` structured format
with all rationals written exactly as ``num/den``.

Exit codes: 0 pass or informational, 1 a verification failed, 2 input error,
3 a requested decision was undecidable with the given flags.
"""

from __future__ import annotations

import argparse
import random
import sys
from fractions import Fraction

from .errors import ParseError, SupercechError, WindowError
from .gluing import INFINITY
from .modelfile import parse_model_file, write_gluing
from .obstruction import (attempt_split, characteristic_factorization,
                          obstruction_cocycle, scaling_action)
from .family import glue_over_p1, rothstein_family
from .secondary import (model_class, secondary_space, verify_a1_containment,
                        verify_obstruction_compatibility)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_UNDECIDED = 3

COMMANDS = ("verify", "splitting-type", "obstruction", "attempt-split",
            "rothstein", "scale", "glue-p1", "secondary", "a1-check",
            "report-all")


class Reporter:
    def __init__(self, structured: bool):
        self.structured = structured
        self.lines: list[str] = []

    def emit(self, key: str, value):
        if isinstance(value, Fraction):
            value = f"{value.numerator}/{value.denominator}"
        if value == INFINITY:
            value = "infinity"
        if self.structured:
            self.lines.append(f"{key}={value}")
        else:
            self.lines.append(f"{key}: {value}")

    def raw(self, text: str):
        if not self.structured:
            self.lines.append(text)

    def flush(self):
        print("\n".join(self.lines))


def _fmt_cochain(c) -> str:
    parts = []
    for key, vec in sorted(c.sections.items()):
        body = ", ".join(str(p) for p in vec)
        parts.append(f"{'|'.join(key)} -> ({body})")
    return "; ".join(parts) if parts else "0"


def _parse_point(text: str) -> dict[str, Fraction]:
    point = {}
    for item in text.split(","):
        name, _, value = item.partition("=")
        if not value:
            raise ParseError(f"--at expects name=rational, got {item!r}")
        point[name.strip()] = Fraction(value.strip())
    return point


def _window(args) -> int | None:
    if args.window_lo is None and args.window_hi is None:
        return None
    lo = abs(args.window_lo or 0)
    hi = abs(args.window_hi or 0)
    return max(lo, hi)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="supercech",
                                 description="exact Cech checks for super gluing data")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--input", required=True, help="model file")
    ap.add_argument("--format", choices=("text", "structured"), default="text")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--window-lo", type=int, default=None)
    ap.add_argument("--window-hi", type=int, default=None)
    ap.add_argument("--level", type=int, default=None,
                    help="obstruction level j (or base-factor count for a1-check)")
    ap.add_argument("--at", type=str, default=None,
                    help="base point, e.g. t=2 or t1=1,t2=-1/2")
    ap.add_argument("--lambda", dest="lam", type=str, default=None,
                    help="scaling parameter (nonzero rational)")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    rep = Reporter(args.format == "structured")
    try:
        doc = parse_model_file(args.input)
    except (ParseError, FileNotFoundError, SupercechError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        code = _dispatch(args, doc, rep)
    except (ParseError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except WindowError as exc:
        print(f"undecidable with current flags: {exc}", file=sys.stderr)
        return EXIT_UNDECIDED
    except SupercechError as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    rep.flush()
    return code


def _require_gluing(doc):
    if doc.gluing is None:
        raise ParseError("this command needs gluing data in the input file")
    return doc.gluing


def _dispatch(args, doc, rep: Reporter) -> int:
    window = _window(args)
    cmd = args.command

    if cmd == "verify":
        code = EXIT_PASS
        if doc.gluing is not None:
            r = doc.gluing.verify_cocycle()
            rep.emit("gluing.checks", r.checks)
            rep.emit("gluing.ok", r.ok)
            for i, f in enumerate(r.failures):
                rep.emit(f"gluing.failure.{i}", str(f))
            if not r.ok:
                code = EXIT_FAIL
        for name, m in doc.gt_models.items():
            mc = model_class(m)
            rep.emit(f"gtmodel.{name}.class_trivial", mc.cls.trivial)
            rep.emit(f"gtmodel.{name}.cross_validated", mc.cross_validated)
        return code

    if cmd == "splitting-type":
        g = _require_gluing(doc)
        if args.at:
            g = g.restrict_fiber(_parse_point(args.at))
            rep.emit("fiber", args.at)
        rep.emit("splitting_type", g.splitting_type())
        return EXIT_PASS

    if cmd == "obstruction":
        g = _require_gluing(doc)
        if args.at:
            g = g.restrict_fiber(_parse_point(args.at))
        level = args.level
        if level is None:
            j = g.splitting_type()
            if j == INFINITY:
                rep.emit("splitting_type", INFINITY)
                rep.emit("class", "0")
                return EXIT_PASS
            level = int(j)
        oc = obstruction_cocycle(g, level, window=window)
        rep.emit("level", oc.level)
        rep.emit("parity", oc.parity)
        rep.emit("trivial", oc.cls.trivial)
        rep.emit("cocycle", _fmt_cochain(oc.cochain))
        rep.emit("canonical", _fmt_cochain(oc.cls.representative))
        return EXIT_PASS

    if cmd == "attempt-split":
        g = _require_gluing(doc)
        result = attempt_split(g, window=window)
        rep.emit("split", result.split)
        if result.split:
            for name, w in sorted(result.witnesses.items()):
                rep.emit(f"witness.{name}", repr(w).replace("\n", " ; "))
        else:
            rep.emit("fatal_level", result.fatal_level)
            rep.emit("fatal_class", _fmt_cochain(result.fatal_class.cls.representative))
        return EXIT_PASS

    if cmd == "rothstein":
        g = _require_gluing(doc)
        fam = rothstein_family(g, "t")
        print(write_gluing(fam.gluing), end="")
        return EXIT_PASS

    if cmd == "scale":
        g = _require_gluing(doc)
        if args.lam is None:
            raise ParseError("scale needs --lambda")
        lam = Fraction(args.lam)
        scaled = scaling_action(g, lam)
        print(write_gluing(scaled), end="")
        return EXIT_PASS

    if cmd == "glue-p1":
        from .family import read_glued_family, write_glued_family
        if doc.base_atlas is not None:
            glued = read_glued_family(doc)
        else:
            glued = glue_over_p1(_require_gluing(doc))
        r = glued.verify()
        rep.emit("witness_exponent", glued.witness_exponent)
        rep.emit("witness_ok", r.ok)
        if not r.ok:
            rep.emit("discrepancy", r.detail)
        else:
            rep.raw("")
            rep.raw(write_glued_family(glued))
        return EXIT_PASS if r.ok else EXIT_FAIL

    if cmd == "secondary":
        if not doc.gt_models:
            raise ParseError("secondary needs a gtmodel section")
        for name, m in doc.gt_models.items():
            mc = model_class(m)
            rep.emit(f"{name}.model_class_trivial", mc.cls.trivial)
            rank = m.total_odd.rank
            for level in range(1, rank + 1):
                for b in range(0, level + 1):
                    a = level - b
                    if a > m.fiber_rank or b > m.base_rank:
                        continue
                    for p in (0, 1):
                        space = secondary_space(m, a, b, p, window=window)
                        rep.emit(f"{name}.dim[a={a},b={b},p={p}]", space.dimension)
        return EXIT_PASS

    if cmd == "a1-check":
        if not doc.gt_models:
            raise ParseError("a1-check needs a gtmodel section")
        code = EXIT_PASS
        for name, m in doc.gt_models.items():
            bs = [args.level] if args.level is not None else \
                list(range(0, m.base_rank))
            for b in bs:
                r = verify_a1_containment(m, b, 0, window=window)
                rep.emit(f"{name}.b={b}.dimension", r.dimension)
                rep.emit(f"{name}.b={b}.ok", r.ok)
                rep.emit(f"{name}.b={b}.nonzero_samples",
                         sum(1 for s in r.samples if not s.lhs_trivial))
                if not r.ok:
                    code = EXIT_FAIL
        return code

    if cmd == "report-all":
        return _report_all(args, doc, rep, window)

    raise ParseError(f"unknown command {cmd}")


def _report_all(args, doc, rep: Reporter, window) -> int:
    rng = random.Random(args.seed)
    code = EXIT_PASS
    if doc.gluing is not None:
        g = doc.gluing
        r = g.verify_cocycle()
        rep.emit("verify.ok", r.ok)
        if not r.ok:
            rep.emit("verify.failure", str(r.failures[0]))
            return EXIT_FAIL
        j = g.splitting_type()
        rep.emit("splitting_type", j)
        if doc.base_odd:
            cr = verify_obstruction_compatibility(g, doc.base_odd)
            rep.emit("compatibility.ok", cr.ok)
            if not cr.ok:
                code = EXIT_FAIL
        elif g.is_family:
            cf = characteristic_factorization(g, window=window)
            rep.emit("factorization.ok", cf.ok)
            if cf.ok and cf.section is not None:
                rep.emit("factorization.section", str(cf.section))
            if cf.omega is not None:
                rep.emit("factorization.class", _fmt_cochain(cf.omega.representative))
            pts = []
            while len(pts) < 3:
                cand = Fraction(rng.randint(-6, 6))
                if cand != 0:
                    pts.append(cand)
            for i, value in enumerate(pts):
                point = {v: value for v in g.base_vars}
                triple = g.embedding_splitting_triple(point)
                rep.emit(f"embedding_triple.{i}",
                         f"{triple.embedding},{triple.fiber},{triple.family}")
                if not triple.lemma_holds:
                    code = EXIT_FAIL
        elif j != INFINITY:
            oc = obstruction_cocycle(g, int(j), window=window)
            rep.emit("obstruction.trivial", oc.cls.trivial)
            rep.emit("obstruction.canonical", _fmt_cochain(oc.cls.representative))
            result = attempt_split(g, window=window)
            rep.emit("attempt_split.split", result.split)
        else:
            result = attempt_split(g, window=window)
            rep.emit("attempt_split.split", result.split)
    for name, m in doc.gt_models.items():
        mc = model_class(m)
        rep.emit(f"gtmodel.{name}.class_trivial", mc.cls.trivial)
        r = verify_a1_containment(m, m.base_rank - 1, 0, window=window)
        rep.emit(f"gtmodel.{name}.a1_ok", r.ok)
        if not r.ok:
            code = EXIT_FAIL
    return code


if __name__ == "__main__":
    sys.exit(main())
