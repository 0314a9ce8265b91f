"""Families of supermanifolds: product families, one-parameter scaling
(Rothstein) families, fiber isomorphism witnesses, and gluing over the two
standard charts of the projective line."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import CocycleError, SupercechError
from .gluing import INFINITY, SuperGluingData, SuperTransition
from .grassmann import GrassmannElement
from .laurent import LaurentPoly, Q
from .obstruction import _scaling_witnesses, scaling_action
from .spaces import Chart, Cover


@dataclass
class FamilySpec:
    """Gluing data flagged as a family, plus fiber-model bookkeeping."""

    gluing: SuperGluingData
    base_vars: tuple[str, ...]
    base_point: dict[str, Fraction] | None = None

    def fiber(self, point: dict[str, Fraction]) -> SuperGluingData:
        return self.gluing.restrict_fiber(point)


def extend_with_base(g: SuperGluingData, base_vars: tuple[str, ...]) -> SuperGluingData:
    """Append shared base coordinates to every chart; transitions keep their
    expressions and map the new coordinates identically."""
    for v in base_vars:
        for ch in g.cover.charts.values():
            if v in ch.vars:
                raise ValueError(f"coordinate {v} already in use on {ch.name}")
    charts = [Chart(ch.name, ch.fiber_vars, ch.base_vars + tuple(base_vars), ch.odd_rank)
              for ch in (g.cover.chart(n) for n in g.cover.order)]
    cover = Cover(charts, g.cover.overlaps, g.cover.triples)
    transitions = {}
    for (a, b), t in g.transitions.items():
        src = cover.chart(a)
        even = {v: _extend(gr, src) for v, gr in t.even_maps.items()}
        for v in base_vars:
            even[v] = GrassmannElement.even_var(src.vars, src.odd_rank, v)
        odd = {k: _extend(gr, src) for k, gr in t.odd_maps.items()}
        transitions[(a, b)] = SuperTransition(src, cover.chart(b), even, odd, check=False)
    return SuperGluingData(cover, transitions, base_vars=tuple(g.base_vars) + tuple(base_vars),
                           declared_splitting_type=g.declared_splitting_type)


def _extend(g: GrassmannElement, chart: Chart) -> GrassmannElement:
    return GrassmannElement(chart.vars, chart.odd_rank,
                            {i: c.with_context(chart.vars) for i, c in g.terms.items()})


def split_family(split_model: SuperGluingData, base_vars: tuple[str, ...]) -> FamilySpec:
    """Constant family with the given (split) fiber model."""
    fam = extend_with_base(split_model, base_vars)
    report = fam.verify_cocycle()
    if not report.ok:
        raise CocycleError(str(report.failures[0]))
    return FamilySpec(fam, tuple(base_vars))


def rothstein_family(g: SuperGluingData, base_var: str = "t") -> FamilySpec:
    """One-parameter family scaling the odd directions by the base coordinate.

    The transitions are the conjugates of those of ``g`` by theta -> t*theta,
    so the fiber over t is the t-scaling of ``g`` (the fiber over 1 is ``g``
    itself, the fiber over 0 the split model); higher-order tail terms are
    generated by the substitution itself.  A level-j deviation picks up t^j
    (j even) resp. t^(j-1) (j odd).  For split input the result is the
    constant family.
    """
    report = g.verify_cocycle()
    if not report.ok:
        raise CocycleError(str(report.failures[0]))
    extended = extend_with_base(g, (base_var,))
    if g.splitting_type(verify=False) == INFINITY:
        return FamilySpec(extended, (base_var,), base_point={base_var: Q(0)})
    fam = scaling_action(extended, base_var)
    report = fam.verify_cocycle()
    if not report.ok:
        raise CocycleError("scaling produced invalid data: "
                           + str(report.failures[0]))
    return FamilySpec(fam, (base_var,), base_point={base_var: Q(0)})


def is_weakly_centrally_split(family: FamilySpec) -> bool:
    """True when the fiber over the distinguished base point is certified
    split by the level-by-level solver; needs a recorded base point."""
    from .obstruction import attempt_split
    if family.base_point is None:
        raise SupercechError("no distinguished base point recorded")
    fiber = family.fiber(family.base_point)
    return attempt_split(fiber).split


# --------------------------------------------------------------- witnesses


@dataclass
class WitnessReport:
    ok: bool
    detail: str = ""


def star_witnesses(g: SuperGluingData, factor) -> dict[str, SuperTransition]:
    """Chartwise odd-scaling automorphisms theta -> factor * theta (the maps
    whose conjugation defines the scaling action)."""
    if isinstance(factor, LaurentPoly):
        def factor_inverse(chart):
            return factor.with_context(chart.vars).inverse()
    else:
        c = Fraction(factor)
        if c == 0:
            raise ValueError("zero scaling factor")

        def factor_inverse(chart):
            return LaurentPoly.const(chart.vars, 1 / c)
    return _scaling_witnesses(g, factor_inverse)


def isotriviality_witness(family: FamilySpec, t0: Fraction, t1: Fraction):
    """Scaling map with parameter t1/t0 conjugating the fiber over t0 into
    the fiber over t1; the identity is verified exactly."""
    t0, t1 = Fraction(t0), Fraction(t1)
    if t0 == 0 or t1 == 0:
        raise ValueError("isotriviality witnesses need nonzero parameters")
    if len(family.base_vars) != 1:
        raise SupercechError("one-parameter family expected")
    tvar = family.base_vars[0]
    fib0 = family.fiber({tvar: t0})
    fib1 = family.fiber({tvar: t1})
    lam = t1 / t0
    conj = scaling_action(fib0, lam)
    witnesses = star_witnesses(fib0, lam)
    if conj == fib1:
        return witnesses, WitnessReport(True)
    for key in conj.transitions:
        if conj.transitions[key] != fib1.transitions[key]:
            return witnesses, WitnessReport(False, f"fibers differ on overlap {key}")
    return witnesses, WitnessReport(False, "fibers differ")


# ------------------------------------------------------- gluing over P^1


@dataclass
class GluedFamily:
    """Two one-parameter families over the standard affine charts of the
    projective line, glued by a scaling witness over t' = 1/t."""

    piece_low: FamilySpec            # over Spec Q[t]
    piece_high: FamilySpec           # over Spec Q[t']
    base_vars: tuple[str, str]
    witness_exponent: int            # the witness is (t^exponent) *

    def verify(self) -> WitnessReport:
        """Check, as exact Laurent identities in t, that scaling by
        t^exponent maps the low piece onto the high piece pulled back along
        t' = 1/t."""
        t, tp = self.base_vars
        low = self.piece_low.gluing
        factor = LaurentPoly.var(low.cover.chart(low.cover.order[0]).vars,
                                 t, self.witness_exponent)
        conj = low.conjugate(star_witnesses(low, factor))
        high = self.piece_high.gluing
        for key in conj.transitions:
            got = conj.transitions[key]
            expected = _pull_base(high.transitions[key], tp, t, -1,
                                  got.source, got.target)
            if got != expected:
                for v in got.target.vars:
                    if got.even_maps[v] != expected.even_maps[v]:
                        return WitnessReport(
                            False, f"overlap {key}: even map {v} differs by "
                                   f"{got.even_maps[v] - expected.even_maps[v]}")
                for b in range(1, got.target.odd_rank + 1):
                    if got.odd_maps[b] != expected.odd_maps[b]:
                        return WitnessReport(
                            False, f"overlap {key}: odd map theta_{b} differs by "
                                   f"{got.odd_maps[b] - expected.odd_maps[b]}")
        return WitnessReport(True)


def _pull_base(tr: SuperTransition, old_var: str, new_var: str, exponent: int,
               src: Chart, tgt: Chart) -> SuperTransition:
    """Rename the base coordinate old_var to new_var^exponent in a transition
    (substitution of the base change into every coefficient)."""
    even_images = {}
    for v in tr.source.vars:
        if v == old_var:
            even_images[v] = GrassmannElement.from_poly(
                LaurentPoly.var(src.vars, new_var, exponent), src.odd_rank)
        else:
            even_images[v] = GrassmannElement.even_var(src.vars, src.odd_rank, v)
    odd_images = {k: GrassmannElement.odd_gen(src.vars, src.odd_rank, k)
                  for k in range(1, src.odd_rank + 1)}
    even = {}
    for v, g in tr.even_maps.items():
        name = new_var if v == old_var else v
        image = g.substitute(even_images, odd_images, src.vars, src.odd_rank)
        if v == old_var:
            # the base map t' = t' turns into t = t after renaming
            image = GrassmannElement.even_var(src.vars, src.odd_rank, new_var)
        even[name] = image
    odd = {k: g.substitute(even_images, odd_images, src.vars, src.odd_rank)
           for k, g in tr.odd_maps.items()}
    return SuperTransition(src, tgt, even, odd, check=False)


def glue_over_p1(g: SuperGluingData, base_vars: tuple[str, str] = ("t", "s"),
                 witness_exponent: int = -2) -> GluedFamily:
    """One-parameter scaling families of ``g`` over the two standard charts,
    glued over t' = 1/t with the (t^-2)-scaling witness."""
    low = rothstein_family(g, base_vars[0])
    high = rothstein_family(g, base_vars[1])
    return GluedFamily(low, high, tuple(base_vars), witness_exponent)


def write_glued_family(glued: GluedFamily) -> str:
    """Serialize as the low piece plus a base-atlas section; the high piece
    is the same construction in the second base coordinate."""
    from .modelfile import ModelDocument, write_document
    doc = ModelDocument(gluing=glued.piece_low.gluing,
                        base_atlas={"base_vars": glued.base_vars,
                                    "witness_exponent": glued.witness_exponent})
    return write_document(doc)


def read_glued_family(doc) -> GluedFamily:
    """Rebuild a glued family from a document carrying a base atlas: the
    fiber over 1 of the stored piece regenerates both pieces."""
    if doc.base_atlas is None or doc.gluing is None:
        raise SupercechError("document carries no base atlas")
    base_vars = doc.base_atlas["base_vars"]
    exponent = doc.base_atlas.get("witness_exponent", -2)
    fiber = doc.gluing.restrict_fiber({base_vars[0]: Q(1)})
    return glue_over_p1(fiber, tuple(base_vars), exponent)
