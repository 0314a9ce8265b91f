"""Obstruction cocycles, the level-by-level splitting attempt, splitting-type
differentials, characteristic-section factorization and the scaling action.

Level-j deviation data of gluing data is packaged as a 1-cochain valued in a
hom sheaf.  With Z the degree-one odd coefficient matrices and J the reduced
Jacobians, the normalized deviation blocks ``J^-1 . D`` (j even, deviations
of the even maps) resp. ``Z^-1 . D`` (j odd, deviations of the odd maps)
satisfy the standard cocycle transformation for sections of
``hom(exterior_power(Z, j), J-spec resp. Z-spec)``; those are the sheaves in
which obstruction classes are decided here.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .cech import (CechCochain, CohomologyClass, cohomology_class, is_cocycle,
                   solve_coboundary)
from .errors import CocycleError, LevelError, SupercechError
from .gluing import (INFINITY, SuperGluingData, SuperTransition,
                     identity_transition, invert_laurent_matrix)
from .grassmann import GrassmannElement
from .laurent import LaurentPoly, Q
from .sheaf import SheafSpec, sheaf_dual, sheaf_exterior_power, sheaf_hom


# ------------------------------------------------------------ basic specs


def tangent_spec(space) -> SheafSpec:
    """Spec with the reduced Jacobian matrices (components of vector fields)."""
    mats = {}
    for (a, b) in space.cover.overlaps:
        mats[(a, b)] = space.jacobian(a, b)
    rank = len(space.cover.chart(space.cover.order[0]).vars)
    return SheafSpec(space, rank, mats, check=False)


def cotangent_spec(space) -> SheafSpec:
    return sheaf_dual(tangent_spec(space))


def deviation_hom_spec(g: SuperGluingData, level: int,
                       reduced=None) -> SheafSpec:
    """Sheaf housing normalized level-j deviation cochains."""
    space, odd_spec = reduced if reduced is not None else g.reduce(verify=False)
    source = sheaf_exterior_power(odd_spec, level)
    target = tangent_spec(space) if level % 2 == 0 else odd_spec
    return sheaf_hom(source, target)


# --------------------------------------------------------------- extraction


@dataclass
class ObstructionClass:
    level: int
    cochain: CechCochain            # raw normalized deviation cocycle
    cls: CohomologyClass            # canonical class decision
    parity: str                     # "even" | "odd"

    def is_zero(self) -> bool:
        return self.cls.trivial

    def representative(self) -> CechCochain:
        return self.cls.representative


def _deviation_blocks(g: SuperGluingData, t: SuperTransition, level: int):
    """Rows: target coordinates (even maps for even level, odd maps for odd
    level); columns: increasing multi-indices of weight `level`."""
    q = t.source.odd_rank
    idxs = list(combinations(range(1, q + 1), level))
    pos = {I: k for k, I in enumerate(idxs)}
    vars = t.source.vars
    if level % 2 == 0:
        rows = [t.even_maps[v].component(level) for v in t.target.vars]
    else:
        rows = [t.odd_maps[b].component(level) for b in range(1, t.target.odd_rank + 1)]
    out = []
    for row in rows:
        entries = [LaurentPoly.zero(vars) for _ in idxs]
        for I, coeff in row.terms.items():
            entries[pos[I]] = coeff
        out.append(entries)
    return out, idxs


def obstruction_cocycle(g: SuperGluingData, level: int, reduced=None,
                        window: int | None = None) -> ObstructionClass:
    """Extract the level-j deviation cocycle; requires no deviation below j."""
    dev = g.splitting_type(verify=False)
    if dev < level:
        raise LevelError(f"deviation already present at level {dev} < {level}")
    reduced = reduced if reduced is not None else g.reduce(verify=False)
    cochain = deviation_cochain(g, level, reduced)
    cls = cohomology_class(cochain, window=window)
    return ObstructionClass(level, cochain, cls, "even" if level % 2 == 0 else "odd")


def deviation_cochain(g: SuperGluingData, level: int, reduced=None) -> CechCochain:
    """Normalized level-j deviation data as a hom-sheaf 1-cochain (raw, not
    reduced to a canonical representative)."""
    space, odd_spec = reduced if reduced is not None else g.reduce(verify=False)
    hom = deviation_hom_spec(g, level, (space, odd_spec))
    sections = {}
    for (a, b) in g.cover.canonical_overlaps():
        t = g.transitions[(a, b)]
        blocks, idxs = _deviation_blocks(g, t, level)
        if level % 2 == 0:
            normalizer = invert_laurent_matrix(space.jacobian(a, b))
        else:
            normalizer = invert_laurent_matrix(t.odd_matrix())
        if normalizer is None:
            raise SupercechError(f"transition ({a},{b}) is not Laurent-invertible")
        if g.is_family and level % 2 == 0:
            base_rows = [i for i, v in enumerate(t.target.vars) if v in g.base_vars]
            for i in base_rows:
                if any(not e.is_zero() for e in blocks[i]):
                    raise CocycleError(
                        f"deviation of ({a},{b}) has a base-direction component")
        normalized = _lmat_mul(normalizer, blocks)
        flat = []
        for i in range(len(normalized)):
            flat.extend(normalized[i])
        sections[(a, b)] = flat
    cochain = CechCochain(hom, 1, sections)
    if not is_cocycle(cochain):
        raise CocycleError("extracted deviation data is not a cocycle")
    return cochain


def _lmat_mul(a, b):
    out = []
    for row in a:
        out_row = []
        for j in range(len(b[0]) if b else 0):
            acc = LaurentPoly.zero(row[0].vars)
            for k, e in enumerate(row):
                if not e.is_zero() and not b[k][j].is_zero():
                    acc = acc + e * b[k][j]
            out_row.append(acc)
        out.append(out_row)
    return out


# ------------------------------------------------------------ attempt split


@dataclass
class SplitReport:
    split: bool
    witnesses: dict[str, SuperTransition] | None   # chartwise changes, when split
    split_data: SuperGluingData | None
    fatal_level: int | None = None
    fatal_class: ObstructionClass | None = None


def attempt_split(g: SuperGluingData, window: int | None = None) -> SplitReport:
    """Iteratively remove the deviation level by level.

    At each level j the deviation cocycle is tested for triviality; a witness
    is realized as a chartwise change of coordinates (identity plus degree-j
    correction) which pushes the deviation to level j + 1.  Stops with the
    first non-removable class, which is then certified nontrivial.
    """
    report = g.verify_cocycle()
    if not report.ok:
        raise CocycleError(str(report.failures[0]))
    q = next(iter(g.cover.charts.values())).odd_rank
    current = g
    total: dict[str, SuperTransition] = {
        name: identity_transition(g.cover.chart(name)) for name in g.cover.order}
    for level in range(2, q + 1):
        dev = current.splitting_type(verify=False)
        if dev == INFINITY:
            break
        if dev > level:
            continue
        reduced = current.reduce(verify=False)
        cochain = deviation_cochain(current, level, reduced)
        if cochain.is_zero():
            continue
        witness = solve_coboundary(cochain, window=window)
        if witness is None:
            cls = cohomology_class(cochain, window=window)
            return SplitReport(False, None, None, level,
                               ObstructionClass(level, cochain, cls,
                                                "even" if level % 2 == 0 else "odd"))
        corrections = _witness_to_coordinate_change(current, witness, level)
        current = current.conjugate(corrections)
        total = {name: _compose_auto(total[name], corrections[name])
                 for name in g.cover.order}
        if current.splitting_type(verify=False) <= level:
            raise SupercechError("correction did not clear the level")
    if current.splitting_type(verify=False) != INFINITY:
        raise SupercechError("levels exhausted but deviation remains")
    return SplitReport(True, total, current)


def _compose_auto(first: SuperTransition, second: SuperTransition) -> SuperTransition:
    from .gluing import compose_transitions
    return compose_transitions(first, second)


def _witness_to_coordinate_change(g: SuperGluingData, witness: CechCochain,
                                  level: int) -> dict[str, SuperTransition]:
    """Realize a 0-cochain witness as chartwise coordinate changes
    (identity minus the witness, placed at odd degree `level`)."""
    q = next(iter(g.cover.charts.values())).odd_rank
    idxs = list(combinations(range(1, q + 1), level))
    out = {}
    for name in g.cover.order:
        chart = g.cover.chart(name)
        vars = chart.vars
        vec = witness.sections[(name,)]
        n_targets = len(vars) if level % 2 == 0 else chart.odd_rank
        ident = identity_transition(chart)
        even = dict(ident.even_maps)
        odd = dict(ident.odd_maps)
        for t_index in range(n_targets):
            correction = GrassmannElement.zero(vars, chart.odd_rank)
            for k, I in enumerate(idxs):
                coeff = vec[t_index * len(idxs) + k]
                if coeff.is_zero():
                    continue
                correction = correction + GrassmannElement(
                    vars, chart.odd_rank, {I: coeff})
            if correction.is_zero():
                continue
            if level % 2 == 0:
                v = vars[t_index]
                even[v] = even[v] - correction
            else:
                b = t_index + 1
                odd[b] = odd[b] - correction
        out[name] = SuperTransition(chart, chart, even, odd, check=False)
    return out


# ---------------------------------------------------------- scaling action


def _scaling_witnesses(g: SuperGluingData, factor_inverse) -> dict[str, SuperTransition]:
    out = {}
    for name in g.cover.order:
        chart = g.cover.chart(name)
        ident = identity_transition(chart)
        odd = {}
        for b in range(1, chart.odd_rank + 1):
            gen = GrassmannElement.odd_gen(chart.vars, chart.odd_rank, b)
            odd[b] = gen * factor_inverse(chart)
        out[name] = SuperTransition(chart, chart, dict(ident.even_maps), odd, check=False)
    return out


def scaling_action(g: SuperGluingData, factor) -> SuperGluingData:
    """Conjugate the gluing data by the odd-coordinate scaling theta -> c*theta.

    ``factor`` is a nonzero rational or the name of a base coordinate (the
    latter makes the deviation coefficients polynomial in that coordinate, as
    used for the one-parameter scaling family).  Classes at level j scale by
    factor^j (j even) and factor^(j-1) (j odd).
    """
    if isinstance(factor, str):
        def factor_inverse(chart):
            return LaurentPoly.var(chart.vars, factor, -1)
    else:
        c = Fraction(factor)
        if c == 0:
            raise ValueError("scaling factor must be nonzero")

        def factor_inverse(chart):
            return LaurentPoly.const(chart.vars, 1 / c)
    witnesses = _scaling_witnesses(g, factor_inverse)
    return g.conjugate(witnesses)


def scale_class(oc: ObstructionClass, factor: Fraction) -> ObstructionClass:
    """Action of the scaling on an obstruction class: factor^j for even j,
    factor^(j-1) for odd j."""
    factor = Fraction(factor)
    if factor == 0:
        raise ValueError("scaling factor must be nonzero")
    power = oc.level if oc.level % 2 == 0 else oc.level - 1
    c = factor ** power
    return ObstructionClass(oc.level, oc.cochain.scale(c), oc.cls.scale(c), oc.parity)


# --------------------------------------------- splitting type differential


@dataclass
class SplittingTypeDifferential:
    """Symbolic family obstruction cochain, evaluable at base points."""

    family: SuperGluingData
    level: float
    cochain: CechCochain | None      # None for split families

    def __call__(self, point: dict[str, Fraction]) -> ObstructionClass | None:
        if self.cochain is None:
            return None
        level = int(self.level)
        fiber = self.family.restrict_fiber(point)
        reduced = fiber.reduce(verify=False)
        hom = deviation_hom_spec(fiber, level, reduced)
        q = next(iter(fiber.cover.charts.values())).odd_rank
        n_idx = len(list(combinations(range(q), level)))
        sections = {}
        for key, vec in self.cochain.sections.items():
            family_chart = self.family.cover.chart(key[0])
            lead = fiber.cover.chart(key[0]).vars
            if level % 2 == 0:
                # drop the base-coordinate target rows (zero by the family
                # structure); the fiber tangent keeps the fiber rows only
                rows = [i for i, v in enumerate(family_chart.vars)
                        if v not in self.family.base_vars]
            else:
                rows = list(range(family_chart.odd_rank))
            out = []
            for i in rows:
                for k in range(n_idx):
                    out.append(vec[i * n_idx + k].eval_at(point).with_context(lead))
            sections[key] = out
        cochain = CechCochain(hom, 1, sections)
        cls = cohomology_class(cochain)
        return ObstructionClass(level, cochain, cls,
                                "even" if level % 2 == 0 else "odd")


def splitting_type_differential(g: SuperGluingData) -> SplittingTypeDifferential:
    if not g.is_family:
        raise SupercechError("splitting type differential needs a family")
    level = g.splitting_type()
    if level == INFINITY:
        return SplittingTypeDifferential(g, INFINITY, None)
    return SplittingTypeDifferential(g, level, deviation_cochain(g, int(level)))


# ------------------------------------------------ characteristic sections


@dataclass
class CharacteristicFactorization:
    ok: bool
    section: LaurentPoly | None              # s, over the base coordinates
    omega: CohomologyClass | None            # common fiber class (None if s = 0)
    level: float
    certified_zero_residual: bool
    violation: str | None = None


def _fiber_space_of_family(g: SuperGluingData):
    """Structural fiber space of a product-type family (base coordinates
    dropped); requires reduced data independent of the base coordinates."""
    from .spaces import Chart, Cover, ReducedSpace
    from .sheaf import SheafSpec
    charts = []
    for name in g.cover.order:
        ch = g.cover.chart(name)
        fb = tuple(v for v in ch.base_vars if v not in g.base_vars)
        charts.append(Chart(ch.name, ch.fiber_vars, fb, ch.odd_rank))
    cover = Cover(charts, g.cover.overlaps, g.cover.triples)
    maps = {}
    mats = {}
    for (a, b), t in g.transitions.items():
        av = cover.chart(a).vars
        cmap = {}
        for v, img in t.reduced_map().items():
            if v in g.base_vars:
                continue
            for bad in g.base_vars:
                rng = img.exponent_range(bad)
                if rng is not None and rng != (0, 0):
                    raise SupercechError("reduced data depends on the base; not product-type")
            cmap[v] = img.with_context(av)
        maps[(a, b)] = cmap
        zeta = t.odd_matrix()
        for row in zeta:
            for e in row:
                for bad in g.base_vars:
                    rng = e.exponent_range(bad)
                    if rng is not None and rng != (0, 0):
                        raise SupercechError("odd bundle depends on the base; not product-type")
        mats[(a, b)] = [[e.with_context(av) for e in row] for row in zeta]
    space = ReducedSpace(cover, maps)
    q = charts[0].odd_rank
    return space, SheafSpec(space, q, mats)


def characteristic_factorization(g: SuperGluingData,
                                 window: int | None = None) -> CharacteristicFactorization:
    """Decompose the family obstruction as (base section) x (fixed fiber
    class): collect base-monomial coefficients of the deviation cochain,
    reduce each to its canonical fiber representative and certify that all of
    them lie on one rational line."""
    if not g.is_family:
        raise SupercechError("characteristic factorization needs a family")
    level = g.splitting_type()
    if level == INFINITY:
        # degenerate split case: zero section, class left undefined
        return CharacteristicFactorization(True, LaurentPoly.zero(g.base_vars),
                                           None, INFINITY, True)
    level = int(level)
    fam_cochain = deviation_cochain(g, level)
    fiber_space, fiber_odd = _fiber_space_of_family(g)
    fiber_hom = deviation_hom_spec(g, level, (fiber_space, fiber_odd))

    # per-base-monomial fiber cochains
    by_monomial: dict[tuple[int, ...], dict[tuple, list[LaurentPoly]]] = {}
    for key, vec in fam_cochain.sections.items():
        lead_fiber_vars = fiber_space.cover.chart(key[0]).vars
        for frame, poly in enumerate(vec):
            for m, coeffpoly in poly.split_by(g.base_vars).items():
                data = by_monomial.setdefault(m, {})
                if key not in data:
                    data[key] = [LaurentPoly.zero(lead_fiber_vars)
                                 for _ in range(fiber_hom.rank)]
                data[key][frame] = data[key][frame] + coeffpoly.with_context(lead_fiber_vars)
    monomials = sorted(by_monomial)
    reps: dict[tuple[int, ...], CechCochain] = {}
    witnesses_ok = True
    for m in monomials:
        c = CechCochain(fiber_hom, 1, by_monomial[m])
        cls = cohomology_class(c, window=window)
        reps[m] = cls.representative

    base_point = None
    for m in monomials:
        if not reps[m].is_zero():
            base_point = m
            break
    if base_point is None:
        return CharacteristicFactorization(True, LaurentPoly.zero(g.base_vars),
                                           None, level, True)
    r0 = reps[base_point]
    s_terms: dict[tuple[int, ...], Fraction] = {}
    for m in monomials:
        lam = _proportionality(reps[m], r0)
        if lam is None:
            return CharacteristicFactorization(
                False, None, None, level, False,
                violation=f"coefficient of base monomial {m} is not a rational "
                          f"multiple of the one at {base_point}")
        if lam != 0:
            s_terms[m] = lam
    section = LaurentPoly(g.base_vars, s_terms)
    omega = CohomologyClass(fiber_hom, 1, r0, False, None)
    return CharacteristicFactorization(True, section, omega, level, witnesses_ok)


def _proportionality(c: CechCochain, base: CechCochain) -> Fraction | None:
    """lambda with c = lambda * base, comparing canonical representatives."""
    lam = None
    for key, vec in base.sections.items():
        other = c.sections[key]
        for p, q in zip(vec, other):
            keys = set(p.terms) | set(q.terms)
            for exps in keys:
                pv = p.terms.get(exps, Q(0))
                qv = q.terms.get(exps, Q(0))
                if pv == 0:
                    if qv != 0:
                        return None
                    continue
                ratio = qv / pv
                if lam is None:
                    lam = ratio
                elif ratio != lam:
                    return None
    return Q(0) if lam is None else lam
