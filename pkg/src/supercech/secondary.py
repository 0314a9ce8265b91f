"""Product-type models whose odd bundle is an extension ("gt models"),
their secondary obstruction complex, and the model-class map.

A gt model over a point-reduced superspace base consists of a fiber odd
bundle spec on the curve, a trivial rank-n base spec, and an extension
cocycle theta valued in hom(fiber, base).  The exterior powers of the
extension bundle carry the filtration by base-factor count; the graded
spaces, the connecting differentials between them, and the cup-with-theta
construction are all computed exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import factorial

from .cech import (CechCochain, CohomologyClass, ShortExactSequence,
                   cohomology_basis, cohomology_class, connecting_map,
                   cup_product, extension_sheaf, is_coboundary, is_cocycle,
                   solve_coboundary, _qmat_vec)
from .errors import CocycleError, SupercechError
from .gluing import SuperGluingData, restrict_odd
from .laurent import LaurentPoly, Q
from .obstruction import (cotangent_spec, deviation_cochain,
                          deviation_hom_spec)
from .sheaf import (SheafSpec, filtration, hom_unflatten, sheaf_exterior_power,
                    sheaf_hom, sheaf_tensor, trivial_spec)
from .spaces import ReducedSpace


def qkron(a: list[list[Fraction]], b: list[list[Fraction]]) -> list[list[Fraction]]:
    if not a or not b:
        return []
    out = []
    for i in range(len(a)):
        for j in range(len(b)):
            row = []
            for k in range(len(a[0])):
                for l in range(len(b[0])):
                    row.append(a[i][k] * b[j][l])
            out.append(row)
    return out


def qeye(n: int) -> list[list[Fraction]]:
    return [[Q(1) if i == j else Q(0) for j in range(n)] for i in range(n)]


@dataclass
class GtModel:
    space: ReducedSpace
    fiber_spec: SheafSpec
    base_spec: SheafSpec
    theta: CechCochain          # 1-cocycle valued in hom(fiber_spec, base_spec)
    total_odd: SheafSpec        # extension_sheaf(base_spec, fiber_spec, theta)

    @property
    def base_rank(self) -> int:
        return self.base_spec.rank

    @property
    def fiber_rank(self) -> int:
        return self.fiber_spec.rank


def gt_model(space: ReducedSpace, fiber_spec: SheafSpec, base_rank: int,
             theta_sections: dict[tuple, list[LaurentPoly]]) -> GtModel:
    base_spec = trivial_spec(space, base_rank)
    hom = sheaf_hom(fiber_spec, base_spec)
    theta = CechCochain(hom, 1, theta_sections)
    if not is_cocycle(theta):
        raise CocycleError("theta is not a cocycle")
    total = extension_sheaf(base_spec, fiber_spec, theta)
    return GtModel(space, fiber_spec, base_spec, theta, total)


# -------------------------------------------------------------- model class


@dataclass
class ModelClassReport:
    cls: CohomologyClass
    cross_validated: bool
    sign: int | None     # delta(identity) = sign * theta up to coboundary


def model_class(m: GtModel, cross_validate: bool = True) -> ModelClassReport:
    """Class of the extension cocycle; cross-validated against the connecting
    image of the identity section in the hom-twisted exact sequence."""
    cls = cohomology_class(m.theta)
    if not cross_validate:
        return ModelClassReport(cls, False, None)
    hom_sub = sheaf_hom(m.fiber_spec, m.base_spec)
    hom_tot = sheaf_hom(m.fiber_spec, m.total_odd)
    hom_quot = sheaf_hom(m.fiber_spec, m.fiber_spec)
    s, q = m.base_rank, m.fiber_rank
    incl = [[Q(1) if i == j else Q(0) for j in range(s)] for i in range(s + q)]
    proj = [[Q(1) if j == s + i else Q(0) for j in range(s + q)] for i in range(q)]
    ses = ShortExactSequence(hom_sub, hom_tot, hom_quot,
                             qkron(incl, qeye(q)), qkron(proj, qeye(q)))
    ident_sections = {}
    for name in m.space.cover.order:
        vars = m.space.cover.chart(name).vars
        flat = []
        for i in range(q):
            for j in range(q):
                flat.append(LaurentPoly.const(vars, 1 if i == j else 0))
        ident_sections[(name,)] = flat
    ident = CechCochain(hom_quot, 0, ident_sections)
    delta1 = connecting_map(ses, ident)
    for sign in (1, -1):
        if solve_coboundary(delta1 - m.theta.scale(sign)) is not None:
            return ModelClassReport(cls, True, sign)
    raise CocycleError("connecting image of the identity does not match theta")


# ---------------------------------------------------------- graded spaces


def _cached(m: GtModel, key, builder):
    cache = getattr(m, "_cache", None)
    if cache is None:
        cache = {}
        setattr(m, "_cache", cache)
    if key not in cache:
        cache[key] = builder()
    return cache[key]


def parity_spec(m: GtModel, level: int) -> SheafSpec:
    """Source of the hom sheaves: the extension bundle at odd levels, the
    cotangent spec of the reduced space at even levels."""
    if level % 2 == 1:
        return m.total_odd
    return _cached(m, "cotangent", lambda: cotangent_spec(m.space))


def quotient_spec(m: GtModel, a: int, b: int) -> SheafSpec:
    return _cached(m, ("quot", a, b),
                   lambda: sheaf_tensor(sheaf_exterior_power(m.base_spec, b),
                                        sheaf_exterior_power(m.fiber_spec, a)))


def hom_into_quotient(m: GtModel, a: int, b: int) -> SheafSpec:
    return _cached(m, ("homquot", a, b),
                   lambda: sheaf_hom(parity_spec(m, a + b), quotient_spec(m, a, b)))


def filtration_of(m: GtModel, level: int):
    return _cached(m, ("filtration", level), lambda: filtration(m.total_odd, level))


@dataclass
class SecondarySpace:
    a: int
    b: int
    p: int
    spec: SheafSpec
    basis: list[CechCochain]

    @property
    def dimension(self) -> int:
        return len(self.basis)


def secondary_space(m: GtModel, a: int, b: int, p: int,
                    window: int | None = None) -> SecondarySpace:
    if p not in (0, 1):
        raise ValueError("degrees 0 and 1 are decided")
    spec = hom_into_quotient(m, a, b)
    basis = cohomology_basis(spec, p, window=window) if spec.rank else []
    return SecondarySpace(a, b, p, spec, basis)


@dataclass
class SecondaryValue:
    """Image cochain of a differential/model-class map, with decidability."""

    cochain: CechCochain
    degree: int
    decided: bool                 # False: zero by absence of higher cochains
    cls: CohomologyClass | None   # canonical class when degree <= 1

    def is_zero(self) -> bool:
        if self.cls is not None:
            return self.cls.trivial
        return self.cochain.is_zero()


def _finalize(spec: SheafSpec, degree: int, sections, window=None) -> SecondaryValue:
    c = CechCochain(spec, degree, sections)
    if degree <= 1:
        cls = cohomology_class(c, window=window) if degree == 1 else None
        return SecondaryValue(c, degree, True, cls)
    decided = not c.sheaf.space.cover.canonical_triples()
    return SecondaryValue(c, degree, decided or c.is_zero(), None)


def secondary_differential(m: GtModel, a: int, b: int, p: int,
                           nu: CechCochain, window: int | None = None) -> SecondaryValue:
    """Connecting map of hom(P, F_{b+1}) -> hom(P, F_b) -> hom(P, F_b/F_{b+1})
    followed by the projection onto the (a-1, b+1) graded piece."""
    level = a + b
    P = parity_spec(m, level)
    out_quot = quotient_spec(m, a - 1, b + 1) if a >= 1 else None
    if out_quot is None or out_quot.rank == 0:
        spec = hom_into_quotient(m, a - 1, b + 1) if out_quot is not None else \
            sheaf_hom(P, sheaf_exterior_power(m.fiber_spec, m.fiber_rank + 1))
        return _finalize(spec, p + 1, {})
    filt = filtration_of(m, level)

    def build_ses():
        hom_sub = sheaf_hom(P, filt.piece_specs[b + 1])
        hom_tot = sheaf_hom(P, filt.piece_specs[b])
        hom_quot = sheaf_hom(P, filt.quotient_specs[b])
        return ShortExactSequence(
            hom_sub, hom_tot, hom_quot,
            qkron(filt.piece_to_piece_inclusion(b), qeye(P.rank)),
            qkron(filt.projection_matrix(b), qeye(P.rank)))

    ses = _cached(m, ("ses", level, b), build_ses)
    nu_q = CechCochain(ses.quot, p, nu.sections)
    conn = connecting_map(ses, nu_q)
    proj2 = qkron(filt.projection_matrix(b + 1), qeye(P.rank))
    out_spec = hom_into_quotient(m, a - 1, b + 1)
    sections = {}
    for key, vec in conn.sections.items():
        vars = m.space.cover.chart(key[0]).vars
        sections[key] = _qmat_vec(proj2, vec, vars)
    return _finalize(out_spec, p + 1, sections, window)


# -------------------------------------------------------- model class map


def contraction_matrix(rank: int, a: int) -> list[list[Fraction]]:
    """Constant matrix of (1/a!) sum_t e_t (x) d/d e_t from the a-th exterior
    power into (rank) x (a-1 exterior) tensor components."""
    if a < 1:
        raise ValueError("contraction needs a >= 1")
    src = list(combinations(range(rank), a))
    tgt_small = list(combinations(range(rank), a - 1))
    tpos = {K: i for i, K in enumerate(tgt_small)}
    rows = rank * len(tgt_small)
    out = [[Q(0)] * len(src) for _ in range(rows)]
    norm = Fraction(1, factorial(a))
    for col, I in enumerate(src):
        for pos, t in enumerate(I):
            K = tuple(v for v in I if v != t)
            sign = -1 if pos % 2 else 1
            row = t * len(tgt_small) + tpos[K]
            out[row][col] += sign * norm
    return out


def _wedge_insert(element: int, K: tuple[int, ...]):
    """e_K wedge e_element: (sign, sorted index) or None on repetition."""
    if element in K:
        return None
    greater = sum(1 for k in K if k > element)
    sign = -1 if greater % 2 else 1
    return sign, tuple(sorted(K + (element,)))


def _theta_pairing_matrix(m: GtModel, a: int, b: int, rank_p: int,
                          sign_fix: int = 1) -> list[list[Fraction]]:
    """Constant cochain-level map realizing: contract the a-th fiber factor,
    compose with a hom(fiber, base) value, wedge the base factors.

    Maps tensor(hom(fiber, base), hom(P, quot^{a,b})) components to
    hom(P, quot^{a-1,b+1}) components."""
    n, qx = m.base_rank, m.fiber_rank
    Ia = list(combinations(range(qx), a))
    Ia1 = list(combinations(range(qx), a - 1))
    Kb = list(combinations(range(n), b))
    Kb1 = list(combinations(range(n), b + 1))
    ia1pos = {I: i for i, I in enumerate(Ia1)}
    kb1pos = {K: i for i, K in enumerate(Kb1)}
    rank_quot_in = len(Kb) * len(Ia)
    rank_in = (n * qx) * (rank_quot_in * rank_p)
    rank_out = (len(Kb1) * len(Ia1)) * rank_p
    out = [[Q(0)] * rank_in for _ in range(rank_out)]
    norm = Fraction(sign_fix, factorial(a))
    for bi in range(n):
        for fi in range(qx):
            h = bi * qx + fi
            for kpos, K in enumerate(Kb):
                wedge = _wedge_insert(bi, K)
                if wedge is None:
                    continue
                wsign, K2 = wedge
                for ipos, I in enumerate(Ia):
                    if fi not in I:
                        continue
                    tpos_in_I = I.index(fi)
                    tsign = -1 if tpos_in_I % 2 else 1
                    I2 = tuple(v for v in I if v != fi)
                    qi_in = kpos * len(Ia) + ipos
                    qi_out = kb1pos[K2] * len(Ia1) + ia1pos[I2]
                    coeff = norm * tsign * wsign
                    for pi in range(rank_p):
                        col = h * (rank_quot_in * rank_p) + (qi_in * rank_p + pi)
                        row = qi_out * rank_p + pi
                        out[row][col] += coeff
    return out


# The coboundary here is transport(v_b) - v_a, under which the connecting
# image of the identity section is minus the extension cocycle; the pairing
# carries the matching sign so that the cup-with-theta map coincides with the
# filtration differential on the nose.
MODEL_CLASS_MAP_SIGN = -1


def model_class_map(m: GtModel, a: int, b: int, p: int, nu: CechCochain,
                    window: int | None = None) -> SecondaryValue:
    """Cup the extension cocycle with nu, contract, compose, and wedge; the
    image lives beside the corresponding differential."""
    if a < 1:
        raise ValueError("the map needs a >= 1")
    level = a + b
    P = parity_spec(m, level)
    out_quot = quotient_spec(m, a - 1, b + 1)
    out_spec = hom_into_quotient(m, a - 1, b + 1)
    if out_quot.rank == 0 or P.rank == 0:
        return _finalize(out_spec, p + 1, {})
    cup = cup_product(m.theta, nu)
    TM = _theta_pairing_matrix(m, a, b, P.rank, MODEL_CLASS_MAP_SIGN)
    sections = {}
    for key, vec in cup.sections.items():
        vars = m.space.cover.chart(key[0]).vars
        sections[key] = _qmat_vec(TM, vec, vars)
    return _finalize(out_spec, p + 1, sections, window)


def tau_push_identity(m: GtModel, a: int, b: int, nu: CechCochain) -> CechCochain:
    """Image of (identity cup nu) under contraction and composition; for
    a = 1 this is the canonical repackaging of nu itself (coefficient 1)."""
    if a != 1:
        raise SupercechError("identity push implemented for a = 1")
    qx = m.fiber_rank
    hom_ff = sheaf_hom(m.fiber_spec, m.fiber_spec)
    ident_sections = {}
    for name in m.space.cover.order:
        vars = m.space.cover.chart(name).vars
        flat = [LaurentPoly.const(vars, 1 if i == j else 0)
                for i in range(qx) for j in range(qx)]
        ident_sections[(name,)] = flat
    ident = CechCochain(hom_ff, 0, ident_sections)
    cup = cup_product(ident, nu)
    P_rank = nu.sheaf.rank // quotient_spec(m, a, b).rank
    n = m.base_rank
    Kb = list(combinations(range(n), b))
    rank_quot = len(Kb) * qx
    sections = {}
    for key, vec in cup.sections.items():
        vars = m.space.cover.chart(key[0]).vars
        out = [LaurentPoly.zero(vars) for _ in range(rank_quot * P_rank)]
        for fo in range(qx):
            for fi in range(qx):
                h = fo * qx + fi
                for kpos in range(len(Kb)):
                    for pi in range(P_rank):
                        qi_in = kpos * qx + fi
                        col = h * (rank_quot * P_rank) + (qi_in * P_rank + pi)
                        row = (kpos * qx + fo) * P_rank + pi
                        out[row] = out[row] + vec[col]
        sections[key] = out
    return CechCochain(nu.sheaf, nu.degree, sections)


# --------------------------------------------------- refined splitting type


@dataclass
class RefinedLevelReport:
    level: int
    refined_b: int | None            # largest b with a lift through F_b
    secondary: CohomologyClass | None

    @property
    def has_refinement(self) -> bool:
        return self.refined_b is not None and self.refined_b > 0


def refined_splitting_data(m: GtModel, cochain: CechCochain,
                           level: int, window: int | None = None) -> RefinedLevelReport:
    """Largest b such that the class lifts through hom(P, F_b), found by
    testing triviality of the image in the complementary quotient; the
    secondary class is the graded projection of an explicit lifted cocycle."""
    P = parity_spec(m, level)
    filt = filtration_of(m, level)
    best_b = None
    for b in range(level, 0, -1):
        sel = filt.pieces[b]
        if not sel:
            continue
        complement = [i for i in range(filt.ambient.rank) if i not in sel]
        if not complement:
            best_b = b
            break
        quot_spec = SheafSpec(
            m.space, len(complement),
            {key: [[mm[i][j] for j in complement] for i in complement]
             for key, mm in filt.ambient.matrices.items()},
            tuple(filt.ambient.basis_labels[i] for i in complement), check=False)
        hom_quot = sheaf_hom(P, quot_spec)
        proj = [[Q(1) if sel_j == i else Q(0) for sel_j in range(filt.ambient.rank)]
                for i in complement]
        proj_h = qkron(proj, qeye(P.rank))
        sections = {}
        for key, vec in cochain.sections.items():
            vars = m.space.cover.chart(key[0]).vars
            sections[key] = _qmat_vec(proj_h, vec, vars)
        image = CechCochain(hom_quot, 1, sections)
        if solve_coboundary(image, window=window) is not None:
            best_b = b
            break
    if best_b is None:
        return RefinedLevelReport(level, None, None)
    a = level - best_b
    # lift explicitly: find a 0-cochain w with (c - delta w) supported in F_b
    lifted = _lift_into_piece(m, cochain, level, best_b, window)
    graded_proj = qkron(filt.projection_matrix(best_b), qeye(P.rank))
    piece_pos = {idx: i for i, idx in enumerate(filt.pieces[best_b])}
    sections = {}
    for key, vec in lifted.sections.items():
        vars = m.space.cover.chart(key[0]).vars
        piece_vec = []
        for idx in filt.pieces[best_b]:
            for pi in range(P.rank):
                piece_vec.append(vec[idx * P.rank + pi])
        sections[key] = _qmat_vec(graded_proj, piece_vec, vars)
    out_spec = hom_into_quotient(m, a, best_b)
    graded = CechCochain(out_spec, 1, sections)
    return RefinedLevelReport(level, best_b, cohomology_class(graded, window=window))


def _lift_into_piece(m: GtModel, cochain: CechCochain, level: int, b: int,
                     window: int | None) -> CechCochain:
    """Cocycle cohomologous to the input with components in F_b only."""
    from .cech import auto_window, cech_delta, _delta0_linearization, _cochain_keys
    from . import linalg
    sheaf = cochain.sheaf
    filt = filtration_of(m, level)
    P = parity_spec(m, level)
    sel = set(filt.pieces[b])
    bound = auto_window(sheaf, cochain, window=window)
    lin = _delta0_linearization(sheaf, bound)
    rhs_map = _cochain_keys(cochain)
    # keep only the equations for components outside F_b
    def outside(key):
        (pair, frame, exps) = key
        return (frame // P.rank) not in sel
    all_keys = {k for k in rhs_map if outside(k)}
    for img in lin.images:
        all_keys.update(k for k in img if outside(k))
    keys = sorted(all_keys, key=str)
    pos = {k: i for i, k in enumerate(keys)}
    matrix = [[Q(0)] * len(lin.unknowns) for _ in keys]
    for u, img in enumerate(lin.images):
        for k, coef in img.items():
            if k in pos:
                matrix[pos[k]][u] = coef
    rhs = [rhs_map.get(k, Q(0)) for k in keys]
    sol = linalg.solve(matrix, rhs)
    if sol is None:
        raise CocycleError("no lift although the quotient image is trivial")
    from .cech import _cochain_from_solution
    w = _cochain_from_solution(sheaf, lin, sol)
    lifted = cochain - cech_delta(w)
    for key, vec in lifted.sections.items():
        for idx in range(filt.ambient.rank):
            if idx not in sel:
                for pi in range(P.rank):
                    if not vec[idx * P.rank + pi].is_zero():
                        raise CocycleError("lift left components outside the piece")
    return lifted


# ------------------------------------------------------- containment check


@dataclass
class ContainmentSample:
    index: int
    lhs_trivial: bool
    rhs_trivial: bool
    equal: bool


@dataclass
class ContainmentReport:
    a: int
    b: int
    p: int
    dimension: int
    samples: list[ContainmentSample] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(s.equal for s in self.samples)


def verify_a1_containment(m: GtModel, b: int, p: int = 0,
                          window: int | None = None) -> ContainmentReport:
    """For every basis class nu of the (1, b) space in degree p: the
    cup-with-theta image equals the differential of the identity push of nu,
    as canonical representatives."""
    space = secondary_space(m, 1, b, p, window=window)
    report = ContainmentReport(1, b, p, space.dimension)
    for i, nu in enumerate(space.basis):
        lhs = model_class_map(m, 1, b, p, nu, window=window)
        nu_prime = tau_push_identity(m, 1, b, nu)
        rhs = secondary_differential(m, 1, b, p, nu_prime, window=window)
        if lhs.degree == 1:
            equal = lhs.cls.representative == rhs.cls.representative
            report.samples.append(ContainmentSample(
                i, lhs.cls.trivial, rhs.cls.trivial, equal))
        else:
            report.samples.append(ContainmentSample(
                i, lhs.is_zero(), rhs.is_zero(), lhs.is_zero() == rhs.is_zero()))
    return report


# --------------------------------------------------- compatibility relation


@dataclass
class CompatibilityReport:
    ok: bool
    level: float
    total_class: CohomologyClass | None
    fiber_class: CohomologyClass | None
    detail: str = ""


def verify_obstruction_compatibility(total: SuperGluingData,
                                     base_odd: int) -> CompatibilityReport:
    """Comparison of obstruction classes for gluing data over a superspace
    base whose base odd coordinates are the trailing generators: restricting
    the level-j deviation cochain to pure-fiber wedge columns must agree,
    up to coboundary, with the deviation cochain of the underlying data.
    Implemented for even levels (deviations of the even coordinate maps)."""
    q = next(iter(total.cover.charts.values())).odd_rank
    qx = q - base_odd
    from .grassmann import GrassmannElement
    for (a, b), t in total.transitions.items():
        for k in range(qx + 1, q + 1):
            expect = GrassmannElement.odd_gen(t.source.vars, t.source.odd_rank, k)
            if t.odd_maps[k] != expect:
                raise SupercechError(
                    f"base odd coordinate theta_{k} is not mapped identically on {(a, b)}")
    report = total.verify_cocycle()
    if not report.ok:
        raise CocycleError(str(report.failures[0]))
    fiber = restrict_odd(total, qx)
    level = total.splitting_type(verify=False)
    if level == float("inf"):
        return CompatibilityReport(True, level, None, None, "both sides split")
    level = int(level)
    if level % 2 == 1:
        raise SupercechError("comparison implemented for even levels")
    w_total = deviation_cochain(total, level)
    fiber_reduced = fiber.reduce(verify=False)
    fib_hom = deviation_hom_spec(fiber, level, fiber_reduced)
    idxs_total = list(combinations(range(1, q + 1), level))
    keep = [k for k, I in enumerate(idxs_total) if all(i <= qx for i in I)]
    n_rows = w_total.sheaf.rank // len(idxs_total)
    sections = {}
    for key, vec in w_total.sections.items():
        mat = hom_unflatten(vec, n_rows, len(idxs_total))
        flat = []
        for i in range(n_rows):
            for k in keep:
                flat.append(mat[i][k])
        sections[key] = flat
    p_cochain = CechCochain(fib_hom, 1, sections)
    if not is_cocycle(p_cochain):
        raise CocycleError("restricted deviation data is not a cocycle")
    i_cochain = deviation_cochain(fiber, level, fiber_reduced)
    ok, _ = is_coboundary(p_cochain - i_cochain)
    return CompatibilityReport(
        ok, level,
        cohomology_class(p_cochain), cohomology_class(i_cochain),
        "" if ok else "restricted and underlying classes differ")
