"""Cech cochains and exact cohomology decisions.

Cochains are stored on canonical tuples only (charts strictly increasing in
declaration order) and extended alternately elsewhere.  Sections on a tuple
are component vectors in the first-listed chart's frame and coordinates.

Coboundary questions are decided exactly: candidate solutions are supported
in a finite exponent window derived from the input's support plus the worst
pole order of the transition data, inside each chart's regularity cone
(nonnegative exponents in that chart's own coordinates).  Monomial reduced
coordinate changes move exponents affinely, so solutions outside the window
are impossible by support bookkeeping and the linear solve is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iproduct

from .errors import CocycleError, WindowError
from .laurent import LaurentPoly, Q
from . import linalg
from .sheaf import SheafSpec, hom_unflatten, sheaf_tensor

WINDOW_CAP = 60


class CechCochain:
    """Degree-p cochain valued in a sheaf spec."""

    def __init__(self, sheaf: SheafSpec, degree: int,
                 sections: dict[tuple, list[LaurentPoly]] | None = None):
        self.sheaf = sheaf
        self.degree = int(degree)
        cover = sheaf.space.cover
        self.sections: dict[tuple, list[LaurentPoly]] = {}
        keys = self._canonical_keys()
        given = sections or {}
        for key in keys:
            vec = given.get(key)
            if vec is None:
                vec = sheaf.zero_vector(key[0])
            if len(vec) != sheaf.rank:
                raise ValueError(f"section on {key} has wrong rank")
            lead_vars = cover.chart(key[0]).vars
            for p in vec:
                if p.vars != lead_vars:
                    raise ValueError(f"section on {key} not in {key[0]}-coordinates")
                if self.degree == 0:
                    for exps in p.terms:
                        if any(e < 0 for e in exps):
                            raise ValueError(
                                f"degree-0 section on {key} is not chart-regular")
            self.sections[key] = list(vec)
        for key in given:
            if key not in self.sections:
                raise ValueError(f"{key} is not a canonical {self.degree}-tuple of this cover")

    def _canonical_keys(self) -> list[tuple]:
        cover = self.sheaf.space.cover
        if self.degree == 0:
            return [(name,) for name in cover.order]
        if self.degree == 1:
            return [tuple(o) for o in cover.canonical_overlaps()]
        if self.degree == 2:
            return [tuple(t) for t in cover.canonical_triples()]
        raise ValueError(f"degree {self.degree} not supported")

    # ------------------------------------------------------------ arithmetic

    def _check(self, other: "CechCochain"):
        if self.sheaf is not other.sheaf and self.sheaf.matrices != other.sheaf.matrices:
            raise CocycleError("cochains valued in different sheaves")
        if self.degree != other.degree:
            raise CocycleError("cochain degrees differ")

    def __add__(self, other: "CechCochain") -> "CechCochain":
        self._check(other)
        return CechCochain(self.sheaf, self.degree, {
            k: [a + b for a, b in zip(v, other.sections[k])]
            for k, v in self.sections.items()})

    def __neg__(self) -> "CechCochain":
        return CechCochain(self.sheaf, self.degree,
                           {k: [-a for a in v] for k, v in self.sections.items()})

    def __sub__(self, other: "CechCochain") -> "CechCochain":
        return self + (-other)

    def scale(self, c) -> "CechCochain":
        return CechCochain(self.sheaf, self.degree,
                           {k: [a.scale(c) for a in v] for k, v in self.sections.items()})

    def is_zero(self) -> bool:
        return all(p.is_zero() for v in self.sections.values() for p in v)

    def __eq__(self, other):
        return (isinstance(other, CechCochain) and self.degree == other.degree
                and self.sections == other.sections)

    def section(self, *charts: str) -> list[LaurentPoly]:
        """Alternating access; reversed pairs are transported with a sign."""
        key = tuple(charts)
        if key in self.sections:
            return list(self.sections[key])
        if self.degree == 1 and key[::-1] in self.sections:
            a, b = key[::-1]
            vec = self.sheaf.transport(a, b, self.sections[(a, b)])
            return [-p for p in vec]
        raise KeyError(f"no section for {key}")

    def max_exponent(self) -> int:
        worst = 0
        for vec in self.sections.values():
            for p in vec:
                for exps in p.terms:
                    worst = max(worst, max((abs(e) for e in exps), default=0))
        return worst

    def __str__(self):
        lines = [f"degree-{self.degree} cochain:"]
        for key, vec in sorted(self.sections.items()):
            body = ", ".join(str(p) for p in vec)
            lines.append(f"  {key}: ({body})")
        return "\n".join(lines)


def cech_delta(c: CechCochain) -> CechCochain:
    """Alternating-sum coboundary with transports into the leading chart."""
    sheaf = c.sheaf
    cover = sheaf.space.cover
    if c.degree == 0:
        out = {}
        for (a, b) in cover.canonical_overlaps():
            moved = sheaf.transport(b, a, c.sections[(b,)])
            here = [p.with_context(cover.chart(a).vars) for p in c.sections[(a,)]]
            out[(a, b)] = [m - h for m, h in zip(moved, here)]
        return CechCochain(sheaf, 1, out)
    if c.degree == 1:
        out = {}
        for (a, b, cc) in cover.canonical_triples():
            t_bc = sheaf.transport(b, a, c.sections[(b, cc)])
            v_ac = c.sections[(a, cc)]
            v_ab = c.sections[(a, b)]
            out[(a, b, cc)] = [x - y + z for x, y, z in zip(t_bc, v_ac, v_ab)]
        return CechCochain(sheaf, 2, out)
    if c.degree == 2:
        if not cover.canonical_triples():
            raise ValueError("no degree-3 support on this cover")
        raise ValueError("coboundary out of degree 2 is not supported")
    raise ValueError(f"degree {c.degree} not supported")


def is_cocycle(c: CechCochain) -> bool:
    if c.degree == 1 and c.sheaf.space.cover.canonical_triples():
        return cech_delta(c).is_zero()
    if c.degree == 0:
        return cech_delta(c).is_zero()
    return True


# ------------------------------------------------------------------ windows


def auto_window(sheaf: SheafSpec, *cochains: CechCochain, pad: int = 1,
                window: int | None = None) -> int:
    if window is not None:
        return window
    bound = sheaf.max_pole_order() + pad
    for c in cochains:
        bound += c.max_exponent()
    if bound > WINDOW_CAP:
        raise WindowError(
            f"derived window {bound} exceeds cap {WINDOW_CAP}; pass an explicit window")
    return bound


def _exp_tuples(nvars: int, lo: int, hi: int):
    return iproduct(*[range(lo, hi + 1) for _ in range(nvars)])


@dataclass
class _Linearization:
    """Images of delta applied to every windowed chart-regular 0-cochain
    monomial, as sparse vectors over (overlap, frame, monomial) keys."""

    unknowns: list[tuple]                              # (chart, frame, exps)
    images: list[dict[tuple, Fraction]]                # per unknown
    key_of_unknown: dict[tuple, int]


def _delta0_linearization(sheaf: SheafSpec, bound: int) -> _Linearization:
    cache = getattr(sheaf, "_lin_cache", None)
    if cache is None:
        cache = {}
        setattr(sheaf, "_lin_cache", cache)
    if bound in cache:
        return cache[bound]
    cover = sheaf.space.cover
    unknowns: list[tuple] = []
    images: list[dict[tuple, Fraction]] = []
    transported: dict[tuple, list[list[LaurentPoly]]] = {}
    for (a, b) in cover.canonical_overlaps():
        transported[(a, b)] = sheaf._matrix_in(a, (b, a))
    for chart in cover.order:
        vars = cover.chart(chart).vars
        for frame in range(sheaf.rank):
            for exps in _exp_tuples(len(vars), 0, bound):
                contrib: dict[tuple, Fraction] = {}
                for (a, b) in cover.canonical_overlaps():
                    if chart == a:
                        key = ((a, b), frame, exps)
                        contrib[key] = contrib.get(key, Q(0)) - 1
                    if chart == b:
                        mono = sheaf.space.compose_into(
                            a, b, LaurentPoly.monomial(vars, 1, exps))
                        matrix = transported[(a, b)]
                        for r in range(sheaf.rank):
                            entry = matrix[r][frame]
                            if entry.is_zero():
                                continue
                            for mexps, coef in (entry * mono).terms.items():
                                key = ((a, b), r, mexps)
                                s = contrib.get(key, Q(0)) + coef
                                if s == 0:
                                    contrib.pop(key, None)
                                else:
                                    contrib[key] = s
                unknowns.append((chart, frame, exps))
                images.append(contrib)
    lin = _Linearization(unknowns, images, {u: i for i, u in enumerate(unknowns)})
    cache[bound] = lin
    return lin


def _cochain_keys(c: CechCochain) -> dict[tuple, Fraction]:
    out = {}
    for key, vec in c.sections.items():
        for frame, poly in enumerate(vec):
            for exps, coef in poly.terms.items():
                out[(key, frame, exps)] = coef
    return out


def _keys_order(keys, cover) -> list[tuple]:
    overlap_pos = {tuple(o): i for i, o in enumerate(cover.canonical_overlaps())}
    return sorted(keys, key=lambda k: (overlap_pos[k[0]], k[1], k[2]))


def solve_coboundary(c: CechCochain, window: int | None = None) -> CechCochain | None:
    """Witness b with delta(b) = c, or ``None``; c must be a 1-cocycle."""
    if c.degree != 1:
        raise ValueError("solve_coboundary expects a degree-1 cochain")
    if not is_cocycle(c):
        raise CocycleError("input is not a cocycle")
    sheaf = c.sheaf
    if sheaf.rank == 0 or c.is_zero():
        return CechCochain(sheaf, 0)
    bound = auto_window(sheaf, c, window=window)
    lin = _delta0_linearization(sheaf, bound)
    rhs_map = _cochain_keys(c)
    all_keys = set(rhs_map)
    for img in lin.images:
        all_keys.update(img)
    keys = _keys_order(all_keys, sheaf.space.cover)
    key_pos = {k: i for i, k in enumerate(keys)}
    matrix = [[Q(0)] * len(lin.unknowns) for _ in keys]
    for u, img in enumerate(lin.images):
        for k, coef in img.items():
            matrix[key_pos[k]][u] = coef
    rhs = [rhs_map.get(k, Q(0)) for k in keys]
    sol = linalg.solve(matrix, rhs)
    if sol is None:
        return None
    witness = _cochain_from_solution(sheaf, lin, sol)
    if cech_delta(witness) != c:
        raise CocycleError("internal error: witness does not reproduce the cocycle")
    return witness


def _cochain_from_solution(sheaf: SheafSpec, lin: _Linearization, sol) -> CechCochain:
    cover = sheaf.space.cover
    data: dict[tuple, list[LaurentPoly]] = {}
    for (chart, frame, exps), value in zip(lin.unknowns, sol):
        if value == 0:
            continue
        key = (chart,)
        if key not in data:
            data[key] = sheaf.zero_vector(chart)
        vars = cover.chart(chart).vars
        data[key][frame] = data[key][frame] + LaurentPoly.monomial(vars, value, exps)
    return CechCochain(sheaf, 0, data)


def canonical_representative(c: CechCochain, window: int | None = None) -> CechCochain:
    """Deterministic representative of the class of ``c``: the residual after
    eliminating the image of delta in a fixed key order."""
    if not is_cocycle(c):
        raise CocycleError("input is not a cocycle")
    sheaf = c.sheaf
    if sheaf.rank == 0 or c.is_zero():
        return CechCochain(sheaf, 1)
    bound = auto_window(sheaf, c, window=window)
    lin = _delta0_linearization(sheaf, bound)
    rhs_map = _cochain_keys(c)
    all_keys = set(rhs_map)
    for img in lin.images:
        all_keys.update(img)
    keys = _keys_order(all_keys, sheaf.space.cover)
    key_pos = {k: i for i, k in enumerate(keys)}
    span = []
    for img in lin.images:
        row = [Q(0)] * len(keys)
        for k, coef in img.items():
            row[key_pos[k]] = coef
        span.append(row)
    vec = [rhs_map.get(k, Q(0)) for k in keys]
    reduced = linalg.reduce_mod_span(span, vec)
    data: dict[tuple, list[LaurentPoly]] = {}
    cover = sheaf.space.cover
    for k, value in zip(keys, reduced):
        if value == 0:
            continue
        (pair, frame, exps) = k
        if pair not in data:
            data[pair] = sheaf.zero_vector(pair[0])
        vars = cover.chart(pair[0]).vars
        data[pair][frame] = data[pair][frame] + LaurentPoly.monomial(vars, value, exps)
    return CechCochain(sheaf, 1, data)


@dataclass
class CohomologyClass:
    """Canonical representative plus triviality witness data."""

    sheaf: SheafSpec
    degree: int
    representative: CechCochain
    trivial: bool
    witness: CechCochain | None = None

    def is_zero(self) -> bool:
        return self.trivial

    def scale(self, c) -> "CohomologyClass":
        return CohomologyClass(self.sheaf, self.degree, self.representative.scale(c),
                               self.trivial, self.witness.scale(c) if self.witness else None)

    def __eq__(self, other):
        return (isinstance(other, CohomologyClass) and self.degree == other.degree
                and self.representative == other.representative)


def cohomology_class(c: CechCochain, window: int | None = None) -> CohomologyClass:
    if c.degree != 1:
        raise ValueError("class formation implemented for degree 1")
    witness = solve_coboundary(c, window=window)
    if witness is not None:
        return CohomologyClass(c.sheaf, 1, CechCochain(c.sheaf, 1), True, witness)
    rep = canonical_representative(c, window=window)
    return CohomologyClass(c.sheaf, 1, rep, False, None)


def is_coboundary(c: CechCochain, window: int | None = None):
    """(True, witness) or (False, canonical nontrivial representative)."""
    witness = solve_coboundary(c, window=window)
    if witness is not None:
        return True, witness
    return False, canonical_representative(c, window=window)


# --------------------------------------------------------- cohomology bases


def cohomology_basis(sheaf: SheafSpec, degree: int, window: int | None = None) -> list[CechCochain]:
    """Exact basis of H^degree within the (auto-derived) window;
    representatives are canonical and deterministic."""
    if sheaf.rank == 0:
        return []
    bound = auto_window(sheaf, window=window)
    # witnesses may need exponents one pole-order beyond the candidate window
    witness_bound = bound + sheaf.max_pole_order() + 1
    cover = sheaf.space.cover
    if degree == 0:
        lin = _delta0_linearization(sheaf, bound)
        all_keys = set()
        for img in lin.images:
            all_keys.update(img)
        keys = _keys_order(all_keys, cover)
        key_pos = {k: i for i, k in enumerate(keys)}
        matrix = [[Q(0)] * len(lin.unknowns) for _ in keys]
        for u, img in enumerate(lin.images):
            for k, coef in img.items():
                matrix[key_pos[k]][u] = coef
        kernel = linalg.nullspace(matrix)
        return [_cochain_from_solution(sheaf, lin, v) for v in kernel]
    if degree != 1:
        raise ValueError("cohomology_basis supports degrees 0 and 1")

    # candidate monomials on canonical overlaps, within each overlap's
    # regularity cone (negative exponents only in inverted coordinates)
    candidates: list[tuple] = []
    for (a, b) in cover.canonical_overlaps():
        vars = cover.chart(a).vars
        negatives = sheaf.space.negative_vars(a, b)
        ranges = [range(-bound if v in negatives else 0, bound + 1) for v in vars]
        for frame in range(sheaf.rank):
            for exps in iproduct(*ranges):
                candidates.append(((a, b), frame, exps))
    # cocycle constraint (only when triples exist)
    cocycle_vectors = []
    triples = cover.canonical_triples()
    if triples:
        images = []
        for cand in candidates:
            c = _unit_cochain(sheaf, 1, cand)
            images.append(_cochain_keys(cech_delta(c)))
        tkeys = sorted({k for img in images for k in img})
        tpos = {k: i for i, k in enumerate(tkeys)}
        matrix = [[Q(0)] * len(candidates) for _ in tkeys]
        for u, img in enumerate(images):
            for k, coef in img.items():
                matrix[tpos[k]][u] = coef
        cocycle_vectors = linalg.nullspace(matrix)
    else:
        cocycle_vectors = [[Q(1) if i == j else Q(0) for i in range(len(candidates))]
                           for j in range(len(candidates))]

    lin = _delta0_linearization(sheaf, witness_bound)
    keys = _keys_order({k for img in lin.images for k in img}
                       | set(candidates), cover)
    key_pos = {k: i for i, k in enumerate(keys)}
    span = []
    for img in lin.images:
        row = [Q(0)] * len(keys)
        for k, coef in img.items():
            row[key_pos[k]] = coef
        span.append(row)
    reducer = linalg.SpanReducer(span)
    reduced_rows = []
    for v in cocycle_vectors:
        row = [Q(0)] * len(keys)
        for cand, coef in zip(candidates, v):
            if coef != 0:
                row[key_pos[cand]] = row[key_pos[cand]] + coef
        reduced_rows.append(reducer.reduce(row))
    basis_rows, _ = linalg.rref(reduced_rows) if reduced_rows else ([], [])
    out = []
    for row in basis_rows:
        if all(v == 0 for v in row):
            continue
        data: dict[tuple, list[LaurentPoly]] = {}
        for k, value in zip(keys, row):
            if value == 0:
                continue
            (pair, frame, exps) = k
            if pair not in data:
                data[pair] = sheaf.zero_vector(pair[0])
            vars = cover.chart(pair[0]).vars
            data[pair][frame] = data[pair][frame] + LaurentPoly.monomial(vars, value, exps)
        out.append(CechCochain(sheaf, 1, data))
    return out


def _unit_cochain(sheaf: SheafSpec, degree: int, key_triple) -> CechCochain:
    (key, frame, exps) = key_triple
    vars = sheaf.space.cover.chart(key[0]).vars
    vec = sheaf.zero_vector(key[0])
    vec[frame] = LaurentPoly.monomial(vars, 1, exps)
    return CechCochain(sheaf, degree, {key: vec})


# ------------------------------------------------------------- cup products


def cup_product(u: CechCochain, v: CechCochain) -> CechCochain:
    """(u cup v)_{i0..ip+q} = u_{i0..iq} (x) v_{iq..iq+p}, transported into
    the leading chart; values in the tensor sheaf (left factor index major)."""
    A, B = u.sheaf, v.sheaf
    if not A.same_cover(B):
        raise CocycleError("cup factors on different covers")
    target = sheaf_tensor(A, B)
    cover = A.space.cover
    qdeg, pdeg = u.degree, v.degree
    out: dict[tuple, list[LaurentPoly]] = {}
    if (qdeg, pdeg) == (0, 0):
        for (name,) in [(n,) for n in cover.order]:
            out[(name,)] = _tensor_vec(u.sections[(name,)], v.sections[(name,)])
        return CechCochain(target, 0, out)
    if (qdeg, pdeg) == (1, 0):
        for (a, b) in cover.canonical_overlaps():
            moved = B.transport(b, a, v.sections[(b,)])
            out[(a, b)] = _tensor_vec(u.sections[(a, b)], moved)
        return CechCochain(target, 1, out)
    if (qdeg, pdeg) == (0, 1):
        for (a, b) in cover.canonical_overlaps():
            ua = [p.with_context(cover.chart(a).vars) for p in u.sections[(a,)]]
            out[(a, b)] = _tensor_vec(ua, v.sections[(a, b)])
        return CechCochain(target, 1, out)
    if (qdeg, pdeg) == (1, 1):
        for (a, b, c) in cover.canonical_triples():
            moved = B.transport(b, a, v.sections[(b, c)])
            out[(a, b, c)] = _tensor_vec(u.sections[(a, b)], moved)
        return CechCochain(target, 2, out)
    raise ValueError(f"cup product for degrees ({qdeg},{pdeg}) not supported")


def _tensor_vec(u: list[LaurentPoly], v: list[LaurentPoly]) -> list[LaurentPoly]:
    out = []
    for a in u:
        for b in v:
            out.append(a * b)
    return out


# --------------------------------------------------- short exact sequences


@dataclass
class ShortExactSequence:
    """Chartwise-constant inclusion/projection presentation of an exact
    sequence sub -> total -> quot of sheaf specs."""

    sub: SheafSpec
    total: SheafSpec
    quot: SheafSpec
    inclusion: list[list[Fraction]]    # total.rank x sub.rank
    projection: list[list[Fraction]]   # quot.rank x total.rank

    def verify(self):
        if getattr(self, "_verified", False):
            return
        if self.sub.rank + self.quot.rank != self.total.rank:
            raise CocycleError("ranks do not add up")
        comp = _qmat_mul(self.projection, self.inclusion)
        if any(any(v != 0 for v in row) for row in comp):
            raise CocycleError("projection o inclusion is not zero")
        if linalg.rank([row[:] for row in self.inclusion]) != self.sub.rank:
            raise CocycleError("inclusion not injective")
        if linalg.rank([row[:] for row in self.projection]) != self.quot.rank:
            raise CocycleError("projection not surjective")
        for key in self.total.matrices:
            vars = self.total.space.cover.chart(key[0]).vars
            lhs = _qmat_apply_right(self.total.matrices[key], self.inclusion, vars)
            rhs = _qmat_apply_left(self.inclusion, self.sub.matrices[key], vars)
            if lhs != rhs:
                raise CocycleError(f"inclusion is not a sheaf map on {key}")
            lhs = _qmat_apply_left(self.projection, self.total.matrices[key], vars)
            rhs = _qmat_apply_right(self.quot.matrices[key], self.projection, vars)
            if lhs != rhs:
                raise CocycleError(f"projection is not a sheaf map on {key}")
        self._verified = True

    def section_of_projection(self) -> list[list[Fraction]]:
        cols = []
        n = self.quot.rank
        for j in range(n):
            rhs = [Q(1) if i == j else Q(0) for i in range(n)]
            col = linalg.solve([row[:] for row in self.projection], rhs)
            if col is None:
                raise CocycleError("projection has no section")
            cols.append(col)
        return [[cols[j][i] for j in range(n)] for i in range(self.total.rank)]


def _qmat_mul(a, b):
    return [[sum((x * y for x, y in zip(row, col)), Q(0))
             for col in zip(*b)] for row in a]


def _qmat_apply_left(qmat, lmat, vars):
    """(rational matrix) . (Laurent matrix)"""
    out = []
    for row in qmat:
        out_row = []
        for j in range(len(lmat[0]) if lmat else 0):
            acc = LaurentPoly.zero(vars)
            for k, c in enumerate(row):
                if c != 0 and not lmat[k][j].is_zero():
                    acc = acc + lmat[k][j].scale(c)
            out_row.append(acc)
        out.append(out_row)
    return out


def _qmat_apply_right(lmat, qmat, vars):
    """(Laurent matrix) . (rational matrix)"""
    out = []
    for row in lmat:
        out_row = []
        for j in range(len(qmat[0]) if qmat else 0):
            acc = LaurentPoly.zero(vars)
            for k, entry in enumerate(row):
                c = qmat[k][j]
                if c != 0 and not entry.is_zero():
                    acc = acc + entry.scale(c)
            out_row.append(acc)
        out.append(out_row)
    return out


def _qmat_vec(qmat, vec, vars):
    out = []
    for row in qmat:
        acc = LaurentPoly.zero(vars)
        for c, p in zip(row, vec):
            if c != 0 and not p.is_zero():
                acc = acc + p.scale(c)
        out.append(acc)
    return out


def connecting_map(ses: ShortExactSequence, c: CechCochain) -> CechCochain:
    """Connecting homomorphism: lift through the projection chartwise, apply
    the coboundary, express in the subsheaf.  Input degree 0 or 1 (degree 1
    requires triples to carry the output)."""
    ses.verify()
    if c.sheaf.rank != ses.quot.rank or c.sheaf.matrices != ses.quot.matrices:
        raise CocycleError("cochain is not valued in the quotient")
    if not is_cocycle(c):
        raise CocycleError("connecting map needs a cocycle")
    sigma = ses.section_of_projection()
    cover = ses.total.space.cover
    lift_data = {}
    for key, vec in c.sections.items():
        vars = cover.chart(key[0]).vars
        lift_data[key] = _qmat_vec(sigma, vec, vars)
    lift = CechCochain(ses.total, c.degree, lift_data)
    boundary = cech_delta(lift)
    out = {}
    for key, vec in boundary.sections.items():
        out[key] = _express_in_sub(ses.inclusion, vec, cover.chart(key[0]).vars,
                                   ses.sub.rank)
    result = CechCochain(ses.sub, c.degree + 1, out)
    if result.degree == 1 and not is_cocycle(result):
        raise CocycleError("connecting image failed the cocycle check")
    return result


def _express_in_sub(inclusion, vec, vars, sub_rank) -> list[LaurentPoly]:
    """Solve inclusion . w = vec exactly, monomial by monomial."""
    monomials = sorted({exps for p in vec for exps in p.terms})
    out = [LaurentPoly.zero(vars) for _ in range(sub_rank)]
    for exps in monomials:
        rhs = [p.terms.get(exps, Q(0)) for p in vec]
        sol = linalg.solve([row[:] for row in inclusion], rhs)
        if sol is None:
            raise CocycleError("coboundary does not land in the subsheaf")
        for i, v in enumerate(sol):
            if v != 0:
                out[i] = out[i] + LaurentPoly.monomial(vars, v, exps)
    return out


# ------------------------------------------------------------- extensions


def extension_sheaf(sub: SheafSpec, quot: SheafSpec, cocycle: CechCochain) -> SheafSpec:
    """Extension spec with block matrices [[M_sub, M_sub.X],[0, M_quot]] for
    a 1-cocycle X valued in hom(quot, sub); records the sub/quot split."""
    from .sheaf import sheaf_hom  # late import to avoid cycle at module load
    hom = sheaf_hom(quot, sub)
    if cocycle.degree != 1 or cocycle.sheaf.rank != hom.rank:
        raise CocycleError("extension cocycle must be a degree-1 hom(quot, sub) cochain")
    if not is_cocycle(cocycle):
        raise CocycleError("extension input is not a cocycle")
    space = sub.space
    cover = space.cover
    mats = {}
    for (a, b) in cover.overlaps:
        if (a, b) in cocycle.sections:
            flat = cocycle.sections[(a, b)]
        else:
            flat = cocycle.section(a, b)
        X = hom_unflatten(flat, sub.rank, quot.rank)
        ms = sub.matrices[(a, b)]
        mq = quot.matrices[(a, b)]
        vars = cover.chart(a).vars
        block = [[LaurentPoly.zero(vars) for _ in range(quot.rank)] for _ in range(sub.rank)]
        for i in range(sub.rank):
            for j in range(quot.rank):
                acc = LaurentPoly.zero(vars)
                for k in range(sub.rank):
                    if not ms[i][k].is_zero() and not X[k][j].is_zero():
                        acc = acc + ms[i][k] * X[k][j]
                block[i][j] = acc
        n = sub.rank + quot.rank
        m = [[LaurentPoly.zero(vars) for _ in range(n)] for _ in range(n)]
        for i in range(sub.rank):
            for j in range(sub.rank):
                m[i][j] = ms[i][j]
            for j in range(quot.rank):
                m[i][sub.rank + j] = block[i][j]
        for i in range(quot.rank):
            for j in range(quot.rank):
                m[sub.rank + i][sub.rank + j] = mq[i][j]
        mats[(a, b)] = m
    labels = tuple(("sub", l) for l in sub.basis_labels) + \
        tuple(("quot", l) for l in quot.basis_labels)
    try:
        return SheafSpec(space, sub.rank + quot.rank, mats, labels,
                         check=True, extension=(sub, quot))
    except CocycleError as exc:
        raise CocycleError(f"invalid extension data: {exc}") from exc


def extension_gauge(sub: SheafSpec, quot: SheafSpec, witness: CechCochain) -> dict[str, list[list[LaurentPoly]]]:
    """Chartwise block-unipotent gauge [[I, w_alpha],[0, I]] built from a
    0-cochain witness relating two cohomologous extension cocycles."""
    cover = sub.space.cover
    out = {}
    for name in cover.order:
        vars = cover.chart(name).vars
        w = hom_unflatten(witness.sections[(name,)], sub.rank, quot.rank)
        n = sub.rank + quot.rank
        g = [[LaurentPoly.const(vars, 1) if i == j else LaurentPoly.zero(vars)
              for j in range(n)] for i in range(n)]
        for i in range(sub.rank):
            for j in range(quot.rank):
                g[i][sub.rank + j] = w[i][j]
        out[name] = g
    return out


def specs_gauge_equivalent(spec1: SheafSpec, spec2: SheafSpec,
                           gauges: dict[str, list[list[LaurentPoly]]]) -> bool:
    """Check spec2 = g_b . spec1 . g_a^{-1} on every overlap."""
    from .gluing import invert_laurent_matrix
    from .sheaf import mat_mul
    cover = spec1.space.cover
    for (a, b) in cover.overlaps:
        ga_inv = invert_laurent_matrix(gauges[a])
        gb = [[spec1.space.compose_into(a, b, e) for e in row] for row in gauges[b]]
        lhs = mat_mul(gb, mat_mul(spec1.matrices[(a, b)], ga_inv))
        if lhs != spec2.matrices[(a, b)]:
            return False
    return True
