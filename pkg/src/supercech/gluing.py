"""Super gluing data: covers with super transition maps.

A :class:`SuperTransition` from chart ``a`` to chart ``b`` records, for every
coordinate of ``b``, its expression in the coordinates of ``a``.  Composition
is substitution (contravariant pullback order: ``compose(s, t)`` substitutes
the images of ``s`` into the expressions of ``t`` and represents "s then t"
on points).  A :class:`SuperGluingData` carries one transition per declared
ordered overlap and is subject to the exact inverse and triple conditions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import CocycleError, ContextError, SupercechError
from .grassmann import GrassmannElement
from .laurent import LaurentPoly
from .spaces import Chart, Cover, ReducedSpace

INFINITY = float("inf")


class SuperTransition:
    """Coordinate images of a super coordinate change between two charts."""

    def __init__(self, source: Chart, target: Chart,
                 even_maps: dict[str, GrassmannElement],
                 odd_maps: dict[int, GrassmannElement],
                 check: bool = True):
        self.source = source
        self.target = target
        self.even_maps = dict(even_maps)
        self.odd_maps = dict(odd_maps)
        if check:
            self._validate()

    def _validate(self):
        sv, q = self.source.vars, self.source.odd_rank
        for v in self.target.vars:
            if v not in self.even_maps:
                raise ValueError(f"missing image for even coordinate {v}")
            g = self.even_maps[v]
            if g.vars != sv or g.odd_rank != q:
                raise ContextError(f"image of {v} not in source context")
            if g.parity() == "mixed" or g.parity() == "odd":
                raise ValueError(f"image of even coordinate {v} is not even")
            body = g.body()
            if not body.is_monomial():
                raise ValueError(f"reduced part of {v}-image is not an invertible monomial")
            nz = [e for e in body.monomial_parts()[1] if e != 0]
            if len(nz) > 1 or (nz and nz[0] not in (1, -1)):
                raise ValueError(f"reduced part of {v}-image must be c*x^(+-1) in one coordinate")
        for b in range(1, self.target.odd_rank + 1):
            if b not in self.odd_maps:
                raise ValueError(f"missing image for theta_{b}")
            g = self.odd_maps[b]
            if g.vars != sv or g.odd_rank != q:
                raise ContextError(f"image of theta_{b} not in source context")
            if not g.is_zero() and g.parity() != "odd":
                raise ValueError(f"image of odd coordinate theta_{b} is not odd")

    # ---------------------------------------------------------------- helpers

    def images(self) -> tuple[dict[str, GrassmannElement], dict[int, GrassmannElement]]:
        return self.even_maps, self.odd_maps

    def apply(self, element: GrassmannElement) -> GrassmannElement:
        """Pull an element in target-chart coordinates back to source-chart
        coordinates through this transition."""
        return element.substitute(self.even_maps, self.odd_maps,
                                  self.source.vars, self.source.odd_rank)

    def reduced_map(self) -> dict[str, LaurentPoly]:
        return {v: g.body() for v, g in self.even_maps.items()}

    def odd_matrix(self) -> list[list[LaurentPoly]]:
        """Rows: target generators, columns: source generators; entry (b, a)
        is the theta_a coefficient of the degree-one part of the image of the
        target generator b."""
        q_src = self.source.odd_rank
        mat = []
        for b in range(1, self.target.odd_rank + 1):
            lin = self.odd_maps[b].component(1)
            mat.append([lin.coefficient((a,)) for a in range(1, q_src + 1)])
        return mat

    def deviation_even(self) -> dict[str, GrassmannElement]:
        return {v: g - GrassmannElement.from_poly(g.body(), g.odd_rank)
                for v, g in self.even_maps.items()}

    def deviation_odd(self) -> dict[int, GrassmannElement]:
        return {b: g - g.component(1) for b, g in self.odd_maps.items()}

    def deviation_degree(self) -> float:
        """Smallest odd degree (>= 2) of any deviation from the split normal
        form, or infinity for an exactly split transition."""
        degree = INFINITY
        for g in self.deviation_even().values():
            d = g.min_odd_degree()
            if d is not None:
                degree = min(degree, d)
        for g in self.deviation_odd().values():
            d = g.min_odd_degree()
            if d is not None:
                degree = min(degree, d)
        return degree

    def is_identity(self) -> bool:
        if self.source.vars != self.target.vars or self.source.odd_rank != self.target.odd_rank:
            return False
        for v, g in self.even_maps.items():
            if g != GrassmannElement.even_var(self.source.vars, self.source.odd_rank, v):
                return False
        for b, g in self.odd_maps.items():
            if g != GrassmannElement.odd_gen(self.source.vars, self.source.odd_rank, b):
                return False
        return True

    def __eq__(self, other):
        return (isinstance(other, SuperTransition)
                and self.source == other.source and self.target == other.target
                and self.even_maps == other.even_maps and self.odd_maps == other.odd_maps)

    def __repr__(self):
        lines = [f"{self.source.name} -> {self.target.name}:"]
        for v in self.target.vars:
            lines.append(f"  {v} = {self.even_maps[v]}")
        for b in range(1, self.target.odd_rank + 1):
            lines.append(f"  theta_{b} = {self.odd_maps[b]}")
        return "\n".join(lines)


def identity_transition(chart: Chart) -> SuperTransition:
    even = {v: GrassmannElement.even_var(chart.vars, chart.odd_rank, v) for v in chart.vars}
    odd = {b: GrassmannElement.odd_gen(chart.vars, chart.odd_rank, b)
           for b in range(1, chart.odd_rank + 1)}
    return SuperTransition(chart, chart, even, odd, check=False)


def compose_transitions(s: SuperTransition, t: SuperTransition) -> SuperTransition:
    """Composite transition "s then t"; requires target(s) == source(t).

    Each coordinate image of the composite is the substitution of the images
    of ``s`` into the corresponding expression of ``t``.
    """
    if s.target.name != t.source.name:
        raise ContextError(f"cannot compose {s.source.name}->{s.target.name} with "
                           f"{t.source.name}->{t.target.name}")
    even = {v: s.apply(g) for v, g in t.even_maps.items()}
    odd = {b: s.apply(g) for b, g in t.odd_maps.items()}
    return SuperTransition(s.source, t.target, even, odd, check=False)


def invert_transition(t: SuperTransition, max_iter: int | None = None) -> SuperTransition:
    """Exact inverse of an admissible transition, solved order by order in
    odd degree.  Raises if the data is not invertible in the Laurent class."""
    src, tgt = t.source, t.target
    # reduced inverse: each target coordinate body is c * v^(+-1) for a single
    # source coordinate v, and the pairing must be a bijection.
    assign: dict[str, tuple[str, Fraction, int]] = {}
    for u in tgt.vars:
        c, exps = t.even_maps[u].body().monomial_parts()
        nz = [(i, e) for i, e in enumerate(exps) if e != 0]
        if len(nz) != 1 or nz[0][1] not in (1, -1):
            raise SupercechError(f"reduced part of {u}-image is not c*x^(+-1)")
        v = src.vars[nz[0][0]]
        assign[u] = (v, c, nz[0][1])
    used = [v for v, _, _ in assign.values()]
    if len(set(used)) != len(used) or set(used) != set(src.vars):
        raise SupercechError("reduced transition is not a coordinate bijection")

    tv, tq = tgt.vars, tgt.odd_rank
    even0: dict[str, GrassmannElement] = {}
    for u, (v, c, e) in assign.items():
        # u = c * v^e  =>  v = u/c (e = 1)  or  v = c/u (e = -1)
        if e == 1:
            img = LaurentPoly.var(tv, u).scale(Fraction(1, 1) / c)
        else:
            img = LaurentPoly.var(tv, u, -1).scale(c)
        even0[v] = GrassmannElement.from_poly(img, tq)
    zeta = t.odd_matrix()
    zeta_inv = invert_laurent_matrix(zeta)
    if zeta_inv is None:
        raise SupercechError("degree-one odd matrix is not invertible over Laurent polynomials")
    # express the inverted matrix in target coordinates via the reduced inverse
    body_images = {v: g.body() for v, g in even0.items()}
    odd0: dict[int, GrassmannElement] = {}
    for a in range(1, src.odd_rank + 1):
        acc = GrassmannElement.zero(tv, tq)
        for b in range(1, tgt.odd_rank + 1):
            entry = zeta_inv[a - 1][b - 1].subs_monomial(body_images, tv)
            acc = acc + GrassmannElement.odd_gen(tv, tq, b) * entry
        odd0[a] = acc

    inverse = SuperTransition(tgt, src, even0, odd0, check=False)
    ident = identity_transition(src)
    limit = max_iter if max_iter is not None else src.odd_rank + 3
    for _ in range(limit):
        comp = compose_transitions(t, inverse)
        d_even = {v: comp.even_maps[v] - ident.even_maps[v] for v in src.vars}
        d_odd = {a: comp.odd_maps[a] - ident.odd_maps[a] for a in range(1, src.odd_rank + 1)}
        if all(g.is_zero() for g in d_even.values()) and all(g.is_zero() for g in d_odd.values()):
            back = compose_transitions(inverse, t)
            if not back.is_identity():
                raise SupercechError("one-sided inverse only; data is inconsistent")
            return inverse
        # subtract the discrepancy, re-expressed in target coordinates
        even_new = {v: inverse.even_maps[v] - inverse.apply(d_even[v]) for v in src.vars}
        odd_new = {a: inverse.odd_maps[a] - inverse.apply(d_odd[a])
                   for a in range(1, src.odd_rank + 1)}
        inverse = SuperTransition(tgt, src, even_new, odd_new, check=False)
    raise SupercechError("inverse iteration did not terminate (data not invertible?)")


def invert_laurent_matrix(matrix: list[list[LaurentPoly]]) -> list[list[LaurentPoly]] | None:
    """Inverse of a square matrix of Laurent polynomials when the determinant
    is an invertible monomial; ``None`` otherwise."""
    n = len(matrix)
    if n == 0:
        return []
    det = laurent_det(matrix)
    if det.is_zero() or not det.is_monomial():
        return None
    det_inv = det.inverse()
    if n == 1:
        return [[det_inv]]
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [[matrix[r][c] for c in range(n) if c != j]
                     for r in range(n) if r != i]
            cof = laurent_det(minor)
            if (i + j) % 2:
                cof = -cof
            out[j][i] = cof * det_inv
    return out


def laurent_det(matrix: list[list[LaurentPoly]]) -> LaurentPoly:
    n = len(matrix)
    if n == 0:
        raise ValueError("empty matrix")
    if n == 1:
        return matrix[0][0]
    vars = matrix[0][0].vars
    result = LaurentPoly.zero(vars)
    for j in range(n):
        if matrix[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in matrix[1:]]
        term = matrix[0][j] * laurent_det(minor)
        result = result + (term if j % 2 == 0 else -term)
    return result


# --------------------------------------------------------------------- data


@dataclass
class CheckFailure:
    kind: str        # "inverse" | "triple" | "family" | "admissibility"
    location: tuple  # overlap or triple
    detail: str

    def __str__(self):
        return f"{self.kind} check failed on {self.location}: {self.detail}"


@dataclass
class VerificationReport:
    ok: bool
    failures: list[CheckFailure] = field(default_factory=list)
    checks: int = 0

    def __str__(self):
        if self.ok:
            return f"pass ({self.checks} checks)"
        return "\n".join(str(f) for f in self.failures)


class SuperGluingData:
    """A cover, one transition per declared ordered overlap, and (optionally)
    shared base coordinates making the data a family over those coordinates."""

    def __init__(self, cover: Cover, transitions: dict[tuple[str, str], SuperTransition],
                 base_vars: tuple[str, ...] = (), declared_splitting_type: int | None = None):
        self.cover = cover
        self.transitions = dict(transitions)
        self.base_vars = tuple(base_vars)
        self.declared_splitting_type = declared_splitting_type
        for key in cover.overlaps:
            if key not in self.transitions:
                raise ValueError(f"missing transition for overlap {key}")
        for (a, b), t in self.transitions.items():
            if t.source.name != a or t.target.name != b:
                raise ValueError(f"transition stored at {(a, b)} maps "
                                 f"{t.source.name}->{t.target.name}")
        for t in base_vars:
            for ch in cover.charts.values():
                if t not in ch.base_vars:
                    raise ValueError(f"base coordinate {t} not declared on chart {ch.name}")

    @property
    def is_family(self) -> bool:
        return bool(self.base_vars)

    def chart(self, name: str) -> Chart:
        return self.cover.chart(name)

    def transition(self, a: str, b: str) -> SuperTransition:
        return self.transitions[(a, b)]

    # ---------------------------------------------------------- verification

    def verify_cocycle(self) -> VerificationReport:
        failures: list[CheckFailure] = []
        checks = 0
        for (a, b) in self.cover.canonical_overlaps():
            tab, tba = self.transitions[(a, b)], self.transitions[(b, a)]
            comp = compose_transitions(tab, tba)
            checks += 1
            if not comp.is_identity():
                failures.append(CheckFailure("inverse", (a, b), _first_discrepancy(
                    comp, identity_transition(self.chart(a)))))
            comp = compose_transitions(tba, tab)
            checks += 1
            if not comp.is_identity():
                failures.append(CheckFailure("inverse", (b, a), _first_discrepancy(
                    comp, identity_transition(self.chart(b)))))
        for (a, b, c) in self.cover.triples:
            via = compose_transitions(self.transitions[(a, b)], self.transitions[(b, c)])
            direct = self.transitions[(a, c)]
            checks += 1
            if via != direct:
                failures.append(CheckFailure("triple", (a, b, c),
                                             _first_discrepancy(via, direct)))
        if self.is_family:
            for (a, b), t in self.transitions.items():
                for tv in self.base_vars:
                    expected = GrassmannElement.even_var(t.source.vars, t.source.odd_rank, tv)
                    checks += 1
                    if t.even_maps[tv] != expected:
                        failures.append(CheckFailure(
                            "family", (a, b), f"base coordinate map {tv} is not the identity"))
        return VerificationReport(not failures, failures, checks)

    # ------------------------------------------------------------ operations

    def splitting_type(self, verify: bool = True) -> float:
        """Deviation degree of the presentation: smallest j >= 2 at which some
        transition departs from split normal form; infinity if none does."""
        if verify:
            report = self.verify_cocycle()
            if not report.ok:
                raise CocycleError(str(report.failures[0]))
        return min((t.deviation_degree() for t in self.transitions.values()),
                   default=INFINITY)

    def reduce(self, verify: bool = True) -> tuple["ReducedSpace", "object"]:
        """Reduced space (degree-zero coordinate maps) plus the odd-bundle
        sheaf spec whose matrices are the degree-one coefficient matrices."""
        from .sheaf import SheafSpec  # local import; sheaf builds on spaces only
        if verify:
            report = self.verify_cocycle()
            if not report.ok:
                raise CocycleError(str(report.failures[0]))
        maps = {key: t.reduced_map() for key, t in self.transitions.items()}
        space = ReducedSpace(self.cover, maps)
        matrices = {key: t.odd_matrix() for key, t in self.transitions.items()}
        q = next(iter(self.cover.charts.values())).odd_rank
        spec = SheafSpec(space, q, matrices)
        return space, spec

    def restrict_fiber(self, point: dict[str, Fraction]) -> "SuperGluingData":
        """Evaluate the base coordinates at a rational point; the result is
        gluing data for the fiber over that point."""
        if set(point) != set(self.base_vars):
            raise ValueError(f"point must assign exactly the base coordinates {self.base_vars}")
        new_charts = []
        for name in self.cover.order:
            ch = self.cover.chart(name)
            keep_base = tuple(v for v in ch.base_vars if v not in point)
            new_charts.append(Chart(ch.name, ch.fiber_vars, keep_base, ch.odd_rank))
        cover = Cover(new_charts, self.cover.overlaps, self.cover.triples)
        transitions = {}
        for (a, b), t in self.transitions.items():
            src = cover.chart(a)
            even_images = {}
            for v in t.source.vars:
                if v in point:
                    even_images[v] = GrassmannElement.const(src.vars, src.odd_rank, point[v])
                else:
                    even_images[v] = GrassmannElement.even_var(src.vars, src.odd_rank, v)
            odd_images = {k: GrassmannElement.odd_gen(src.vars, src.odd_rank, k)
                          for k in range(1, src.odd_rank + 1)}
            even = {v: g.substitute(even_images, odd_images, src.vars, src.odd_rank)
                    for v, g in t.even_maps.items() if v not in point}
            odd = {k: g.substitute(even_images, odd_images, src.vars, src.odd_rank)
                   for k, g in t.odd_maps.items()}
            transitions[(a, b)] = SuperTransition(src, cover.chart(b), even, odd)
        return SuperGluingData(cover, transitions)

    def conjugate(self, witnesses: dict[str, SuperTransition]) -> "SuperGluingData":
        """Apply chartwise coordinate changes: each transition t_ab becomes
        w_b o t_ab o w_a^(-1)."""
        inverses = {name: invert_transition(w) for name, w in witnesses.items()}
        transitions = {}
        for (a, b), t in self.transitions.items():
            step = compose_transitions(inverses[a], t)
            transitions[(a, b)] = compose_transitions(step, witnesses[b])
        return SuperGluingData(self.cover, transitions, self.base_vars,
                               self.declared_splitting_type)

    def embedding_splitting_triple(self, point: dict[str, Fraction]):
        """Splitting-type triple (j'', j_b, j') of the fiber-wise embedding at
        a base point; j'' is read off the fiber presentation inside the family."""
        j_family = self.splitting_type()
        fiber = self.restrict_fiber(point)
        j_fiber = fiber.splitting_type()
        j_emb = j_fiber
        lemma_ok = (j_emb <= min(j_fiber, j_family)) or (
            j_emb == INFINITY and j_fiber == INFINITY)
        return EmbeddingTriple(j_emb, j_fiber, j_family, lemma_ok)

    def is_split_presentation(self) -> bool:
        return self.splitting_type(verify=False) == INFINITY

    def __eq__(self, other):
        return (isinstance(other, SuperGluingData)
                and self.cover.order == other.cover.order
                and self.cover.overlaps == other.cover.overlaps
                and self.transitions == other.transitions
                and self.base_vars == other.base_vars)


def restrict_odd(g: SuperGluingData, keep: int) -> SuperGluingData:
    """Set the odd generators above ``keep`` to zero and drop them.

    Used to pass from gluing data over a superspace base (whose base odd
    coordinates are the trailing generators, mapped identically) to the data
    of the underlying fibration; setting them to zero commutes with
    composition because the ideal they generate is transition-stable."""
    new_charts = []
    for name in g.cover.order:
        ch = g.cover.chart(name)
        new_charts.append(Chart(ch.name, ch.fiber_vars, ch.base_vars, keep))
    cover = Cover(new_charts, g.cover.overlaps, g.cover.triples)
    transitions = {}
    for (a, b), t in g.transitions.items():
        src = cover.chart(a)
        even_images = {v: GrassmannElement.even_var(src.vars, keep, v)
                       for v in t.source.vars}
        odd_images = {}
        for k in range(1, t.source.odd_rank + 1):
            if k <= keep:
                odd_images[k] = GrassmannElement.odd_gen(src.vars, keep, k)
            else:
                odd_images[k] = GrassmannElement.zero(src.vars, keep)
        even = {v: gr.substitute(even_images, odd_images, src.vars, keep)
                for v, gr in t.even_maps.items()}
        odd = {k: t.odd_maps[k].substitute(even_images, odd_images, src.vars, keep)
               for k in range(1, keep + 1)}
        transitions[(a, b)] = SuperTransition(src, cover.chart(b), even, odd)
    return SuperGluingData(cover, transitions, g.base_vars)


@dataclass(frozen=True)
class EmbeddingTriple:
    embedding: float
    fiber: float
    family: float
    lemma_holds: bool

    def as_tuple(self):
        return (self.embedding, self.fiber, self.family)


def _first_discrepancy(got: SuperTransition, expected: SuperTransition) -> str:
    for v in expected.target.vars:
        if got.even_maps[v] != expected.even_maps[v]:
            diff = got.even_maps[v] - expected.even_maps[v]
            return f"{v}: discrepancy {diff}"
    for b in range(1, expected.target.odd_rank + 1):
        if got.odd_maps[b] != expected.odd_maps[b]:
            diff = got.odd_maps[b] - expected.odd_maps[b]
            return f"theta_{b}: discrepancy {diff}"
    return "no discrepancy (?)"
