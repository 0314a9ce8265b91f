"""Covers, charts and reduced spaces.

A :class:`Cover` is purely combinatorial: named charts, declared ordered
overlaps and declared triples.  A :class:`ReducedSpace` adds the reduced
coordinate changes (invertible Laurent monomials) between chart coordinate
systems; it is the base geometry on which sheaves and cochains live.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import CocycleError, ContextError
from .laurent import LaurentPoly


@dataclass(frozen=True)
class Chart:
    name: str
    fiber_vars: tuple[str, ...]
    base_vars: tuple[str, ...] = ()
    odd_rank: int = 0

    @property
    def vars(self) -> tuple[str, ...]:
        return self.fiber_vars + self.base_vars


class Cover:
    """Charts plus declared overlap/triple structure.

    Every declared overlap must come with its partner in the opposite order,
    and the three edges of every declared triple must be declared overlaps.
    """

    def __init__(self, charts: list[Chart], overlaps: list[tuple[str, str]],
                 triples: list[tuple[str, str, str]] | None = None):
        self.charts: dict[str, Chart] = {}
        for ch in charts:
            if ch.name in self.charts:
                raise ValueError(f"duplicate chart {ch.name}")
            self.charts[ch.name] = ch
        self.order = [ch.name for ch in charts]
        self.overlaps = [tuple(o) for o in overlaps]
        self.triples = [tuple(t) for t in (triples or [])]
        pairs = set(self.overlaps)
        for a, b in self.overlaps:
            if a not in self.charts or b not in self.charts:
                raise ValueError(f"overlap ({a},{b}) references unknown chart")
            if (b, a) not in pairs:
                raise ValueError(f"overlap ({a},{b}) lacks partner ({b},{a})")
        for a, b, c in self.triples:
            for e in ((a, b), (b, c), (a, c)):
                if e not in pairs:
                    raise ValueError(f"triple ({a},{b},{c}) misses overlap {e}")

    def chart(self, name: str) -> Chart:
        return self.charts[name]

    def index(self, name: str) -> int:
        return self.order.index(name)

    def canonical_overlaps(self) -> list[tuple[str, str]]:
        """One representative per unordered overlap, in declaration order."""
        seen = set()
        out = []
        for a, b in self.overlaps:
            key = frozenset((a, b))
            if key not in seen:
                seen.add(key)
                out.append((a, b) if self.index(a) < self.index(b) else (b, a))
        return out

    def canonical_triples(self) -> list[tuple[str, str, str]]:
        seen = set()
        out = []
        for t in self.triples:
            key = frozenset(t)
            if key not in seen:
                seen.add(key)
                out.append(tuple(sorted(t, key=self.index)))
        return out


class ReducedSpace:
    """A cover together with monomial coordinate changes between charts.

    ``coordinate_maps[(a, b)]`` sends each coordinate name of chart ``b`` to
    a Laurent monomial in the coordinates of chart ``a`` (the expression of
    the b-coordinates on the overlap).  Inverse and triple compatibility are
    verified exactly.
    """

    def __init__(self, cover: Cover,
                 coordinate_maps: dict[tuple[str, str], dict[str, LaurentPoly]],
                 check: bool = True):
        self.cover = cover
        self.coordinate_maps = coordinate_maps
        for (a, b) in cover.overlaps:
            if (a, b) not in coordinate_maps:
                raise ValueError(f"missing coordinate map for overlap ({a},{b})")
            cmap = coordinate_maps[(a, b)]
            cb = cover.chart(b)
            ca = cover.chart(a)
            for v in cb.vars:
                if v not in cmap:
                    raise ValueError(f"coordinate map ({a},{b}) misses {v}")
                img = cmap[v]
                if img.vars != ca.vars:
                    raise ContextError(f"coordinate map ({a},{b}):{v} not in {a}-coordinates")
                if not img.is_monomial():
                    raise ValueError(f"coordinate map ({a},{b}):{v} is not an invertible monomial")
        if check:
            self._verify()

    def _verify(self):
        for (a, b) in self.cover.overlaps:
            for v in self.cover.chart(a).vars:
                expected = LaurentPoly.var(self.cover.chart(a).vars, v)
                got = self.compose_into(a, b, self.coordinate_maps[(b, a)][v])
                if got != expected:
                    raise CocycleError(f"reduced maps ({a},{b}) and ({b},{a}) are not inverse at {v}")
        for (a, b, c) in self.cover.triples:
            for v in self.cover.chart(c).vars:
                direct = self.coordinate_maps[(a, c)][v]
                via = self.compose_into(a, b, self.coordinate_maps[(b, c)][v])
                if direct != via:
                    raise CocycleError(f"reduced cocycle fails on ({a},{b},{c}) at {v}")

    def pull_map(self, frm: str, to: str) -> dict[str, LaurentPoly]:
        return self.coordinate_maps[(to, frm)]

    def negative_vars(self, a: str, b: str) -> frozenset[str]:
        """Chart-a coordinates allowed to appear with negative exponents in
        sections on the (a, b) overlap.

        A variable is inverted on the overlap exactly when some reduced
        coordinate image has a pole in it; overlaps whose coordinate change
        is pole-free (e.g. a rescaled copy of the same chart, or the base
        directions of a family) carry polynomial sections only."""
        cache = getattr(self, "_neg_cache", None)
        if cache is None:
            cache = {}
            setattr(self, "_neg_cache", cache)
        key = (a, b)
        if key not in cache:
            out = set()
            cmap = self.coordinate_maps[(a, b)]
            avars = self.cover.chart(a).vars
            for img in cmap.values():
                for exps in img.terms:
                    for v, e in zip(avars, exps):
                        if e < 0:
                            out.add(v)
            cache[key] = frozenset(out)
        return cache[key]

    def compose_into(self, a: str, b: str, poly: LaurentPoly) -> LaurentPoly:
        """Re-express a polynomial in b-coordinates as one in a-coordinates,
        using the (a, b) coordinate map."""
        cmap = self.coordinate_maps[(a, b)]
        target = self.cover.chart(a).vars
        images = {v: cmap[v] for v in poly.vars}
        return poly.subs_monomial(images, target)

    def jacobian(self, a: str, b: str) -> list[list[LaurentPoly]]:
        """Matrix d(b-coords)/d(a-coords), entries in a-coordinates; rows are
        indexed by b-coordinates, columns by a-coordinates."""
        ca, cb = self.cover.chart(a), self.cover.chart(b)
        cmap = self.coordinate_maps[(a, b)]
        return [[cmap[u].derivative(v) for v in ca.vars] for u in cb.vars]


def product_space(space: ReducedSpace, base_vars: tuple[str, ...]) -> ReducedSpace:
    """Extend every chart of ``space`` with shared base coordinates mapped
    identically across overlaps."""
    charts = [Chart(ch.name, ch.fiber_vars, ch.base_vars + base_vars, ch.odd_rank)
              for ch in (space.cover.chart(n) for n in space.cover.order)]
    cover = Cover(charts, space.cover.overlaps, space.cover.triples)
    maps = {}
    for (a, b), cmap in space.coordinate_maps.items():
        av = cover.chart(a).vars
        new = {v: img.with_context(av) for v, img in cmap.items()}
        for t in base_vars:
            new[t] = LaurentPoly.var(av, t)
        maps[(a, b)] = new
    return ReducedSpace(cover, maps, check=False)
