"""Locally free sheaves presented by transition matrices.

A :class:`SheafSpec` of rank r on a :class:`~supercech.spaces.ReducedSpace`
stores, for every declared ordered overlap ``(a, b)``, an r x r matrix of
Laurent polynomials in the a-chart coordinates.  The matrix transports
section component vectors from the a-frame to the b-frame::

    v_b (expressed in a-coordinates)  =  M[(a, b)] . v_a

Convention for the two-chart projective-line covers used throughout tests
and the golden corpus: the sheaf spec labeled ``O(n)`` has overlap matrix
``x^(-n)``, which yields dim H0 = n + 1 (n >= 0) and dim H1 = -n - 1
(n <= -2).

Constructions (dual, tensor, hom, exterior power) produce the induced
matrices; hom components are flattened row-major with the target index
major, so ``hom(A, B)`` has flat transition ``kron(M_B, M_A^-T)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import CocycleError
from .gluing import invert_laurent_matrix
from .laurent import LaurentPoly, Q
from .spaces import ReducedSpace


def mat_mul(a: list[list[LaurentPoly]], b: list[list[LaurentPoly]]) -> list[list[LaurentPoly]]:
    if not a or not b:
        return []
    n, k, m = len(a), len(b), len(b[0])
    vars = a[0][0].vars if a and a[0] else (b[0][0].vars if b and b[0] else ())
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = LaurentPoly.zero(vars)
            for t in range(k):
                if not a[i][t].is_zero() and not b[t][j].is_zero():
                    acc = acc + a[i][t] * b[t][j]
            row.append(acc)
        out.append(row)
    return out


def mat_vec(m: list[list[LaurentPoly]], v: list[LaurentPoly]) -> list[LaurentPoly]:
    out = []
    for row in m:
        acc = LaurentPoly.zero(v[0].vars) if v else LaurentPoly.zero(row[0].vars if row else ())
        for entry, comp in zip(row, v):
            if not entry.is_zero() and not comp.is_zero():
                acc = acc + entry * comp
        out.append(acc)
    return out


def mat_transpose(m):
    return [list(col) for col in zip(*m)] if m else []


def kron(a: list[list[LaurentPoly]], b: list[list[LaurentPoly]]) -> list[list[LaurentPoly]]:
    """Row-major Kronecker product: entry ((i,j),(k,l)) = a[i][k] * b[j][l]."""
    if not a or not b:
        return []
    ra, ca = len(a), len(a[0])
    rb, cb = len(b), len(b[0])
    out = []
    for i in range(ra):
        for j in range(rb):
            row = []
            for k in range(ca):
                for l in range(cb):
                    row.append(a[i][k] * b[j][l])
            out.append(row)
    return out


def identity_matrix(vars: tuple[str, ...], n: int) -> list[list[LaurentPoly]]:
    one = LaurentPoly.const(vars, 1)
    zero = LaurentPoly.zero(vars)
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


class SheafSpec:
    """Rank + per-overlap transition matrices over a reduced space."""

    def __init__(self, space: ReducedSpace, rank: int,
                 matrices: dict[tuple[str, str], list[list[LaurentPoly]]],
                 basis_labels: tuple | None = None, check: bool = True,
                 extension: tuple | None = None):
        self.space = space
        self.rank = int(rank)
        self.matrices = matrices
        self.basis_labels = tuple(basis_labels) if basis_labels is not None else tuple(range(rank))
        self.extension = extension  # (sub_spec, quot_spec) when built as an extension
        cover = space.cover
        for key in cover.overlaps:
            if key not in matrices:
                raise ValueError(f"missing matrix for overlap {key}")
            m = matrices[key]
            if len(m) != self.rank or any(len(r) != self.rank for r in m):
                raise ValueError(f"matrix for {key} is not {self.rank}x{self.rank}")
        if check:
            self._verify()

    def _verify(self):
        cover = self.space.cover
        for (a, b) in cover.canonical_overlaps():
            prod = mat_mul(self._matrix_in(a, (b, a)), self.matrices[(a, b)])
            if prod != identity_matrix(self._vars(a), self.rank) and self.rank > 0:
                raise CocycleError(f"matrices on ({a},{b}) and ({b},{a}) are not inverse")
        for (a, b, c) in cover.triples:
            via = mat_mul(self._matrix_in(a, (b, c)), self.matrices[(a, b)])
            if via != self.matrices[(a, c)]:
                raise CocycleError(f"matrix cocycle fails on ({a},{b},{c})")

    def _vars(self, chart: str) -> tuple[str, ...]:
        return self.space.cover.chart(chart).vars

    def _matrix_in(self, chart: str, key: tuple[str, str]) -> list[list[LaurentPoly]]:
        """Matrix of overlap ``key`` re-expressed in ``chart`` coordinates."""
        src = key[0]
        m = self.matrices[key]
        if src == chart:
            return m
        return [[self.space.compose_into(chart, src, e) for e in row] for row in m]

    # ------------------------------------------------------------- transport

    def transport(self, frm: str, to: str, vector: list[LaurentPoly]) -> list[LaurentPoly]:
        """Re-express a component vector given in ``frm`` frame/coordinates in
        the ``to`` frame/coordinates (the two charts must overlap)."""
        composed = [self.space.compose_into(to, frm, p) for p in vector]
        matrix = self._matrix_in(to, (frm, to))
        return mat_vec(matrix, composed)

    def zero_vector(self, chart: str) -> list[LaurentPoly]:
        return [LaurentPoly.zero(self._vars(chart)) for _ in range(self.rank)]

    def max_pole_order(self) -> int:
        worst = 0
        for m in self.matrices.values():
            for row in m:
                for e in row:
                    for exps in e.terms:
                        worst = max(worst, max((abs(x) for x in exps), default=0))
        for cmap in self.space.coordinate_maps.values():
            for img in cmap.values():
                for exps in img.terms:
                    worst = max(worst, max((abs(x) for x in exps), default=0))
        return worst

    def same_cover(self, other: "SheafSpec") -> bool:
        return self.space is other.space or (
            self.space.cover.order == other.space.cover.order
            and self.space.coordinate_maps == other.space.coordinate_maps)


# ------------------------------------------------------------ constructions


def trivial_spec(space: ReducedSpace, rank: int = 1) -> SheafSpec:
    mats = {key: identity_matrix(space.cover.chart(key[0]).vars, rank)
            for key in space.cover.overlaps}
    return SheafSpec(space, rank, mats, check=False)


def line_bundle_spec(space: ReducedSpace, fiber_var_exponents: dict[tuple[str, str], LaurentPoly]) -> SheafSpec:
    mats = {key: [[entry]] for key, entry in fiber_var_exponents.items()}
    return SheafSpec(space, 1, mats)


def sheaf_dual(spec: SheafSpec) -> SheafSpec:
    mats = {}
    for key, m in spec.matrices.items():
        if spec.rank == 0:
            mats[key] = []
            continue
        inv = invert_laurent_matrix(m)
        if inv is None:
            raise CocycleError(f"matrix on {key} not invertible in the Laurent class")
        mats[key] = mat_transpose(inv)
    return SheafSpec(spec.space, spec.rank, mats,
                     tuple(("dual", l) for l in spec.basis_labels), check=False)


def sheaf_tensor(a: SheafSpec, b: SheafSpec) -> SheafSpec:
    if not a.same_cover(b):
        raise CocycleError("tensor factors live on different covers")
    mats = {key: kron(a.matrices[key], b.matrices[key]) for key in a.matrices}
    labels = tuple((la, lb) for la in a.basis_labels for lb in b.basis_labels)
    return SheafSpec(a.space, a.rank * b.rank, mats, labels, check=False)


def sheaf_hom(a: SheafSpec, b: SheafSpec) -> SheafSpec:
    """Sheaf of maps from ``a`` to ``b``.  Sections are rank_b x rank_a
    matrices X with the transport X_beta = M_b . X_alpha . M_a^{-1}; they are
    flattened row-major (b-index major)."""
    if not a.same_cover(b):
        raise CocycleError("hom factors live on different covers")
    mats = {}
    for key in a.matrices:
        if a.rank == 0 or b.rank == 0:
            mats[key] = []
            continue
        inv = invert_laurent_matrix(a.matrices[key])
        if inv is None:
            raise CocycleError(f"matrix on {key} not invertible in the Laurent class")
        mats[key] = kron(b.matrices[key], mat_transpose(inv))
    labels = tuple((lb, la) for lb in b.basis_labels for la in a.basis_labels)
    return SheafSpec(a.space, a.rank * b.rank, mats, labels, check=False)


def hom_flatten(matrix: list[list[LaurentPoly]]) -> list[LaurentPoly]:
    return [e for row in matrix for e in row]


def hom_unflatten(flat: list[LaurentPoly], rank_target: int, rank_source: int) -> list[list[LaurentPoly]]:
    return [list(flat[i * rank_source:(i + 1) * rank_source]) for i in range(rank_target)]


def sheaf_exterior_power(spec: SheafSpec, k: int) -> SheafSpec:
    """k-th compound: basis of increasing multi-indices, entries k x k minors."""
    if k < 0:
        raise ValueError("negative exterior power")
    if k == 0:
        return trivial_spec(spec.space, 1)
    if k > spec.rank:
        mats = {key: [] for key in spec.matrices}
        return SheafSpec(spec.space, 0, mats, (), check=False)
    idxs = list(combinations(range(spec.rank), k))
    mats = {}
    for key, m in spec.matrices.items():
        out = []
        for rows in idxs:
            row_entries = []
            for cols in idxs:
                sub = [[m[r][c] for c in cols] for r in rows]
                row_entries.append(_det(sub))
            out.append(row_entries)
        mats[key] = out
    labels = tuple(tuple(spec.basis_labels[i] for i in I) for I in idxs)
    return SheafSpec(spec.space, len(idxs), mats, labels, check=False)


def _det(m: list[list[LaurentPoly]]) -> LaurentPoly:
    n = len(m)
    if n == 1:
        return m[0][0]
    vars = m[0][0].vars
    acc = LaurentPoly.zero(vars)
    for j in range(n):
        if m[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = m[0][j] * _det(minor)
        acc = acc + (term if j % 2 == 0 else -term)
    return acc


# -------------------------------------------------------------- filtrations


@dataclass
class FilteredSheaf:
    """Filtration of the j-th exterior power of an extension spec by the
    number of sub-factors in each wedge monomial.

    ``pieces[k]`` holds the ambient basis positions of monomials with at
    least k sub-factors; ``graded[k]`` those with exactly k.  Quotient specs
    are the compressed diagonal blocks and coincide entrywise with the
    Kronecker products of the exterior powers of the two factors.
    """

    ambient: SheafSpec
    degree: int
    sub: SheafSpec
    quot: SheafSpec
    pieces: dict[int, list[int]]
    graded: dict[int, list[int]]
    piece_specs: dict[int, SheafSpec]
    quotient_specs: dict[int, SheafSpec]

    def inclusion_matrix(self, k: int) -> list[list[Fraction]]:
        """Constant matrix embedding F_k into the ambient exterior power."""
        sel = self.pieces[k]
        return [[Q(1) if (j < len(sel) and i == sel[j]) else Q(0)
                 for j in range(len(sel))] for i in range(self.ambient.rank)]

    def piece_to_piece_inclusion(self, k: int) -> list[list[Fraction]]:
        """Constant matrix embedding F_{k+1} into F_k."""
        return _piece_to_piece_matrix(self.pieces[k], self.pieces[k + 1])

    def projection_matrix(self, k: int) -> list[list[Fraction]]:
        """Constant matrix projecting F_k onto F_k / F_{k+1}."""
        big = self.pieces[k]
        exact = self.graded[k]
        return [[Q(1) if big[j] == e else Q(0) for j in range(len(big))] for e in exact]

    def verify(self) -> None:
        """Exact block-triangularity and quotient-equals-Kronecker checks."""
        amb = self.ambient
        for key, m in amb.matrices.items():
            for k, sel in self.pieces.items():
                below = [i for i in range(amb.rank) if i not in sel]
                for i in below:
                    for j in sel:
                        if not m[i][j].is_zero():
                            raise CocycleError(
                                f"filtration not respected on {key} at entry ({i},{j})")
        sub, quot = self.sub, self.quot
        for k in self.quotient_specs:
            expect_sub = sheaf_exterior_power(sub, k)
            expect_quot = sheaf_exterior_power(quot, self.degree - k)
            expected = sheaf_tensor(expect_sub, expect_quot)
            got = self.quotient_specs[k]
            for key in amb.matrices:
                if expected.matrices[key] != got.matrices[key]:
                    raise CocycleError(
                        f"quotient F_{k}/F_{k+1} differs from the product matrices on {key}")


def _piece_to_piece_matrix(big: list[int], small: list[int]) -> list[list[Fraction]]:
    pos = {idx: i for i, idx in enumerate(big)}
    out = [[Q(0)] * len(small) for _ in range(len(big))]
    for j, s in enumerate(small):
        out[pos[s]][j] = Q(1)
    return out


def filtration(ext: SheafSpec, degree: int) -> FilteredSheaf:
    """Filtration of the degree-th exterior power of an extension spec by the
    count of sub-factors; requires ``ext`` to record its sub/quot split."""
    if ext.extension is None:
        raise ValueError("spec has no recorded sub/quotient split")
    sub, quot = ext.extension
    s, q = sub.rank, quot.rank
    amb = sheaf_exterior_power(ext, degree)
    idxs = list(combinations(range(ext.rank), degree))
    counts = [sum(1 for i in I if i < s) for I in idxs]
    pieces: dict[int, list[int]] = {}
    graded: dict[int, list[int]] = {}
    for k in range(degree + 1):
        pieces[k] = [p for p, c in enumerate(counts) if c >= k]
        graded[k] = [p for p, c in enumerate(counts) if c == k]
    piece_specs = {}
    quotient_specs = {}
    for k in range(degree + 1):
        sel = pieces[k]
        piece_specs[k] = SheafSpec(
            amb.space, len(sel),
            {key: [[m[i][j] for j in sel] for i in sel] for key, m in amb.matrices.items()},
            tuple(amb.basis_labels[i] for i in sel), check=False)
        gsel = graded[k]
        quotient_specs[k] = SheafSpec(
            amb.space, len(gsel),
            {key: [[m[i][j] for j in gsel] for i in gsel] for key, m in amb.matrices.items()},
            tuple(amb.basis_labels[i] for i in gsel), check=False)
    return FilteredSheaf(amb, degree, sub, quot, pieces, graded, piece_specs, quotient_specs)
