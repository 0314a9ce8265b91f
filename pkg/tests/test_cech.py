import random
from fractions import Fraction as Q

import pytest

from supercech.cech import (CechCochain, ShortExactSequence, cech_delta,
                            cohomology_basis, cohomology_class, connecting_map,
                            cup_product, extension_sheaf, is_coboundary,
                            is_cocycle, solve_coboundary)
from supercech.errors import CocycleError
from supercech.laurent import LaurentPoly
from supercech.linalg import rank as qrank
from supercech.sheaf import sheaf_hom, trivial_spec, sheaf_tensor

from conftest import line_bundle

Qz = Q(0)


def mono(space, chart, coef, exp):
    vars = space.cover.chart(chart).vars
    return LaurentPoly.monomial(vars, coef, tuple(exp if v == vars[0] else 0 for v in vars))


def random_cochain(rng, spec, degree):
    sections = {}
    cover = spec.space.cover
    keys = [(n,) for n in cover.order] if degree == 0 else cover.canonical_overlaps()
    lo = 0 if degree == 0 else -2
    for key in keys:
        chart = key[0]
        vec = spec.zero_vector(chart)
        for i in range(spec.rank):
            vec[i] = mono(spec.space, chart, Q(rng.randint(-3, 3)), rng.randint(lo, 2))
        sections[tuple(key) if degree else (key[0],)] = vec
    return CechCochain(spec, degree, sections)


def test_delta_of_global_section_vanishes(p1_space):
    o0 = line_bundle(p1_space, 0)
    one = CechCochain(o0, 0, {("U0",): [mono(p1_space, "U0", 1, 0)],
                              ("U1",): [mono(p1_space, "U1", 1, 0)]})
    assert cech_delta(one).is_zero()


def test_delta_of_partial_section(p1_space):
    o0 = line_bundle(p1_space, 0)
    c = CechCochain(o0, 0, {("U0",): [mono(p1_space, "U0", 1, 0)]})
    d = cech_delta(c)
    assert str(d.sections[("U0", "U1")][0]) == "-1"


def test_delta_squared_zero_on_three_charts(split_three_charts):
    space, odd = split_three_charts.reduce()
    rng = random.Random(5)
    for spec in (odd, trivial_spec(space, 2)):
        for _ in range(10):
            c = random_cochain(rng, spec, 0)
            assert cech_delta(cech_delta(c)).is_zero()


def test_is_coboundary_on_line_bundles(p1_space):
    om2 = line_bundle(p1_space, -2)
    # the canonical nontrivial class of O(-2) is x^-1
    c = CechCochain(om2, 1, {("U0", "U1"): [mono(p1_space, "U0", 1, -1)]})
    ok, rep = is_coboundary(c)
    assert not ok
    assert str(rep.sections[("U0", "U1")][0]) == "x^-1"
    # exponent 0 splits
    c = CechCochain(om2, 1, {("U0", "U1"): [mono(p1_space, "U0", 1, 0)]})
    ok, witness = is_coboundary(c)
    assert ok and cech_delta(witness) == c


def test_any_o0_cochain_splits(p1_space):
    o0 = line_bundle(p1_space, 0)
    rng = random.Random(3)
    for _ in range(5):
        c = random_cochain(rng, o0, 1)
        ok, witness = is_coboundary(c)
        assert ok and cech_delta(witness) == c


def test_zero_cochain_is_coboundary(p1_space):
    o0 = line_bundle(p1_space, 0)
    ok, witness = is_coboundary(CechCochain(o0, 1))
    assert ok and witness.is_zero()


def test_witness_reproduces_coboundary(p1_space):
    rng = random.Random(9)
    om2 = line_bundle(p1_space, -2)
    for _ in range(5):
        b = random_cochain(rng, om2, 0)
        c = cech_delta(b)
        ok, witness = is_coboundary(c)
        assert ok
        assert cech_delta(witness) == c


def brute_force_h_dims(n: int):
    """Independent rank computation for the two-chart specs with overlap
    matrix x^-n: sections are exponent vectors; the coboundary matrix is
    assembled directly from exponent shifts.  The candidate window covers all
    possible classes and the section window exceeds it by the twist, so both
    dimensions are exact."""
    cand = abs(n) + 1
    window = cand + abs(n) + 1
    # unknowns: f = sum_{0<=e<=window} a_e x^e on U0, g likewise on U1
    # overlap value (in U0 coordinates): x^n * g(1/x) - f(x)
    cols = []
    keyset = set()
    for e in range(window + 1):          # a_e: -x^e
        cols.append({e: Q(-1)})
        keyset.add(e)
    for e in range(window + 1):          # b_e: +x^(n-e)
        cols.append({n - e: Q(1)})
        keyset.add(n - e)
    keys = sorted(keyset)
    pos = {k: i for i, k in enumerate(keys)}
    matrix = [[Qz] * len(cols) for _ in keys]
    for j, col in enumerate(cols):
        for k, v in col.items():
            matrix[pos[k]][j] = v
    image_rank = qrank(matrix)
    h0 = 2 * (window + 1) - image_rank
    # candidate overlap exponents modulo the image of the coboundary
    candidates = [e for e in range(-cand, cand + 1)]
    aug_keys = sorted(keyset | set(candidates))
    pos = {k: i for i, k in enumerate(aug_keys)}
    rows = []
    for col in cols:
        row = [Qz] * len(aug_keys)
        for k, v in col.items():
            row[pos[k]] = v
        rows.append(row)
    h1 = 0
    for e in candidates:
        probe = [Qz] * len(aug_keys)
        probe[pos[e]] = Q(1)
        if qrank(rows + [probe]) > qrank(rows):
            rows.append(probe)
            h1 += 1
    return h0, h1


@pytest.mark.parametrize("n", range(-6, 7))
def test_cohomology_dims_match_brute_force(p1_space, n):
    spec = line_bundle(p1_space, n)
    h0 = len(cohomology_basis(spec, 0))
    h1 = len(cohomology_basis(spec, 1))
    assert (h0, h1) == (max(n + 1, 0), max(-n - 1, 0))
    bf_h0, bf_h1 = brute_force_h_dims(n)
    assert (h0, h1) == (bf_h0, bf_h1)


def test_cohomology_basis_on_three_charts(split_three_charts):
    space, odd = split_three_charts.reduce()
    det = None
    from supercech.sheaf import sheaf_exterior_power
    det = sheaf_exterior_power(odd, 2)   # x^-4-style: degree 4
    assert len(cohomology_basis(det, 0)) == 5
    assert len(cohomology_basis(det, 1)) == 0
    dual = None
    from supercech.sheaf import sheaf_dual
    dual = sheaf_dual(det)               # degree -4
    assert len(cohomology_basis(dual, 0)) == 0
    assert len(cohomology_basis(dual, 1)) == 3


def test_cup_product_unit(p1_space):
    om2 = line_bundle(p1_space, -2)
    triv = trivial_spec(p1_space, 1)
    one = CechCochain(triv, 0, {("U0",): [mono(p1_space, "U0", 1, 0)],
                                ("U1",): [mono(p1_space, "U1", 1, 0)]})
    v = CechCochain(om2, 1, {("U0", "U1"): [mono(p1_space, "U0", 1, -1)]})
    uv = cup_product(one, v)
    assert uv.sections[("U0", "U1")] == v.sections[("U0", "U1")]


def test_cup_leibniz_on_three_charts(split_three_charts):
    space, odd = split_three_charts.reduce()
    from supercech.sheaf import sheaf_exterior_power
    A = sheaf_exterior_power(odd, 2)
    B = trivial_spec(space, 1)
    rng = random.Random(21)
    for _ in range(6):
        u = random_cochain(rng, A, 0)
        v = random_cochain(rng, B, 1)
        # delta(u cup v) = delta(u) cup v + u cup delta(v); here v has
        # degree 1 so the second term lands in unsupported degree 3 only
        # when triples are present -- test the degree (0,1) identity instead:
        lhs = cech_delta(cup_product(u, v))
        rhs = cup_product(cech_delta(u), v)
        # u cup delta(v): delta(v) is degree 2; cup (0,2) unsupported, but
        # the Leibniz identity in this shape needs only delta(v) = 0 inputs:
        if cech_delta(v).is_zero():
            assert lhs == rhs
    for _ in range(6):
        u = random_cochain(rng, A, 0)
        b = random_cochain(rng, B, 0)
        lhs = cech_delta(cup_product(u, b))
        rhs = cup_product(cech_delta(u), b) + cup_product(u, cech_delta(b))
        # degree-1 cup degree-0 ordering: (delta u) cup b has the transported
        # b; u cup (delta b) keeps u on the leading chart
        assert lhs == rhs


def test_cup_well_defined_on_classes(p1_space):
    om2 = line_bundle(p1_space, -2)
    o2 = line_bundle(p1_space, 2)
    u = CechCochain(om2, 1, {("U0", "U1"): [mono(p1_space, "U0", 1, -1)]})
    s = CechCochain(o2, 0, {("U0",): [mono(p1_space, "U0", 1, 1)],
                            ("U1",): [mono(p1_space, "U1", 1, 1)]})
    assert cech_delta(s).is_zero()
    uv = cup_product(u, s)
    # change u by a coboundary
    b = CechCochain(om2, 0, {("U0",): [mono(p1_space, "U0", 3, 2)]})
    u2 = u + cech_delta(b)
    uv2 = cup_product(u2, s)
    ok, _ = is_coboundary(uv2 - uv)
    assert ok


def test_connecting_map_of_extension_reproduces_class(p1_space):
    sub = trivial_spec(p1_space, 1)
    quot = line_bundle(p1_space, 2)
    hom = sheaf_hom(quot, sub)
    coc = CechCochain(hom, 1, {("U0", "U1"): [mono(p1_space, "U0", 1, -1)]})
    ext = extension_sheaf(sub, quot, coc)
    # hom(quot, -) twist of the sequence sub -> ext -> quot
    h_sub = sheaf_hom(quot, sub)
    h_tot = sheaf_hom(quot, ext)
    h_quot = sheaf_hom(quot, quot)
    incl = [[Q(1)], [Q(0)]]
    proj = [[Q(0), Q(1)]]
    ses = ShortExactSequence(h_sub, h_tot, h_quot, incl, proj)
    ident = CechCochain(h_quot, 0, {("U0",): [mono(p1_space, "U0", 1, 0)],
                                    ("U1",): [mono(p1_space, "U1", 1, 0)]})
    delta1 = connecting_map(ses, ident)
    ok_plus, _ = is_coboundary(delta1 - coc)
    ok_minus, _ = is_coboundary(delta1 + coc)
    assert ok_plus or ok_minus
    # the connecting image of a class from the total spec is a coboundary
    lifted = CechCochain(h_quot, 0, {("U0",): [mono(p1_space, "U0", 2, 1)],
                                     ("U1",): [mono(p1_space, "U1", 2, 1)]})
    if cech_delta(lifted).is_zero():
        out = connecting_map(ses, lifted)
        ok, _ = is_coboundary(out)
        assert ok


def test_connecting_independent_of_lift(p1_space):
    sub = trivial_spec(p1_space, 1)
    quot = line_bundle(p1_space, 2)
    hom = sheaf_hom(quot, sub)
    coc = CechCochain(hom, 1, {("U0", "U1"): [mono(p1_space, "U0", 1, -1)]})
    ext = extension_sheaf(sub, quot, coc)
    h_sub = sheaf_hom(quot, sub)
    h_tot = sheaf_hom(quot, ext)
    h_quot = sheaf_hom(quot, quot)
    ses = ShortExactSequence(h_sub, h_tot, h_quot, [[Q(1)], [Q(0)]], [[Q(0), Q(1)]])
    c = CechCochain(h_quot, 0, {("U0",): [mono(p1_space, "U0", 1, 0)],
                                ("U1",): [mono(p1_space, "U1", 1, 0)]})
    out1 = connecting_map(ses, c)
    # second lift: add something in the image of the inclusion
    sigma = ses.section_of_projection()
    lifted = {}
    for key, vec in c.sections.items():
        vars = p1_space.cover.chart(key[0]).vars
        base = [sum((row[j].__mul__(vec[j]) for j in range(len(vec))),
                    LaurentPoly.zero(vars)) for row in
                [[LaurentPoly.const(vars, v) for v in r] for r in sigma]]
        # shift by incl(x^2)
        base[0] = base[0] + LaurentPoly.monomial(vars, 5, (2,))
        lifted[key] = base
    lift2 = CechCochain(h_tot, 0, lifted)
    boundary = cech_delta(lift2)
    out2_sections = {}
    for key, vec in boundary.sections.items():
        out2_sections[key] = [vec[0]]
    out2 = CechCochain(h_sub, 1, out2_sections)
    ok, _ = is_coboundary(out2 - out1)
    assert ok


def test_non_cocycle_rejected(split_three_charts):
    space, odd = split_three_charts.reduce()
    from supercech.sheaf import sheaf_exterior_power
    det = sheaf_exterior_power(odd, 2)
    bad = CechCochain(det, 1, {("U0", "U1"): [mono(space, "U0", 1, 0)]})
    assert not is_cocycle(bad)
    with pytest.raises(CocycleError):
        solve_coboundary(bad)
