import random
from fractions import Fraction as Q

import pytest

from supercech.cech import is_cocycle
from supercech.errors import CocycleError, LevelError
from supercech.gluing import INFINITY, SuperTransition, identity_transition
from supercech.obstruction import (attempt_split, characteristic_factorization,
                                   deviation_cochain, obstruction_cocycle,
                                   scale_class, scaling_action,
                                   splitting_type_differential)
from supercech.parsing import parse_element

from conftest import random_grassmann


def P(chart, text):
    return parse_element(text, chart.vars, chart.odd_rank)


def test_split_model_has_zero_classes(split_p1):
    for level in (2,):
        oc = obstruction_cocycle(split_p1, level)
        assert oc.cochain.is_zero() and oc.cls.trivial


def test_nonsplit_class_extraction(nonsplit_p1):
    oc = obstruction_cocycle(nonsplit_p1, 2)
    assert oc.parity == "even"
    assert not oc.cls.trivial
    rep = oc.cls.representative.sections[("U0", "U1")]
    assert [str(p) for p in rep] == ["-x^-1"]
    assert is_cocycle(oc.cochain)


def test_level_error_below_deviation(nonsplit_p1):
    with pytest.raises(LevelError):
        obstruction_cocycle(nonsplit_p1, 3)


def test_odd_level_extraction(nonsplit_p1_level3):
    oc = obstruction_cocycle(nonsplit_p1_level3, 3)
    assert oc.parity == "odd"
    assert not oc.cls.trivial


@pytest.mark.parametrize("lam", [Q(2), Q(3), Q(-1), Q(1, 2)])
def test_scaling_equivariance_even(nonsplit_p1, lam):
    oc = obstruction_cocycle(nonsplit_p1, 2)
    scaled = obstruction_cocycle(scaling_action(nonsplit_p1, lam), 2)
    expected = scale_class(oc, lam)
    assert scaled.cochain == expected.cochain
    assert scaled.cls.representative == expected.cls.representative


@pytest.mark.parametrize("lam", [Q(2), Q(3), Q(-1), Q(1, 2)])
def test_scaling_equivariance_odd(nonsplit_p1_level3, lam):
    oc = obstruction_cocycle(nonsplit_p1_level3, 3)
    scaled = obstruction_cocycle(scaling_action(nonsplit_p1_level3, lam), 3)
    expected = scale_class(oc, lam)   # lambda^(j-1) for odd j
    assert scaled.cochain == expected.cochain


def test_scaling_identity_and_zero(nonsplit_p1):
    assert scaling_action(nonsplit_p1, Q(1)) == nonsplit_p1
    with pytest.raises(ValueError):
        scaling_action(nonsplit_p1, 0)


def test_attempt_split_reports_fatal_level(nonsplit_p1):
    result = attempt_split(nonsplit_p1)
    assert not result.split
    assert result.fatal_level == 2
    assert not result.fatal_class.cls.trivial


def test_attempt_split_identity_on_split(split_p1):
    result = attempt_split(split_p1)
    assert result.split
    for w in result.witnesses.values():
        assert w.is_identity()


def random_conjugator(rng, chart, max_level):
    """Identity plus random chart-regular corrections of odd degree 2 (and 3
    when the rank allows), realized as an exact coordinate change."""
    ident = identity_transition(chart)
    even = dict(ident.even_maps)
    odd = dict(ident.odd_maps)
    correction = random_grassmann(rng, chart.vars, chart.odd_rank,
                                  exp_range=(0, 2), parity="even").component(2)
    v = chart.fiber_vars[0]
    even[v] = even[v] + correction
    if chart.odd_rank >= 3 and max_level >= 3:
        oc = random_grassmann(rng, chart.vars, chart.odd_rank,
                              exp_range=(0, 2), parity="odd").component(3)
        odd[1] = odd[1] + oc
    return SuperTransition(chart, chart, even, odd)


@pytest.mark.parametrize("seed", range(6))
def test_attempt_split_inverts_random_conjugations(split_p1, seed):
    rng = random.Random(seed)
    witnesses = {name: random_conjugator(rng, split_p1.chart(name), 2)
                 for name in split_p1.cover.order}
    conj = split_p1.conjugate(witnesses)
    assert conj.verify_cocycle().ok
    result = attempt_split(conj)
    assert result.split
    assert result.split_data.splitting_type(verify=False) == INFINITY


@pytest.mark.parametrize("seed", range(4))
def test_attempt_split_on_rank3_conjugates(nonsplit_p1_level3, seed):
    # conjugating the SPLIT rank-3 model by degree-2 and degree-3 corrections
    from supercech.gluing import SuperGluingData
    from supercech.spaces import Chart, Cover
    g = nonsplit_p1_level3
    split_transitions = {}
    for key, t in g.transitions.items():
        even = {v: P(t.source, str(e.body())) for v, e in t.even_maps.items()}
        odd = {k: o.component(1) for k, o in t.odd_maps.items()}
        split_transitions[key] = SuperTransition(t.source, t.target, even, odd)
    split3 = SuperGluingData(g.cover, split_transitions)
    assert split3.splitting_type() == INFINITY
    rng = random.Random(100 + seed)
    witnesses = {name: random_conjugator(rng, split3.chart(name), 3)
                 for name in split3.cover.order}
    conj = split3.conjugate(witnesses)
    result = attempt_split(conj)
    assert result.split


def test_differential_and_factorization(two_parameter_family):
    g = two_parameter_family
    d = splitting_type_differential(g)
    assert d.level == 2
    # evaluation pushes to the fiber
    oc = d({"t1": Q(1), "t2": Q(1)})
    assert not oc.cls.trivial
    oc0 = d({"t1": Q(0), "t2": Q(0)})
    assert oc0.cls.trivial
    cf = characteristic_factorization(g)
    assert cf.ok
    from supercech.laurent import LaurentPoly
    assert cf.section == LaurentPoly(("t1", "t2"), {(1, 0): Q(1), (0, 2): Q(1)})
    assert [str(p) for p in cf.omega.representative.sections[("U0", "U1")]] == ["-x^-1"]


def test_factorization_of_split_family(split_p1):
    from supercech.family import split_family
    fam = split_family(split_p1, ("t",))
    cf = characteristic_factorization(fam.gluing)
    assert cf.ok and cf.section.is_zero() and cf.omega is None


def test_no_base_direction_component(two_parameter_family):
    c = deviation_cochain(two_parameter_family, 2)
    # hom rows targeting base coordinates must vanish; rows are (coords of
    # the leading chart) x (wedge indices), flattened row-major
    n_idx = 1  # C(2,2)
    for key, vec in c.sections.items():
        chart = two_parameter_family.cover.chart(key[0])
        for i, v in enumerate(chart.vars):
            entries = vec[i * n_idx:(i + 1) * n_idx]
            if v in two_parameter_family.base_vars:
                assert all(p.is_zero() for p in entries)


def test_fiber_class_matches_scaled_class(two_parameter_family):
    # outside the zero locus the fiber class is s(t) times the fixed class
    g = two_parameter_family
    cf = characteristic_factorization(g)
    d = splitting_type_differential(g)
    for point in ({"t1": Q(1), "t2": Q(0)}, {"t1": Q(2), "t2": Q(1)},
                  {"t1": Q(0), "t2": Q(2)}):
        s_val = cf.section.eval_at(point).constant_value()
        fiber_class = d(point)
        expected = cf.omega.representative.scale(s_val)
        assert fiber_class.cls.representative == expected
