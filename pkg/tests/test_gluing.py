import random
from fractions import Fraction as Q

import pytest

from supercech.errors import CocycleError
from supercech.gluing import (INFINITY, SuperGluingData, SuperTransition,
                              compose_transitions, identity_transition,
                              invert_transition, restrict_odd)
from supercech.parsing import parse_element
from supercech.spaces import Chart, Cover

from conftest import load_model


def P(chart, text):
    return parse_element(text, chart.vars, chart.odd_rank)


def test_compose_identity(nonsplit_p1):
    t = nonsplit_p1.transitions[("U0", "U1")]
    ident = identity_transition(nonsplit_p1.chart("U0"))
    assert compose_transitions(ident, t) == t


def test_compose_p1_flip_is_identity(split_p1):
    t01 = split_p1.transitions[("U0", "U1")]
    t10 = split_p1.transitions[("U1", "U0")]
    assert compose_transitions(t01, t10).is_identity()
    assert compose_transitions(t10, t01).is_identity()


def test_invert_solves_correction_term(nonsplit_p1):
    t01 = nonsplit_p1.transitions[("U0", "U1")]
    assert invert_transition(t01) == nonsplit_p1.transitions[("U1", "U0")]


def test_invert_level3(nonsplit_p1_level3):
    t01 = nonsplit_p1_level3.transitions[("U0", "U1")]
    assert invert_transition(t01) == nonsplit_p1_level3.transitions[("U1", "U0")]


def test_verify_passes_on_corpus(split_p1, nonsplit_p1, split_three_charts,
                                 two_parameter_family):
    for g in (split_p1, nonsplit_p1, split_three_charts, two_parameter_family):
        report = g.verify_cocycle()
        assert report.ok, str(report)


def test_three_chart_cover_checks_triples(split_three_charts):
    report = split_three_charts.verify_cocycle()
    assert report.checks == 7  # 6 inverse directions + 1 triple


def test_corrupted_sign_fails_with_witness():
    bad = load_model("corrupt_sign.model").gluing
    report = bad.verify_cocycle()
    assert not report.ok
    assert report.failures[0].kind == "inverse"
    assert report.failures[0].location == ("U0", "U1")
    assert "theta_1" in report.failures[0].detail


def test_splitting_type(split_p1, nonsplit_p1, nonsplit_p1_level3):
    assert split_p1.splitting_type() == INFINITY
    assert nonsplit_p1.splitting_type() == 2
    assert nonsplit_p1_level3.splitting_type() == 3


def test_splitting_type_requires_valid_cocycle():
    bad = load_model("corrupt_sign.model").gluing
    with pytest.raises(CocycleError):
        bad.splitting_type()


def test_reduce_reads_off_data(split_p1, nonsplit_p1):
    space, spec = split_p1.reduce()
    m = spec.matrices[("U0", "U1")]
    assert str(m[0][0]) == "x^-2" and str(m[1][1]) == "x^-2"
    assert str(space.coordinate_maps[("U0", "U1")]["y"]) == "x^-1"
    # deviation terms do not change the reduction
    space2, spec2 = nonsplit_p1.reduce()
    assert spec2.matrices == spec.matrices
    assert space2.coordinate_maps == space.coordinate_maps


def test_restrict_fiber_of_two_parameter_family(two_parameter_family):
    g = two_parameter_family
    fib = g.restrict_fiber({"t1": Q(1), "t2": Q(2)})
    assert fib.verify_cocycle().ok
    dev = fib.transitions[("U0", "U1")].even_maps["y"].component(2)
    coeff = dev.coefficient((1, 2))
    # deviation scaled by t1 + t2^2 = 5
    assert str(coeff) == "5*x^-3"
    zero_fiber = g.restrict_fiber({"t1": Q(0), "t2": Q(0)})
    assert zero_fiber.splitting_type() == INFINITY


def test_reduce_commutes_with_restriction(two_parameter_family):
    g = two_parameter_family
    point = {"t1": Q(2), "t2": Q(-1)}
    space_fiber, spec_fiber = g.restrict_fiber(point).reduce()
    space_total, spec_total = g.reduce()
    # restricting the reduced family: drop base coordinates from the maps
    for key, cmap in space_fiber.coordinate_maps.items():
        for v, img in cmap.items():
            full = space_total.coordinate_maps[key][v]
            assert img == full.eval_at(point).with_context(img.vars)
    for key in spec_fiber.matrices:
        got = spec_fiber.matrices[key]
        full = spec_total.matrices[key]
        for r1, r2 in zip(got, full):
            for e1, e2 in zip(r1, r2):
                assert e1 == e2.eval_at(point).with_context(e1.vars)


def test_embedding_triples(two_parameter_family):
    g = two_parameter_family
    t = g.embedding_splitting_triple({"t1": Q(1), "t2": Q(1)})
    assert t.as_tuple() == (2, 2, 2)
    assert t.lemma_holds
    t0 = g.embedding_splitting_triple({"t1": Q(0), "t2": Q(0)})
    assert t0.as_tuple() == (INFINITY, INFINITY, 2)
    assert t0.lemma_holds  # split-fiber convention


def test_conjugation_round_trip(split_p1):
    ch0 = split_p1.chart("U0")
    w0 = SuperTransition(ch0, ch0,
                         {"x": P(ch0, "x - 2*x^3*theta_1*theta_2")},
                         {1: P(ch0, "theta_1"), 2: P(ch0, "theta_2")})
    witnesses = {"U0": w0, "U1": identity_transition(split_p1.chart("U1"))}
    conj = split_p1.conjugate(witnesses)
    assert conj.verify_cocycle().ok
    assert conj.splitting_type() == 2
    back = conj.conjugate({n: invert_transition(w) for n, w in witnesses.items()})
    assert back == split_p1


def test_restrict_odd(gtm_odd_base_doc):
    total = gtm_odd_base_doc.gluing
    fiber = restrict_odd(total, 2)
    assert fiber.verify_cocycle().ok
    assert fiber.splitting_type() == 2
    assert fiber.chart("U0").odd_rank == 2


def test_q0_gluing_is_allowed(gt_model_doc):
    g = gt_model_doc.gluing
    assert g.chart("U0").odd_rank == 0
    assert g.verify_cocycle().ok
    assert g.splitting_type() == INFINITY
