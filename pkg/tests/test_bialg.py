from fractions import Fraction

import pytest

from shiftedmanin.bialg import (Cobracket, ShiftedBialgebra, build_double, check_shifted_bialgebra,
                                cobracket_from_triple, compare_triples, double_dual_iso, dualize,
                                triple_suite, verify_prop_delta)
from shiftedmanin.corpus import data_path, load_algebra
from shiftedmanin.graded import GradedBasis
from shiftedmanin.liealg import GradedLieAlgebra
from shiftedmanin.loopyang import build_loop_double, sl2

CORPUS = ["abelian.json", "e1.json", "yang_n2.json"]


@pytest.mark.parametrize("name", CORPUS)
def test_double_roundtrip(name):
    h = load_algebra(data_path(name)).bialgebra()
    assert check_shifted_bialgebra(h, None).ok
    T = build_double(h)
    rep = triple_suite(T)
    assert rep.ok, rep.pretty()
    assert cobracket_from_triple(T, "plus").delta == h.cobracket.delta


def test_e1_double_structure_constants():
    # hand-derived from invariance: κ(x_c, [x_a, ε^b]) = f_ca^b
    T = build_double(load_algebra(data_path("e1.json")).bialgebra())
    L = T.double
    e, f, Ee, Ef = range(4)
    assert L.f[(e, f)] == {f: 1}
    assert L.f[(e, Ef)] == {Ef: -1}
    assert L.f[(f, Ef)] == {Ee: 1}
    assert (e, Ee) not in L.f and (Ee, Ef) not in L.f


def test_double_dual_is_identity_up_to_sign():
    h = load_algebra(data_path("yang_n2.json")).bialgebra()
    assert double_dual_iso(h, dualize(dualize(h)))


def test_dual_double_is_the_same_triple():
    h = load_algebra(data_path("yang_n2.json")).bialgebra()
    hd = dualize(h)
    assert check_shifted_bialgebra(hd, None).ok
    T = build_double(h)
    # the double of h* is the double of h with the roles of the sides swapped
    assert cobracket_from_triple(build_double(hd), "plus").delta == hd.cobracket.delta
    assert cobracket_from_triple(T, "minus").delta == hd.cobracket.delta


def test_cocycle_violation_detected():
    # δ(h) = e∧f on sl2 breaks the cocycle identity
    g = sl2()
    delta = Cobracket(g.lie.basis, {2: {(0, 1): 1, (1, 0): -1}})
    rep = check_shifted_bialgebra(ShiftedBialgebra(g.lie, delta), None)
    assert not rep.ok


def test_cobracket_must_be_graded_symmetric():
    B = GradedBasis([("x", 0), ("y", 1)])
    L = GradedLieAlgebra.from_brackets(B, {})
    delta = Cobracket(B, {0: {(0, 1): Fraction(1)}})
    rep = check_shifted_bialgebra(ShiftedBialgebra(L, delta), None)
    assert rep.first_failure().name == "cobracket_symmetric"


def test_loop_double_triangle_identities():
    T = build_loop_double(sl2(), 1)
    rep = verify_prop_delta(T)
    assert rep.ok, rep.pretty()


def test_alternate_pair_gives_different_matched_structure(e1_triple, e1_other):
    assert triple_suite(e1_other).ok
    assert compare_triples(e1_triple, e1_other) is not None
    assert compare_triples(e1_triple, e1_triple) is None
