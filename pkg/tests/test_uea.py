import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from shiftedmanin.bialg import build_double
from shiftedmanin.corpus import data_path, load_algebra
from shiftedmanin.exactnum import HbarPoly
from shiftedmanin.graded import GradedBasis, SparseTensor
from shiftedmanin.liealg import GradedLieAlgebra
from shiftedmanin.loopyang import build_loop_double, sl2
from shiftedmanin.rmat import RMatrix, canonical_r
from shiftedmanin.uea import (UEA, Quantization, WordOverflow, check_curvature,
                              check_subalgebra_closure, commutator, curved_case_analysis,
                              normal_order_random, quantize_suite)


def _odd_algebra():
    # gl(1|1)-like: x even, p, q odd, [p, q] = z, [x, p] = p, [x, q] = -q
    B = GradedBasis([("x", 0), ("z", 0), ("p", 1), ("q", 1)])
    return GradedLieAlgebra.from_brackets(B, {(2, 3): {1: 1}, (0, 2): {2: 1}, (0, 3): {3: -1}})


ALGEBRAS = {
    "e1_double": load_algebra(data_path("e1_double.json")).triple().double,
    "loop_sl2_N1": build_loop_double(sl2(), 1).double,
    "odd": _odd_algebra(),
}


@pytest.mark.parametrize("name", sorted(ALGEBRAS))
@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_normal_form_independent_of_rewrite_order(name, data):
    L = ALGEBRAS[name]
    U = UEA(L, 2, 5)
    word = data.draw(st.lists(st.integers(0, L.dim - 1), max_size=4))
    seed = data.draw(st.integers(0, 10 ** 6))
    assert normal_order_random(U, word, random.Random(seed)) == U.normal_order(word)


@pytest.mark.parametrize("name", sorted(ALGEBRAS))
@settings(max_examples=30, deadline=None)
@given(data=st.data())
def test_product_associative_and_coproduct_multiplicative(name, data):
    L = ALGEBRAS[name]
    U = UEA(L, 2, 6)
    words = st.lists(st.integers(0, L.dim - 1), max_size=2)
    one = HbarPoly.const(1, 2)
    a, b, c = (U.normal_order(data.draw(words), one) for _ in range(3))
    assert (a * b) * c == a * (b * c)
    assert U.coproduct(a * b) == U.coproduct(a) * U.coproduct(b)


def test_overflow_raises():
    U = UEA(ALGEBRAS["e1_double"], 2, 2)
    with pytest.raises(WordOverflow):
        U.normal_order((3, 2, 1))


def test_odd_square_is_half_bracket():
    L = _odd_algebra()
    U = UEA(L, 1, 3)
    assert U.normal_order((2, 2)) == {}
    # q p = -p q + z
    assert U.normal_order((3, 2)) == {(2, 3): -1, (1,): 1}


def test_e1_rho_and_w_oracle(e1_triple):
    """Hand expansion: ρ = -e ε^e - f ε^f + ½ε^e; ρ² = -f ε^e ε^f, which is already symmetric."""
    Q = Quantization(e1_triple, 4, 6)
    e, f, Ee, Ef = range(4)
    assert Q.rho.terms == {(0, (e, Ee)): -1, (0, (f, Ef)): -1, (0, (Ee,)): Fraction(1, 2)}
    assert (Q.rho * Q.rho).terms == {(0, (f, Ee, Ef)): -1}
    c, W = Q.curvature()
    assert c.is_zero()
    assert W.terms == {(0, (f, Ee, Ef)): 1}


def test_w_commutes_with_generators(e1_triple):
    Q = Quantization(e1_triple, 4, 6)
    _, W = Q.curvature()
    for v in range(4):
        assert commutator(W, Q.U.gen(v)).is_zero()


def test_abelian_quantization_has_zero_w():
    T = build_double(load_algebra(data_path("abelian.json")).bialgebra())
    rep = quantize_suite(T, 4, 6)
    assert rep.ok
    assert rep.info["curvature/W"] == []


def test_quantize_suite_e1(e1_triple, e1_other):
    rep = quantize_suite(e1_triple, 4, 6, e1_other)
    assert rep.ok, rep.pretty()


def test_closure_on_loop_double():
    Q = Quantization(build_loop_double(sl2(), 1), 3, 4)
    assert check_subalgebra_closure(Q).ok


def test_wrong_r_breaks_d_matches_delta(e1_triple):
    r = canonical_r(e1_triple)
    Q = Quantization(e1_triple, 3, 5, r=RMatrix(r.tensor.scale(3)))
    rep = check_curvature(Q)
    assert not rep.ok


def _forced_curvature(T, vec):
    Q = Quantization(T, 3, 5)
    Q.curvature()
    Q._c = SparseTensor(T.double.basis, 1, {(i,): c for i, c in vec.items()})
    return Q


def test_curved_branch_central_c(e1_triple):
    # ε^e is central; the tilde pair built from it is Lagrangian
    Q = _forced_curvature(e1_triple, {2: 1})
    rep = curved_case_analysis(Q)
    assert rep.ok, rep.pretty()
    assert rep.info["c_minus"] == {"ε^e": "1"} and rep.info["c_plus"] == {}


def test_curved_branch_noncentral_c_fails(e1_triple):
    Q = _forced_curvature(e1_triple, {3: 1})
    rep = curved_case_analysis(Q)
    assert not rep.ok
    assert rep.first_failure().name == "c_minus_preserves_h_plus"
