from fractions import Fraction

import pytest

from shiftedmanin.bialg import triple_suite
from shiftedmanin.corpus import data_path, load_rtail
from shiftedmanin.exactnum import expand_inverse_shift
from shiftedmanin.loopyang import (BaseAlgebra, DifferenceRMatrix, LevelError, LeveledDifferential,
                                   LoopError, MeromorphicR, abelian_base, build_loop_double, check_base,
                                   check_gcybe, check_lowest_order, check_r_difference, check_translation,
                                   check_truncation_coherence, gbinom, gl1, level_deform, lift_to_shifted_r,
                                   meromorphic_from_canonical, sl2)
from shiftedmanin.rmat import canonical_r

BASES = [sl2(), abelian_base(2), gl1()]


def test_base_invariance_failure_is_reported():
    brackets = {(2, 0): {0: 2}, (2, 1): {1: -2}, (0, 1): {2: 1}}
    with pytest.raises(LoopError):
        BaseAlgebra("bad", ["e", "f", "h"], brackets, {(0, 1): 1, (2, 2): 1})
    g = BaseAlgebra("bad", ["e", "f", "h"], brackets, {(0, 1): 1, (2, 2): 1}, strict=False)
    rep = check_base(g)
    assert rep.first_failure().name == "beta_invariant"
    assert check_base(sl2()).ok


def test_degenerate_beta_rejected():
    with pytest.raises(LoopError):
        BaseAlgebra("deg", ["a", "b"], {}, {(0, 0): 1})


def test_sl2_casimir():
    # Ω = e⊗f + f⊗e + ½ h⊗h for β(e,f) = 1, β(h,h) = 2
    assert sl2().casimir() == {(0, 1): 1, (1, 0): 1, (2, 2): Fraction(1, 2)}


@pytest.mark.parametrize("N", [1, 2])
def test_loop_double_is_a_triple(N):
    rep = triple_suite(build_loop_double(sl2(), N))
    assert rep.ok, rep.pretty()


@pytest.mark.parametrize("g0", BASES, ids=lambda g: g.name)
def test_yang_gcybe_and_cybe(g0):
    rep = check_gcybe(DifferenceRMatrix.yang(g0), 3)
    assert rep.ok and rep.info["skew"]
    assert [c.status for c in rep.checks] == ["pass", "pass"]


def test_tails_from_corpus():
    g = sl2()
    t = load_rtail(data_path("tail_t_hh.json"), g)
    assert t.skew_flag and t.tail_degree == 1
    assert check_r_difference(t).ok
    # a linear h⊗h tail is skew but breaks the generalized CYBE
    rep = check_gcybe(t)
    assert [c.status for c in rep.checks] == ["fail", "fail"]
    assert rep.first_failure().witness["entry"] == ["e", "f", "h"]
    t1 = load_rtail(data_path("tail_t1_hh.json"), g)
    assert not t1.skew_flag
    assert not check_r_difference(t1).ok
    assert [c.status for c in check_gcybe(t1).checks][1] == "skipped"


def test_constant_jordanian_tail_passes():
    t = load_rtail(data_path("tail_jordanian.json"), sl2())
    assert t.skew_flag and check_gcybe(t).ok


def test_constant_abelian_tail_is_invisible():
    # e⊗e commutes with itself and Ω is invariant
    assert check_gcybe(DifferenceRMatrix(sl2(), {(0, 0, 0, 0): 1})).ok


def test_corrupted_tail_breaks_gcybe():
    g = sl2()
    bad = DifferenceRMatrix(g, {(0, 1, 0, 0): 1})
    rep = check_gcybe(bad)
    assert not rep.ok
    assert rep.first_failure().witness["nonzero_entries"] > 0


@pytest.mark.parametrize("N", [1, 2, 3])
def test_lift_equals_canonical(N):
    T = build_loop_double(sl2(), N)
    lifted, dropped = lift_to_shifted_r(DifferenceRMatrix.yang(sl2()), N)
    assert lifted == canonical_r(T).tensor
    assert dropped == []


def test_translation_yang_and_tail():
    T = build_loop_double(sl2(), 3)
    assert check_translation(T).ok
    t = DifferenceRMatrix.from_difference(sl2(), {1: {(2, 2): 1}})
    rep = check_translation(T, t)
    assert rep.ok, rep.pretty()
    assert rep.checks[0].stats["boundary_skipped"] > 0


def test_translation_rejects_non_difference_tail():
    T = build_loop_double(sl2(), 3)
    t1 = DifferenceRMatrix(sl2(), {(2, 2, 1, 0): 1})
    assert not check_translation(T, t1).ok


def test_gbinom():
    assert [gbinom(-1, m) for m in range(4)] == [1, -1, 1, -1]
    assert gbinom(-2, 2) == 3
    assert gbinom(3, 4) == 0


def test_meromorphic_r_matches_expansion_template():
    """Independent oracle: Ω/(t1 + z - t2) expanded with expand_inverse_shift, gl1 so Ω = u⊗u."""
    R = MeromorphicR(DifferenceRMatrix.yang(gl1()), 3)
    want = {}
    for poly, e in expand_inverse_shift(2):
        for (i, j), c in poly.items():
            want.setdefault(e, {})[((0, 0, i), (1, 0, j))] = c
            want[e][((1, 0, i), (0, 0, j))] = -c
    assert R.terms == want


@pytest.mark.parametrize("N", [2, 3])
def test_meromorphic_from_canonical(N):
    g = sl2()
    assert MeromorphicR(DifferenceRMatrix.yang(g), N).terms == \
        meromorphic_from_canonical(build_loop_double(g, N), N)


def test_pole_bound_check():
    R = MeromorphicR(DifferenceRMatrix.yang(sl2()), 2)
    R.check_bound(1, 2)
    with pytest.raises(LoopError):
        R.check_bound(2, 2)


@pytest.mark.parametrize("k", ["1", "-2/3"])
def test_level_square_zero(k):
    rep, D = level_deform(build_loop_double(sl2(), 3), k)
    assert rep.ok and D is not None


def test_level_generator_sign():
    T = build_loop_double(sl2(), 2)
    D = LeveledDifferential(T, 3)
    W, U = D.W, D.U
    # d_k x_{e,1} = -ħ·1·k εx_{e,0}
    out = D.dk(U.gen(W.idx(0, 0, 1)))
    assert out.terms == {(1, (W.idx(1, 0, 0),)): -3}
    assert D.dk(U.gen(W.idx(0, 0, 0))).is_zero()


def test_level_needs_skew_r():
    T = build_loop_double(sl2(), 3)
    t1 = DifferenceRMatrix(sl2(), {(2, 2, 1, 0): 1})
    with pytest.raises(LevelError):
        LeveledDifferential(T, 1, t1)
    rep, D = level_deform(T, 1, t1)
    assert D is None and rep.first_failure().name == "skew_hypothesis"
    # at level 0 the hypothesis is not needed
    assert level_deform(T, 0, t1)[0].ok


@pytest.mark.parametrize("g0", BASES, ids=lambda g: g.name)
def test_lowest_order(g0):
    assert check_lowest_order(g0).ok


def test_truncation_coherence():
    rep = check_truncation_coherence(sl2(), 2)
    assert rep.ok, rep.pretty()
