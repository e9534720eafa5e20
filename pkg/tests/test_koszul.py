from shiftedmanin.bialg import build_double
from shiftedmanin.corpus import data_path, load_algebra
from shiftedmanin.koszul import (TwistedComplex, build_twisted_complex, ce_differential, check_mc,
                                 compare_with_ce, euler_check, koszul_suite)


def _double(name):
    return build_double(load_algebra(data_path(name)).bialgebra())


def test_mc_equation(e1_triple):
    assert check_mc(e1_triple, 3, 5).ok


def test_mc_fails_for_rescaled_alpha(e1_triple):
    assert not check_mc(e1_triple, 3, 5, scale=2).ok


def test_e1_frozen_dims_and_cohomology(e1_triple):
    C = build_twisted_complex(e1_triple, 4, 6, 3)
    # frozen from the reference run; χ per ħ-order is 15-20+6 = 21-30+10 = 28-42+15 = 1
    assert C.dims() == {(-2, 0): 6, (-2, 1): 10, (-2, 2): 15, (-1, 0): 20, (-1, 1): 30, (-1, 2): 42,
                        (0, 0): 15, (0, 1): 21, (0, 2): 28}
    ranks = {k: v for k, v in C.ranks().items() if v}
    assert ranks == {(0, 0): 1, (0, 1): 1, (0, 2): 1}
    assert euler_check(C, C.ranks())[0]


def test_e1_hbar0_layer_is_ce_with_constant_ratio(e1_triple):
    C = build_twisted_complex(e1_triple, 4, 6, 3)
    ok, ratios, wit = compare_with_ce(C)
    assert ok, wit
    assert set(ratios.values()) == {-2}


def test_ce_resolution_squares_to_zero(e1_triple):
    C = TwistedComplex(e1_triple, 4, 6, 2)
    words = [u for u in C.awords if len(u) < 4]
    d = ce_differential((C.U, sorted(C.plus)), 2, words)
    checked = 0
    for src, img in d.items():
        if any(key not in d for key in img):
            continue    # image leaves the word window
        checked += 1
        acc = {}
        for key, c in img.items():
            for k2, c2 in d[key].items():
                acc[k2] = acc.get(k2, 0) + c * c2
        assert not any(acc.values()), src
    assert checked > 10


def test_untwisted_complex_has_more_cohomology(e1_triple):
    U0 = TwistedComplex(e1_triple, 4, 6, 3, twisted=False)
    assert sum(U0.ranks().values()) > 3


def test_abelian_two_term_complex():
    rep = koszul_suite(_double("abelian.json"), 4, 6, 3)
    assert rep.ok
    assert rep.info["cohomology"] == {"0@0": 1, "0@1": 1, "0@2": 1}
    assert set(k.split("@")[0] for k in rep.info["chain_dims"]) == {"-1", "0"}


def test_degree_two_generator_skipped():
    rep = koszul_suite(_double("graded2.json"), 4, 6, 3)
    assert rep.ok
    assert [c.status for c in rep.checks] == ["skipped"]


def test_non_aligned_pair_skipped(e1_other):
    rep = koszul_suite(e1_other, 4, 6, 3)
    assert rep.checks[0].status == "skipped"
