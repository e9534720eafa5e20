from fractions import Fraction

import pytest

from shiftedmanin.corpus import data_path, load_module
from shiftedmanin.fsf import (SL2_FUNDAMENTAL, FSFModule, ModuleError, WindowExhausted, check_module,
                              check_tensor, check_weak_associativity, check_weak_commutativity,
                              expand_power, sigma_r_residual, three_fold, two_fold, yangian_suite)
from shiftedmanin.loopyang import (DifferenceRMatrix, LeveledDifferential, abelian_base, build_loop_double,
                                   gl1, meromorphic_r, sl2)

G = sl2()


def _D(level=0, N=3):
    return LeveledDifferential(build_loop_double(G, N), level, H=3, word_len=4)


def _R(K):
    return meromorphic_r(DifferenceRMatrix.yang(G), K)


@pytest.fixture(scope="module")
def ev2():
    return load_module(data_path("ev2.json"), G)


@pytest.fixture(scope="module")
def jet2():
    return load_module(data_path("jet2.json"), G)


@pytest.fixture(scope="module")
def jet2k():
    return load_module(data_path("jet2_level1.json"), G)


def test_shipped_modules_match_constructors(ev2, jet2, jet2k):
    assert ev2.to_json() == FSFModule.evaluation(G, SL2_FUNDAMENTAL, "ev2").to_json()
    assert jet2.to_json() == FSFModule.jet(G, SL2_FUNDAMENTAL, 2, 0, "jet2").to_json()
    assert jet2k.to_json() == FSFModule.jet(G, SL2_FUNDAMENTAL, 2, 1, "jet2_level1").to_json()


@pytest.mark.parametrize("level", [0, 1])
def test_evaluation_module(ev2, level):
    assert check_module(ev2, _D(level)).ok


def test_jet_modules(jet2, jet2k):
    assert check_module(jet2, _D(0)).ok
    assert check_module(jet2k, _D(1)).ok


def test_unleveled_jet_fails_under_level(jet2):
    rep = check_module(jet2, _D(1))
    assert rep.first_failure().name == "dg_compatible"


def test_unstable_quotient_fails():
    # keeping s^{K-1}S breaks d_M² = 0 or compatibility once the level is on
    M = FSFModule.jet(G, SL2_FUNDAMENTAL, 2, 1, stable=False)
    assert not check_module(M, _D(1)).ok


def test_module_smoothness_beyond_window(jet2):
    rep = check_module(jet2, _D(0, N=1))
    assert rep.first_failure().name == "smoothness_vs_window"


def test_evaluation_pair_has_no_poles(ev2):
    # evaluation modules kill every positive mode, so 𝐫 contributes nothing with a z pole
    MT = two_fold(ev2, ev2, _R(2))
    assert MT.pole_strata() == []
    assert check_tensor(MT, _D(1)).ok


def test_jet_pair(jet2):
    MT = two_fold(jet2, jet2, _R(4))
    assert MT.pole_strata()
    rep = check_tensor(MT, _D(0))
    assert rep.ok, rep.pretty()


def test_weak_commutativity(ev2, jet2):
    R = _R(4)
    assert check_weak_commutativity(ev2, ev2, R).ok
    assert check_weak_commutativity(jet2, ev2, R).ok
    assert sigma_r_residual(R) is None


def test_doubled_stratum_is_caught(jet2):
    R = _R(4)
    e = max(e for e in R.terms if e < -1)
    R.terms[e] = {k: 2 * c for k, c in R.terms[e].items()}
    rep = check_tensor(two_fold(jet2, jet2, R), _D(0))
    assert not rep.ok


def test_pole_bound_too_small_for_associativity(jet2):
    with pytest.raises(WindowExhausted):
        check_weak_associativity(jet2, jet2, jet2, _R(2), cap=2)


def test_weak_associativity_jets(jet2):
    rep = check_weak_associativity(jet2, jet2, jet2, _R(5), cap=2)
    assert rep.ok, rep.pretty()
    assert rep.info["pole_bound_needed"] == 5


def test_three_fold_tensor(ev2, jet2):
    R = _R(5)
    src = three_fold(ev2, jet2, ev2, R, cap=2)
    rep = check_tensor(src, _D(0), bounds=(2 - (ev2.K + jet2.K - 1), None))
    assert rep.ok, rep.pretty()


def test_expand_power():
    # (z + w)^-1 with |w| > |z|: w^-1 - z w^-2 + z² w^-3
    got = expand_power((1, 1), -1, 1, (2, None))
    assert got == {(0, -1): 1, (1, -2): -1, (2, -3): 1}
    assert expand_power((1, 1), 2, 0, (None, None)) == {(2, 0): 1, (1, 1): 2, (0, 2): 1}
    assert expand_power((0, 3), -2, 1, (None, None)) == {(0, -2): Fraction(1, 9)}
    with pytest.raises(ModuleError):
        expand_power((1, 1), -1, 0, (None, None))


@pytest.mark.parametrize("g0", [gl1(), abelian_base(2)], ids=lambda g: g.name)
def test_commutative_base_suite(g0):
    assert yangian_suite(g0, 2).ok


def test_single_module_suite(ev2):
    rep = yangian_suite(G, 3, 1, [ev2])
    assert rep.ok and rep.info["pole_bound"] == 2


def test_parallel_matches_serial(ev2, jet2k):
    mods = [ev2, jet2k, ev2]
    a = yangian_suite(G, 3, 1, mods, jobs=1)
    b = yangian_suite(G, 3, 1, mods, jobs=2)
    assert a.ok
    assert a.to_json() == b.to_json()
