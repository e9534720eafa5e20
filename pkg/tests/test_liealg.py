from fractions import Fraction

import pytest

from shiftedmanin.graded import GradedBasis
from shiftedmanin.liealg import (GradedLieAlgebra, ShiftedMetric, Subspace, canonical_lagrangians,
                                 check_jacobi, check_lagrangian_pair, check_metric, lie_suite,
                                 orthogonal_complement)
from shiftedmanin.loopyang import sl2


def odd_heisenberg():
    # y odd with [y, y] = 2z, z central of degree 2
    B = GradedBasis([("y", 1), ("z", 2)])
    return GradedLieAlgebra.from_brackets(B, {(0, 0): {1: 2}})


def test_sl2_is_lie():
    assert lie_suite(sl2().lie).ok


def test_odd_self_bracket_allowed():
    rep = lie_suite(odd_heisenberg())
    assert rep.ok, rep.pretty()


def test_odd_bracket_completion_is_symmetric():
    L = odd_heisenberg()
    # [y, y] survives the graded antisymmetry completion unchanged
    assert L.f[(0, 0)] == {1: 2}


def test_jacobi_failure_has_witness():
    # [a,b]=b, [a,c]=c, [b,c]=a is not a Lie algebra
    B = GradedBasis([("a", 0), ("b", 0), ("c", 0)])
    L = GradedLieAlgebra.from_brackets(B, {(0, 1): {1: 1}, (0, 2): {2: 1}, (1, 2): {0: 1}})
    res = check_jacobi(L)
    assert not res.ok
    assert res.witness["triple"] == ["a", "b", "c"]


def test_antisymmetry_violation_detected():
    B = GradedBasis([("a", 0), ("b", 0)])
    L = GradedLieAlgebra.from_brackets(B, {(0, 1): {1: 1}, (1, 0): {1: 1}})
    rep = lie_suite(L)
    assert not rep.ok
    assert rep.first_failure().name == "antisymmetry"


def test_boundary_triples_skipped():
    B = GradedBasis([("a", 0), ("b", 0), ("c", 0)])
    L = GradedLieAlgebra.from_brackets(B, {(0, 1): {1: 1}, (0, 2): {2: 1}, (1, 2): {0: 1}},
                                       overflow={(1, 2)})
    res = check_jacobi(L)
    # (a,b,c), (b,b,c) and (b,c,c) all need [b,c]
    assert res.ok and res.stats["boundary"] == 3


@pytest.fixture
def e1_parts(e1_file):
    return e1_file.algebra(), e1_file.metric()


def test_e1_metric(e1_parts):
    L, kappa = e1_parts
    rep = check_metric(L, kappa)
    assert rep.ok, rep.pretty()


def test_metric_wrong_degree():
    B = GradedBasis([("x", 0), ("y", 0)])
    L = GradedLieAlgebra.from_brackets(B, {})
    rep = check_metric(L, ShiftedMetric.from_pairs(B, {(0, 1): 1}))
    assert [c.name for c in rep.checks if not c.ok] == ["degree"]


def test_degenerate_metric_radical(e1_parts):
    L, _ = e1_parts
    kappa = ShiftedMetric.from_pairs(L.basis, {(0, 2): 1})
    res = [c for c in check_metric(L, kappa).checks if c.name == "nondegenerate"][0]
    assert not res.ok
    assert set(res.witness["radical"]) <= {"f", "ε^f"}


def test_canonical_lagrangians_and_complement(e1_parts):
    L, kappa = e1_parts
    hp, hm = canonical_lagrangians(L, kappa)
    assert check_lagrangian_pair(L, kappa, hp, hm).ok
    perp = orthogonal_complement(hp, kappa)
    assert perp.dim == 2 and all(perp.contains(v) for v in hp.span)


def test_non_isotropic_pair_rejected(e1_parts):
    L, kappa = e1_parts
    hp = Subspace(L.basis, [{0: Fraction(1)}, {2: Fraction(1)}])
    hm = Subspace(L.basis, [{1: Fraction(1)}, {3: Fraction(1)}])
    rep = check_lagrangian_pair(L, kappa, hp, hm)
    assert not rep.ok
