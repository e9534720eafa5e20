from fractions import Fraction

import pytest

from shiftedmanin.bialg import build_double
from shiftedmanin.corpus import data_path, load_algebra
from shiftedmanin.graded import SparseTensor
from shiftedmanin.loopyang import build_loop_double, sl2
from shiftedmanin.rmat import (RMatrix, RMatrixError, canonical_r, check_coboundary, check_cybe,
                               check_dr_identities, check_omega, check_r_contractions, cybe_residual,
                               omega_of, rmatrix_suite)


def doubles():
    out = [("e1_double", load_algebra(data_path("e1_double.json")).triple())]
    for name in ("abelian.json", "yang_n2.json"):
        out.append((name, build_double(load_algebra(data_path(name)).bialgebra())))
    out.append(("loop_sl2_N2", build_loop_double(sl2(), 2)))
    return out


DOUBLES = doubles()


def test_e1_canonical_r_entries(e1_triple):
    r = canonical_r(e1_triple)
    assert r.entries == {(0, 2): 1, (1, 3): 1}


@pytest.mark.parametrize("name,T", DOUBLES, ids=[d[0] for d in DOUBLES])
def test_rmatrix_suite(name, T):
    rep = rmatrix_suite(T)
    assert rep.ok, rep.pretty()


def test_r_must_have_degree_one(e1_triple):
    B = e1_triple.double.basis
    with pytest.raises(RMatrixError):
        RMatrix(SparseTensor(B, 2, {(0, 1): 1}))


def test_doubled_r_breaks_linear_identities(e1_triple):
    r = canonical_r(e1_triple)
    bad = RMatrix(r.tensor.scale(2))
    # CYBE is homogeneous and cannot see a rescaling
    assert check_cybe(e1_triple, bad).ok
    assert not check_r_contractions(e1_triple, bad).ok
    assert not check_coboundary(e1_triple, bad).ok
    assert not check_dr_identities(e1_triple, bad).ok


def test_flipped_entry_breaks_cybe(e1_triple):
    r = canonical_r(e1_triple)
    ent = dict(r.entries)
    ent[(1, 3)] = -ent[(1, 3)]
    bad = RMatrix(SparseTensor(r.basis, 2, ent))
    assert cybe_residual(e1_triple, bad)
    assert not check_cybe(e1_triple, bad).ok
    assert not check_coboundary(e1_triple, bad).ok


def test_omega_antisymmetric_and_pair_independent(e1_triple, e1_other):
    r = canonical_r(e1_triple)
    om = omega_of(r)
    assert om.permute((1, 0)) == -om
    assert check_omega(e1_triple, r, [e1_other]).ok
    # the second pair has a different r but the same Ω
    assert canonical_r(e1_other).entries != r.entries


def test_omega_of_loop_double_is_invariant():
    T = build_loop_double(sl2(), 1)
    rep = check_omega(T, canonical_r(T))
    assert rep.ok


def test_e1_omega_entries(e1_triple):
    om = omega_of(canonical_r(e1_triple))
    # Ω = e⊗ε^e + f⊗ε^f - ε^e⊗e - ε^f⊗f, no Koszul sign since e, f are even
    assert om.entries == {(0, 2): 1, (1, 3): 1, (2, 0): -1, (3, 1): -1}
    assert om.coeff(2, 0) == Fraction(-1)
