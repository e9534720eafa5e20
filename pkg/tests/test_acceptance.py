"""Acceptance criteria. Every criterion is exact rational arithmetic, so the tolerance
printed on each line is a zero residual; runtime limits are printed next to it."""

import json
import time

import pytest
from click.testing import CliRunner

from shiftedmanin.bialg import build_double, cobracket_from_triple, triple_suite
from shiftedmanin.cli import main
from shiftedmanin.corpus import data_path, load_algebra, load_module
from shiftedmanin.fsf import FSFModule, SL2_FUNDAMENTAL, check_weak_associativity, yangian_suite
from shiftedmanin.koszul import build_twisted_complex, compare_with_ce, koszul_suite
from shiftedmanin.loopyang import (DifferenceRMatrix, build_loop_double, check_truncation_coherence,
                                   level_deform, meromorphic_r, sl2)
from shiftedmanin.rmat import canonical_r, check_coboundary, check_cybe, check_dr_identities
from shiftedmanin.uea import Quantization, check_curvature, quantize_suite

TOL = "exact, residual 0"
LINES = []
G = sl2()


def record(n, title, ok, elapsed, limit=None, note=""):
    line = f"criterion {n:>2} [{'PASS' if ok else 'FAIL'}] {title}; tolerance: {TOL}; runtime {elapsed:.2f}s"
    if limit is not None:
        line += f" (limit {limit}s)"
    if note:
        line += f"; {note}"
    LINES.append(line)
    print(line)
    return ok


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.s = time.perf_counter() - self.t0


def _bialgebra(name):
    return load_algebra(data_path(name)).bialgebra()


def corpus_doubles():
    af = load_algebra(data_path("e1_double_pairs.json"))
    out = {"e1_double": load_algebra(data_path("e1_double.json")).triple(),
           "e1_double_pairs": af.triple(),
           "e1_double_pairs/alternate": af.alternate_triples()[0]}
    for name in ("abelian", "yang_n2"):
        out[f"{name}_double"] = build_double(_bialgebra(f"{name}.json"))
    out["loop_sl2_N2"] = build_loop_double(G, 2)
    return out


DOUBLES = corpus_doubles()


def statuses(rep):
    return {c.name: c.status for c in rep.checks}


def test_c01_double_correspondence():
    ok, slowest = True, 0.0
    for name in ("abelian.json", "e1.json", "yang_n2.json"):
        with Timer() as t:
            h = _bialgebra(name)
            T = build_double(h)
            rep = triple_suite(T)
            names = statuses(rep)
            good = (rep.ok and names["metric/invariance"] == "pass" and names["lie/jacobi"] == "pass"
                    and any(k.startswith("lagrangian_pair/") for k in names)
                    and cobracket_from_triple(T, "plus").delta == h.cobracket.delta)
        slowest = max(slowest, t.s)
        ok &= good and t.s < 1
    assert record(1, "double correspondence for abelian, E1, Yang N=2", ok, slowest, 1, "slowest input shown")


def test_c02_cybe_and_dr_identities():
    ok = True
    with Timer() as t:
        for T in DOUBLES.values():
            r = canonical_r(T)
            ok &= check_cybe(T, r).ok and check_dr_identities(T, r).ok
    ok &= t.s < 1
    assert record(2, f"CYBE and both δ(r) identities on {len(DOUBLES)} doubles", ok, t.s, 1)


def test_c03_coboundary():
    with Timer() as t:
        ok = all(check_coboundary(T, canonical_r(T)).ok for T in DOUBLES.values())
    assert record(3, f"[-r, Δ(v)] = δ(v) on every basis vector of {len(DOUBLES)} doubles", ok, t.s)


def test_c04_curvature():
    wanted = ["sym2_component", "W_central", "d_squared", "c_zero_without_g2"]
    ok = True
    with Timer() as t:
        for T in DOUBLES.values():
            st = statuses(check_curvature(Quantization(T, 4, 6)))
            ok &= all(st.get(w) == "pass" for w in wanted)
    ok &= t.s < 5
    assert record(4, "Sym² part of ½[ρ,ρ] zero, W central, d² = ħ²[c,·], c = 0 at H=4 L=6", ok, t.s, 5)


def test_c05_w_coproduct_and_pair_independence():
    T, other = DOUBLES["e1_double_pairs"], DOUBLES["e1_double_pairs/alternate"]
    with Timer() as t:
        st = statuses(quantize_suite(T, 4, 6, other))
    ok = (st["coalgebra_object/coproduct_W"] == "pass"
          and st["coalgebra_object/W_pair_independent"] == "pass")
    assert record(5, "ΔW = W⊗1 + 1⊗W + Ω² and W equal for two transverse pairs (E1)", ok, t.s)


def test_c06_coalgebra_object():
    ok, n = True, 0
    with Timer() as t:
        for T in DOUBLES.values():
            st = statuses(quantize_suite(T, 3, 5))
            keys = [k for k in st if k.startswith("coalgebra_object/D_")]
            n += len(keys)
            ok &= len(keys) == 8 and all(st[k] == "pass" for k in keys)
    assert record(6, f"(Δ, ħΩ) and (Δ, -2ħr) morphism, coassociativity, counit at H=3 L=5 ({n} checks)",
                  ok, t.s)


def test_c07_koszul_duality():
    T = DOUBLES["e1_double"]
    with Timer() as t:
        rep = koszul_suite(T, 4, 6, 3)
        C = build_twisted_complex(T, 4, 6, 3)
        same, ratios, wit = compare_with_ce(C)
    ok = (rep.ok and rep.info["cohomology"] == {"0@0": 1, "0@1": 1, "0@2": 1}
          and same and set(ratios.values()) == {-2} and t.s < 30)
    assert record(7, "E1 twisted complex S=4 L=6 H=3: rank 1 in degree 0 per ħ-order; ħ⁰ layer = CE",
                  ok, t.s, 30, "CE match after rescaling each generator by -2")


@pytest.fixture(scope="module")
def modules():
    return {"ev2": load_module(data_path("ev2.json"), G),
            "jet2": load_module(data_path("jet2.json"), G),
            "jet2_level1": load_module(data_path("jet2_level1.json"), G)}


def _pair_ok(rep, a, b):
    st = statuses(rep)
    want = [f"pair[{a},{b}]/tensor[{a}⊗{b}]/d_squared", f"pair[{a},{b}]/tensor[{a}⊗{b}]/intertwining",
            f"pair[{a},{b}]/weak_commutativity[{a},{b}]/swap_differential",
            f"pair[{a},{b}]/weak_commutativity[{a},{b}]/swap_action"]
    return rep.ok and all(st.get(w) == "pass" for w in want)


def test_c08_meromorphic_complex(modules):
    ev, jet = modules["ev2"], modules["jet2"]
    with Timer() as t:
        a = yangian_suite(G, 3, 0, [ev, ev])
        b = yangian_suite(G, 3, 0, [jet, jet])
    strata = b.info["pair[jet2,jet2]/tensor[jet2⊗jet2]/pole_strata"]
    ok = _pair_ok(a, "ev2", "ev2") and _pair_ok(b, "jet2", "jet2") and bool(strata) and t.s < 30
    assert record(8, "sl₂ N=3: d_r(z)² = 0, Δ_z intertwines, swap is a chain iso (ev2 pair, jet2 pair)",
                  ok, t.s, 30, f"jet pair has {len(strata)} pole strata, ev pair none")


def test_c09_weak_associativity(modules):
    ev, jet = modules["ev2"], modules["jet2"]
    with Timer() as t:
        a = yangian_suite(G, 3, 0, [ev, ev, ev], nvars=2)
        b = check_weak_associativity(jet, jet, jet, meromorphic_r(DifferenceRMatrix.yang(G), 5), cap=2)
    st = statuses(a)
    exp = [k for k in st if k.startswith("weak_associativity") and "expansion" in k]
    ok = a.ok and b.ok and len(exp) == 2 and all(st[k] == "pass" for k in exp)
    assert record(9, "both expansions of M_{z+w}⊗N_w⊗P₀ are chain maps (ev2³ and jet2³, cap 2)", ok, t.s)


def test_c10_level_deformation(modules):
    ok = True
    with Timer() as t:
        for k in ("1", "-2/3"):
            rep, D = level_deform(build_loop_double(G, 3), k)
            ok &= rep.ok and D is not None
            jet = (modules["jet2_level1"] if k == "1" else
                   FSFModule.jet(G, SL2_FUNDAMENTAL, 2, k, "jet2_level"))
            suite = yangian_suite(G, 3, k, [modules["ev2"], jet])
            ok &= suite.ok and _pair_ok(suite, "ev2", jet.name)
    assert record(10, "(d_r + d_k)² = 0 at N=3 and the leveled pair suite passes, k in {1, -2/3}", ok, t.s)


def test_c11_truncation_coherence():
    with Timer() as t:
        rep = check_truncation_coherence(G, 2)
    st = statuses(rep)
    ok = rep.ok and set(st) == {"structure_constants", "r_entries", "differential", "meromorphic_strata"}
    assert record(11, "N=2 embeds into N=3: brackets, r entries, d_r, r(z) strata", ok, t.s)


def _load(name):
    return json.loads(data_path(name).read_text(encoding="utf-8"))


def _setk(rows, pred, val):
    for row in rows:
        if pred(row):
            row[-1] = val
            return
    raise KeyError


def _flip_cobracket(d):
    row = d["cobracket"][0]
    row[3] = str(-int(row[3]))


def _double_bracket(d):
    a, b, terms = d["brackets"][0]
    lab, c = terms[0]
    d["brackets"][0] = [a, b, [[lab, str(2 * int(c))]]]


def _double_differential(d):
    row = d["differential"]["1"][0]
    row[2] = "2"


MUTATIONS = [
    ("e1_double κ(e,ε^e) sign", "e1_double.json",
     lambda d: _setk(d["kappa"], lambda r: r[:2] == ["e", "ε^e"], "-1"), "check"),
    ("e1_double [e,ε^f] doubled", "e1_double.json",
     lambda d: _setk(d["brackets"], lambda r: r[:2] == ["e", "ε^f"], [["ε^f", "-2"]]), "check"),
    ("e1_double [f,ε^f] sign", "e1_double.json",
     lambda d: _setk(d["brackets"], lambda r: r[:2] == ["f", "ε^f"], [["ε^e", "-1"]]), "check"),
    ("e1_double_pairs [e,f] doubled", "e1_double_pairs.json",
     lambda d: _setk(d["brackets"], lambda r: r[:2] == ["e", "f"], [["f", "2"]]), "quantize"),
    ("yang_n2 cobracket sign", "yang_n2.json", _flip_cobracket, "bialgebra"),
    ("yang_n2 bracket doubled", "yang_n2.json", _double_bracket, "bialgebra"),
    ("ev2 ρ(h) entry sign", "ev2.json", lambda d: d["action"]["h@0"].__setitem__(0, [0, 0, "-1"]), "module"),
    ("ev2 ρ(e) entry doubled", "ev2.json", lambda d: d["action"]["e@0"].__setitem__(0, [0, 1, "2"]), "module"),
    ("jet2_level1 d_M entry doubled", "jet2_level1.json", _double_differential, "jet"),
    ("jordanian tail sign", "tail_jordanian.json", lambda d: d["tail"][1].__setitem__(4, "1"), "tail"),
    ("sl2 β(h,h) halved", "sl2.json", lambda d: _setk(d["beta"], lambda r: r[:2] == ["h", "h"], "1"), "base"),
    ("sl2 [h,e] sign", "sl2.json",
     lambda d: _setk(d["brackets"], lambda r: r[:2] == ["h", "e"], [["e", "-2"]]), "base"),
]


def _command(kind, path):
    sl2f, ev2 = str(data_path("sl2.json")), str(data_path("ev2.json"))
    return {
        "check": ["check", path],
        "quantize": ["quantize", path, "-H", "3", "-L", "5"],
        "bialgebra": ["check", path, "--suite", "bialgebra"],
        "module": ["yangian", "--g", sl2f, "--level", "1", "--modules", path, "--modules", ev2],
        "jet": ["yangian", "--g", sl2f, "--level", "1", "--modules", path, "--modules", path],
        "tail": ["yangian", "--g", sl2f, "--level", "1", "--r", path, "--modules", ev2, "--modules", ev2],
        "base": ["yangian", "--g", path],
    }[kind]


def test_c12_mutation_sensitivity(tmp_path):
    runner = CliRunner()
    caught, problems = 0, []
    with Timer() as t:
        for n, (title, name, corrupt, kind) in enumerate(MUTATIONS):
            base = runner.invoke(main, _command(kind, str(data_path(name))))
            data = _load(name)
            corrupt(data)
            p = tmp_path / f"{n}_{name}"
            p.write_text(json.dumps(data, ensure_ascii=False), encoding="utf-8")
            res = runner.invoke(main, _command(kind, str(p)))
            if base.exit_code == 0 and res.exit_code == 1 and "witness" in res.output:
                caught += 1
            else:
                problems.append((title, base.exit_code, res.exit_code))
    ok = caught == len(MUTATIONS) and len(MUTATIONS) >= 10
    assert record(12, f"{caught}/{len(MUTATIONS)} single-coefficient corruptions caught with a witness",
                  ok, t.s, note="each baseline exits 0"), problems
