"""The canonical 1-shifted r-matrix of a Manin triple and its identities."""

from .exactnum import ZERO, Fraction, fmt
from .graded import SparseTensor, contract
from .bialg import Cobracket, ManinTriple, cobracket_from_triple
from .report import Report, failed, passed


def _sgn(p):
    return -1 if p & 1 else 1


def _add(acc, key, v):
    w = acc.get(key, ZERO) + v
    if w:
        acc[key] = w
    else:
        acc.pop(key, None)


class RMatrixError(ValueError):
    pass


class RMatrix:
    def __init__(self, tensor):
        if tensor.arity != 2:
            raise RMatrixError("r-matrix must be a 2-tensor")
        degs = tensor.degrees()
        if degs and degs != {1}:
            raise RMatrixError(f"r-matrix must have degree 1, found {sorted(degs)}")
        self.tensor = tensor

    @property
    def basis(self):
        return self.tensor.basis

    @property
    def entries(self):
        return self.tensor.entries


def canonical_r(T):
    if not isinstance(T, ManinTriple) or not T.plus:
        raise RMatrixError("triple has no dual matching")
    out = {}
    for x, e in zip(T.plus, T.minus):
        for i, ci in x.items():
            for j, cj in e.items():
                _add(out, (i, j), ci * cj)
    return RMatrix(SparseTensor(T.double.basis, 2, out))


def check_r_contractions(T, r):
    rep = Report("r_contractions")
    basis = T.double.basis
    kap = T.metric
    for name, vecs, slot, expect in (("slot2_on_h_plus", T.plus, 2, "minus_id"),
                                     ("slot1_on_h_minus", T.minus, 1, "sign_id")):
        bad = None
        for v in vecs:
            X = SparseTensor(basis, 1, {(i,): c for i, c in v.items()})
            got = contract(kap, r.tensor, slot, X)
            if expect == "minus_id":
                want = -X
            else:
                d = basis.degrees[next(iter(v))]
                want = X.scale(_sgn(d))
            if got != want:
                bad = (X, got, want)
                break
        if bad:
            rep.add(failed(name, "contraction mismatch",
                           {"X": bad[0].pretty(), "got": bad[1].pretty(), "want": bad[2].pretty()}))
        else:
            rep.add(passed(name))
    return rep


def adjoint_commutator_2slot(L, a, x):
    """[a, x⊗1 + 1⊗x] slotwise with Koszul signs; a a 2-tensor, x a 1-tensor."""
    if isinstance(a, SparseTensor):
        basis = a.basis
        A = a.entries
    else:
        basis, A = L.basis, a
    X = {k[0]: v for k, v in x.entries.items()} if isinstance(x, SparseTensor) else x
    deg = L.basis.degrees
    out = {}
    for (p, q), c in A.items():
        for y, cy in X.items():
            s = _sgn(deg[q] * deg[y])
            for w, v in L.f.get((p, y), {}).items():
                _add(out, (w, q), s * c * cy * v)
            for w, v in L.f.get((q, y), {}).items():
                _add(out, (p, w), c * cy * v)
    return SparseTensor(basis, 2, out) if isinstance(a, SparseTensor) else out


class DoubleCobracket:
    """δ_g = δ on h_plus and -δ* on h_minus, in ambient coordinates."""

    def __init__(self, T):
        self.T = T
        self.plus = cobracket_from_triple(T, "plus")
        self.minus = cobracket_from_triple(T, "minus")
        n = T.double.dim
        self.delta_g = {}
        for v in range(n):
            self.delta_g[v] = self._of({v: Fraction(1)})

    def _side_tensor(self, name, delta, coords, sign):
        T = self.T
        out = {}
        for a, ca in coords.items():
            for (b, c), v in delta.of(a).items():
                for i, ci in T.side(name)[b].items():
                    for j, cj in T.side(name)[c].items():
                        _add(out, (i, j), sign * ca * v * ci * cj)
        return out

    def _of(self, vec):
        T = self.T
        out = self._side_tensor("plus", self.plus, T.proj_plus(vec), 1)
        for k, v in self._side_tensor("minus", self.minus, T.proj_minus(vec), -1).items():
            _add(out, k, v)
        return out

    def of(self, v):
        return self.delta_g.get(v, {})

    def as_cobracket(self):
        return Cobracket(self.T.double.basis, self.delta_g)


def check_coboundary(T, r, dg=None):
    dg = dg or DoubleCobracket(T)
    L = T.double
    lab = L.basis.labels
    rep = Report("coboundary", {"dim": L.dim})
    for v in range(L.dim):
        lhs = adjoint_commutator_2slot(L, {k: -c for k, c in r.entries.items()}, {v: Fraction(1)})
        rhs = dg.of(v)
        if lhs != rhs:
            diff = dict(lhs)
            for k, c in rhs.items():
                _add(diff, k, -c)
            key, val = sorted(diff.items())[0]
            rep.add(failed("coboundary", f"[-r, Δ({lab[v]})] ≠ δ_g({lab[v]})",
                           {"v": lab[v], "entry": [lab[k] for k in key], "residual": fmt(val)}))
            return rep
    rep.add(passed("coboundary", f"{L.dim} basis vectors"))
    return rep


def placed_commutator(L, A, slots_a, B, slots_b):
    """[A^{slots_a}, B^{slots_b}] in g^{⊗3} for 2-tensors sharing one slot."""
    deg = L.basis.degrees
    shared = set(slots_a) & set(slots_b)
    if len(shared) != 1:
        raise RMatrixError("placed commutator needs exactly one shared slot")
    s = shared.pop()
    out = {}
    for (p, q), c in A.items():
        u = [None, None, None]
        u[slots_a[0]], u[slots_a[1]] = p, q
        for (r_, t), d in B.items():
            v = [None, None, None]
            v[slots_b[0]], v[slots_b[1]] = r_, t
            exp = 0
            for i in range(3):
                if u[i] is None:
                    continue
                for j in range(i):
                    if v[j] is not None:
                        exp += deg[u[i]] * deg[v[j]]
            sign = _sgn(exp)
            br = L.f.get((u[s], v[s]), {})
            if not br:
                continue
            base = [u[i] if u[i] is not None else v[i] for i in range(3)]
            for w, f in br.items():
                base[s] = w
                _add(out, tuple(base), sign * c * d * f)
    return out


def cybe_residual(T, r):
    L = T.double
    R = r.entries
    out = {}
    for sa, sb in (((0, 1), (0, 2)), ((0, 1), (1, 2)), ((0, 2), (1, 2))):
        for k, v in placed_commutator(L, R, sa, R, sb).items():
            _add(out, k, v)
    return out


def _witness3(L, res):
    lab = L.basis.labels
    key, v = sorted(res.items())[0]
    return {"entry": [lab[k] for k in key], "value": fmt(v), "nonzero_entries": len(res)}


def check_cybe(T, r):
    rep = Report("cybe", {"dim": T.double.dim})
    res = cybe_residual(T, r)
    if res:
        rep.add(failed("cybe", "[r12,r13]+[r12,r23]+[r13,r23] ≠ 0", _witness3(T.double, res)))
    else:
        rep.add(passed("cybe"))
    return rep


def check_dr_identities(T, r, dg=None):
    dg = dg or DoubleCobracket(T)
    L = T.double
    deg = L.basis.degrees
    R = r.entries
    rep = Report("dr_identities", {"dim": L.dim})
    lhs1, lhs2 = {}, {}
    for (i, j), c in R.items():
        for (p, q), v in dg.of(i).items():
            _add(lhs1, (p, q, j), c * v)
        for (p, q), v in dg.of(j).items():
            _add(lhs2, (i, p, q), _sgn(deg[i]) * c * v)
    rhs1 = placed_commutator(L, R, (0, 2), R, (1, 2))
    rhs2 = placed_commutator(L, R, (0, 1), R, (0, 2))
    for name, lhs, rhs, txt in (("delta_tensor_one", lhs1, rhs1, "δ_g⊗1(r) = [r13, r23]"),
                                ("one_tensor_delta", lhs2, rhs2, "1⊗δ_g(r) = [r12, r13]")):
        diff = dict(lhs)
        for k, v in rhs.items():
            _add(diff, k, -v)
        if diff:
            rep.add(failed(name, txt + " fails", _witness3(L, diff)))
        else:
            rep.add(passed(name, txt))
    return rep


def omega_of(r):
    t = r.tensor if isinstance(r, RMatrix) else r
    return t - t.permute((1, 0))


def check_omega(T, r, other_pairs=()):
    L = T.double
    lab = L.basis.labels
    rep = Report("omega", {"dim": L.dim})
    om = omega_of(r)
    if om.permute((1, 0)) != -om:
        rep.add(failed("antisymmetric", "σΩ ≠ -Ω"))
    else:
        rep.add(passed("antisymmetric"))
    for v in range(L.dim):
        res = adjoint_commutator_2slot(L, om.entries, {v: Fraction(1)})
        if res:
            key, val = sorted(res.items())[0]
            rep.add(failed("invariant", f"[Ω, Δ({lab[v]})] ≠ 0",
                           {"v": lab[v], "entry": [lab[k] for k in key], "value": fmt(val)}))
            break
    else:
        rep.add(passed("invariant"))
    for k, T2 in enumerate(other_pairs):
        om2 = omega_of(canonical_r(T2))
        if om2 != om:
            rep.add(failed(f"pair_independent_{k}", "Ω differs between Lagrangian pairs",
                           {"diff": (om2 - om).to_json()}))
        else:
            rep.add(passed(f"pair_independent_{k}"))
    return rep


def rmatrix_suite(T, other_pairs=()):
    r = canonical_r(T)
    dg = DoubleCobracket(T)
    rep = Report("rmatrix", {"dim": T.double.dim})
    rep.add(check_r_contractions(T, r))
    rep.add(check_cybe(T, r))
    rep.add(check_coboundary(T, r, dg))
    rep.add(check_dr_identities(T, r, dg))
    rep.add(check_omega(T, r, other_pairs))
    from .bialg import check_shifted_bialgebra
    sub = check_shifted_bialgebra(T.double, dg.as_cobracket())
    sub.suite = "double_bialgebra"
    rep.add(sub)
    return rep
