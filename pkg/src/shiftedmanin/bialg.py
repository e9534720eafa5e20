"""1-shifted cobrackets, Manin triples, dualization and the double."""

from itertools import permutations

from .exactnum import ZERO, Fraction, fmt, rational
from .graded import GradedBasis, SparseTensor, koszul_sign
from .liealg import (GradedLieAlgebra, ShiftedMetric, Subspace,
                     check_lagrangian_pair, check_metric, lie_suite)
from .report import Report, failed, passed


class BialgebraError(ValueError):
    pass


def _sgn(p):
    return -1 if p & 1 else 1


class Cobracket:
    """delta[a] = {(b, c): coeff}: the tensor δ(x_a) in h ⊗ h.

    `overflow` lists pairs (b, c) whose dual bracket was dropped by a window.
    """

    def __init__(self, basis, delta, overflow=()):
        self.basis = basis
        self.delta = {}
        for a, t in delta.items():
            if isinstance(t, SparseTensor):
                t = dict(t.entries)
            clean = {tuple(k): rational(v) for k, v in t.items() if rational(v)}
            if clean:
                self.delta[a] = clean
        self.overflow = frozenset(overflow)

    @classmethod
    def zero(cls, basis):
        return cls(basis, {})

    def of(self, a):
        return self.delta.get(a, {})

    def tensor(self, a):
        return SparseTensor(self.basis, 2, self.of(a))

    def is_zero(self):
        return not self.delta

    def __eq__(self, other):
        return isinstance(other, Cobracket) and self.basis == other.basis \
            and self.delta == other.delta

    def to_json(self):
        lab = self.basis.labels
        rows = []
        for a in sorted(self.delta):
            for (b, c), v in sorted(self.delta[a].items()):
                rows.append([lab[a], lab[b], lab[c], fmt(v)])
        return rows


class ShiftedBialgebra:
    def __init__(self, algebra, cobracket):
        if algebra.basis != cobracket.basis:
            raise BialgebraError("algebra and cobracket live on different bases")
        self.algebra = algebra
        self.cobracket = cobracket

    @property
    def basis(self):
        return self.algebra.basis


# ---- tensor helpers on h ⊗ h and h ⊗ h ⊗ h (coordinate dicts) ----

def _add(acc, key, v):
    w = acc.get(key, ZERO) + v
    if w:
        acc[key] = w
    else:
        acc.pop(key, None)


def _ad_right_2(L, A, y):
    """[A, Δ(y)] for A in h⊗h and a basis index y: slotwise right bracket."""
    deg = L.basis.degrees
    out = {}
    for (a, b), c in A.items():
        s = _sgn(deg[b] * deg[y])
        for w, v in L.f.get((a, y), {}).items():
            _add(out, (w, b), s * c * v)
        for w, v in L.f.get((b, y), {}).items():
            _add(out, (a, w), c * v)
    return out


def _sym3(t, deg):
    out = {}
    for key, c in t.items():
        ds = [deg[k] for k in key]
        for p in permutations(range(3)):
            _add(out, tuple(key[i] for i in p), koszul_sign(p, ds) * c)
    return out


def cojacobi_tensor(h, delta, a):
    """Graded symmetrization of (δ⊗1)δ(x_a) + (1⊗δ)δ(x_a) in h^{⊗3}."""
    deg = h.basis.degrees
    raw = {}
    for (b, c), v in delta.of(a).items():
        for (d, e), w in delta.of(b).items():
            _add(raw, (d, e, c), v * w)
        s = _sgn(deg[b])
        for (d, e), w in delta.of(c).items():
            _add(raw, (b, d, e), s * v * w)
    return _sym3(raw, deg)


def check_cobracket_wellformed(h, delta):
    deg, lab = h.basis.degrees, h.basis.labels
    for a in sorted(delta.delta):
        for (b, c), v in delta.delta[a].items():
            if deg[b] + deg[c] != deg[a] + 1:
                return failed("cobracket_degree",
                              f"δ({lab[a]}) has a {lab[b]}⊗{lab[c]} entry of degree "
                              f"{deg[b] + deg[c]}, expected {deg[a] + 1}",
                              {"a": lab[a], "entry": [lab[b], lab[c]]})
        t = delta.tensor(a)
        if t.permute((1, 0)) != t:
            return failed("cobracket_symmetric", f"δ({lab[a]}) is not graded-symmetric",
                          {"a": lab[a], "delta": t.to_json()})
    return passed("cobracket_wellformed")


def cocycle_residual(h, delta, x, y):
    """δ([x,y]) - [δx, Δy] - (-1)^{|x|}[Δx, δy]."""
    L = h
    deg = L.basis.degrees
    out = {}
    for w, v in L.f.get((x, y), {}).items():
        for k, u in delta.of(w).items():
            _add(out, k, v * u)
    for k, u in _ad_right_2(L, delta.of(x), y).items():
        _add(out, k, -u)
    # [Δx, B] = -(-1)^{|x||B|} [B, Δx] with |B| = |y| + 1
    s = _sgn(deg[x]) * -_sgn(deg[x] * (deg[y] + 1))
    for k, u in _ad_right_2(L, delta.of(y), x).items():
        _add(out, k, -s * u)
    return out


def check_shifted_bialgebra(h, delta):
    L = h.algebra if isinstance(h, ShiftedBialgebra) else h
    if isinstance(h, ShiftedBialgebra):
        delta = h.cobracket
    rep = Report("bialgebra", {"dim": L.dim})
    lab = L.basis.labels
    wf = check_cobracket_wellformed(L, delta)
    rep.add(wf)
    if not wf.ok:
        return rep
    for a in range(L.dim):
        res = cojacobi_tensor(L, delta, a)
        if res:
            key, v = sorted(res.items())[0]
            rep.add(failed("co_jacobi", f"Sym((δ⊗1)δ + (1⊗δ)δ)({lab[a]}) ≠ 0",
                           {"a": lab[a], "entry": [lab[k] for k in key], "value": fmt(v)}))
            break
    else:
        rep.add(passed("co_jacobi"))
    skipped_n = checked = 0
    bad = None
    for x in range(L.dim):
        for y in range(L.dim):
            if (x, y) in L.overflow:
                skipped_n += 1
                continue
            checked += 1
            res = cocycle_residual(L, delta, x, y)
            if res:
                bad = (x, y, res)
                break
        if bad:
            break
    if bad:
        x, y, res = bad
        key, v = sorted(res.items())[0]
        rep.add(failed("cocycle", f"δ([{lab[x]},{lab[y]}]) mismatch",
                       {"pair": [lab[x], lab[y]], "entry": [lab[k] for k in key], "residual": fmt(v)}))
    else:
        rep.add(passed("cocycle", f"{checked} pairs" + (f", {skipped_n} boundary pairs skipped" if skipped_n else ""),
                       interior=checked, boundary=skipped_n))
    return rep


# ---- Manin triples ----

class ManinTriple:
    """(g, kappa, h_plus, h_minus) with matched bases kappa(plus[a], minus[b]) = δ_ab."""

    def __init__(self, double, metric, plus, minus, plus_labels=None, minus_labels=None):
        self.double = double
        self.metric = metric
        self.plus = [dict(v) for v in plus]
        self.minus = [dict(v) for v in minus]
        for a, x in enumerate(self.plus):
            for b, e in enumerate(self.minus):
                if metric.pair(x, e) != (1 if a == b else 0):
                    raise BialgebraError("plus/minus bases are not kappa-dual")
        lab = double.basis.labels
        self.plus_labels = plus_labels or [_vec_label(lab, v) for v in self.plus]
        self.minus_labels = minus_labels or [_vec_label(lab, v) for v in self.minus]

    @classmethod
    def from_subspaces(cls, double, metric, hp, hm):
        """Rebase h_minus so that it is kappa-dual to the given h_plus basis."""
        from . import linalg
        n = len(hp.span)
        if len(hm.span) != n:
            raise BialgebraError("Lagrangians of different dimension")
        G = [[metric.pair(x, e) for e in hm.span] for x in hp.span]
        Ginv = linalg.inverse(G)
        minus = []
        for b in range(n):
            v = {}
            for j in range(n):
                cj = Ginv[j][b]
                if cj:
                    for i, c in hm.span[j].items():
                        _add(v, i, cj * c)
            minus.append(v)
        return cls(double, metric, hp.span, minus)

    @property
    def h_plus(self):
        return Subspace(self.double.basis, self.plus)

    @property
    def h_minus(self):
        return Subspace(self.double.basis, self.minus)

    def proj_plus(self, y):
        """h_plus coordinates of y (along h_minus): kappa(y, eps^k)."""
        out = {}
        for k, e in enumerate(self.minus):
            v = self.metric.pair(y, e)
            if v:
                out[k] = v
        return out

    def proj_minus(self, y):
        out = {}
        for k, x in enumerate(self.plus):
            v = -self.metric.pair(y, x)
            if v:
                out[k] = v
        return out

    def side(self, name):
        return self.plus if name == "plus" else self.minus

    def side_degree(self, name, i):
        v = self.side(name)[i]
        degs = {self.double.basis.degrees[j] for j in v}
        if len(degs) != 1:
            raise BialgebraError("inhomogeneous Lagrangian basis vector")
        return degs.pop()

    def restrict(self, name):
        """The Lie subalgebra on the matched basis of one side."""
        vecs = self.side(name)
        proj = self.proj_plus if name == "plus" else self.proj_minus
        L = self.double
        labels = self.plus_labels if name == "plus" else self.minus_labels
        basis = GradedBasis([(labels[i], self.side_degree(name, i)) for i in range(len(vecs))])
        f = {}
        overflow = set()
        for i, x in enumerate(vecs):
            for j, y in enumerate(vecs):
                br = L.bracket_dict(x, y)
                if br:
                    f[(i, j)] = proj(br)
                if L.overflow and any((a, b) in L.overflow for a in x for b in y):
                    overflow.add((i, j))
        return GradedLieAlgebra(basis, f, overflow)

    def to_coords(self, name, v):
        """Ambient coordinates of a side-coordinate dict."""
        out = {}
        for i, c in v.items():
            for j, u in self.side(name)[i].items():
                _add(out, j, c * u)
        return out


def _vec_label(lab, v):
    if len(v) == 1:
        (i, c), = v.items()
        if c == 1:
            return lab[i]
        return f"{fmt(c)}*{lab[i]}"
    return "+".join(f"{fmt(c)}*{lab[i]}" for i, c in sorted(v.items()))


def cobracket_from_triple(T, side):
    """δ on one Lagrangian from pairing against brackets of the other.

    δ(u_a)_{bc} = (-1)^{|u_c|(|u_b|+1)} κ(u_a, [w^b, w^c]) where w is the
    κ-dual basis of the opposite side (w = ε on plus, w = -x on minus).
    """
    if side not in ("plus", "minus"):
        raise BialgebraError("side must be plus or minus")
    other = "minus" if side == "plus" else "plus"
    sub = T.restrict(side)
    deg = sub.basis.degrees
    u = T.side(side)
    w = T.side(other)
    L = T.double
    n = len(u)
    # only the sign of w matters for a product of two of them
    delta = {}
    overflow = set()
    for b in range(n):
        for c in range(n):
            br = L.bracket_dict(w[b], w[c])
            if L.overflow and any((p, q) in L.overflow for p in w[b] for q in w[c]):
                overflow.add((b, c))
            if not br:
                continue
            s = _sgn(deg[c] * (deg[b] + 1))
            for a in range(n):
                v = T.metric.pair(u[a], br)
                if v:
                    delta.setdefault(a, {})[(b, c)] = s * v
    return Cobracket(sub.basis, delta, overflow)


def dualize(h):
    """The bialgebra on h*[-1] with bracket from δ and cobracket from f."""
    L, delta = h.algebra, h.cobracket
    deg = L.basis.degrees
    dual = GradedBasis([("ε^" + l, 1 - d) for l, d in zip(L.basis.labels, deg)])
    g = {}
    for a, t in delta.delta.items():
        for (b, c), v in t.items():
            s = _sgn(deg[c] * (deg[b] + 1))
            g.setdefault((b, c), {})[a] = s * v
    overflow = set(delta.overflow)
    algebra = GradedLieAlgebra(dual, g, overflow)
    dstar = {}
    for (b, c), out in L.f.items():
        s = -_sgn(deg[b] * (deg[c] + 1))
        for a, v in out.items():
            dstar.setdefault(a, {})[(b, c)] = s * v
    return ShiftedBialgebra(algebra, Cobracket(dual, dstar, L.overflow))


def double_dual_iso(h, hdd):
    """Check that x''_a -> -x_a identifies dualize(dualize(h)) with h."""
    L, D = h.algebra, hdd.algebra
    n = L.dim
    for a in range(n):
        for b in range(n):
            lhs = L.f.get((a, b), {})
            rhs = {c: -v for c, v in D.f.get((a, b), {}).items()}
            if {k: v for k, v in lhs.items() if v} != rhs:
                return False
    # δ(φx) = (φ⊗φ)δ''(x) with φ = -id: δ(x_a) = -δ''(x_a)·(+1)... φ⊗φ = +1
    for a in range(n):
        if {k: -v for k, v in hdd.cobracket.of(a).items()} != dict(h.cobracket.of(a)):
            return False
    return True


def build_double(h):
    """g = h ⊕ h*[-1] with the canonical pairing and the invariant mixed bracket."""
    L, delta = h.algebra, h.cobracket
    n = L.dim
    deg = L.basis.degrees
    basis = GradedBasis([(l, d) for l, d in zip(L.basis.labels, deg)] +
                        [("ε^" + l, 1 - d) for l, d in zip(L.basis.labels, deg)])
    E = lambda b: n + b
    dg = lambda i: basis.degrees[i]
    f = {}

    def put(a, b, c, v):
        if v:
            f.setdefault((a, b), {})
            f[(a, b)][c] = f[(a, b)].get(c, ZERO) + v

    for (a, b), out in L.f.items():
        for c, v in out.items():
            put(a, b, c, v)
    for a, t in delta.delta.items():
        for (b, c), v in t.items():
            s = _sgn(deg[c] * (deg[b] + 1))
            put(E(b), E(c), a + n, s * v)
    # mixed: κ(x_c, [x_a, ε^b]) = (-1)^{|x_a|} f_ca^b ; κ([x_a, ε^b], ε^c) = (-1)^{|ε^b|} g^{bc}_a
    gcoef = {}
    for a, t in delta.delta.items():
        for (b, c), v in t.items():
            gcoef[(b, c, a)] = _sgn(deg[c] * (deg[b] + 1)) * v
    for a in range(n):
        for b in range(n):
            for c in range(n):
                v = L.f.get((c, a), {}).get(b, ZERO)
                if v:
                    put(a, E(b), E(c), _sgn(deg[a]) * v)
                w = gcoef.get((b, c, a), ZERO)
                if w:
                    put(a, E(b), c, _sgn(dg(E(b))) * w)
    for a in range(n):
        for b in range(n):
            out = f.get((a, E(b)))
            if out:
                s = -_sgn(deg[a] * dg(E(b)))
                f[(E(b), a)] = {c: s * v for c, v in out.items()}
    overflow = set(L.overflow) | {(E(b), E(c)) for (b, c) in delta.overflow}
    G = GradedLieAlgebra(basis, f, overflow)
    kappa = {}
    for a in range(n):
        kappa[(a, E(a))] = Fraction(1)
        kappa[(E(a), a)] = Fraction(-1)
    plus = [{a: Fraction(1)} for a in range(n)]
    minus = [{E(a): Fraction(1)} for a in range(n)]
    return ManinTriple(G, ShiftedMetric(kappa), plus, minus)


def triple_suite(T):
    rep = Report("triple", {"dim": T.double.dim})
    rep.add(lie_suite(T.double))
    rep.add(check_metric(T.double, T.metric))
    rep.add(check_lagrangian_pair(T.double, T.metric, T.h_plus, T.h_minus))
    rep.add(verify_prop_delta(T))
    return rep


def _triangle(T, X, Y):
    """For X in h_plus, Y in h_minus (ambient dicts): (X▷Y, X◁Y) ambient dicts."""
    br = T.double.bracket_dict(X, Y)
    return T.to_coords("minus", T.proj_minus(br)), T.to_coords("plus", T.proj_plus(br))


def _sub(a, b):
    out = dict(a)
    for k, v in b.items():
        _add(out, k, -v)
    return out


def _acc(acc, d, s=1):
    for k, v in d.items():
        _add(acc, k, s * v)


def verify_prop_delta(T):
    """Check the ▷/◁ identities coming from the h_∓ parts of Jacobi, plus the
    pairing identity κ(Y,[X',X]) = (-1)^{|X|} κ(X▷Y, X')."""
    rep = Report("prop_delta", {"dim": T.double.dim})
    L = T.double
    lab = L.basis.labels
    P, M = T.plus, T.minus
    dP = [T.side_degree("plus", i) for i in range(len(P))]
    dM = [T.side_degree("minus", i) for i in range(len(M))]
    br = L.bracket_dict
    ov = L.overflow

    def touches(u, v):
        return ov and any((p, q) in ov for p in u for q in v)

    tri = {}

    def T2(X, Y):
        key = (tuple(sorted(X.items())), tuple(sorted(Y.items())))
        if key not in tri:
            tri[key] = _triangle(T, X, Y)
        return tri[key]

    def proj_m(v):
        return T.to_coords("minus", T.proj_minus(v))

    def proj_p(v):
        return T.to_coords("plus", T.proj_plus(v))

    def lin_tri(Xd, Y, which):
        """bilinear ▷ or ◁ with X an arbitrary h_plus ambient dict, Y a basis dict."""
        out = {}
        for i, c in Xd.items():
            part = T2({i: Fraction(1)}, Y)[which]
            _acc(out, {k: c * v for k, v in part.items()})
        return out

    def lin_tri_left(Z, Yd, which):
        out = {}
        for j, c in Yd.items():
            part = T2(Z, {j: Fraction(1)})[which]
            _acc(out, {k: c * v for k, v in part.items()})
        return out

    # ambient ▷ with arbitrary arguments: use projections of brackets directly
    def rt(X, Y):
        return proj_m(br(X, Y))

    def lt(X, Y):
        return proj_p(br(X, Y))

    bad = None
    checked = skipped_n = 0
    for x in range(len(P)):
        X = P[x]
        for z in range(len(M)):
            Z = M[z]
            for w in range(len(M)):
                W = M[w]
                if touches(Z, W) or touches(X, Z) or touches(X, W):
                    skipped_n += 1
                    continue
                checked += 1
                lhs = rt(X, br(Z, W))
                rhs = {}
                _acc(rhs, br(rt(X, Z), W))
                _acc(rhs, rt(lt(X, Z), W))
                s = -_sgn(dM[z] * dM[w])
                _acc(rhs, br(rt(X, W), Z), s)
                _acc(rhs, rt(lt(X, W), Z), s)
                res = _sub(lhs, rhs)
                if res:
                    bad = ("ZXY", [T.plus_labels[x], T.minus_labels[z], T.minus_labels[w]], res)
                    break
            if bad:
                break
        if bad:
            break
    if bad:
        rep.add(failed("triangle_identity_h_minus", "X▷[Z,W] identity fails",
                       {"triple": bad[1], "residual": {lab[k]: fmt(v) for k, v in sorted(bad[2].items())}}))
    else:
        rep.add(passed("triangle_identity_h_minus", f"{checked} triples", interior=checked, boundary=skipped_n))
    bad = None
    checked = skipped_n = 0
    for z in range(len(P)):
        Z = P[z]
        for x in range(len(M)):
            X = M[x]
            for y in range(len(M)):
                Y = M[y]
                if touches(X, Y) or touches(Z, X) or touches(Z, Y):
                    skipped_n += 1
                    continue
                checked += 1
                lhs = lt(Z, br(X, Y))
                rhs = {}
                _acc(rhs, lt(lt(Z, X), Y))
                _acc(rhs, lt(lt(Z, Y), X), -_sgn(dM[x] * dM[y]))
                res = _sub(lhs, rhs)
                if res:
                    bad = ([T.plus_labels[z], T.minus_labels[x], T.minus_labels[y]], res)
                    break
            if bad:
                break
        if bad:
            break
    if bad:
        rep.add(failed("triangle_identity_h_plus", "Z◁[X,Y] identity fails",
                       {"triple": bad[0], "residual": {lab[k]: fmt(v) for k, v in sorted(bad[1].items())}}))
    else:
        rep.add(passed("triangle_identity_h_plus", f"{checked} triples", interior=checked, boundary=skipped_n))
    bad = None
    for x in range(len(P)):
        for xp in range(len(P)):
            for y in range(len(M)):
                lhs = T.metric.pair(M[y], br(P[xp], P[x]))
                rhs = _sgn(dP[x]) * T.metric.pair(rt(P[x], M[y]), P[xp])
                if lhs != rhs:
                    bad = (x, xp, y, lhs, rhs)
                    break
            if bad:
                break
        if bad:
            break
    if bad:
        x, xp, y, l, r = bad
        rep.add(failed("kappa_dual", "κ(Y,[X',X]) ≠ (-1)^|X| κ(X▷Y, X')",
                       {"X": T.plus_labels[x], "X'": T.plus_labels[xp], "Y": T.minus_labels[y],
                        "lhs": fmt(l), "rhs": fmt(r)}))
    else:
        rep.add(passed("kappa_dual"))
    return rep


def matched_structure(T):
    """Structure constants of T.double in the matched basis (plus..., minus...)."""
    n = len(T.plus)
    vecs = T.plus + T.minus
    L = T.double
    f = {}
    for i, x in enumerate(vecs):
        for j, y in enumerate(vecs):
            if L.overflow and any((p, q) in L.overflow for p in x for q in y):
                continue
            br = L.bracket_dict(x, y)
            if not br:
                continue
            out = {}
            for k, v in T.proj_plus(br).items():
                out[k] = v
            for k, v in T.proj_minus(br).items():
                out[n + k] = v
            f[(i, j)] = out
    return f


def compare_triples(T1, T2):
    """Equality of structure constants and pairing in matched bases; returns
    None or a witness dict."""
    if len(T1.plus) != len(T2.plus):
        return {"reason": "dimension mismatch"}
    f1, f2 = matched_structure(T1), matched_structure(T2)
    for key in sorted(set(f1) | set(f2)):
        a, b = f1.get(key, {}), f2.get(key, {})
        if a != b:
            return {"pair": list(key), "first": {str(k): fmt(v) for k, v in sorted(a.items())},
                    "second": {str(k): fmt(v) for k, v in sorted(b.items())}}
    return None
