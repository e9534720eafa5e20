"""The twisted Koszul complex Hom(B, U_ħ(h₊)) with B = U_ħ(ħh₋).

Under g_2 = 0 with h₊ in degree 0, h₋ sits in degree 1 and is abelian, so B is
the exterior algebra on ε̃^a = ħε^a and the left factor B^∨ is Sym(h₊[1]). A
chain f is a sum of basis maps (w, u, j): ε̃_w ↦ ħ^j u, other words ↦ 0. Its
degree is -len(w).
"""

from itertools import combinations

from .exactnum import ZERO, Fraction, fmt
from .report import Report, failed, passed, skipped
from .uea import Quantization, UEAElement
from . import linalg


class KoszulError(ValueError):
    pass


def _sgn(p):
    return -1 if p & 1 else 1


def _add(acc, key, v):
    w = acc.get(key, ZERO) + v
    if w:
        acc[key] = w
    else:
        acc.pop(key, None)


def check_mc(T, H=4, word_len=6, scale=1, Q=None):
    """d(α) + α² = 0 for α = -2ħr in U(g)⊗U(g), with d = d_r⊗1 + 1⊗d_r."""
    Q = Q or Quantization(T, H, word_len)
    U = Q.U
    rep = Report("maurer_cartan", {"H": H, "L": word_len, "scale": str(scale)})
    alpha = U.tensor_of(Q.R).scale(-2 * Fraction(scale), h=1)
    da = Q.d_tensor(alpha)
    sq = alpha * alpha
    res = da + sq
    rep.info["d_alpha_terms"] = len(da.terms)
    rep.info["alpha_squared_terms"] = len(sq.terms)
    if res.is_zero():
        rep.add(passed("mc", "d(α) + α² = 0; equivalent to (d⊗1+1⊗d)(r) = ħ[r,r] = 2ħr²"))
    else:
        rep.add(failed("mc", "d(α) + α² ≠ 0", res.witness()))
    return rep


def _side_letters(T, name):
    out = []
    for v in T.side(name):
        if len(v) != 1:
            raise KoszulError("Lagrangians must be coordinate-aligned for the Koszul complex")
        out.append(next(iter(v)))
    return out


class TwistedComplex:
    def __init__(self, T, S=4, L=4, H=2, twisted=True, Q=None):
        g = T.double
        deg = g.basis.degrees
        if any(deg[i] == 2 for i in range(g.dim)):
            raise KoszulError("g_2 ≠ 0: the complex assumes g_2 = 0")
        self.T = T
        self.S, self.L, self.H = S, L, H
        self.twisted = twisted
        self.plus = _side_letters(T, "plus")
        self.minus = _side_letters(T, "minus")
        if any(deg[i] != 0 for i in self.plus):
            raise KoszulError("h₊ must be concentrated in degree 0")
        self.Q = Q or Quantization(T, H, L + 2)
        self.U = self.Q.U
        self.pset = set(self.plus)
        m = len(self.minus)
        # exterior words on h₋, ordered by ambient index
        mins = sorted(self.minus)
        self.bwords = [w for k in range(min(S, m) + 1) for w in combinations(mins, k)]
        self.bset = set(self.bwords)
        self.dB = {w: self._d_b(w) for w in self.bwords}
        self.awords = self._a_words()
        self.alpha = {}
        for (i, j), v in self.Q.R.items():
            if i not in self.pset:
                raise KoszulError("r is not in h₊⊗h₋")
            _add(self.alpha, (i, j), -2 * v)
        self.basis = []
        p = L - (H - 1)
        self.p = p
        for w in self.bwords:
            for u in self.awords:
                for j in range(H):
                    if len(w) + len(u) - j <= p:
                        self.basis.append((w, u, j))
        self.index = {b: n for n, b in enumerate(self.basis)}
        self._D = {}

    def _a_words(self):
        out = [()]
        frontier = [()]
        plus = sorted(self.plus)
        for _ in range(self.L):
            nxt = []
            for w in frontier:
                for a in plus:
                    if not w or a >= w[-1]:
                        nxt.append(w + (a,))
            out.extend(nxt)
            frontier = nxt
        return out

    def _d_b(self, w):
        """d_B on the exterior word ε̃_w, returned in ε̃-words with ħ-powers."""
        U = self.U
        x = UEAElement(U, {(0, w): Fraction(1)})
        dx = self.Q.d(x)
        out = {}
        for (h, w2), c in dx.terms.items():
            if any(i not in self.minus for i in w2):
                raise KoszulError("d_r does not preserve U(h₋)")
            e = len(w) + h - len(w2)
            if e < 0:
                raise KoszulError("negative ħ-power after rescaling")
            out[(w2, e)] = c
        return out

    def mult_b(self, w, a):
        """ε̃_w · ε̃^a in the exterior algebra: (word, sign) or None."""
        if a in w:
            return None
        deg = self.U.deg
        nw = tuple(sorted(w + (a,)))
        pos = nw.index(a)
        s = sum(deg[i] for i in nw[pos + 1:]) * deg[a]
        return nw, _sgn(s)

    def degree(self, b):
        w, u, j = b
        return self.U.wdeg(u) - self.U.wdeg(w)

    def apply(self, b):
        """D on a basis map, as {basis key: coeff} (keys may fall outside the window)."""
        hit = self._D.get(b)
        if hit is not None:
            return hit
        w, u, j = b
        U = self.U
        fdeg = self.degree(b)
        out = {}
        # d_A f(b)
        du = self.Q.d(UEAElement(U, {(0, u): Fraction(1)}))
        for (h, u2), c in du.terms.items():
            if j + h < self.H:
                _add(out, (w, u2, j + h), c)
        # -(-1)^{|f|} f∘d_B
        for w2 in self.bwords:
            for (w3, e), c in self.dB[w2].items():
                if w3 == w and j + e < self.H:
                    _add(out, (w2, u, j + e), -_sgn(fdeg) * c)
        if self.twisted:
            # D f = d_A∘f - (-1)^{|f|} (f∘d_B + α⋆f), (α⋆f)(b) = Σ a_i f(b b_i)
            for (i, a), c in self.alpha.items():
                if a not in w:
                    continue
                w2 = tuple(x for x in w if x != a)
                nw, s = self.mult_b(w2, a)
                prod = U._normal((i,) + u)
                for u2, q in prod.items():
                    _add(out, (w2, u2, j), -_sgn(fdeg) * s * c * q)
        self._D[b] = out
        return out

    def matrix_by_degree(self):
        """{deg: (rows, cols, entries)} for D: C^deg -> C^{deg+1} restricted to the window."""
        by_deg = {}
        for b in self.basis:
            by_deg.setdefault(self.degree(b), []).append(b)
        return by_deg

    def d_squared_residual(self):
        for b in self.basis:
            acc = {}
            for k, c in self.apply(b).items():
                if k not in self.index:
                    raise KoszulError(f"window is not D-stable at {b} -> {k}")
                for k2, c2 in self.apply(k).items():
                    _add(acc, k2, c * c2)
            if acc:
                return b, acc
        return None

    def ranks(self, hbar_split=True):
        """Cohomology dimensions {(degree, ħ-order): dim} when D preserves ħ-order,
        else {(degree, None): dim}."""
        by_deg = self.matrix_by_degree()
        homog = all(k[2] == b[2] for b in self.basis for k in self.apply(b))
        groups = {}
        for d, bs in by_deg.items():
            for b in bs:
                key = (d, b[2] if (homog and hbar_split) else None)
                groups.setdefault(key, []).append(b)
        pos = {}
        for key, bs in groups.items():
            for n, b in enumerate(bs):
                pos[b] = n
        rank_out = {}
        for key, bs in groups.items():
            d, j = key
            tgt_key = (d + 1, j)
            tgt = groups.get(tgt_key, [])
            rows = {}
            for n, b in enumerate(bs):
                img = {pos[k]: c for k, c in self.apply(b).items() if k in self.index}
                if img:
                    rows[n] = img
            rank_out[key] = linalg.rank(rows, (len(bs), len(tgt))) if rows else 0
        out = {}
        for key, bs in groups.items():
            d, j = key
            incoming = rank_out.get((d - 1, j), 0)
            out[key] = len(bs) - rank_out[key] - incoming
        return out

    def dims(self):
        out = {}
        for b in self.basis:
            k = (self.degree(b), b[2])
            out[k] = out.get(k, 0) + 1
        return out


def _wedge_insert(word, c):
    """c ∧ word for even letters in the exterior algebra: (sorted word, sign) or None."""
    if c in word:
        return None
    nw = tuple(sorted((c,) + word))
    return nw, _sgn(nw.index(c))


def ce_differential(h, k_max, words):
    """Chevalley–Eilenberg resolution of the trivial module on Λ(h)⊗U(h), h even:

    x_1∧…∧x_k ⊗ u ↦ Σ_s (-1)^{s+1} (…x̂_s…)⊗x_s u
                     + Σ_{s<t} (-1)^{s+t} [x_s, x_t]∧(…x̂_s…x̂_t…)⊗u.

    `h` is a GradedLieAlgebra in degree 0 with a PBW helper `U`; returns
    {(w, u): {(w', u'): c}} on exterior words w (sorted) and PBW words u.
    """
    U, letters = h
    out = {}
    for k in range(k_max + 1):
        for w in combinations(letters, k):
            for u in words:
                img = {}
                for s_, x in enumerate(w):
                    rest = w[:s_] + w[s_ + 1:]
                    for u2, q in U._normal((x,) + u).items():
                        _add(img, (rest, u2), _sgn(s_) * q)
                for s_ in range(k):
                    for t in range(s_ + 1, k):
                        rest = w[:s_] + w[s_ + 1:t] + w[t + 1:]
                        for c, v in U.L.f.get((w[s_], w[t]), {}).items():
                            ins = _wedge_insert(rest, c)
                            if ins:
                                _add(img, (ins[0], u), _sgn(s_ + t + 1) * ins[1] * v)
                out[(w, u)] = img
    return out


def compare_with_ce(C):
    """Match the ħ⁰ layer of C with the classical CE resolution through the
    letter pairing x_a ↔ ε̃^a. Returns (ok, ratios, witness): ratios[k] is the
    constant D₀ / d_CE on maps out of weight k."""
    partner = {}
    for (i, j), v in C.alpha.items():
        if j in partner:
            raise KoszulError("r is not a matched sum x_a⊗ε^a")
        partner[j] = i
    words = [u for u in C.awords if len(u) < C.L]
    ce = ce_differential((C.U, sorted(C.plus)), len(C.minus), words)

    def to_plus(w):
        xs = [partner[j] for j in w]
        order = sorted(range(len(xs)), key=lambda n: xs[n])
        # reorder odd letters ε̃ to match sorted partner order
        inv = sum(1 for a in range(len(order)) for b in range(a + 1, len(order)) if order[a] > order[b])
        return tuple(sorted(xs)), _sgn(inv)

    ratios = {}
    for w in C.bwords:
        pw, sw = to_plus(w)
        for u in words:
            b = (w, u, 0)
            ours = {}
            for (w2, u2, j), c in C.apply(b).items():
                if j == 0:
                    pw2, sw2 = to_plus(w2)
                    _add(ours, (pw2, u2), c * sw * sw2)
            theirs = ce[(pw, u)]
            keys = set(ours) | set(theirs)
            for key in keys:
                a, t = ours.get(key, ZERO), theirs.get(key, ZERO)
                if not t:
                    return False, ratios, {"map": [list(w), list(u)], "entry": str(key), "ours": fmt(a)}
                q = a / t
                k = len(w)
                if ratios.setdefault(k, q) != q:
                    return False, ratios, {"map": [list(w), list(u)], "entry": str(key),
                                           "ratio": fmt(q), "expected": fmt(ratios[k])}
    return True, ratios, None


def build_twisted_complex(T, S=4, L=4, H=2, twisted=True):
    C = TwistedComplex(T, S, L, H, twisted)
    res = C.d_squared_residual()
    if res:
        b, acc = res
        raise KoszulError(f"D² ≠ 0 on {b}: {sorted(acc.items())[:2]}")
    return C


def euler_check(C, ranks):
    """Σ(-1)^d dim C^d = Σ(-1)^d dim H^d in each ħ-order."""
    chain, coh = {}, {}
    for (d, j), n in C.dims().items():
        chain[j] = chain.get(j, 0) + _sgn(d) * n
    for (d, j), n in ranks.items():
        coh[j] = coh.get(j, 0) + _sgn(d) * n
    return chain == coh, chain, coh


def cohomology(C):
    return C.ranks()


def koszul_suite(T, S=4, L=4, H=2):
    rep = Report("koszul", {"S": S, "L": L, "H": H})
    try:
        C = TwistedComplex(T, S, L, H)
    except KoszulError as exc:
        rep.add(skipped("complex", str(exc)))
        return rep
    rep.add(check_mc(T, H=max(H, 3), word_len=max(L, 4), Q=None))
    rep.info["window_p"] = C.p
    rep.info["chain_dims"] = {f"{d}@{j}": n for (d, j), n in sorted(C.dims().items())}
    res = C.d_squared_residual()
    if res:
        rep.add(failed("d_squared", "D² ≠ 0"))
        return rep
    rep.add(passed("d_squared", f"{len(C.basis)} basis maps"))
    ranks = C.ranks()
    ok_e, chain, coh = euler_check(C, ranks)
    rep.add(passed("euler_characteristic") if ok_e else
            failed("euler_characteristic", "χ(chains) ≠ χ(cohomology)", {"chain": chain, "cohomology": coh}))
    ok, ratios, wit = compare_with_ce(C)
    rep.info["ce_ratios"] = {str(k): fmt(v) for k, v in sorted(ratios.items())}
    rep.add(passed("hbar0_is_ce", "ħ⁰ layer equals the CE resolution up to the weight rescaling in ce_ratios")
            if ok else failed("hbar0_is_ce", "ħ⁰ layer differs from the CE resolution", wit))
    rep.info["cohomology"] = {f"{d}@{j}": n for (d, j), n in sorted(ranks.items()) if n}
    h0 = {j: n for (d, j), n in ranks.items() if d == 0}
    other = {k: n for k, n in ranks.items() if k[0] != 0 and n}
    if all(h0.get(j, 0) == 1 for j in range(H)) and not other:
        rep.add(passed("resolves_ground_ring", f"H⁰ rank 1 in each of {H} ħ-orders, acyclic elsewhere"))
    else:
        rep.add(failed("resolves_ground_ring", "cohomology is not the ground ring",
                       {"cohomology": rep.info["cohomology"]}))
    U0 = TwistedComplex(T, S, L, H, twisted=False, Q=C.Q)
    plain = U0.ranks()
    tot_t, tot_u = sum(ranks.values()), sum(plain.values())
    rep.info["untwisted_cohomology_total"] = tot_u
    abelian = not any(C.U.L.f.get((a, b)) for a in C.plus for b in C.plus)
    if tot_u > tot_t or abelian:
        rep.add(passed("untwisted_contrast", f"untwisted total {tot_u} vs twisted {tot_t}"))
    else:
        rep.add(failed("untwisted_contrast", "removing α did not enlarge the cohomology",
                       {"twisted": tot_t, "untwisted": tot_u}))
    return rep
