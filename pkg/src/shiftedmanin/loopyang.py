"""Truncated loop doubles, Yang's r-matrix and the meromorphic tensor complexes."""

from fractions import Fraction
from math import comb

from .exactnum import ZERO, fmt, rational
from .graded import GradedBasis, SparseTensor
from .liealg import GradedLieAlgebra, ShiftedMetric, lie_suite
from .bialg import ManinTriple
from . import linalg
from .report import Report, failed, passed, skipped


class LoopError(ValueError):
    pass


def _sgn(p):
    return -1 if p & 1 else 1


def _add(acc, key, v):
    w = acc.get(key, ZERO) + v
    if w:
        acc[key] = w
    else:
        acc.pop(key, None)


class BaseAlgebra:
    """A degree-0 Lie algebra g0 with an invariant symmetric nondegenerate form β."""

    def __init__(self, name, labels, brackets, beta, strict=True):
        self.name = name
        self.labels = list(labels)
        self.dim = len(self.labels)
        basis = GradedBasis([(l, 0) for l in self.labels])
        self.lie = GradedLieAlgebra.from_brackets(basis, brackets)
        self.beta = [[rational(beta.get((i, j), beta.get((j, i), 0))) for j in range(self.dim)]
                     for i in range(self.dim)]
        if linalg.rank(self.beta, (self.dim, self.dim)) != self.dim:
            raise LoopError(f"β on {name} is degenerate")
        self.beta_inv = linalg.inverse(self.beta)
        bad = self.invariance_failure()
        if strict and bad:
            raise LoopError(f"β is not invariant on {name}: {bad['detail']}")

    def invariance_failure(self):
        """None, or a witness for β([a,b],c) ≠ β(a,[b,c]) or β asymmetric."""
        n, lab = self.dim, self.labels
        for a in range(n):
            for b in range(n):
                if self.beta[a][b] != self.beta[b][a]:
                    return {"detail": f"β({lab[a]},{lab[b]}) ≠ β({lab[b]},{lab[a]})",
                            "pair": [lab[a], lab[b]]}
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    lhs = sum((v * self.beta[w][c] for w, v in self.lie.f.get((a, b), {}).items()), ZERO)
                    rhs = sum((v * self.beta[a][w] for w, v in self.lie.f.get((b, c), {}).items()), ZERO)
                    if lhs != rhs:
                        return {"detail": f"β([{lab[a]},{lab[b]}],{lab[c]}) ≠ β({lab[a]},[{lab[b]},{lab[c]}])",
                                "triple": [lab[a], lab[b], lab[c]], "lhs": fmt(lhs), "rhs": fmt(rhs)}
        return None

    def br(self, a, b):
        return self.lie.f.get((a, b), {})

    def dual(self, i):
        """b^i = sum_j beta_inv[i][j] b_j, as {j: coeff}."""
        return {j: c for j, c in enumerate(self.beta_inv[i]) if c}

    def casimir(self):
        """Ω = sum_i b_i ⊗ b^i as {(i, j): coeff}."""
        out = {}
        for i in range(self.dim):
            for j, c in self.dual(i).items():
                _add(out, (i, j), c)
        return out


def check_base(g0):
    rep = Report("base", {"g0": g0.name})
    rep.add(lie_suite(g0.lie))
    bad = g0.invariance_failure()
    rep.add(failed("beta_invariant", bad.pop("detail"), bad) if bad else passed("beta_invariant"))
    return rep


def sl2():
    # e, f, h with trace form
    return BaseAlgebra("sl2", ["e", "f", "h"],
                       {(2, 0): {0: 2}, (2, 1): {1: -2}, (0, 1): {2: 1}},
                       {(0, 1): 1, (2, 2): 2})


def abelian_base(n=2):
    labels = [f"a{i + 1}" for i in range(n)]
    return BaseAlgebra(f"abelian{n}", labels, {}, {(i, i): 1 for i in range(n)})


def gl1():
    return BaseAlgebra("gl1", ["u"], {}, {(0, 0): 1})


# ---------------------------------------------------------------------------
# Loop double d(K) = g0((t)) ⊗ Q[ε] truncated to levels -N .. N-1
# ---------------------------------------------------------------------------

def _lab(g0, kind, i, n):
    return ("ε" if kind else "") + g0.labels[i] + f"@{n}"


class LoopTruncation:
    """Window data: ambient basis b_i t^n (kind 0, degree 0) and εb_i t^n
    (kind 1, degree 1) for -N <= n <= N-1."""

    def __init__(self, g0, N):
        if N < 1:
            raise LoopError("truncation N must be positive")
        self.g0 = g0
        self.N = N
        self.keys = []
        for n in range(-N, N):
            for kind in (0, 1):
                for i in range(g0.dim):
                    self.keys.append((kind, i, n))
        self.index = {k: j for j, k in enumerate(self.keys)}
        self.basis = GradedBasis([(_lab(g0, k, i, n), k) for (k, i, n) in self.keys])

    def idx(self, kind, i, n):
        return self.index.get((kind, i, n))

    def in_window(self, n):
        return -self.N <= n < self.N

    def bracket_keys(self, p, q):
        """Bracket of two window basis keys in d((t)), un-truncated: {(kind, i, n): c}."""
        (k1, i, m), (k2, j, n) = p, q
        if k1 and k2:
            return {}
        kind = k1 or k2
        s = 1
        if k1 and not k2:
            # [εx, y] = -[y, εx] = -ε[y, x] = ε[x, y]
            s = 1
        return {(kind, c, m + n): s * v for c, v in self.g0.br(i, j).items()}

    def kappa_keys(self, p, q):
        (k1, i, m), (k2, j, n) = p, q
        if m + n != -1 or k1 == k2:
            return ZERO
        if k1 == 0:
            return self.g0.beta[i][j]
        return -self.g0.beta[i][j]


def build_loop_double(g0, N):
    W = LoopTruncation(g0, N)
    f = {}
    overflow = set()
    for a, p in enumerate(W.keys):
        for b, q in enumerate(W.keys):
            out = W.bracket_keys(p, q)
            if not out:
                continue
            lvl = p[2] + q[2]
            if not W.in_window(lvl):
                overflow.add((a, b))
                continue
            f[(a, b)] = {W.index[k]: v for k, v in out.items()}
    L = GradedLieAlgebra(W.basis, f, overflow)
    kappa = {}
    for a, p in enumerate(W.keys):
        for b, q in enumerate(W.keys):
            v = W.kappa_keys(p, q)
            if v:
                kappa[(a, b)] = v
    # h_minus: d(O) basis; h_plus: matched r-side partners
    minus, plus, plabels, mlabels = [], [], [], []
    for n in range(N):
        for kind in (0, 1):
            for i in range(g0.dim):
                minus.append({W.idx(kind, i, n): Fraction(1)})
                mlabels.append(_lab(g0, kind, i, n))
                dual = g0.dual(i)
                if kind == 1:
                    # partner of εb_i t^n is b^i t^{-n-1}
                    plus.append({W.idx(0, j, -n - 1): c for j, c in dual.items()})
                    plabels.append(f"r[{_lab(g0, 1, i, n)}]")
                else:
                    # partner of b_i t^n is -εb^i t^{-n-1}
                    plus.append({W.idx(1, j, -n - 1): -c for j, c in dual.items()})
                    plabels.append(f"r[{_lab(g0, 0, i, n)}]")
    T = ManinTriple(L, ShiftedMetric(kappa), plus, minus, plabels, mlabels)
    T.window = W
    return T


# ---------------------------------------------------------------------------
# Classical r-matrices r(t₁, t₂) = Ω/(t₁ - t₂) + g(t₁, t₂) on g0
# ---------------------------------------------------------------------------

class DifferenceRMatrix:
    """Pole part from the Casimir of β plus a polynomial tail.

    tail[(i, j, p, q)] is the coefficient of b_i t₁^p ⊗ b_j t₂^q.
    """

    def __init__(self, g0, tail=None, name="yang"):
        self.g0 = g0
        self.name = name
        self.casimir = g0.casimir()
        self.tail = {tuple(k): rational(v) for k, v in (tail or {}).items() if rational(v)}
        for (i, j, p, q) in self.tail:
            if p < 0 or q < 0 or not (0 <= i < g0.dim and 0 <= j < g0.dim):
                raise LoopError(f"bad tail entry {(i, j, p, q)}")

    @classmethod
    def yang(cls, g0):
        return cls(g0, {}, "yang")

    @classmethod
    def from_difference(cls, g0, coeffs, name="tail"):
        """Tail g(t₁ - t₂) = Σ_p G_p (t₁ - t₂)^p with coeffs[p] = {(i, j): c}."""
        tail = {}
        for p, G in coeffs.items():
            for (i, j), c in G.items():
                for a in range(p + 1):
                    _add(tail, (i, j, a, p - a), rational(c) * comb(p, a) * _sgn(p - a))
        return cls(g0, tail, name)

    @property
    def tail_degree(self):
        return max((p + q for (_, _, p, q) in self.tail), default=0)

    @property
    def skew_flag(self):
        """r(t₁,t₂) = -σ r(t₂,t₁); the Casimir part always satisfies it."""
        for (i, j, p, q), c in self.tail.items():
            if self.tail.get((j, i, q, p), ZERO) != -c:
                return False
        return all(self.casimir.get((j, i), ZERO) == c for (i, j), c in self.casimir.items())

    def difference_residual(self):
        """(∂₁ + ∂₂) g as a dict; empty iff the tail depends on t₁ - t₂ only."""
        out = {}
        for (i, j, p, q), c in self.tail.items():
            if p:
                _add(out, (i, j, p - 1, q), p * c)
            if q:
                _add(out, (i, j, p, q - 1), q * c)
        return out

    def terms(self, first_larger, P):
        """Expansion of r(t_a, t_b) as [(i, j, ea, eb, c)] for |t_a| > |t_b| (or the reverse)."""
        out = []
        for (i, j), c in self.casimir.items():
            for n in range(P + 1):
                if first_larger:
                    out.append((i, j, -n - 1, n, c))
                else:
                    out.append((i, j, n, -n - 1, -c))
        for (i, j, p, q), c in self.tail.items():
            out.append((i, j, p, q, c))
        return out

    def to_json(self):
        lab = self.g0.labels
        return {"name": self.name, "g0": self.g0.name,
                "tail": [[lab[i], lab[j], p, q, fmt(c)] for (i, j, p, q), c in sorted(self.tail.items())]}


def _br0(g0, a, b):
    return g0.br(a, b)


def gcybe_residual(r, order, cybe=False):
    """Sum of the three commutators in |t₁| > |t₂| > |t₃|, as {(a, b, c, e1, e2, e3): coeff}
    restricted to |e_v| <= order."""
    g0 = r.g0
    P = 3 * order + 2 + r.tail_degree
    r12 = r.terms(True, P)
    r13 = r12
    r23 = r12
    out = {}

    def keep(e):
        return all(abs(x) <= order for x in e)

    for (i, j, a1, a2, c) in r12:
        for (k, l, b1, b3, d) in r13:
            e = (a1 + b1, a2, b3)
            if keep(e):
                for m, v in _br0(g0, i, k).items():
                    _add(out, (m, j, l) + e, c * d * v)
        for (k, l, b2, b3, d) in r23:
            e = (a1, a2 + b2, b3)
            if keep(e):
                for m, v in _br0(g0, j, k).items():
                    _add(out, (i, m, l) + e, c * d * v)
    if cybe:
        for (k, l, b1, b3, d) in r13:
            for (i, j, a2, a3, c) in r23:
                e = (b1, a2, a3 + b3)
                if keep(e):
                    for m, v in _br0(g0, l, j).items():
                        _add(out, (k, i, m) + e, c * d * v)
    else:
        # r³²(t₃, t₂) with |t₂| > |t₃|: first leg in slot 3, second in slot 2
        r32 = r.terms(False, P)
        for (a, b, e3, e2, c) in r32:
            for (k, l, b1, b3, d) in r13:
                e = (b1, e2, e3 + b3)
                if keep(e):
                    for m, v in _br0(g0, a, l).items():
                        _add(out, (k, b, m) + e, c * d * v)
    return out


def check_gcybe(r, order=3):
    rep = Report("gcybe", {"order": order, "r": r.name})
    lab = r.g0.labels

    def wit(res):
        key, v = sorted(res.items())[0]
        a, b, c, e1, e2, e3 = key
        return {"entry": [lab[a], lab[b], lab[c]], "exponents": [e1, e2, e3], "value": fmt(v),
                "nonzero_entries": len(res)}

    res = gcybe_residual(r, order)
    rep.add(failed("gcybe", "generalized CYBE residual is nonzero", wit(res)) if res else
            passed("gcybe", f"all monomials with |exponent| <= {order}"))
    rep.info["skew"] = r.skew_flag
    if r.skew_flag:
        res = gcybe_residual(r, order, cybe=True)
        rep.add(failed("cybe", "CYBE residual is nonzero", wit(res)) if res else passed("cybe"))
    else:
        rep.add(skipped("cybe", "r is not skew-symmetric"))
    return rep


def lift_to_shifted_r(r, N):
    """𝐫(t₁,t₂) = (1⊗ε) r(t₁,t₂) + (ε⊗1) σ r(t₂,t₁) expanded in |t₁| > |t₂|, on the window.

    Returns (tensor over the LoopTruncation basis, list of dropped keys)."""
    W = LoopTruncation(r.g0, N)
    out, dropped = {}, []

    def put(k1, k2, c):
        a, b = W.index.get(k1), W.index.get(k2)
        if a is None or b is None:
            dropped.append((k1, k2))
            return
        _add(out, (a, b), c)

    for (i, j), c in r.casimir.items():
        for n in range(N):
            put((0, i, -n - 1), (1, j, n), c)
            put((1, j, -n - 1), (0, i, n), -c)
    for (i, j, p, q), c in r.tail.items():
        put((0, i, p), (1, j, q), c)
        # σ r(t₂, t₁): tail b_i t₂^p ⊗ b_j t₁^q becomes b_j t₁^q ⊗ b_i t₂^p
        put((1, j, q), (0, i, p), c)
    return SparseTensor(W.basis, 2, out), dropped


def translation_derivation(W, key):
    """T(x t^n) = n x t^{n-1} on a window key; returns (key', coeff) or None."""
    kind, i, n = key
    if n == 0:
        return None
    return (kind, i, n - 1), Fraction(n)


def check_translation(T, r=None, Q=None):
    """[T, d_r] = 0 on O-side generators and (∂₁ + ∂₂)𝐫 = 0 on window entries."""
    from .uea import Quantization, UEAElement
    W = T.window
    rep = Report("translation", {"N": W.N})
    if Q is None:
        from .rmat import RMatrix
        Q = Quantization(T, 3, 4, r=RMatrix(lift_to_shifted_r(r, W.N)[0]) if r is not None else None)
    U = Q.U

    def T_elem(x):
        out = U.zero()
        for (h, w), c in x.terms.items():
            for pos, a in enumerate(w):
                hit = translation_derivation(W, W.keys[a])
                if hit is None:
                    continue
                k2, f = hit
                b = W.index.get(k2)
                if b is None:
                    raise LoopError("translation left the window")
                left = UEAElement(U, {(0, w[:pos]): Fraction(1)})
                right = UEAElement(U, {(0, w[pos + 1:]): Fraction(1)})
                out = out + left * UEAElement(U, {(h, (b,)): c * f}) * right
        return out

    bad = None
    count = skipped_n = 0
    reach = r.tail_degree if r is not None else 0
    for idx, key in enumerate(W.keys):
        if key[2] < 0:
            continue
        if key[2] + reach >= W.N:
            # the tail brackets this generator out of the window
            skipped_n += 1
            continue
        x = U.gen(idx)
        lhs = T_elem(Q.d(x))
        rhs = Q.d(T_elem(x))
        count += 1
        if lhs != rhs:
            bad = key
            break
    rep.add(failed("T_commutes_with_dr", f"[T, d_r]({_lab(W.g0, *bad)}) ≠ 0") if bad else
            passed("T_commutes_with_dr", f"{count} O-side generators",
                   boundary_skipped=skipped_n))
    R = lift_to_shifted_r(r, W.N)[0].entries if r is not None else Q.R
    res = tensor_translation_residual(W, R)
    if res:
        (a, b), v = sorted(res.items())[0]
        rep.add(failed("difference_dependence", "(∂₁+∂₂)𝐫 ≠ 0",
                       {"entry": [W.basis.labels[a], W.basis.labels[b]], "value": fmt(v)}))
    else:
        rep.add(passed("difference_dependence", "(∂₁+∂₂)𝐫 = 0 on window entries"))
    return rep


def tensor_translation_residual(W, R):
    out = {}
    for (a, b), c in R.items():
        for slot in (0, 1):
            key = W.keys[a] if slot == 0 else W.keys[b]
            kind, i, n = key
            if n == 0:
                continue
            k2 = W.index.get((kind, i, n - 1))
            if k2 is None:
                continue   # leaves the window
            _add(out, (k2, b) if slot == 0 else (a, k2), n * c)
    return out


def check_r_difference(r):
    rep = Report("difference_dependence", {"r": r.name})
    res = r.difference_residual()
    if res:
        (i, j, p, q), v = sorted(res.items())[0]
        lab = r.g0.labels
        rep.add(failed("tail_difference", "(∂₁+∂₂) g ≠ 0",
                       {"entry": [lab[i], lab[j]], "exponents": [p, q], "value": fmt(v)}))
    else:
        rep.add(passed("tail_difference"))
    return rep


# ---------------------------------------------------------------------------
# 𝐫(t₁ + z - t₂) over O-side generators
# ---------------------------------------------------------------------------

def gbinom(e, m):
    """Generalized binomial coefficient C(e, m) for integer e, m >= 0."""
    num = 1
    for k in range(m):
        num *= e - k
    return Fraction(num, 1) / Fraction(_fact(m))


def _fact(m):
    out = 1
    for k in range(2, m + 1):
        out *= k
    return out


class MeromorphicR:
    """terms[zexp] = {(key1, key2): coeff}, keys (kind, i, n) with n >= 0."""

    def __init__(self, r, K):
        if K < 1:
            raise LoopError("pole bound K must be positive")
        self.r = r
        self.K = K
        terms = {}
        for k in range(K):
            for j in range(k + 1):
                c0 = comb(k, j) * _sgn(k - j)
                for (a, b), c in r.casimir.items():
                    z = terms.setdefault(-k - 1, {})
                    _add(z, ((0, a, k - j), (1, b, j)), c0 * c)
                    _add(z, ((1, a, k - j), (0, b, j)), -c0 * c)
        for (i, j, p, q), c in r.tail.items():
            # (1⊗ε) g(t₁+z, t₂) and (ε⊗1) σ g(t₂, t₁+z)
            for m in range(p + 1):
                z = terms.setdefault(p - m, {})
                _add(z, ((0, i, m), (1, j, q)), comb(p, m) * c)
            for m in range(q + 1):
                z = terms.setdefault(q - m, {})
                _add(z, ((1, j, m), (0, i, p)), comb(q, m) * c)
        self.terms = {e: t for e, t in terms.items() if t}

    def required_pole_bound(self, KM, KN):
        return KM + KN - 1

    def check_bound(self, KM, KN):
        need = self.required_pole_bound(KM, KN)
        if self.r.casimir and self.K < need:
            raise LoopError(f"pole bound K={self.K} is too small for modules with smoothness "
                            f"{KM}, {KN}; need K >= {need}")

    def to_json(self):
        def kl(k):
            return _lab(self.r.g0, *k)
        return {str(e): [[kl(a), kl(b), fmt(c)] for (a, b), c in sorted(t.items())]
                for e, t in sorted(self.terms.items())}


def meromorphic_r(r, K):
    return MeromorphicR(r, K)


def meromorphic_from_canonical(T, K):
    """Re-expand canonical 𝐫 of the loop double: the r-side leg X t^{-m-1} becomes
    Σ_l C(-m-1, l) X t^l z^{-m-1-l}. Exact for pole orders <= N."""
    W = T.window
    from .rmat import canonical_r
    R = canonical_r(T).tensor.entries
    terms = {}
    for (a, b), c in R.items():
        (k1, i, n1), k2 = W.keys[a], W.keys[b]
        if n1 >= 0 or k2[2] < 0:
            raise LoopError("canonical 𝐫 is not r-side ⊗ O-side")
        m = -n1 - 1
        for l in range(K):
            e = -m - 1 - l
            if -e > K:
                break
            _add(terms.setdefault(e, {}), ((k1, i, l), k2), gbinom(-m - 1, l) * c)
    return {e: t for e, t in terms.items() if t}


# ---------------------------------------------------------------------------
# Level deformation d_k x_{a,n} = -ħ n k εx_{a,n-1}
# ---------------------------------------------------------------------------

class LevelError(LoopError):
    pass


def level_generator_image(W, key, k):
    """δ_k on a key: {key': coeff} with d_k = -ħ δ_k."""
    kind, i, n = key
    if kind == 1 or n == 0 or not k:
        return {}
    return {(1, i, n - 1): Fraction(n) * k}


class LeveledDifferential:
    """d = d_r + d_k on U(window) elements (O-side words)."""

    def __init__(self, T, k, r=None, Q=None, H=3, word_len=4):
        from .uea import Quantization
        k = rational(k)
        if r is not None and k and not r.skew_flag:
            raise LevelError("level deformation needs a skew-symmetric r "
                             "(d_r + d_k squares to zero if and only if r is skew)")
        self.T = T
        self.W = T.window
        self.k = k
        self.Q = Q or Quantization(T, H, word_len)
        self.U = self.Q.U

    def dk(self, x):
        from .uea import UEAElement
        U, W = self.U, self.W
        out = {}
        for (h, w), c in x.terms.items():
            if h + 1 >= U.H:
                continue
            before = 0
            for pos, a in enumerate(w):
                for key2, f in level_generator_image(W, W.keys[a], self.k).items():
                    b = W.index.get(key2)
                    left = UEAElement(U, {(0, w[:pos]): Fraction(1)})
                    right = UEAElement(U, {(0, w[pos + 1:]): Fraction(1)})
                    mid = UEAElement(U, {(h + 1, (b,)): -f * c * _sgn(before)})
                    for kk, v in (left * mid * right).terms.items():
                        _add(out, kk, v)
                before += U.deg[a]
        return UEAElement(U, out)

    def __call__(self, x):
        return self.Q.d(x) + self.dk(x)


def level_deform(T, k, r=None, Q=None):
    rep = Report("level", {"k": fmt(rational(k)), "N": T.window.N})
    try:
        D = LeveledDifferential(T, k, r, Q)
    except LevelError as exc:
        rep.add(failed("skew_hypothesis", str(exc)))
        return rep, None
    W, U = D.W, D.U
    gens = [i for i, key in enumerate(W.keys) if key[2] >= 0]
    bad = next((i for i in gens if not D(D(U.gen(i))).is_zero()), None)
    rep.add(failed("square_zero", f"(d_r + d_k)² ≠ 0 on {W.basis.labels[bad]}") if bad is not None
            else passed("square_zero", f"{len(gens)} O-side generators"))
    bad = next((i for i in gens if not D.dk(D.dk(U.gen(i))).is_zero()), None)
    rep.add(failed("dk_square_zero", f"d_k² ≠ 0 on {W.basis.labels[bad]}") if bad is not None
            else passed("dk_square_zero"))
    return rep, D


def check_lowest_order(g0):
    """At N = 1 the loop double is the double of the r-side with its induced cobracket."""
    from .bialg import ShiftedBialgebra, build_double, cobracket_from_triple
    T = build_loop_double(g0, 1)
    rep = Report("lowest_order", {"g0": g0.name})
    h = ShiftedBialgebra(T.restrict("plus"), cobracket_from_triple(T, "plus"))
    D = build_double(h)
    n = len(T.plus)
    images = list(T.plus) + list(T.minus)
    L, G = T.double, D.double
    bad = None
    for a in range(2 * n):
        for b in range(2 * n):
            lhs = {}
            for c, v in G.f.get((a, b), {}).items():
                for j, u in images[c].items():
                    _add(lhs, j, v * u)
            rhs = L.bracket_dict(images[a], images[b])
            if lhs != rhs:
                bad = (G.basis.labels[a], G.basis.labels[b])
                break
            if D.metric.pair({a: Fraction(1)}, {b: Fraction(1)}) != T.metric.pair(images[a], images[b]):
                bad = (G.basis.labels[a], G.basis.labels[b], "pairing")
                break
        if bad:
            break
    rep.add(failed("double_matches", "bracket or pairing differs", {"pair": list(bad)}) if bad
            else passed("double_matches", f"{(2 * n) ** 2} basis pairs"))
    return rep


def check_truncation_coherence(g0, N, H=3, word_len=4):
    """Window N results embed into window N + 1 results."""
    from .rmat import canonical_r
    from .uea import Quantization
    rep = Report("truncation_coherence", {"g0": g0.name, "N": N})
    A, B = build_loop_double(g0, N), build_loop_double(g0, N + 1)
    WA, WB = A.window, B.window
    emb = [WB.index[k] for k in WA.keys]
    bad = None
    for (a, b), out in A.double.f.items():
        mapped = {emb[c]: v for c, v in out.items()}
        if B.double.f.get((emb[a], emb[b]), {}) != mapped:
            bad = (WA.basis.labels[a], WA.basis.labels[b])
            break
    rep.add(failed("structure_constants", "bracket differs", {"pair": list(bad)}) if bad
            else passed("structure_constants"))
    RA = canonical_r(A).tensor.entries
    RB = canonical_r(B).tensor.entries
    inside = {(emb[a], emb[b]): v for (a, b), v in RA.items()}
    common = {k: v for k, v in RB.items() if k[0] in set(emb) and k[1] in set(emb)}
    rep.add(passed("r_entries", f"{len(inside)} entries") if inside == common else
            failed("r_entries", "𝐫 entries differ on the common window"))
    QA, QB = Quantization(A, H, word_len), Quantization(B, H, word_len)
    bad = None
    for i, key in enumerate(WA.keys):
        if key[2] < 0:
            continue
        da = QA.d(QA.U.gen(i))
        db = QB.d(QB.U.gen(emb[i]))
        mapped = {(h, tuple(emb[x] for x in w)): c for (h, w), c in da.terms.items()}
        if mapped != db.terms:
            bad = _lab(g0, *key)
            break
    rep.add(failed("differential", f"d({bad}) differs") if bad else
            passed("differential", "O-side generators"))
    MA, MB = meromorphic_r(DifferenceRMatrix.yang(g0), N), meromorphic_from_canonical(B, N)
    rep.add(passed("meromorphic_strata") if MA.terms == MB else
            failed("meromorphic_strata", "𝐫(z) strata differ"))
    return rep
