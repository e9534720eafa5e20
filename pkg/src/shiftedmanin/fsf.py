"""Finite smooth modules over the truncated loop double and their meromorphic tensor products.

Operators are sparse matrices {row: {col: Fraction}}. Operator series carry keys
(ħ-power, e_1, ..., e_v) over v auxiliary variables.
"""

from fractions import Fraction
from itertools import product
from math import comb

from .exactnum import ZERO, fmt, rational
from .loopyang import LoopError, LeveledDifferential, _lab, _sgn, gbinom, level_generator_image
from .report import Report, failed, passed


class ModuleError(LoopError):
    pass


class WindowExhausted(LoopError):
    def __init__(self, what, need, have):
        super().__init__(f"{what}: need pole bound >= {need}, have {have}")
        self.need = need
        self.have = have


# ---------------------------------------------------------------------------
# sparse matrices
# ---------------------------------------------------------------------------

def mat_mul(A, B):
    out = {}
    for r, row in A.items():
        acc = {}
        for k, a in row.items():
            brow = B.get(k)
            if brow:
                for c, b in brow.items():
                    acc[c] = acc.get(c, ZERO) + a * b
        acc = {c: v for c, v in acc.items() if v}
        if acc:
            out[r] = acc
    return out


def mat_axpy(acc, A, s=1):
    for r, row in A.items():
        arow = acc.setdefault(r, {})
        for c, v in row.items():
            w = arow.get(c, ZERO) + s * v
            if w:
                arow[c] = w
            else:
                arow.pop(c, None)
        if not arow:
            del acc[r]
    return acc


def mat_scale(A, s):
    if not s:
        return {}
    return {r: {c: s * v for c, v in row.items()} for r, row in A.items()}


def mat_from_entries(entries):
    out = {}
    for r, c, v in entries:
        v = rational(v)
        if v:
            out.setdefault(int(r), {})[int(c)] = out.get(int(r), {}).get(int(c), ZERO) + v
    return out


def mat_entries(A):
    return [[r, c, fmt(v)] for r in sorted(A) for c, v in sorted(A[r].items())]


def identity(n):
    return {i: {i: Fraction(1)} for i in range(n)}


def _first_entry(A):
    r = min(A)
    c = min(A[r])
    return r, c, A[r][c]


# ---------------------------------------------------------------------------
# operator series
# ---------------------------------------------------------------------------

class OpSeries:
    """Σ ħ^h z^e A_{h,e}; exponents above caps[i] and ħ-powers >= H are dropped."""

    def __init__(self, nvars, H, caps=None, terms=None):
        self.nvars = nvars
        self.H = H
        self.caps = tuple(caps) if caps is not None else (None,) * nvars
        self.terms = {}
        for k, A in (terms or {}).items():
            self.add(k, A)

    def _ok(self, key):
        if key[0] >= self.H:
            return False
        return all(c is None or e <= c for e, c in zip(key[1:], self.caps))

    def like(self, terms=None):
        return OpSeries(self.nvars, self.H, self.caps, terms)

    def add(self, key, A, s=1):
        if not A or not s or not self._ok(key):
            return self
        acc = self.terms.setdefault(key, {})
        mat_axpy(acc, A, s)
        if not acc:
            del self.terms[key]
        return self

    def __add__(self, other):
        out = self.like(self.terms)
        for k, A in other.terms.items():
            out.add(k, A)
        return out

    def __sub__(self, other):
        out = self.like(self.terms)
        for k, A in other.terms.items():
            out.add(k, A, -1)
        return out

    def scale(self, s, h=0):
        out = self.like()
        for k, A in self.terms.items():
            out.add((k[0] + h,) + k[1:], A, s)
        return out

    def __mul__(self, other):
        out = self.like()
        for k1, A in self.terms.items():
            for k2, B in other.terms.items():
                key = tuple(a + b for a, b in zip(k1, k2))
                if self._ok(key):
                    out.add(key, mat_mul(A, B))
        return out

    def conj(self, P, Pinv):
        return self.like({k: mat_mul(mat_mul(P, A), Pinv) for k, A in self.terms.items()})

    def flip(self, var):
        """z_var -> -z_var."""
        return self.like({k: mat_scale(A, _sgn(k[1 + var])) for k, A in self.terms.items()})

    def restricted(self, bounds):
        """Keys whose exponents are <= bounds (None: no bound)."""
        return {k: A for k, A in self.terms.items()
                if all(b is None or e <= b for e, b in zip(k[1:], bounds))}

    def strata(self):
        return sorted({k[1:] for k in self.terms})

    def is_zero(self):
        return not self.terms


def graded_commutator(A, da, B, db):
    return A * B - (B * A).scale(_sgn(da * db))


def _series_witness(S, bounds=None, labels=None):
    terms = S.restricted(bounds) if bounds is not None else S.terms
    if not terms:
        return None
    k = min(terms)
    r, c, v = _first_entry(terms[k])
    out = {"hbar": k[0], "exponents": list(k[1:]), "row": r, "col": c, "value": fmt(v),
           "nonzero_strata": len(terms)}
    if labels:
        out["row"], out["col"] = labels[r], labels[c]
    return out


# ---------------------------------------------------------------------------
# modules
# ---------------------------------------------------------------------------

def parse_key(g0, label):
    kind = 0
    if label.startswith("ε"):
        kind, label = 1, label[1:]
    name, _, n = label.rpartition("@")
    if name not in g0.labels or not n.lstrip("-").isdigit():
        raise ModuleError(f"bad generator label {label!r}")
    return (kind, g0.labels.index(name), int(n))


class FSFModule:
    """A finite module with action matrices ρ(x_{a,n}), ρ(εx_{a,n}) and differential d_M.

    Generators at level >= K act by zero.
    """

    def __init__(self, name, g0, labels, degrees, K, action, dM=None):
        if K < 1:
            raise ModuleError("smoothness bound must be positive")
        self.name = name
        self.g0 = g0
        self.labels = list(labels)
        self.degrees = list(degrees)
        self.dim = len(self.labels)
        self.K = K
        self.action = {}
        for key, A in action.items():
            if key[2] < 0:
                raise ModuleError(f"{name}: r-side generator in an action table")
            if key[2] >= K and A:
                raise ModuleError(f"{name}: {_lab(g0, *key)} acts nontrivially above the smoothness bound")
            self._check_degree(A, key[0], _lab(g0, *key))
            if A:
                self.action[key] = A
        self.dM = {h: A for h, A in (dM or {}).items() if A}
        for h, A in self.dM.items():
            self._check_degree(A, 1, "d_M")

    def _check_degree(self, A, deg, what):
        for r, row in A.items():
            for c in row:
                if not (0 <= r < self.dim and 0 <= c < self.dim):
                    raise ModuleError(f"{self.name}: {what} index out of range")
                if self.degrees[r] != self.degrees[c] + deg:
                    raise ModuleError(f"{self.name}: {what} is not homogeneous of degree {deg}")

    def rho(self, key):
        if key[2] >= self.K:
            return {}
        return self.action.get(key, {})

    def d_series(self, H):
        return OpSeries(0, H, terms={(h,): A for h, A in self.dM.items()})

    def rho_element(self, x, W, H):
        """Action of a U(window) element as an ħ-series of matrices."""
        out = OpSeries(0, H)
        for (h, word), c in x.terms.items():
            if h >= H:
                continue
            A = identity(self.dim)
            for a in word:
                A = mat_mul(A, self.rho(W.keys[a]))
                if not A:
                    break
            out.add((h,), A, c)
        return out

    # constructors

    @classmethod
    def evaluation(cls, g0, rep, name="ev", labels=None):
        """Pull back a g0-module along t -> 0; ε-generators act by zero."""
        dim = 1 + max((max(r, max(row)) for A in rep.values() for r, row in A.items()), default=-1)
        labels = labels or [f"v{i + 1}" for i in range(dim)]
        action = {(0, i, 0): A for i, A in rep.items()}
        return cls(name, g0, labels, [0] * len(labels), 1, action)

    @classmethod
    def jet(cls, g0, rep, K=2, level=0, name="jet", vlabels=None, stable=None):
        """V ⊗ Q[s, S]/(s^K, S²) with x_{a,n} ↦ ρ(b_a)⊗s^n and εx_{a,n} ↦ ρ(b_a)⊗Ss^n.

        d_M = ħk(1⊗D) with D(s) = -S, D(S) = 0. The ideal (s^K) is not D-stable, so
        with a nonzero level s^{K-1}S is also killed (stable defaults to level != 0).
        """
        k = rational(level)
        if stable is None:
            stable = bool(k)
        KS = K - 1 if stable else K
        dimV = 1 + max((max(r, max(row)) for A in rep.values() for r, row in A.items()), default=-1)
        vlabels = vlabels or [f"v{i + 1}" for i in range(dimV)]
        alab = [("s^%d" % j, 0) for j in range(K)] + [("Ss^%d" % j, 1) for j in range(KS)]
        m = len(alab)
        labels = [f"{v}⊗{a}" for v in vlabels for a, _ in alab]
        degrees = [d for _ in vlabels for _, d in alab]

        def kron(A, B):
            return {r * m + ra: {c * m + ca: v * w for c, v in row.items() for ca, w in B[ra].items()}
                    for r, row in A.items() for ra in B}

        def mult_s(n, with_S):
            out = {}
            for j in range(K):
                if with_S:
                    if n + j < KS:
                        out[K + n + j] = {j: Fraction(1)}
                elif n + j < K:
                    out[n + j] = {j: Fraction(1)}
                    if j < KS and n + j < KS:
                        out[K + n + j] = {K + j: Fraction(1)}
            return out

        action = {}
        for i, A in rep.items():
            for n in range(K):
                action[(0, i, n)] = kron(A, mult_s(n, False))
                action[(1, i, n)] = kron(A, mult_s(n, True))
        dM = {}
        if k:
            D = {}
            for j in range(1, K):
                D.setdefault(K + j - 1, {})[j] = Fraction(-j)
            dM[1] = mat_scale(kron(identity(dimV), D), k)
        return cls(name, g0, labels, degrees, K, action, dM)

    @classmethod
    def trivial(cls, g0, name="trivial"):
        return cls(name, g0, ["1"], [0], 1, {})

    @classmethod
    def from_json(cls, data, g0):
        try:
            basis = data["basis"]
            labels = [b[0] for b in basis]
            degrees = [int(b[1]) for b in basis]
            action = {parse_key(g0, k): mat_from_entries(v) for k, v in data.get("action", {}).items()}
            dM = {int(h): mat_from_entries(v) for h, v in data.get("differential", {}).items()}
            return cls(data.get("name", "module"), g0, labels, degrees, int(data["smoothness"]),
                       action, dM)
        except (KeyError, TypeError, IndexError) as exc:
            raise ModuleError(f"malformed module definition: {exc}") from exc

    def to_json(self):
        return {"name": self.name, "g0": self.g0.name, "smoothness": self.K,
                "basis": [[l, d] for l, d in zip(self.labels, self.degrees)],
                "action": {_lab(self.g0, *k): mat_entries(A) for k, A in sorted(self.action.items())},
                "differential": {str(h): mat_entries(A) for h, A in sorted(self.dM.items())}}


SL2_FUNDAMENTAL = {0: {0: {1: Fraction(1)}}, 1: {1: {0: Fraction(1)}},
                   2: {0: {0: Fraction(1)}, 1: {1: Fraction(-1)}}}


def check_module(M, D, H=3):
    """Lie relations on the window, d_M² = 0, and [d_M, ρ(a)] = ρ(Da) on O-side generators."""
    W = D.W
    rep = Report(f"module[{M.name}]", {"dim": M.dim, "K": M.K})
    if M.K > W.N:
        rep.add(failed("smoothness_vs_window", f"K={M.K} exceeds the window N={W.N}"))
        return rep
    dM = M.d_series(H)
    sq = dM * dM
    rep.add(failed("d_squared", "d_M² ≠ 0", _series_witness(sq, labels=M.labels)) if sq.terms
            else passed("d_squared"))
    okeys = [k for k in W.keys if k[2] >= 0]
    bad = None
    for p in okeys:
        for q in okeys:
            A, B = M.rho(p), M.rho(q)
            lhs = mat_axpy(mat_mul(A, B), mat_mul(B, A), -_sgn(p[0] * q[0]))
            rhs = {}
            for key, v in W.bracket_keys(p, q).items():
                mat_axpy(rhs, M.rho(key), v)
            diff = mat_axpy(lhs, rhs, -1)
            if diff:
                r, c, v = _first_entry(diff)
                bad = (p, q, {"row": M.labels[r], "col": M.labels[c], "value": fmt(v)})
                break
        if bad:
            break
    rep.add(failed("lie_relations", f"ρ([{_lab(M.g0, *bad[0])}, {_lab(M.g0, *bad[1])}]) ≠ [ρ, ρ]", bad[2])
            if bad else passed("lie_relations", f"{len(okeys) ** 2} generator pairs"))
    U = D.U
    bad = None
    for p in okeys:
        x = U.gen(W.index[p])
        lhs = graded_commutator(dM, 1, M.rho_element(x, W, H), p[0])
        rhs = M.rho_element(D(x), W, H)
        diff = lhs - rhs
        if diff.terms:
            bad = (p, _series_witness(diff, labels=M.labels))
            break
    rep.add(failed("dg_compatible", f"[d_M, ρ({_lab(M.g0, *bad[0])})] ≠ ρ(d ·)", bad[1]) if bad
            else passed("dg_compatible", f"{len(okeys)} O-side generators"))
    return rep


# ---------------------------------------------------------------------------
# tensor products
# ---------------------------------------------------------------------------

def _lin_power(shift, l):
    """(Σ_i shift[i] z_i)^l as {exponent tuple: coeff}."""
    out = {(0,) * len(shift): Fraction(1)}
    for _ in range(l):
        nxt = {}
        for e, c in out.items():
            for i, s in enumerate(shift):
                if s:
                    e2 = e[:i] + (e[i] + 1,) + e[i + 1:]
                    nxt[e2] = nxt.get(e2, ZERO) + c * s
        out = {e: c for e, c in nxt.items() if c}
    return out


class TensorSpace:
    def __init__(self, mods):
        self.mods = list(mods)
        self.dims = [m.dim for m in self.mods]
        self.dim = 1
        for d in self.dims:
            self.dim *= d
        self.strides = []
        s = 1
        for d in reversed(self.dims):
            self.strides.insert(0, s)
            s *= d
        self._cache = {}
        self.labels = ["⊗".join(m.labels[i] for m, i in zip(self.mods, t))
                       for t in product(*[range(d) for d in self.dims])]

    def place(self, A, deg, slot):
        """1⊗..⊗A⊗..⊗1 with the Koszul sign (-1)^{deg·(degrees of earlier factors)}."""
        out = {}
        others = [range(d) if s != slot else (0,) for s, d in enumerate(self.dims)]
        st = self.strides[slot]
        for t in product(*others):
            before = sum(self.mods[s].degrees[t[s]] for s in range(slot))
            sg = _sgn(deg * before)
            base = sum(i * self.strides[s] for s, i in enumerate(t))
            for r, row in A.items():
                orow = out.setdefault(base + r * st, {})
                for c, v in row.items():
                    orow[base + c * st] = sg * v
        return out

    def rho(self, slot, key):
        ck = (slot, key)
        if ck not in self._cache:
            A = self.mods[slot].rho(key)
            self._cache[ck] = self.place(A, key[0], slot) if A else {}
        return self._cache[ck]

    def d_local(self, slot, H, nvars):
        out = OpSeries(nvars, H)
        for h, A in self.mods[slot].dM.items():
            out.add((h,) + (0,) * nvars, self.place(A, 1, slot))
        return out

    def swap(self):
        """Koszul swap M⊗N -> N⊗M (n = 2)."""
        if len(self.mods) != 2:
            raise ModuleError("swap needs two factors")
        M, N = self.mods
        out = {}
        for i in range(M.dim):
            for j in range(N.dim):
                out.setdefault(j * M.dim + i, {})[i * N.dim + j] = Fraction(_sgn(M.degrees[i] * N.degrees[j]))
        return out


def shifted_legs(key, slot, shift):
    """τ on one slot: x_{a,n} ↦ Σ_l C(n, l) shift^l x_{a,n-l}."""
    kind, i, n = key
    out = []
    for l in range(n + 1):
        for e, c in _lin_power(shift, l).items():
            out.append((slot, (kind, i, n - l), e, comb(n, l) * c))
    return out


def plain_leg(slot, nvars):
    return lambda key: [(slot, key, (0,) * nvars, Fraction(1))]


def pair_operator(space, R, leg1, leg2, zexpand, nvars, H, caps):
    """-2ħ Σ_e zexpand(e) Σ c (leg1 ⊗ leg2) as an operator series."""
    out = OpSeries(nvars, H, caps)
    for e, tens in R.terms.items():
        zx = zexpand(e)
        if not zx:
            continue
        for (p, q), c in tens.items():
            for s1, k1, e1, c1 in leg1(p):
                A = space.rho(s1, k1)
                if not A:
                    continue
                for s2, k2, e2, c2 in leg2(q):
                    B = space.rho(s2, k2)
                    if not B:
                        continue
                    if s1 >= s2:
                        raise ModuleError("legs of 𝐫 must land in increasing slots")
                    AB = mat_mul(A, B)
                    if not AB:
                        continue
                    for ez, cz in zx.items():
                        key = (1,) + tuple(a + b + d for a, b, d in zip(e1, e2, ez))
                        out.add(key, AB, -2 * c * c1 * c2 * cz)
    return out


def expand_power(coeffs, e, region_first, cap):
    """(a z_i + b z_j)^e for a two-term linear form, expanded with z_{region_first} large.

    coeffs is a tuple over variables with exactly two nonzero entries (or one)."""
    nz = [i for i, c in enumerate(coeffs) if c]
    nv = len(coeffs)
    if len(nz) == 1:
        i = nz[0]
        c = Fraction(coeffs[i]) ** e
        return {tuple(e if k == i else 0 for k in range(nv)): c}
    big = region_first
    small = nz[0] if nz[1] == big else nz[1]
    a, b = Fraction(coeffs[big]), Fraction(coeffs[small])
    if e < 0 and cap[small] is None:
        raise ModuleError("expansion in a variable without a degree cap does not terminate")
    out = {}
    m = 0
    while True:
        if e >= 0 and m > e:
            break
        if cap[small] is not None and m > cap[small]:
            break
        c = gbinom(e, m) * a ** (e - m) * b ** m
        if c:
            key = [0] * nv
            key[big] = e - m
            key[small] = m
            out[tuple(key)] = c
        m += 1
    return out


class MeromorphicTensor:
    """d = Σ d_{M_i} - 2ħ Σ_{i<j} 𝐫^{ij}(linear form in the variables) and the shifted action.

    pairs: [(i, j, coeffs, big_var)]: the z-argument of 𝐫^{ij} is Σ coeffs[v] z_v, expanded
    with variable big_var dominant. shifts[i] is the linear form translating slot i.
    """

    def __init__(self, mods, R, nvars, shifts, pairs, H=3, caps=None, name="tensor"):
        self.mods = list(mods)
        self.space = TensorSpace(mods)
        self.R = R
        self.nvars = nvars
        self.shifts = shifts
        self.pairs = pairs
        self.H = H
        self.caps = tuple(caps) if caps is not None else (None,) * nvars
        self.name = name
        for (i, j, _, _) in pairs:
            R.check_bound(self.mods[i].K, self.mods[j].K)
        self.d = self._differential()

    def _differential(self):
        sp, nv = self.space, self.nvars
        out = OpSeries(nv, self.H, self.caps)
        for s in range(len(self.mods)):
            out = out + sp.d_local(s, self.H, nv)
        for (i, j, coeffs, big) in self.pairs:
            out = out + pair_operator(sp, self.R, plain_leg(i, nv), plain_leg(j, nv),
                                      lambda e, c=coeffs, b=big: expand_power(c, e, b, self.caps),
                                      nv, self.H, self.caps)
        return out

    def act_key(self, key):
        out = OpSeries(self.nvars, self.H, self.caps)
        for s, shift in enumerate(self.shifts):
            for slot, k2, e, c in shifted_legs(key, s, shift):
                A = self.space.rho(slot, k2)
                if A:
                    out.add((0,) + e, A, c)
        return out

    def act(self, x, W):
        out = OpSeries(self.nvars, self.H, self.caps)
        cache = {}
        for (h, word), c in x.terms.items():
            if h >= self.H:
                continue
            acc = OpSeries(self.nvars, self.H, self.caps, {(h,) + (0,) * self.nvars: identity(self.space.dim)})
            for a in word:
                if a not in cache:
                    cache[a] = self.act_key(W.keys[a])
                acc = acc * cache[a]
                if not acc.terms:
                    break
            out = out + acc.scale(c)
        return out

    def pole_strata(self):
        return sorted({k[1:] for k in self.d.terms if k[0] >= 1 and any(e < 0 for e in k[1:])})


def two_fold(M, N, R, H=3):
    return MeromorphicTensor([M, N], R, 1, [(1,), (0,)], [(0, 1, (1,), 0)], H, name=f"{M.name}⊗{N.name}")


def one_fold(M, R, H=3):
    return MeromorphicTensor([M], R, 0, [()], [], H, name=M.name)


def three_fold(M, N, P, R, H=3, cap=None):
    """M_{z+w}⊗N_w⊗P₀ expanded with |w| > |z|."""
    return MeromorphicTensor([M, N, P], R, 2, [(1, 1), (0, 1), (0, 0)],
                             [(0, 1, (1, 0), 0), (0, 2, (1, 1), 1), (1, 2, (0, 1), 1)],
                             H, caps=(cap, None), name=f"{M.name}⊗{N.name}⊗{P.name}")


def _exact_bounds(MT, neg):
    return tuple(None if c is None else c - neg for c in MT.caps)


def check_tensor(MT, D, bounds=None):
    """d² = 0 and Δ(Da) = [d, Δ(a)] on O-side generators of the window."""
    W, U = D.W, D.U
    rep = Report(f"tensor[{MT.name}]", {"dim": MT.space.dim})
    rep.info["pole_strata"] = [list(s) for s in MT.pole_strata()]
    sq = MT.d * MT.d
    wit = _series_witness(sq, bounds, MT.space.labels)
    rep.add(failed("d_squared", "d² ≠ 0", wit) if wit else
            passed("d_squared", f"{len(MT.d.terms)} strata", strata=len(MT.d.terms)))
    bad = None
    count = 0
    for idx, key in enumerate(W.keys):
        if key[2] < 0:
            continue
        x = U.gen(idx)
        lhs = MT.act(D(x), W)
        rhs = graded_commutator(MT.d, 1, MT.act_key(key), key[0])
        wit = _series_witness(lhs - rhs, bounds, MT.space.labels)
        count += 1
        if wit:
            bad = (key, wit)
            break
    rep.add(failed("intertwining", f"Δ(d {_lab(W.g0, *bad[0])}) ≠ [d, Δ(·)]", bad[1]) if bad
            else passed("intertwining", f"{count} O-side generators"))
    return rep


def check_weak_commutativity(M, N, R, H=3):
    rep = Report(f"weak_commutativity[{M.name},{N.name}]")
    A = two_fold(M, N, R, H)
    B = two_fold(N, M, R, H)
    P = A.space.swap()
    Pinv = B.space.swap()
    lhs = A.d.conj(P, Pinv)
    rhs = B.d.flip(0)
    wit = _series_witness(lhs - rhs, labels=B.space.labels)
    rep.add(failed("swap_differential", "σ d^{MN}(z) σ⁻¹ ≠ d^{NM}(-z)", wit) if wit
            else passed("swap_differential"))
    # τ_z on the second factor of N⊗M
    C = MeromorphicTensor([N, M], R, 1, [(0,), (1,)], [], H)
    bad = None
    keys = sorted({k for m in (M, N) for k in m.action})
    for key in keys:
        d = A.act_key(key).conj(P, Pinv) - C.act_key(key)
        wit = _series_witness(d, labels=B.space.labels)
        if wit:
            bad = (key, wit)
            break
    rep.add(failed("swap_action", f"swap does not intertwine {_lab(M.g0, *bad[0])}", bad[1]) if bad
            else passed("swap_action", f"{len(keys)} generators"))
    if M is N:
        sq = mat_mul(Pinv, P)
        rep.add(passed("swap_involution") if sq == identity(A.space.dim) else
                failed("swap_involution", "σ² ≠ 1"))
    res = sigma_r_residual(R)
    rep.add(failed("sigma_r", "σ𝐫(z) ≠ 𝐫(-z)", res) if res else passed("sigma_r"))
    return rep


def sigma_r_residual(R):
    for e, tens in R.terms.items():
        other = R.terms.get(e, {})
        for (p, q), c in tens.items():
            want = other.get((q, p), ZERO) * _sgn(e) * _sgn(p[0] * q[0])
            if want != c:
                return {"exponent": e, "entry": [_lab(R.r.g0, *p), _lab(R.r.g0, *q)],
                        "value": fmt(c), "swapped": fmt(want)}
    return None


def _iterated_legs(inner_slot_pair, inner_shift, outer_shift):
    """Δ_inner then τ: key ↦ legs on the two inner slots with outer shift applied to the pair."""
    s0, s1 = inner_slot_pair

    def legs(key):
        out = []
        for _, k1, e1, c1 in shifted_legs(key, None, outer_shift):
            for _, k2, e2, c2 in shifted_legs(k1, s0, inner_shift):
                out.append((s0, k2, tuple(a + b for a, b in zip(e1, e2)), c1 * c2))
            out.append((s1, k1, e1, c1))
        return out
    return legs


def check_weak_associativity(M, N, P, R, H=3, cap=2):
    """Compare M_{z+w}⊗N_w⊗P₀ with (M_z⊗N)_w⊗P₀ and M_u⊗(N_w⊗P₀), u = z + w."""
    KM, KN, KP = M.K, N.K, P.K
    need1 = max(KM + cap, KN) + KP - 1
    need2 = KM + max(KN + cap, KP) - 1
    need = max(need1, need2)
    if R.K < need:
        raise WindowExhausted("weak associativity", need, R.K)
    rep = Report(f"weak_associativity[{M.name},{N.name},{P.name}]", {"cap": cap})
    sp_src = three_fold(M, N, P, R, H, cap)
    nv = 2
    # target 1 in (z, w): d^{MN}(z)⊗1 + 1⊗d_P - 2ħ (Δ_z⊗1)𝐫(w)
    t1 = MeromorphicTensor([M, N, P], R, 2, [(1, 1), (0, 1), (0, 0)], [(0, 1, (1, 0), 0)],
                           H, caps=(cap, None), name="(M_z⊗N)_w⊗P")
    t1.d = t1.d + pair_operator(t1.space, R, _iterated_legs((0, 1), (1, 0), (0, 0)),
                                plain_leg(2, nv), lambda e: {(0, e): Fraction(1)}, nv, H, (cap, None))
    # source re-expanded in (u, w) with |u| > |w|, and target 2
    src2 = MeromorphicTensor([M, N, P], R, 2, [(1, 0), (0, 1), (0, 0)],
                             [(0, 1, (1, -1), 0), (0, 2, (1, 0), 0), (1, 2, (0, 1), 1)],
                             H, caps=(None, cap), name="M_u⊗N_w⊗P (|u|>|w|)")
    t2 = MeromorphicTensor([M, N, P], R, 2, [(1, 0), (0, 1), (0, 0)], [(1, 2, (0, 1), 1)],
                           H, caps=(None, cap), name="M_u⊗(N_w⊗P)")

    def leg2(key):
        return [(s, k, e, c) for s, k, e, c in shifted_legs(key, 1, (0, 1))] + [(2, key, (0, 0), Fraction(1))]
    t2.d = t2.d + pair_operator(t2.space, R, plain_leg(0, nv), leg2,
                                lambda e: {(e, 0): Fraction(1)}, nv, H, (None, cap))
    b1 = (cap, None)
    b2 = (None, cap)
    for name, src, tgt, b in (("expansion_1", sp_src, t1, b1), ("expansion_2", src2, t2, b2)):
        wit = _series_witness(tgt.d - src.d, b, tgt.space.labels)
        rep.add(failed(f"{name}_differential", "expanded differentials differ", wit) if wit
                else passed(f"{name}_differential"))
    negz = KM + KN - 1
    negw = KN + KP - 1
    wit = _series_witness(sp_src.d * sp_src.d, (cap - negz, None), sp_src.space.labels)
    rep.add(failed("source_d_squared", "d(z, w)² ≠ 0", wit) if wit else passed("source_d_squared"))
    for name, tgt, b in (("target_1", t1, (cap - negz, None)), ("target_2", t2, (None, cap - negw))):
        wit = _series_witness(tgt.d * tgt.d, b, tgt.space.labels)
        rep.add(failed(f"{name}_d_squared", "d² ≠ 0", wit) if wit else passed(f"{name}_d_squared"))
    # iterated action equals the direct shifted action
    bad = None
    keys = sorted({k for m in (M, N, P) for k in m.action})
    it1 = _iterated_legs((0, 1), (1, 0), (0, 1))
    for key in keys:
        direct = sp_src.act_key(key)
        iterated = OpSeries(nv, H, (cap, None))
        for s, k2, e, c in it1(key) + [(2, key, (0, 0), Fraction(1))]:
            A = t1.space.rho(s, k2)
            if A:
                iterated.add((0,) + e, A, c)
        wit = _series_witness(direct - iterated, b1)
        if wit:
            bad = (key, wit)
            break
    rep.add(failed("action_coassociative", f"iterated action differs on {_lab(M.g0, *bad[0])}", bad[1])
            if bad else passed("action_coassociative", f"{len(keys)} generators"))
    rep.info["pole_bound_needed"] = need
    return rep


def check_level_tensor(R, k):
    """(δ_k⊗1 + 1⊗δ_k)𝐫(z) = 0 with δ_k x_{a,n} = n k εx_{a,n-1}."""
    out = {}
    k = rational(k)
    for e, tens in R.terms.items():
        for (p, q), c in tens.items():
            for key2, f in level_generator_image(None, p, k).items():
                kk = (e, key2, q)
                out[kk] = out.get(kk, ZERO) + c * f
            for key2, f in level_generator_image(None, q, k).items():
                kk = (e, p, key2)
                out[kk] = out.get(kk, ZERO) + c * f * _sgn(p[0])
    out = {kk: v for kk, v in out.items() if v}
    if not out:
        return None
    (e, p, q), v = min(out.items())
    return {"exponent": e, "entry": [_lab(R.r.g0, *p), _lab(R.r.g0, *q)], "value": fmt(v)}


# ---------------------------------------------------------------------------
# the DG 1-shifted Yangian pipeline
# ---------------------------------------------------------------------------

def _pair_checks(M, N, R, T, k, r):
    D = LeveledDifferential(T, k, r, H=3, word_len=4)
    out = Report(f"pair[{M.name},{N.name}]")
    MT = two_fold(M, N, R)
    out.add(check_tensor(MT, D))
    out.add(check_weak_commutativity(M, N, R))
    bare = [FSFModule(m.name, m.g0, m.labels, m.degrees, m.K, m.action) for m in (M, N)]
    strata = two_fold(*bare, R).pole_strata()
    out.add(passed("pole_order_level_independent", f"{len(strata)} pole strata")
            if strata == MT.pole_strata() else
            failed("pole_order_level_independent", "d_M changed the pole strata",
                   {"with_dM": [list(s) for s in MT.pole_strata()], "without": [list(s) for s in strata]}))
    return out


def yangian_suite(g0, N, level=0, modules=(), nvars=1, r=None, cap=2, jobs=None):
    from .loopyang import (DifferenceRMatrix, build_loop_double, check_base, check_gcybe, check_translation,
                           check_truncation_coherence, level_deform, lift_to_shifted_r, meromorphic_r)
    from .parallel import run_all
    from .rmat import canonical_r
    k = rational(level)
    r = r or DifferenceRMatrix.yang(g0)
    rep = Report("yangian", {"g0": g0.name, "N": N, "level": fmt(k), "r": r.name,
                             "modules": [m.name for m in modules], "vars": nvars})
    rep.add(check_base(g0))
    if not rep.ok:
        return rep
    T = build_loop_double(g0, N)
    rep.add(check_gcybe(r, 3))
    lifted, dropped = lift_to_shifted_r(r, N)
    if not r.tail:
        same = lifted == canonical_r(T).tensor
        rep.add(passed("lift_matches_canonical", f"{len(lifted.entries)} entries") if same else
                failed("lift_matches_canonical", "lifted 𝐫 differs from the canonical element"))
    rep.info["lift_dropped"] = len(dropped)
    rep.add(check_translation(T, r))
    lrep, D = level_deform(T, k, r)
    rep.add(lrep)
    if D is None:
        return rep
    if N >= 2:
        rep.add(check_truncation_coherence(g0, N - 1))
    for M in modules:
        rep.add(check_module(M, D))
    if not modules:
        return rep
    Ks = sorted((m.K for m in modules), reverse=True)
    # one stratum beyond the minimum, so the report shows where the action stops
    K = Ks[0] + (Ks[1] if len(Ks) > 1 else 1)
    if nvars >= 2 and len(modules) >= 3:
        KM, KN, KP = (m.K for m in modules[:3])
        K = max(K, max(KM + cap, KN) + KP - 1, KM + max(KN + cap, KP) - 1)
    R = meromorphic_r(r, K)
    rep.info["pole_bound"] = K
    rep.info["r_strata"] = sorted(R.terms)
    wit = check_level_tensor(R, k)
    rep.add(failed("level_annihilates_r", "(δ_k⊗1 + 1⊗δ_k)𝐫(z) ≠ 0", wit) if wit else
            passed("level_annihilates_r"))
    if len(modules) == 1:
        one = one_fold(modules[0], R)
        sq = one.d * one.d
        rep.add(passed("single_module_d_squared") if not sq.terms else
                failed("single_module_d_squared", "d_M² ≠ 0"))
        return rep
    pairs = [(modules[i], modules[j], R, T, k, r)
             for i in range(len(modules)) for j in range(i + 1, len(modules))]
    for sub in run_all(_pair_checks, pairs, jobs):
        rep.add(sub)
    if nvars >= 2 and len(modules) >= 3:
        M, N_, P = modules[:3]
        rep.add(check_weak_associativity(M, N_, P, R, cap=cap))
        src = three_fold(M, N_, P, R, cap=cap)
        rep.add(check_tensor(src, D, bounds=(cap - (M.K + N_.K - 1), None)))
    return rep
