"""Graded Lie algebras by structure constants, degree-1 metrics and Lagrangians."""

from .exactnum import ZERO, Fraction, fmt, rational
from .graded import GradedBasis, SparseTensor
from . import linalg
from .report import Report, failed, passed


class LieAlgebraError(ValueError):
    pass


def _sgn(p):
    return -1 if p & 1 else 1


class GradedLieAlgebra:
    """Structure constants f[(a, b)] = {c: f_ab^c}.

    The table is stored in full as supplied; a missing (b, a) entry is filled in
    from graded antisymmetry. `overflow` lists basis pairs whose bracket was
    dropped because it left a truncation window.
    """

    def __init__(self, basis, f, overflow=()):
        self.basis = basis
        n = len(basis)
        table = {}
        for (a, b), out in f.items():
            if not (0 <= a < n and 0 <= b < n):
                raise LieAlgebraError(f"bracket index ({a}, {b}) out of range")
            clean = {c: rational(v) for c, v in out.items() if rational(v)}
            if clean:
                table[(a, b)] = clean
        self.f = table
        self.overflow = frozenset(overflow)

    @classmethod
    def from_brackets(cls, basis, brackets, overflow=(), complete=True):
        """Build from (a, b) -> {c: coeff}; fills missing mirrored entries."""
        f = {k: dict(v) for k, v in brackets.items()}
        if complete:
            deg = basis.degrees
            for (a, b), out in list(f.items()):
                if (b, a) not in f:
                    s = -_sgn(deg[a] * deg[b])
                    f[(b, a)] = {c: s * rational(v) for c, v in out.items()}
        ov = set(overflow)
        if complete:
            ov |= {(b, a) for (a, b) in overflow}
        return cls(basis, f, ov)

    @property
    def dim(self):
        return len(self.basis)

    def deg(self, i):
        return self.basis.degrees[i]

    def bracket_basis(self, a, b):
        return self.f.get((a, b), {})

    def vec(self, i, c=1):
        return SparseTensor.basis_vector(self.basis, i, c)

    def bracket(self, x, y):
        if x.basis != self.basis or y.basis != self.basis:
            raise LieAlgebraError("basis mismatch in bracket")
        out = {}
        for (a,), ca in x.entries.items():
            for (b,), cb in y.entries.items():
                for c, v in self.f.get((a, b), {}).items():
                    out[c] = out.get(c, ZERO) + ca * cb * v
        return SparseTensor(self.basis, 1, {(c,): v for c, v in out.items()})

    def bracket_dict(self, x, y):
        """Bracket of coordinate dicts {index: coeff}."""
        out = {}
        for a, ca in x.items():
            for b, cb in y.items():
                for c, v in self.f.get((a, b), {}).items():
                    out[c] = out.get(c, ZERO) + ca * cb * v
        return {c: v for c, v in out.items() if v}

    def graded_degree(self, i):
        return self.basis.degrees[i]

    def is_abelian(self):
        return not self.f

    def to_json(self):
        lab = self.basis.labels
        rows = []
        for (a, b) in sorted(self.f):
            for c, v in sorted(self.f[(a, b)].items()):
                rows.append([lab[a], lab[b], lab[c], fmt(v)])
        return rows


def check_degrees(L):
    deg = L.basis.degrees
    for (a, b), out in sorted(L.f.items()):
        for c in out:
            if deg[c] != deg[a] + deg[b]:
                lab = L.basis.labels
                return failed("degree", f"[{lab[a]},{lab[b]}] has a component on {lab[c]} "
                              f"of degree {deg[c]} != {deg[a] + deg[b]}",
                              witness={"pair": [lab[a], lab[b]], "component": lab[c]})
    return passed("degree")


def check_antisymmetry(L):
    deg, lab = L.basis.degrees, L.basis.labels
    n = L.dim
    for a in range(n):
        for b in range(a, n):
            s = -_sgn(deg[a] * deg[b])
            fab, fba = L.f.get((a, b), {}), L.f.get((b, a), {})
            for c in sorted(set(fab) | set(fba)):
                if fab.get(c, ZERO) != s * fba.get(c, ZERO):
                    return failed("antisymmetry",
                                  f"f_{lab[a]},{lab[b]}^{lab[c]} = {fmt(fab.get(c, ZERO))} but "
                                  f"f_{lab[b]},{lab[a]}^{lab[c]} = {fmt(fba.get(c, ZERO))}",
                                  witness={"a": lab[a], "b": lab[b], "c": lab[c]})
    return passed("antisymmetry")


def jacobi_residual(L, a, b, c):
    """(-1)^{|a||c|}[a,[b,c]] + (-1)^{|b||a|}[b,[c,a]] + (-1)^{|c||b|}[c,[a,b]]."""
    deg = L.basis.degrees
    out = {}
    for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
        s = _sgn(deg[x] * deg[z])
        inner = L.f.get((y, z), {})
        for w, v in inner.items():
            for u, v2 in L.f.get((x, w), {}).items():
                out[u] = out.get(u, ZERO) + s * v * v2
    return {u: v for u, v in out.items() if v}


def check_jacobi(L):
    """Graded Jacobi on all basis triples; triples whose inner bracket left
    the truncation window are counted and skipped."""
    lab = L.basis.labels
    n = L.dim
    anti = check_antisymmetry(L)
    if not anti.ok:
        return failed("jacobi", "antisymmetry fails first: " + anti.detail, anti.witness)
    skipped_n = checked = 0
    ov = L.overflow
    for a in range(n):
        for b in range(a, n):
            for c in range(b, n):
                if ov and ((b, c) in ov or (c, a) in ov or (a, b) in ov):
                    skipped_n += 1
                    continue
                checked += 1
                res = jacobi_residual(L, a, b, c)
                if res:
                    return failed("jacobi", f"triple ({lab[a]}, {lab[b]}, {lab[c]}) violates Jacobi",
                                  witness={"triple": [lab[a], lab[b], lab[c]],
                                           "residual": {lab[u]: fmt(v) for u, v in sorted(res.items())}})
    return passed("jacobi", f"{checked} interior triples" +
                  (f", {skipped_n} boundary triples skipped" if skipped_n else ""),
                  interior=checked, boundary=skipped_n)


def lie_suite(L):
    rep = Report("lie", {"dim": L.dim})
    rep.add(check_degrees(L))
    rep.add(check_antisymmetry(L))
    rep.add(check_jacobi(L))
    return rep


class ShiftedMetric:
    """Degree-1 antisymmetric pairing kappa[(a, b)]."""

    def __init__(self, kappa):
        self.kappa = {k: rational(v) for k, v in kappa.items() if rational(v)}

    @classmethod
    def from_pairs(cls, basis, pairs, complete=True):
        k = dict(pairs)
        if complete:
            for (a, b), v in list(k.items()):
                k.setdefault((b, a), -rational(v))
        return cls(k)

    def __call__(self, a, b):
        return self.kappa.get((a, b), ZERO)

    def pair(self, x, y):
        """kappa on coordinate dicts or arity-1 tensors."""
        if isinstance(x, SparseTensor):
            x = {k[0]: v for k, v in x.entries.items()}
        if isinstance(y, SparseTensor):
            y = {k[0]: v for k, v in y.entries.items()}
        tot = ZERO
        for a, ca in x.items():
            for b, cb in y.items():
                v = self.kappa.get((a, b))
                if v:
                    tot += ca * cb * v
        return tot

    def gram(self, n):
        return [[self(a, b) for b in range(n)] for a in range(n)]

    def to_json(self, basis):
        lab = basis.labels
        return [[lab[a], lab[b], fmt(v)] for (a, b), v in sorted(self.kappa.items()) if a < b or (b, a) not in self.kappa]


def check_metric(L, kappa):
    rep = Report("metric", {"dim": L.dim})
    deg, lab = L.basis.degrees, L.basis.labels
    bad = next(((a, b) for (a, b) in sorted(kappa.kappa) if deg[a] + deg[b] != 1), None)
    if bad:
        rep.add(failed("degree", f"kappa({lab[bad[0]]}, {lab[bad[1]]}) pairs degrees "
                       f"{deg[bad[0]]} and {deg[bad[1]]}", {"pair": [lab[bad[0]], lab[bad[1]]]}))
    else:
        rep.add(passed("degree"))
    bad = next(((a, b) for (a, b) in sorted(kappa.kappa) if kappa(a, b) != -kappa(b, a)), None)
    if bad:
        a, b = bad
        rep.add(failed("antisymmetry", f"kappa({lab[a]},{lab[b]}) = {fmt(kappa(a, b))} but "
                       f"kappa({lab[b]},{lab[a]}) = {fmt(kappa(b, a))}", {"pair": [lab[a], lab[b]]}))
    else:
        rep.add(passed("antisymmetry"))
    rep.add(_check_invariance(L, kappa))
    rep.add(_check_nondegenerate(L, kappa))
    return rep


def _check_invariance(L, kappa):
    deg, lab = L.basis.degrees, L.basis.labels
    n = L.dim
    # kappa([y,x],z) = (-1)^{|x|} kappa(y,[x,z])
    partners = {}
    for (a, b) in kappa.kappa:
        partners.setdefault(a, []).append(b)
    for y in range(n):
        for x in range(n):
            yx = L.f.get((y, x), {})
            for z in range(n):
                lhs = sum((v * kappa(w, z) for w, v in yx.items()), ZERO)
                xz = L.f.get((x, z), {})
                rhs = _sgn(deg[x]) * sum((v * kappa(y, w) for w, v in xz.items()), ZERO)
                if lhs != rhs:
                    return failed("invariance", f"kappa([{lab[y]},{lab[x]}],{lab[z]}) = {fmt(lhs)} but "
                                  f"(-1)^|x| kappa({lab[y]},[{lab[x]},{lab[z]}]) = {fmt(rhs)}",
                                  {"triple": [lab[y], lab[x], lab[z]], "lhs": fmt(lhs), "rhs": fmt(rhs)})
    return passed("invariance")


def _check_nondegenerate(L, kappa):
    lab = L.basis.labels
    n = L.dim
    rows = {a: {b: kappa(a, b) for b in range(n) if kappa(a, b)} for a in range(n)}
    r = linalg.rank(rows, (n, n))
    if r == n:
        return passed("nondegenerate", f"rank {n}")
    # a vector v with kappa(v, -) = 0
    cols = {b: {a: kappa(a, b) for a in range(n) if kappa(a, b)} for b in range(n)}
    ker = linalg.kernel(cols, (n, n))
    v = ker[0]
    return failed("nondegenerate", f"rank {r} < {n}",
                  {"radical": {lab[i]: fmt(c) for i, c in sorted(v.items())}})


class Subspace:
    def __init__(self, basis, span):
        self.basis = basis
        vecs = []
        for s in span:
            if isinstance(s, SparseTensor):
                s = {k[0]: v for k, v in s.entries.items()}
            vecs.append({i: rational(c) for i, c in s.items() if rational(c)})
        self.span = vecs

    @classmethod
    def coordinate(cls, basis, indices):
        return cls(basis, [{i: Fraction(1)} for i in indices])

    @property
    def dim(self):
        return linalg.rank({i: v for i, v in enumerate(self.span)}, (len(self.span), len(self.basis)))

    def contains(self, v):
        if isinstance(v, SparseTensor):
            v = {k[0]: c for k, c in v.entries.items()}
        v = {i: c for i, c in v.items() if c}
        if not v:
            return True
        rows = {i: s for i, s in enumerate(self.span)}
        n = len(self.basis)
        r0 = linalg.rank(rows, (len(rows), n))
        rows[len(rows)] = v
        return linalg.rank(rows, (len(rows), n)) == r0

    def tensors(self):
        return [SparseTensor(self.basis, 1, {(i,): c for i, c in s.items()}) for s in self.span]

    def labels(self):
        lab = self.basis.labels
        return [{lab[i]: fmt(c) for i, c in sorted(s.items())} for s in self.span]


def orthogonal_complement(S, kappa):
    n = len(S.basis)
    full = {a: {b: kappa(a, b) for b in range(n) if kappa(a, b)} for a in range(n)}
    if linalg.rank(full, (n, n)) != n:
        raise LieAlgebraError("orthogonal complement needs a nondegenerate pairing")
    rows = {}
    for i, s in enumerate(S.span):
        row = {}
        for a, ca in s.items():
            for b in range(n):
                v = kappa(a, b)
                if v:
                    row[b] = row.get(b, ZERO) + ca * v
        rows[i] = {b: v for b, v in row.items() if v}
    return Subspace(S.basis, linalg.kernel(rows, (len(rows), n)))


def _closure_failure(L, S):
    for i, x in enumerate(S.span):
        for j, y in enumerate(S.span):
            if j < i:
                continue
            br = L.bracket_dict(x, y)
            if br and not S.contains(br):
                return i, j, br
    return None


def check_lagrangian_pair(L, kappa, hp, hm):
    rep = Report("lagrangian_pair", {"dim": L.dim})
    lab = L.basis.labels
    n = L.dim
    for name, S in (("h_plus", hp), ("h_minus", hm)):
        bad = _closure_failure(L, S)
        if bad:
            i, j, br = bad
            rep.add(failed(f"{name}_subalgebra", "bracket leaves the subspace",
                           {"x": S.labels()[i], "y": S.labels()[j],
                            "bracket": {lab[c]: fmt(v) for c, v in sorted(br.items())}}))
        else:
            rep.add(passed(f"{name}_subalgebra"))
        iso = None
        for i, x in enumerate(S.span):
            for j, y in enumerate(S.span):
                v = kappa.pair(x, y)
                if v:
                    iso = (i, j, v)
                    break
            if iso:
                break
        d = S.dim
        if iso:
            i, j, v = iso
            rep.add(failed(f"{name}_lagrangian", f"not isotropic: kappa = {fmt(v)}",
                           {"x": S.labels()[i], "y": S.labels()[j]}))
        elif 2 * d != n:
            rep.add(failed(f"{name}_lagrangian", f"isotropic of dimension {d}, need {n // 2 if n % 2 == 0 else n / 2}"))
        else:
            rep.add(passed(f"{name}_lagrangian"))
    rows = {i: s for i, s in enumerate(hp.span + hm.span)}
    r = linalg.rank(rows, (len(rows), n))
    if r == n and hp.dim + hm.dim == n:
        rep.add(passed("transversal"))
    else:
        rep.add(failed("transversal", f"h_plus + h_minus has rank {r} with dims "
                       f"{hp.dim} + {hm.dim}, ambient {n}"))
    return rep


def canonical_lagrangians(L, kappa):
    deg = L.basis.degrees
    lo = [i for i in range(L.dim) if deg[i] <= 0]
    hi = [i for i in range(L.dim) if deg[i] >= 1]
    for side in (lo, hi):
        s = set(side)
        for a in side:
            for b in side:
                for c in L.f.get((a, b), {}):
                    if c not in s:
                        lab = L.basis.labels
                        raise LieAlgebraError(
                            f"degree half not a subalgebra: [{lab[a]},{lab[b]}] reaches {lab[c]}")
    return Subspace.coordinate(L.basis, lo), Subspace.coordinate(L.basis, hi)


def dual_basis(basis, prefix="ε^"):
    """Basis of h*[-1]: label prefix+label, degree 1 - |x|."""
    return GradedBasis([(prefix + l, 1 - d) for l, d in zip(basis.labels, basis.degrees)])


def coadjoint_action(L, a, b):
    """x_a . eps^b = sum_c f_{ca}^b eps^c, as a tensor over the dual basis."""
    dual = dual_basis(L.basis)
    out = {}
    for c in range(L.dim):
        v = L.f.get((c, a), {}).get(b, ZERO)
        if v:
            out[(c,)] = v
    return SparseTensor(dual, 1, out)
