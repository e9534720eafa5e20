"""Exact rank, kernel and solve over Q, backed by sympy's sparse DomainMatrix."""

from fractions import Fraction

from sympy import QQ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.sdm import SDM


class SingularError(ArithmeticError):
    pass


def _q(c):
    c = Fraction(c)
    return QQ(c.numerator, c.denominator)


def _f(q):
    return Fraction(int(q.numerator), int(q.denominator))


def _dm(rows, shape):
    """rows: {i: {j: value}} (or a dense list of lists)."""
    if isinstance(rows, list):
        rows = {i: {j: v for j, v in enumerate(r) if v} for i, r in enumerate(rows)}
    data = {}
    for i, r in rows.items():
        rr = {j: _q(v) for j, v in r.items() if v}
        if rr:
            data[i] = rr
    return DomainMatrix.from_rep(SDM(data, shape, QQ))


def rank(rows, shape):
    if shape[0] == 0 or shape[1] == 0:
        return 0
    return _dm(rows, shape).rank()


def kernel(rows, shape):
    """Basis of {v : A v = 0} as a list of {col: Fraction} dicts."""
    m, n = shape
    if n == 0:
        return []
    if m == 0:
        return [{j: Fraction(1)} for j in range(n)]
    ns = _dm(rows, shape).nullspace()
    out = []
    for r in ns.to_sparse().rep.values():
        out.append({j: _f(v) for j, v in r.items() if v})
    return out


def inverse(dense):
    n = len(dense)
    if n == 0:
        return []
    dm = _dm(dense, (n, n)).to_dense()
    try:
        inv = dm.inv()
    except Exception as exc:
        raise SingularError("matrix is not invertible over Q") from exc
    return [[_f(x) for x in row] for row in inv.to_list()]


def solve(rows, shape, rhs):
    """Unique solution x of A x = rhs; raises SingularError otherwise."""
    m, n = shape
    if rank(rows, shape) != n:
        raise SingularError("system does not have a unique solution")
    A = _dm(rows, shape).to_dense()
    b = _dm({i: {0: v} for i, v in rhs.items()}, (m, 1)).to_dense()
    aug = A.hstack(b)
    red, pivots = aug.rref()
    if n in pivots:
        raise SingularError("inconsistent system")
    red = red.to_list()
    x = {}
    for r, p in enumerate(pivots):
        v = _f(red[r][n])
        if v:
            x[p] = v
    return x
