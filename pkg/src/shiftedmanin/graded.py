"""Graded bases, the Koszul sign engine and sparse tensors of arity 1 to 3."""

from dataclasses import dataclass
from itertools import permutations

from .exactnum import ZERO, Fraction, fmt, rational


class GradedError(ValueError):
    pass


@dataclass(frozen=True)
class BasisVector:
    id: int
    label: str
    degree: int


class GradedBasis:
    """Ordered finite basis; the order is the PBW order used downstream."""

    def __init__(self, entries):
        vecs = []
        seen = set()
        for i, item in enumerate(entries):
            label, degree = item
            if label in seen:
                raise GradedError(f"duplicate basis label {label!r}")
            seen.add(label)
            vecs.append(BasisVector(i, str(label), int(degree)))
        self.vectors = tuple(vecs)
        self.degrees = tuple(v.degree for v in vecs)
        self.labels = tuple(v.label for v in vecs)
        self._index = {v.label: v.id for v in vecs}

    def __len__(self):
        return len(self.vectors)

    def __iter__(self):
        return iter(self.vectors)

    def index(self, label):
        try:
            return self._index[label]
        except KeyError:
            raise GradedError(f"unknown basis label {label!r}") from None

    def deg(self, i):
        return self.degrees[i]

    def __eq__(self, other):
        return isinstance(other, GradedBasis) and self.labels == other.labels \
            and self.degrees == other.degrees

    def __hash__(self):
        return hash((self.labels, self.degrees))

    def __repr__(self):
        return "GradedBasis(" + ", ".join(f"{l}:{d}" for l, d in zip(self.labels, self.degrees)) + ")"


def koszul_sign(perm, degrees):
    """Sign of rearranging v_0 ⊗ ... ⊗ v_{n-1} into v_{perm[0]} ⊗ v_{perm[1]} ⊗ ...

    Every pair of slots whose relative order flips contributes (-1)^{|v_i||v_j|}.
    Accepts 0-based or 1-based permutations.
    """
    perm = list(perm)
    n = len(perm)
    if n != len(degrees):
        raise GradedError("permutation and degree list have different lengths")
    if sorted(perm) == list(range(1, n + 1)):
        perm = [p - 1 for p in perm]
    if sorted(perm) != list(range(n)):
        raise GradedError(f"not a permutation: {perm}")
    odd = 0
    for i in range(n):
        for j in range(i + 1, n):
            if perm[i] > perm[j]:
                odd ^= (degrees[perm[i]] * degrees[perm[j]]) & 1
    return -1 if odd else 1


class SparseTensor:
    """Exact sparse element of V^{⊗arity} over one graded basis.

    Entries map index tuples to Fractions; zeros are never stored.
    """

    __slots__ = ("basis", "arity", "entries")

    def __init__(self, basis, arity, entries=None, homogeneous_degree=None):
        if arity not in (1, 2, 3):
            raise GradedError("arity must be 1, 2 or 3")
        self.basis = basis
        self.arity = arity
        clean = {}
        n = len(basis)
        for key, c in (entries or {}).items():
            if isinstance(key, int):
                key = (key,)
            key = tuple(key)
            if len(key) != arity or any(not 0 <= k < n for k in key):
                raise GradedError(f"bad index tuple {key} for arity {arity}")
            c = rational(c)
            if c:
                clean[key] = clean.get(key, ZERO) + c
                if not clean[key]:
                    del clean[key]
        self.entries = clean
        if homogeneous_degree is not None:
            for key in clean:
                if self.key_degree(key) != homogeneous_degree:
                    raise GradedError(
                        f"entry {self.key_label(key)} has degree {self.key_degree(key)}, "
                        f"expected {homogeneous_degree}")

    @classmethod
    def zero(cls, basis, arity):
        return cls(basis, arity)

    @classmethod
    def basis_vector(cls, basis, i, c=1):
        return cls(basis, 1, {(i,): c})

    def key_degree(self, key):
        return sum(self.basis.degrees[k] for k in key)

    def key_label(self, key):
        return "⊗".join(self.basis.labels[k] for k in key)

    def _same(self, other):
        if not isinstance(other, SparseTensor):
            raise TypeError("expected SparseTensor")
        if other.basis != self.basis or other.arity != self.arity:
            raise GradedError("basis or arity mismatch")

    def __add__(self, other):
        self._same(other)
        out = dict(self.entries)
        for k, c in other.entries.items():
            v = out.get(k, ZERO) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return SparseTensor(self.basis, self.arity, out)

    def __neg__(self):
        return SparseTensor(self.basis, self.arity, {k: -c for k, c in self.entries.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, q):
        q = rational(q)
        return SparseTensor(self.basis, self.arity, {k: q * c for k, c in self.entries.items()})

    def __rmul__(self, q):
        return self.scale(q)

    def __eq__(self, other):
        if not isinstance(other, SparseTensor):
            return NotImplemented
        return self.basis == other.basis and self.arity == other.arity \
            and self.entries == other.entries

    def __hash__(self):
        return hash((self.arity, tuple(sorted(self.entries.items()))))

    def is_zero(self):
        return not self.entries

    def __bool__(self):
        return bool(self.entries)

    def coeff(self, *key):
        return self.entries.get(tuple(key), ZERO)

    def degrees(self):
        return {self.key_degree(k) for k in self.entries}

    def permute(self, perm):
        """Return the tensor with slots rearranged as perm, Koszul signs applied."""
        out = {}
        deg = self.basis.degrees
        for key, c in self.entries.items():
            s = koszul_sign(perm, [deg[k] for k in key])
            nk = tuple(key[p] for p in perm)
            out[nk] = out.get(nk, ZERO) + s * c
        return SparseTensor(self.basis, self.arity, out)

    def to_json(self):
        return [[list(self.basis.labels[k] for k in key), fmt(c)]
                for key, c in sorted(self.entries.items())]

    def pretty(self):
        if not self.entries:
            return "0"
        return " + ".join(f"({fmt(c)}) {self.key_label(k)}" for k, c in sorted(self.entries.items()))

    def __repr__(self):
        return f"SparseTensor[{self.arity}]({self.pretty()})"


def tensor(*vectors):
    """Tensor product of arity-1 tensors over a shared basis."""
    basis = vectors[0].basis
    out = {(): Fraction(1)}
    for v in vectors:
        if v.arity != 1 or v.basis != basis:
            raise GradedError("tensor() expects arity-1 tensors on one basis")
        out = {k + kv: c * cv for k, c in out.items() for kv, cv in v.entries.items()}
    return SparseTensor(basis, len(vectors), out)


def braid(t):
    if t.arity != 2:
        raise GradedError("braid needs an arity-2 tensor")
    return t.permute((1, 0))


def sym2_check(t):
    if t.arity != 2:
        raise GradedError("sym2_check needs an arity-2 tensor")
    return braid(t) == t


def symmetrize(t):
    """Sum over all slot permutations with Koszul signs (no 1/n! factor)."""
    out = SparseTensor.zero(t.basis, t.arity)
    for p in permutations(range(t.arity)):
        out = out + t.permute(p)
    return out


def contract(pairing, t, slot, x):
    """Pair slot `slot` (1-based) of t against the arity-1 tensor x.

    x is moved from the far right to sit just after the chosen slot, picking
    up the Koszul sign, and then pairing(t_slot, x) is evaluated. The pairing
    is any callable or dict (i, j) -> Fraction on basis indices.
    """
    if not 1 <= slot <= t.arity:
        raise GradedError(f"slot {slot} out of range for arity {t.arity}")
    if x.arity != 1:
        raise GradedError("contract pairs against an arity-1 tensor")
    get = pairing if callable(pairing) else (lambda i, j: pairing.get((i, j), ZERO))
    deg = t.basis.degrees
    s0 = slot - 1
    out = {}
    for key, c in t.entries.items():
        after = sum(deg[k] for k in key[s0 + 1:])
        for (j,), cx in x.entries.items():
            val = get(key[s0], j)
            if not val:
                continue
            sign = -1 if (deg[j] * after) & 1 else 1
            rest = key[:s0] + key[s0 + 1:]
            out[rest] = out.get(rest, ZERO) + sign * c * cx * val
    if t.arity == 1:
        return sum(out.values(), ZERO)
    return SparseTensor(t.basis, t.arity - 1, out)
