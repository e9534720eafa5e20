"""JSON formats for algebras, triples, base algebras, modules and r-matrix tails."""

import json
from fractions import Fraction
from importlib import resources

import jsonschema

from .bialg import Cobracket, ManinTriple, ShiftedBialgebra
from .exactnum import fmt, rational
from .graded import GradedBasis
from .liealg import GradedLieAlgebra, ShiftedMetric, canonical_lagrangians

SCHEMA_VERSION = 1


class InputError(ValueError):
    """Malformed input; `where` names the offending file position or field."""

    def __init__(self, message, where=""):
        super().__init__(f"{where}: {message}" if where else message)
        self.where = where


def load_schema(name):
    text = resources.files("shiftedmanin").joinpath("schemas", f"{name}.schema.json").read_text("utf-8")
    return json.loads(text)


def parse_text(text, schema, source="<input>"):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(exc.msg, f"{source}:{exc.lineno}:{exc.colno}") from None
    validator = jsonschema.Draft202012Validator(load_schema(schema))
    errors = sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        path = "/".join(str(p) for p in err.absolute_path) or "(root)"
        raise InputError(err.message, f"{source}: field {path}")
    return data


def read_file(path, schema):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(exc.strerror or str(exc), str(path)) from None
    return parse_text(text, schema, str(path))


def _compact(v):
    return json.dumps(v, ensure_ascii=False, separators=(", ", ": "))


def dumps(data):
    """Top-level keys one per line; list items and dict entries one per line below them."""
    lines = ["{"]
    items = list(data.items())
    for n, (k, v) in enumerate(items):
        tail = "," if n + 1 < len(items) else ""
        if isinstance(v, list) and v:
            lines.append(f"  {_compact(k)}: [")
            lines.extend(f"    {_compact(x)}" + ("," if i + 1 < len(v) else "") for i, x in enumerate(v))
            lines.append("  ]" + tail)
        elif isinstance(v, dict) and v:
            lines.append(f"  {_compact(k)}: {{")
            sub = list(v.items())
            lines.extend(f"    {_compact(a)}: {_compact(b)}" + ("," if i + 1 < len(sub) else "")
                         for i, (a, b) in enumerate(sub))
            lines.append("  }" + tail)
        else:
            lines.append(f"  {_compact(k)}: {_compact(v)}{tail}")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# algebras
# ---------------------------------------------------------------------------

class AlgebraFile:
    """Parsed algebra-format document."""

    def __init__(self, data, source="<input>"):
        self.data = data
        self.source = source
        self.kind = data["kind"]
        self.name = data.get("name", "algebra")
        labels = [b[0] for b in data["basis"]]
        if len(set(labels)) != len(labels):
            dup = next(l for l in labels if labels.count(l) > 1)
            raise InputError(f"duplicate label {dup!r}", f"{source}: field basis")
        self.basis = GradedBasis([(b[0], int(b[1])) for b in data["basis"]])
        self.index = {l: i for i, l in enumerate(labels)}

    def _idx(self, label, field):
        try:
            return self.index[label]
        except KeyError:
            raise InputError(f"unknown label {label!r}", f"{self.source}: field {field}") from None

    def _vector(self, entries, field):
        out = {}
        for lab, c in entries:
            i = self._idx(lab, field)
            out[i] = out.get(i, Fraction(0)) + rational(c)
        return {i: c for i, c in out.items() if c}

    def _pairs(self, field):
        return {(self._idx(a, f"{field}/{n}/0"), self._idx(b, f"{field}/{n}/1"))
                for n, (a, b) in enumerate(self.data.get(field, []))}

    def algebra(self):
        f = {}
        for n, (a, b, terms) in enumerate(self.data.get("brackets", [])):
            key = (self._idx(a, f"brackets/{n}/0"), self._idx(b, f"brackets/{n}/1"))
            if key in f:
                raise InputError("bracket given twice", f"{self.source}: field brackets/{n}")
            f[key] = self._vector(terms, f"brackets/{n}/2")
        return GradedLieAlgebra.from_brackets(self.basis, f, self._pairs("boundary_brackets"))

    def metric(self):
        pairs = {}
        for n, (a, b, c) in enumerate(self.data.get("kappa", [])):
            pairs[(self._idx(a, f"kappa/{n}/0"), self._idx(b, f"kappa/{n}/1"))] = rational(c)
        return ShiftedMetric.from_pairs(self.basis, pairs)

    def cobracket(self):
        delta = {}
        for n, (a, b, c, v) in enumerate(self.data.get("cobracket", [])):
            i = self._idx(a, f"cobracket/{n}/0")
            key = (self._idx(b, f"cobracket/{n}/1"), self._idx(c, f"cobracket/{n}/2"))
            delta.setdefault(i, {})
            delta[i][key] = delta[i].get(key, Fraction(0)) + rational(v)
        return Cobracket(self.basis, delta, self._pairs("boundary_cobrackets"))

    def bialgebra(self):
        return ShiftedBialgebra(self.algebra(), self.cobracket())

    def _pair(self, plus, minus, field, L, kappa, labels=None):
        hp = [self._vector(v, f"{field}/plus/{n}") for n, v in enumerate(plus)]
        hm = [self._vector(v, f"{field}/minus/{n}") for n, v in enumerate(minus)]
        if len(hp) != len(hm):
            raise InputError("plus and minus have different lengths", f"{self.source}: field {field}")
        try:
            if labels:
                return ManinTriple(L, kappa, hp, hm, *labels)
            return ManinTriple(L, kappa, hp, hm)
        except ValueError as exc:
            raise InputError(str(exc), f"{self.source}: field {field}") from None

    def triple(self):
        L, kappa = self.algebra(), self.metric()
        d = self.data
        if "plus" in d and "minus" in d:
            labels = (d.get("plus_labels"), d.get("minus_labels"))
            return self._pair(d["plus"], d["minus"], "(root)", L, kappa,
                              labels if all(labels) else None)
        try:
            hp, hm = canonical_lagrangians(L, kappa)
            return ManinTriple.from_subspaces(L, kappa, hp, hm)
        except (ValueError, ArithmeticError) as exc:
            raise InputError(f"no Lagrangian markings and no degree splitting: {exc}", self.source) from None

    def alternate_triples(self):
        L, kappa = self.algebra(), self.metric()
        return [self._pair(p["plus"], p["minus"], f"alternate_pairs/{n}", L, kappa)
                for n, p in enumerate(self.data.get("alternate_pairs", []))]

    def base(self):
        from .loopyang import BaseAlgebra
        if any(d for d in self.basis.degrees):
            raise InputError("base algebras live in degree 0", f"{self.source}: field basis")
        L = self.algebra()
        beta = {}
        for n, (a, b, c) in enumerate(self.data.get("beta", [])):
            beta[(self._idx(a, f"beta/{n}/0"), self._idx(b, f"beta/{n}/1"))] = rational(c)
        if not beta:
            raise InputError("base algebra needs an invariant form", f"{self.source}: field beta")
        try:
            return BaseAlgebra(self.name, self.basis.labels, L.f, beta, strict=False)
        except (ValueError, ArithmeticError) as exc:
            raise InputError(str(exc), f"{self.source}: field beta") from None


def load_algebra(path):
    return AlgebraFile(read_file(path, "algebra"), str(path))


def parse_algebra(text, source="<input>"):
    return AlgebraFile(parse_text(text, "algebra", source), source)


def _brackets_json(L):
    lab = L.basis.labels
    return [[lab[a], lab[b], [[lab[c], fmt(v)] for c, v in sorted(L.f[(a, b)].items())]]
            for (a, b) in sorted(L.f)]


def _boundary_json(lab, pairs):
    return [[lab[a], lab[b]] for a, b in sorted(pairs)]


def _vector_json(lab, v):
    return [[lab[i], fmt(c)] for i, c in sorted(v.items())]


def triple_to_json(T, name="double"):
    L = T.double
    lab = L.basis.labels
    out = {
        "schema_version": SCHEMA_VERSION,
        "kind": "triple",
        "name": name,
        "basis": [[l, d] for l, d in zip(lab, L.basis.degrees)],
        "brackets": _brackets_json(L),
        "kappa": [[lab[a], lab[b], fmt(v)] for (a, b), v in sorted(T.metric.kappa.items())],
        "plus": [_vector_json(lab, v) for v in T.plus],
        "minus": [_vector_json(lab, v) for v in T.minus],
    }
    if L.overflow:
        out["boundary_brackets"] = _boundary_json(lab, L.overflow)
    return out


def bialgebra_to_json(h, name="bialgebra"):
    L = h.algebra
    lab = L.basis.labels
    out = {
        "schema_version": SCHEMA_VERSION,
        "kind": "bialgebra",
        "name": name,
        "basis": [[l, d] for l, d in zip(lab, L.basis.degrees)],
        "brackets": _brackets_json(L),
        "cobracket": [[lab[a], lab[b], lab[c], fmt(v)]
                      for a in sorted(h.cobracket.delta)
                      for (b, c), v in sorted(h.cobracket.delta[a].items())],
    }
    if L.overflow:
        out["boundary_brackets"] = _boundary_json(lab, L.overflow)
    if h.cobracket.overflow:
        out["boundary_cobrackets"] = _boundary_json(lab, h.cobracket.overflow)
    return out


def base_to_json(g0):
    lab = g0.labels
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "base",
        "name": g0.name,
        "basis": [[l, 0] for l in lab],
        "brackets": _brackets_json(g0.lie),
        "beta": [[lab[i], lab[j], fmt(g0.beta[i][j])]
                 for i in range(g0.dim) for j in range(i, g0.dim) if g0.beta[i][j]],
    }


# ---------------------------------------------------------------------------
# modules and r-matrix tails
# ---------------------------------------------------------------------------

def load_module(path, g0):
    from .fsf import FSFModule, ModuleError
    data = read_file(path, "module")
    if data["g0"] != g0.name:
        raise InputError(f"module is over {data['g0']!r}, not {g0.name!r}", f"{path}: field g0")
    try:
        return FSFModule.from_json(data, g0)
    except ModuleError as exc:
        raise InputError(str(exc), str(path)) from None


def module_to_json(M):
    out = {"schema_version": SCHEMA_VERSION, "kind": "module"}
    out.update(M.to_json())
    return out


def load_rtail(path, g0):
    from .loopyang import DifferenceRMatrix, LoopError
    data = read_file(path, "rtail")
    if data["g0"] != g0.name:
        raise InputError(f"tail is over {data['g0']!r}, not {g0.name!r}", f"{path}: field g0")
    idx = {l: i for i, l in enumerate(g0.labels)}
    tail = {}
    for n, (a, b, p, q, c) in enumerate(data["tail"]):
        if a not in idx or b not in idx:
            raise InputError("unknown label", f"{path}: field tail/{n}")
        key = (idx[a], idx[b], p, q)
        tail[key] = tail.get(key, Fraction(0)) + rational(c)
    try:
        return DifferenceRMatrix(g0, tail, data.get("name", "tail"))
    except LoopError as exc:
        raise InputError(str(exc), str(path)) from None


def rtail_to_json(r):
    out = {"schema_version": SCHEMA_VERSION, "kind": "rmatrix_tail"}
    out.update(r.to_json())
    return out


def data_path(name):
    """Path of a shipped data file."""
    return resources.files("shiftedmanin").joinpath("data", name)
