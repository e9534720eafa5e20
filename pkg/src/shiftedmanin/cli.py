"""shifted-manin command line.

Exit codes: 0 all checks pass, 1 a check failed, 2 malformed input, 3 truncation overflow.
"""

import sys

import click

from .corpus import InputError, dumps, load_algebra, load_module, load_rtail, triple_to_json
from .report import Report

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_OVERFLOW = 0, 1, 2, 3


def _emit(rep, as_json, stream=None):
    stream = stream or sys.stdout
    stream.write(rep.dumps() if as_json else rep.pretty())


def _finish(rep, as_json):
    _emit(rep, as_json)
    sys.exit(EXIT_OK if rep.ok else EXIT_FAIL)


def _input_error(exc):
    click.echo(f"error: {exc}", err=True)
    sys.exit(EXIT_INPUT)


def _overflow(exc, hint):
    click.echo(f"overflow: {exc}; {hint}", err=True)
    sys.exit(EXIT_OVERFLOW)


output_opts = [
    click.option("--json", "as_json", flag_value=True, help="Emit the report as JSON."),
    click.option("--pretty", "as_json", flag_value=False, default=False, help="Emit a text report (default)."),
]


def with_output(fn):
    for opt in reversed(output_opts):
        fn = opt(fn)
    return fn


@click.group()
@click.version_option(package_name="artifact")
def main():
    """Verify 1-shifted Lie bialgebras, their doubles, quantizations and loop Yangians."""


def _triple_from(af):
    from .bialg import build_double
    if af.kind == "triple":
        return af.triple()
    if af.kind == "bialgebra":
        return build_double(af.bialgebra())
    raise InputError(f"expected a triple or bialgebra, got kind {af.kind!r}", af.source)


@main.command()
@click.argument("file", type=click.Path(dir_okay=False))
@click.option("--suite", type=click.Choice(["lie", "metric", "bialgebra", "triple"]), default="triple",
              show_default=True)
@with_output
def check(file, suite, as_json):
    """Run a structural check suite on an algebra file."""
    from .bialg import check_shifted_bialgebra, triple_suite
    from .liealg import check_metric, lie_suite
    try:
        af = load_algebra(file)
        if suite == "lie":
            rep = lie_suite(af.algebra())
        elif suite == "metric":
            L = af.algebra()
            rep = Report("metric_suite", {"dim": L.dim})
            rep.add(lie_suite(L))
            rep.add(check_metric(L, af.metric()))
        elif suite == "bialgebra":
            rep = check_shifted_bialgebra(af.bialgebra(), None)
        elif af.kind == "triple":
            # a broken κ cannot be matched into a triple; report it as a check failure
            L, kappa = af.algebra(), af.metric()
            pre = Report("triple", {"dim": L.dim})
            pre.add(lie_suite(L))
            pre.add(check_metric(L, kappa))
            rep = pre if not pre.ok else triple_suite(af.triple())
        else:
            rep = triple_suite(_triple_from(af))
    except InputError as exc:
        _input_error(exc)
    _finish(rep, as_json)


@main.command()
@click.argument("file", type=click.Path(dir_okay=False))
@click.option("-o", "--output", type=click.Path(dir_okay=False), help="Write the double here instead of stdout.")
@click.option("--force", is_flag=True, help="Emit the double even if the input fails its checks.")
@with_output
def double(file, output, force, as_json):
    """Build the double h ⊕ h*[-1] of a bialgebra file."""
    from .bialg import build_double, check_shifted_bialgebra
    from .liealg import lie_suite
    try:
        af = load_algebra(file)
        if af.kind != "bialgebra":
            raise InputError(f"expected a bialgebra, got kind {af.kind!r}", af.source)
        h = af.bialgebra()
    except InputError as exc:
        _input_error(exc)
    rep = Report("double_prerequisites", {"name": af.name})
    rep.add(lie_suite(h.algebra))
    rep.add(check_shifted_bialgebra(h, None))
    if not rep.ok and not force:
        _emit(rep, as_json, sys.stderr)
        sys.exit(EXIT_FAIL)
    text = dumps(triple_to_json(build_double(h), f"{af.name}_double"))
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if not rep.ok:
        _emit(rep, as_json, sys.stderr)
        sys.exit(EXIT_FAIL)


@main.command()
@click.argument("file", type=click.Path(dir_okay=False))
@click.option("-H", "--hbar-order", "H", type=click.IntRange(1), default=4, show_default=True)
@click.option("-L", "--word-len", "L", type=click.IntRange(1), default=6, show_default=True)
@with_output
def quantize(file, H, L, as_json):
    """r-matrix and quantization suites: CYBE, ρ, W, c, coalgebra-object identities."""
    from .rmat import rmatrix_suite
    from .uea import WordOverflow, quantize_suite
    try:
        af = load_algebra(file)
        T = _triple_from(af)
        others = af.alternate_triples() if af.kind == "triple" else []
    except InputError as exc:
        _input_error(exc)
    rep = Report("quantize_pipeline", {"H": H, "L": L, "name": af.name})
    try:
        rep.add(rmatrix_suite(T, others))
        rep.add(quantize_suite(T, H, L, others[0] if others else None))
    except WordOverflow as exc:
        _overflow(exc, "increase --word-len")
    _finish(rep, as_json)


@main.command()
@click.argument("file", type=click.Path(dir_okay=False))
@click.option("-S", "--max-weight", "S", type=click.IntRange(1), default=4, show_default=True)
@click.option("-L", "--word-len", "L", type=click.IntRange(1), default=6, show_default=True)
@click.option("-H", "--hbar-order", "H", type=click.IntRange(1), default=3, show_default=True)
@with_output
def koszul(file, S, L, H, as_json):
    """Twisted complex Hom(U(ħh₋), U(h₊)) and its cohomology."""
    from .koszul import koszul_suite
    from .uea import WordOverflow
    try:
        T = _triple_from(load_algebra(file))
    except InputError as exc:
        _input_error(exc)
    try:
        rep = koszul_suite(T, S, L, H)
    except WordOverflow as exc:
        _overflow(exc, "increase --word-len")
    _finish(rep, as_json)


def _parse_vars(text):
    names = [v.strip() for v in text.split(",") if v.strip()]
    if not names or len(set(names)) != len(names) or len(names) > 2:
        raise click.BadParameter("give one or two distinct variable names, e.g. z or z,w")
    return names


@main.command()
@click.option("--g", "gfile", required=True, type=click.Path(dir_okay=False), help="Base algebra file with β.")
@click.option("-N", "--truncation", "--N", "N", type=click.IntRange(1), default=3, show_default=True)
@click.option("--level", default="0", show_default=True, help="Level k as a rational string.")
@click.option("--modules", "module_files", multiple=True, type=click.Path(dir_okay=False),
              help="Module files; repeat the flag or list several after one flag.")
@click.option("--vars", "vars_", default="z", show_default=True)
@click.option("--r", "rfile", type=click.Path(dir_okay=False), help="Polynomial tail of r (default: Yang).")
@click.option("--cap", type=click.IntRange(0), default=2, show_default=True,
              help="Degree cap for the small variable in re-expanded series.")
@click.option("--jobs", type=click.IntRange(1), default=None, help="Worker processes (default: SHIFTED_MANIN_JOBS or 1).")
@with_output
def yangian(gfile, N, level, module_files, vars_, rfile, cap, jobs, as_json):
    """Loop double, r-matrix, translation, level and meromorphic tensor suites."""
    from .exactnum import rational
    from .fsf import WindowExhausted, yangian_suite
    from .uea import WordOverflow
    names = _parse_vars(vars_)
    try:
        k = rational(level)
    except (ValueError, ZeroDivisionError):
        _input_error(InputError(f"bad level {level!r}", "--level"))
    try:
        af = load_algebra(gfile)
        if af.kind != "base":
            raise InputError(f"expected a base algebra, got kind {af.kind!r}", af.source)
        g0 = af.base()
        mods = [load_module(p, g0) for p in module_files]
        r = load_rtail(rfile, g0) if rfile else None
    except InputError as exc:
        _input_error(exc)
    try:
        rep = yangian_suite(g0, N, k, mods, len(names), r, cap, jobs)
    except (WordOverflow, WindowExhausted) as exc:
        _overflow(exc, "increase the truncation or the pole bound")
    rep.params["vars"] = ",".join(names)
    _finish(rep, as_json)


def _extra_modules(argv):
    """Allow `--modules a.json b.json` as well as repeated flags."""
    out = []
    i = 0
    while i < len(argv):
        out.append(argv[i])
        if argv[i] == "--modules":
            i += 1
            first = True
            while i < len(argv) and not argv[i].startswith("-"):
                if not first:
                    out.append("--modules")
                out.append(argv[i])
                first = False
                i += 1
            continue
        i += 1
    return out


def run(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    return main.main(args=_extra_modules(argv), prog_name="shifted-manin")


if __name__ == "__main__":
    run()
