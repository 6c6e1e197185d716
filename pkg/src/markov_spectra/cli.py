"""Command-line front end: ``markov-spectra <subcommand> [action] [options]``.

Exit codes: 0 success, 1 unknown subcommand, 2 invalid input, 3 resource
limit.  Output is JSON (``schema: 1``, sorted keys, decimals as strings) or
CSV, and is byte-identical for identical arguments.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from . import cantor, dimension, diophantine, markov_tree, spectra, sumset, values
from .algebraic import AlgebraicValue, QuadSurd
from .cf import PeriodicCF, convergents, periodic_value, surd_cf
from .exceptions import ResourceError, SpectraError, ValidationError
from .words import BiWord

SCHEMA = 1


@dataclass(frozen=True)
class RunConfig:
    precision: int          # decimal digits shown
    bits: int               # binary working precision (>= 64)
    seed: int
    depth: int | None
    word_len: int | None
    budget: int
    fmt: str
    out: str | None
    threads: int

    @classmethod
    def from_args(cls, ns) -> "RunConfig":
        if ns.precision < 1:
            raise ValidationError("--precision must be >= 1")
        if ns.budget < 1:
            raise ValidationError("--budget must be positive")
        if ns.threads < 1:
            raise ValidationError("--threads must be >= 1")
        bits = max(64, math.ceil(ns.precision * math.log2(10)) + 16)
        fmt = ns.format or ("csv" if ns.command == "dcurve" else "json")
        return cls(ns.precision, bits, ns.seed, ns.depth, ns.wordlen, ns.budget,
                   fmt, ns.out, ns.threads)


# -- op registry -------------------------------------------------------------------
# library operation -> (subcommand, action)
OPS: dict[str, tuple[str, str, Callable]] = {
    "convergents": ("cf", "convergents", convergents),
    "periodic_value": ("cf", "value", periodic_value),
    "surd_cf": ("cf", "expand", surd_cf),
    "f_value": ("cf", "f", values.f_value),
    "markov_value": ("cf", "markov", values.markov_value),
    "lagrange_value": ("cf", "lagrange", values.lagrange_value),
    "approximation_diagnostics": ("cf", "diagnostics", diophantine.approximation_diagnostics),
    "khintchine_levy_estimate": ("cf", "kl", diophantine.khintchine_levy_estimate),
    "vieta_children": ("tree", "children", markov_tree.vieta_children),
    "enumerate_triples": ("tree", "enumerate", markov_tree.enumerate_triples),
    "lagrange_number": ("tree", "lagrange", markov_tree.lagrange_number),
    "unicity_report": ("tree", "unicity", markov_tree.unicity_report),
    "validate": ("cover", "validate", cantor.validate),
    "cylinder_cover": ("cover", "cylinders", cantor.cylinder_cover),
    "thickness_bound": ("cover", "thickness", cantor.thickness_bound),
    "minkowski_sum_cover": ("sumset", "sum", sumset.minkowski_sum_cover),
    "gap_lemma_certificate": ("sumset", "gap", sumset.gap_lemma_certificate),
    "hall_density_check": ("sumset", "hall", sumset.hall_density_check),
    "cover_dim_upper": ("dim", "cover", dimension.cover_dim_upper),
    "cover_dim_lower": ("dim", "cover", dimension.cover_dim_lower),
    "thermo_dimension": ("dim", "thermo", dimension.thermo_dimension),
    "dimension_function_lower": ("dcurve", "curve", dimension.dimension_function_lower),
    "spectrum_below_3": ("spectra", "below3", spectra.spectrum_below_3),
    "named_constants": ("spectra", "constants", spectra.named_constants),
    "form_minimum": ("spectra", "form", spectra.form_minimum),
    "dynamical_spectra": ("spectra", "dyn", spectra.dynamical_spectra),
}

SUBCOMMANDS = ("cf", "tree", "cover", "sumset", "dim", "dcurve", "spectra")


# -- rendering -----------------------------------------------------------------------

def _num(v, cfg: RunConfig) -> dict:
    """Exact value plus a decimal string at the requested precision."""
    if isinstance(v, Fraction) or isinstance(v, int):
        v = QuadSurd.from_rational(v)
    return {"exact": str(v), "decimal": v.to_decimal(cfg.precision)}


def _dec(x: float, digits: int = 12) -> str:
    return f"{x:.{digits}f}"


def _ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.replace(" ", "").split(",") if t]
    except ValueError:
        raise ValidationError(f"expected comma-separated integers, got {text!r}") from None


def _need(value, flag: str):
    if value is None:
        raise ValidationError(f"{flag} is required")
    return value


def _emit_json(payload: dict, cfg: RunConfig, command: str) -> str:
    doc = {"schema": SCHEMA, "command": command, "result": payload}
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _emit_csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


# -- subcommands --------------------------------------------------------------------

def cmd_cf(ns, cfg):
    act = ns.action
    if act == "convergents":
        digits = _ints(_need(ns.digits, "--digits"))
        rows = [[i, p, q] for i, (_, (p, q)) in enumerate(convergents(digits))]
        if cfg.fmt == "csv":
            return _emit_csv(["n", "p", "q"], rows)
        return {"convergents": [{"n": i, "p": str(p), "q": str(q)} for i, p, q in rows]}
    if act == "value":
        p = PeriodicCF(_ints(ns.pre or ""), _ints(_need(ns.period, "--period")))
        return {"cf": str(p), "value": _num(periodic_value(p), cfg)}
    if act == "expand":
        a, b, d, c = (_ints(_need(ns.surd, "--surd")) + [1])[:4]
        p = surd_cf(QuadSurd(a, b, d, c))
        return {"preperiod": list(p.preperiod), "period": list(p.period), "cf": str(p)}
    if act in ("f", "markov", "lagrange"):
        w = BiWord.parse(_need(ns.word, "--word"))
        if act == "f":
            v = values.f_value(w)
        elif act == "markov":
            v = values.markov_value(w, Fraction(1, 10 ** cfg.precision))
        else:
            v = values.lagrange_value(w)
        return {"word": str(w), "kind": act, "value": _num(v, cfg)}
    if act == "diagnostics":
        n_max = ns.nmax
        if ns.period is not None:
            word = PeriodicCF(_ints(ns.pre or ""), _ints(ns.period))
        else:
            word = _ints(_need(ns.digits, "--digits or --period"))
        rep = diophantine.approximation_diagnostics(word, n_max)
        return {"ok": rep.ok, "max_identity_residual": str(rep.max_identity_residual),
                "rows": [{"n": r.n, "p": str(r.p), "q": str(r.q),
                          "scaled_error": _dec(r.scaled_error),
                          "half_ok": r.half_ok, "hurwitz_ok": r.hurwitz_ok} for r in rep.rows]}
    if act == "kl":
        est = diophantine.khintchine_levy_estimate(ns.samples, cfg.depth or 1000, cfg.seed)
        return {"samples": ns.samples, "depth": cfg.depth or 1000, "seed": cfg.seed,
                "estimate": _dec(est), "reference": _dec(diophantine.KHINTCHINE_LEVY)}
    raise ValidationError(f"unknown cf action {act!r}")


def _triple(t):
    return [t.x, t.y, t.z]


def cmd_tree(ns, cfg):
    act = ns.action
    if act == "enumerate":
        ts = markov_tree.enumerate_triples(ns.zmax)
        if cfg.fmt == "csv":
            return _emit_csv(["x", "y", "z"], [_triple(t) for t in ts])
        return {"zmax": ns.zmax, "triples": [_triple(t) for t in ts]}
    if act == "children":
        t = markov_tree.MarkovTriple(*_ints(_need(ns.triple, "--triple")))
        return {"triple": _triple(t),
                "children": [_triple(c) for c in sorted(markov_tree.vieta_children(t))]}
    if act == "lagrange":
        v = markov_tree.lagrange_number(_need(ns.z, "--z"))
        return {"z": ns.z, "precision": cfg.precision, "value": _num(v, cfg)}
    if act == "unicity":
        pairs = markov_tree.unicity_report(ns.zmax)
        return {"zmax": ns.zmax, "collisions": [[_triple(a), _triple(b)] for a, b in pairs]}
    raise ValidationError(f"unknown tree action {act!r}")


def _spec(ns, attr="spec"):
    return cantor.load_spec(_need(getattr(ns, attr), f"--{attr.replace('_', '-')}"))


def cmd_cover(ns, cfg):
    spec = _spec(ns)
    act = ns.action
    if act == "validate":
        v = cantor.validate(spec)
        return {"spec": v.to_text(), "forbidden_count": len(v.forbidden),
                "states": v.automaton.n_states}
    depth = cfg.depth or 4
    if act == "cylinders":
        cov = cantor.cylinder_cover(spec, depth, cfg.budget)
        if cfg.fmt == "csv":
            return cov.to_csv()
        return {"depth": depth, "count": len(cov),
                "total_length": str(cov.total_length),
                "intervals": [[cantor.format_word(iv.word), str(iv.lo), str(iv.hi)] for iv in cov]}
    if act == "thickness":
        return {"depth": depth, "thickness_lower_bound": _dec(cantor.thickness_bound(spec, depth, cfg.budget))}
    raise ValidationError(f"unknown cover action {act!r}")


def cmd_sumset(ns, cfg):
    act = ns.action
    depth = cfg.depth or 3
    if act == "sum":
        s1 = _spec(ns)
        s2 = cantor.load_spec(ns.spec2) if ns.spec2 else s1
        c1 = cantor.cylinder_cover(s1, depth, cfg.budget)
        c2 = cantor.cylinder_cover(s2, depth, cfg.budget)
        sc = sumset.minkowski_sum_cover(c1, c2, cfg.budget)
        if cfg.fmt == "csv":
            return _emit_csv(["lo", "hi"], [[str(a), str(b)] for a, b in sc.intervals])
        return {"depths": list(sc.depths), "interval_count": len(sc),
                "intervals": [[str(a), str(b)] for a, b in sc.intervals]}
    if act == "gap":
        s1 = _spec(ns)
        s2 = cantor.load_spec(ns.spec2) if ns.spec2 else s1
        cert = sumset.gap_lemma_certificate(s1, s2, depth)
        return {"holds": cert.holds, "depth": depth,
                "thickness": [_dec(t) for t in cert.thickness],
                "hull_lengths": [_dec(t) for t in cert.hull_lengths],
                "max_gaps": [_dec(t) for t in cert.max_gaps]}
    if act == "hall":
        rep = sumset.hall_density_check(cfg.depth or 12, Fraction(ns.eps))
        return rep.to_dict()
    raise ValidationError(f"unknown sumset action {act!r}")


def cmd_dim(ns, cfg):
    spec = _spec(ns)
    method = ns.method
    est = dimension.estimate_dimension(spec, cfg.depth, cfg.word_len, method)
    return est.to_dict()


def _dcurve_point(args):
    t, word_len, alphabet = args
    return dimension.dimension_function_lower(t, word_len, alphabet)


def cmd_dcurve(ns, cfg):
    if ns.steps < 1:
        raise ValidationError("--steps must be >= 1")
    lo, hi = Fraction(ns.tmin), Fraction(ns.tmax)
    if hi < lo:
        raise ValidationError("--tmax must be >= --tmin")
    ts = [lo + (hi - lo) * i / ns.steps for i in range(ns.steps + 1)] if ns.steps else [lo]
    word_len = cfg.word_len or 7
    alphabet = tuple(_ints(ns.alphabet))
    jobs = [(t, word_len, alphabet) for t in ts]
    if cfg.threads > 1:
        with ProcessPoolExecutor(max_workers=cfg.threads) as ex:
            ds = list(ex.map(_dcurve_point, jobs))
    else:
        ds = [_dcurve_point(j) for j in jobs]
    rows = [[f"{float(t):.6f}", _dec(d, 8)] for t, d in zip(ts, ds)]
    if cfg.fmt == "json":
        return {"word_len": word_len, "points": rows}
    return _emit_csv(["t", "d_lb"], rows)


def _f_table(text: str, spec):
    kind, _, arg = text.partition(":")
    if kind == "cf":
        return spectra.truncated_f_table(spec.alphabet, int(arg or 3))
    if kind == "const":
        return spectra.CylinderFunction.constant(Fraction(arg), spec.alphabet)
    table = {}
    with open(text, encoding="utf-8") as fh:
        for row in csv.reader(fh):
            if not row or row[0].strip().startswith("#") or row[0].strip() == "word":
                continue
            table[cantor.expand_word(row[0])] = Fraction(row[1].strip())
    return spectra.CylinderFunction.from_table(table)


def _spectrum(sa, cfg):
    return [{"value": _num(v, cfg), "word": str(w)} for v, w in zip(sa.values, sa.words)]


def cmd_spectra(ns, cfg):
    act = ns.action
    if act == "constants":
        rows = spectra.named_constants(max(10, cfg.precision))
        return {"precision": cfg.precision, "constants": [c.to_dict() for c in rows]}
    if act == "below3":
        sa = spectra.spectrum_below_3(ns.count)
        return {"count": ns.count, "kind": sa.kind,
                "values": [_num(v, cfg) for v in sa.values]}
    if act == "dyn":
        spec = _spec(ns)
        f = _f_table(_need(ns.f_table, "--f-table"), spec)
        M, L = spectra.dynamical_spectra(spec, f, ns.max_period)
        return {"max_period": ns.max_period, "markov": _spectrum(M, cfg), "lagrange": _spectrum(L, cfg)}
    if act == "form":
        a, b, c = _ints(_need(ns.coeffs, "--coeffs"))
        q = spectra.QuadraticForm.normalized(a, b, c)
        m, r = spectra.form_minimum(q, ns.box)
        return {"coeffs": [a, b, c], "box": ns.box, "minimum": _num(m, cfg), "reciprocal": _num(r, cfg)}
    raise ValidationError(f"unknown spectra action {act!r}")


HANDLERS = {"cf": cmd_cf, "tree": cmd_tree, "cover": cmd_cover, "sumset": cmd_sumset,
            "dim": cmd_dim, "dcurve": cmd_dcurve, "spectra": cmd_spectra}


# -- parser -------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=20, help="decimal digits in output")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--depth", type=int, default=None)
    common.add_argument("--wordlen", type=int, default=None)
    common.add_argument("--budget", type=int, default=cantor.DEFAULT_BUDGET)
    common.add_argument("--format", choices=("json", "csv"), default=None,
                        help="json (default) or csv; dcurve defaults to csv")
    common.add_argument("--out", default=None, help="write output here instead of stdout")
    common.add_argument("--threads", type=int, default=1)

    p = argparse.ArgumentParser(prog="markov-spectra", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("cf", parents=[common], help="continued fractions and spectrum values")
    s.add_argument("action", choices=sorted({a for c, a, _ in OPS.values() if c == "cf"}))
    s.add_argument("--digits")
    s.add_argument("--pre")
    s.add_argument("--period")
    s.add_argument("--surd", help="a,b,d,c for (a + b sqrt d)/c")
    s.add_argument("--word", help="bi-infinite word, e.g. '(1)* | (2,2,1,1)*'")
    s.add_argument("--nmax", type=int, default=20)
    s.add_argument("--samples", type=int, default=1000)

    s = sub.add_parser("tree", parents=[common], help="Markov triples")
    s.add_argument("action", nargs="?", default="enumerate",
                   choices=("enumerate", "children", "lagrange", "unicity"))
    s.add_argument("--zmax", type=int, default=433)
    s.add_argument("--triple")
    s.add_argument("--z", type=int)

    s = sub.add_parser("cover", parents=[common], help="Gauss-Cantor covers and thickness")
    s.add_argument("action", choices=("validate", "cylinders", "thickness"))
    s.add_argument("--spec")

    s = sub.add_parser("sumset", parents=[common], help="sum-sets, gap lemma, Hall check")
    s.add_argument("action", choices=("sum", "gap", "hall"))
    s.add_argument("--spec", default="C4")
    s.add_argument("--spec2")
    s.add_argument("--eps", default="1/10000")

    s = sub.add_parser("dim", parents=[common], help="Hausdorff dimension estimates")
    s.add_argument("--spec")
    s.add_argument("--method", choices=("cover", "thermo", "all"), default="all")

    s = sub.add_parser("dcurve", parents=[common], help="CSV samples of the d(t) lower bound")
    s.add_argument("--tmin", default="3")
    s.add_argument("--tmax", default="7/2")
    s.add_argument("--steps", type=int, default=10)
    s.add_argument("--alphabet", default="1,2")

    s = sub.add_parser("spectra", parents=[common], help="spectrum tables")
    s.add_argument("action", choices=("constants", "below3", "dyn", "form"))
    s.add_argument("--count", type=int, default=3)
    s.add_argument("--spec")
    s.add_argument("--f-table", dest="f_table", help="cf:K, const:V, or a CSV of word,value")
    s.add_argument("--max-period", dest="max_period", type=int, default=4)
    s.add_argument("--coeffs", help="integer form a,b,c (scaled to discriminant 1)")
    s.add_argument("--box", type=int, default=20)
    return p


def dispatch(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    if not argv or argv[0] in ("-h", "--help"):
        parser.print_help(sys.stdout if argv else sys.stderr)
        return 0 if argv else 1
    if argv[0] not in SUBCOMMANDS:
        parser.print_usage(sys.stderr)
        print(f"markov-spectra: unknown subcommand {argv[0]!r}", file=sys.stderr)
        return 1
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports bad options with exit 2
        return int(exc.code or 0)
    try:
        cfg = RunConfig.from_args(ns)
        result = HANDLERS[ns.command](ns, cfg)
        text = result if isinstance(result, str) else _emit_json(result, cfg, ns.command)
    except ResourceError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return 3
    except (SpectraError, ValueError, OSError, ZeroDivisionError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return 2
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":  # pragma: no cover
    main()
