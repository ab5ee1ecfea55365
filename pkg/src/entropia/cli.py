"""``entropia`` command line.

Exit codes: 0 success, 1 an assert-mode scan found violations, 2 domain
error (bad field, omega mismatch, unknown property, ...), 64 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field, replace
from typing import Any, Sequence

from . import __version__
from . import arith_core as ac
from . import entropy as en
from . import quad_ideals as qi
from . import verifier as vf
from .arith_core import DomainError

EX_OK, EX_VIOLATED, EX_DOMAIN, EX_USAGE = 0, 1, 2, 64
SIG_DIGITS = 12


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse exits with 2 by default
        raise UsageError(f"{self.prog}: {message}")


def fmt_num(x: Any) -> str:
    if isinstance(x, float):
        return "0.0" if x == 0 else f"{x:#.{SIG_DIGITS}g}"
    if isinstance(x, (list, tuple)):
        return "[" + ", ".join(fmt_num(v) for v in x) + "]"
    return str(x)


def round_sig(x: float) -> float:
    return float(f"{x:.{SIG_DIGITS}g}")


def _jsonable(x: Any) -> Any:
    if isinstance(x, float):
        return round_sig(x)
    if isinstance(x, (tuple, list)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if hasattr(x, "value") and isinstance(getattr(x, "value"), str):  # enums
        return x.value
    return x


@dataclass
class OutputRecord:
    command: str
    inputs: dict[str, Any]
    results: dict[str, dict[str, Any]] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def add(self, name: str, value: Any, unit: str | None = None) -> None:
        self.results[name] = {"value": value, "unit": unit}

    def to_dict(self) -> dict[str, Any]:
        return _jsonable({
            "command": self.command,
            "inputs": self.inputs,
            "results": self.results,
            "notes": self.notes,
        })

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> OutputRecord:
        return cls(data["command"], dict(data["inputs"]),
                   {k: dict(v) for k, v in data["results"].items()}, list(data["notes"]))

    def to_text(self) -> str:
        lines = [self.command]
        for key, value in self.inputs.items():
            lines.append(f"  {key} = {value}")
        for name, res in self.results.items():
            unit = f" {res['unit']}" if res.get("unit") else ""
            lines.append(f"  {name} = {fmt_num(res['value'])}{unit}")
        lines.extend(f"  note: {n}" for n in self.notes)
        return "\n".join(lines)


def _emit(records: Sequence[OutputRecord], fmt: str, out) -> None:
    if fmt == "json":
        payload = records[0].to_dict() if len(records) == 1 else [r.to_dict() for r in records]
        out.write(json.dumps(payload, indent=2) + "\n")
    else:
        out.write("\n".join(r.to_text() for r in records) + "\n")


def _entropy_value(args, record: OutputRecord, name: str, nats: float) -> None:
    value, unit = en.to_base(nats, args.base)
    record.add(name, value, unit)


# ---------------------------------------------------------------- number commands

def cmd_entropy(args) -> list[OutputRecord]:
    f = ac.factor(args.n)
    rec = OutputRecord(f"entropy {args.n}", {"n": args.n, "factorization": str(f)})
    rec.add("Omega", ac.big_omega(f))
    rec.add("omega", ac.omega(f))
    _entropy_value(args, rec, "H", en.entropy(f))
    rec.notes.append("H = log Omega - (1/Omega) sum a_i log a_i")
    if args.n == 1:
        rec.notes.append("H(1) = 0 by convention")
    return [rec]


def cmd_divergence(args) -> list[OutputRecord]:
    fn, fm = ac.factor(args.n), ac.factor(args.m)
    pairing = _parse_pairing(args.pairing) if args.pairing else None
    rec = OutputRecord(f"divergence {args.n} {args.m}",
                       {"n": args.n, "m": args.m, "n_factorization": str(fn), "m_factorization": str(fm)})
    _entropy_value(args, rec, "D", en.divergence(fn, fm, pairing))
    rec.notes.append("exponents paired by ascending prime" if pairing is None else f"explicit pairing {pairing}")
    return [rec]


def _parse_pairing(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"bad --pairing {text!r}; expected comma-separated indices") from None


def cmd_factor(args) -> list[OutputRecord]:
    f = ac.factor(args.n)
    rec = OutputRecord(f"factor {args.n}", {"n": args.n})
    rec.results["factorization"] = {"value": [list(pa) for pa in f.pairs], "unit": None}
    rec.add("Omega", ac.big_omega(f))
    rec.add("omega", ac.omega(f))
    rec.add("radical", ac.radical(f).value)
    rec.add("tau", ac.divisor_count(f))
    rec.add("tau_e", ac.tau_e(f))
    return [rec]


def cmd_expdivisors(args) -> list[OutputRecord]:
    f = ac.factor(args.n)
    divs = ac.exp_divisors(f)
    rec = OutputRecord(f"expdivisors {args.n}", {"n": args.n, "factorization": str(f)})
    rec.results["divisors"] = {"value": [d.value for d in divs], "unit": None}
    rec.add("tau_e", ac.tau_e(f))
    return [rec]


def cmd_ideal(args) -> list[OutputRecord]:
    K = qi.make_field(args.d)
    ideal = qi.factor_principal(K, args.m)
    rec = OutputRecord(f"ideal {args.d} {args.m}",
                       {"field": str(K), "discriminant": K.discriminant, "m": args.m})
    rec.results["labels"] = {"value": [str(x.label) for x in ideal.factors], "unit": None}
    rec.results["e"] = {"value": list(ideal.exponents), "unit": None}
    rec.results["f"] = {"value": [x.f for x in ideal.factors], "unit": None}
    rec.add("Omega", ideal.big_omega)
    rec.add("omega", ideal.omega)
    h = qi.ideal_entropy(ideal)
    _entropy_value(args, rec, "H", h)
    rec.add("tau", qi.ideal_tau(ideal))
    rec.add("tau_e", qi.ideal_tau_e(ideal))
    if args.divergence_to:
        if args.divergence_to == "radical":
            other = qi.ideal_radical(ideal)
            target = "gamma(I)"
        else:
            try:
                m2 = int(args.divergence_to)
            except ValueError:
                raise UsageError("--divergence-to expects 'radical' or an integer") from None
            other = qi.factor_principal(K, m2)
            target = f"{m2}O_K"
        d = qi.ideal_divergence(ideal, other)
        _entropy_value(args, rec, f"D(I||{target})", d)
        if args.divergence_to == "radical":
            _entropy_value(args, rec, "D+H", d + h)
            rec.notes.append("D(I||gamma(I)) + H(I) = log omega(I)")
    return [rec]


# ---------------------------------------------------------------- worked examples

def _worked_examples() -> list[dict[str, Any]]:
    log = math.log
    F = ac.factor
    rows: list[dict[str, Any]] = []

    def row(label, computed, expected, printed=None, note=None):
        rows.append({
            "example": label,
            "computed": computed,
            "expected": expected,
            "printed": printed,
            "status": "ok" if printed is None else "misprint",
            "note": note,
        })

    row("H(10)", en.entropy(F(10)), log(2))
    row("H(100)", en.entropy(F(100)), log(2))
    row("H(8)", en.entropy(F(8)), 0.0)
    row("H(40)", en.entropy(F(40)), 0.25 * log(4**4 / 3**3), printed=2.2493,
        note="printed value is log(4^4/3^3), the 1/4 factor is dropped")
    row("D(100||200)", en.divergence(F(100), F(200)), 0.5 * log(25 / 24), printed=0.0088,
        note="printed value matches base-10 logarithms: 0.5*log10(25/24) = "
             f"{fmt_num(0.5 * math.log10(25 / 24))}")
    row("H(12)", en.entropy(F(12)), log(3) - 2 / 3 * log(2))
    row("H(6)", en.entropy(F(6)), log(2))
    row("H(180)", en.entropy(F(180)), log(5) - 4 / 5 * log(2))
    row("H(60)", en.entropy(F(60)), log(4) - 0.5 * log(2))
    K19 = qi.make_field(-19)
    row("H(35 O_K), K = Q(sqrt(-19))", qi.ideal_entropy(qi.factor_principal(K19, 35)), log(4))
    row("D(5 O_K || 7 O_K), K = Q(sqrt(-19))",
        qi.ideal_divergence(qi.factor_prime_ideal(K19, 5), qi.factor_prime_ideal(K19, 7)), 0.0)
    gauss = qi.factor_principal(qi.make_field(-1), 90)
    h90 = qi.ideal_entropy(gauss)
    d90 = qi.ideal_divergence(gauss, qi.ideal_radical(gauss))
    row("H(90 Z[i])", h90, log(6) - 2 / 3 * log(2))
    row("D(90 Z[i] || gamma)", d90, log(2 / 3) + 2 / 3 * log(2))
    row("D + H for 90 Z[i]", d90 + h90, log(4))
    return rows


def cmd_examples(args) -> int:
    rows = _worked_examples()
    for r in rows:
        r["abs_error"] = abs(r["computed"] - r["expected"])
    out = _open_out(args.out)
    try:
        if args.format == "json":
            out.write(json.dumps({"tool_version": __version__, "command": "examples",
                                  "examples": _jsonable(rows)}, indent=2) + "\n")
        else:
            for r in rows:
                line = f"{r['example']:38s} {fmt_num(r['computed'])}  expected {fmt_num(r['expected'])}  {r['status']}"
                if r["printed"] is not None:
                    line += f"  printed {r['printed']}: {r['note']}"
                out.write(line + "\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return EX_OK


# ---------------------------------------------------------------- verify

def _inputs_text(v: vf.Violation) -> str:
    def show(x):
        return "(" + ",".join(map(str, x)) + ")" if isinstance(x, tuple) else str(x)
    return ";".join(f"{k}={show(x)}" for k, x in v.inputs)


def report_to_dict(r: vf.ScanReport) -> dict[str, Any]:
    return _jsonable({
        "property": r.property,
        "claim": r.claim,
        "mode": r.mode,
        "verdict": r.verdict,
        "tested": r.tested,
        "violation_count": r.violation_count,
        "violations": [
            {"inputs": dict(v.inputs), "lhs": v.lhs, "rhs": v.rhs, "margin": v.margin}
            for v in r.violations
        ],
        "params": r.params,
        "elapsed_ms": r.elapsed_ms,
    })


def render_reports(reports: Sequence[vf.ScanReport], fmt: str, command: str) -> str:
    if fmt == "json":
        doc = {"tool_version": __version__, "command": command,
               "reports": [report_to_dict(r) for r in reports]}
        return json.dumps(doc, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["property", "inputs", "lhs", "rhs", "margin"])
        for r in reports:
            for v in r.violations:
                w.writerow([r.property, _inputs_text(v), fmt_num(v.lhs), fmt_num(v.rhs), fmt_num(v.margin)])
        return buf.getvalue()
    lines = []
    for r in reports:
        lines.append(f"{r.property:30s} {r.verdict.value:15s} tested={r.tested} "
                     f"violations={r.violation_count} ({r.elapsed_ms:.0f} ms)")
        for v in r.violations[:5]:
            lines.append(f"    {_inputs_text(v)}  lhs={fmt_num(v.lhs)} rhs={fmt_num(v.rhs)} margin={fmt_num(v.margin)}")
        if r.violation_count > 5:
            lines.append(f"    ... {r.violation_count - 5} more")
    return "\n".join(lines) + "\n"


def _open_out(path: str | None):
    return open(path, "w", encoding="utf-8", newline="") if path else sys.stdout


def _verify_command(args) -> str:
    """Canonical command line: options that change results, never --jobs or --out."""
    parts = ["entropia verify", f"--prop {args.prop}"]
    if args.max is not None:
        parts.append(f"--max {args.max}")
    if args.mode:
        parts.append(f"--mode {args.mode}")
    parts.append(f"--cap {args.cap}")
    parts.append(f"--tol {args.tol!r}")
    return " ".join(parts)


def cmd_verify(args) -> int:
    mode = vf.Mode(args.mode) if args.mode else None
    base = vf.ScanConfig(mode=mode, jobs=args.jobs, cap=args.cap, tolerance=args.tol)
    if args.prop == "all":
        pids = [p.id for p in vf.list_properties()]

        def per_property(pid: vf.PropertyId) -> vf.ScanConfig:
            if args.max is None or pid.bound_key is None:
                return base
            # --max only lowers bounds here so pair scans stay tractable
            return replace(base, n_max=min(pid.defaults[pid.bound_key], args.max))
    else:
        vf.get_property(args.prop)
        pids = [args.prop]

        def per_property(pid: vf.PropertyId) -> vf.ScanConfig:
            return replace(base, n_max=args.max)

    reports = vf.run_all(base, pids, per_property)
    text = render_reports(reports, args.format, _verify_command(args))
    out = _open_out(args.out)
    try:
        out.write(text)
    finally:
        if out is not sys.stdout:
            out.close()
    failed = any(r.verdict is vf.Verdict.VIOLATED for r in reports)
    return EX_VIOLATED if failed else EX_OK


def cmd_list(args) -> int:
    for p in vf.list_properties():
        print(f"{p.id:30s} {p.mode_default.value:7s} {p.claim}")
    return EX_OK


# ---------------------------------------------------------------- parser

def _int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    return value


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="entropia", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"entropia {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def numeric(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--format", choices=("text", "json"), default="text")
        sp.add_argument("--base", choices=("e", "2", "10"), default="e",
                        help="display unit: e (nats), 2 (bits), 10 (hartleys)")
        return sp

    sp = numeric("entropy", "entropy H(n)")
    sp.add_argument("n", type=_int)
    sp = numeric("divergence", "Kullback-Leibler divergence D(n||m)")
    sp.add_argument("n", type=_int)
    sp.add_argument("m", type=_int)
    sp.add_argument("--pairing", help="comma-separated indices into m's exponents")
    sp = numeric("factor", "prime factorization and arithmetic functions")
    sp.add_argument("n", type=_int)
    sp = numeric("expdivisors", "exponential divisors of n")
    sp.add_argument("n", type=_int)
    sp = numeric("ideal", "decomposition of m O_K in Q(sqrt d)")
    sp.add_argument("d", type=_int)
    sp.add_argument("m", type=_int)
    sp.add_argument("--divergence-to", metavar="radical|M2")

    sp = sub.add_parser("examples", help="reproduce the worked examples and flag misprints")
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.add_argument("--out")

    sp = sub.add_parser("verify", help="run property scans")
    sp.add_argument("--prop", required=True, help="property id or 'all'")
    sp.add_argument("--max", type=_int, help="primary bound of the scan")
    sp.add_argument("--mode", choices=("assert", "survey"))
    sp.add_argument("--format", choices=("text", "json", "csv"), default="text")
    sp.add_argument("--jobs", type=_int, default=int(os.environ.get("ENTROPIA_JOBS", "1")))
    sp.add_argument("--cap", type=_int, default=vf.DEFAULT_CAP, help="violations kept per report")
    sp.add_argument("--tol", type=float, default=vf.DEFAULT_TOL)
    sp.add_argument("--out")

    sub.add_parser("list", help="list the property catalog")
    return p


_NUMERIC = {
    "entropy": cmd_entropy,
    "divergence": cmd_divergence,
    "factor": cmd_factor,
    "expdivisors": cmd_expdivisors,
    "ideal": cmd_ideal,
}


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
        if args.command in _NUMERIC:
            _emit(_NUMERIC[args.command](args), args.format, sys.stdout)
            return EX_OK
        if args.command == "verify":
            return cmd_verify(args)
        if args.command == "examples":
            return cmd_examples(args)
        return cmd_list(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EX_USAGE
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EX_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
