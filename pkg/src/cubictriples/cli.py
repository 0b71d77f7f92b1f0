"""Command-line front end.

Exit codes: 0 success, 1 usage or invalid input, 2 budget exceeded,
3 property violation (or a certificate that fails verification).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field

from .arith import FactorBudget, FactorizationTimeout
from .cubicfields import CubicHypothesisError, splitting_field_unramified
from .families import (
    CertificateParseError,
    TripleError,
    make_triple,
    search_n,
    validate_k,
    verify_certificate,
)
from .quadforms import (
    DEFAULT_ENUM_BUDGET,
    ClassGroup,
    EnumerationBudgetExceeded,
    fundamental_discriminant,
)
from . import sweeps

EXIT_OK, EXIT_INPUT, EXIT_BUDGET, EXIT_VIOLATION = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    params: dict = field(default_factory=dict)
    format: str = "table"
    budget_digits: int = 20
    budget_enum: int = DEFAULT_ENUM_BUDGET
    workers: int = 1
    seed: int = 0

    def __post_init__(self):
        for name in ("budget_digits", "budget_enum", "workers"):
            if getattr(self, name) < 1:
                raise UsageError(f"--{name.replace('_', '-')} must be positive")

    @property
    def factor_budget(self) -> FactorBudget:
        return FactorBudget(max_digits=self.budget_digits, max_iterations=200_000)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def parse_range(text: str) -> list[int]:
    """'1..25', '1,2,4' or '7'."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..", 1)
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    if not out:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return out


def _range_arg(text):
    try:
        return parse_range(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad range {text!r}: {exc}") from exc


# -- output -------------------------------------------------------------------


def _emit_rows(rows: list[dict], fmt: str, out) -> None:
    if not rows:
        return
    columns = list(dict.fromkeys(k for r in rows for k in r))
    if fmt == "json":
        for r in rows:
            out.write(json.dumps(r, ensure_ascii=False) + "\n")
    elif fmt == "csv":
        w = csv.DictWriter(out, fieldnames=columns, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    else:
        cells = [[str(r.get(c, "")) for c in columns] for r in rows]
        widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(columns)]
        out.write("  ".join(c.ljust(w) for c, w in zip(columns, widths)).rstrip() + "\n")
        for row in cells:
            out.write("  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip() + "\n")


def _emit_sweep(result: sweeps.SweepResult, cfg: RunConfig, out, verbose: bool) -> int:
    if cfg.format == "json":
        doc = result.as_dict() if verbose else {k: v for k, v in result.as_dict().items() if k != "rows"}
        out.write(json.dumps(doc, ensure_ascii=False) + "\n")
    else:
        rows = result.rows if verbose else result.violations
        _emit_rows(rows, cfg.format, out)
        if cfg.format == "table":
            stats = ", ".join(f"{k}={v}" for k, v in result.stats.items())
            out.write(f"{result.name}: {stats}\n")
            out.write(f"{result.name}: {'OK' if result.ok else 'VIOLATIONS FOUND'}\n")
    return EXIT_OK if result.ok else EXIT_VIOLATION


# -- commands -----------------------------------------------------------------


def _field_disc(args, cfg: RunConfig) -> int:
    if args.discriminant:
        return args.value
    return int(fundamental_discriminant(args.value, cfg.factor_budget))


def cmd_classnum(args, cfg: RunConfig, out) -> int:
    D = _field_disc(args, cfg)
    G = ClassGroup(D, form_class_number=args.form_class_number, max_disc=cfg.budget_enum)
    row = {
        "radicand": str(args.value),
        "disc": str(D),
        "kind": "h" if D < 0 else "h+ (narrow)",
        "class_number": G.order,
        "three_rank": G.three_rank(),
        "divisible_by_3": G.order % 3 == 0,
    }
    _emit_rows([row], cfg.format, out)
    return EXIT_OK


def cmd_classgroup(args, cfg: RunConfig, out) -> int:
    D = _field_disc(args, cfg)
    G = ClassGroup(D, form_class_number=args.form_class_number, max_disc=cfg.budget_enum)
    torsion = set(G.cube_kernel())
    rows = [
        {"class": i, "a": f.a, "b": f.b, "c": f.c, "cube_is_identity": i in torsion}
        for i, f in enumerate(G.representatives[: args.limit])
    ]
    if cfg.format == "json":
        doc = {
            "disc": str(D),
            "kind": "imaginary-ordinary" if D < 0 else "real-narrow",
            "class_number": G.order,
            "three_rank": G.three_rank(),
            "classes": rows,
        }
        out.write(json.dumps(doc) + "\n")
    else:
        _emit_rows(rows, cfg.format, out)
        if cfg.format == "table":
            out.write(f"disc={D} class_number={G.order} three_rank={G.three_rank()}"
                      f" shown={len(rows)}\n")
    return EXIT_OK


def cmd_cubic_check(args, cfg: RunConfig, out) -> int:
    report = splitting_field_unramified((args.a, args.b), all_primes=args.all_primes,
                                        budget=cfg.factor_budget)
    doc = {"cubic": {"a": str(args.a), "b": str(args.b)}, **report.as_dict()}
    status = EXIT_OK
    if args.oracle and report.unramified:
        D = int(fundamental_discriminant(report.disc, cfg.factor_budget))
        h = sweeps.class_number(D, cfg.budget_enum)
        doc.update(field_disc=str(D), class_number=h, divisible_by_3=h % 3 == 0)
        if h % 3:
            status = EXIT_VIOLATION
    if cfg.format == "json":
        out.write(json.dumps(doc) + "\n")
    else:
        rows = [{"p": c.p, "totally_ramified": c.totally_ramified, "condition": c.condition}
                for c in report.checked_primes]
        _emit_rows(rows, cfg.format, out)
        if cfg.format == "table":
            out.write(f"X^3 - ({args.a})X - ({args.b}): disc={report.disc} "
                      f"unramified={report.unramified}\n")
            if "class_number" in doc:
                out.write(f"field disc={doc['field_disc']} class number={doc['class_number']}\n")
    return status


def cmd_prop24(args, cfg, out) -> int:
    return _emit_sweep(sweeps.prop24_sweep(args.trange, cfg.budget_enum, cfg.workers), cfg, out, True)


def cmd_prop25(args, cfg, out) -> int:
    return _emit_sweep(sweeps.prop25_sweep(args.trange, cfg.budget_enum, cfg.workers), cfg, out, True)


def cmd_scholz_scan(args, cfg, out) -> int:
    return _emit_sweep(sweeps.scholz_scan(args.dmax, cfg.workers), cfg, out, args.verbose)


def cmd_lemma_fuzz(args, cfg, out) -> int:
    result = sweeps.lemma_fuzz(args.bound, args.samples, seed=cfg.seed,
                               max_disc=cfg.budget_enum, workers=cfg.workers)
    return _emit_sweep(result, cfg, out, args.verbose)


def cmd_triples(args, cfg: RunConfig, out) -> int:
    ok, reason = validate_k(args.k, cfg.factor_budget)
    if not ok:
        raise UsageError(reason)
    start = args.start
    for _ in range(args.count):
        n, rejected = search_n(args.k, start)
        for m, why in rejected:
            sys.stderr.write(f"rejected n={m}: {why}\n")
        cert = make_triple(args.k, n, cfg.factor_budget)
        if cfg.format == "json":
            out.write(cert.to_json() + "\n")
        else:
            rows = [{"k": cert.k, "n": cert.n, "t_n": cert.t_n, "target": e.target,
                     "reflected_radicand": e.reflected_radicand, "label": e.label,
                     "cubic": f"({e.witness_cubic.a}, {e.witness_cubic.b})",
                     "unramified": e.report.unramified} for e in cert.entries]
            _emit_rows(rows, cfg.format, out)
            if cfg.format == "table":
                out.write(f"all_checks={cert.all_checks} congruence={cert.congruence_check}"
                          f" flags={'; '.join(cert.flags)}\n")
        start = n + 1
    return EXIT_OK


def _read_certificates(path: str) -> list:
    text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    stripped = text.strip()
    if not stripped:
        raise CertificateParseError(path, "empty input")
    try:
        doc = json.loads(stripped)
    except json.JSONDecodeError:
        docs = []
        for i, line in enumerate(stripped.splitlines()):
            if line.strip():
                try:
                    docs.append(json.loads(line))
                except json.JSONDecodeError as exc:
                    raise CertificateParseError(f"{path}:{i + 1}", f"invalid JSON: {exc}") from exc
        return docs
    return doc if isinstance(doc, list) else [doc]


def cmd_verify(args, cfg: RunConfig, out) -> int:
    certs = _read_certificates(args.path)
    status = EXIT_OK
    rows = []
    for idx, data in enumerate(certs):
        audit = verify_certificate(data, cfg.factor_budget)
        if not audit.ok:
            status = EXIT_VIOLATION
        for item in audit.items:
            rows.append({"certificate": idx, "k": data.get("k"), "n": data.get("n"), **item.as_dict()})
    if cfg.format == "json":
        _emit_rows(rows, "json", out)
    else:
        shown = rows if args.verbose else [r for r in rows if r["status"] != "pass"]
        _emit_rows(shown, cfg.format, out)
        if cfg.format == "table":
            failed = sum(r["status"] == "fail" for r in rows)
            out.write(f"verified {len(certs)} certificate(s): {len(rows)} items, {failed} failed\n")
    return status


COMMANDS = {
    "classnum": cmd_classnum,
    "classgroup": cmd_classgroup,
    "cubic-check": cmd_cubic_check,
    "prop24": cmd_prop24,
    "prop25": cmd_prop25,
    "triples": cmd_triples,
    "verify": cmd_verify,
    "scholz-scan": cmd_scholz_scan,
    "lemma-fuzz": cmd_lemma_fuzz,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("table", "json", "csv"), default=None,
                        help="output format (default: json for triples, table otherwise)")
    common.add_argument("--budget-digits", type=int, default=20,
                        help="largest composite cofactor (in digits) rho will try to split")
    common.add_argument("--budget-enum", type=int, default=DEFAULT_ENUM_BUDGET,
                        help="largest |discriminant| the class-number oracle will enumerate")
    common.add_argument("--workers", type=int, default=1, help="process pool size for sweeps")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled sweeps")

    parser = _Parser(prog="cubictriples", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name in ("classnum", "classgroup"):
        p = sub.add_parser(name, parents=[common], help=f"{name} of Q(sqrt(radicand))")
        p.add_argument("value", type=int, help="radicand (or discriminant with --discriminant)")
        p.add_argument("--discriminant", action="store_true",
                       help="treat the value as a discriminant rather than a radicand")
        p.add_argument("--form-class-number", action="store_true",
                       help="allow non-fundamental discriminants (form class number of the order)")
        if name == "classgroup":
            p.add_argument("--limit", type=int, default=50, help="classes to list")

    p = sub.add_parser("cubic-check", parents=[common], help="ramification report for X^3 - aX - b")
    p.add_argument("a", type=int)
    p.add_argument("b", type=int)
    p.add_argument("--all-primes", action="store_true", help="also check every prime dividing D(f)")
    p.add_argument("--oracle", action="store_true", help="confirm 3 | h with the class-group oracle")

    for name in ("prop24", "prop25"):
        p = sub.add_parser(name, parents=[common], help=f"sweep the {name} family")
        p.add_argument("trange", type=_range_arg, help="t values, e.g. 1..25 or 1,2,4")

    p = sub.add_parser("triples", parents=[common], help="emit triple certificates")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--from", dest="start", type=int, default=1)

    p = sub.add_parser("verify", parents=[common], help="re-verify certificates (JSON or JSON lines)")
    p.add_argument("path", help="certificate file, or - for stdin")
    p.add_argument("-v", "--verbose", action="store_true", help="list passing items too")

    p = sub.add_parser("scholz-scan", parents=[common], help="3-rank reflection over squarefree d")
    p.add_argument("dmax", type=int)
    p.add_argument("-v", "--verbose", action="store_true", help="print every row")

    p = sub.add_parser("lemma-fuzz", parents=[common], help="local criteria vs class-group oracle")
    p.add_argument("bound", type=int)
    p.add_argument("samples", type=int, nargs="?", default=None,
                   help="check a seeded sample of this many qualifying cubics")
    p.add_argument("-v", "--verbose", action="store_true", help="print every row")
    return parser


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        fmt = args.format or ("json" if args.command == "triples" else "table")
        cfg = RunConfig(
            command=args.command,
            params={k: v for k, v in vars(args).items()
                    if k not in ("format", "budget_digits", "budget_enum", "workers", "seed", "command")},
            format=fmt,
            budget_digits=args.budget_digits,
            budget_enum=args.budget_enum,
            workers=args.workers,
            seed=args.seed,
        )
        if args.command == "triples" and args.count < 1:
            raise UsageError("--count must be positive")
        return COMMANDS[args.command](args, cfg, out)
    except (EnumerationBudgetExceeded, FactorizationTimeout) as exc:
        sys.stderr.write(f"budget exceeded: {exc}\n")
        return EXIT_BUDGET
    except CertificateParseError as exc:
        sys.stderr.write(f"parse error: {exc}\n")
        return EXIT_INPUT
    except OSError as exc:
        sys.stderr.write(f"I/O error: {exc}\n")
        return EXIT_INPUT
    except (UsageError, TripleError, CubicHypothesisError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


def run(argv: list[str] | None = None) -> tuple[int, str]:
    """Run the CLI in-process and capture stdout."""
    buf = io.StringIO()
    code = main(argv, buf)
    return code, buf.getvalue()
