"""Command line front end.

Subcommands wrap the library's main entry points and print a report that is
byte-identical across reruns of the same invocation: no timestamps, no
environment echoes, and every number exact. Reports render as text or as
JSON (form coefficients keyed by canonical-word strings, grouped by
"level,form-degree,letters", with the convention ledger hash embedded).

Exit codes: 0 success, 1 failed check or infeasible computation, 2 usage or
parse error.
"""

import argparse
import json
import sys
from dataclasses import dataclass, field

from ._kernels import word_degree
from .acceptance import run_all
from .conventions import parse_overrides, using
from .descent import (
    ConventionViolation,
    curvature_pairing,
    omega_chain,
    omega0_class,
)
from .freelie import LieSeries, bch
from .generators import x_set
from .kv import (
    UnsolvableDegree,
    kv_residual,
    kv_solve,
    pentagon_residual,
    twist_residual,
)
from .rat import Q, rational
from .simplicial import ABELIAN, NONABELIAN, MixedChain, row_cohomology, total_differential
from .tangential import associator, is_saut
from .textio import ParseError, form_to_text, parse_series, series_to_text, word_key


def _series_payload(s):
    return {
        "text": series_to_text(s),
        "terms": {s.genset.word_string(w): str(c) for w, c in s.terms.items()},
    }


def _form_payload(form, level):
    degs = form.genset.degrees
    groups = {}
    for w, c in form.terms.items():
        key = f"{level},{word_degree(w, degs)},{len(w)}"
        groups.setdefault(key, {})[word_key(form.genset, w)] = str(c)
    return {"text": form_to_text(form), "coefficients": groups}


@dataclass
class Report:
    command: str
    config: list = field(default_factory=list)  # (key, value-as-str)
    overrides: list = field(default_factory=list)
    ledger: str = ""
    entries: list = field(default_factory=list)  # (label, text, json payload)
    checks: list = field(default_factory=list)  # (label, bool)
    criteria: list = field(default_factory=list)  # CriterionResult

    def add_entry(self, label, text, payload=None):
        self.entries.append((label, text, text if payload is None else payload))

    def add_check(self, label, ok):
        self.checks.append((label, bool(ok)))

    @property
    def ok(self):
        return all(ok for _, ok in self.checks) and all(c.ok for c in self.criteria)

    def to_text(self):
        lines = [f"command: {self.command}", f"conventions: {self.ledger}"]
        for item in self.overrides:
            lines.append(f"override: {item}")
        for key, value in self.config:
            lines.append(f"{key}: {value}")
        if self.entries or self.checks or self.criteria:
            lines.append("")
        for label, text, _ in self.entries:
            lines.append(f"{label}: {text}")
        for label, ok in self.checks:
            lines.append(f"check [{label}]: {'PASS' if ok else 'FAIL'}")
        for result in self.criteria:
            lines.append(result.line())
            lines.extend(result.detail_lines())
        lines.append(f"status: {'PASS' if self.ok else 'FAIL'}")
        return "\n".join(lines) + "\n"

    def to_json(self):
        payload = {
            "command": self.command,
            "ledger": self.ledger,
            "overrides": list(self.overrides),
            "config": dict(self.config),
            "entries": {label: data for label, _, data in self.entries},
            "checks": [{"label": label, "ok": ok} for label, ok in self.checks],
            "criteria": [
                {
                    "index": c.index,
                    "name": c.name,
                    "ok": c.ok,
                    "checks": [{"label": label, "ok": ok} for label, ok in c.checks],
                }
                for c in self.criteria
            ],
            "status": "pass" if self.ok else "fail",
        }
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"


# -- subcommands ---------------------------------------------------------------


def cmd_bch(args):
    genset = x_set(args.arity)
    left = parse_series(args.left, genset, args.degree)
    right = parse_series(args.right, genset, args.degree)
    result = bch(left, right, nmax=args.degree)
    report = Report(
        "bch",
        config=[
            ("degree", str(args.degree)),
            ("arity", str(args.arity)),
            ("left", args.left),
            ("right", args.right),
        ],
    )
    report.add_entry("bch", series_to_text(result), _series_payload(result))
    return report


def cmd_kv_solve(args):
    sol = kv_solve(args.degree, use_cache=not args.no_cache, cache_dir=args.cache_dir)
    report = Report("kv-solve", config=[("degree", str(args.degree))])
    for slot, comp in enumerate(sol.log.components, start=1):
        report.add_entry(
            f"log component {slot}", series_to_text(comp), _series_payload(comp)
        )
    for record in sol.gauge:
        report.add_entry("solve record", record, json.loads(record))
    report.add_check("residual vanishes", kv_residual(sol.g).is_zero())
    x2 = LieSeries.generator(x_set(2), "x2", args.degree)
    report.add_check(
        "letter-count-1 part is (x2/2, 0)",
        sol.log.components[0].component(1) == x2.scale(Q(1, 2))
        and sol.log.components[1].component(1).is_zero(),
    )
    return report


def cmd_descent(args):
    sol = kv_solve(args.degree, use_cache=not args.no_cache, cache_dir=args.cache_dir)
    chain = omega_chain(sol, args.s, args.degree)
    report = Report(
        "descent", config=[("degree", str(args.degree)), ("s", str(args.s))]
    )
    report.add_entry("lambda", str(chain.lam))
    for level in range(4):
        form = chain.component(level)
        report.add_entry(
            f"omega{3 - level} (level {level})",
            form_to_text(form),
            _form_payload(form, level),
        )
    cls = omega0_class(chain.omega0)
    report.add_entry("omega0 class", str(cls))
    top = MixedChain.single(
        args.degree, 0, curvature_pairing(args.degree).scale(chain.lam)
    )
    report.add_check(
        "D(chain) = lambda <F,F> at level 0",
        total_differential(chain.mixed(), NONABELIAN) == top,
    )
    report.add_check("lambda = 1/2", chain.lam == Q(1, 2))
    report.add_check("omega0 class = -1/12", cls == Q(-1, 12))
    return report


def cmd_pentagon(args):
    sol = kv_solve(args.degree, use_cache=not args.no_cache, cache_dir=args.cache_dir)
    phi = associator(sol.g)
    report = Report("pentagon", config=[("degree", str(args.degree))])
    shown = phi.log.truncate(min(3, args.degree))
    for slot, comp in enumerate(shown.components, start=1):
        report.add_entry(
            f"associator log component {slot} (letters <= {shown.nmax})",
            series_to_text(comp),
            _series_payload(comp),
        )
    report.add_check("associator is special", is_saut(phi))
    report.add_check(
        "pentagon residual is the identity",
        pentagon_residual(phi, args.degree).log.is_zero(),
    )
    report.add_check(
        "twist residual is the identity", twist_residual(sol.g).log.is_zero()
    )
    return report


def cmd_cohomology(args):
    variant = NONABELIAN if args.variant == "nonabelian" else ABELIAN
    dim_ker, dim_im, dim_coh = row_cohomology(
        variant, args.form_degree, args.level, args.letters
    )
    report = Report(
        "cohomology",
        config=[
            ("variant", args.variant),
            ("form-degree", str(args.form_degree)),
            ("level", str(args.level)),
            ("letters", str(args.letters)),
        ],
    )
    report.add_entry("dim kernel", str(dim_ker), dim_ker)
    report.add_entry("dim image", str(dim_im), dim_im)
    report.add_entry("dim cohomology", str(dim_coh), dim_coh)
    return report


def cmd_verify_all(args):
    report = Report("verify-all", config=[("degree", str(args.degree))])
    report.criteria = run_all(args.degree)
    return report


# -- parser and entry point -----------------------------------------------------


def _rational_arg(text):
    try:
        return rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r} ({exc})")


def _int_at_least(minimum):
    def convert(text):
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
        if value < minimum:
            raise argparse.ArgumentTypeError(f"must be at least {minimum}")
        return value

    return convert


def build_parser():
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument(
        "--format", choices=("text", "json"), default="text", help="output format"
    )
    shared.add_argument(
        "--convention",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override a convention dial (repeatable); the report logs it",
    )
    shared.add_argument("--cache-dir", default=None, help="solver cache directory")
    shared.add_argument(
        "--no-cache", action="store_true", help="ignore any solver cache"
    )

    parser = argparse.ArgumentParser(
        prog="liedescent",
        description="exact universal calculus on free graded Lie algebras",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("bch", parents=[shared], help="Baker-Campbell-Hausdorff product")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--degree", type=int, default=6, help="letter-count truncation")
    p.add_argument("--arity", type=int, default=2, help="alphabet size x1..xn")
    p.set_defaults(handler=cmd_bch)

    p = sub.add_parser("kv-solve", parents=[shared], help="solve the defining equation")
    p.add_argument("--degree", type=_int_at_least(2), default=6)
    p.set_defaults(handler=cmd_kv_solve)

    p = sub.add_parser("descent", parents=[shared], help="build the descent chain")
    p.add_argument("--degree", type=_int_at_least(2), default=5)
    p.add_argument("--s", type=_rational_arg, default=Q(0), help="gauge-family parameter")
    p.set_defaults(handler=cmd_descent)

    p = sub.add_parser("pentagon", parents=[shared], help="associator checks")
    p.add_argument("--degree", type=_int_at_least(2), default=6)
    p.set_defaults(handler=cmd_pentagon)

    p = sub.add_parser("cohomology", parents=[shared], help="row cohomology ranks")
    p.add_argument("--form-degree", type=int, required=True)
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--letters", type=int, required=True)
    p.add_argument(
        "--variant", choices=("nonabelian", "abelian"), default="nonabelian"
    )
    p.set_defaults(handler=cmd_cohomology)

    p = sub.add_parser("verify-all", parents=[shared], help="run the full checklist")
    p.add_argument("--degree", type=_int_at_least(4), default=6)
    p.set_defaults(handler=cmd_verify_all)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        conventions = parse_overrides(args.convention)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    with using(conventions) as conv:
        try:
            report = args.handler(args)
        except ParseError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        except (UnsolvableDegree, ConventionViolation, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        report.ledger = conv.ledger_hash()
        report.overrides = list(args.convention)
        text = report.to_json() if args.format == "json" else report.to_text()
    sys.stdout.write(text)
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())
