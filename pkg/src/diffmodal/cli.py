"""Command line: ``diffmodal {check,classify,laws}``.

Exit codes: 0 when every non-skipped law passes (or the command has nothing
to judge), 1 when some law fails, is frontier-limited or errors, 2 on a
configuration error.  MODALITY_SEED and MODALITY_RIG supply defaults that
explicit flags override.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import lawcheck, models
from .core import ModelParams
from .scalars import RigError, rig_from_name

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


class ConfigError(ValueError):
    pass


def _common(p):
    p.add_argument("--rig", default=None, help="Q, Z, Zmod:n, bool or nat (default Q, env MODALITY_RIG)")
    p.add_argument("--dim", type=int, default=2, help="dimension of the base modules")
    p.add_argument("--degree", type=int, default=3, help="letter-degree window N")
    p.add_argument("--nested-degree", type=int, default=None,
                   help="window for objects with nested !; defaults to --degree")
    p.add_argument("--copies", type=int, default=3, help="copy tags K enumerated for Diff")
    p.add_argument("--word-len", type=int, default=2, help="shuffle word length L for RB")
    p.add_argument("--seed", type=int, default=None, help="probe seed (default 42, env MODALITY_SEED)")
    p.add_argument("--json", action="store_true", help="machine-readable output")


def build_parser():
    parser = argparse.ArgumentParser(prog="diffmodal", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="run law suites on one model")
    check.add_argument("--model", required=True)
    check.add_argument("--suite", action="append", default=None,
                       help="suite name or 'all'; repeat or comma-separate (default all)")
    _common(check)

    classify = sub.add_parser("classify", help="six-column classification table")
    classify.add_argument("--model", action="append", default=None,
                          help="model to classify; repeatable (default: the six separating examples)")
    _common(classify)

    laws = sub.add_parser("laws", help="list the law catalog")
    laws.add_argument("--filter", default=None, help="name prefix or suite name")
    laws.add_argument("--json", action="store_true")
    return parser


def params_from_args(args, environ=os.environ) -> ModelParams:
    rig_name = args.rig or environ.get("MODALITY_RIG") or "Q"
    try:
        rig = rig_from_name(rig_name)
    except RigError as exc:
        raise ConfigError(str(exc)) from None
    seed = args.seed
    if seed is None:
        raw = environ.get("MODALITY_SEED", "42")
        try:
            seed = int(raw)
        except ValueError:
            raise ConfigError(f"MODALITY_SEED must be an integer, got {raw!r}") from None
    for flag in ("dim", "copies", "word_len"):
        if getattr(args, flag) < 1:
            raise ConfigError(f"--{flag.replace('_', '-')} must be at least 1")
    if args.degree < 0 or (args.nested_degree is not None and args.nested_degree < 0):
        raise ConfigError("degrees must be non-negative")
    return ModelParams(rig=rig, dim=args.dim, degree=args.degree, nested_degree=args.nested_degree,
                       copies=args.copies, word_len=args.word_len, seed=seed)


def _model(name, params):
    try:
        return models.build_model(name, params)
    except models.UnknownModel as exc:
        raise ConfigError(str(exc)) from None


def _suites(raw):
    names = [s.strip() for item in (raw or ["all"]) for s in item.split(",") if s.strip()]
    for s in names:
        if s != "all" and s not in lawcheck.SUITES:
            raise ConfigError(f"unknown suite {s!r}; choose from all, {', '.join(lawcheck.SUITES)}")
    return names


def check_report(model, suites) -> dict:
    """Run the suites and group the reports by the suite each law belongs to."""
    reports = lawcheck.run_suites(model, suites)
    grouped = {}
    for r in reports:
        grouped.setdefault(r.law.suite, []).append(r)
    return {
        "model": model.name,
        "rig": model.rig.name,
        "params": model.params.as_dict(),
        "seed": model.params.seed,
        "suites": [{"name": name, "laws": [r.as_dict() for r in rs]} for name, rs in grouped.items()],
    }


def report_exit_code(report) -> int:
    statuses = [law["status"] for s in report["suites"] for law in s["laws"]]
    bad = [st for st in statuses if st != lawcheck.SKIPPED]
    return EXIT_OK if all(st == lawcheck.PASS for st in bad) else EXIT_FAIL


def render_check(report) -> str:
    lines = [f"model {report['model']} over {report['rig']}, seed {report['seed']}"]
    for suite in report["suites"]:
        lines.append(f"[{suite['name']}]")
        for law in suite["laws"]:
            line = f"  {law['status']:<16} {law['name']:<26} coverage {law['coverage']}"
            if law.get("detail"):
                line += f"  ({law['detail']})"
            lines.append(line)
            w = law.get("witness")
            if w:
                where = f" [{w['instance']}]" if w.get("instance") else ""
                lines.append(f"      witness{where}: {w['label']}")
                lines.append(f"        lhs = {w['lhs']}")
                lines.append(f"        rhs = {w['rhs']}")
    counts = {}
    for suite in report["suites"]:
        for law in suite["laws"]:
            counts[law["status"]] = counts.get(law["status"], 0) + 1
    lines.append(", ".join(f"{n} {st}" for st, n in sorted(counts.items())))
    return "\n".join(lines)


def cmd_check(args, out) -> int:
    params = params_from_args(args)
    suites = _suites(args.suite)
    model = _model(args.model, params)
    report = check_report(model, suites)
    out.write((json.dumps(report, indent=2, ensure_ascii=False) if args.json else render_check(report)) + "\n")
    return report_exit_code(report)


def cmd_classify(args, out) -> int:
    params = params_from_args(args)
    names = args.model or list(models.DEFAULT_MODELS)
    built = [_model(n, params) for n in names]
    rows = [lawcheck.classify(m) for m in built]
    if args.json:
        out.write(json.dumps({"rig": params.rig.name, "seed": params.seed, "columns": list(lawcheck.COLUMNS),
                              "models": [r.as_dict() for r in rows]}, indent=2, ensure_ascii=False) + "\n")
    else:
        out.write(lawcheck.render_table(rows) + "\n")
    return EXIT_OK


def cmd_laws(args, out) -> int:
    entries = lawcheck.list_laws(args.filter)
    if args.json:
        out.write(json.dumps(entries, indent=2, ensure_ascii=False) + "\n")
    else:
        width = max((len(e["name"]) for e in entries), default=0)
        for e in entries:
            out.write(f"{e['name']:<{width}}  {e['suite']:<14} {e['anchor']}\n")
    return EXIT_OK


COMMANDS = {"check": cmd_check, "classify": cmd_classify, "laws": cmd_laws}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args, out)
    except ConfigError as exc:
        print(f"diffmodal: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
