"""Command-line front end.

Usage::

    qclonedel reproduce [--format json|csv] [--out PATH]
    qclonedel run clone    --machine wz|bh [--xi X] [--alpha2 A ... | --alpha2-grid N]
    qclonedel run delete   --machine pb|imperfect|general|qiu [--delta D] [--sigma-theta T]
    qclonedel run pipeline --cloner wz|bh --deleter pb|imperfect [--convention paper|strict]
    qclonedel validate     --machine KIND | --params FILE

Exit codes: 0 success, 2 usage/parse/I-O error, 3 constraint violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from .config import (
    CLONERS,
    DELETERS,
    KINDS,
    ConfigError,
    build_machine,
    load_config_file,
    parse_machine_config,
)
from .errors import ConstraintError, QCloneDelError
from .machines import validate_machine
from .scenarios import (
    DEFAULT_GRID,
    GramConvention,
    alpha2_grid,
    clone_report,
    delete_report,
    pipeline_report,
    reproduce_paper,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CONSTRAINT = 3

REPRODUCE_COLUMNS = ["quantity", "paper_value", "simulated", "abs_error", "convention"]


def fmt_value(v: float) -> str:
    s = f"{v:.12f}"
    if s.startswith("-") and float(s) == 0.0:
        s = s[1:]
    return s


def fmt_error(v: float) -> str:
    return f"{v:.3e}"


def _num(s: str) -> float:
    return float(s)


# --- serialization --------------------------------------------------------


def reproduce_document(table) -> dict:
    rows = []
    for r in table.rows:
        rows.append(
            {
                "quantity": r.quantity,
                "paper_value": None if r.paper_value is None else _num(fmt_value(r.paper_value)),
                "simulated": _num(fmt_value(r.simulated)),
                "abs_error": None if r.abs_error is None else _num(fmt_error(r.abs_error)),
                "convention": r.convention,
                "passed": r.passed,
            }
        )
    return {"columns": REPRODUCE_COLUMNS, "rows": rows, "passed": table.passed, "notes": table.notes}


def reproduce_csv(doc: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(REPRODUCE_COLUMNS)
    for r in doc["rows"]:
        w.writerow(
            [
                r["quantity"],
                "" if r["paper_value"] is None else fmt_value(r["paper_value"]),
                fmt_value(r["simulated"]),
                "" if r["abs_error"] is None else fmt_error(r["abs_error"]),
                r["convention"],
            ]
        )
    return buf.getvalue()


def run_document(report, convention: str | None) -> dict:
    columns = list(report.rows[0].keys()) if report.rows else ["alpha2", *report.averages]
    return {
        "scenario": report.scenario,
        "convention": convention,
        "columns": columns,
        "rows": [{k: _num(fmt_value(v)) for k, v in row.items()} for row in report.rows],
        "averages": {k: _num(fmt_value(v)) for k, v in report.averages.items()},
        "metadata": {k: _num(fmt_value(v)) for k, v in sorted(report.metadata.items()) if k != "convention"},
    }


def run_csv(doc: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    cols = doc["columns"]
    w.writerow(cols)
    for row in doc["rows"]:
        w.writerow([fmt_value(row[c]) for c in cols])
    w.writerow(["mean"] + [fmt_value(doc["averages"][c]) for c in cols[1:]])
    return buf.getvalue()


def dump_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def _emit(text: str, out) -> int:
    if out is None or out == "-":
        sys.stdout.write(text)
        return EXIT_OK
    try:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"error: cannot write {out}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


# --- commands -------------------------------------------------------------


def cmd_reproduce(args) -> int:
    table = reproduce_paper()
    doc = reproduce_document(table)
    text = dump_json(doc) if args.format == "json" else reproduce_csv(doc)
    status = _emit(text, args.out)
    if status != EXIT_OK:
        return status
    if not table.passed:
        for r in table.failures():
            print(f"FAIL {r.quantity}: |{r.simulated} - {r.paper_value}| > 1e-10", file=sys.stderr)
        return 1
    return EXIT_OK


def _flag_config(kind: str, args, role: str) -> dict:
    data: dict = {"kind": kind}
    if args.xi is not None and role in ("any", "cloner"):
        if kind != "bh":
            if role == "any":
                raise ConfigError(f"--xi does not apply to machine {kind!r}")
        else:
            data["xi"] = args.xi
    if role in ("any", "deleter"):
        if getattr(args, "delta", None) is not None:
            if kind != "imperfect":
                raise ConfigError(f"--delta does not apply to machine {kind!r}")
            data["delta"] = args.delta
        if args.sigma_theta is not None:
            if kind in CLONERS:
                raise ConfigError(f"--sigma-theta does not apply to machine {kind!r}")
            data["sigma_theta"] = args.sigma_theta
    if kind == "qiu":
        # collapse table; other couplings need a config file
        data.update({"a0": [1.0, 0.0], "b0": [0.0, 0.0], "a1": [1.0, 0.0], "b1": [0.0, 0.0]})
    if kind == "general":
        raise ConfigError("the general deleter needs --params FILE")
    return data


def _machine_data(args, role: str = "any") -> dict:
    if args.params:
        data = load_config_file(args.params)
        if role in ("cloner", "deleter"):
            if not isinstance(data, dict) or role not in data:
                raise ConfigError(f"pipeline params file must contain a {role!r} object")
            return data[role]
        return data
    kind = getattr(args, "machine" if role == "any" else role, None)
    if kind is None:
        flag = {"any": "--machine", "cloner": "--cloner", "deleter": "--deleter"}[role]
        raise ConfigError(f"{flag} or --params is required")
    return _flag_config(kind, args, role)


def _grid(args):
    if args.alpha2:
        return [float(x) for x in args.alpha2]
    return alpha2_grid(args.alpha2_grid or DEFAULT_GRID)


def cmd_run(args) -> int:
    grid = _grid(args)
    convention = None
    if args.scenario == "pipeline":
        cloner_cfg = parse_machine_config(_machine_data(args, "cloner"))
        deleter_cfg = parse_machine_config(_machine_data(args, "deleter"))
        if cloner_cfg.kind not in CLONERS:
            raise ConfigError(f"{cloner_cfg.kind!r} is not a cloner")
        if deleter_cfg.kind not in DELETERS:
            raise ConfigError(f"{deleter_cfg.kind!r} is not a deleter")
        convention = GramConvention(args.convention or "paper")
        report = pipeline_report(
            build_machine(cloner_cfg), build_machine(deleter_cfg), convention, grid
        )
        convention = convention.value
    else:
        cfg = parse_machine_config(_machine_data(args))
        if args.convention is not None:
            print("warning: --convention only applies to pipelines; ignored", file=sys.stderr)
        if args.scenario == "clone":
            if cfg.kind not in CLONERS:
                raise ConfigError(f"{cfg.kind!r} is not a cloner")
            report = clone_report(build_machine(cfg), grid)
        else:
            if cfg.kind not in DELETERS:
                raise ConfigError(f"{cfg.kind!r} is not a deleter")
            report = delete_report(build_machine(cfg), grid)
    doc = run_document(report, convention)
    text = dump_json(doc) if args.format == "json" else run_csv(doc)
    return _emit(text, args.out)


def cmd_validate(args) -> int:
    cfg = parse_machine_config(_machine_data(args))
    try:
        m = build_machine(cfg, check=False)
    except ConstraintError as exc:
        print(f"constraint {exc.equation}: VIOLATED", file=sys.stdout)
        print(str(exc), file=sys.stderr)
        return EXIT_CONSTRAINT
    report = validate_machine(m)
    for line in report.lines()[:-1]:
        print(line)
    for key in ("gg", "hh", "k", "k1", "M2", "xi", "A0", "A1"):
        if key in m.info:
            name = {"gg": "gg*", "hh": "hh*", "A0": "<A0|A0>", "A1": "<A1|A1>"}.get(key, key)
            print(f"{name} = {fmt_value(m.info[key])}")
    print(report.lines()[-1])
    return EXIT_OK if report.passed else EXIT_CONSTRAINT


# --- parser ---------------------------------------------------------------


def _add_machine_flags(p, pipeline=False):
    if pipeline:
        p.add_argument("--cloner", choices=CLONERS)
        p.add_argument("--deleter", choices=DELETERS)
    else:
        p.add_argument("--machine", choices=KINDS)
    p.add_argument("--params", metavar="FILE", help="JSON machine config")
    p.add_argument("--xi", type=float, help="shrinking parameter of the bh cloner")
    p.add_argument("--delta", type=float, help="imperfect deleter on the chart gg*=1+delta, hh*=1-delta")
    p.add_argument("--sigma-theta", type=float, help="blank state cos(t)|0> + sin(t)|1>")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qclonedel", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reproduce", help="recompute every published value")
    p.add_argument("--format", choices=("json", "csv"), default="csv")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("run", help="evaluate a scenario over alpha^2")
    p.add_argument("scenario", choices=("clone", "delete", "pipeline"))
    _add_machine_flags(p, pipeline=True)
    p.add_argument("--machine", choices=KINDS)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--alpha2", type=float, action="append", metavar="A")
    g.add_argument("--alpha2-grid", type=int, metavar="N")
    p.add_argument("--convention", choices=("strict", "paper"))
    p.add_argument("--format", choices=("json", "csv"), default="csv")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("validate", help="check isometry and parameter constraints")
    _add_machine_flags(p)
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ConstraintError as exc:
        print(f"error: constraint violated: {exc.equation}", file=sys.stderr)
        print(str(exc), file=sys.stderr)
        return EXIT_CONSTRAINT
    except QCloneDelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
