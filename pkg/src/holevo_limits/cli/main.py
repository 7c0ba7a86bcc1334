"""Entry point: ``holevo-limits <subcommand> [options]``.

Exit codes: 0 when every check holds, 2 on a violated inequality, 1 on a
configuration error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import platform
import sys
import tempfile
import typing
from datetime import datetime, timezone
from importlib import resources
from pathlib import Path

import numpy as np
import pydantic
import scipy
from threadpoolctl import threadpool_limits

from .. import __version__
from ..qstate import StateError
from .configs import CONFIG_MODELS
from .runners import RUNNERS, Context, Outcome
from .serialization import dumps

EXIT_OK, EXIT_CONFIG, EXIT_VIOLATION = 0, 1, 2
OUTPUT_ENV = "HOLEVO_LIMITS_OUTPUT_DIR"
HELP = {
    "chi": "Holevo chi of a given or random ensemble",
    "mutual-info": "random sweep of I(X:Y) <= chi with saturation checks",
    "asymmetry": "U(1) or SO(3) asymmetry of a named, random or file state",
    "phase-sim": "exact Bayesian phase estimation and its bound chain",
    "rotation-sim": "covariant SO(3) estimation on an Euler grid",
    "rotation-bounds": "rotation and magnetic-field error bounds",
    "mmode-bounds": "multimode phase-error bounds",
    "eur-sweep": "random-state sweep of an entropic uncertainty relation",
    "mow-check": "maximum entropy of an integer variable at fixed variance",
    "rms-check": "RMS phase-error limits for the power-law probe",
}


class ConfigError(Exception):
    pass


def _is_list(annotation) -> bool:
    if typing.get_origin(annotation) is list:
        return True
    return any(_is_list(a) for a in typing.get_args(annotation))


def _flag_value(raw):
    """Decode JSON-looking flag values; leave the rest for pydantic to coerce."""
    if isinstance(raw, list):
        return [_flag_value(x) for x in raw]
    if isinstance(raw, str) and raw[:1] in "[{":
        try:
            return json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"flag value {raw!r} is not valid JSON: {exc.msg}") from None
    return raw


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="JSON config file; flags override its fields")
    common.add_argument("--out-dir", type=Path, help=f"output directory (default ${OUTPUT_ENV} or .)")
    common.add_argument("--name", help="report file stem (default: the subcommand)")
    common.add_argument("--threads", type=int, default=1, help="worker threads for sample sweeps")
    common.add_argument("--units", choices=("bits", "nats"), default="bits", help="units of the console summary")

    parser = argparse.ArgumentParser(prog="holevo-limits", description=__doc__.splitlines()[0])
    parser.add_argument("--list-experiments", action="store_true", help="print the relation to subcommand map")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand")
    for name, model in CONFIG_MODELS.items():
        sp = sub.add_parser(name, parents=[common], help=HELP[name])
        for field, info in model.model_fields.items():
            kw: dict = {"dest": f"field_{field}", "default": None, "metavar": field.upper()}
            if _is_list(info.annotation):
                kw["nargs"] = "+"
            sp.add_argument("--" + field.replace("_", "-"), **kw)
    return parser


def _key_line(text: str, key: str) -> str:
    for i, line in enumerate(text.splitlines(), 1):
        if f'"{key}"' in line:
            return f"line {i}: "
    return ""


def load_config(subcommand: str, args) -> tuple[pydantic.BaseModel, dict]:
    """Merge the config file with explicit flags and validate."""
    data: dict = {}
    output: dict = {}
    text = ""
    where = "flags"
    if args.config is not None:
        where = str(args.config)
        try:
            text = args.config.read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc.strerror}") from None
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{where}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
        if not isinstance(data, dict):
            raise ConfigError(f"{where}: top level must be a JSON object")
        named = data.pop("subcommand", subcommand)
        if named != subcommand:
            raise ConfigError(f"{where}: config is for {named!r}, not {subcommand!r}")
        output = data.pop("output", {}) or {}
        if not isinstance(output, dict) or set(output) - {"dir", "name"}:
            raise ConfigError(f"{where}: 'output' must be an object with optional 'dir' and 'name'")
    for key, val in vars(args).items():
        if key.startswith("field_") and val is not None:
            data[key[6:]] = _flag_value(val)
    model = CONFIG_MODELS[subcommand]
    try:
        cfg = model.model_validate(data)
    except pydantic.ValidationError as exc:
        lines = []
        for err in exc.errors():
            loc = ".".join(str(p) for p in err["loc"]) or "<root>"
            lines.append(f"{where}: {_key_line(text, str(err['loc'][0])) if text and err['loc'] else ''}{loc}: {err['msg']}")
        raise ConfigError("\n".join(lines)) from None
    return cfg, output


def versions() -> dict[str, str]:
    return {
        "holevo_limits": __version__,
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "pydantic": pydantic.VERSION,
        "python": platform.python_version(),
    }


def build_report(subcommand: str, cfg, outcome: Outcome) -> dict:
    checks = outcome.checks
    violations = [c for c in checks if not c["holds"]]
    tolerances = dict(outcome.tolerances)
    tolerances.update({c["name"]: c["tolerance"] for c in checks})
    return {
        "experiment": subcommand,
        "inputs": cfg.model_dump(mode="json"),
        "versions": versions(),
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "tolerances": tolerances,
        "results": outcome.results,
        "checks": checks,
        "min_slack": min((c["slack"] for c in checks), default=None),
        "min_margin": min((c["slack"] + c["tolerance"] for c in checks), default=None),
        "violations": violations,
        "status": "violation" if violations else "ok",
    }


def atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def csv_text(columns, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([repr(x) if isinstance(x, float) else x for x in r])
    return buf.getvalue()


def list_experiments(out=None) -> None:
    out = out or sys.stdout
    manifest = json.loads(resources.files("holevo_limits.cli").joinpath("manifest.json").read_text())
    width = max(len(e["relation"]) for e in manifest["experiments"])
    for e in manifest["experiments"]:
        print(f"{e['relation']:<{width}}  {e['subcommand']:<16}  holevo-limits {e['example']}", file=out)


def _show(value: float, unit: str, units: str) -> str:
    if unit == "bits" and units == "nats" and math.isfinite(value):
        return f"{value * math.log(2):.6g} nats"
    return f"{value:.6g} {unit}"


def summarize(report: dict, units: str, out=None) -> None:
    out = out or sys.stdout
    for c in report["checks"]:
        mark = "ok  " if c["holds"] else "FAIL"
        seed = f"  seed={c['seed']}" if "seed" in c and not c["holds"] else ""
        print(f"[{mark}] {c['name']}: slack {_show(c['slack'], c['unit'], units)} (tol {c['tolerance']:.1e}){seed}", file=out)
    print(f"status: {report['status']}", file=out)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.list_experiments:
        list_experiments()
        return EXIT_OK
    if args.subcommand is None:
        parser.print_usage(sys.stderr)
        print("error: a subcommand is required", file=sys.stderr)
        return EXIT_CONFIG
    if args.threads < 1:
        print("config error: --threads must be at least 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        cfg, output = load_config(args.subcommand, args)
        # single-threaded BLAS keeps results bit-identical for any --threads value
        with threadpool_limits(limits=1):
            outcome = RUNNERS[args.subcommand](cfg, Context(threads=args.threads))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (StateError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    report = build_report(args.subcommand, cfg, outcome)
    out_dir = args.out_dir or output.get("dir") or os.environ.get(OUTPUT_ENV) or "."
    stem = args.name or output.get("name") or args.subcommand
    out_dir = Path(out_dir)
    atomic_write(out_dir / f"{stem}.json", dumps(report))
    if outcome.rows:
        atomic_write(out_dir / f"{stem}.csv", csv_text(outcome.columns, outcome.rows))
    summarize(report, args.units)
    print(f"report: {out_dir / (stem + '.json')}")
    return EXIT_VIOLATION if report["violations"] else EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
