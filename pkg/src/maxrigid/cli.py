"""Command line runner: ``maxrigid run|list|validate``.

Exit codes: 0 when every check passes, 1 when a check fails, 2 on a
configuration or budget error.
"""

import argparse
import datetime
import hashlib
import json
import os
import platform
import sys
import time
import warnings
from pathlib import Path

import jsonschema

from . import __version__
from .exceptions import BudgetExceeded, ConfigError
from .experiments import CHECK_VOCABULARY_VERSION, EXPERIMENTS
from .io import to_jsonable, write_json, write_table

__all__ = ["ExperimentConfig", "ExperimentReport", "load_config", "validate_config", "run_experiment",
           "emit_plot_data", "main"]

OUTDIR_ENV = "MAXRIGID_OUTDIR"
DEFAULT_OUTDIR = "results"

BASE_SCHEMA = {
    "type": "object",
    "required": ["experiment", "seed"],
    "additionalProperties": False,
    "properties": {
        "experiment": {"type": "string", "enum": sorted(EXPERIMENTS)},
        "seed": {"type": "integer", "minimum": 0},
        "params": {"type": "object"},
        "outdir": {"type": "string"},
        "jobs": {"type": "integer", "minimum": 1, "maximum": 64},
    },
}


class ExperimentConfig:
    """Validated configuration with defaults filled in."""

    def __init__(self, experiment, seed, params=None, outdir=None, jobs=1):
        self.experiment = experiment
        self.seed = int(seed)
        self.params = dict(params or {})
        self.outdir = outdir
        self.jobs = int(jobs)

    @classmethod
    def from_dict(cls, data):
        validate_config(data)
        exp = EXPERIMENTS[data["experiment"]]
        params = {**exp.defaults, **data.get("params", {})}
        return cls(data["experiment"], data["seed"], params, data.get("outdir"), data.get("jobs", 1))

    def to_dict(self):
        out = {"experiment": self.experiment, "seed": self.seed, "params": self.params, "jobs": self.jobs}
        if self.outdir is not None:
            out["outdir"] = self.outdir
        return out


def validate_config(data):
    """Raise ConfigError unless ``data`` matches the base and experiment schemas."""
    try:
        jsonschema.validate(data, BASE_SCHEMA)
        exp = EXPERIMENTS[data["experiment"]]
        schema = {"type": "object", "additionalProperties": False, "properties": exp.schema}
        jsonschema.validate(data.get("params", {}), schema)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"{where}: {exc.message}") from None
    return data


def load_config(path):
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return ExperimentConfig.from_dict(data)


class ExperimentReport:
    """Config echo, checks, wall-clock and artifact paths of one run."""

    def __init__(self, config, checks, wall_clock, result, covers):
        self.config = config
        self.checks = checks
        self.wall_clock = wall_clock
        self.result = result
        self.covers = covers
        self.artifacts = []

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def to_dict(self):
        return {
            "config": self.config.to_dict(),
            "vocabulary_version": CHECK_VOCABULARY_VERSION,
            "covers": list(self.covers),
            "checks": [c.to_dict() for c in self.checks],
            "passed": self.passed,
            "wall_clock": self.wall_clock,
            "artifacts": [str(a) for a in self.artifacts],
        }


def run_experiment(config):
    """Execute ``config`` and return the report (no files written)."""
    if isinstance(config, dict):
        config = ExperimentConfig.from_dict(config)
    exp = EXPERIMENTS[config.experiment]
    if not config.params.get("rho_list", True) and config.experiment == "phase_transition":
        raise ConfigError("rho_list must not be empty")
    if exp.guard is not None:
        exp.guard(config.params)
    t0 = time.perf_counter()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        result = exp.func(config.params, config.seed, config.jobs)
    wall = time.perf_counter() - t0
    names = [c.name for c in result.checks]
    missing = [c for c in exp.covers if names.count(c) != 1]
    if missing:
        raise RuntimeError(f"experiment {exp.name} did not report {missing} exactly once")
    return ExperimentReport(config, result.checks, wall, result, exp.covers)


def _run_dir(base, experiment):
    stamp = datetime.datetime.now(datetime.timezone.utc).strftime("%Y%m%dT%H%M%SZ")
    path = Path(base) / experiment / stamp
    i = 1
    while path.exists():
        path = Path(base) / experiment / f"{stamp}-{i}"
        i += 1
    path.mkdir(parents=True)
    return path


def emit_plot_data(report, directory):
    """Write tables as CSV + sidecar, documents as JSON, then ``manifest.json``.

    Data files depend only on (config, seed); wall-clock time and the
    directory stamp appear only in ``report.json`` and ``manifest.json``.
    """
    directory = Path(directory)
    files = []
    for name, table in sorted(report.result.tables.items()):
        csv_path, side = write_table(directory / f"{name}.csv", table.columns, table.rows, table.units, table.description)
        files.append({"file": csv_path.name, "kind": "table", "columns": list(table.columns),
                      "units": {c: table.units.get(c, "") for c in table.columns}, "sidecar": side.name})
    for name, doc in sorted(report.result.documents.items()):
        p = write_json(directory / f"{name}.json", doc)
        files.append({"file": p.name, "kind": "document"})
    for f in files:
        f["sha256"] = hashlib.sha256((directory / f["file"]).read_bytes()).hexdigest()
    report.artifacts = [directory / f["file"] for f in files]
    write_json(directory / "report.json", report.to_dict())
    manifest = {
        "experiment": report.config.experiment,
        "seed": report.config.seed,
        "package_version": __version__,
        "python": platform.python_version(),
        "files": files + [{"file": "report.json", "kind": "report"}],
    }
    write_json(directory / "manifest.json", manifest)
    return [directory / f["file"] for f in files] + [directory / "report.json", directory / "manifest.json"]


def _resolve_outdir(config, override):
    return override or os.environ.get(OUTDIR_ENV) or config.outdir or DEFAULT_OUTDIR


def _cmd_run(args):
    try:
        config = load_config(args.config)
        if args.jobs:
            config.jobs = args.jobs
        report = run_experiment(config)
    except (ConfigError, BudgetExceeded) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    outdir = _run_dir(_resolve_outdir(config, args.outdir), config.experiment)
    emit_plot_data(report, outdir)
    for c in report.checks:
        print(c.line())
    print(f"{config.experiment}: {'PASS' if report.passed else 'FAIL'} in {report.wall_clock:.2f}s -> {outdir}")
    return 0 if report.passed else 1


def _cmd_list(args):
    if args.json:
        print(json.dumps({name: {"covers": list(e.covers), "summary": e.summary,
                                 "default_config": {"experiment": name, "seed": 0, "params": to_jsonable(e.defaults)}}
                          for name, e in sorted(EXPERIMENTS.items())}, indent=2, sort_keys=True))
        return 0
    for name, e in sorted(EXPERIMENTS.items()):
        print(f"{name:22s} {','.join(e.covers):9s} {e.summary}")
        print(f"{'':22s} defaults: {json.dumps(to_jsonable(e.defaults), sort_keys=True)}")
    return 0


def _cmd_validate(args):
    try:
        config = load_config(args.config)
        exp = EXPERIMENTS[config.experiment]
        if exp.guard is not None:
            exp.guard(config.params)
    except (ConfigError, BudgetExceeded) as exc:
        print(f"invalid: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    print(f"valid: {config.experiment} (seed {config.seed})")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="maxrigid", description="Desk-scale maximal rigidity experiments.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run the experiment described by a JSON config")
    run.add_argument("config")
    run.add_argument("--outdir", help=f"output root (overrides ${OUTDIR_ENV} and the config)")
    run.add_argument("--jobs", type=int, help="worker processes for independent parameter cells")
    run.set_defaults(func=_cmd_run)
    ls = sub.add_parser("list", help="list experiments with their default configs")
    ls.add_argument("--json", action="store_true")
    ls.set_defaults(func=_cmd_list)
    val = sub.add_parser("validate", help="check a config against the schema and budgets")
    val.add_argument("config")
    val.set_defaults(func=_cmd_validate)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
