"""Command-line driver.

    bilinear-bessel <command> --config <path> [--out <path>]
                    [--format csv|structured] [--jobs N]

Commands: kernel, norm, apply, experiment, suite. The config is an INI file
with a ``[run]`` section, optional ``[quadrature]``, ``[kernel]``, ``[norm]``,
``[apply]`` and ``[experiment]`` sections, and one ``[function.<name>]``
section per function. Exit status: 0 when every verdict passes, 1 when a
verdict fails, 2 on a configuration or execution error.
"""

import argparse
import configparser
import dataclasses
import math
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import BesselLabError, ConfigError
from .funcfam import from_record, lp_norm, to_record
from .kernel import PotentialParams, eval_bessel_kernel, eval_riesz_kernel, total_mass
from .lorentz import GridFunction, LorentzIndex, lorentz_norm
from .operator import QuadratureSpec, bilinear_bessel, linear_bessel
from .verify.catalog import CATALOG, run_experiment, validate_experiment
from .verify.report import ExperimentReport, reports_to_csv, reports_to_json

COMMANDS = ("kernel", "norm", "apply", "experiment", "suite")
FORMATS = ("csv", "structured")
JOBS_ENV = "BILINEAR_BESSEL_JOBS"

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


@dataclass
class RunConfig:
    command: str
    params: PotentialParams
    function_specs: list = field(default_factory=list)
    quadrature: QuadratureSpec = field(default_factory=QuadratureSpec)
    experiment_id: str | None = None
    output_path: str = ""
    output_format: str = "structured"
    options: dict = field(default_factory=dict)
    function_names: list = field(default_factory=list)


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

def _number(text, where):
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"{where}: expected a number, got {text!r}") from None


def _numbers(text, where):
    items = [t for t in (x.strip() for x in text.split(",")) if t]
    if not items:
        raise ConfigError(f"{where}: empty list")
    return tuple(_number(t, where) for t in items)


def _value(text, where):
    vals = _numbers(text, where)
    return vals[0] if len(vals) == 1 and "," not in text else vals


def _function_sections(cp):
    return [s for s in cp.sections() if s.startswith("function.")]


def _build_functions(cp):
    """Construct every [function.<name>] section; ``base`` refers to another name."""
    raw = {s.split(".", 1)[1]: dict(cp.items(s)) for s in _function_sections(cp)}
    built, referenced = {}, set()

    def build(name, stack=()):
        if name in built:
            return built[name]
        if name not in raw:
            raise ConfigError(f"unknown function {name!r}")
        if name in stack:
            raise ConfigError(f"cyclic base reference through {name!r}")
        items = dict(raw[name])
        if "kind" not in items:
            raise ConfigError(f"[function.{name}] needs a kind")
        rec = {"kind": items.pop("kind").strip()}
        for k, v in items.items():
            where = f"[function.{name}] {k}"
            if k == "base":
                referenced.add(v.strip())
                rec[k] = to_record(build(v.strip(), stack + (name,)))
            elif k in ("center", "shift"):
                rec[k] = _numbers(v, where)
            else:
                rec[k] = _number(v, where)
        try:
            func = from_record(rec)
        except BesselLabError as exc:
            raise ConfigError(f"[function.{name}]: {exc}") from None
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"[function.{name}]: {exc}") from None
        built[name] = func
        return func

    for name in raw:
        build(name)
    order = [n for n in raw if n not in referenced]
    return order, [built[n] for n in order]


def _quadrature(cp):
    if not cp.has_section("quadrature"):
        return QuadratureSpec()
    known = {f.name for f in dataclasses.fields(QuadratureSpec)}
    kw = {}
    for k, v in cp.items("quadrature"):
        if k not in known:
            raise ConfigError(f"[quadrature] unknown key {k!r}")
        x = _number(v, f"[quadrature] {k}")
        kw[k] = int(x) if k in ("radial_nodes", "angular_nodes") else x
    try:
        return QuadratureSpec(**kw)
    except BesselLabError as exc:
        raise ConfigError(f"[quadrature]: {exc}") from None


def _section(cp, name):
    return {k: v for k, v in cp.items(name)} if cp.has_section(name) else {}


def parse_config(text, command=None, out=None, fmt=None):
    """Parse and validate an INI document; every check happens here."""
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"config parse error: {exc}") from None
    run = _section(cp, "run")
    command = command or run.get("command", "").strip()
    if command not in COMMANDS:
        raise ConfigError(f"command must be one of {', '.join(COMMANDS)}, got {command!r}")
    if "n" not in run or "s" not in run:
        raise ConfigError("[run] needs n and s")
    n = _number(run["n"], "[run] n")
    s = _number(run["s"], "[run] s")
    try:
        params = PotentialParams(n, s)
    except BesselLabError as exc:
        raise ConfigError(f"[run]: {exc}") from None
    fmt = fmt or run.get("format", "structured").strip()
    if fmt not in FORMATS:
        raise ConfigError(f"format must be csv or structured, got {fmt!r}")
    out = out or run.get("out", "").strip() or f"report.{'json' if fmt == 'structured' else 'csv'}"
    names, funcs = _build_functions(cp)
    cfg = RunConfig(command, params, funcs, _quadrature(cp), output_path=out,
                    output_format=fmt, function_names=names)
    _validate_command(cfg, cp, run)
    return cfg


def _validate_command(cfg, cp, run):
    n = cfg.params.n
    if cfg.command == "kernel":
        opts = _section(cp, "kernel")
        radii = _numbers(opts.get("radii", "0.1, 0.5, 1, 2, 5"), "[kernel] radii")
        if any(r <= 0 for r in radii):
            raise ConfigError("[kernel] radii must be positive")
        cfg.options = {"radii": radii}
    elif cfg.command == "norm":
        if not cfg.function_specs:
            raise ConfigError("norm needs at least one [function.<name>] section")
        opts = _section(cp, "norm")
        p = _number(opts.get("p", "2"), "[norm] p")
        alpha = _number(opts.get("alpha", "inf"), "[norm] alpha")
        cells = int(_number(opts.get("cells", "4000"), "[norm] cells"))
        lo = _number(opts.get("lo", "-4"), "[norm] lo")
        hi = _number(opts.get("hi", "4"), "[norm] hi")
        if not (0 < p < math.inf and alpha > 0 and hi > lo and cells > 0):
            raise ConfigError("[norm] needs 0 < p < inf, alpha > 0, lo < hi, cells > 0")
        if cells ** n > 2e7:
            raise ConfigError("[norm] grid too large")
        cfg.options = {"p": p, "alpha": alpha, "lo": lo, "hi": hi, "cells": cells}
    elif cfg.command == "apply":
        if not 1 <= len(cfg.function_specs) <= 2:
            raise ConfigError("apply needs one function (linear) or two (bilinear)")
        opts = _section(cp, "apply")
        if "points" not in opts:
            raise ConfigError("[apply] needs points")
        pts = []
        for chunk in opts["points"].split(";"):
            if chunk.strip():
                pt = _numbers(chunk, "[apply] points")
                if len(pt) != n:
                    raise ConfigError(f"[apply] point {chunk.strip()!r} does not have {n} coordinates")
                pts.append(pt)
        if not pts:
            raise ConfigError("[apply] points is empty")
        cfg.options = {"points": pts}
    elif cfg.command == "experiment":
        eid = run.get("experiment_id", "").strip()
        if eid not in CATALOG:
            raise ConfigError(f"experiment needs experiment_id from the catalog: "
                              f"{', '.join(sorted(CATALOG))}")
        cfg.experiment_id = eid
        cfg.options = _experiment_options(cp, eid, cfg.params)
    else:
        include = run.get("include", "").strip()
        ids = [x.strip() for x in include.split(",") if x.strip()] or list(CATALOG)
        for eid in ids:
            if eid not in CATALOG:
                raise ConfigError(f"unknown experiment {eid!r} in include")
        cfg.options = {eid: _experiment_options(cp, eid, cfg.params, section=f"experiment.{eid}")
                       for eid in ids}


def _experiment_options(cp, eid, params, section="experiment"):
    raw = _section(cp, section)
    overrides = {k: _value(v, f"[{section}] {k}") for k, v in raw.items()}
    try:
        validate_experiment(eid, params, overrides)
    except BesselLabError as exc:
        raise ConfigError(f"{eid}: {exc}") from None
    return overrides


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _run_kernel(cfg):
    radii = np.asarray(cfg.options["radii"])
    vals = eval_bessel_kernel(cfg.params, radii)
    riesz = eval_riesz_kernel(cfg.params, radii)
    mass = total_mass(cfg.params)
    rep = ExperimentReport("kernel", radii.tolist(), vals.tolist())
    rep.checks = {"positive_finite": bool(np.all(np.isfinite(vals)) and np.all(vals > 0)),
                  "dominated_by_riesz": bool(np.all(vals <= riesz * (1 + 1e-9)))}
    rep.extra = {"riesz": riesz, "total_mass": mass}
    return [rep]


def _run_norm(cfg):
    o, n = cfg.options, cfg.params.n
    idx = LorentzIndex(o["p"], o["alpha"])
    out = []
    for name, func in zip(cfg.function_names, cfg.function_specs):
        grid = GridFunction.sample(func, n, o["lo"], o["hi"], o["cells"])
        rea = lorentz_norm(grid, idx)
        dis = lorentz_norm(grid, idx, method="distribution")
        leb = lp_norm(func, o["p"], n)
        rep = ExperimentReport(f"norm:{name}", ["lebesgue", "lorentz_rearrangement",
                                                 "lorentz_distribution"], [leb, rea, dis])
        rep.checks = {"methods_agree": abs(rea - dis) <= 0.01 * max(rea, dis)}
        rep.extra = {"function": to_record(func), "p": o["p"], "alpha": o["alpha"],
                     "grid": [o["lo"], o["hi"], o["cells"]]}
        out.append(rep)
    return out


def _run_apply(cfg):
    f = cfg.function_specs[0]
    g = cfg.function_specs[1] if len(cfg.function_specs) > 1 else None
    vals, diverged = [], []
    for pt in cfg.options["points"]:
        x = np.asarray(pt)
        res = (bilinear_bessel(cfg.params, f, g, x, cfg.quadrature) if g is not None
               else linear_bessel(cfg.params, f, x, cfg.quadrature))
        vals.append(res.value)
        diverged.append(bool(res.diverged))
    rep = ExperimentReport("apply", [list(p) for p in cfg.options["points"]], vals)
    rep.checks = {"evaluated": bool(all(math.isfinite(v) or d for v, d in zip(vals, diverged)))}
    rep.extra = {"diverged": diverged, "functions": [to_record(h) for h in cfg.function_specs],
                 "mode": "bilinear" if g is not None else "linear"}
    return [rep]


def _job(args):
    eid, n, s, overrides = args
    return run_experiment(eid, PotentialParams(n, s), overrides)


def _run_catalog(cfg, jobs):
    if cfg.command == "experiment":
        tasks = [(cfg.experiment_id, cfg.params.n, cfg.params.s, cfg.options)]
    else:
        tasks = [(eid, cfg.params.n, cfg.params.s, o) for eid, o in cfg.options.items()]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, len(tasks))) as pool:
            batches = list(pool.map(_job, tasks))
    else:
        batches = [_job(t) for t in tasks]
    return [r for b in batches for r in b]


def execute(cfg, jobs=1):
    """Run the command and return the list of reports."""
    direct = {"kernel": _run_kernel, "norm": _run_norm, "apply": _run_apply}
    if cfg.command not in direct:
        return _run_catalog(cfg, jobs)
    reports = direct[cfg.command](cfg)
    echo = {"command": cfg.command, "n": cfg.params.n, "s": cfg.params.s, **cfg.options}
    if cfg.command == "apply":
        echo["quadrature"] = dataclasses.asdict(cfg.quadrature)
    for r in reports:
        r.config = echo
    return reports


def render(reports, fmt):
    return reports_to_json(reports) if fmt == "structured" else reports_to_csv(reports)


def write_atomic(path, text):
    """Write to a temporary file beside ``path``, then rename over it."""
    target = os.path.abspath(path)
    folder = os.path.dirname(target)
    os.makedirs(folder, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=folder)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def run(cfg, jobs=1, stdout=None):
    """Execute, write the report, print one summary line per report; return exit status."""
    stdout = stdout or sys.stdout
    reports = execute(cfg, jobs)
    write_atomic(cfg.output_path, render(reports, cfg.output_format))
    for r in reports:
        label = r.config.get("experiment", r.experiment_id)
        if r.parameter_sequence and r.experiment_id == "oneil_check":
            label += f"[{r.parameter_sequence[0]}]"
        failed = ",".join(r.failed_checks())
        stdout.write(f"{label} {r.verdict.upper()}" + (f" ({failed})" if failed else "") + "\n")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def default_jobs():
    raw = os.environ.get(JOBS_ENV, "1")
    try:
        jobs = int(raw)
    except ValueError:
        raise ConfigError(f"{JOBS_ENV} must be an integer, got {raw!r}") from None
    if jobs < 1:
        raise ConfigError(f"{JOBS_ENV} must be positive")
    return jobs


def build_parser():
    ap = argparse.ArgumentParser(prog="bilinear-bessel",
                                 description="Bilinear Bessel potential verification lab")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config", required=True, help="INI configuration file")
    ap.add_argument("--out", help="report path (overrides [run] out)")
    ap.add_argument("--format", choices=FORMATS, help="report format (overrides [run] format)")
    ap.add_argument("--jobs", type=int, help=f"worker processes (default ${JOBS_ENV} or 1)")
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    try:
        with open(args.config, encoding="utf-8") as fh:
            text = fh.read()
        jobs = args.jobs if args.jobs is not None else default_jobs()
        if jobs < 1:
            raise ConfigError("--jobs must be positive")
        cfg = parse_config(text, args.command, args.out, args.format)
    except (OSError, ConfigError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    try:
        return run(cfg, jobs)
    except (BesselLabError, OSError, ValueError, ArithmeticError) as exc:
        print(f"execution error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
