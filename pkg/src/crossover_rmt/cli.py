"""Command-line front end: ``crossover-rmt {kernel,universal,simulate,compare,conductance}``.

Each command takes explicit long flags, or a flat ``key=value`` file via
``--config`` (flags win). Output goes to ``--output`` (``-`` for stdout),
written atomically so a failed run leaves no partial file.

CSV layout: ``#``-prefixed metadata lines (tool version, command, JSON echo
of every parameter), a header row, then data. JSON output carries the same
metadata under ``"meta"`` and uses sorted keys.

Exit codes: 0 success, 2 validation error, 3 numerical-convergence failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
import time

import numpy as np

from . import __version__, kernels, montecarlo, universal
from .errors import ConvergenceError, CrossoverError
from .skewpoly import EnsembleSpec, Route, SkewFunctionSet

EXIT_OK, EXIT_VALIDATION, EXIT_CONVERGENCE = 0, 2, 3

REQUIRED = object()


def _grid(text):
    """``lo:hi:step`` -> inclusive grid."""
    try:
        lo, hi, step = (float(v) for v in text.split(":"))
    except ValueError:
        raise ValueError(f"grid must look like lo:hi:step, got {text!r}") from None
    if step <= 0 or hi < lo:
        raise ValueError(f"bad grid {text!r}")
    n = int(round((hi - lo) / step))
    return lo + step * np.arange(n + 1)


def _bool(text):
    if isinstance(text, bool):
        return text
    if text.lower() in ("1", "true", "yes", "on"):
        return True
    if text.lower() in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


# name -> (type, default); REQUIRED marks mandatory parameters
SCHEMAS = {
    "kernel": {
        "N": (int, REQUIRED), "a": (float, 0.0), "tau": (float, REQUIRED),
        "grid": (str, REQUIRED), "r2_output": (str, None), "format": (str, "csv"),
    },
    "universal": {
        "route": (str, "oe-ue"), "lambda": (float, REQUIRED), "r_max": (float, 4.0),
        "dr": (float, 0.02), "format": (str, "csv"),
    },
    "simulate": {
        "N": (int, REQUIRED), "Nprime": (int, REQUIRED), "tau": (float, REQUIRED),
        "samples": (int, REQUIRED), "seed": (int, REQUIRED), "route": (str, "oe-ue"),
        "family": (str, "laguerre"), "bulk_window": (float, 0.6), "workers": (int, 1),
        "timing": (_bool, False), "format": (str, "json"),
    },
    "compare": {
        "input": (str, REQUIRED), "route": (str, None), "lambda": (float, None),
        "lambda_scale": (float, 1.0), "r_max": (float, None), "dr": (float, None),
        "format": (str, "csv"),
    },
    "conductance": {
        "n1": (int, REQUIRED), "n2": (int, REQUIRED), "tau": (float, REQUIRED),
        "format": (str, "json"),
    },
}


def _flag(name):
    return "--" + name.replace("_", "-")


def build_parser():
    parser = argparse.ArgumentParser(prog="crossover-rmt", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for cmd, schema in SCHEMAS.items():
        p = sub.add_parser(cmd)
        p.add_argument("--output", "-o", default="-")
        p.add_argument("--config", default=None, help="flat key=value file; flags take precedence")
        for name in schema:
            p.add_argument(_flag(name), dest=name, default=None)
    return parser


def read_config(path):
    """Parse a flat ``key=value`` file (``#`` comments, blank lines ignored)."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            out[key.replace("-", "_")] = value
    return out


def resolve(command, args):
    """Validated parameter dict: flags over config file over defaults."""
    schema = SCHEMAS[command]
    config = read_config(args.config) if args.config else {}
    unknown = sorted(set(config) - set(schema) - {"output"})
    if unknown:
        raise ValueError(f"unknown {command} parameter(s) in config: {', '.join(unknown)}")
    params = {}
    for name, (kind, default) in schema.items():
        raw = getattr(args, name)
        if raw is None:
            raw = config.get(name)
        if raw is None:
            if default is REQUIRED:
                raise ValueError(f"{command}: missing required parameter {_flag(name)}")
            params[name] = default
            continue
        try:
            params[name] = kind(raw)
        except ValueError:
            raise ValueError(f"{command}: bad value for {_flag(name)}: {raw!r}") from None
    if params["format"] not in ("csv", "json"):
        raise ValueError("--format must be csv or json")
    output = args.output if args.output != "-" or "output" not in config else config["output"]
    return params, output


# -- output ----------------------------------------------------------------------

def _meta(command, params):
    return {"tool": "crossover-rmt", "version": __version__, "command": command,
            "parameters": params}


def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return "nan" if math.isnan(v) else f"{float(v) + 0.0:.15g}"
    return str(v)


def render_csv(meta, header, rows, footer=()):
    buf = io.StringIO()
    buf.write(f"# {meta['tool']} {meta['version']}\n")
    buf.write(f"# command: {meta['command']}\n")
    buf.write("# parameters: " + json.dumps(meta["parameters"], sort_keys=True) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    for line in footer:
        buf.write(f"# {line}\n")
    return buf.getvalue()


def render_json(meta, payload):
    return json.dumps({"meta": meta, **payload}, sort_keys=True, indent=2, allow_nan=False) + "\n"


def render_table(meta, header, rows, fmt, footer=()):
    if fmt == "csv":
        return render_csv(meta, header, rows, footer)
    records = [{h: (None if isinstance(v, float) and math.isnan(v) else v)
                for h, v in zip(header, map(_plain, row))} for row in rows]
    return render_json(meta, {"columns": list(header), "rows": records})


def _plain(v):
    return float(v) if isinstance(v, (float, np.floating)) else v


def write_atomic(path, text):
    if path == "-":
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".crossover-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# -- commands ----------------------------------------------------------------------

def run_kernel(p, meta):
    spec = EnsembleSpec(N=p["N"], tau=p["tau"], a=p["a"])
    x = _grid(p["grid"])
    if p["r2_output"] is not None and spec.tau < kernels.TAU_MIN:
        raise ValueError(
            f"R2 output needs tau >= {kernels.TAU_MIN:g}: the B_N kernel series diverges as "
            f"tau -> 0, so n >= 2 correlations are restricted to tau >= {kernels.TAU_MIN:g}")
    fs = SkewFunctionSet(spec)
    # x = 0 is a hard edge where the weight may vanish or diverge; evaluate just inside
    xe = np.where(x > 0, x, np.finfo(float).tiny ** 0.25)
    r1 = kernels.level_density(xe, fs)
    outputs = {"main": render_table(meta, ["x", "R1"], zip(x, r1), p["format"])}
    if p["r2_output"] is not None:
        inner = xe[x > 0]
        s, a, b = kernels.kernel_matrices(inner, fs)
        diag = np.diag(s)
        r2 = np.outer(diag, diag) - s * s.T + a * b
        i, j = np.triu_indices(len(inner), 1)
        outputs[p["r2_output"]] = render_table(meta, ["x", "y", "R2"],
                                               zip(inner[i], inner[j], r2[i, j]), p["format"])
    return outputs


def run_universal(p, meta):
    lam = p["lambda"]
    kern = universal.UniversalKernel(p["route"], lam)
    if p["dr"] <= 0 or p["r_max"] < 0:
        raise ValueError("need dr > 0 and r_max >= 0")
    r = p["dr"] * np.arange(int(round(p["r_max"] / p["dr"])) + 1)
    s = kern.S(r)
    a = kern.A(r)
    b = kern.B(r)
    y2 = kern.Y2(r)
    return {"main": render_table(meta, ["r", "S", "A", "B", "Y2"], zip(r, s, a, b, y2), p["format"])}


def run_simulate(p, meta):
    if p["family"] != "laguerre":
        raise ValueError("simulate supports family=laguerre only")
    if p["samples"] < 1:
        raise ValueError("--samples must be >= 1")
    if p["Nprime"] < p["N"]:
        raise ValueError(f"--Nprime ({p['Nprime']}) must be >= --N ({p['N']})")
    if p["format"] != "json":
        raise ValueError("simulate writes JSON only")
    start = time.perf_counter()
    samples = montecarlo.sample_ensemble(p["Nprime"], p["N"], p["tau"], p["samples"], p["seed"],
                                         route=p["route"], workers=p["workers"])
    unf = montecarlo.unfold(samples, p["bulk_window"])
    est = montecarlo.estimate_two_point(unf)
    x0 = unf.bulk_center()
    dens = float(unf.staircase.density(x0))
    spec = unf.spec
    payload = {
        "spec": {"N": spec.N, "nprime": spec.nprime, "tau": spec.tau, "a": spec.a,
                 "route": spec.route.value, "family": spec.family.value},
        "rng": montecarlo.RNG_DESCRIPTION,
        "bulk_center": x0,
        "density_at_center": dens,
        "lambda_estimate": montecarlo.predicted_lambda(spec, x0, dens),
        "two_point": est.to_dict(),
    }
    if p["timing"]:
        payload["wall_time"] = time.perf_counter() - start
    return {"main": render_json(meta, payload)}


def run_compare(p, meta):
    if not os.path.exists(p["input"]):
        raise ValueError(f"input file {p['input']!r} does not exist")
    with open(p["input"], encoding="utf-8") as fh:
        data = json.load(fh)
    try:
        est = montecarlo.TwoPointEstimate.from_dict(data["two_point"])
        route = p["route"] or data["spec"]["route"]
        lam = p["lambda"] if p["lambda"] is not None else data["lambda_estimate"]
    except (KeyError, TypeError):
        raise ValueError(f"{p['input']!r} is not a simulate output") from None
    if p["r_max"] is not None or p["dr"] is not None:
        dr = p["dr"] if p["dr"] is not None else float(np.diff(est.r_edges)[0])
        r_max = p["r_max"] if p["r_max"] is not None else float(est.r_edges[-1])
        want = dr * np.arange(int(round(r_max / dr)) + 1)
        if want.shape != est.r_edges.shape or not np.allclose(want, est.r_edges, atol=1e-9):
            raise ValueError("requested r grid differs from the simulated bins; "
                             "resampling between grids is refused")
    lam = lam * p["lambda_scale"]
    report = montecarlo.compare_two_point(est, [lam], route)
    meta["parameters"]["lambda_used"] = lam
    summary = f"fraction_within_3se={report.fraction_within:.6f}"
    text = render_table(meta, ["kind", "x", "empirical", "se", "analytic", "z"], report.rows,
                        p["format"], footer=[summary])
    if p["format"] == "json":
        obj = json.loads(text)
        obj["fraction_within_3se"] = report.fraction_within
        text = json.dumps(obj, sort_keys=True, indent=2) + "\n"
    return {"main": text, "summary": summary}


def run_conductance(p, meta):
    res = universal.conductance_variance(universal.TransportSpec(p["n1"], p["n2"], p["tau"]))
    payload = {"value": res.value, "tau0": res.at_tau0, "tau_inf": res.at_tau_inf,
               "large_channel_regime": res.large_channel_regime}
    if p["format"] == "csv":
        return {"main": render_csv(meta, list(payload), [list(payload.values())])}
    return {"main": render_json(meta, payload)}


COMMANDS = {
    "kernel": run_kernel,
    "universal": run_universal,
    "simulate": run_simulate,
    "compare": run_compare,
    "conductance": run_conductance,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_VALIDATION if exc.code else EXIT_OK
    try:
        params, output = resolve(args.command, args)
        meta = _meta(args.command, dict(params))
        outputs = COMMANDS[args.command](params, meta)
    except ConvergenceError as exc:
        print(f"crossover-rmt: convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except (CrossoverError, ValueError, OSError) as exc:
        print(f"crossover-rmt: error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    for path, text in outputs.items():
        if path == "main":
            write_atomic(output, text)
        elif path == "summary":
            print(text, file=sys.stderr)
        else:
            write_atomic(path, text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
