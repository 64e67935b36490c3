"""speclab command line: analyze, verify, sweep, report."""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import io
import json
import os
import platform
import sys
from pathlib import Path

import numpy as np
import scipy

from . import __version__
from .config import make_config
from .derivation import DerivationContext, conjugation_orbit
from .errors import DomainError, MalformedInputError, SpeclabError
from .linalg import spectral_decomposition
from .local import (
    carleman_scan,
    local_spectral_radius_exact,
    local_spectral_radius_power,
    local_spectrum,
    orbit_growth,
    symmetric_grid,
)
from .reports import to_jsonable
from .serialization import load_matrix, load_pair, load_vector, pair_kind
from .suites import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def versions() -> dict:
    return {"speclab": __version__, "numpy": np.__version__, "scipy": scipy.__version__,
            "python": platform.python_version()}


def header(command: str) -> dict:
    # the only non-deterministic field of any output; excluded from comparisons
    return {"command": command, "generated_at": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")}


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2) + "\n"


def _complex_list(points):
    return [[float(p.real), float(p.imag)] for p in points]


def cmd_analyze(cfg) -> int:
    if not cfg.inputs or not cfg.vector:
        raise UsageError("analyze needs --input MATRIX and --vector VECTOR")
    T = load_matrix(cfg.inputs[0])
    x = load_vector(cfg.vector)
    if T.shape[0] != x.shape[0]:
        raise MalformedInputError(f"malformed vector: length {x.shape[0]} does not match dim {T.shape[0]}")
    sd = spectral_decomposition(T, cfg.cluster_tol)
    loc = local_spectrum(T, x, cfg.cluster_tol, sd)
    power = local_spectral_radius_power(T, x, nf=cfg.norm)
    cert = orbit_growth(T, x, cfg.t_max, cfg.step, cfg.norm, cfg.cluster_tol, sd)
    ims = sorted({round(float(p.imag), 12) for p in sd.eigenvalues})
    r = max((abs(p) for p in sd.eigenvalues), default=0.0)
    grid = sorted(set(ims) | set(np.round(np.arange(-np.ceil(r) - 1, np.ceil(r) + 1.01, 0.5), 12).tolist()))
    scan = carleman_scan(T, x, x if np.any(x) else np.ones_like(x), grid)
    result = {
        "dim": int(T.shape[0]),
        "norm": cfg.norm,
        "local_spectrum": _complex_list(loc.points),
        "local_spectral_radius": {
            "exact": local_spectral_radius_exact(T, x, cfg.cluster_tol),
            "power_estimate": power.estimate,
            "power_terms": power.terms,
        },
        "growth_certificate": cert.to_dict(),
        "carleman_candidates": list(scan.candidates),
        "spectrum": _complex_list(sd.eigenvalues),
        "config": cfg.to_dict(),
        "versions": versions(),
    }
    _emit(_dump({"header": header("analyze"), "result": result}), cfg.out)
    return EXIT_OK


def _suite_csv(results) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["suite", "instance", "theorem_id", "status", "defect", "tolerance", "seed"])
    for res in results:
        for row in res.to_csv_rows():
            w.writerow(row)
    return buf.getvalue()


def _canonical_runs(runs: list[dict]) -> list[dict]:
    order = {s: i for i, s in enumerate(SUITES)}
    return sorted(runs, key=lambda r: (order.get(r["suite"], len(order)), r["run_id"]))


def cmd_verify(cfg) -> int:
    name = cfg.suite
    if name is None:
        raise UsageError("verify needs a suite name")
    if name != "all" and name not in SUITES:
        raise UsageError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}, all")
    names = list(SUITES) if name == "all" else [name]
    results = [run_suite(s, cfg) for s in names]
    # summary goes to stdout when the data goes to a file, to stderr otherwise
    log = sys.stdout if cfg.out else sys.stderr
    for res in results:
        print(res.summary_line(), file=log)
    ok = all(r.ok for r in results)
    if cfg.format == "csv":
        _emit(_suite_csv(results), cfg.out)
    else:
        body = {"runs": _canonical_runs([r.to_dict() for r in results]), "versions": versions()}
        _emit(_dump({"header": header("verify"), "result": body}), cfg.out)
    total = sum(len(r.reports) for r in results)
    print(f"{name}: {total} reports, {'PASS' if ok else 'FAIL'}", file=log)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_sweep(cfg) -> int:
    if cfg.pair:
        kind = pair_kind(cfg.pair)
        a, b = load_pair(cfg.pair)
        if kind == "derivation":
            orb = conjugation_orbit(DerivationContext(a, cfg.norm, cfg.cluster_tol), b,
                                    symmetric_grid(cfg.t_max, cfg.step))
            text = orb.to_csv()
        else:
            text = orbit_growth(a, b, cfg.t_max, cfg.step, cfg.norm, cfg.cluster_tol).to_csv()
    elif cfg.inputs and cfg.vector:
        T = load_matrix(cfg.inputs[0])
        x = load_vector(cfg.vector)
        if T.shape[0] != x.shape[0]:
            raise MalformedInputError("malformed vector: length does not match the matrix")
        text = orbit_growth(T, x, cfg.t_max, cfg.step, cfg.norm, cfg.cluster_tol).to_csv()
    else:
        raise UsageError("sweep needs --pair PAIR or --input MATRIX --vector VECTOR")
    if cfg.format == "json":
        rows = list(csv.reader(io.StringIO(text)))
        flag = rows[0] if rows and rows[0][0].startswith("#") else None
        data = rows[1:] if flag else rows
        body = {"exponential": flag[1] if flag else None, "columns": data[0],
                "rows": [[float(v) for v in r] for r in data[1:]]}
        text = _dump({"header": header("sweep"), "result": body})
    _emit(text, cfg.out)
    return EXIT_OK


def _runs_from(path) -> list[dict]:
    p = Path(path)
    if not p.exists():
        raise MalformedInputError(f"missing input {path}")
    try:
        doc = json.loads(p.read_text(encoding="utf-8"))
        runs = doc["result"]["runs"]
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise MalformedInputError(f"{path} is not a suite output") from exc
    return runs


def cmd_report(cfg) -> int:
    if not cfg.inputs:
        raise UsageError("report needs at least one --input")
    merged: dict[str, dict] = {}
    for path in cfg.inputs:
        for run in _runs_from(path):
            rid = run["run_id"]
            if rid in merged and merged[rid] != run:
                raise MalformedInputError(f"conflicting runs: run id {rid} appears with different payloads")
            merged[rid] = run
    body = {"runs": _canonical_runs(list(merged.values())), "versions": versions()}
    _emit(_dump({"header": header("report"), "result": body}), cfg.out)
    return EXIT_OK


COMMANDS = {"analyze": cmd_analyze, "verify": cmd_verify, "sweep": cmd_sweep, "report": cmd_report}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="speclab", description="Local spectra and growth conditions for matrices.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        if name == "verify":
            s.add_argument("suite_name", nargs="?", help="suite to run (same as --suite)")
        s.add_argument("--input", action="append", default=None, help="matrix JSON (report: suite outputs)")
        s.add_argument("--vector", help="vector JSON")
        s.add_argument("--pair", help="pair JSON with keys A,T or T,x")
        s.add_argument("--norm", choices=["l1", "l2", "linf"])
        s.add_argument("--alpha", type=float)
        s.add_argument("--suite")
        s.add_argument("--seed", type=lambda v: int(v, 0))
        s.add_argument("--t-max", dest="t_max", type=float)
        s.add_argument("--step", type=float)
        s.add_argument("--out")
        s.add_argument("--format", choices=["json", "csv"])
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    suite = getattr(args, "suite_name", None) or args.suite
    try:
        step = args.step
        cfg = make_config(
            command=args.command,
            inputs=args.input,
            vector=args.vector,
            pair=args.pair,
            suite=suite,
            norm=args.norm,
            alpha=args.alpha,
            seed=args.seed,
            t_max=args.t_max,
            step=step,
            derivation_step=step,
            out=args.out,
            format=args.format or ("csv" if args.command == "sweep" else "json"),
        )
        return COMMANDS[args.command](cfg)
    except (UsageError, DomainError, MalformedInputError) as exc:
        print(f"speclab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SpeclabError as exc:
        print(f"speclab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BrokenPipeError:
        # downstream closed early (e.g. piped into head); silence the flush at exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
