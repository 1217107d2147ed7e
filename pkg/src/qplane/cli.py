"""Command-line driver.

Exit codes: 0 success, 1 an identity failed, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import List, Optional

from .coeff import DomainError, QParam, make_q, parse_scalar, scalar_from_json
from .graded_sheaf import FqElement, decompose
from .plot import region_svg
from .qalgebra import QSeries
from .qtopology import X_AXIS, Y_AXIS, QPoint, QRegion, UndecidedError, is_q_closed, is_q_open, q_closure_region
from .series import SeriesError
from .spectra import EXACT, FLOAT, MatrixQModule, ValidationError, shift_example_report, taylor_spectrum_scan
from .suites import SUITE_NAMES, SuiteConfig, UsageError, all_cells, run_cell

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
DEFAULT_Q = "1/2"


class _Usage(Exception):
    pass


def _q(text: Optional[str]) -> QParam:
    try:
        return make_q(parse_scalar(text or DEFAULT_Q))
    except (DomainError, ValueError, ZeroDivisionError) as exc:
        raise _Usage(f"bad q: {exc}") from exc


def _load(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise _Usage(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise _Usage(f"{path} is not valid JSON: {exc}") from exc


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


# verify

def _run_cell(args):
    cfg, suite, d, l = args
    return run_cell(cfg, suite, d, l)


def verify_report(cfg: SuiteConfig) -> dict:
    """Run the selected suites; the result does not depend on cfg.workers."""
    q = cfg.validate()
    jobs = [(cfg, s, d, l) for s, d, l in all_cells(cfg)]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as ex:
            chunks = list(ex.map(_run_cell, jobs))
    else:
        chunks = [_run_cell(j) for j in jobs]
    cells = [rec for chunk in chunks for rec in chunk]
    return {
        "suite": cfg.suite,
        "q": q.q.to_json(),
        "trunc": cfg.trunc,
        "max_degree": cfg.max_degree,
        "seed": cfg.seed,
        "samples": cfg.samples,
        "backend": cfg.backend,
        "passed": all(c["status"] == "pass" for c in cells),
        "cells": cells,
    }


def cmd_verify(ns) -> int:
    cfg = SuiteConfig(q=ns.q or DEFAULT_Q, trunc=ns.trunc, max_degree=ns.max_degree, seed=ns.seed,
                      suite=ns.suite, backend=ns.backend, workers=ns.workers, samples=ns.samples)
    try:
        report = verify_report(cfg)
    except UsageError as exc:
        raise _Usage(str(exc)) from exc
    _emit(_dump(report), ns.out)
    failed = [c for c in report["cells"] if c["status"] != "pass"]
    for c in failed:
        print(f"FAIL {c['suite']} ({c['d']},{c['l']}) {c['identity']}", file=sys.stderr)
    return EXIT_OK if not failed else EXIT_FAIL


# spectrum

def _points(obj) -> List[QPoint]:
    if isinstance(obj, dict) and "points" in obj:
        obj = obj["points"]
    if not isinstance(obj, list):
        raise _Usage("points file must hold a list of points")
    return [QPoint.from_json(p) for p in obj]


def cmd_spectrum(ns) -> int:
    if not ns.module:
        raise _Usage("spectrum needs --module")
    backend = None if ns.backend_given is None else ns.backend
    try:
        m = MatrixQModule.from_json(_load(ns.module), backend)
    except (KeyError, TypeError) as exc:
        raise _Usage(f"malformed module: missing or bad field {exc}") from exc
    cands = _points(_load(ns.points)) if ns.points else None
    report = taylor_spectrum_scan(m, cands)
    out = {"q": m.q.to_json(), "backend": m.backend}
    out.update(report.to_json())
    _emit(_dump(out), ns.out)
    return EXIT_OK


# q-topology

def _region(ns) -> QRegion:
    if not ns.region:
        raise _Usage("needs --region")
    obj = _load(ns.region)
    if isinstance(obj, dict) and "putinar" in obj and "x" not in obj:
        obj = obj["putinar"]
    q = _q(ns.q) if ns.q or not isinstance(obj, dict) or "q" not in obj else None
    try:
        return QRegion.from_json(obj, q)
    except (KeyError, TypeError, AttributeError) as exc:
        raise _Usage(f"malformed region: {exc}") from exc


def cmd_qclosure(ns) -> int:
    r = _region(ns)
    closure = q_closure_region(r)
    out = {"input": r.to_json(), "closure": closure.to_json(),
           "input_is_q_closed": closure == r}
    try:
        out["input_is_q_open"] = is_q_open(r)
    except UndecidedError as exc:
        out["input_is_q_open"] = None
        out["note"] = str(exc)
    _emit(_dump(out), ns.out)
    return EXIT_OK


# decomposition

def _element(ns) -> FqElement:
    if ns.unit:
        return FqElement.unit(ns.trunc, _q(ns.q))
    if not ns.input:
        raise _Usage("decompose needs --input or --unit")
    obj = _load(ns.input)
    try:
        if "F" in obj:
            return FqElement.from_json(obj)
        return FqElement.from_qseries(QSeries.from_json(obj))
    except (KeyError, TypeError) as exc:
        raise _Usage(f"malformed element: missing or bad field {exc}") from exc


def cmd_decompose(ns) -> int:
    from .graded_sheaf import alpha_d
    xi = _element(ns)
    parts = decompose(xi)
    total = FqElement.zero(xi.trunc, xi.q)
    for h in parts:
        total = total + alpha_d(h, xi.trunc, xi.q)
    ok = total == xi
    out = {
        "q": xi.q.to_json(),
        "trunc": xi.trunc,
        "components": [{"d": h.degree, "component": h.to_json()} for h in parts if not h.is_zero()],
        "nonzero_degrees": [h.degree for h in parts if not h.is_zero()],
        "sum_matches": ok,
    }
    _emit(_dump(out), ns.out)
    return EXIT_OK if ok else EXIT_FAIL


# shift example

def cmd_shift_example(ns) -> int:
    q = _q(ns.q)
    rep = shift_example_report(q)
    text = _dump(rep.to_json())
    if ns.out:
        _emit(text, ns.out)
        print(f"region equality: {'true' if rep.equal else 'false'}")
    else:
        sys.stdout.write(text)
    return EXIT_OK if rep.equal else EXIT_FAIL


# plot

def _samples(obj) -> list:
    """(axis, value, resolvent) for the scanned points of a spectrum report."""
    out = []
    for s in obj.get("samples", []) if isinstance(obj, dict) else []:
        lam = complex(scalar_from_json(s["point"]["lambda"]))
        mu = complex(scalar_from_json(s["point"]["mu"]))
        axis = Y_AXIS if mu else X_AXIS
        out.append((axis, mu if mu else lam, bool(s["resolvent"])))
    return out


def cmd_plot(ns) -> int:
    r = _region(ns)
    try:
        samples = _samples(_load(ns.region))
    except (KeyError, TypeError) as exc:
        raise _Usage(f"malformed samples in report: {exc}") from exc
    title = ns.title if ns.title is not None else f"q = {r.q.q}"
    _emit(region_svg(r, title, samples), ns.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", default=None, help=f"deformation parameter, e.g. 1/2 or (1+i)/4 (default {DEFAULT_Q})")
    common.add_argument("--trunc", type=int, default=10, help="truncation order N (default 10)")
    common.add_argument("--max-degree", type=int, default=6, help="largest homogeneous degree D (default 6)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--suite", default="all", help="one of " + ", ".join(SUITE_NAMES) + ", or all")
    common.add_argument("--backend", choices=(EXACT, FLOAT), default=None)
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--out", default=None, help="output file (default stdout)")

    p = argparse.ArgumentParser(prog="qplane", description="Identity checks and spectra for the quantum plane.")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="run identity suites and print a JSON report")
    v.add_argument("--samples", type=int, default=5, help="random inputs per cell (default 5)")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("spectrum", parents=[common], help="homology scan of a matrix module")
    s.add_argument("--module", help="module JSON with q, T, S")
    s.add_argument("--points", help="JSON list of candidate points")
    s.set_defaults(func=cmd_spectrum)

    c = sub.add_parser("qclosure", parents=[common], help="q-closure of a region")
    c.add_argument("--region", help="region JSON")
    c.set_defaults(func=cmd_qclosure)

    d = sub.add_parser("decompose", parents=[common], help="graded components of an element of F_q")
    d.add_argument("--input", help="FqElement or QSeries JSON")
    d.add_argument("--unit", action="store_true", help="decompose the unit at --trunc")
    d.set_defaults(func=cmd_decompose)

    e = sub.add_parser("shift-example", parents=[common],
                       help="closure of the weighted shift spectrum against the expected region")
    e.set_defaults(func=cmd_shift_example)

    g = sub.add_parser("plot", parents=[common], help="SVG picture of a region or spectrum report")
    g.add_argument("--region", help="region JSON or a report with a putinar field")
    g.add_argument("--title", default=None)
    g.set_defaults(func=cmd_plot)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    ns.backend_given = ns.backend
    if ns.backend is None:
        ns.backend = EXACT
    if ns.backend == FLOAT and ns.command != "spectrum" and not (ns.command == "verify" and ns.suite == "koszul"):
        print("qplane: error: the float backend is only available for spectrum and the koszul suite",
              file=sys.stderr)
        return EXIT_USAGE
    try:
        return ns.func(ns)
    except _Usage as exc:
        print(f"qplane: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValidationError as exc:
        print(f"qplane: validation error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, SeriesError, ValueError) as exc:
        print(f"qplane: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
