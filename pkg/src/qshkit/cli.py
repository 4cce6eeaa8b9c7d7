"""Command-line verification runner.

    qshkit --suite all --seed 42 --trials 100 --n 2 --out report.json

Exit status: 0 every verdict passes, 1 some verdict does not pass,
2 usage error, 3 internal or structural error.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import asdict, dataclass
from datetime import datetime, timezone

from . import catalog, suites
from .reports import PASS, Check

log = logging.getLogger("qshkit")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3
REPORT_VERSION = 1
DEFAULT_TOL = 1e-10
DEFAULT_N_CAP = 4
TOL_ENV = "QSHKIT_TOL"

EXAMPLES = ("example-a", "example-b", "example-c", "flat-npq")
SUITE_NAMES = suites.SUITES + EXAMPLES + ("all",)

ANCHORS = {
    "identities": "pointwise torsion and projection identities",
    "extrinsic": "symplectic Gauss formula and shape operator",
    "submanifold": "psi-kernel, splitting and totally complex criterion",
    "example-a": "SL(n+1,H)/S(GL(1,H)GL(n,H)) with its real and complex reductions",
    "example-b": "SU(2+p,q)/S(U(2)U(p,q)) with the Lagrangian reduction",
    "example-c": "SO*(2n+2)/SO*(2n)U(1) and the SO* tower",
    "flat-npq": "flat pseudo-Kahler submanifold N_{p,q}",
}


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    suite: str
    seed: int = 0
    trials: int = 100
    tolerance: float = DEFAULT_TOL
    arithmetic: str = suites.RATIONAL
    n: int = 2
    p: int = 1
    q: int = 1
    k: int = 1
    n_cap: int = DEFAULT_N_CAP
    out: str | None = None

    def validate(self) -> "RunConfig":
        if self.suite not in SUITE_NAMES:
            raise UsageError(f"unknown suite {self.suite!r}")
        if self.seed < 0:
            raise UsageError("seed must be a non-negative integer")
        if self.trials < 1:
            raise UsageError("trials must be at least 1")
        if not self.tolerance > 0:
            raise UsageError("tolerance must be positive")
        if self.arithmetic not in (suites.RATIONAL, suites.FLOAT):
            raise UsageError("arithmetic must be 'rational' or 'float'")
        if not 2 <= self.n <= self.n_cap:
            raise UsageError(f"n must lie in [2, {self.n_cap}]")
        return self

    def body(self) -> dict:
        d = asdict(self)
        d.pop("out")
        return d


def _tolerance(flag: float | None, env: dict) -> float:
    if flag is not None:
        return flag
    raw = env.get(TOL_ENV)
    if raw is None or raw == "":
        return DEFAULT_TOL
    try:
        return float(raw)
    except ValueError:
        raise UsageError(f"{TOL_ENV} is not a number: {raw!r}") from None


def parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qshkit", description="Run verification suites and example reports.")
    ap.add_argument("--suite", required=True, help=f"one of: {', '.join(SUITE_NAMES)}")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--tol", type=float, default=None, help=f"float tolerance (default ${TOL_ENV} or {DEFAULT_TOL})")
    ap.add_argument("--arith", default=suites.RATIONAL, help="rational or float")
    ap.add_argument("--n", type=int, default=2)
    ap.add_argument("--p", type=int, default=1)
    ap.add_argument("--q", type=int, default=1)
    ap.add_argument("--k", type=int, default=1)
    ap.add_argument("--n-cap", type=int, default=DEFAULT_N_CAP)
    ap.add_argument("--out", default=None, help="report path (default: standard output)")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def config_from_args(args: argparse.Namespace, env: dict | None = None) -> RunConfig:
    env = os.environ if env is None else env
    return RunConfig(
        suite=args.suite, seed=args.seed, trials=args.trials, tolerance=_tolerance(args.tol, env),
        arithmetic=args.arith, n=args.n, p=args.p, q=args.q, k=args.k, n_cap=args.n_cap, out=args.out,
    ).validate()


# -- execution ------------------------------------------------------------------

def _records(prefix: str, checks, anchor: str) -> list[dict]:
    out = []
    for c in checks:
        r = c.record()
        r["name"] = f"{prefix}/{c.name}"
        r["paper_ref"] = r["paper_ref"] or anchor
        out.append(r)
    return out


def _example(cfg: RunConfig, name: str, flat_pq=None):
    if name == "example-a":
        return catalog.example_A(cfg.n, cap=cfg.n_cap)
    if name == "example-b":
        return catalog.example_B(cfg.p, cfg.q, cap=cfg.n_cap)
    if name == "example-c":
        return catalog.example_C(cfg.n, cfg.k, cap=cfg.n_cap)
    p, q = flat_pq if flat_pq is not None else (cfg.p, cfg.q)
    return catalog.flat_Npq(p + q, p, q)


def _check_params(cfg: RunConfig, name: str, flat_pq=None) -> None:
    if name == "example-b" and (cfg.p < 1 or cfg.q < 1 or max(cfg.p, cfg.q) > cfg.n_cap):
        raise UsageError("example-b needs 1 <= p, q <= n_cap")
    if name == "example-c" and not 1 <= cfg.k < cfg.n:
        raise UsageError("example-c needs 1 <= k < n")
    if name == "flat-npq":
        p, q = flat_pq if flat_pq is not None else (cfg.p, cfg.q)
        if p < 0 or q < 0 or not 2 <= p + q <= cfg.n_cap:
            raise UsageError("flat-npq needs p, q >= 0 with 2 <= p + q <= n_cap")


def plan(cfg: RunConfig) -> list[tuple[str, tuple | None]]:
    if cfg.suite != "all":
        return [(cfg.suite, None)]
    if cfg.p > cfg.n:
        raise UsageError("suite 'all' runs flat-npq with (p, n - p); need p <= n")
    steps = [(s, None) for s in suites.SUITES]
    steps += [("example-a", None), ("example-b", None), ("example-c", None), ("flat-npq", (cfg.p, cfg.n - cfg.p))]
    return steps


def execute(cfg: RunConfig) -> list[dict]:
    steps = plan(cfg)
    for name, extra in steps:
        if name in EXAMPLES:
            _check_params(cfg, name, extra)
    results: list[dict] = []
    for name, extra in steps:
        log.info("running %s", name)
        if name in suites.SUITES:
            recs = suites.run_suite(name, cfg.seed, cfg.trials, cfg.arithmetic, cfg.n, cfg.tolerance)
            checks: list[Check] = [r.as_check() for r in recs]
        else:
            checks = list(_example(cfg, name, extra).checks)
        results += _records(name, checks, ANCHORS[name])
    return results


def report_body(cfg: RunConfig, results: list[dict]) -> dict:
    return {"version": REPORT_VERSION, "config": cfg.body(), "results": results}


def dumps_report(body: dict, timestamp: str | None = None) -> str:
    doc = dict(body)
    doc["timestamp"] = timestamp or datetime.now(timezone.utc).isoformat()
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def run(cfg: RunConfig) -> tuple[int, dict]:
    """Execute ``cfg``; returns (exit status, report body without timestamp)."""
    results = execute(cfg)
    body = report_body(cfg, results)
    ok = all(r["verdict"] == PASS for r in results)
    return (EXIT_OK if ok else EXIT_FAIL), body


def main(argv: list[str] | None = None) -> int:
    ap = parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        cfg = config_from_args(args)
        status, body = run(cfg)
    except UsageError as e:
        print(f"qshkit: usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as e:  # structural failures inside the library
        log.debug("internal error", exc_info=True)
        print(f"qshkit: internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INTERNAL
    text = dumps_report(body)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    failed = [r["name"] for r in body["results"] if r["verdict"] != PASS]
    for name in failed:
        print(f"qshkit: not passing: {name}", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
