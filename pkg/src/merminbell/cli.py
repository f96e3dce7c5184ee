"""Command-line front end: sweep drivers, optimizer, validator, emitters.

Output is CSV (RFC-4180, header row, full %.17g precision) or JSON lines;
plotting is left to external tools.  Sweep points are pure, independent
evaluations, dispatched to a worker pool in deterministic grid order, so a
given configuration produces byte-identical files for any worker count.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor

from .loss import LossConfig
from .lossy import (
    DegenerateSectorError,
    InternalConsistencyError,
    LossyEngine,
    TruncationPolicy,
    ViolationRecord,
    _failure_record,
    optimize_angles,
    sweep,
)
from .numerics import HalfInt
from .source import fock_weight_distribution
from .validation import convention_comparison_rows, run_all

SWEEP_COLUMNS = [
    "s",
    "r",
    "eta",
    "theta",
    "alpha",
    "beta",
    "gamma",
    "lhs",
    "rhs",
    "violation",
    "converged",
    "s_cutoff_used",
    "sector_probability",
    "error",
]

ETA_COLUMNS = [c for c in SWEEP_COLUMNS if c != "theta"]


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.17g}"
    if v is None:
        return ""
    return str(v)


def _write_rows(columns: list[str], rows: list[dict], out_path: str | None, fmt: str) -> None:
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(row.get(c)) for c in columns])
        data = buf.getvalue()
    else:
        lines = []
        for row in rows:
            obj = {c: row.get(c) for c in columns}
            lines.append(json.dumps(obj, allow_nan=True, sort_keys=False))
        data = "\n".join(lines) + "\n"
    if out_path:
        with open(out_path, "w", newline="") as fh:
            fh.write(data)
    else:
        sys.stdout.write(data)


def _record_row(rec: ViolationRecord, eta: float, theta: float | None = None) -> dict:
    row = {
        "s": rec.s_star.value,
        "r": rec.r,
        "eta": eta,
        "alpha": rec.angles.alpha,
        "beta": rec.angles.beta,
        "gamma": rec.angles.gamma,
        "lhs": rec.lhs,
        "rhs": rec.rhs,
        "violation": rec.violation,
        "converged": rec.converged,
        "s_cutoff_used": rec.s_cutoff_used.value,
        "sector_probability": rec.sector_probability,
        "error": rec.error,
    }
    if theta is not None:
        row["theta"] = theta
    row["convention"] = rec.convention
    return row


def _policy_for(s_star: HalfInt, tol: float, max_s: float | None) -> TruncationPolicy:
    if max_s is None:
        return TruncationPolicy.for_sector(s_star, rel_tol=tol)
    t_max = HalfInt.of(max_s).twice
    t_start = min(s_star.twice + 4, t_max)
    return TruncationPolicy(s_start=HalfInt(t_start), max_s=HalfInt(t_max), rel_tol=tol)


# ------------------------------------------------------------- worker tasks


def _theta_task(payload: dict) -> list[dict]:
    s_star = HalfInt(payload["ts"])
    r, eta = payload["r"], payload["eta"]
    policy = _policy_for(s_star, payload["tol"], payload["max_s"])
    rows = []
    for conv in payload["conventions"]:
        recs = sweep(
            [s_star], [r], [eta], payload["thetas"],
            policy=policy, convention=conv, base_angle=payload["base"],
        )
        for theta, rec in zip(payload["thetas"], recs):
            rows.append(_record_row(rec, eta, theta))
    if len(payload["conventions"]) > 1:
        # interleave so rows stay grouped per theta
        half = len(rows) // 2
        rows = [row for pair in zip(rows[:half], rows[half:]) for row in pair]
    return rows


def _eta_task(payload: dict) -> list[dict]:
    s_star = HalfInt(payload["ts"])
    r = payload["r"]
    policy = _policy_for(s_star, payload["tol"], payload["max_s"])
    angles, _ = optimize_angles(s_star, r, LossConfig.equal_eta(1.0), policy)
    rows = []
    for eta in payload["etas"]:
        eng = LossyEngine(r, LossConfig.equal_eta(eta))
        for conv in payload["conventions"]:
            try:
                rec = eng.mermin_sides(s_star, angles, policy, conv)
            except (DegenerateSectorError, InternalConsistencyError) as exc:
                rec = _failure_record(s_star, r, eng.loss, angles, conv, exc)
            rows.append(_record_row(rec, eta))
    return rows


_TASKS = {"theta": _theta_task, "eta": _eta_task}


def _run_task(task: tuple[int, str, dict]) -> tuple[int, list[dict]]:
    idx, kind, payload = task
    return idx, _TASKS[kind](payload)


def _dispatch(tasks: list[tuple[int, str, dict]], workers: int) -> list[dict]:
    results: dict[int, list[dict]] = {}
    if workers <= 1 or len(tasks) <= 1:
        for t in tasks:
            idx, rows = _run_task(t)
            results[idx] = rows
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for idx, rows in pool.map(_run_task, tasks):
                results[idx] = rows
    out: list[dict] = []
    for idx in sorted(results):
        out.extend(results[idx])
    return out


def _conventions(arg: str) -> list[str]:
    if arg == "both":
        return ["conditioned", "unconditioned"]
    return [arg]


# --------------------------------------------------------------- subcommands


def _cmd_sweep_theta(args) -> int:
    if args.theta_steps < 1:
        raise _UsageError("--theta-steps must be at least 1")
    if not args.eta:
        raise _UsageError("at least one --eta value is required")
    step = (args.theta_max - args.theta_min) / max(args.theta_steps - 1, 1)
    thetas = [args.theta_min + i * step for i in range(args.theta_steps)]
    convs = _conventions(args.conventions)
    tasks = []
    idx = 0
    ts = HalfInt.of(args.s).twice
    for eta in args.eta:
        payload = {
            "ts": ts,
            "r": args.r,
            "eta": eta,
            "thetas": thetas,
            "base": args.base_angle,
            "tol": args.policy_tol,
            "max_s": args.policy_max_s,
            "conventions": convs,
        }
        tasks.append((idx, "theta", payload))
        idx += 1
    rows = _dispatch(tasks, args.workers)
    columns = SWEEP_COLUMNS + (["convention"] if len(convs) > 1 else [])
    _write_rows(columns, rows, args.out, args.format)
    return 0


def _eta_grid_rows(args) -> list[dict]:
    convs = _conventions(args.conventions)
    tasks = []
    idx = 0
    for s in args.s:
        ts = HalfInt.of(s).twice
        for r in args.r:
            payload = {
                "ts": ts,
                "r": r,
                "etas": list(args.eta),
                "tol": args.policy_tol,
                "max_s": args.policy_max_s,
                "conventions": convs,
            }
            tasks.append((idx, "eta", payload))
            idx += 1
    return _dispatch(tasks, args.workers)


def _cmd_sweep_eta(args) -> int:
    if not args.eta or not args.s:
        raise _UsageError("--s and --eta require at least one value")
    args.r = [args.r]
    rows = _eta_grid_rows(args)
    convs = _conventions(args.conventions)
    columns = ETA_COLUMNS + (["convention"] if len(convs) > 1 else [])
    _write_rows(columns, rows, args.out, args.format)
    return 0


def _cmd_surface(args) -> int:
    if not args.eta or not args.s or not args.r:
        raise _UsageError("--s, --r and --eta require at least one value")
    rows = _eta_grid_rows(args)
    convs = _conventions(args.conventions)
    columns = ETA_COLUMNS + (["convention"] if len(convs) > 1 else [])
    _write_rows(columns, rows, args.out, args.format)
    return 0


def _cmd_optimize(args) -> int:
    s_star = HalfInt.of(args.s)
    policy = _policy_for(s_star, args.policy_tol, args.policy_max_s)
    loss = LossConfig.equal_eta(args.eta)
    angles, rec = optimize_angles(s_star, args.r, loss, policy, convention=args.conventions
                                  if args.conventions != "both" else "conditioned")
    report = {
        "s": s_star.value,
        "r": args.r,
        "eta": args.eta,
        "alpha": angles.alpha,
        "beta": angles.beta,
        "gamma": angles.gamma,
        "lhs": rec.lhs,
        "rhs": rec.rhs,
        "violation": rec.violation,
        "sector_probability": rec.sector_probability,
        "converged": rec.converged,
        "s_cutoff_used": rec.s_cutoff_used.value,
    }
    data = json.dumps(report, indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(data)
    else:
        sys.stdout.write(data)
    return 0


def _cmd_validate(args) -> int:
    ok, report = run_all(fast=args.fast)
    if args.conventions in ("unconditioned", "both"):
        report["convention_comparison"] = convention_comparison_rows()
    data = json.dumps(report, indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(data)
    else:
        sys.stdout.write(data)
    if not ok:
        sys.stderr.write("validation FAILED\n")
        return 1
    return 0


def _cmd_fock_weights(args) -> int:
    weights = fock_weight_distribution(args.r, args.n_max)
    rows = [{"n": n, "probability": p} for n, p in sorted(weights.probabilities.items())]
    sys.stderr.write(f"tail mass beyond window: {weights.tail_mass:.6e}\n")
    _write_rows(["n", "probability"], rows, args.out, args.format)
    return 0


class _UsageError(Exception):
    pass


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", default=None, help="output path (default: stdout)")
    p.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    p.add_argument("--workers", type=int, default=1, help="parallel worker processes")
    p.add_argument("--policy-tol", type=float, default=1e-6, help="relative cutoff tolerance")
    p.add_argument("--policy-max-s", type=float, default=None, help="hard cap on the source spin sum")
    p.add_argument(
        "--conventions",
        choices=("conditioned", "unconditioned", "both"),
        default="conditioned",
        help="sector post-selection convention(s) to evaluate",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="merminbell",
        description="High-spin Bell-inequality evaluation under detection loss.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep-theta", help="violation vs analyzer angle, one curve per efficiency")
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--eta", type=float, nargs="+", required=True)
    p.add_argument("--theta-min", type=float, default=0.02)
    p.add_argument("--theta-max", type=float, default=1.2)
    p.add_argument("--theta-steps", type=int, default=32)
    p.add_argument("--base-angle", type=float, default=0.0)
    _add_common(p)
    p.set_defaults(func=_cmd_sweep_theta)

    p = sub.add_parser("sweep-eta", help="violation vs efficiency at the eta=1 optimal angles")
    p.add_argument("--s", type=float, nargs="+", required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--eta", type=float, nargs="+", required=True)
    _add_common(p)
    p.set_defaults(func=_cmd_sweep_eta)

    p = sub.add_parser("surface", help="violation on a full (s, r, eta) grid")
    p.add_argument("--s", type=float, nargs="+", required=True)
    p.add_argument("--r", type=float, nargs="+", required=True)
    p.add_argument("--eta", type=float, nargs="+", required=True)
    _add_common(p)
    p.set_defaults(func=_cmd_surface)

    p = sub.add_parser("optimize", help="maximize the violation over the analyzer triple")
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--eta", type=float, default=1.0)
    _add_common(p)
    p.set_defaults(func=_cmd_optimize)

    p = sub.add_parser("validate", help="run the reduction, oracle, and bookkeeping suites")
    p.add_argument("--fast", action="store_true", help="smaller validation grids")
    _add_common(p)
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("fock-weights", help="photon-number weights of one squeezed pair")
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--n-max", type=int, default=None)
    _add_common(p)
    p.set_defaults(func=_cmd_fock_weights)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _UsageError as exc:
        parser.exit(2, f"error: {exc}\n")
    except BrokenPipeError:
        return 1
    except Exception as exc:  # computation failure
        sys.stderr.write(json.dumps({"error": f"{type(exc).__name__}: {exc}"}) + "\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
