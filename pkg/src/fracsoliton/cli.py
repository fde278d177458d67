"""Command-line driver: ``fracsoliton {kernel,solve,verify,sweep}``.

Exit codes: 0 success, 2 usage or validation error, 3 solver
non-convergence, 4 verification failure.
"""
import argparse
import concurrent.futures
import datetime
import io
import csv
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import asymptotics as asy
from .errors import ConvergenceError, DomainError, FracSolitonError
from .groundstate import SolverOptions, solve_ground_state
from .specfun import EvalOptions, Nonlinearity, ProblemParams, tabulate_kernel, write_kernel_csv
from .spectral import Grid, profile_to_csv, profile_to_json

EXIT_OK, EXIT_USAGE, EXIT_NOCONV, EXIT_VERIFY = 0, 2, 3, 4


@dataclass(frozen=True)
class RunConfig:
    command: str
    params: ProblemParams | None = None
    grid: Grid | None = None
    solver: SolverOptions = field(default_factory=SolverOptions)
    eval: EvalOptions = field(default_factory=EvalOptions)
    output_path: str | None = None
    format: str = "json"
    window: tuple | None = None


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# commands

def _emit(text, path):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def run_kernel(cfg, alpha, x_range, points):
    x0, x1 = x_range
    if points < 1 or x0 <= 0 or x1 < x0 or (points > 1 and x1 == x0):
        raise UsageError(f"empty or invalid range [{x0}, {x1}] with {points} points")
    if not 0.0 < alpha < 2.0:
        raise DomainError(f"alpha must lie in (0, 2), got {alpha}")
    xs = np.linspace(x0, x1, points)
    rows = tabulate_kernel(alpha, xs, cfg.eval)
    if cfg.format == "csv":
        buf = io.StringIO()
        write_kernel_csv(rows, buf)
        _emit(buf.getvalue(), cfg.output_path)
    else:
        _emit(asy.report_to_json({"alpha": alpha, "rows": rows}) + "\n", cfg.output_path)
    return EXIT_OK


def _solve(cfg):
    return solve_ground_state(cfg.params, cfg.grid, cfg.solver)


def run_solve(cfg):
    try:
        q, rep = _solve(cfg)
        status = EXIT_OK
    except ConvergenceError as exc:
        q, rep, status = exc.profile, exc.report, EXIT_NOCONV
    if cfg.format == "csv":
        _emit(profile_to_csv(q), cfg.output_path)
        print(f"iterations {rep.iterations} residual {rep.final_residual:.3e} M {rep.final_m:.15f}",
              file=sys.stderr)
    else:
        doc = {"profile": json.loads(profile_to_json(q, cfg.params)), "convergence": rep.to_dict(),
               "converged": status == EXIT_OK}
        _emit(asy.report_to_json(doc) + "\n", cfg.output_path)
    return status


def applicable_checks(params):
    """Check tags run by ``verify`` for these parameters."""
    tags = ["first_order", "second_order"]
    jmax = 3 if params.kind is Nonlinearity.INTEGER_POWER else min(3, math.floor(params.p))
    tags += [f"deriv_{j}" for j in range(1, jmax + 1)]
    if params.p == 3 and 1.0 < params.alpha < 2.0:
        tags.append("cubic_third_order")
    return tags


def verify_document(cfg):
    """Solve and run every applicable check; returns ``(doc, exit_status)``."""
    try:
        q, rep = _solve(cfg)
    except ConvergenceError as exc:
        doc = {"params": cfg.params.to_dict(), "grid": cfg.grid.to_dict(),
               "convergence": exc.report.to_dict(), "converged": False, "reports": []}
        return doc, EXIT_NOCONV
    params = cfg.params
    coeffs = asy.tail_coefficients(q, params)
    regime = asy.classify_regime(params)
    win = cfg.window
    reports = [asy.verify_first_order(q, params, coeffs, window=win)]
    if np.all(q.values > 0):
        reports.append(asy.verify_second_order(q, params, coeffs, regime, window=win))
    for tag in applicable_checks(params):
        if tag.startswith("deriv_"):
            reports.append(asy.verify_derivative_order(q, params, coeffs, int(tag[-1]), window=win))
    if "cubic_third_order" in applicable_checks(params):
        reports.extend(asy.verify_cubic_third_order(q, params, coeffs, window=win))
    conv = {k: v for k, v in rep.to_dict().items() if k != "residual_history"}
    doc = asy.verification_report(params, coeffs, regime, reports,
                                  {"grid": cfg.grid.to_dict(), "convergence": conv, "converged": True})
    ok = all(r.status != "fail" for r in reports)
    return doc, (EXIT_OK if ok else EXIT_VERIFY)


def _stamp(doc):
    return dict(doc, timestamp=datetime.datetime.now(datetime.timezone.utc).isoformat())


def run_verify(cfg):
    doc, status = verify_document(cfg)
    if cfg.format == "csv":
        _emit(_sweep_csv([_sweep_row(cfg.params, doc, status)]), cfg.output_path)
    else:
        _emit(asy.report_to_json(_stamp(doc)) + "\n", cfg.output_path)
    return status


SWEEP_FIELDS = ["alpha", "p", "kind", "status", "regime", "converged", "iterations",
                "first_order", "second_order", "deriv_1", "deriv_2", "deriv_3",
                "cubic_third_order", "all_pass"]


def _sweep_row(params, doc, status):
    row = {k: "" for k in SWEEP_FIELDS}
    row.update(alpha=f"{params.alpha:.12g}", p=f"{params.p:.12g}", kind=params.kind.value,
               regime=asy.classify_regime(params).value.value,
               converged=str(bool(doc.get("converged"))).lower(),
               iterations=doc.get("convergence", {}).get("iterations", ""))
    for r in doc.get("reports", []):
        if r["theorem_tag"] in row:
            row[r["theorem_tag"]] = r["status"]
    row["status"] = {EXIT_OK: "ok", EXIT_NOCONV: "no_convergence", EXIT_VERIFY: "verification_failed"}[status]
    row["all_pass"] = str(status == EXIT_OK).lower()
    return row


def _sweep_csv(rows):
    buf = io.StringIO()
    w = csv.DictWriter(buf, SWEEP_FIELDS, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def _sweep_job(cfg):
    # each job builds its own record; the parent merges them in order
    doc, status = verify_document(cfg)
    return doc, status


def run_sweep(cfg, alphas, ps, jobs=1):
    pairs, invalid = [], []
    for a in alphas:
        for p in ps:
            try:
                pairs.append(ProblemParams(a, p, cfg.params.kind if cfg.params else Nonlinearity.SIGNED_POWER))
            except DomainError as exc:
                invalid.append((a, p, str(exc)))
    if not pairs:
        raise UsageError("no valid (alpha, p) pair in the sweep")
    cfgs = [RunConfig("verify", pp, cfg.grid, cfg.solver, cfg.eval, None, cfg.format, cfg.window)
            for pp in pairs]
    if jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_sweep_job, cfgs))
    else:
        results = [_sweep_job(c) for c in cfgs]
    statuses = [s for _, s in results]
    if cfg.format == "csv":
        rows = [_sweep_row(pp, d, s) for pp, (d, s) in zip(pairs, results)]
        for a, p, msg in invalid:
            row = {k: "" for k in SWEEP_FIELDS}
            row.update(alpha=f"{a:.12g}", p=f"{p:.12g}", status="invalid", all_pass="false")
            rows.append(row)
        _emit(_sweep_csv(rows), cfg.output_path)
    else:
        doc = {"runs": [d for d, _ in results],
               "invalid": [{"alpha": a, "p": p, "reason": m} for a, p, m in invalid]}
        _emit(asy.report_to_json(_stamp(doc)) + "\n", cfg.output_path)
    if EXIT_NOCONV in statuses:
        return EXIT_NOCONV
    return EXIT_VERIFY if EXIT_VERIFY in statuses else EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing

def _values(text):
    """``"0.8,1.0"`` or inclusive ``"start:stop:step"``."""
    text = text.strip()
    if ":" in text:
        start, stop, step = (float(t) for t in text.split(":"))
        if step <= 0 or stop < start:
            raise argparse.ArgumentTypeError("ranges need start <= stop and a positive step")
        n = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [round(start + i * step, 12) for i in range(n)]
    return [float(t) for t in text.split(",") if t]


def build_parser():
    ap = argparse.ArgumentParser(prog="fracsoliton", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, need_p=True):
        sp.add_argument("--alpha", type=float, required=True)
        if need_p:
            sp.add_argument("--p", type=float, required=True)
            sp.add_argument("--kind", choices=[k.value for k in Nonlinearity], default="signed_power")
        sp.add_argument("--out", default=None, help="output file (default: stdout)")
        sp.add_argument("--format", choices=["json", "csv"], default="json")

    def grid_opts(sp):
        sp.add_argument("--L", type=float, default=400.0, help="half-length of the periodic box")
        sp.add_argument("--n", type=int, default=2 ** 15, help="number of grid points (power of two)")
        sp.add_argument("--tol", type=float, default=1e-10, help="residual tolerance")
        sp.add_argument("--max-iter", type=int, default=2000)

    sp = sub.add_parser("kernel", help="tabulate k (and k') by quadrature and series")
    common(sp, need_p=False)
    sp.set_defaults(format="csv")
    sp.add_argument("--range", type=float, nargs=2, default=(1.0, 100.0), metavar=("X0", "X1"))
    sp.add_argument("--points", type=int, default=200)
    sp.add_argument("--tol", type=float, default=1e-10, help="quadrature relative tolerance")

    sp = sub.add_parser("solve", help="compute a ground state")
    common(sp)
    grid_opts(sp)

    for name in ("verify", "sweep"):
        sp = sub.add_parser(name, help="solve and check the tail expansions" if name == "verify"
                            else "verify a grid of (alpha, p) pairs")
        if name == "verify":
            common(sp)
        else:
            sp.add_argument("--alpha", type=_values, required=True, help="list a,b,c or start:stop:step")
            sp.add_argument("--p", type=_values, required=True, help="list a,b,c or start:stop:step")
            sp.add_argument("--kind", choices=[k.value for k in Nonlinearity], default="signed_power")
            sp.add_argument("--out", default=None)
            sp.add_argument("--format", choices=["json", "csv"], default="csv")
            sp.add_argument("--jobs", type=int, default=1)
        grid_opts(sp)
        sp.add_argument("--window", type=float, nargs=2, default=None, metavar=("X1", "X2"))
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        if args.command == "kernel":
            cfg = RunConfig("kernel", eval=EvalOptions(quad_rel_tol=args.tol),
                            output_path=args.out, format=args.format)
            return run_kernel(cfg, args.alpha, tuple(args.range), args.points)
        grid = Grid(args.L, args.n)
        solver = SolverOptions(max_iter=args.max_iter, tol_residual=args.tol)
        if args.command == "sweep":
            if args.jobs < 1:
                raise UsageError("--jobs must be positive")
            cfg = RunConfig("sweep", _KindOnly(args.kind), grid, solver, output_path=args.out,
                            format=args.format, window=tuple(args.window) if args.window else None)
            return run_sweep(cfg, args.alpha, args.p, args.jobs)
        params = ProblemParams(args.alpha, args.p, args.kind)
        window = tuple(args.window) if getattr(args, "window", None) else None
        cfg = RunConfig(args.command, params, grid, solver, output_path=args.out,
                        format=args.format, window=window)
        if args.command == "solve":
            return run_solve(cfg)
        return run_verify(cfg)
    except (UsageError, DomainError) as exc:
        print(f"fracsoliton: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FracSolitonError as exc:
        print(f"fracsoliton: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VERIFY


@dataclass(frozen=True)
class _KindOnly:
    """Carries the nonlinearity kind of a sweep (alpha and p vary per job)."""

    kind: Nonlinearity

    def __post_init__(self):
        object.__setattr__(self, "kind", Nonlinearity(self.kind))


if __name__ == "__main__":
    sys.exit(main())
