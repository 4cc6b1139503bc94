"""Command-line front end.

Subcommands:
  solve      solve at a single rho, write solution CSV + JSON summary
  continue   march the branch over a rho range, write the branch table
  audit      re-check a stored solution (consistency + Pohozaev audit)
  green      emit samples of the Green function G_0 and regular part H

Exit codes: 0 success, 1 bad configuration or malformed input,
2 non-convergence (or failed audit bound), 3 blow-up/overflow signal,
4 stored file inconsistent with its own header.

Configuration precedence: command-line flags > --config JSON > defaults.
The optional THREADS environment variable caps BLAS thread pools; it is
applied before numpy is loaded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

_CONFIG_KEYS = {
    "n", "kind", "tol", "max_iter", "damping", "method",
    "rho", "rho_start", "rho_end", "step", "u0_cap",
    "diagnostics", "output", "identity_bound",
}

_DEFAULTS = {
    "n": 256,
    "kind": "graded_composite",
    "tol": 1e-10,
    "max_iter": 2000,
    "damping": 1.0,
    "method": "auto",
    "step": 0.1,
    "u0_cap": 50.0,
    "diagnostics": False,
    "output": "out",
    "identity_bound": 1e-3,
}


def _apply_threads_env():
    threads = os.environ.get("THREADS")
    if threads:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS",
                    "MKL_NUM_THREADS"):
            os.environ.setdefault(var, threads)


def _load_config(path):
    with open(path) as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict):
        raise ValueError("config must be a JSON object")
    unknown = set(doc) - _CONFIG_KEYS
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    return doc


def _settings(args):
    """Merge defaults, config file and explicit flags."""
    merged = dict(_DEFAULTS)
    if getattr(args, "config", None):
        merged.update(_load_config(args.config))
    for key in _CONFIG_KEYS:
        val = getattr(args, key, None)
        if val is not None:
            merged[key] = val
    return merged


def _solve_config(s, rho):
    from .solver import NEWTON, PICARD, SolveConfig

    method = s["method"]
    if method == "auto":
        method = PICARD if rho <= 4.0 else NEWTON
        max_iter = s["max_iter"] if method == PICARD else min(
            s["max_iter"], 60)
    else:
        max_iter = s["max_iter"]
    return SolveConfig(max_iter=max_iter, tol=s["tol"],
                       damping=s["damping"], method=method)


def cmd_solve(args):
    import numpy as np

    from .grid import Field, build_grid
    from .serialize import write_solution
    from .solver import kernel_for
    from .solver import solve as run_solve

    s = _settings(args)
    rho = s.get("rho")
    if rho is None or rho <= 0:
        print(f"solve: rho must be positive, got {rho}", file=sys.stderr)
        return 1
    try:
        grid = build_grid(s["n"], s["kind"])
    except ValueError as exc:
        print(f"solve: {exc}", file=sys.stderr)
        return 1
    kernel = kernel_for(grid)
    u0 = Field(grid, np.zeros(grid.n))
    try:
        result = run_solve(rho, u0, _solve_config(s, rho), kernel,
                           with_strong=True)
    except OverflowError as exc:
        print(f"solve: {exc}", file=sys.stderr)
        return 3
    except np.linalg.LinAlgError as exc:
        print(f"solve: singular linearisation ({exc})", file=sys.stderr)
        return 2
    csv_path, json_path = write_solution(
        os.path.join(s["output"], f"solution_rho_{rho:.6f}"), result)
    print(f"wrote {csv_path} and {json_path}")
    if not result.converged:
        print(f"solve: no convergence after {result.iterations} iterations "
              f"(residual {result.fixed_point_residual:.3e})",
              file=sys.stderr)
        return 2
    print(f"converged in {result.iterations} iterations: u(0) = "
          f"{result.u0_value:.12g}, fixed-point residual "
          f"{result.fixed_point_residual:.3e}, strong residual "
          f"{result.strong_residual:.3e}")
    return 0


def cmd_continue(args):
    from .diagnostics import blowup_profile, green_limit, pohozaev_audit
    from .grid import build_grid
    from .serialize import write_branch
    from .solver import REACHED_END, continue_branch, kernel_for

    s = _settings(args)
    start, end = s.get("rho_start"), s.get("rho_end")
    if start is None or end is None or not 0 < start < end:
        print(f"continue: need 0 < rho_start < rho_end, got {start}, {end}",
              file=sys.stderr)
        return 1
    try:
        grid = build_grid(s["n"], s["kind"])
    except ValueError as exc:
        print(f"continue: {exc}", file=sys.stderr)
        return 1
    kernel = kernel_for(grid)
    branch = continue_branch(start, end, s["step"], grid=grid, kernel=kernel,
                             u0_cap=s["u0_cap"])
    diag_rows = None
    if s["diagnostics"]:
        diag_rows = []
        for rho, res in branch.points:
            rep = pohozaev_audit(res.u, rho)
            prof = blowup_profile(res.u, rho, R=10.0)
            diag_rows.append({
                "I1": rep.I1, "I3": rep.I3,
                "identity_residual": rep.identity_residual,
                "inequality_margin": rep.inequality_margin,
                "eta_error": prof.eta_error,
                "mass_in_core": blowup_profile(res.u, rho, R=20.0).mass_in_core,
                "green_limit": green_limit(res.u, rho, 0.3),
            })
    path = write_branch(os.path.join(s["output"], "branch.csv"), branch,
                        diag_rows)
    last = branch.points[-1][0] if branch.points else None
    print(f"wrote {path}: {len(branch.points)} solutions, "
          f"termination {branch.termination_reason}, last rho {last}")
    return 0 if branch.termination_reason == REACHED_END else 2


def cmd_audit(args):
    from .diagnostics import pohozaev_audit
    from .serialize import MalformedSolutionError, read_solution
    from .solver import apply_T, kernel_for

    import numpy as np

    s = _settings(args)
    try:
        u, header, rho = read_solution(args.solution)
    except MalformedSolutionError as exc:
        print(f"audit: {exc}", file=sys.stderr)
        return 1
    # consistency: the stored field must actually solve the stored rho
    kernel = kernel_for(u.grid)
    recomputed = float(np.max(np.abs(apply_T(u, rho, kernel).values
                                     - u.values)))
    claimed = float(header.get("fixed_point_residual", 0.0))
    if header.get("converged") and recomputed > max(100.0 * claimed, 1e-6):
        print(f"audit: stored field does not solve the stored rho={rho} "
              f"(recomputed residual {recomputed:.3e} vs claimed "
              f"{claimed:.3e}): header inconsistent with content",
              file=sys.stderr)
        return 4
    report = pohozaev_audit(u, rho)
    doc = {
        "schema_version": header.get("schema_version", 1),
        "rho": rho,
        "I1": report.I1,
        "I3": report.I3,
        "identity_residual": report.identity_residual,
        "inequality_margin": report.inequality_margin,
        "uhat_at_1": report.uhat_at_1,
        "recomputed_fixed_point_residual": recomputed,
    }
    print(json.dumps(doc, indent=2, sort_keys=True))
    ok = (report.inequality_margin < 0
          and report.identity_residual <= s["identity_bound"])
    return 0 if ok else 2


def _parse_points(spec):
    import numpy as np

    if ":" in spec:
        a, b, count = spec.split(":")
        return np.linspace(float(a), float(b), int(count))
    return np.array([float(tok) for tok in spec.split(",") if tok])


def cmd_green(args):
    from .serialize import write_green_samples

    try:
        xs = _parse_points(args.points)
    except ValueError as exc:
        print(f"green: bad points spec ({exc})", file=sys.stderr)
        return 1
    if args.output:
        path = write_green_samples(args.output, xs)
        print(f"wrote {path}")
    else:
        sys.stdout.write(write_green_samples(None, xs))
    return 0


def build_parser():
    ap = argparse.ArgumentParser(
        prog="fracmfe",
        description="Solver and verification lab for the half-Laplacian "
                    "mean-field equation on (-1, 1).",
        epilog="Defaults: n=256 graded_composite grid, tol=1e-10, "
               "damping=1.0, method=auto (Picard for rho <= 4, Newton "
               "beyond), step=0.1, u0_cap=50, output='out', "
               "identity_bound=1e-3.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON config file (unknown keys "
                                        "rejected)")
        p.add_argument("--n", type=int, help="grid size")
        p.add_argument("--kind", choices=["graded_composite",
                                          "chebyshev_lobatto"])
        p.add_argument("--tol", type=float, help="fixed-point tolerance")
        p.add_argument("--max-iter", dest="max_iter", type=int)
        p.add_argument("--damping", type=float)
        p.add_argument("--method", choices=["auto", "picard", "newton"])
        p.add_argument("--output", help="output directory")

    ps = sub.add_parser("solve", help="solve at a single rho")
    common(ps)
    ps.add_argument("--rho", type=float)
    ps.set_defaults(fn=cmd_solve)

    pc = sub.add_parser("continue", help="continuation over a rho range")
    common(pc)
    pc.add_argument("--rho-start", dest="rho_start", type=float)
    pc.add_argument("--rho-end", dest="rho_end", type=float)
    pc.add_argument("--step", type=float)
    pc.add_argument("--u0-cap", dest="u0_cap", type=float)
    pc.add_argument("--diagnostics", action="store_true", default=None)
    pc.set_defaults(fn=cmd_continue)

    pa = sub.add_parser("audit", help="audit a stored solution")
    pa.add_argument("solution", help="solution path prefix (without "
                                     ".csv/.json)")
    pa.add_argument("--config")
    pa.add_argument("--identity-bound", dest="identity_bound", type=float)
    pa.set_defaults(fn=cmd_audit)

    pg = sub.add_parser("green", help="sample the Green function")
    pg.add_argument("--points", required=True,
                    help="'a:b:count' for a linspace or 'x1,x2,...'")
    pg.add_argument("--output", help="CSV path (stdout when omitted)")
    pg.set_defaults(fn=cmd_green)
    return ap


def main(argv=None):
    _apply_threads_env()
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"{args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
