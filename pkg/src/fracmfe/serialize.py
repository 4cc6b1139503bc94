"""Deterministic CSV/JSON serialization of solutions, branches and
Green-function samples.

All CSV files are RFC-4180 style with a header row, '.' decimal
separator and LF line endings; floats are written with repr-exact
precision (17 significant digits) except Green samples, which use the
documented 12 significant digits.  JSON documents carry a
schema-version field and are written with sorted keys, so identical
inputs produce byte-identical artifacts.
"""

from __future__ import annotations

import json
import pathlib

import numpy as np

from . import constants
from .grid import Field, build_grid

SCHEMA_VERSION = 1


def _fmt(x, digits=17):
    return f"{x:.{digits}g}"


def write_solution(prefix, result):
    """Write <prefix>.csv (x, u(x)) and <prefix>.json (summary header)."""
    prefix = pathlib.Path(prefix)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    csv_path = prefix.parent / (prefix.name + ".csv")
    json_path = prefix.parent / (prefix.name + ".json")
    grid = result.u.grid
    lines = ["x,u"]
    for x, v in zip(grid.nodes, result.u.values):
        lines.append(f"{_fmt(x)},{_fmt(v)}")
    csv_path.write_text("\n".join(lines) + "\n")

    header = {
        "schema_version": SCHEMA_VERSION,
        "rho": result.rho,
        "converged": bool(result.converged),
        "iterations": int(result.iterations),
        "fixed_point_residual": result.fixed_point_residual,
        "strong_residual": (None if np.isnan(result.strong_residual)
                            else result.strong_residual),
        "u0_value": result.u0_value,
        "grid": {"n": int(grid.n), "kind": grid.kind},
        "constants_version": constants.version(),
    }
    json_path.write_text(json.dumps(header, indent=2, sort_keys=True) + "\n")
    return csv_path, json_path


class MalformedSolutionError(ValueError):
    pass


def read_solution(prefix):
    """Read a solution written by write_solution; returns (Field, header).

    Raises MalformedSolutionError on parse problems or when the sample
    points do not match the grid described in the header.
    """
    prefix = pathlib.Path(prefix)
    csv_path = prefix.parent / (prefix.name + ".csv")
    json_path = prefix.parent / (prefix.name + ".json")
    try:
        header = json.loads(json_path.read_text())
        gdesc = header["grid"]
        rho = float(header["rho"])
        grid = build_grid(int(gdesc["n"]), gdesc["kind"])
    except (OSError, KeyError, ValueError, json.JSONDecodeError) as exc:
        raise MalformedSolutionError(f"bad solution header: {exc}") from exc
    try:
        rows = csv_path.read_text().strip().split("\n")
        if rows[0] != "x,u":
            raise ValueError(f"unexpected CSV header {rows[0]!r}")
        data = np.array([[float(c) for c in row.split(",")]
                         for row in rows[1:]])
        if data.shape != (grid.n, 2):
            raise ValueError(
                f"expected {grid.n} rows, found {data.shape[0]}")
    except (OSError, ValueError, IndexError) as exc:
        raise MalformedSolutionError(f"bad solution CSV: {exc}") from exc
    if np.max(np.abs(data[:, 0] - grid.nodes)) > 1e-12:
        raise MalformedSolutionError(
            "sample points do not match the grid in the header")
    return Field(grid, data[:, 1]), header, rho


def write_branch(path, branch, diagnostics_rows=None):
    """Branch table: one CSV row per converged rho."""
    path = pathlib.Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    cols = ["rho", "u0", "fixed_point_residual", "iterations"]
    extra = []
    if diagnostics_rows:
        extra = sorted(set().union(*[set(d) for d in diagnostics_rows]))
        cols += extra
    lines = [",".join(cols)]
    for i, (rho, res) in enumerate(branch.points):
        row = [_fmt(rho), _fmt(res.u0_value), _fmt(res.fixed_point_residual),
               str(res.iterations)]
        if diagnostics_rows:
            row += [_fmt(diagnostics_rows[i].get(c, float("nan")))
                    for c in extra]
        lines.append(",".join(row))
    path.write_text("\n".join(lines) + "\n")
    return path


def write_green_samples(path_or_none, xs):
    """CSV of (x, G_0(x), H(0, x)); exterior samples get zeros."""
    from .green import green, regular_part

    lines = ["x,G0,H"]
    for x in xs:
        x = float(x)
        if abs(x) < 1.0:
            g = green(0.0, x)
            h = regular_part(0.0, x)
        else:
            g = h = 0.0
        lines.append(f"{_fmt(x, 12)},{_fmt(g, 12)},{_fmt(h, 12)}")
    text = "\n".join(lines) + "\n"
    if path_or_none is None:
        return text
    path = pathlib.Path(path_or_none)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    return path
