"""Trajectory and report serialization.

CSV schema: `#`-prefixed `key=value` metadata lines (values JSON-encoded),
then the header `t,x1,...,xn,w1,...,wn,C,h`, then one row per sample. Floats
are written with shortest round-trip formatting, so parsing a file reproduces
every value bit-exactly.

JSONL schema: first line is the metadata object, each further line is
`{"t": ..., "x": [...], "w": [...], "C": ..., "h": ...}`.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass

import numpy as np

from .integrate import Trajectory

FORMATS = ("csv", "jsonl")


@dataclass(frozen=True, eq=False)
class TrajectoryFile:
    """Parsed trajectory file: metadata plus the sample columns."""

    meta: dict
    times: np.ndarray
    xs: np.ndarray
    ws: np.ndarray
    conserved: np.ndarray
    steps: np.ndarray


def trajectory_meta(traj: Trajectory, extra: dict | None = None) -> dict:
    """Fully-resolved flat metadata for a trajectory (self-describing runs)."""
    p, c = traj.params, traj.config
    meta = {
        "model.n": p.n,
        "model.mu": p.mu,
        "model.amplitude": p.amplitude,
        "model.mu_per_matrix": list(p.mu_per_matrix) if p.mu_per_matrix is not None else None,
        "integrator.method": c.method,
        "integrator.space": c.space,
        "integrator.t_end": c.t_end,
        "integrator.dt": c.dt,
        "integrator.rtol": c.rtol,
        "integrator.atol": c.atol,
        "integrator.max_step": c.max_step,
        "integrator.sample_interval": c.sample_interval,
        "integrator.boundary_floor": c.boundary_floor,
        "integrator.renormalize_field": c.renormalize_field,
        "init.x0": [float(v) for v in traj.initial.x.coords],
        "init.w0": [float(v) for v in traj.initial.w.coords],
    }
    if extra:
        meta.update(extra)
    return meta


def _fmt(v: float) -> str:
    return repr(float(v))


def csv_header(n: int) -> str:
    cols = ["t"] + [f"x{i}" for i in range(1, n + 1)] + [f"w{i}" for i in range(1, n + 1)]
    return ",".join(cols + ["C", "h"])


def write_trajectory_csv(traj: Trajectory, path, extra_meta: dict | None = None) -> None:
    meta = trajectory_meta(traj, extra_meta)
    n = traj.params.n
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for key in meta:
            fh.write(f"# {key}={json.dumps(meta[key])}\n")
        fh.write(csv_header(n) + "\n")
        for k in range(len(traj)):
            row = [traj.times[k], *traj.xs[k], *traj.ws[k], traj.conserved[k], traj.steps[k]]
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def write_trajectory_jsonl(traj: Trajectory, path, extra_meta: dict | None = None) -> None:
    meta = trajectory_meta(traj, extra_meta)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(json.dumps(meta) + "\n")
        for k in range(len(traj)):
            rec = {
                "t": float(traj.times[k]),
                "x": [float(v) for v in traj.xs[k]],
                "w": [float(v) for v in traj.ws[k]],
                "C": float(traj.conserved[k]),
                "h": float(traj.steps[k]),
            }
            fh.write(json.dumps(rec) + "\n")


def write_trajectory(traj: Trajectory, path, fmt: str = "csv",
                     extra_meta: dict | None = None) -> None:
    if fmt == "csv":
        write_trajectory_csv(traj, path, extra_meta)
    elif fmt == "jsonl":
        write_trajectory_jsonl(traj, path, extra_meta)
    else:
        raise ValueError(f"format must be one of {FORMATS}, got {fmt!r}")


def _split_columns(data: np.ndarray, n: int) -> TrajectoryFile:
    return TrajectoryFile(meta={}, times=data[:, 0], xs=data[:, 1:n + 1],
                          ws=data[:, n + 1:2 * n + 1], conserved=data[:, 2 * n + 1],
                          steps=data[:, 2 * n + 2])


def read_trajectory_csv(path) -> TrajectoryFile:
    meta = {}
    body = []
    header = None
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                key, _, raw = line[1:].strip().partition("=")
                meta[key.strip()] = json.loads(raw)
            elif header is None:
                header = line
            else:
                body.append(line)
    if header is None:
        raise ValueError(f"{path}: no header line found")
    cols = header.split(",")
    if len(cols) < 5 or cols[0] != "t" or cols[-2] != "C" or cols[-1] != "h":
        raise ValueError(f"{path}: unexpected header {header!r}")
    n, rem = divmod(len(cols) - 3, 2)
    if rem != 0 or cols[1] != "x1" or cols[n + 1] != "w1":
        raise ValueError(f"{path}: unexpected header {header!r}")
    data = np.loadtxt(io.StringIO("\n".join(body)), delimiter=",", ndmin=2)
    if data.shape[1] != len(cols):
        raise ValueError(f"{path}: rows have {data.shape[1]} fields, header has {len(cols)}")
    parsed = _split_columns(data, n)
    return TrajectoryFile(meta=meta, times=parsed.times, xs=parsed.xs, ws=parsed.ws,
                          conserved=parsed.conserved, steps=parsed.steps)


def read_trajectory_jsonl(path) -> TrajectoryFile:
    with open(path, "r", encoding="utf-8") as fh:
        lines = [line for line in fh if line.strip()]
    if not lines:
        raise ValueError(f"{path}: empty file")
    meta = json.loads(lines[0])
    rows = [json.loads(line) for line in lines[1:]]
    data = np.array([[r["t"], *r["x"], *r["w"], r["C"], r["h"]] for r in rows])
    n = len(rows[0]["x"]) if rows else 0
    parsed = _split_columns(data.reshape(len(rows), -1), n)
    return TrajectoryFile(meta=meta, times=parsed.times, xs=parsed.xs, ws=parsed.ws,
                          conserved=parsed.conserved, steps=parsed.steps)


def read_trajectory(path, fmt: str | None = None) -> TrajectoryFile:
    """Parse a trajectory file; format inferred from the suffix unless given."""
    if fmt is None:
        fmt = "jsonl" if str(path).endswith(".jsonl") else "csv"
    return read_trajectory_jsonl(path) if fmt == "jsonl" else read_trajectory_csv(path)


def write_report_json(report: dict, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(report, fh, indent=2)
        fh.write("\n")
