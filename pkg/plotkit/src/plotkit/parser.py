"""Standalone parser for the trajectory CSV schema.

The schema: optional `# key=value` metadata lines (values JSON-encoded),
one header `t,x1,...,xn,w1,...,wn,C,h`, then one numeric row per sample.
Errors carry the path and 1-based line number of the offending line.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np


class SchemaError(ValueError):
    """Input file does not match the trajectory CSV schema."""

    def __init__(self, path, lineno, message):
        super().__init__(f"{path}:{lineno}: {message}")
        self.path = str(path)
        self.lineno = lineno


@dataclass(frozen=True, eq=False)
class TrajectoryData:
    """One parsed trajectory: metadata and the (strided) sample columns."""

    path: str
    meta: dict
    n: int
    times: np.ndarray
    xs: np.ndarray  # (k, n)
    ws: np.ndarray  # (k, n)

    @property
    def label(self) -> str:
        seed = self.meta.get("init.seed")
        stem = self.path.rsplit("/", 1)[-1]
        stem = stem[:-4] if stem.endswith(".csv") else stem
        return f"{stem} (seed {seed})" if seed is not None else stem


def _expected_header(n: int) -> str:
    return ",".join(["t"] + [f"x{i}" for i in range(1, n + 1)]
                    + [f"w{i}" for i in range(1, n + 1)] + ["C", "h"])


def parse_trajectory(path, stride: int = 1) -> TrajectoryData:
    """Parse a trajectory CSV, keeping every stride-th sample row."""
    if stride < 1:
        raise ValueError(f"stride must be >= 1, got {stride}")
    meta: dict = {}
    header_cols = None
    n = 0
    rows = []
    kept = 0
    seen = 0
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            if line.startswith("#"):
                if header_cols is not None:
                    raise SchemaError(path, lineno, "metadata line after the header")
                key, eq, raw = line[1:].strip().partition("=")
                if not eq:
                    raise SchemaError(path, lineno, "metadata line is not 'key=value'")
                try:
                    meta[key.strip()] = json.loads(raw)
                except json.JSONDecodeError as exc:
                    raise SchemaError(path, lineno,
                                      f"metadata value for {key.strip()!r} is not JSON: {exc}")
                continue
            if header_cols is None:
                header_cols = line.split(",")
                count = len(header_cols)
                if count < 9 or (count - 3) % 2 != 0:
                    raise SchemaError(path, lineno,
                                      f"header has {count} columns, expected t,x1..xn,w1..wn,C,h")
                n = (count - 3) // 2
                if line != _expected_header(n):
                    raise SchemaError(path, lineno,
                                      f"header {line!r} does not match {_expected_header(n)!r}")
                continue
            fields = line.split(",")
            if len(fields) != len(header_cols):
                raise SchemaError(path, lineno,
                                  f"row has {len(fields)} fields, header has {len(header_cols)}")
            seen += 1
            if (seen - 1) % stride != 0:
                continue
            try:
                rows.append([float(tok) for tok in fields])
            except ValueError:
                bad = next(tok for tok in fields if not _is_float(tok))
                raise SchemaError(path, lineno, f"non-numeric field {bad!r}")
            kept += 1
    if header_cols is None:
        raise SchemaError(path, 1, "no header line found")
    if kept == 0:
        raise SchemaError(path, 1, "no data rows")
    data = np.asarray(rows)
    return TrajectoryData(path=str(path), meta=meta, n=n, times=data[:, 0],
                          xs=data[:, 1:n + 1], ws=data[:, n + 1:2 * n + 1])


def _is_float(tok: str) -> bool:
    try:
        float(tok)
        return True
    except ValueError:
        return False
