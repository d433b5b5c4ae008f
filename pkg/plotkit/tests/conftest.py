import math

import pytest


def synthetic_csv(path, n=3, rows=40, meta=None):
    """Write a schema-conforming trajectory file with a closed loop in it."""
    lines = []
    base_meta = {"model.n": n, "init.seed": 1}
    base_meta.update(meta or {})
    for key, value in base_meta.items():
        encoded = "null" if value is None else repr(value).replace("'", '"')
        lines.append(f"# {key}={encoded}")
    cols = ["t"] + [f"x{i}" for i in range(1, n + 1)] + [f"w{i}" for i in range(1, n + 1)]
    lines.append(",".join(cols + ["C", "h"]))
    for k in range(rows):
        t = 0.1 * k
        phase = 2 * math.pi * k / rows
        x = [1.0 / n + 0.1 * math.cos(phase + 2 * math.pi * i / n) for i in range(n)]
        w = [1.0 / n] * n
        lines.append(",".join(repr(v) for v in [t, *x, *w, 3.3, 0.1]))
    path.write_text("\n".join(lines) + "\n")
    return path


@pytest.fixture
def loop_csv(tmp_path):
    return synthetic_csv(tmp_path / "loop.csv")
