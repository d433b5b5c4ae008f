"""3D projection rendering of trajectory files.

Each input trajectory becomes one curve, projected onto three chosen
coordinates of the selected variable block (populations x or weights w).
Rendering is a pure function of (input files, spec): same inputs, same plot.
"""

from __future__ import annotations

from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be pinned first)

from .parser import parse_trajectory

VARIABLES = ("x", "w")


@dataclass(frozen=True, eq=False)
class PlotSpec:
    """What to draw: input files, variable block, projection axes, output."""

    inputs: tuple
    output: str
    variable: str = "x"
    projection: tuple = (0, 1, 2)
    stride: int = 1

    def __post_init__(self):
        if not self.inputs:
            raise ValueError("at least one input trajectory file is required")
        object.__setattr__(self, "inputs", tuple(str(p) for p in self.inputs))
        if self.variable not in VARIABLES:
            raise ValueError(f"variable must be one of {VARIABLES}, got {self.variable!r}")
        proj = tuple(int(i) for i in self.projection)
        if len(proj) != 3 or len(set(proj)) != 3 or min(proj) < 0:
            raise ValueError(f"projection must be three distinct nonnegative indices, got {proj}")
        object.__setattr__(self, "projection", proj)
        if not isinstance(self.stride, int) or self.stride < 1:
            raise ValueError(f"stride must be an integer >= 1, got {self.stride!r}")


def render(spec: PlotSpec) -> str:
    """Draw one 3D curve per input trajectory and write the image; returns its path."""
    trajectories = [parse_trajectory(p, stride=spec.stride) for p in spec.inputs]
    i, j, k = spec.projection
    for tr in trajectories:
        if max(spec.projection) >= tr.n:
            raise ValueError(
                f"{tr.path}: projection index {max(spec.projection)} out of range for n={tr.n}")

    fig = plt.figure(figsize=(7.0, 6.0))
    ax = fig.add_subplot(projection="3d")
    for tr in trajectories:
        block = tr.xs if spec.variable == "x" else tr.ws
        ax.plot(block[:, i], block[:, j], block[:, k], linewidth=0.7, label=tr.label)
    name = spec.variable
    ax.set_xlabel(f"{name}{i + 1}")
    ax.set_ylabel(f"{name}{j + 1}")
    ax.set_zlabel(f"{name}{k + 1}")
    ax.legend(loc="upper right", fontsize="small")
    fig.tight_layout()
    fig.savefig(spec.output, dpi=150)
    plt.close(fig)
    return spec.output
