"""3D projection renderer for trajectory CSV files."""

from .parser import SchemaError, TrajectoryData, parse_trajectory
from .render import PlotSpec, render

__version__ = "0.1.0"

__all__ = ["PlotSpec", "SchemaError", "TrajectoryData", "parse_trajectory", "render"]
