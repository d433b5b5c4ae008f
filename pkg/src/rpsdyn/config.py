"""Run configuration: YAML file + CLI overrides, validated with field-precise errors.

A config file holds up to five sections mirroring RunConfig::

    model:      {n, mu, amplitude, mu_per_matrix}
    integrator: {method, space, t_end, dt, rtol, atol, max_step,
                 sample_interval, boundary_floor, renormalize_field}
    recurrence: {epsilon, t_min, max_returns}
    init:       {seed} or {x0: [...], w0: [...]}
    output:     {path, format}

CLI flags override file values, which override the package defaults.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

import numpy as np
import yaml

from .analysis import RecurrenceConfig
from .integrate import IntegratorConfig
from .model import ModelParams, SimplexPoint, SystemState
from .io import FORMATS
from .sampling import random_interior_state


class ConfigError(ValueError):
    """Invalid run configuration; the message names the offending field."""


@dataclass(frozen=True, eq=False)
class InitSpec:
    """Initial condition: explicit (x0, w0) lists, or a seed for random draws."""

    x0: tuple | None = None
    w0: tuple | None = None
    seed: int | None = None

    def __post_init__(self):
        explicit = self.x0 is not None or self.w0 is not None
        if explicit:
            if self.x0 is None or self.w0 is None:
                raise ConfigError("init: x0 and w0 must be given together")
            object.__setattr__(self, "x0", tuple(float(v) for v in self.x0))
            object.__setattr__(self, "w0", tuple(float(v) for v in self.w0))
        elif self.seed is None:
            raise ConfigError("init: seed is required when x0/w0 are not given")
        if self.seed is not None:
            if not isinstance(self.seed, (int, np.integer)) or isinstance(self.seed, bool):
                raise ConfigError(f"init.seed: must be an integer, got {self.seed!r}")
            object.__setattr__(self, "seed", int(self.seed))

    def state(self, n: int) -> SystemState:
        if self.x0 is not None:
            try:
                return SystemState(SimplexPoint(np.array(self.x0)), SimplexPoint(np.array(self.w0)))
            except ValueError as exc:
                raise ConfigError(f"init.x0/w0: {exc}") from exc
        return random_interior_state(self.seed, n)


@dataclass(frozen=True, eq=False)
class OutputSpec:
    path: str = "trajectory.csv"
    format: str = "csv"

    def __post_init__(self):
        if self.format not in FORMATS:
            raise ConfigError(f"output.format: must be one of {FORMATS}, got {self.format!r}")
        if not isinstance(self.path, str) or not self.path:
            raise ConfigError("output.path: must be a non-empty string")


@dataclass(frozen=True, eq=False)
class RunConfig:
    model: ModelParams
    integrator: IntegratorConfig
    init: InitSpec
    output: OutputSpec
    recurrence: RecurrenceConfig | None = None

    def initial_state(self) -> SystemState:
        return self.init.state(self.model.n)


_SECTIONS = {
    "model": ModelParams,
    "integrator": IntegratorConfig,
    "recurrence": RecurrenceConfig,
    "init": InitSpec,
    "output": OutputSpec,
}


def _section_fields(cls) -> set:
    return {f.name for f in fields(cls)}


def load_config_file(path) -> dict:
    """Read a YAML config file into a nested dict of sections."""
    with open(path, "r", encoding="utf-8") as fh:
        raw = yaml.safe_load(fh)
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: config file must be a mapping of sections")
    for section, content in raw.items():
        if section not in _SECTIONS:
            raise ConfigError(f"{path}: unknown section {section!r}")
        if not isinstance(content, dict):
            raise ConfigError(f"{path}: section {section!r} must be a mapping")
        unknown = set(content) - _section_fields(_SECTIONS[section])
        if unknown:
            raise ConfigError(f"{path}: unknown key {section}.{sorted(unknown)[0]}")
    return raw


def build_run_config(file_dict: dict | None = None, overrides: dict | None = None,
                     defaults: dict | None = None, want_recurrence: bool = False) -> RunConfig:
    """Layer defaults <- file <- overrides and construct a validated RunConfig.

    ``overrides``/``defaults`` use dotted keys like "integrator.t_end"; a None
    override means "not given". ``want_recurrence`` builds the recurrence
    section even when absent from the other layers.
    """
    sections: dict[str, dict] = {name: {} for name in _SECTIONS}
    for layer in (defaults, file_dict and _flatten(file_dict), overrides):
        if not layer:
            continue
        for key, value in layer.items():
            if value is None:
                continue
            section, _, field = key.partition(".")
            if section not in _SECTIONS or not field:
                raise ConfigError(f"unknown config key {key!r}")
            if field not in _section_fields(_SECTIONS[section]):
                raise ConfigError(f"unknown config key {key!r}")
            sections[section][field] = value

    def build(section, cls, **extra):
        try:
            return cls(**sections[section], **extra)
        except ConfigError:
            raise
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{section}: {exc}") from exc

    if "n" not in sections["model"]:
        sections["model"]["n"] = 3
    if "mu" not in sections["model"] and "mu_per_matrix" not in sections["model"]:
        sections["model"]["mu"] = 0.1
    if "mu" not in sections["model"]:
        # exploration mode without an explicit scalar: reference mu is the mean
        sections["model"]["mu"] = float(np.mean(sections["model"]["mu_per_matrix"]))
    if not sections["init"]:
        sections["init"]["seed"] = 42

    model = build("model", ModelParams)
    integrator = build("integrator", IntegratorConfig)
    init = build("init", InitSpec)
    if init.x0 is not None:
        init.state(model.n)  # validate explicit coordinates against n eagerly
    output = build("output", OutputSpec)
    recurrence = None
    if want_recurrence or sections["recurrence"]:
        recurrence = build("recurrence", RecurrenceConfig)
    return RunConfig(model=model, integrator=integrator, init=init,
                     output=output, recurrence=recurrence)


def _flatten(nested: dict) -> dict:
    flat = {}
    for section, content in nested.items():
        for field, value in content.items():
            flat[f"{section}.{field}"] = value
    return flat


def resolved_meta(cfg: RunConfig) -> dict:
    """Flat dotted-key echo of a resolved config (for report files)."""
    meta = {
        "model.n": cfg.model.n,
        "model.mu": cfg.model.mu,
        "model.amplitude": cfg.model.amplitude,
        "model.mu_per_matrix": list(cfg.model.mu_per_matrix)
        if cfg.model.mu_per_matrix is not None else None,
    }
    for f in fields(IntegratorConfig):
        meta[f"integrator.{f.name}"] = getattr(cfg.integrator, f.name)
    if cfg.recurrence is not None:
        for f in fields(RecurrenceConfig):
            meta[f"recurrence.{f.name}"] = getattr(cfg.recurrence, f.name)
    meta["init.seed"] = cfg.init.seed
    if cfg.init.x0 is not None:
        meta["init.x0"] = list(cfg.init.x0)
        meta["init.w0"] = list(cfg.init.w0)
    meta["output.path"] = cfg.output.path
    meta["output.format"] = cfg.output.format
    return meta
