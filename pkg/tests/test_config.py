"""Config layering and validation."""

import numpy as np
import pytest

from rpsdyn.config import (
    ConfigError,
    build_run_config,
    load_config_file,
    resolved_meta,
)


def test_defaults():
    cfg = build_run_config()
    assert cfg.model.n == 3
    assert cfg.model.mu == 0.1
    assert cfg.integrator.method == "adaptive-rk45"
    assert cfg.integrator.space == "transformed"
    assert cfg.init.seed == 42
    assert cfg.output.format == "csv"
    assert cfg.recurrence is None


def test_file_layer(tmp_path):
    p = tmp_path / "run.yaml"
    p.write_text(
        "model:\n  n: 4\n  mu: 0.5\n"
        "integrator:\n  t_end: 20.0\n  rtol: 1.0e-8\n"
        "recurrence:\n  epsilon: 0.1\n"
        "init:\n  seed: 7\n")
    cfg = build_run_config(file_dict=load_config_file(p))
    assert cfg.model.n == 4
    assert cfg.model.mu == 0.5
    assert cfg.integrator.t_end == 20.0
    assert cfg.integrator.rtol == 1e-8
    assert cfg.integrator.atol == 1e-10  # untouched default
    assert cfg.recurrence.epsilon == 0.1
    assert cfg.init.seed == 7


def test_overrides_beat_file(tmp_path):
    p = tmp_path / "run.yaml"
    p.write_text("model:\n  mu: 0.5\n")
    cfg = build_run_config(file_dict=load_config_file(p),
                           overrides={"model.mu": 0.9, "integrator.t_end": 3.0})
    assert cfg.model.mu == 0.9
    assert cfg.integrator.t_end == 3.0


def test_unknown_keys_are_named(tmp_path):
    p = tmp_path / "run.yaml"
    p.write_text("model:\n  nn: 4\n")
    with pytest.raises(ConfigError, match="model.nn"):
        load_config_file(p)
    p.write_text("modell:\n  n: 4\n")
    with pytest.raises(ConfigError, match="modell"):
        load_config_file(p)
    with pytest.raises(ConfigError, match="integrator.speed"):
        build_run_config(overrides={"integrator.speed": 1.0})


def test_section_errors_are_prefixed():
    with pytest.raises(ConfigError, match="model"):
        build_run_config(overrides={"model.n": 2})
    with pytest.raises(ConfigError, match="integrator"):
        build_run_config(overrides={"integrator.t_end": -1.0})


def test_explicit_initial_state(tmp_path):
    p = tmp_path / "run.yaml"
    p.write_text("init:\n  x0: [0.5, 0.25, 0.25]\n  w0: [0.2, 0.3, 0.5]\n")
    cfg = build_run_config(file_dict=load_config_file(p))
    state = cfg.initial_state()
    np.testing.assert_allclose(state.x.coords, [0.5, 0.25, 0.25])
    np.testing.assert_allclose(state.w.coords, [0.2, 0.3, 0.5])


def test_explicit_initial_state_validated():
    with pytest.raises(ConfigError):
        build_run_config(overrides={"init.x0": [0.5, 0.25], "init.w0": [0.2, 0.3, 0.5]})
    with pytest.raises(ConfigError):
        build_run_config(overrides={"init.x0": [0.5, 0.25, 0.25]})  # w0 missing


def test_exploration_mode_reference_mu_defaults_to_mean(tmp_path):
    p = tmp_path / "run.yaml"
    p.write_text("model:\n  mu_per_matrix: [0.05, 0.1, 0.15]\n")
    cfg = build_run_config(file_dict=load_config_file(p))
    assert cfg.model.mu == pytest.approx(0.1)
    assert cfg.model.exploration


def test_resolved_meta_contains_everything():
    cfg = build_run_config(want_recurrence=True)
    meta = resolved_meta(cfg)
    for key in ("model.n", "model.mu", "integrator.t_end", "integrator.sample_interval",
                "recurrence.epsilon", "init.seed", "output.path", "output.format"):
        assert key in meta
