"""Command-line harness: simulate / verify / recur / sweep.

Exit codes: 0 success, 1 validation error, 2 verification failure,
3 runtime integration failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .analysis import drift_stats, recurrence_scan
from .config import ConfigError, build_run_config, load_config_file, resolved_meta
from .errors import BoundaryApproachError, StepUnderflowError
from .integrate import METHODS, SPACES, integrate
from .io import FORMATS, write_report_json, write_trajectory
from .verify import run_checks

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_VERIFY_FAILED = 2
EXIT_RUNTIME = 3


def _add_common(p: argparse.ArgumentParser, mu_type=float):
    p.add_argument("--config", metavar="PATH", help="YAML config file")
    p.add_argument("--n", type=int, help="strategy count (>= 3)")
    p.add_argument("--mu", type=mu_type, help="feedback strength")
    p.add_argument("--amplitude", type=float, help="base-game amplitude (> 0)")
    p.add_argument("--t-end", type=float, dest="t_end", help="integration horizon")
    p.add_argument("--rtol", type=float, help="relative tolerance")
    p.add_argument("--atol", type=float, help="absolute tolerance")
    p.add_argument("--space", choices=SPACES, help="integration coordinates")
    p.add_argument("--method", choices=METHODS, help="integration method")
    p.add_argument("--dt", type=float, help="initial / fixed step size")
    p.add_argument("--sample-interval", type=float, dest="sample_interval",
                   help="recording stride in model time")
    p.add_argument("--seed", type=int, help="seed for the random initial state")
    p.add_argument("--eps", type=float, help="recurrence return radius")
    p.add_argument("--out", metavar="PATH", help="output path")
    p.add_argument("--format", choices=FORMATS, help="trajectory file format")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rpsdyn",
        description="Coupled rock-paper-scissors replicator dynamics with environmental feedback.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="integrate one trajectory and write it to a file")
    _add_common(p)

    p = sub.add_parser("verify", help="run the invariant check bundle")
    _add_common(p)

    p = sub.add_parser("recur", help="integrate and scan for returns near the start")
    _add_common(p)
    p.add_argument("--t-min", type=float, dest="t_min", help="exclusion window after t=0")
    p.add_argument("--traj-out", metavar="PATH", help="also write the trajectory here")

    p = sub.add_parser("sweep", help="run simulate over a list of mu values")
    _add_common(p, mu_type=str)
    return parser


def _overrides(args) -> dict:
    ov = {
        "model.n": args.n,
        "model.amplitude": args.amplitude,
        "integrator.t_end": args.t_end,
        "integrator.rtol": args.rtol,
        "integrator.atol": args.atol,
        "integrator.space": args.space,
        "integrator.method": args.method,
        "integrator.dt": args.dt,
        "integrator.sample_interval": args.sample_interval,
        "init.seed": args.seed,
        "recurrence.epsilon": args.eps,
        "output.path": args.out,
        "output.format": args.format,
    }
    if getattr(args, "t_min", None) is not None:
        ov["recurrence.t_min"] = args.t_min
    if args.command != "sweep" and args.mu is not None:
        ov["model.mu"] = args.mu
    return ov


def _build(args, defaults=None, want_recurrence=False):
    file_dict = load_config_file(args.config) if args.config else None
    return build_run_config(file_dict=file_dict, overrides=_overrides(args),
                            defaults=defaults, want_recurrence=want_recurrence)


def _echo_extra(cfg) -> dict:
    keep = ("init.seed", "output.", "recurrence.")
    return {k: v for k, v in resolved_meta(cfg).items() if k.startswith(keep)}


def _cmd_simulate(args) -> int:
    cfg = _build(args)
    traj = integrate(cfg.initial_state(), cfg.model, cfg.integrator)
    write_trajectory(traj, cfg.output.path, cfg.output.format, extra_meta=_echo_extra(cfg))
    dmax, _ = drift_stats(traj, cfg.model)
    print(f"wrote {cfg.output.path}: {len(traj)} samples to t={cfg.integrator.t_end:g}, "
          f"max relative C drift {dmax:.3e}")
    return EXIT_OK


def _cmd_verify(args) -> int:
    cfg = _build(args, defaults={"integrator.t_end": 100.0})
    report = run_checks(cfg.model, cfg.integrator, seed=cfg.init.seed)
    report["config"] = resolved_meta(cfg)
    if args.out:
        write_report_json(report, args.out)
    else:
        json.dump(report, sys.stdout, indent=2)
        print()
    for name, res in report["checks"].items():
        print(f"{'PASS' if res['pass'] else 'FAIL'} {name}: "
              f"{res['value']:.3e} (threshold {res['threshold']:.0e})", file=sys.stderr)
    return EXIT_OK if report["ok"] else EXIT_VERIFY_FAILED


def _recurrence_payload(report) -> dict:
    return {
        "reference": {"x": list(map(float, report.reference.x.coords)),
                      "w": list(map(float, report.reference.w.coords))},
        "returns": [{"t": t, "distance": d} for t, d in report.returns],
        "n_returns": len(report.returns),
        "global_min": None if report.global_min is None else
        {"t": report.global_min[0], "distance": report.global_min[1]},
        "drift": {"max": report.drift_stats[0], "rms": report.drift_stats[1]},
    }


def _cmd_recur(args) -> int:
    defaults = {
        "integrator.t_end": 5000.0,
        "integrator.sample_interval": 0.01,
        "output.path": "recurrence.json",
    }
    cfg = _build(args, defaults=defaults, want_recurrence=True)
    traj = integrate(cfg.initial_state(), cfg.model, cfg.integrator)
    report = recurrence_scan(traj, cfg.recurrence)
    payload = _recurrence_payload(report)
    payload["config"] = resolved_meta(cfg)
    out = args.out or cfg.output.path
    write_report_json(payload, out)
    if args.traj_out:
        write_trajectory(traj, args.traj_out, cfg.output.format, extra_meta=_echo_extra(cfg))
    gm = payload["global_min"]
    print(f"wrote {out}: {payload['n_returns']} return event(s) within "
          f"eps={cfg.recurrence.epsilon:g}; global min {gm['distance']:.4g} at t={gm['t']:.6g}"
          if gm else f"wrote {out}: no samples beyond t_min")
    return EXIT_OK


def _parse_mu_list(raw: str | None):
    if raw is None:
        return [0.0, 0.1, 1.0]
    try:
        values = [float(tok) for tok in raw.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise ConfigError(f"--mu: expected comma-separated reals, got {raw!r}") from exc
    if not values:
        raise ConfigError("--mu: empty list")
    return values


def _with_suffix(path: str, mu: float) -> tuple[str, str]:
    p = Path(path)
    stem = p.stem if p.suffix else p.name
    suffix = p.suffix or ".csv"
    base = p.with_name(f"{stem}_mu{mu:g}")
    return str(base) + suffix, str(base) + "_report.json"


def _cmd_sweep(args) -> int:
    mus = _parse_mu_list(args.mu)
    cfg0 = _build(args, want_recurrence=True)
    for mu in mus:
        args.mu = None
        cfg = build_run_config(
            file_dict=load_config_file(args.config) if args.config else None,
            overrides={**_overrides(args), "model.mu": mu}, want_recurrence=True)
        traj = integrate(cfg.initial_state(), cfg.model, cfg.integrator)
        traj_path, report_path = _with_suffix(cfg0.output.path, mu)
        write_trajectory(traj, traj_path, cfg.output.format, extra_meta=_echo_extra(cfg))
        report = recurrence_scan(traj, cfg.recurrence)
        payload = _recurrence_payload(report)
        payload["config"] = resolved_meta(cfg)
        write_report_json(payload, report_path)
        print(f"mu={mu:g}: wrote {traj_path} and {report_path}; "
              f"max relative C drift {report.drift_stats[0]:.3e}")
    return EXIT_OK


_COMMANDS = {
    "simulate": _cmd_simulate,
    "verify": _cmd_verify,
    "recur": _cmd_recur,
    "sweep": _cmd_sweep,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; map those onto the validation code
        return EXIT_OK if exc.code == 0 else EXIT_VALIDATION
    try:
        return _COMMANDS[args.command](args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (BoundaryApproachError, StepUnderflowError) as exc:
        print(f"integration failure: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
