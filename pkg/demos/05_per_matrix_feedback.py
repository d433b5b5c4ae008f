"""Exploration mode: each favoring matrix gets its own feedback strength.

No conservation law is established for unequal mu_i, so the log-barrier
value is reported purely as a diagnostic (at the scalar reference mu). The
runs below stay interior and keep cycling anyway.
"""

from rpsdyn import (
    IntegratorConfig,
    ModelParams,
    RecurrenceConfig,
    integrate,
    random_interior_state,
    recurrence_scan,
)

state0 = random_interior_state(42, 3)
cfg = IntegratorConfig(t_end=1000.0, rtol=1e-10, atol=1e-10, sample_interval=0.1)

for mu_pm in ((0.1, 0.1, 0.1), (0.05, 0.1, 0.15), (0.02, 0.1, 0.3)):
    params = ModelParams(n=3, mu=0.1, mu_per_matrix=mu_pm)
    traj = integrate(state0, params, cfg)
    report = recurrence_scan(traj, RecurrenceConfig(epsilon=0.1, t_min=1.0, max_returns=500))
    tag = "uniform " if len(set(mu_pm)) == 1 else "unequal "
    print(f"mu_i = {mu_pm} ({tag}): min coordinate {min(traj.xs.min(), traj.ws.min()):.2e}, "
          f"{len(report.returns)} returns at eps=0.1, "
          f"reference-mu C drift {report.drift_stats[0]:.2e}"
          + ("  <- conserved" if len(set(mu_pm)) == 1 else "  (diagnostic only)"))
