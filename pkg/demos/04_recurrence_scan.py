"""Poincare-style returns: the orbit keeps revisiting its starting ball.

Volume preservation plus bounded orbits force almost every start to be
revisited arbitrarily closely, infinitely often. Scan a long flagship run
for passes through an epsilon-ball around the initial state.
"""

from rpsdyn import (
    IntegratorConfig,
    ModelParams,
    RecurrenceConfig,
    integrate,
    random_interior_state,
    recurrence_scan,
)

params = ModelParams(n=3, mu=0.1)
state0 = random_interior_state(42, params.n)
cfg = IntegratorConfig(t_end=5000.0, rtol=1e-9, atol=1e-9, sample_interval=0.01)

print("integrating to t=5000 ...")
traj = integrate(state0, params, cfg)
report = recurrence_scan(traj, RecurrenceConfig(epsilon=0.05, t_min=1.0, max_returns=50))

print(f"{len(report.returns)} return event(s) within eps=0.05 "
      f"(C drift max {report.drift_stats[0]:.1e}):")
for t, d in report.returns[:10]:
    print(f"   t = {t:9.2f}   distance = {d:.4f}")
if len(report.returns) > 10:
    print(f"   ... and {len(report.returns) - 10} more")
t, d = report.global_min
print(f"closest approach after t_min: distance {d:.5f} at t = {t:.2f}")
