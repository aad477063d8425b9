"""Critical interval, eigenvalue sign and amplitude for three gains.

A limit cycle appears where the dominant eigenvalue of phi reaches the unit
circle.  At +1 the event-time state repeats every interval.  At -1 it flips
sign, so the orbit takes two intervals.  A complex pair gives no fixed
interval at all.
"""

from intermittent import predict, shipped_scenario
from intermittent.pipeline import analyze

for name in ("simple_b0.8", "simple_b1.2", "simple_b1.7"):
    sc = shipped_scenario(name)
    pred = analyze(sc, reference=False).prediction
    lam = pred.lambda_crit
    print(f"{name}: delta_crit = {pred.delta_crit:.6f} s, lambda = {lam.real:+.4f}{lam.imag:+.4f}j,"
          f" class {pred.cycle_class.value}")
    if pred.period is not None:
        print(f"    period {pred.period:.4f} s, gamma {pred.gamma:.4f}, e0 {pred.e0:.4f}")
        print(f"    event-time state gamma*v = {pred.xbar_event.round(4)}")
    else:
        print(f"    {pred.reason}")

# the matched case never crosses
sc = shipped_scenario("simple_rho0")
print("simple_rho0:", predict(analyze(sc, reference=False).error_system, sc.event)[0].reason)
