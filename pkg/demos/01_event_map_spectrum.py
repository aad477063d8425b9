"""How the event-to-event map changes with the intermittent interval.

Take the unstable plant b/(s^2 - 1), design the controller for b = 1, and
run it on a plant whose gain is really 0.8.  Between events the hold replays
the predicted closed loop; at each event it is reset to the observer.  The
reduced state at event times obeys xbar_{i+1} = phi(Delta) xbar_i.
"""

import numpy as np

from intermittent import assemble, design_controller, phi_bar, simple_scenario, sweep
from intermittent.design import DesignWeights

plant = simple_scenario(0.8)
weights = DesignWeights.scaled(plant.nominal, Qc=3.0, Qo=100.0)
design = design_controller(plant.nominal, weights)
print("khat =", design.k_hat.ravel(), " Lhat =", design.L_hat.ravel())

es = assemble(plant, design)
print("error-system flow matrix (x, xo_err, xh_err):")
print(np.array2string(es.A_bar_C, precision=3, suppress_small=True))

# with a matched plant the map always contracts
matched = assemble(plant.with_rho(0.0), design)

sw = sweep(es, 0.05, 5.0, 200)
sw0 = sweep(matched, 0.05, 5.0, 200)
print("\n delta   rho(phi) matched   rho(phi) b=0.8")
for i in range(0, 200, 20):
    print(f"{sw.deltas[i]:6.3f}   {sw0.max_magnitudes[i]:16.4f}   {sw.max_magnitudes[i]:14.4f}")

# short intervals: phi is close to the identity
print("\nphi(0.01) =\n", np.array2string(phi_bar(es, 0.01), precision=4))
