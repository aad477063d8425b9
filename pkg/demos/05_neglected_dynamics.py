"""Unmodelled actuator dynamics.

The design model is the 2-state plant; the real input passes through a
second-order filter (wn = 10, zeta = 0.5).  With aggressive gains the
continuous observer-based loop goes unstable, while intermittent control
settles into a bounded limit cycle.
"""

import numpy as np

from intermittent import shipped_scenario
from intermittent.pipeline import run
from intermittent.simulator import continuous_matrix

sc = shipped_scenario("neglected_dynamics")
an, trace, ctrace, s = run(sc)
lam = np.linalg.eigvals(continuous_matrix(sc.plant, an.design))
print("continuous closed-loop eigenvalues:", np.round(np.sort_complex(lam), 3))
print(f"|y_c| grows from {abs(ctrace.y[0, 0]):.2f} to {abs(ctrace.y[-1, 0]):.2f} over {sc.duration:.0f} s")
print(f"intermittent: {s.cycle_class}, delta_crit {s.delta_crit:.4f} s, measured {s.measured_period:.4f} s,"
      f" max |x| in tail {s.measured_amplitude:.3f}")
