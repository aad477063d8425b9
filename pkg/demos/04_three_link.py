"""Standing-posture stand-in: three links, three joint torques.

The model is a linearised triple inverted pendulum with passive joint
stiffness; its parameters are plausible adult values, not an identified
subject.  Only the qualitative pattern is of interest: overestimating the
actuator gain gives a +1 crossing, underestimating it a -1 crossing.
"""

import numpy as np

from intermittent import shipped_scenario, three_link_model
from intermittent.pipeline import run

m = three_link_model()
print("open-loop poles:", np.round(np.sort_complex(np.linalg.eigvals(m.A)), 2))

for name in ("three_link_b0.9", "three_link_b1.1"):
    an, trace, _, s = run(shipped_scenario(name), continuous=False)
    print(f"{name}: {s.cycle_class}, delta_crit {s.delta_crit:.4f} s,"
          f" predicted period {s.predicted_period:.4f}, measured {s.measured_period:.4f}")
