"""The limit-cycle size is set by the event threshold.

gamma = q_t / e0, so doubling q_t doubles the orbit while the interval stays
the same.  Checked here by simulation.
"""

from intermittent import shipped_scenario
from intermittent.pipeline import analyze, simulate, summarize
from intermittent.scenario import with_parameter

base = shipped_scenario("simple_b0.8")
ref = None
for q in (0.05, 0.1, 0.2, 0.4):
    sc = with_parameter(base, "q_t", q)
    an = analyze(sc, reference=False)
    s = summarize(sc, an, simulate(sc, an.design))
    ref = ref or s.measured_amplitude / q
    print(f"q_t = {q:4.2f}: gamma {s.gamma:.4f}, amplitude {s.measured_amplitude:.4f}"
          f" (ratio to linear {s.measured_amplitude / q / ref:.4f}), period {s.measured_period:.4f}")
