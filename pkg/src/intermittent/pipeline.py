"""Design -> error system -> analysis -> simulation for one scenario."""

from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .analysis import CycleClass, predict, sweep
from .design import design_controller
from .errorsys import assemble, phi_bar
from .exceptions import DivergenceError, MeasurementError
from .model import matched_scenario
from .numerics import eig
from .simulator import measure_cycle, simulate_continuous, simulate_intermittent

__all__ = ["Analysis", "RunSummary", "analyze", "reference_system", "run", "simulate", "summarize",
           "CONVERGENCE_SPREAD"]

CONVERGENCE_SPREAD = 0.02


@dataclass(frozen=True)
class Analysis:
    design: object
    error_system: object
    prediction: object
    sweep: object
    reference_sweep: object
    basis: Optional[object] = None


def reference_system(plant, design):
    """Error system of the matched (``rho = 0``) case for the same design.

    With a reduced-order design model the embedded ``rho = 0`` plant is not
    minimal, so the nominal model itself stands in for it.
    """
    if plant.n == plant.n_hat:
        return assemble(plant.with_rho(0.0), design)
    return assemble(matched_scenario(plant.nominal), design)


def analyze(sc, reference=True):
    design = design_controller(sc.plant.nominal, sc.weights)
    es = assemble(sc.plant, design)
    rng = (sc.sweep.delta_min, sc.sweep.delta_max)
    pred, sw = predict(es, sc.event, rng, sc.sweep.steps)
    ref = sweep(reference_system(sc.plant, design), *rng, sc.sweep.steps) if reference else None
    basis = eig(phi_bar(es, pred.delta_crit)) if np.isfinite(pred.delta_crit) else None
    return Analysis(design, es, pred, sw, ref, basis)


@dataclass(frozen=True)
class RunSummary:
    """Prediction next to measurement for one scenario run.

    Relative errors are None unless both sides exist.  ``converged`` means
    the run stayed bounded and the tail intervals settled within 2%.
    """

    name: str
    delta_crit: Optional[float]
    lambda_crit_re: Optional[float]
    lambda_crit_im: Optional[float]
    cycle_class: str
    reason: str
    gamma: Optional[float]
    predicted_period: Optional[float]
    predicted_amplitude: Optional[float]
    measured_period: Optional[float]
    measured_amplitude: Optional[float]
    period_rel_error: Optional[float]
    amplitude_rel_error: Optional[float]
    interval_spread: Optional[float]
    alternating: Optional[bool]
    n_events: int
    diverged_at: Optional[float]
    converged: bool

    def to_dict(self):
        return asdict(self)


def _finite(x):
    return None if x is None or not np.isfinite(x) else float(x)


def summarize(sc, analysis, trace, tail_fraction=0.5):
    pred = analysis.prediction
    try:
        m = measure_cycle(trace, tail_fraction) if trace.diverged_at is None else None
    except MeasurementError:
        m = None
    pa = None
    if pred.trajectory is not None:
        pa = float(np.max(np.abs(pred.trajectory[:, : sc.plant.n])))
    mp = None if m is None else m.period
    ma = None if m is None else m.amplitude
    pe = None if mp is None or pred.period is None else abs(mp - pred.period) / pred.period
    ae = None if ma is None or pa is None else abs(ma - pa) / pa
    converged = m is not None and m.relative_spread <= CONVERGENCE_SPREAD
    cls = pred.cycle_class
    return RunSummary(
        name=sc.name,
        delta_crit=_finite(pred.delta_crit),
        lambda_crit_re=float(pred.lambda_crit.real),
        lambda_crit_im=float(pred.lambda_crit.imag),
        cycle_class=cls.value if isinstance(cls, CycleClass) else str(cls),
        reason=pred.reason,
        gamma=pred.gamma,
        predicted_period=pred.period,
        predicted_amplitude=pa,
        measured_period=mp,
        measured_amplitude=ma,
        period_rel_error=pe,
        amplitude_rel_error=ae,
        interval_spread=None if m is None else m.relative_spread,
        alternating=None if m is None else bool(m.alternating),
        n_events=int(trace.events.size),
        diverged_at=trace.diverged_at,
        converged=bool(converged),
    )


def simulate(sc, design, duration=None, dt=None):
    """Intermittent run that returns the partial trace on divergence."""
    duration = sc.duration if duration is None else duration
    dt = sc.dt if dt is None else dt
    try:
        return simulate_intermittent(sc.plant, design, sc.event, sc.x0, duration, dt, sc.xo0)
    except DivergenceError as exc:
        return exc.trace


def run(sc, duration=None, dt=None, continuous=True):
    """Full pipeline.

    Returns
    -------
    analysis : Analysis
    trace : SimulationTrace
        Intermittent run; ``diverged_at`` is set if the guard fired.
    ctrace : SimulationTrace or None
        Continuous-control run from the same initial state.
    summary : RunSummary
    """
    an = analyze(sc)
    trace = simulate(sc, an.design, duration, dt)
    ctrace = None
    if continuous:
        ctrace = simulate_continuous(sc.plant, an.design, sc.x0,
                                     sc.duration if duration is None else duration,
                                     sc.dt if dt is None else dt, sc.xo0)
    return an, trace, ctrace, summarize(sc, an, trace)
