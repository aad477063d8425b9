"""Event-driven simulation of intermittent control and its continuous counterpart.

The plant, observer and hold are linear between events, so the joint state
``z = (x, x_o, x_h)`` is advanced with the exact one-step map
``expm(M dt)``.  Events are tested at step boundaries only.
"""

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .analysis import eigen_coordinates
from .exceptions import DivergenceError, DomainError, MeasurementError
from .numerics import as_matrix, expm

__all__ = [
    "SimulationTrace",
    "CycleMeasurement",
    "intermittent_matrix",
    "continuous_matrix",
    "simulate_intermittent",
    "simulate_continuous",
    "measure_cycle",
    "attach_eigen_coordinates",
]

DIVERGENCE_LIMIT = 1e9


@dataclass(frozen=True)
class SimulationTrace:
    """Sampled signals of one simulation run.

    Row ``j`` of every signal array corresponds to ``times[j]``.  At an event
    sample the recorded hold state is the post-reset value, so
    ``x_h == x_o`` there.  ``events`` lists triggered event times; the run
    starts with an implicit reset at ``t = 0`` which is not listed, and
    ``intervals`` measures from that implicit reset.

    ``x_h`` is None for continuous-control traces, ``chi`` is None until
    :func:`attach_eigen_coordinates` is applied, and ``diverged_at`` is set
    when the divergence guard stopped a continuous run.
    """

    dt: float
    times: np.ndarray
    x: np.ndarray
    x_o: np.ndarray
    x_h: Optional[np.ndarray]
    u: np.ndarray
    y: np.ndarray
    events: np.ndarray
    event_index: np.ndarray
    state_map: np.ndarray
    chi: Optional[np.ndarray] = None
    diverged_at: Optional[float] = None

    @property
    def intervals(self):
        if self.events.size == 0:
            return np.empty(0)
        return np.diff(np.concatenate([[0.0], self.events]))

    @property
    def xbar(self):
        """Reduced error state ``(x, x_o - That x)`` at every sample."""
        return np.hstack([self.x, self.x_o - self.x @ self.state_map.T])

    def e_hp(self):
        if self.x_h is None:
            return None
        return self.x_h - self.x_o


def intermittent_matrix(scenario, design):
    """Generator of ``(x, x_o, x_h)`` with ``u = -khat x_h`` and ``x_h' = A_c_hat x_h``."""
    act, nom = scenario.actual, scenario.nominal
    n, nh = act.n, nom.n
    k, L = design.k_hat, design.L_hat
    return np.block([
        [act.A, np.zeros((n, nh)), -act.B @ k],
        [L @ act.C, nom.A - L @ nom.C, -nom.B @ k],
        [np.zeros((nh, n)), np.zeros((nh, nh)), design.A_c_hat],
    ])


def continuous_matrix(scenario, design):
    """Generator of ``(x, x_o)`` under continuous feedback ``u = -khat x_o``."""
    act, nom = scenario.actual, scenario.nominal
    k, L = design.k_hat, design.L_hat
    return np.block([
        [act.A, -act.B @ k],
        [L @ act.C, nom.A - L @ nom.C - nom.B @ k],
    ])


def _check_timing(duration, dt):
    if not dt > 0:
        raise DomainError(f"dt must be positive, got {dt}")
    if not duration >= 10 * dt:
        raise DomainError(f"duration must be at least 10 dt, got {duration}")


def _initial(scenario, x0, xo0):
    n, nh = scenario.n, scenario.n_hat
    x0 = np.zeros(n) if x0 is None else np.asarray(x0, float).reshape(-1)
    xo0 = np.zeros(nh) if xo0 is None else np.asarray(xo0, float).reshape(-1)
    if x0.shape != (n,) or xo0.shape != (nh,):
        raise DomainError(f"x0 must have {n} entries and xo0 {nh}")
    return x0, xo0


def simulate_intermittent(scenario, design, event, x0=None, duration=60.0, dt=1e-3, xo0=None):
    """Simulate event-driven intermittent control with a system-matched hold.

    The hold starts equal to the observer (implicit event at ``t = 0``).  An
    event fires at the first step where the time since the last reset exceeds
    ``event.delta_min`` and ``e' Q_t e >= q_t^2`` with ``e = x_h - x_o``; the
    hold is then reset to the observer state.

    Raises
    ------
    DivergenceError
        When a state becomes non-finite or ``|x|_inf > 1e9``; the exception
        carries the partial trace.
    """
    _check_timing(duration, dt)
    if event.delta_min < dt:
        raise DomainError("delta_min must be at least one step")
    n, nh = scenario.n, scenario.n_hat
    x0, xo0 = _initial(scenario, x0, xo0)
    F = expm(intermittent_matrix(scenario, design) * dt)
    steps = int(round(duration / dt))
    lockout = int(np.floor(event.delta_min / dt + 1e-9)) + 1
    Q, q2 = event.Q_t, event.q_t**2
    k = design.k_hat
    so, sh = slice(n, n + nh), slice(n + nh, n + 2 * nh)

    Z = np.empty((steps + 1, n + 2 * nh))
    Z[0] = np.concatenate([x0, xo0, xo0])
    events, event_index = [], []
    since = 0
    z = Z[0].copy()
    diverged = None
    for j in range(1, steps + 1):
        z = F @ z
        since += 1
        if since >= lockout:
            e = z[sh] - z[so]
            if e @ Q @ e >= q2:
                z[sh] = z[so]
                events.append(j * dt)
                event_index.append(j)
                since = 0
        Z[j] = z
        if not np.all(np.isfinite(z)) or np.max(np.abs(z[:n])) > DIVERGENCE_LIMIT:
            diverged = j
            break

    last = steps if diverged is None else diverged
    Z = Z[: last + 1]
    times = np.arange(last + 1) * dt
    trace = SimulationTrace(
        dt=dt, times=times, x=Z[:, :n], x_o=Z[:, so], x_h=Z[:, sh],
        u=-Z[:, sh] @ k.T, y=Z[:, :n] @ scenario.actual.C.T,
        events=np.asarray(events, float), event_index=np.asarray(event_index, int),
        state_map=scenario.state_map, diverged_at=None if diverged is None else last * dt,
    )
    if diverged is not None:
        raise DivergenceError(f"state diverged at t = {last * dt:.3f} s", time=last * dt,
                              trace=trace)
    return trace


def simulate_continuous(scenario, design, x0=None, duration=60.0, dt=1e-3, xo0=None):
    """Simulate the observer-based continuous controller ``u = -khat x_o``.

    Divergence is expected for some scenarios: the run stops and
    ``trace.diverged_at`` records the time instead of raising.
    """
    _check_timing(duration, dt)
    n, nh = scenario.n, scenario.n_hat
    x0, xo0 = _initial(scenario, x0, xo0)
    F = expm(continuous_matrix(scenario, design) * dt)
    steps = int(round(duration / dt))
    Z = np.empty((steps + 1, n + nh))
    Z[0] = np.concatenate([x0, xo0])
    diverged = None
    for j in range(1, steps + 1):
        Z[j] = F @ Z[j - 1]
        if not np.all(np.isfinite(Z[j])) or np.max(np.abs(Z[j, :n])) > DIVERGENCE_LIMIT:
            diverged = j
            break
    last = steps if diverged is None else diverged
    Z = Z[: last + 1]
    return SimulationTrace(
        dt=dt, times=np.arange(last + 1) * dt, x=Z[:, :n], x_o=Z[:, n:], x_h=None,
        u=-Z[:, n:] @ design.k_hat.T, y=Z[:, :n] @ scenario.actual.C.T,
        events=np.empty(0), event_index=np.empty(0, int), state_map=scenario.state_map,
        diverged_at=None if diverged is None else last * dt,
    )


@dataclass(frozen=True)
class CycleMeasurement:
    """Limit-cycle statistics over the tail of a trace.

    Attributes
    ----------
    period : float
        Mean tail interval, doubled when consecutive event states alternate.
    amplitude : float
        Largest ``|x|_inf`` over the tail window.
    intervals : ndarray
        All inter-event intervals of the run.
    tail_intervals : ndarray
    alternating : bool
    mean_cosine : float
        Mean cosine similarity of consecutive event-time ``xbar`` vectors.
    relative_spread : float
        ``(max - min) / mean`` of the tail intervals.
    """

    period: float
    amplitude: float
    intervals: np.ndarray
    tail_intervals: np.ndarray
    alternating: bool
    mean_cosine: float
    relative_spread: float


def measure_cycle(trace, tail_fraction=0.5, min_events=6):
    """Estimate period and amplitude of the limit cycle in the last part of a trace.

    Raises
    ------
    MeasurementError
        Fewer than `min_events` events fall inside the tail window.
    """
    if not 0 < tail_fraction <= 1:
        raise DomainError(f"tail_fraction must lie in (0, 1], got {tail_fraction}")
    t_end = trace.times[-1]
    t0 = t_end * (1.0 - tail_fraction)
    in_tail = trace.events >= t0
    if np.count_nonzero(in_tail) < min_events:
        raise MeasurementError(
            f"{np.count_nonzero(in_tail)} events in the tail window, need {min_events}"
        )
    intervals = trace.intervals
    tail = intervals[in_tail][1:]
    xb = trace.xbar[trace.event_index[in_tail]]
    norms = np.linalg.norm(xb, axis=1)
    cos = np.sum(xb[1:] * xb[:-1], axis=1) / np.maximum(norms[1:] * norms[:-1], 1e-300)
    mean_cos = float(np.mean(cos))
    alternating = mean_cos <= -0.9
    mean = float(np.mean(tail))
    period = 2.0 * mean if alternating else mean
    amplitude = float(np.max(np.abs(trace.x[trace.times >= t0])))
    spread = float((tail.max() - tail.min()) / mean)
    return CycleMeasurement(period, amplitude, intervals, tail, alternating, mean_cos, spread)


def attach_eigen_coordinates(trace, basis):
    """Return a copy of `trace` with ``chi = V^-1 xbar`` at every sample."""
    return replace(trace, chi=eigen_coordinates(basis, trace.xbar))


def output_state_pairs(model):
    """(velocity, position) state index pairs linked to each output.

    The position state is the one an output reads most strongly; its velocity
    is the state that drives it most strongly in ``A``.
    """
    A = as_matrix(model.A, "A", square=True)
    pairs = []
    for row in np.asarray(model.C):
        p = int(np.argmax(np.abs(row)))
        v = int(np.argmax(np.abs(A[p])))
        pairs.append((v, p))
    return pairs
