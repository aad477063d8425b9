"""Eigenstructure analysis of the event-to-event map.

For a constant intermittent interval the reduced state obeys
``xbar_{i+1} = phi(Delta) xbar_i``.  A limit cycle sits at the interval
``Delta_crit`` where the dominant eigenvalue of ``phi`` reaches the unit
circle: at +1 the event-time state repeats every interval, at -1 it flips sign
and the orbit has period ``2 Delta_crit``.  The size of the orbit is fixed by
the event threshold: the critical eigenvector is scaled so that the event
functional equals ``q_t^2`` exactly at the end of the interval.
"""

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errorsys import phi_bar
from .exceptions import AmplitudeError, ConditioningError, DomainError, SearchError
from .numerics import eig, expm

__all__ = [
    "CycleClass",
    "SpectralSweep",
    "LimitCyclePrediction",
    "sweep",
    "first_crossing",
    "find_delta_crit",
    "critical_amplitude",
    "classify_and_predict",
    "predict",
    "eigen_coordinates",
]

TOL_REAL = 1e-6
TOL_MARGIN = 1e-3
UNIT_TOL = 1e-6
MAX_CONDITION = 1e10


class CycleClass(str, enum.Enum):
    PLUS_ONE = "PLUS_ONE"
    MINUS_ONE = "MINUS_ONE"
    NONE = "NONE"
    DEGENERATE = "DEGENERATE"


@dataclass(frozen=True)
class SpectralSweep:
    """Spectra of ``phi(Delta)`` on a uniform grid of intervals.

    ``spectra[i]`` holds the eigenvalues at ``deltas[i]`` sorted by
    descending magnitude.
    """

    deltas: np.ndarray
    max_magnitudes: np.ndarray
    spectra: np.ndarray


def sweep(es, delta_min, delta_max, steps):
    if not 0 < delta_min < delta_max:
        raise DomainError(f"need 0 < delta_min < delta_max, got {delta_min}, {delta_max}")
    if steps < 2:
        raise DomainError(f"steps must be >= 2, got {steps}")
    deltas = np.linspace(delta_min, delta_max, int(steps))
    spectra = np.array([eig(phi_bar(es, d)).values for d in deltas])
    return SpectralSweep(deltas, np.abs(spectra[:, 0]), spectra)


def first_crossing(sw):
    """Grid bracket ``(lo, hi)`` of the first upward unit-circle crossing, or None."""
    m = sw.max_magnitudes
    idx = np.flatnonzero((m[:-1] < 1.0) & (m[1:] >= 1.0))
    if idx.size == 0:
        return None
    i = int(idx[0])
    return float(sw.deltas[i]), float(sw.deltas[i + 1])


def find_delta_crit(es, bracket, tol=1e-10):
    """Bisect ``g(Delta) = rho(phi(Delta)) - 1`` over `bracket`.

    Returns
    -------
    delta_crit : float
    basis : EigenDecomposition
        Eigendecomposition of ``phi(delta_crit)``.

    Raises
    ------
    SearchError
        If ``g`` has the same sign at both ends of the bracket; run
        :func:`sweep` first to locate a crossing.
    """
    lo, hi = map(float, bracket)
    if not 0 < lo < hi:
        raise DomainError(f"bracket must satisfy 0 < lo < hi, got {bracket}")

    def g(d):
        return float(abs(eig(phi_bar(es, d)).values[0])) - 1.0

    g_lo, g_hi = g(lo), g(hi)
    if g_lo == 0.0:
        return lo, eig(phi_bar(es, lo))
    if g_hi == 0.0:
        return hi, eig(phi_bar(es, hi))
    if np.sign(g_lo) == np.sign(g_hi):
        raise SearchError(
            f"spectral radius does not cross 1 on [{lo}, {hi}] "
            f"(g = {g_lo:.3e}, {g_hi:.3e}); sweep the interval range first"
        )
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        g_mid = g(mid)
        if g_mid == 0.0:
            lo = hi = mid
            break
        if np.sign(g_mid) == np.sign(g_lo):
            lo, g_lo = mid, g_mid
        else:
            hi = mid
    d = 0.5 * (lo + hi)
    return d, eig(phi_bar(es, d))


def critical_amplitude(es, delta, v, event):
    """Scale ``gamma = q_t / e0`` that puts eigenvector `v` on the event surface.

    ``X_t = expm(AC delta) T_expand v`` is the error-system state just before
    the next event and ``e0^2 = X_t' T_event' Q_t T_event X_t``.

    Returns
    -------
    gamma, e0 : float
    X_t : ndarray
    """
    v = np.asarray(v)
    X_t = expm(es.A_bar_C * delta) @ es.T_expand @ v
    e = es.T_event @ X_t
    e0sq = float(np.real(np.conj(e) @ event.Q_t @ e))
    scale = max(1.0, float(np.linalg.norm(X_t))) ** 2
    if e0sq <= 1e-28 * scale:
        raise AmplitudeError("event functional is blind to the critical mode (e0 = 0)")
    e0 = float(np.sqrt(e0sq))
    return event.q_t / e0, e0, X_t


@dataclass(frozen=True)
class LimitCyclePrediction:
    """Predicted limit cycle at the critical interval.

    For the ``NONE`` and ``DEGENERATE`` classes only the spectral fields are
    filled; amplitude fields are None.  ``trajectory`` has one row per entry of
    ``tau`` and holds the full error-system state
    ``gamma expm(AC tau) T_expand v_crit``.
    """

    delta_crit: float
    lambda_crit: complex
    cycle_class: CycleClass
    spectrum: np.ndarray
    period: Optional[float] = None
    gamma: Optional[float] = None
    v_crit: Optional[np.ndarray] = None
    e0: Optional[float] = None
    tau: Optional[np.ndarray] = None
    trajectory: Optional[np.ndarray] = None
    reason: str = ""

    @property
    def xbar_event(self):
        """Steady event-time reduced state ``gamma v_crit`` (real)."""
        if self.gamma is None:
            return None
        return self.gamma * np.real(self.v_crit)


def classify_and_predict(es, delta_crit, event, tol_real=TOL_REAL, tol_margin=TOL_MARGIN,
                         n_points=201, basis=None):
    """Classify the critical eigenvalue and predict period and amplitude.

    A complex dominant eigenvalue (``|Im| > tol_real``) is reported as
    ``DEGENERATE``.  If another eigenvalue also has magnitude
    ``>= 1 - tol_margin`` the class is ``NONE``.  Otherwise the sign of the
    real dominant eigenvalue selects ``PLUS_ONE`` (period ``delta_crit``) or
    ``MINUS_ONE`` (period ``2 delta_crit``).
    """
    if basis is None:
        basis = eig(phi_bar(es, delta_crit))
    lam = complex(basis.values[0])
    if abs(abs(lam) - 1.0) > UNIT_TOL:
        raise DomainError(f"|lambda_crit| = {abs(lam):.9f} is not on the unit circle")
    spectrum = basis.values
    common = dict(delta_crit=float(delta_crit), lambda_crit=lam, spectrum=spectrum)
    if abs(lam.imag) > tol_real:
        return LimitCyclePrediction(cycle_class=CycleClass.DEGENERATE,
                                    reason="complex critical eigenvalue pair", **common)
    if len(spectrum) > 1 and abs(spectrum[1]) >= 1.0 - tol_margin:
        return LimitCyclePrediction(cycle_class=CycleClass.NONE,
                                    reason="second eigenvalue on or outside the unit circle",
                                    **common)
    cls = CycleClass.PLUS_ONE if lam.real > 0 else CycleClass.MINUS_ONE
    period = delta_crit if cls is CycleClass.PLUS_ONE else 2.0 * delta_crit

    v = basis.vectors[:, 0]
    gamma, e0, _ = critical_amplitude(es, delta_crit, np.real(v), event)
    tau = np.linspace(0.0, delta_crit, max(int(n_points), 200))
    x0 = gamma * (es.T_expand @ np.real(v))
    # one exponential step reused along the uniform grid
    step = expm(es.A_bar_C * (tau[1] - tau[0]))
    traj = np.empty((tau.size, es.size))
    traj[0] = x0
    for i in range(1, tau.size):
        traj[i] = step @ traj[i - 1]
    return LimitCyclePrediction(period=float(period), gamma=float(gamma), v_crit=v, e0=e0,
                                tau=tau, trajectory=traj, cycle_class=cls, **common)


def predict(es, event, delta_range=(0.05, 5.0), steps=200, tol=1e-10, **kwargs):
    """Sweep, bracket the first upward crossing, bisect and classify.

    When no crossing exists in `delta_range` a ``NONE`` prediction with reason
    ``"no unit-circle crossing"`` is returned.
    """
    sw = sweep(es, delta_range[0], delta_range[1], steps)
    br = first_crossing(sw)
    if br is None:
        i = int(np.argmax(sw.max_magnitudes))
        return LimitCyclePrediction(
            delta_crit=float("nan"), lambda_crit=complex(sw.spectra[i, 0]),
            cycle_class=CycleClass.NONE, spectrum=sw.spectra[i],
            reason="no unit-circle crossing"), sw
    d, basis = find_delta_crit(es, br, tol=tol)
    return classify_and_predict(es, d, event, basis=basis, **kwargs), sw


def eigen_coordinates(basis, xbar):
    """Modal coordinates ``chi = V^-1 xbar``.

    `xbar` may be a single vector or an array of row vectors.
    """
    if basis.conditioning > MAX_CONDITION:
        raise ConditioningError(
            f"eigenvector matrix condition {basis.conditioning:.3e} exceeds {MAX_CONDITION:.0e}; "
            "eigenvalues are not distinct"
        )
    xbar = np.asarray(xbar)
    if xbar.ndim == 1:
        return np.linalg.solve(basis.vectors, xbar.astype(complex))
    return np.linalg.solve(basis.vectors, xbar.T.astype(complex)).T
