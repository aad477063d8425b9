"""Plant models, mismatch scenarios and event-detector settings.

A :class:`PlantScenario` pairs the *nominal* model used for design with the
*actual* model the controller runs against.  For matched state dimensions the
actual model is ``A = Ahat - rho * A1`` (likewise for B and C); when the
design model has fewer states than the plant, the nominal matrices are first
embedded into plant coordinates through the state map ``That``.
"""

import json
from dataclasses import dataclass
from importlib import resources
from typing import NamedTuple

import numpy as np

from .exceptions import DimensionError, DomainError, ModelError, ScenarioError
from .numerics import as_matrix

__all__ = [
    "StateSpaceModel",
    "Deviation",
    "PlantScenario",
    "EventConfig",
    "make_scenario",
    "matched_scenario",
    "simple_system",
    "simple_scenario",
    "neglected_dynamics_scenario",
    "triple_pendulum",
    "three_link_model",
    "three_link_scenario",
    "transfer_function",
    "model_from_dict",
    "model_to_dict",
    "load_model",
]

RANK_TOL = 1e-8


def _ro(a):
    a = np.array(a, dtype=float, copy=True)
    a.flags.writeable = False
    return a


def _rank(M, tol=RANK_TOL):
    s = np.linalg.svd(M, compute_uv=False)
    return int(np.sum(s > tol * s[0])) if s[0] > 0 else 0


def _ctrb(A, B):
    # rescale A so the Krylov blocks stay comparable in size
    a = np.linalg.norm(A, 2) or 1.0
    As = A / a
    blocks = [B]
    for _ in range(A.shape[0] - 1):
        blocks.append(As @ blocks[-1])
    return np.hstack(blocks)


@dataclass(frozen=True)
class StateSpaceModel:
    """Continuous-time LTI model ``x' = Ax + Bu, y = Cx``.

    Construction checks shapes, finiteness, controllability of (A, B) and
    observability of (A, C).
    """

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    name: str = ""

    def __post_init__(self):
        A = as_matrix(self.A, "A", square=True)
        B = as_matrix(self.B, "B")
        C = as_matrix(self.C, "C")
        n = A.shape[0]
        if B.shape[0] != n:
            raise DimensionError(f"B has {B.shape[0]} rows, A is {n}x{n}")
        if C.shape[1] != n:
            raise DimensionError(f"C has {C.shape[1]} columns, A is {n}x{n}")
        if _rank(_ctrb(A, B)) < n:
            raise ModelError(f"model {self.name!r}: (A, B) is not controllable")
        if _rank(_ctrb(A.T, C.T)) < n:
            raise ModelError(f"model {self.name!r}: (A, C) is not observable")
        object.__setattr__(self, "A", _ro(A))
        object.__setattr__(self, "B", _ro(B))
        object.__setattr__(self, "C", _ro(C))

    @property
    def n(self):
        return self.A.shape[0]

    @property
    def n_u(self):
        return self.B.shape[1]

    @property
    def n_y(self):
        return self.C.shape[0]


def transfer_function(model, s):
    """Evaluate ``C (sI - A)^-1 B`` at the complex frequency `s`."""
    n = model.n
    return model.C @ np.linalg.solve(s * np.eye(n) - model.A, model.B.astype(complex))


class Deviation(NamedTuple):
    """Deviation directions (A1, B1, C1) in actual-plant coordinates."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray


@dataclass(frozen=True)
class PlantScenario:
    """Nominal design model, the actual plant, and how they are related.

    Attributes
    ----------
    nominal : StateSpaceModel
        ``(Ahat, Bhat, Chat)`` with ``nhat`` states.
    deviation : Deviation
        ``(A1, B1, C1)`` in the actual state coordinates.
    rho : float
        Mismatch scale.
    state_map : (nhat, n) ndarray
        ``That`` with ``xhat = That x``.
    actual : StateSpaceModel
        The plant the controller is applied to.
    """

    nominal: StateSpaceModel
    deviation: Deviation
    rho: float
    state_map: np.ndarray
    actual: StateSpaceModel
    name: str = ""

    @property
    def n(self):
        return self.actual.n

    @property
    def n_hat(self):
        return self.nominal.n

    @property
    def A_tilde(self):
        return self.rho * self.deviation.A

    @property
    def B_tilde(self):
        return self.rho * self.deviation.B

    @property
    def C_tilde(self):
        return self.rho * self.deviation.C

    def with_rho(self, rho):
        return make_scenario(self.nominal, self.deviation, rho, self.state_map, name=self.name)

    def with_deviation(self, deviation, rho=None):
        rho = self.rho if rho is None else rho
        return make_scenario(self.nominal, deviation, rho, self.state_map, name=self.name)


def embed(nominal, state_map):
    """Nominal matrices expressed in actual-plant coordinates.

    Uses the right inverse ``T+ = T' (T T')^-1`` so that ``T A_emb T+ = Ahat``.
    """
    T = state_map
    Tp = np.linalg.solve(T @ T.T, T).T
    return Tp @ nominal.A @ T, Tp @ nominal.B, nominal.C @ T


def make_scenario(nominal, deviation, rho, state_map=None, name=""):
    """Build a :class:`PlantScenario` from a nominal model and a deviation.

    The actual plant is ``A = A_emb - rho A1``, ``B = B_emb - rho B1``,
    ``C = C_emb - rho C1`` where ``*_emb`` are the nominal matrices embedded
    through `state_map` (identity embedding when ``nhat == n`` and
    ``That = I``).

    Raises
    ------
    DimensionError
        Shapes of the deviation or state map do not fit the nominal model.
    ModelError
        `state_map` is rank deficient, or the actual model is not
        controllable/observable.
    """
    A1 = as_matrix(deviation[0], "A1", square=True)
    B1 = as_matrix(deviation[1], "B1")
    C1 = as_matrix(deviation[2], "C1")
    n = A1.shape[0]
    if B1.shape != (n, nominal.n_u):
        raise DimensionError(f"B1 must be {(n, nominal.n_u)}, got {B1.shape}")
    if C1.shape != (nominal.n_y, n):
        raise DimensionError(f"C1 must be {(nominal.n_y, n)}, got {C1.shape}")
    if state_map is None:
        if n != nominal.n:
            raise DimensionError("state_map is required when nominal and actual orders differ")
        state_map = np.eye(n)
    T = as_matrix(state_map, "state_map")
    if T.shape != (nominal.n, n):
        raise DimensionError(f"state_map must be {(nominal.n, n)}, got {T.shape}")
    if _rank(T) < nominal.n:
        raise ModelError("state_map must have full row rank")
    rho = float(rho)
    if not np.isfinite(rho):
        raise DomainError("rho must be finite")

    A_emb, B_emb, C_emb = embed(nominal, T)
    actual = StateSpaceModel(A_emb - rho * A1, B_emb - rho * B1, C_emb - rho * C1,
                             name=f"{name or nominal.name} (actual)")
    return PlantScenario(nominal, Deviation(_ro(A1), _ro(B1), _ro(C1)), rho, _ro(T), actual, name)


def matched_scenario(model, name=""):
    """Scenario whose actual plant *is* the design model (no mismatch)."""
    z = Deviation(np.zeros_like(model.A), np.zeros_like(model.B), np.zeros_like(model.C))
    return make_scenario(model, z, 0.0, np.eye(model.n), name=name or model.name)


@dataclass(frozen=True)
class EventConfig:
    """Event detector ``e' Qt e >= qt^2`` with a minimum interval ``delta_min``."""

    Q_t: np.ndarray
    q_t: float
    delta_min: float = 0.1

    def __post_init__(self):
        Q = as_matrix(self.Q_t, "Q_t", square=True)
        if not np.allclose(Q, Q.T, rtol=0, atol=1e-12 * max(1.0, np.abs(Q).max())):
            raise DomainError("Q_t must be symmetric")
        if np.linalg.eigvalsh(Q).min() < -1e-12:
            raise DomainError("Q_t must be positive semi-definite")
        if not self.q_t > 0:
            raise DomainError(f"q_t must be positive, got {self.q_t}")
        if not self.delta_min > 0:
            raise DomainError(f"delta_min must be positive, got {self.delta_min}")
        object.__setattr__(self, "Q_t", _ro(Q))
        object.__setattr__(self, "q_t", float(self.q_t))
        object.__setattr__(self, "delta_min", float(self.delta_min))

    @classmethod
    def identity(cls, n_hat, q_t=0.1, delta_min=0.1):
        return cls(np.eye(n_hat), q_t, delta_min)


# --------------------------------------------------------------------------
# Example systems


def simple_system(b):
    """Unstable plant ``b / (s^2 - 1)`` with states (velocity, position).

    ``A = [[0, 1], [1, 0]]``, ``B = [b, 0]'``, ``C = [0, 1]``.
    """
    b = float(b)
    if b == 0:
        raise ModelError("simple system with b = 0 is not controllable")
    return StateSpaceModel(
        np.array([[0.0, 1.0], [1.0, 0.0]]),
        np.array([[b], [0.0]]),
        np.array([[0.0, 1.0]]),
        name=f"simple(b={b:g})",
    )


def simple_scenario(b, b_hat=1.0, rho=1.0):
    """Simple system designed for gain `b_hat` but with actual gain `b` at ``rho = 1``."""
    nominal = simple_system(b_hat)
    dev = Deviation(np.zeros((2, 2)), np.array([[b_hat - b], [0.0]]), np.zeros((1, 2)))
    return make_scenario(nominal, dev, rho, np.eye(2), name=f"simple_b{b:g}")


def neglected_dynamics_scenario(omega_n=10.0, zeta=0.5, b=1.0):
    """Simple system with an unmodelled second-order actuator.

    The plant input passes through ``wn^2 / (s^2 + 2 zeta wn s + wn^2)``
    before reaching ``b / (s^2 - 1)``.  Actual states are
    (velocity, position, filter output, filter rate); the design model sees
    only the first two.
    """
    if not omega_n > 0:
        raise DomainError(f"omega_n must be positive, got {omega_n}")
    if not 0 < zeta < 1:
        raise DomainError(f"zeta must lie in (0, 1), got {zeta}")
    nominal = simple_system(b)
    w2 = omega_n**2
    A = np.array([
        [0.0, 1.0, b, 0.0],
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, -w2, -2.0 * zeta * omega_n],
    ])
    B = np.array([[0.0], [0.0], [0.0], [w2]])
    C = np.array([[0.0, 1.0, 0.0, 0.0]])
    T = np.hstack([np.eye(2), np.zeros((2, 2))])
    A_emb, B_emb, C_emb = embed(nominal, T)
    dev = Deviation(A_emb - A, B_emb - B, C_emb - C)
    return make_scenario(nominal, dev, 1.0, T, name="neglected_dynamics")


def triple_pendulum(masses, lengths, com, inertias=None, stiffness=(0, 0, 0),
                    damping=(0, 0, 0), g=9.81):
    """Linearized three-link inverted pendulum about upright.

    Link angles are absolute (from vertical), inputs are the ankle, knee and
    hip joint torques, outputs are the three link angles.  Passive joint
    stiffness and damping act on relative joint angles.  State order is
    (angular velocities, angles).

    Returns
    -------
    A, B, C : ndarray
    """
    m = np.asarray(masses, float)
    l = np.asarray(lengths, float)
    c = np.asarray(com, float)
    inertia = m * l**2 / 12 if inertias is None else np.asarray(inertias, float)
    k = len(m)
    M = np.zeros((k, k))
    G = np.zeros((k, k))
    for i in range(k):
        above = m[i + 1:].sum()
        M[i, i] = inertia[i] + m[i] * c[i] ** 2 + l[i] ** 2 * above
        G[i, i] = g * (m[i] * c[i] + l[i] * above)
        for j in range(i + 1, k):
            M[i, j] = M[j, i] = l[i] * (m[j] * c[j] + l[j] * m[j + 1:].sum())
    # joint torque j acts on link j and reacts on link j+1
    S = np.eye(k) - np.eye(k, k=1)
    K = S @ np.diag(stiffness) @ S.T
    D = S @ np.diag(damping) @ S.T
    Mi = np.linalg.inv(M)
    A = np.block([[-Mi @ D, Mi @ (G - K)], [np.eye(k), np.zeros((k, k))]])
    B = np.vstack([Mi @ S, np.zeros((k, k))])
    C = np.hstack([np.zeros((k, k)), np.eye(k)])
    return A, B, C


#: Physical parameters behind the bundled three-link file.  These are a
#: plausible adult-sized stand-in, not a published identification.
THREE_LINK_PARAMETERS = {
    "masses": (7.0, 16.0, 50.0),
    "lengths": (0.45, 0.45, 0.80),
    "com": (0.25, 0.25, 0.35),
    "stiffness": (600.0, 600.0, 300.0),
    "damping": (20.0, 20.0, 10.0),
}


def model_to_dict(model):
    return {"name": model.name, "A": model.A.tolist(), "B": model.B.tolist(), "C": model.C.tolist()}


def model_from_dict(d, where="model"):
    if not isinstance(d, dict):
        raise ScenarioError(f"{where}: expected an object with fields A, B, C")
    extra = set(d) - {"name", "A", "B", "C"}
    if extra:
        raise ScenarioError(f"{where}: unknown field(s) {sorted(extra)}")
    missing = {"A", "B", "C"} - set(d)
    if missing:
        raise ScenarioError(f"{where}: missing field(s) {sorted(missing)}")
    try:
        return StateSpaceModel(
            np.asarray(d["A"], float), np.asarray(d["B"], float), np.asarray(d["C"], float),
            name=str(d.get("name", "")),
        )
    except (ValueError, TypeError) as exc:
        raise ScenarioError(f"{where}: {exc}") from exc


def load_model(path):
    with open(path) as fh:
        return model_from_dict(json.load(fh), where=str(path))


def three_link_model():
    """The bundled 6-state stand-in for a standing human (ankle, knee, hip)."""
    try:
        text = resources.files("intermittent.data").joinpath("three_link.json").read_text()
        return model_from_dict(json.loads(text), where="three_link.json")
    except (OSError, json.JSONDecodeError) as exc:
        raise ScenarioError(f"bundled three-link model unavailable: {exc}") from exc


def three_link_scenario(b, rho=1.0):
    """Three-link stand-in whose actual input matrix is ``b * Bhat`` at ``rho = 1``."""
    if not b > 0:
        raise DomainError(f"b must be positive, got {b}")
    nominal = three_link_model()
    dev = Deviation(np.zeros_like(nominal.A), (1.0 - b) * nominal.B, np.zeros_like(nominal.C))
    return make_scenario(nominal, dev, rho, np.eye(nominal.n), name=f"three_link_b{b:g}")
