"""Linear-quadratic controller and observer design on the nominal model."""

from dataclasses import dataclass

import numpy as np

from .exceptions import DesignError, DimensionError
from .numerics import as_matrix, solve_care

__all__ = ["DesignWeights", "ControlDesign", "design_controller", "effective_gain"]


def _ro(a):
    a = np.array(a, dtype=float, copy=True)
    a.flags.writeable = False
    return a


def _weight(w, size, name):
    """Scalar -> multiple of identity; list -> diagonal; nested list -> matrix."""
    a = np.asarray(w, dtype=float)
    if a.ndim == 0:
        a = float(a) * np.eye(size)
    elif a.ndim == 1:
        a = np.diag(a)
    a = as_matrix(a, name, square=True)
    if a.shape[0] != size:
        raise DimensionError(f"{name} must be {size}x{size}, got {a.shape}")
    return a


@dataclass(frozen=True)
class DesignWeights:
    """LQ weights for the state-feedback (Qc, Rc) and observer (Qo, Ro) designs."""

    Qc: np.ndarray
    Rc: np.ndarray
    Qo: np.ndarray
    Ro: np.ndarray

    @classmethod
    def identity(cls, model):
        return cls.scaled(model)

    @classmethod
    def scaled(cls, model, Qc=1.0, Rc=1.0, Qo=1.0, Ro=1.0):
        """Build weights for `model`; each entry may be a scalar, diagonal or matrix."""
        n, nu, ny = model.n, model.n_u, model.n_y
        return cls(_ro(_weight(Qc, n, "Qc")), _ro(_weight(Rc, nu, "Rc")),
                   _ro(_weight(Qo, n, "Qo")), _ro(_weight(Ro, ny, "Ro")))


@dataclass(frozen=True)
class ControlDesign:
    """Gains and closed-loop matrices of the nominal observer-based controller.

    ``A_c_hat = Ahat - Bhat khat``, ``A_o_hat = Ahat - Lhat Chat`` and the
    system-matched hold generator ``A_h`` is ``A_c_hat``.
    """

    k_hat: np.ndarray
    L_hat: np.ndarray
    A_c_hat: np.ndarray
    A_o_hat: np.ndarray

    @property
    def A_h(self):
        return self.A_c_hat


def design_controller(nominal, weights=None):
    """LQ state feedback and dual LQ observer for `nominal`.

    ``khat = Rc^-1 Bhat' Pc`` with ``Pc`` the CARE solution for
    ``(Ahat, Bhat, Qc, Rc)``, and ``Lhat = Po Chat' Ro^-1`` with ``Po`` the
    CARE solution for ``(Ahat', Chat', Qo, Ro)``.  Identity weights by default.
    """
    if weights is None:
        weights = DesignWeights.identity(nominal)
    A, B, C = nominal.A, nominal.B, nominal.C
    Pc = solve_care(A, B, weights.Qc, weights.Rc)
    Po = solve_care(A.T, C.T, weights.Qo, weights.Ro)
    k = np.linalg.solve(weights.Rc, B.T @ Pc)
    L = np.linalg.solve(weights.Ro, C @ Po).T
    Ac = A - B @ k
    Ao = A - L @ C
    for name, M in (("A_c_hat", Ac), ("A_o_hat", Ao)):
        if np.max(np.linalg.eigvals(M).real) >= 0:
            raise DesignError(f"{name} is not Hurwitz")
    return ControlDesign(_ro(k), _ro(L), _ro(Ac), _ro(Ao))


def effective_gain(design, state_map):
    """State-feedback gain acting on actual plant states, ``k = khat That``."""
    T = as_matrix(state_map, "state_map")
    if design.k_hat.shape[1] != T.shape[0]:
        raise DimensionError(
            f"khat is {design.k_hat.shape}, state_map is {T.shape}"
        )
    return design.k_hat @ T
