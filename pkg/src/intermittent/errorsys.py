"""Augmented error system of intermittent control with a system-matched hold.

The state is ``X = (x, xo_err, xh_err)`` with ``xo_err = x_o - That x`` and
``xh_err = x_h - That x``.  Between events ``X' = AC X``; at an event the hold
is reset to the observer (``AD`` copies ``xo_err`` into ``xh_err``).  At event
times the hold block is redundant and the reduced state is
``xbar = (x, xo_err)``, which evolves as ``xbar_{i+1} = phi(Delta) xbar_i``.
"""

from dataclasses import dataclass

import numpy as np

from .exceptions import DimensionError, DomainError
from .numerics import expm

__all__ = ["ErrorSystem", "assemble", "nominal_assembly", "phi_bar"]


def _ro(a):
    a = np.array(a, dtype=float, copy=True)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class ErrorSystem:
    """Block matrices of the error system.

    Attributes
    ----------
    A_bar_C : (n + 2 nhat, n + 2 nhat) ndarray
        Intersample flow matrix.
    A_bar_D : (n + 2 nhat, n + 2 nhat) ndarray
        Event jump (hold reset).
    C_bar_C : (n_y, n + 2 nhat) ndarray
        Output map ``[C, 0, 0]``; stored, not used by the analysis.
    T_reduce : (n + nhat, n + 2 nhat) ndarray
        Drops the hold block.
    T_expand : (n + 2 nhat, n + nhat) ndarray
        Duplicates ``xo_err`` into the hold block.
    T_event : (nhat, n + 2 nhat) ndarray
        ``e_hp = x_h - x_o = [0, -I, I] X``.
    block_dims : tuple of int
        ``(n, nhat, nhat)``.
    """

    A_bar_C: np.ndarray
    A_bar_D: np.ndarray
    C_bar_C: np.ndarray
    T_reduce: np.ndarray
    T_expand: np.ndarray
    T_event: np.ndarray
    block_dims: tuple

    @property
    def n(self):
        return self.block_dims[0]

    @property
    def n_hat(self):
        return self.block_dims[1]

    @property
    def size(self):
        return sum(self.block_dims)

    @property
    def reduced_size(self):
        return self.block_dims[0] + self.block_dims[1]


def _maps(n, nh):
    N = n + 2 * nh
    AD = np.eye(N)
    AD[n + nh:, :] = 0.0
    AD[n + nh:, n:n + nh] = np.eye(nh)
    Tr = np.eye(n + nh, N)
    Te = np.zeros((N, n + nh))
    Te[: n + nh, :] = np.eye(n + nh)
    Te[n + nh:, n:] = np.eye(nh)
    Tt = np.hstack([np.zeros((nh, n)), -np.eye(nh), np.eye(nh)])
    return AD, Tr, Te, Tt


def _pack(AC, C, n, nh):
    AD, Tr, Te, Tt = _maps(n, nh)
    CC = np.hstack([C, np.zeros((C.shape[0], 2 * nh))])
    return ErrorSystem(_ro(AC), _ro(AD), _ro(CC), _ro(Tr), _ro(Te), _ro(Tt), (n, nh, nh))


def assemble(scenario, design):
    """Error system for the nominal design applied to the actual plant.

    Rows (columns ordered x, xo_err, xh_err)::

        x      : [A - B k,                              0,      -B khat       ]
        xo_err : [(Ahat T - T A) - L (Chat T - C) - dB k, A_o_hat, -dB khat  ]
        xh_err : [(Ahat T - T A) - dB k,                0,      Ahat - dB khat]

    with ``k = khat That`` and ``dB = Bhat - That B``.  For ``That = I`` and a
    matched plant every mismatch block is exactly zero.
    """
    act, nom = scenario.actual, scenario.nominal
    T = scenario.state_map
    k_hat, L = design.k_hat, design.L_hat
    if k_hat.shape != (nom.n_u, nom.n) or L.shape != (nom.n, nom.n_y):
        raise DimensionError("design gains do not match the nominal model")
    if T.shape != (nom.n, act.n):
        raise DimensionError("state map does not match the scenario models")
    n, nh = act.n, nom.n
    A, B, C = act.A, act.B, act.C
    Ah, Bh, Ch = nom.A, nom.B, nom.C

    k = k_hat @ T
    dA = Ah @ T - T @ A
    dB = Bh - T @ B
    dC = Ch @ T - C
    Z = np.zeros((nh, nh))
    AC = np.block([
        [A - B @ k, np.zeros((n, nh)), -B @ k_hat],
        [dA - L @ dC - dB @ k, design.A_o_hat, -dB @ k_hat],
        [dA - dB @ k, Z, Ah - dB @ k_hat],
    ])
    return _pack(AC, C, n, nh)


def nominal_assembly(model, design):
    """Matched-model error system ``[[A_c, 0, -Bk], [0, A_o, 0], [0, 0, A]]``."""
    n = model.n
    Z = np.zeros((n, n))
    AC = np.block([
        [design.A_c_hat, Z, -model.B @ design.k_hat],
        [Z, design.A_o_hat, Z],
        [Z, Z, model.A],
    ])
    return _pack(AC, model.C, n, n)


def phi_bar(es, delta):
    """Event-to-event transition matrix ``T_reduce AD expm(AC delta) T_expand``."""
    delta = float(delta)
    if not delta > 0 or not np.isfinite(delta):
        raise DomainError(f"delta must be positive and finite, got {delta}")
    return es.T_reduce @ es.A_bar_D @ expm(es.A_bar_C * delta) @ es.T_expand
