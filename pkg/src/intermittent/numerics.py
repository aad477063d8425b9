"""Dense real-matrix kernels: matrix exponential, eigendecomposition, CARE.

All functions take array-likes, validate them, and return fresh read-only
numpy arrays.  Nothing here holds state between calls.
"""

from dataclasses import dataclass
from functools import cmp_to_key

import numpy as np
import scipy.linalg

from .exceptions import DesignError, DimensionError, DomainError, NumericalError

__all__ = [
    "EigenDecomposition",
    "as_matrix",
    "expm",
    "eig",
    "spectral_radius",
    "solve_care",
]

EIG_RESIDUAL_TOL = 1e-9
CARE_RESIDUAL_TOL = 1e-9


def _frozen(a):
    a = np.array(a, copy=True)
    a.flags.writeable = False
    return a


def as_matrix(M, name="matrix", square=False):
    """Return `M` as a finite 2-D float array.

    Raises
    ------
    DimensionError
        If `M` is not 2-D, is empty, or is not square when `square` is set.
    DomainError
        If any entry is NaN or infinite.
    """
    a = np.asarray(M, dtype=float)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise DimensionError(f"{name} must be a non-empty 2-D matrix, got shape {a.shape}")
    if square and a.shape[0] != a.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise DomainError(f"{name} has non-finite entries")
    return a


def expm(M):
    """Matrix exponential ``e^M`` of a square real matrix.

    Scaling and squaring with a Pade approximant whose order is picked from
    norm thresholds (Al-Mohy & Higham 2009, as shipped in
    :func:`scipy.linalg.expm`).
    """
    a = as_matrix(M, "M", square=True)
    return _frozen(scipy.linalg.expm(a))


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues and unit-norm eigenvectors of a square matrix.

    ``values[j]`` pairs with column ``vectors[:, j]``.  Values are sorted by
    descending magnitude, ties broken by descending real part and then
    descending imaginary part.  Each eigenvector has unit 2-norm and its
    first largest-magnitude component is real and non-negative.

    Attributes
    ----------
    values : (m,) complex ndarray
    vectors : (m, m) complex ndarray
    conditioning : float
        2-norm condition number of ``vectors``.
    residual : float
        Largest relative residual ``|Mv - lv| / (|M| |v|)`` over all pairs.
    """

    values: np.ndarray
    vectors: np.ndarray
    conditioning: float
    residual: float

    @property
    def size(self):
        return self.values.shape[0]


def _eig_order(values, scale):
    tol = 1e-10 * max(scale, 1.0)

    def cmp(i, j):
        a, b = values[i], values[j]
        for x, y in ((abs(a), abs(b)), (a.real, b.real), (a.imag, b.imag)):
            if abs(x - y) > tol:
                return -1 if x > y else 1
        return 0

    return sorted(range(len(values)), key=cmp_to_key(cmp))


def _normalize(v):
    v = v / np.linalg.norm(v)
    mags = np.abs(v)
    k = int(np.argmax(mags >= mags.max() * (1.0 - 1e-9)))
    phase = v[k] / mags[k]
    return v / phase


def eig(M, tol=EIG_RESIDUAL_TOL):
    """Eigendecomposition of a real square matrix.

    LAPACK ``geev`` (balancing, Hessenberg reduction, shifted QR) followed by
    sorting and eigenvector normalization.  Every pair is checked against
    ``|Mv - lv| <= tol |M| |v|``.

    Raises
    ------
    NumericalError
        If the residual check fails; ``err.residual`` carries the worst value.
    """
    a = as_matrix(M, "M", square=True)
    w, V = scipy.linalg.eig(a)
    if not (np.all(np.isfinite(w)) and np.all(np.isfinite(V))):
        raise NumericalError("eigenvalue iteration produced non-finite output")
    normM = np.linalg.norm(a, 2)
    order = _eig_order(w, np.max(np.abs(w)))
    w = w[order].astype(complex)
    V = np.column_stack([_normalize(V[:, j]) for j in order]).astype(complex)
    res = np.linalg.norm(a @ V - V * w, axis=0)
    rel = float(np.max(res) / normM) if normM > 0 else float(np.max(res))
    if rel > tol:
        raise NumericalError(f"eigen residual {rel:.3e} exceeds {tol:.1e}", residual=rel)
    cond = float(np.linalg.cond(V))
    return EigenDecomposition(_frozen(w), _frozen(V), cond, rel)


def spectral_radius(M):
    """Largest eigenvalue magnitude of a square matrix."""
    a = as_matrix(M, "M", square=True)
    return float(np.max(np.abs(scipy.linalg.eigvals(a))))


def _check_psd(M, name, strict):
    if not np.allclose(M, M.T, rtol=0, atol=1e-10 * max(1.0, np.abs(M).max())):
        raise DesignError(f"{name} must be symmetric")
    lam = np.linalg.eigvalsh((M + M.T) / 2)
    floor = 1e-12 * max(1.0, np.abs(lam).max())
    if strict and lam.min() <= floor:
        raise DesignError(f"{name} must be positive definite (min eigenvalue {lam.min():.3e})")
    if not strict and lam.min() < -floor:
        raise DesignError(f"{name} must be positive semi-definite (min eigenvalue {lam.min():.3e})")


def solve_care(A, B, Q, R):
    """Stabilizing solution of ``A'P + PA - PBR^-1B'P + Q = 0``.

    Ordered real Schur decomposition of the Hamiltonian
    ``[[A, -BR^-1B'], [-Q, -A']]``; the Schur vectors spanning the stable
    invariant subspace ``[U1; U2]`` give ``P = U2 U1^-1``.

    Parameters
    ----------
    A : (n, n) array_like
    B : (n, m) array_like
    Q : (n, n) array_like
        Symmetric positive semi-definite state weight.
    R : (m, m) array_like
        Symmetric positive definite input weight.

    Returns
    -------
    P : (n, n) ndarray
        Symmetric, positive semi-definite, with ``A - BR^-1B'P`` Hurwitz.

    Raises
    ------
    DesignError
        Indefinite `R`, or (A, B) not stabilizable / (A, Q) with a mode on
        the imaginary axis.
    NumericalError
        The residual exceeds ``1e-9 (1 + |P|^2)``.
    """
    A = as_matrix(A, "A", square=True)
    B = as_matrix(B, "B")
    Q = as_matrix(Q, "Q", square=True)
    R = as_matrix(R, "R", square=True)
    n, m = B.shape
    if A.shape[0] != n or Q.shape[0] != n or R.shape[0] != m:
        raise DimensionError(
            f"incompatible CARE shapes A{A.shape} B{B.shape} Q{Q.shape} R{R.shape}"
        )
    _check_psd(R, "R", strict=True)
    _check_psd(Q, "Q", strict=False)

    G = B @ np.linalg.solve(R, B.T)
    H = np.block([[A, -G], [-Q, -A.T]])
    T, U, sdim = scipy.linalg.schur(H, output="real", sort="lhp")
    if sdim != n:
        raise DesignError(
            f"Hamiltonian has {2 * n - 2 * sdim} eigenvalues on the imaginary axis; "
            "pair is not stabilizable/detectable"
        )
    U1, U2 = U[:n, :n], U[n:, :n]
    if np.linalg.cond(U1) > 1e12:
        raise DesignError("stable invariant subspace is not a graph; (A, B) not stabilizable")
    P = np.linalg.solve(U1.T, U2.T).T
    P = (P + P.T) / 2

    res = np.linalg.norm(A.T @ P + P @ A - P @ G @ P + Q, 2)
    normP = np.linalg.norm(P, 2)
    if res > CARE_RESIDUAL_TOL * (1.0 + normP**2):
        raise NumericalError(f"CARE residual {res:.3e} too large", residual=float(res))
    closed = A - G @ P
    if np.max(scipy.linalg.eigvals(closed).real) >= 0:
        raise DesignError("CARE solution does not stabilize the closed loop")
    return _frozen(P)
