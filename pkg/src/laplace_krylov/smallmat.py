"""Dense kernels on the small projected matrices.

Everything here works on the m x m Hessenberg matrices of a restart cycle:
actions of exp(-t H) on a vector, Hermitian eigendecompositions reused
across many quadrature nodes, and the shifted resolvent entries
e_m^T (H + t I)^{-1} e_1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as la

__all__ = [
    "SpectralCache",
    "eig_hermitian",
    "expm_action",
    "one_minus_expm_action",
    "resolvent_entry",
    "smallmat_nu",
]

# scaling threshold for the degree-20 truncated Taylor action in double
# precision; dense Pade expm takes over for strongly scaled arguments
TAYLOR_THETA = 5.37
TAYLOR_DEGREE = 20
PADE_SWITCH_SIGMA = 25


@dataclass
class SpectralCache:
    """Eigendecomposition H = X diag(D) X^H of a Hermitian matrix."""

    D: np.ndarray       # ascending real eigenvalues
    X: np.ndarray       # orthonormal eigenvectors (columns)
    x_e1: np.ndarray    # X^H e_1

    @property
    def m(self) -> int:
        return self.D.size


def eig_hermitian(H: np.ndarray, tol: float = 1e-8) -> SpectralCache:
    """Eigendecomposition of a (numerically) Hermitian matrix."""
    H = np.asarray(H)
    scale = max(1.0, float(np.abs(H).max()))
    if float(np.abs(H - H.conj().T).max()) > tol * scale:
        raise ValueError("matrix is not Hermitian within tolerance")
    D, X = la.eigh((H + H.conj().T) / 2.0)
    return SpectralCache(D=D, X=X, x_e1=X.conj().T[:, 0].copy())


def expm_action(H: np.ndarray, v: np.ndarray, t: float,
                cache: SpectralCache | None = None) -> np.ndarray:
    """exp(-t H) v for t >= 0.

    With a spectral cache the Hermitian closed form is used. Otherwise a
    scaled degree-20 truncated Taylor evaluation is run, switching to a
    single dense Pade expm when the required scaling would make the Taylor
    sweep more expensive.
    """
    H = np.asarray(H)
    v = np.asarray(v)
    if t < 0:
        raise ValueError("t must be nonnegative")
    if not np.all(np.isfinite(H)) or not np.all(np.isfinite(v)):
        raise ValueError("non-finite entries")
    if cache is not None:
        w = cache.X.conj().T @ v
        return cache.X @ (np.exp(-t * cache.D) * w)
    m = H.shape[0]
    # trace shift centers the spectrum; without it a decaying exponential
    # loses relative accuracy to cancellation in the Taylor sum
    mu = np.trace(H) / m
    Hs = H - mu * np.eye(m, dtype=H.dtype)
    anorm = t * _norm1(Hs)
    if anorm == 0.0:
        return np.exp(-t * mu) * v
    sigma = int(np.ceil(anorm / TAYLOR_THETA))
    if sigma > PADE_SWITCH_SIGMA:
        return la.expm(-t * H) @ v
    B = (-t / sigma) * Hs
    eta = np.exp(-t * mu / sigma)
    w = v.copy()
    for _ in range(sigma):
        term = w
        s = w.copy()
        for j in range(1, TAYLOR_DEGREE + 1):
            term = (B @ term) / j
            s = s + term
        w = eta * s
    return w


def one_minus_expm_action(H: np.ndarray, v: np.ndarray, t: float,
                          cache: SpectralCache | None = None) -> np.ndarray:
    """(I - exp(-t H)) v, computed without cancellation for small t*H."""
    H = np.asarray(H)
    v = np.asarray(v)
    if cache is not None:
        w = cache.X.conj().T @ v
        return cache.X @ (-np.expm1(-t * cache.D) * w)
    anorm = t * _norm1(H)
    if anorm <= 0.5:
        # Taylor sum of exp(-tH) minus its identity term: no subtraction of
        # nearly equal quantities
        B = -t * H
        term = v.copy()
        s = np.zeros_like(v, dtype=B.dtype if np.iscomplexobj(B) else float)
        for j in range(1, TAYLOR_DEGREE + 1):
            term = (B @ term) / j
            s = s + term
        return -s
    return v - expm_action(H, v, t)


def _norm1(H: np.ndarray) -> float:
    return float(np.abs(H).sum(axis=0).max())


def resolvent_entry(H: np.ndarray, t: float) -> float:
    """psi(t) = e_m^T (H + t I)^{-1} e_1 via a dense LU solve."""
    H = np.asarray(H)
    m = H.shape[0]
    A = H + t * np.eye(m, dtype=H.dtype)
    e1 = np.zeros(m, dtype=H.dtype)
    e1[0] = 1.0
    try:
        with np.errstate(divide="ignore", invalid="ignore"):
            x = la.solve(A, e1)
    except la.LinAlgError as exc:
        raise ValueError(f"singular shift t={t}") from exc
    if not np.all(np.isfinite(x)):
        raise ValueError(f"singular shift t={t}")
    return x[m - 1]


def smallmat_nu(H: np.ndarray) -> float:
    """Smallest real part of the spectrum of H."""
    H = np.asarray(H)
    if float(np.abs(H - H.conj().T).max()) <= 1e-12 * max(1.0, float(np.abs(H).max())):
        return float(la.eigvalsh((H + H.conj().T) / 2.0)[0])
    return float(np.min(la.eigvals(H).real))
