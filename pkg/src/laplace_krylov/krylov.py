"""Arnoldi (and Hermitian Lanczos) decompositions of fixed cycle length.

A single code path covers both cases: modified Gram-Schmidt with one full
re-orthogonalization pass, which keeps the basis orthogonal enough for
restart quality at negligible cost compared to the matvecs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .operators import LinearOperator

__all__ = ["KrylovDecomposition", "arnoldi", "arnoldi_approximation"]

BREAKDOWN_RTOL = 1e-14


@dataclass
class KrylovDecomposition:
    """One Arnoldi cycle: A V = V H + h_next v_next e_m^T."""

    V: np.ndarray          # n x m orthonormal basis
    H: np.ndarray          # m x m upper Hessenberg
    h_next: float          # subdiagonal coupling h_{m+1,m} >= 0 (0 on breakdown)
    v_next: np.ndarray     # next unit basis vector (unused when h_next == 0)
    m: int
    beta: float            # norm of the starting vector
    hermitian: bool = False

    @property
    def breakdown(self) -> bool:
        return self.h_next == 0.0


def arnoldi(op: LinearOperator, start: np.ndarray, m: int) -> KrylovDecomposition:
    """Build a length-m Arnoldi decomposition from ``start``.

    On a lucky breakdown at step j < m the decomposition is truncated to
    size j and h_next is 0. For Hermitian operators H is symmetrized before
    it is returned so downstream eigendecompositions see an exactly
    symmetric matrix.
    """
    start = np.asarray(start, dtype=complex if np.iscomplexobj(start) else float)
    n = op.n
    if start.shape != (n,):
        raise ValueError("starting vector has wrong length")
    if not (1 <= m <= n):
        raise ValueError("cycle length must satisfy 1 <= m <= n")
    beta = float(np.linalg.norm(start))
    if beta == 0.0:
        raise ValueError("starting vector must be nonzero")

    dtype = complex if np.iscomplexobj(start) else float
    V = np.zeros((n, m + 1), dtype=dtype)
    H = np.zeros((m + 1, m), dtype=dtype)
    V[:, 0] = start / beta

    size = m
    broke = False
    for j in range(m):
        w = op.apply(V[:, j])
        if np.iscomplexobj(w) and not np.iscomplexobj(V):
            V = V.astype(complex)
            H = H.astype(complex)
        norm_w = np.linalg.norm(w)
        # modified Gram-Schmidt
        for i in range(j + 1):
            hij = np.vdot(V[:, i], w)
            w = w - hij * V[:, i]
            H[i, j] += hij
        # one full re-orthogonalization pass
        corr = V[:, : j + 1].conj().T @ w
        w = w - V[:, : j + 1] @ corr
        H[: j + 1, j] += corr

        h = np.linalg.norm(w)
        if h <= BREAKDOWN_RTOL * norm_w:
            size = j + 1
            broke = True
            break
        H[j + 1, j] = h
        V[:, j + 1] = w / h

    Hs = np.array(H[:size, :size])
    h_next = 0.0 if broke else float(H[size, size - 1].real)
    v_next = V[:, size] if not broke else np.zeros(n, dtype=V.dtype)

    if op.hermitian:
        Hs = (Hs + Hs.conj().T) / 2.0
        if np.iscomplexobj(Hs) and np.max(np.abs(Hs.imag)) < 1e-13 * max(1.0, np.abs(Hs).max()):
            Hs = Hs.real

    return KrylovDecomposition(
        V=V[:, :size].copy(),
        H=Hs,
        h_next=h_next,
        v_next=v_next.copy(),
        m=size,
        beta=beta,
        hermitian=op.hermitian,
    )


def arnoldi_approximation(dec: KrylovDecomposition, smallfun) -> np.ndarray:
    """beta * V * smallfun(H), where smallfun maps H to F(H) e_1."""
    y = np.asarray(smallfun(dec.H))
    if y.shape != (dec.m,):
        raise ValueError("smallfun must return a vector of length m")
    return dec.beta * (dec.V @ y)
