"""Circular column shifts and their Fourier-domain phase representation.

A shift vector ``lam`` holds one integer per column. ``shift_columns(A, lam)``
moves entry ``j`` of column ``k`` to row ``(j + lam[k]) mod M``; shift
vectors are always reduced into ``{0, ..., M-1}``.
"""

import numpy as np

from .errors import DimensionMismatch


def as_shifts(lam, M, N=None):
    """Reduce an integer vector mod ``M``; optionally check its length."""
    lam = np.asarray(lam)
    if lam.ndim == 0:
        lam = lam.reshape(1)
    if lam.ndim != 1:
        raise DimensionMismatch("shift vector must be 1-D")
    if lam.size and not np.issubdtype(lam.dtype, np.integer):
        if not np.all(lam == np.round(lam)):
            raise ValueError("shift vector must contain integers")
    lam = np.mod(lam.astype(np.int64), M)
    if N is not None and lam.size != N:
        raise DimensionMismatch(f"shift vector has length {lam.size}, expected {N}")
    return lam


def shift_columns(A, lam):
    """Return ``S_lam A``: column ``k`` circularly shifted forward by ``lam[k]``.

    Pure index permutation, no arithmetic is done on the entries.
    """
    A = np.asarray(A)
    if A.ndim != 2:
        raise DimensionMismatch("A must be 2-D")
    M, N = A.shape
    lam = as_shifts(lam, M, N)
    rows = (np.arange(M)[:, None] - lam[None, :]) % M
    return A[rows, np.arange(N)[None, :]]


def inverse_shift(lam, M):
    return as_shifts(-as_shifts(lam, M), M)


def compose_shifts(lam, lam2, M):
    lam = as_shifts(lam, M)
    lam2 = as_shifts(lam2, M)
    if lam.shape != lam2.shape:
        raise DimensionMismatch(f"cannot compose shifts of lengths {lam.size} and {lam2.size}")
    return (lam + lam2) % M


def phase_matrix(lam, M):
    """``P[j, k] = exp(-2 pi i j lam[k] / M)`` for frequency ``j``."""
    lam = as_shifts(lam, M)
    # reduce j*lam mod M in integers so large M keeps full phase accuracy
    jl = (np.arange(M, dtype=np.int64)[:, None] * lam[None, :]) % M
    return np.exp(-2j * np.pi * jl / M)


def apply_shift_fourier(Ahat, lam):
    Ahat = np.asarray(Ahat, dtype=np.complex128)
    if Ahat.ndim != 2:
        raise DimensionMismatch("Ahat must be 2-D")
    M, N = Ahat.shape
    lam = as_shifts(lam, M, N)
    return Ahat * phase_matrix(lam, M)


def numerical_rank(A, tol=1e-8):
    s = np.linalg.svd(np.asarray(A), compute_uv=False)
    return int(np.sum(s > tol))
