"""Dense complex matrices, unitary column DFTs and the leading singular triple.

All transforms use the unitary normalisation (``1/sqrt(M)`` in both
directions) so Frobenius and spectral norms agree between the time and the
Fourier domain.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NoConvergence, ZeroMatrix


def as_matrix(A, name="A"):
    """Validate ``A`` as a finite, nonempty 2-D array and promote it to complex128."""
    A = np.asarray(A)
    if A.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-D, got shape {A.shape}")
    if A.shape[0] < 1 or A.shape[1] < 1:
        raise DimensionMismatch(f"{name} must be nonempty, got shape {A.shape}")
    A = A.astype(np.complex128, copy=False)
    if not np.all(np.isfinite(A)):
        raise ValueError(f"{name} has non-finite entries")
    return A


def fft_columns(A):
    return np.fft.fft(np.asarray(A, dtype=np.complex128), axis=0, norm="ortho")


def ifft_columns(Ahat):
    return np.fft.ifft(np.asarray(Ahat, dtype=np.complex128), axis=0, norm="ortho")


@dataclass(frozen=True)
class SingularTriple:
    """Leading singular triple ``A v ~= sigma u`` and ``A^* u = sigma v``.

    ``v`` and ``sigma`` are always derived from ``u`` as ``A^* u / sigma``, so
    ``||A - sigma u v^*||_F^2 = ||A||_F^2 - sigma^2`` holds exactly (up to
    rounding) even for an unconverged ``u``.
    """

    sigma: float
    u: np.ndarray
    v: np.ndarray
    iterations: int = 0
    converged: bool = True
    residual: float = 0.0


def _start_vector(A):
    norms = np.einsum("ij,ij->j", A.conj(), A).real
    k = int(np.argmax(norms))
    return A[:, k] / np.sqrt(norms[k])


def leading_singular_triple(A, warm_start=None, tol=1e-10, max_iter=1000, strict=False):
    """Power iteration on ``A A^*`` for the dominant singular triple.

    Parameters
    ----------
    A : (M, N) array_like
    warm_start : (M,) array_like, optional
        Initial left vector. Defaults to the largest-norm column of ``A``.
    tol : float
        Stop once ``||A v - sigma u|| <= tol * sigma``.
    max_iter : int
        Iteration cap. On hitting it the best iterate is returned with
        ``converged=False``, or :class:`NoConvergence` is raised if ``strict``.

    The estimate ``sigma_k = ||A^* u_k||`` is non-decreasing in ``k``.
    """
    A = as_matrix(A)
    M, _ = A.shape
    if not np.any(A):
        raise ZeroMatrix("leading_singular_triple of a zero matrix")

    if warm_start is None:
        u = _start_vector(A)
    else:
        u = np.asarray(warm_start, dtype=np.complex128).reshape(-1)
        if u.shape != (M,):
            raise DimensionMismatch(f"warm_start has length {u.size}, expected {M}")
        nrm = np.linalg.norm(u)
        if nrm == 0:
            raise ValueError("warm_start must be nonzero")
        u = u / nrm

    AH = A.conj().T
    resid = np.inf
    for it in range(1, max_iter + 1):
        w = AH @ u
        sigma = np.linalg.norm(w)
        if sigma == 0.0:
            # u is orthogonal to the range of A
            u = _start_vector(A)
            continue
        v = w / sigma
        z = A @ v
        resid = np.linalg.norm(z - sigma * u)
        if resid <= tol * sigma:
            return SingularTriple(float(sigma), u, v, it, True, float(resid / sigma))
        u = z / np.linalg.norm(z)

    w = AH @ u
    sigma = np.linalg.norm(w)
    best = SingularTriple(float(sigma), u, w / sigma, max_iter, False, float(resid / sigma))
    if strict:
        raise NoConvergence(f"power iteration did not reach tol={tol} in {max_iter} steps", best)
    return best


def spectral_norm(A, tol=1e-10, max_iter=1000):
    A = as_matrix(A)
    if not np.any(A):
        return 0.0
    return leading_singular_triple(A, tol=tol, max_iter=max_iter).sigma
