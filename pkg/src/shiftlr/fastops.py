"""Fast products with shifted rank-1 matrices.

``S_lam(u v^*) = U V`` where ``U`` is the circulant matrix of ``u`` and ``V``
has 1-sparse columns (entry ``conj(v_j)`` in row ``lam_j``). A product with
``x`` therefore bins ``conj(v_j) x_j`` by shift into an activation vector
``t`` and circularly convolves ``u`` with ``t``: ``O(M log M + N)``.
"""

import numpy as np
from scipy.sparse.linalg import LinearOperator

from .errors import DimensionMismatch


def next_pow2(n):
    return 1 << (int(n) - 1).bit_length()


def _vector(x, n, name):
    x = np.asarray(x, dtype=np.complex128)
    if x.shape != (n,):
        raise DimensionMismatch(f"{name} must have shape ({n},), got {x.shape}")
    return x


def _bincount_complex(idx, w, size):
    # ascending-j accumulation, deterministic
    return np.bincount(idx, w.real, size) + 1j * np.bincount(idx, w.imag, size)


def sparse_activation(c, x):
    """Aggregated weights ``t[s] = sum_{j: lam_j = s} sigma conj(v_j) x_j``."""
    M, N = c.shape
    x = _vector(x, N, "x")
    return _bincount_complex(c.shifts, c.sigma * c.v.conj() * x, M)


def _circular_convolve(uhat, t, pad_pow2=False):
    M = t.shape[-1]
    if not pad_pow2:
        return np.fft.ifft(uhat * np.fft.fft(t, axis=-1), axis=-1)
    # linear convolution in a power-of-two buffer, then fold back mod M;
    # same result as the length-M circular convolution
    P = next_pow2(2 * M - 1)
    lin = np.fft.ifft(uhat * np.fft.fft(t, n=P, axis=-1), axis=-1)
    return lin[..., :M] + np.concatenate([lin[..., M:2 * M - 1], np.zeros(lin.shape[:-1] + (1,))], axis=-1)


def component_matvec(c, x, pad_pow2=False):
    """``S_lam(sigma u v^*) x`` via one circular convolution."""
    M, _ = c.shape
    t = sparse_activation(c, x)
    n = next_pow2(2 * M - 1) if pad_pow2 else M
    return _circular_convolve(np.fft.fft(c.u, n=n), t, pad_pow2)


def component_rmatvec(c, y):
    """Adjoint product: entry ``j`` is ``sigma v_j <S^{lam_j} u, y>``."""
    M, _ = c.shape
    y = _vector(y, M, "y")
    # corr[s] = <S^s u, y> = sum_i conj(u_{i-s}) y_i
    corr = np.fft.ifft(np.fft.fft(c.u).conj() * np.fft.fft(y))
    return c.sigma * c.v * corr[c.shifts]


class ShiftedLowRankOperator(LinearOperator):
    """Sum of shifted rank-1 terms as a scipy ``LinearOperator``.

    Spectra of all ``u_k`` are cached; a forward product costs one batched
    FFT of the ``L x M`` activation matrix, one inverse FFT of the summed
    spectrum, and one ``bincount`` over ``L*N`` entries.
    """

    def __init__(self, D, pad_pow2=False):
        self.decomposition = D
        self.pad_pow2 = pad_pow2
        M, N = D.M, D.N
        L = len(D.components)
        self._n = next_pow2(2 * M - 1) if pad_pow2 else M
        if L:
            for c in D.components:
                if c.shape != (M, N):
                    raise DimensionMismatch("component shape does not match decomposition")
            self._uhat = np.fft.fft(np.stack([c.u for c in D.components]), n=self._n, axis=-1)
            self._w = np.stack([c.sigma * c.v.conj() for c in D.components])
            self._bins = (np.arange(L)[:, None] * M + np.stack([c.shifts for c in D.components])).ravel()
        super().__init__(np.complex128, (M, N))

    def _matvec(self, x):
        M, N = self.shape
        x = np.asarray(x, dtype=np.complex128).reshape(-1)
        if x.size != N:
            raise DimensionMismatch(f"x must have length {N}")
        L = len(self.decomposition.components)
        if L == 0:
            return np.zeros(M, dtype=np.complex128)
        T = _bincount_complex(self._bins, (self._w * x[None, :]).ravel(), L * M).reshape(L, M)
        spec = (self._uhat * np.fft.fft(T, n=self._n, axis=-1)).sum(axis=0)
        out = np.fft.ifft(spec)
        if not self.pad_pow2:
            return out
        return out[:M] + np.concatenate([out[M:2 * M - 1], [0.0]])

    def _rmatvec(self, y):
        M, N = self.shape
        y = np.asarray(y, dtype=np.complex128).reshape(-1)
        if y.size != M:
            raise DimensionMismatch(f"y must have length {M}")
        out = np.zeros(N, dtype=np.complex128)
        for c in self.decomposition.components:
            out += component_rmatvec(c, y)
        return out


def decomposition_matvec(D, x, pad_pow2=False):
    """Sum of ``component_matvec`` over all terms of ``D``."""
    x = _vector(x, D.N, "x")
    return ShiftedLowRankOperator(D, pad_pow2).matvec(x)


def decomposition_rmatvec(D, y):
    y = _vector(y, D.M, "y")
    return ShiftedLowRankOperator(D).rmatvec(y)
