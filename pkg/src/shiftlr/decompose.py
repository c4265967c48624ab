"""Greedy shifted rank-1 decomposition ``A ~= sum_k S_{lam_k}(sigma_k u_k v_k^*)``."""

from dataclasses import dataclass, field

import numpy as np

from .config import SolverConfig
from .errors import DegenerateInput, DimensionMismatch, ZeroMatrix
from .estimator import estimate
from .numerics import as_matrix
from .shifts import as_shifts, shift_columns


@dataclass(frozen=True, eq=False)
class Component:
    """One term ``S_shifts(sigma u v^*)`` in canonical form.

    ``u`` and ``v`` have unit norm, ``shifts[0] == 0``, and the largest-modulus
    entry of ``u`` is real and nonnegative.
    """

    sigma: float
    u: np.ndarray
    v: np.ndarray
    shifts: np.ndarray

    @property
    def shape(self):
        return self.u.size, self.v.size

    def dense(self):
        return shift_columns(self.sigma * np.outer(self.u, self.v.conj()), self.shifts)

    def __eq__(self, other):
        if not isinstance(other, Component):
            return NotImplemented
        return (
            self.sigma == other.sigma
            and np.array_equal(self.u, other.u)
            and np.array_equal(self.v, other.v)
            and np.array_equal(self.shifts, other.shifts)
        )


@dataclass(eq=False)
class Decomposition:
    M: int
    N: int
    components: list = field(default_factory=list)
    residual_history: list = field(default_factory=list)
    # largest |imag| dropped from u, v when the input was real; None for complex input
    max_imag: float = None
    # per-component estimator traces; not serialised
    traces: list = field(default_factory=list, repr=False)

    def __len__(self):
        return len(self.components)

    @property
    def relative_residuals(self):
        h = np.asarray(self.residual_history, dtype=float)
        return h / h[0] if h.size and h[0] > 0 else h

    def __eq__(self, other):
        if not isinstance(other, Decomposition):
            return NotImplemented
        return (
            self.M == other.M
            and self.N == other.N
            and self.components == other.components
            and list(self.residual_history) == list(other.residual_history)
        )


def canonicalize_component(sigma, u, v, shifts):
    """Pick the canonical member of the ambiguity family of ``S_shifts(sigma u v^*)``.

    The global offset ``m = shifts[0]`` is moved into ``u`` (``u <- S^m u``),
    norms are folded into ``sigma``, and a common phase is removed from ``u``
    and ``v`` so the largest entry of ``u`` is real nonnegative. Idempotent.
    """
    u = np.asarray(u, dtype=np.complex128).reshape(-1)
    v = np.asarray(v, dtype=np.complex128).reshape(-1)
    M = u.size
    shifts = as_shifts(shifts, M, v.size)
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu == 0 or nv == 0:
        raise DegenerateInput("u and v must be nonzero")
    if sigma <= 0:
        raise DegenerateInput("sigma must be positive")

    m = int(shifts[0]) if shifts.size else 0
    u = np.roll(u, m) / nu
    v = v / nv
    shifts = (shifts - m) % M
    j = int(np.argmax(np.abs(u)))
    rot = np.conj(u[j]) / np.abs(u[j])
    u = u * rot
    u[j] = abs(u[j])
    v = v * rot
    return Component(float(sigma * nu * nv), u, v, shifts)


def _extract(A, cfg, real):
    est = estimate(A, cfg)
    t = est.triple
    comp = canonicalize_component(t.sigma, t.u, t.v, est.shifts)
    imag = 0.0
    if real:
        imag = max(np.max(np.abs(comp.u.imag)), np.max(np.abs(comp.v.imag)))
        comp = Component(comp.sigma, comp.u.real.copy(), comp.v.real.copy(), comp.shifts)
    residual = A - comp.dense()
    return comp, residual, est, imag


def extract_component(A, cfg=None):
    """Best shifted rank-1 term of ``A`` and the deflated residual.

    ``||residual||_F^2 = ||A||_F^2 - sigma^2`` up to rounding.
    """
    A0 = np.asarray(A)
    real = not np.iscomplexobj(A0)
    A = as_matrix(A0)
    if not np.any(A):
        raise ZeroMatrix("extract_component of a zero matrix")
    comp, residual, _, _ = _extract(A, cfg or SolverConfig(), real)
    return comp, residual


def decompose(A, cfg=None):
    """Greedy deflation: extract up to ``cfg.max_components`` terms.

    Stops early once ``||residual||_F <= cfg.residual_threshold * ||A||_F`` or
    when an extracted ``sigma`` drops below ``1e-14 * ||A||_F``.
    """
    cfg = cfg or SolverConfig()
    A0 = np.asarray(A)
    real = not np.iscomplexobj(A0)
    A = as_matrix(A0)
    M, N = A.shape
    fro = float(np.linalg.norm(A))
    if fro == 0:
        raise ZeroMatrix("decompose of a zero matrix")

    limit = cfg.max_components or M * N
    D = Decomposition(M, N, [], [fro], 0.0 if real else None)
    R = A
    while len(D.components) < limit:
        if D.residual_history[-1] <= cfg.residual_threshold * fro or not np.any(R):
            break
        comp, R_next, est, imag = _extract(R, cfg, real)
        if comp.sigma < 1e-14 * fro:
            break
        D.components.append(comp)
        D.traces.append(est.traces)
        D.residual_history.append(float(np.linalg.norm(R_next)))
        if real:
            D.max_imag = max(D.max_imag, float(imag))
        R = R_next
    return D


def reconstruct(D):
    out = np.zeros((D.M, D.N), dtype=np.complex128)
    for c in D.components:
        if c.shape != (D.M, D.N):
            raise DimensionMismatch("component shape does not match decomposition")
        out += c.dense()
    return out
