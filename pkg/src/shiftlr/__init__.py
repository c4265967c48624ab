"""Shifted rank-1 approximation of matrices.

A matrix is approximated by ``sum_k S_{lam_k}(sigma_k u_k v_k^*)`` where
``S_lam`` circularly shifts column ``j`` by ``lam[j]`` rows.
"""

from .config import SolverConfig
from .decompose import Component, Decomposition, canonicalize_component, decompose, extract_component, reconstruct
from .errors import (
    DegenerateInput,
    DimensionMismatch,
    InvalidSpec,
    IterationCapReached,
    NoConvergence,
    ParseError,
    TooLarge,
    ZeroMatrix,
)
from .estimator import correlation_matrix, estimate_shifts, local_optimize, starting_guess, upper_bound
from .fastops import (
    ShiftedLowRankOperator,
    component_matvec,
    component_rmatvec,
    decomposition_matvec,
    decomposition_rmatvec,
)
from .numerics import SingularTriple, fft_columns, ifft_columns, leading_singular_triple
from .shifts import apply_shift_fourier, compose_shifts, inverse_shift, phase_matrix, shift_columns

__version__ = "0.1.0"
