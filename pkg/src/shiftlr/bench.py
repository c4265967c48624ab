"""Synthetic data, baselines and experiment drivers for desk-scale benchmarks.

Every experiment returns a list of rows with the fixed report schema in
``REPORT_FIELDS``; :func:`write_report` serialises them as CSV.
"""

import csv
import itertools
import time
from dataclasses import dataclass

import numpy as np

from .config import SolverConfig
from .decompose import Decomposition, canonicalize_component, decompose
from .errors import InvalidSpec, TooLarge, ZeroMatrix
from .estimator import estimate
from .fastops import ShiftedLowRankOperator
from .numerics import as_matrix, leading_singular_triple
from .shifts import shift_columns

KINDS = ("shiftedRank1Sum", "randomOrthogonal", "seismicLike", "cartoonLike")
REPORT_FIELDS = ("experiment", "seed", "M", "N", "L_or_terms", "metric_name", "metric_value")
EXPERIMENTS = ("errorDecay", "svRatio", "storageCurve", "runtimeScaling", "matvecScaling", "noiseRecovery")


@dataclass(frozen=True)
class SynthSpec:
    """Recipe for a synthetic test matrix.

    ``noise_psnr`` adds Gaussian noise scaled so that
    ``10 log10(max|A|^2 / mean|E|^2)`` equals it exactly; ``noise_level``
    instead fixes ``||E||_F / ||A||_F``. ``sigma_ratio`` sets the decay
    ``sigma_k = sigma_ratio**-k`` of shifted rank-1 sums.
    """

    kind: str
    M: int
    N: int
    L: int = 1
    noise_psnr: float = None
    noise_level: float = None
    seed: int = 0
    sigma_ratio: float = 4.0
    complex: bool = True
    wavelet_width: float = 2.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidSpec(f"unknown kind {self.kind!r}; expected one of {KINDS}")
        if self.M < 1 or self.N < 1 or self.L < 1:
            raise InvalidSpec("M, N and L must be positive")
        if self.noise_psnr is not None and not np.isfinite(self.noise_psnr):
            raise InvalidSpec("noise_psnr must be finite")
        if self.noise_level is not None and (not np.isfinite(self.noise_level) or self.noise_level < 0):
            raise InvalidSpec("noise_level must be finite and nonnegative")
        if self.noise_psnr is not None and self.noise_level is not None:
            raise InvalidSpec("give at most one of noise_psnr and noise_level")
        if self.sigma_ratio <= 0 or self.wavelet_width <= 0:
            raise InvalidSpec("sigma_ratio and wavelet_width must be positive")


def psnr(clean, noise):
    clean = np.asarray(clean)
    noise = np.asarray(noise)
    return 10.0 * np.log10(np.max(np.abs(clean)) ** 2 / np.mean(np.abs(noise) ** 2))


def _gaussian(rng, shape, cplx):
    if cplx:
        return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)
    return rng.standard_normal(shape)


def ricker(M, width, center=0):
    """Circular Ricker wavelet of length ``M`` peaking at ``center``."""
    t = (np.arange(M) - center + M // 2) % M - M // 2
    x = (t / width) ** 2
    return (1 - 2 * x) * np.exp(-x)


def _truth(A, terms):
    comps = [canonicalize_component(s, u, v, lam) for s, u, v, lam in terms]
    hist = [float(np.linalg.norm(A))]
    R = A.astype(np.complex128)
    for c in comps:
        R = R - c.dense()
        hist.append(float(np.linalg.norm(R)))
    return Decomposition(A.shape[0], A.shape[1], comps, hist)


def _shifted_sum(spec, rng):
    M, N = spec.M, spec.N
    terms = []
    for k in range(spec.L):
        u = _gaussian(rng, M, spec.complex)
        v = _gaussian(rng, N, spec.complex)
        lam = rng.integers(0, M, N)
        terms.append((spec.sigma_ratio ** (-k), u / np.linalg.norm(u), v / np.linalg.norm(v), lam))
    A = sum(shift_columns(s * np.outer(u, v.conj()), lam) for s, u, v, lam in terms)
    return A, terms


def _seismic(spec, rng):
    M, N = spec.M, spec.N
    terms = []
    for k in range(spec.L):
        width = spec.wavelet_width * (1 + rng.random())
        u = ricker(M, width)
        # smooth random-walk moveout: slowly drifting slope per trace
        slope = rng.uniform(-0.8, 0.8) + np.cumsum(rng.normal(0, 0.05, N))
        lam = np.round(rng.uniform(0, M) + np.cumsum(slope)).astype(np.int64) % M
        amp = 0.8**k * rng.choice([-1.0, 1.0]) * (1 + 0.2 * np.sin(np.linspace(0, rng.uniform(1, 4) * np.pi, N) + rng.uniform(0, 2 * np.pi)))
        terms.append((np.linalg.norm(u) * np.linalg.norm(amp), u / np.linalg.norm(u), amp / np.linalg.norm(amp), lam))
    A = sum(shift_columns(s * np.outer(u, v), lam) for s, u, v, lam in terms)
    return A, terms


def _cartoon(spec, rng):
    M, N = spec.M, spec.N
    A = np.full((M, N), rng.uniform(0, 0.3))
    rows, cols = np.mgrid[0:M, 0:N]
    for _ in range(max(spec.L, 1) * 3):
        val = rng.uniform(-0.5, 1.0)
        if rng.random() < 0.5:
            r0, c0 = rng.integers(0, M), rng.integers(0, N)
            h, w = rng.integers(M // 8 + 1, M // 2 + 2), rng.integers(N // 8 + 1, N // 2 + 2)
            A[r0:r0 + h, c0:c0 + w] += val
        else:
            cr, cc = rng.uniform(0, M), rng.uniform(0, N)
            ar, ac = rng.uniform(M / 10, M / 3), rng.uniform(N / 10, N / 3)
            A[((rows - cr) / ar) ** 2 + ((cols - cc) / ac) ** 2 <= 1] += val
    return A


def _orthogonal(spec, rng):
    M, N = spec.M, spec.N
    G = _gaussian(rng, (max(M, N), min(M, N)), spec.complex)
    Q, R = np.linalg.qr(G)
    d = np.diag(R)
    Q = Q * (d / np.abs(d))[None, :]
    return Q if M >= N else Q.T


def generate(spec):
    """Materialise ``spec``; returns ``(A, ground_truth_or_None)``. Deterministic in ``seed``."""
    rng = np.random.default_rng(spec.seed)
    terms = None
    if spec.kind == "shiftedRank1Sum":
        A, terms = _shifted_sum(spec, rng)
    elif spec.kind == "seismicLike":
        A, terms = _seismic(spec, rng)
    elif spec.kind == "cartoonLike":
        A = _cartoon(spec, rng)
    else:
        A = _orthogonal(spec, rng)
    if spec.kind in ("seismicLike", "cartoonLike") or not spec.complex:
        A = A.real

    if spec.noise_psnr is not None or spec.noise_level:
        E = _gaussian(np.random.default_rng([spec.seed, 1]), A.shape, np.iscomplexobj(A))
        if spec.noise_psnr is not None:
            target = np.max(np.abs(A)) ** 2 / 10 ** (spec.noise_psnr / 10)
            E *= np.sqrt(target / np.mean(np.abs(E) ** 2))
        else:
            E *= spec.noise_level * np.linalg.norm(A) / np.linalg.norm(E)
        A = A + E
    truth = _truth(A, terms) if terms is not None else None
    return A, truth


def truncated_svd(A, L, tol=1e-10, max_iter=1000):
    """Rank-``L`` approximation by greedy deflation with power iteration (all shifts 0)."""
    A = as_matrix(A)
    M, N = A.shape
    if L < 0 or L > min(M, N):
        raise ValueError(f"L must lie in [0, {min(M, N)}]")
    fro = float(np.linalg.norm(A))
    if fro == 0:
        raise ZeroMatrix("truncated_svd of a zero matrix")
    D = Decomposition(M, N, [], [fro])
    R = A
    zero = np.zeros(N, dtype=np.int64)
    for _ in range(L):
        if not np.any(R):
            break
        t = leading_singular_triple(R, tol=tol, max_iter=max_iter)
        if t.sigma < 1e-14 * fro:
            break
        c = canonicalize_component(t.sigma, t.u, t.v, zero)
        R = R - c.dense()
        D.components.append(c)
        D.residual_history.append(float(np.linalg.norm(R)))
    return D


def storage_cost(method, M, N, terms):
    """Doubles needed to store ``terms`` terms; an integer counts as half a double."""
    if M <= 0 or N <= 0 or terms < 0:
        raise ValueError("M, N must be positive and terms nonnegative")
    if method == "sr1":
        return terms * (M + N + 0.5 * N)
    if method == "truncatedSVD":
        return float(terms * (M + N))
    raise ValueError(f"unknown method {method!r}")


def brute_force_shift_search(A, batch=2048):
    """Exhaustive maximiser of ``||S_{-lam} A||_2`` with ``lam[0] = 0``."""
    A = as_matrix(A)
    M, N = A.shape
    if M ** (N - 1) > 10**6:
        raise TooLarge(f"{M}^{N - 1} candidate shift vectors exceeds 10^6")
    cols = np.arange(N)
    rows = np.arange(M)
    best_val, best_lam = -1.0, None
    candidates = itertools.product(range(M), repeat=N - 1)
    while True:
        chunk = list(itertools.islice(candidates, batch))
        if not chunk:
            break
        lams = np.zeros((len(chunk), N), dtype=np.int64)
        lams[:, 1:] = chunk
        # S_{-lam} A: entry j of column k is A[(j + lam_k) mod M, k]
        idx = (rows[None, :, None] + lams[:, None, :]) % M
        stack = A[idx, cols[None, None, :]]
        vals = np.linalg.norm(stack, ord=2, axis=(1, 2))
        i = int(np.argmax(vals))
        if vals[i] > best_val:
            best_val, best_lam = float(vals[i]), lams[i].copy()
    return best_lam, best_val


def shift_match_fraction(estimated, truth, M):
    """Fraction of columns whose shift matches ``truth`` up to the most common offset."""
    d = (np.asarray(estimated) - np.asarray(truth)) % M
    return float(np.max(np.bincount(d, minlength=M)) / d.size)


def svd_error_at_storage(A, cost):
    """Best truncated-SVD relative error using at most ``cost`` doubles (dense SVD)."""
    M, N = A.shape
    s = np.linalg.svd(A, compute_uv=False)
    r = min(int(cost // (M + N)), s.size)
    return float(np.sqrt(np.sum(s[r:] ** 2)) / np.linalg.norm(s)), r


# experiments -----------------------------------------------------------------


def _row(exp, seed, M, N, L, name, value):
    return {"experiment": exp, "seed": seed, "M": M, "N": N, "L_or_terms": L, "metric_name": name, "metric_value": value}


def _seeds(params):
    seeds = params.get("seeds", 5)
    return list(range(seeds)) if isinstance(seeds, int) else list(seeds)


def _spec(params, seed, **over):
    fields = dict(
        kind=params.get("kind", "shiftedRank1Sum"),
        M=params.get("M", 64),
        N=params.get("N", 64),
        L=params.get("L_true", 5),
        noise_psnr=params.get("noise_psnr"),
        noise_level=params.get("noise_level"),
        seed=seed,
        sigma_ratio=params.get("sigma_ratio", 4.0),
        complex=params.get("complex", True),
    )
    fields.update(over)
    return SynthSpec(**fields)


def _exp_error_decay(params):
    rows = []
    Lmax = params.get("L", 5)
    for seed in _seeds(params):
        A, _ = generate(_spec(params, seed))
        M, N = A.shape
        D = decompose(A, SolverConfig(max_components=Lmax))
        svd = truncated_svd(A, min(Lmax, M, N))
        for L in range(1, Lmax + 1):
            sr1 = D.relative_residuals[min(L, len(D))]
            rows.append(_row("errorDecay", seed, M, N, L, "relerr_sr1", float(sr1)))
            if L <= len(svd):
                rows.append(_row("errorDecay", seed, M, N, L, "relerr_svd", float(svd.relative_residuals[L])))
    return rows


def _exp_sv_ratio(params):
    rows = []
    Lmax = params.get("L", 5)
    for seed in _seeds(params):
        A, _ = generate(_spec(params, seed))
        M, N = A.shape
        D = decompose(A, SolverConfig(max_components=Lmax))
        for L, traces in enumerate(D.traces, start=1):
            for tr in traces:
                rows.append(_row("svRatio", seed, M, N, L, f"ratio_{tr.stage}", tr.ratio))
                if tr.stage in ("globalStage", "localStage"):
                    rows.append(_row("svRatio", seed, M, N, L, f"moves_{tr.stage}", tr.iterations))
    return rows


def _exp_storage_curve(params):
    rows = []
    Lmax = params.get("L", 10)
    for seed in _seeds(params):
        A, _ = generate(_spec(params, seed))
        M, N = A.shape
        D = decompose(A, SolverConfig(max_components=Lmax))
        svd = truncated_svd(A, min(M, N, int(storage_cost("sr1", M, N, Lmax) // (M + N))))
        for L in range(1, Lmax + 1):
            rows.append(_row("storageCurve", seed, M, N, L, "cost_sr1", storage_cost("sr1", M, N, L)))
            rows.append(_row("storageCurve", seed, M, N, L, "relerr_sr1", float(D.relative_residuals[min(L, len(D))])))
        for r in range(1, len(svd) + 1):
            rows.append(_row("storageCurve", seed, M, N, r, "cost_svd", storage_cost("truncatedSVD", M, N, r)))
            rows.append(_row("storageCurve", seed, M, N, r, "relerr_svd", float(svd.relative_residuals[r])))
    return rows


def _timeit(fn, repeats):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def _exp_runtime(params):
    rows = []
    N = params.get("N", 128)
    L = params.get("L", 3)
    repeats = params.get("repeats", 1)
    for seed in _seeds(params):
        for M in params.get("Ms", (128, 256, 512, 1024, 2048)):
            A, _ = generate(_spec(params, seed, M=M, N=N, L=params.get("L_true", L)))
            cfg = SolverConfig(max_components=L)
            rows.append(_row("runtimeScaling", seed, M, N, L, "seconds_decompose", _timeit(lambda: decompose(A, cfg), repeats)))
    return rows


def random_decomposition(M, N, L, rng):
    comps = []
    for _ in range(L):
        u = _gaussian(rng, M, True)
        v = _gaussian(rng, N, True)
        comps.append(canonicalize_component(rng.uniform(0.1, 1.0), u, v, rng.integers(0, M, N)))
    return Decomposition(M, N, comps, [1.0] * (L + 1))


def _exp_matvec(params):
    rows = []
    repeats = params.get("repeats", 5)
    dense_max = params.get("dense_max", 2048)
    pad = params.get("pad_pow2", False)
    for seed in _seeds(params):
        rng = np.random.default_rng(seed)
        for L in params.get("Ls", (1, 10)):
            for M in params.get("Ms", tuple(2**p for p in range(10, 17))):
                N = params.get("N") or M
                D = random_decomposition(M, N, L, rng)
                op = ShiftedLowRankOperator(D, pad_pow2=pad)
                x = _gaussian(rng, N, True)
                rows.append(_row("matvecScaling", seed, M, N, L, "seconds_fast", _timeit(lambda: op.matvec(x), repeats)))
                if M <= dense_max:
                    dense = sum(c.dense() for c in D.components)
                    rows.append(_row("matvecScaling", seed, M, N, L, "seconds_dense", _timeit(lambda: dense @ x, repeats)))
    return rows


def _exp_noise(params):
    rows = []
    for p in params.get("psnrs", (20, 19, 18)):
        for seed in _seeds(params):
            A, truth = generate(_spec(params, seed, L=1, noise_psnr=p))
            M, N = A.shape
            lam = estimate(A, SolverConfig()).shifts
            frac = shift_match_fraction(lam, truth.components[0].shifts, M)
            rows.append(_row("noiseRecovery", seed, M, N, 1, f"recovered_fraction_psnr{p:g}", frac))
    return rows


_DRIVERS = {
    "errorDecay": _exp_error_decay,
    "svRatio": _exp_sv_ratio,
    "storageCurve": _exp_storage_curve,
    "runtimeScaling": _exp_runtime,
    "matvecScaling": _exp_matvec,
    "noiseRecovery": _exp_noise,
}


def run_experiment(name, params=None):
    """Run one named experiment; returns rows keyed by ``REPORT_FIELDS``."""
    if name not in _DRIVERS:
        raise InvalidSpec(f"unknown experiment {name!r}; expected one of {EXPERIMENTS}")
    return _DRIVERS[name](dict(params or {}))


def write_report(rows, fh):
    w = csv.DictWriter(fh, fieldnames=REPORT_FIELDS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in r.items()})


def loglog_slope(x, y):
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])
