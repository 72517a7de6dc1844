"""Spectrally transformed kernel systems and their ridge/ridgeless solutions.

The n x n system matrix has entries sum_i p_i^2 lambda_i^beta psi_i(x_j)
psi_i(x_l), accumulated blockwise over spectral indices so memory stays
O(n^2 + n*block).  Solutions are mapped back to coordinates in the
orthonormal RKHS basis via c_i = p_i lambda_i^(beta - 1/2) sum_j theta_j
psi_i(x_j).
"""

from dataclasses import dataclass, field

import numpy as np

from . import fourier_basis, spectral_problem
from .errors import NotTraceClass, RankDeficient, TruncationTooCoarse

BLOCK_WIDTH = 4096
RIDGELESS_REL_CUTOFF = 1e-12
ILL_CONDITIONED_THRESHOLD = 1e12

try:
    from scipy.linalg import cho_factor, cho_solve
    from scipy.linalg.blas import dsyrk

    _HAVE_SCIPY = True
except ImportError:  # pragma: no cover - scipy is a hard dependency in practice
    _HAVE_SCIPY = False


@dataclass
class KernelSystem:
    """Assembled kernel matrix over one spectral index range."""

    matrix: np.ndarray
    index_range: tuple
    n: int
    tail_bound: float = 0.0
    cond_estimate: float = float("nan")


@dataclass(frozen=True)
class EstimatorCoefficients:
    """Estimator coordinates in the orthonormal RKHS basis, truncated at N."""

    coeffs: np.ndarray
    truncation: int
    gamma: float = 0.0
    seed: int = 0
    n: int = 0


@dataclass
class SolveInfo:
    method: str
    residual: float
    cond_estimate: float
    clipped: int = 0
    ill_conditioned: bool = False
    eigenvalues: np.ndarray = field(default=None, repr=False)


def _range_blocks(i_lo, i_hi, width=BLOCK_WIDTH):
    lo = i_lo
    while lo <= i_hi:
        hi = min(lo + width - 1, i_hi)
        yield lo, hi
        lo = hi + 1


def kernel_weights(profile, i_lo, i_hi):
    """p_i^2 lambda_i^beta over [i_lo, i_hi]."""
    lam, p = spectral_problem.spectrum_arrays(profile, i_lo, i_hi)
    return p ** 2 * lam ** profile.bias


def coefficient_scale(profile, i_lo, i_hi):
    """p_i lambda_i^(beta - 1/2): maps theta-space projections to basis coords."""
    lam, p = spectral_problem.spectrum_arrays(profile, i_lo, i_hi)
    return p * lam ** (profile.bias - 0.5)


def signal_scale(profile, i_lo, i_hi):
    """p_i sqrt(lambda_i): coordinate-to-observation scaling of the target."""
    lam, p = spectral_problem.spectrum_arrays(profile, i_lo, i_hi)
    return p * np.sqrt(lam)


def _rank_update(out, block):
    """out += block @ block.T, writing the upper triangle via BLAS syrk."""
    if _HAVE_SCIPY:
        a = np.asfortranarray(block.T)
        dsyrk(1.0, a, beta=1.0, c=out, trans=1, lower=0, overwrite_c=1)
    else:
        out += block @ block.T


def _symmetrize_upper(mat):
    upper = np.triu(mat)
    return upper + np.triu(mat, 1).T


def assemble_kernel(design, profile, index_range=None, rel_tol=1e-3,
                    block_width=BLOCK_WIDTH):
    """Assemble the spectrally transformed kernel matrix over index_range.

    Raises TruncationTooCoarse when the range ends at the profile truncation
    and the analytic tail 2 sum_{i>N} p_i^2 lambda_i^beta is not negligible
    against the diagonal.  Skipped for non-trace-class profiles
    (2p + lambda*beta <= 1), where the truncated model is the object itself.
    """
    i_lo, i_hi = index_range if index_range is not None else (1, profile.truncation)
    if not (1 <= i_lo <= i_hi <= profile.truncation):
        raise ValueError("index_range must satisfy 1 <= i_lo <= i_hi <= N")
    n = design.n
    mat = np.zeros((n, n), order="F")
    for lo, hi in _range_blocks(i_lo, i_hi, block_width):
        feats = fourier_basis.feature_block(design, lo, hi)
        _rank_update(mat, feats * np.sqrt(kernel_weights(profile, lo, hi)))
    mat = _symmetrize_upper(mat)

    tail_bound = 0.0
    if i_hi == profile.truncation:
        a = profile.ordering_exponent
        if a > 1.0:
            tail_bound = 2.0 * spectral_problem.power_tail_sum(a, profile.truncation)
            diag_min = float(np.min(np.diag(mat)))
            if tail_bound > rel_tol * diag_min:
                raise TruncationTooCoarse(
                    f"kernel tail bound {tail_bound:.3e} exceeds "
                    f"{rel_tol:.1e} x diagonal minimum {diag_min:.3e}; increase N"
                )
        else:
            tail_bound = float("inf")  # not trace class: no finite tail exists
    return KernelSystem(matrix=mat, index_range=(i_lo, i_hi), n=n,
                        tail_bound=tail_bound)


# --- solvers -----------------------------------------------------------------

def _solve_eigh(system, y, ngamma, rel_cutoff):
    mu, vecs = np.linalg.eigh(system.matrix)
    shifted = mu + ngamma
    if ngamma > 0:
        keep = shifted > 0
    else:
        keep = shifted > rel_cutoff * max(shifted[-1], 0.0)
    inv = np.zeros_like(shifted)
    inv[keep] = 1.0 / shifted[keep]
    theta = vecs @ (inv * (vecs.T @ y))
    kept = shifted[keep]
    cond = float(kept.max() / kept.min()) if kept.size else float("inf")
    info = SolveInfo(
        method="eigh",
        residual=_relative_residual(system, theta, y, ngamma),
        cond_estimate=cond,
        clipped=int(np.count_nonzero(~keep)),
        ill_conditioned=cond > ILL_CONDITIONED_THRESHOLD,
        eigenvalues=mu,
    )
    system.cond_estimate = cond
    return theta, info


def _relative_residual(system, theta, y, ngamma):
    ynorm = float(np.linalg.norm(y))
    if ynorm == 0.0:
        return 0.0
    resid = system.matrix @ theta + ngamma * theta - y
    return float(np.linalg.norm(resid)) / ynorm


def solve_regularized(system, y, gamma):
    """theta solving (K + n*gamma*I) theta = y.

    Symmetric positive-definite factorization first; eigendecomposition on
    factorization failure or when the residual check (1e-10 relative) fails.
    gamma = 0 falls through to the ridgeless pseudo-inverse path.
    """
    if gamma < 0:
        raise ValueError("ridge level must be >= 0")
    if gamma == 0.0:
        return solve_ridgeless(system, y)
    ngamma = system.n * gamma
    if _HAVE_SCIPY:
        try:
            shifted = system.matrix + ngamma * np.eye(system.n)
            factor = cho_factor(shifted, lower=False, check_finite=False)
            theta = cho_solve(factor, y, check_finite=False)
            rdiag = np.abs(np.diag(factor[0]))
            cond = float((rdiag.max() / rdiag.min()) ** 2)
            residual = _relative_residual(system, theta, y, ngamma)
            if residual <= 1e-10:
                system.cond_estimate = cond
                return theta, SolveInfo(
                    method="cholesky", residual=residual, cond_estimate=cond,
                    ill_conditioned=cond > ILL_CONDITIONED_THRESHOLD,
                )
        except np.linalg.LinAlgError:
            pass
    return _solve_eigh(system, y, ngamma, RIDGELESS_REL_CUTOFF)


def solve_ridgeless(system, y, rel_cutoff=RIDGELESS_REL_CUTOFF):
    """Pseudo-inverse solution via symmetric eigendecomposition.

    Eigenvalues below rel_cutoff x mu_max are dropped; the interpolation
    residual is reported in SolveInfo (it exceeds tolerance only when y has
    mass outside the numerical range of the kernel).
    """
    return _solve_eigh(system, y, 0.0, rel_cutoff)


def estimator_coefficients(theta, design, profile, gamma=0.0, seed=0,
                           block_width=BLOCK_WIDTH):
    """Map a theta-vector to basis coordinates c_i, i <= N."""
    n_modes = profile.truncation
    coeffs = np.empty(n_modes)
    for lo, hi in _range_blocks(1, n_modes, block_width):
        feats = fourier_basis.feature_block(design, lo, hi)
        coeffs[lo - 1:hi] = coefficient_scale(profile, lo, hi) * (feats.T @ theta)
    return EstimatorCoefficients(coeffs=coeffs, truncation=n_modes, gamma=gamma,
                                 seed=seed, n=design.n)


def clean_targets(design, profile, block_width=BLOCK_WIDTH):
    """Noise-free observations sum_{i<=N} c_i p_i sqrt(lambda_i) psi_i(x_j).

    Raises TruncationTooCoarse when the RMS of the dropped tail is not
    negligible (1e-3) relative to the RMS of the retained signal.
    """
    n_modes = profile.truncation
    clean = np.zeros(design.n)
    head_sq = 0.0
    for lo, hi in _range_blocks(1, n_modes, block_width):
        feats = fourier_basis.feature_block(design, lo, hi)
        sig = spectral_problem.target_array(profile, lo, hi) * signal_scale(profile, lo, hi)
        clean += feats @ sig
        head_sq += float(np.sum(sig ** 2))
    # RMS of the unobserved tail over a random design point
    a = 1.0 + 2.0 * profile.op_order + profile.lambda_decay * profile.source
    if a <= 1.0:
        raise NotTraceClass(
            "clean signal is not square-summable: 1 + 2p + lambda*r <= 1")
    tail_sq = spectral_problem.power_tail_sum(a, n_modes)
    if tail_sq > 1e-6 * head_sq:
        raise TruncationTooCoarse(
            f"clean-label tail RMS {np.sqrt(tail_sq):.3e} exceeds 1e-3 of "
            f"signal RMS {np.sqrt(head_sq):.3e}; increase N"
        )
    return clean


def observe_targets(design, profile, seed, block_width=BLOCK_WIDTH):
    """(y, clean): noisy and noise-free observations of the target."""
    clean = clean_targets(design, profile, block_width)
    noise = fourier_basis.gaussian_noise(design.n, profile.noise_var, seed)
    return clean + noise, clean


def min_norm_oracle(design, profile, y):
    """Brute-force minimum-norm interpolant in truncated coordinates.

    Solves min sum_i w_i a_i^2 subject to M a = y by explicit weighted normal
    equations, with w_i = lambda_i^(1 - beta) and M_{j,i} = p_i sqrt(lambda_i)
    psi_i(x_j).  Deliberately avoids the kernel-system path (dense SVD-based
    solve) so it can serve as an independent oracle at desk scale.
    """
    n_modes = profile.truncation
    if n_modes < design.n:
        raise ValueError("oracle needs N >= n")
    lam, _ = spectral_problem.spectrum_arrays(profile, 1, n_modes)
    w = lam ** (1.0 - profile.bias)
    feats = fourier_basis.feature_block(design, 1, n_modes)
    m = feats * signal_scale(profile, 1, n_modes)
    gram = (m / w) @ m.T
    mult, residuals, rank, _ = np.linalg.lstsq(gram, y, rcond=None)
    if rank < design.n:
        resid = float(np.linalg.norm(gram @ mult - y))
        if resid > 1e-8 * max(float(np.linalg.norm(y)), 1.0):
            raise RankDeficient(
                f"constraints inconsistent: rank {rank} < n {design.n}, "
                f"residual {resid:.3e}"
            )
    coeffs = (m.T @ mult) / w
    return EstimatorCoefficients(coeffs=coeffs, truncation=n_modes, gamma=0.0,
                                 seed=design.seed, n=design.n)


def penalized_objective(coeffs, design, profile, y, gamma,
                        block_width=BLOCK_WIDTH):
    """(1/n) sum_j (sum_i c_i p_i sqrt(lambda_i) psi_i(x_j) - y_j)^2
    + gamma * sum_i lambda_i^(1-beta) c_i^2."""
    n_modes = coeffs.shape[0]
    pred = np.zeros(design.n)
    norm_sq = 0.0
    for lo, hi in _range_blocks(1, n_modes, block_width):
        feats = fourier_basis.feature_block(design, lo, hi)
        lam, _ = spectral_problem.spectrum_arrays(profile, lo, hi)
        seg = coeffs[lo - 1:hi]
        pred += feats @ (seg * signal_scale(profile, lo, hi))
        norm_sq += float(np.sum(lam ** (1.0 - profile.bias) * seg ** 2))
    data_term = float(np.mean((pred - y) ** 2))
    return data_term + gamma * norm_sq


def predictions(coeffs, design, profile, block_width=BLOCK_WIDTH):
    """Forward observations of a coefficient vector at the design points."""
    n_modes = coeffs.shape[0]
    pred = np.zeros(design.n)
    for lo, hi in _range_blocks(1, n_modes, block_width):
        feats = fourier_basis.feature_block(design, lo, hi)
        pred += feats @ (coeffs[lo - 1:hi] * signal_scale(profile, lo, hi))
    return pred
