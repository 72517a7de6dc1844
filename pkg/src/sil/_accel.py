"""Hot numeric kernels: numba-jitted with a pure-numpy fallback.

The backend is chosen once at import time from the SIL_BACKEND environment
variable: "numba" (require numba), "numpy" (force the fallback), or "auto"
(default: numba when importable).  Both paths produce bit-comparable output
up to floating-point associativity; tests and the benchmark in
benchmarks/bench_backends.py exercise both.
"""

import os
import warnings

import numpy as np

_SQRT2 = np.sqrt(2.0)
_TWO_PI = 2.0 * np.pi

_requested = os.environ.get("SIL_BACKEND", "auto").strip().lower()
if _requested not in ("auto", "numba", "numpy"):
    warnings.warn(f"unknown SIL_BACKEND={_requested!r}, using 'auto'")
    _requested = "auto"

HAS_NUMBA = False
if _requested != "numpy":
    try:
        from numba import njit

        HAS_NUMBA = True
    except ImportError:
        if _requested == "numba":
            raise
        HAS_NUMBA = False

BACKEND = "numba" if HAS_NUMBA else "numpy"


def _fourier_block_np(points, i_lo, i_hi):
    """Eigenfunction values psi_i(x_j) for i in [i_lo, i_hi], an (n, width) block.

    Index convention: psi_1 = 1, psi_{2m} = sqrt(2) cos(2 pi m x),
    psi_{2m+1} = sqrt(2) sin(2 pi m x).
    """
    idx = np.arange(i_lo, i_hi + 1)
    freq = idx // 2
    ang = _TWO_PI * points[:, None] * freq[None, :]
    out = np.empty((points.size, idx.size))
    even = (idx % 2 == 0)
    out[:, even] = _SQRT2 * np.cos(ang[:, even])
    odd = ~even
    out[:, odd] = _SQRT2 * np.sin(ang[:, odd])
    if i_lo == 1:
        out[:, 0] = 1.0
    return out


def _sum_modes_np(points, coeffs, i_lo):
    """sum_i coeffs[i] * psi_{i_lo + i}(x_j) without materialising the block."""
    return _fourier_block_np(points, i_lo, i_lo + coeffs.size - 1) @ coeffs


if HAS_NUMBA:

    @njit(cache=True, nogil=True)
    def _fourier_block_nb(points, i_lo, i_hi):  # pragma: no cover - jitted
        n = points.size
        width = i_hi - i_lo + 1
        out = np.empty((n, width))
        for j in range(n):
            base = _TWO_PI * points[j]
            for t in range(width):
                i = i_lo + t
                if i == 1:
                    out[j, t] = 1.0
                else:
                    ang = base * (i // 2)
                    if i % 2 == 0:
                        out[j, t] = _SQRT2 * np.cos(ang)
                    else:
                        out[j, t] = _SQRT2 * np.sin(ang)
        return out

    @njit(cache=True, nogil=True)
    def _sum_modes_nb(points, coeffs, i_lo):  # pragma: no cover - jitted
        n = points.size
        out = np.zeros(n)
        for j in range(n):
            base = _TWO_PI * points[j]
            acc = 0.0
            for t in range(coeffs.size):
                i = i_lo + t
                if i == 1:
                    acc += coeffs[t]
                else:
                    ang = base * (i // 2)
                    if i % 2 == 0:
                        acc += coeffs[t] * _SQRT2 * np.cos(ang)
                    else:
                        acc += coeffs[t] * _SQRT2 * np.sin(ang)
            out[j] = acc
        return out

    fourier_block = _fourier_block_nb
    sum_modes = _sum_modes_nb
else:
    fourier_block = _fourier_block_np
    sum_modes = _sum_modes_np
