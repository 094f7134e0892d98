"""Closed-form kernels and determinantal correlation functions.

Two translation-invariant kernels are provided: the sine kernel
q(u) = sin(pi u)/(pi u) and the finite-n circular kernel
s_n(u) = (1/2pi) sin(n u/2)/sin(u/2), together with the k-point
correlation functions obtained as determinants of the corresponding
kernel matrices, the constant Poisson reference, and the Hadamard
determinant bound.

All functions here are pure; they hold no state and are safe to call
from any number of threads.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import CapacityError

TWO_PI = 2.0 * math.pi

# Below this argument magnitude both kernels switch to a 2-term Taylor
# expansion; direct evaluation of sin(x)/x loses no precision much
# earlier, but the fixed switch point keeps the error monotone near 0.
TAYLOR_CUTOFF = 1e-8

# Correlation order cap. Determinants stay cheap far beyond this, but
# empirical estimators cannot reach k much above 3 at desk scale, so
# larger orders only burn CPU in property sweeps.
DEFAULT_K_CAP = 8

# Per-order tolerance for round-off negatives out of the determinant.
DET_CLAMP_PER_ORDER = 1e-10


def _check_finite(name, arr):
    if not np.all(np.isfinite(arr)):
        raise ValueError("%s: argument must be finite" % name)


def sine_q(u):
    """Sine kernel q(u) = sin(pi u)/(pi u), with q(0) = 1.

    Accepts a scalar or an ndarray; returns the same shape. |q| <= 1.
    """
    arr = np.asarray(u, dtype=float)
    _check_finite("sine_q", arr)
    x = np.pi * arr
    small = np.abs(arr) < TAYLOR_CUTOFF
    safe = np.where(small, 1.0, x)
    out = np.where(small, 1.0 - x * x / 6.0, np.sin(safe) / safe)
    if np.ndim(u) == 0:
        return float(out)
    return out


def _reduce_to_pi_arr(arr):
    r = arr - TWO_PI * np.floor(arr / TWO_PI)
    r = np.where(r >= TWO_PI, 0.0, r)
    return np.where(r > np.pi, r - TWO_PI, r)


def reduce_to_pi(u):
    """Reduce an angle (or array) mod 2pi into (-pi, pi]."""
    arr = np.asarray(u, dtype=float)
    r = _reduce_to_pi_arr(arr)
    if np.ndim(u) == 0:
        return float(r)
    return r


def cue_s(n, u):
    """Finite-n circular kernel s_n(u) = (1/2pi) sin(n u/2)/sin(u/2).

    The argument is reduced mod 2pi into (-pi, pi] first, so u = 0 is
    the only singular point; there the kernel takes its limit n/(2pi).
    Satisfies |(2pi/n) s_n(u)| <= 1 for all u. Scalar or ndarray.
    """
    n = int(n)
    if n < 1:
        raise ValueError("cue_s: n must be >= 1")
    arr = np.asarray(u, dtype=float)
    _check_finite("cue_s", arr)
    r = _reduce_to_pi_arr(arr)
    small = np.abs(r) < TAYLOR_CUTOFF
    safe = np.where(small, 1.0, r)
    direct = np.sin(0.5 * n * safe) / np.sin(0.5 * safe)
    taylor = n * (1.0 - (n * n - 1.0) * r * r / 24.0)
    out = np.where(small, taylor, direct) / TWO_PI
    if np.ndim(u) == 0:
        return float(out)
    return out


def _det_clamped(mat, k):
    # LU determinant; tiny negatives are round-off on a PSD kernel matrix.
    det = float(np.linalg.det(mat))
    eps = DET_CLAMP_PER_ORDER * k
    if det < -eps:
        raise ValueError(
            "correlation determinant %.3e below round-off tolerance -%.3e" % (det, eps)
        )
    return 0.0 if det < 0.0 else det


def rho_sine(points, cap=DEFAULT_K_CAP):
    """k-point correlation of the sine process: det[q(x_i - x_j)].

    Nonnegative up to determinant round-off; tiny negatives clamp to 0.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 1 or pts.size < 1:
        raise ValueError("rho_sine: points must be a nonempty 1-d sequence")
    _check_finite("rho_sine", pts)
    k = pts.size
    if k > cap:
        raise CapacityError("rho_sine: order %d exceeds cap %d" % (k, cap))
    mat = sine_q(np.subtract.outer(pts, pts))
    return _det_clamped(np.atleast_2d(mat), k)


def rho_cue(n, points, cap=DEFAULT_K_CAP):
    """k-point correlation of the n-point circular process: det[s_n(x_i - x_j)].

    Requires k <= n: orders beyond the point count are identically zero
    and are rejected rather than silently returned.
    """
    n = int(n)
    if n < 1:
        raise ValueError("rho_cue: n must be >= 1")
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 1 or pts.size < 1:
        raise ValueError("rho_cue: points must be a nonempty 1-d sequence")
    _check_finite("rho_cue", pts)
    k = pts.size
    if k > cap:
        raise CapacityError("rho_cue: order %d exceeds cap %d" % (k, cap))
    if k > n:
        raise ValueError("rho_cue: order k=%d exceeds point count n=%d" % (k, n))
    diff = np.subtract.outer(pts, pts)
    mat = cue_s(n, diff)
    if n % 2 == 0:
        # sin(n u/2)/sin(u/2) is antiperiodic under u -> u + 2pi when n
        # is even, so the reduced evaluation must carry the parity of
        # the winding count to reproduce the raw-difference determinant.
        winding = np.rint((diff - _reduce_to_pi_arr(diff)) / TWO_PI)
        mat = mat * np.where(winding % 2 == 0, 1.0, -1.0)
    return _det_clamped(np.atleast_2d(mat), k)


def hadamard_bound(k, n):
    """Hadamard bound k^(k/2) n^k / (2pi)^k on the k-point circular correlation."""
    k = int(k)
    n = int(n)
    if k < 1 or n < 1:
        raise ValueError("hadamard_bound: k and n must be >= 1")
    return float(k) ** (0.5 * k) * (n / TWO_PI) ** k


def rho_poisson(k):
    """k-point correlation of the unit-intensity Poisson process: identically 1."""
    k = int(k)
    if k < 1:
        raise ValueError("rho_poisson: k must be >= 1")
    return 1.0
