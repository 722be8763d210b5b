"""Anchor vectors: oracle perturbations and a median-truncated spectral start.

Recovery needs an anchor phi with ||phi - x0|| < 0.5 ||x0||.  Two sources
are provided: an oracle that perturbs the ground truth by an exact relative
amount (for controlled experiments), and a spectral initializer that works
from the corrupted measurements alone.  The initializer truncates by a
multiple of the median magnitude before forming the weighted covariance, so
a minority of grossly inflated measurements cannot steer the top
eigenvector; the returned direction carries an arbitrary sign.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


def _norm_cdf(x: float) -> float:
    return 0.5 * (1.0 + math.erf(x / math.sqrt(2.0)))


def _norm_quantile(p: float) -> float:
    """Inverse standard normal CDF by bisection (no external dependency)."""
    lo, hi = -12.0, 12.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if _norm_cdf(mid) < p:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


#: median of |N(0, 1)|; clean magnitudes satisfy median(b) = this * ||x0||
MEDIAN_ABS_GAUSSIAN = _norm_quantile(0.75)


def oracle_anchor(x0: np.ndarray, rel_err: float, rng: np.random.Generator) -> np.ndarray:
    """x0 plus a random perturbation of exact relative size ``rel_err``.

    ``rel_err`` must stay below 0.5: beyond that the anchor no longer
    certifies recovery and the request is rejected.
    """
    if not 0.0 <= rel_err < 0.5:
        raise ValueError(f"anchor relative error must be in [0, 0.5), got {rel_err}")
    x0 = np.asarray(x0, dtype=float)
    u = rng.standard_normal(x0.shape[0])
    u /= np.linalg.norm(u)
    return x0 + rel_err * np.linalg.norm(x0) * u


def norm_estimate(b: np.ndarray) -> float:
    """Median-based estimate of ||x0||_2 from magnitude measurements.

    Clean entries are |N(0, ||x0||^2)| draws, whose median is
    ``MEDIAN_ABS_GAUSSIAN * ||x0||``; the sample median tolerates any
    corrupted fraction below one half.
    """
    b = np.asarray(b, dtype=float)
    if b.size == 0:
        raise ValueError("norm estimate needs at least one measurement")
    med = float(np.median(b))
    if med <= 0.0:
        raise ValueError("norm estimate undefined: median of measurements is not positive")
    return med / MEDIAN_ABS_GAUSSIAN


class PowerIterationError(RuntimeError):
    """Power iteration missed the requested tolerance; carries the last iterate."""

    def __init__(self, result: "PowerIterationResult"):
        super().__init__(
            f"power iteration did not converge in {result.iterations} iterations "
            f"(residual {result.residual:.3e})"
        )
        self.result = result


@dataclass
class PowerIterationResult:
    vector: np.ndarray
    eigenvalue: float
    iterations: int
    residual: float
    converged: bool


def power_iteration(
    M: np.ndarray,
    tol: float = 1e-8,
    max_iters: int = 1000,
    rng: np.random.Generator | None = None,
) -> PowerIterationResult:
    """Dominant eigenpair of a symmetric matrix from a seeded random start.

    Convergence is declared when ||M v - lam v|| <= tol * ||M||_F.  On a
    tiny spectral gap the loop may exhaust ``max_iters``; the result then
    reports ``converged=False`` with the last iterate so callers can decide.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("power iteration needs a square matrix")
    if not np.allclose(M, M.T, atol=1e-10 * (1.0 + np.abs(M).max())):
        raise ValueError("power iteration needs a symmetric matrix")
    if rng is None:
        rng = np.random.default_rng(0)
    scale = float(np.linalg.norm(M))
    v = rng.standard_normal(M.shape[0])
    v /= np.linalg.norm(v)
    lam = 0.0
    residual = float("inf")
    for it in range(1, max_iters + 1):
        w = M @ v
        lam = float(v @ w)
        residual = float(np.linalg.norm(w - lam * v))
        if residual <= tol * scale:
            return PowerIterationResult(v, lam, it, residual, True)
        norm_w = np.linalg.norm(w)
        if norm_w == 0.0:
            return PowerIterationResult(v, 0.0, it, 0.0, True)
        v = w / norm_w
    return PowerIterationResult(v, lam, max_iters, residual, False)


def spectral_init(
    A: np.ndarray,
    b: np.ndarray,
    truncation_factor: float = 3.0,
    power_iters: int = 1000,
    rng: np.random.Generator | None = None,
) -> np.ndarray:
    """Median-truncated spectral anchor from measurements alone.

    Forms Y = (1/m) sum over {i : b_i <= truncation_factor * median(b)} of
    b_i^2 a_i a_i^T, takes its top eigenvector by power iteration, and
    scales it to :func:`norm_estimate`.  The sign of the output is
    arbitrary; callers that care about orientation should compare against
    both signs.  Raises :class:`PowerIterationError` when the eigensolve
    does not converge within ``power_iters``.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    m, n = A.shape
    if m < n:
        raise ValueError(f"spectral initializer needs m >= n, got m={m}, n={n}")
    if b.shape != (m,):
        raise ValueError("measurement vector length must match the sensing rows")
    keep = b <= truncation_factor * np.median(b)
    kept = A[keep]
    Y = (kept.T * b[keep] ** 2) @ kept / m
    result = power_iteration(Y, tol=1e-8, max_iters=power_iters,
                             rng=rng if rng is not None else np.random.default_rng(0))
    if not result.converged:
        raise PowerIterationError(result)
    return result.vector * norm_estimate(b)
