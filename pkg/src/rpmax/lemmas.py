"""Monte Carlo and closed-form checks of the concentration bounds.

The recovery guarantee rests on a handful of explicit numerical constants:
the truncated second moment alpha ~ 0.9707 and tail mass beta ~ 0.9973 of
a standard normal at cutoff 3, a 0.04 spectral-norm bound on the truncated
covariance deviation, lower bounds 0.59 / 0.55 / 0.597 on truncated
magnitude correlations, and the row-subset bound
(sqrt(4 + 2 log(1/delta)) + 2) * delta * m on adversarially selected l1
row sums.  Each verifier here estimates the corresponding quantity from
fresh Gaussian draws so the constants can be checked empirically, both in
the regime where they hold and in undersampled regimes where they break.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TRUNCATION = 3.0

#: exact value of 2 - 11 exp(-9/2), the radial integral of the disc-truncated
#: magnitude product
DISC_RADIAL = 2.0 - 11.0 * math.exp(-4.5)

OPERATOR_NORM_BOUND = 0.04
DIRECTION_MIN_BOUND = 0.55
FIXED_DIRECTION_BOUND = 0.59
EXPECTATION_BOUND = 0.597


def closed_form_disc(theta: float) -> float:
    """Exact disc-truncated expectation at angle theta between the two vectors.

    E[1{sqrt(a1^2 + a2^2) <= 3} |a1 (a1 cos t + a2 sin t)|]
      = ((2 - 11 e^{-9/2}) / pi) (|sin t| + arcsin(cos t) cos t),
    minimized over [0, pi] at t = pi/2.
    """
    if not 0.0 <= theta <= math.pi + 1e-12:
        raise ValueError(f"theta must lie in [0, pi], got {theta}")
    c = math.cos(theta)
    c = max(-1.0, min(1.0, c))
    return (DISC_RADIAL / math.pi) * (abs(math.sin(theta)) + math.asin(c) * c)


def mc_expectation_theta(theta: float, samples: int, rng: np.random.Generator):
    """Monte Carlo pair (box estimate, disc estimate) of the truncated product.

    box truncates by |a1| <= 3, disc by sqrt(a1^2 + a2^2) <= 3; the disc
    event implies the box event, so box >= disc up to sampling error.
    """
    if samples < 10_000:
        raise ValueError("need at least 1e4 samples for a meaningful estimate")
    a1 = rng.standard_normal(samples)
    a2 = rng.standard_normal(samples)
    product = np.abs(a1 * (a1 * math.cos(theta) + a2 * math.sin(theta)))
    box = product * (np.abs(a1) <= TRUNCATION)
    disc = product * (a1 * a1 + a2 * a2 <= TRUNCATION * TRUNCATION)
    return float(box.mean()), float(disc.mean())


def _norm_pdf(x: float) -> float:
    return math.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)


def truncated_moments():
    """(alpha, beta) = (E[z^2 1{|z|<=3}], P[|z| <= 3]) for z ~ N(0, 1).

    beta = erf(3 / sqrt(2)); integration by parts gives
    E[z^2 1{|z|<=c}] = P(|z|<=c) - 2 c pdf(c), so alpha = beta - 6 pdf(3).
    """
    beta = math.erf(TRUNCATION / math.sqrt(2.0))
    alpha = beta - 2.0 * TRUNCATION * _norm_pdf(TRUNCATION)
    return alpha, beta


def mc_operator_norm(
    n: int,
    m: int,
    x0: np.ndarray,
    trials: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """Spectral norms of (1/m) sum 1{|<a_i,x0>| <= 3||x0||} a_i a_i^T - I.

    One entry per trial, each on a fresh sensing matrix.  For x0 = 0 the
    indicator is identically one and this reduces to plain covariance
    concentration.
    """
    if m < n:
        raise ValueError("need m >= n")
    x0 = np.asarray(x0, dtype=float)
    cutoff = TRUNCATION * np.linalg.norm(x0)
    norms = np.empty(trials)
    eye = np.eye(n)
    for t in range(trials):
        A = rng.standard_normal((m, n))
        keep = np.abs(A @ x0) <= cutoff
        kept = A[keep]
        D = kept.T @ kept / m - eye
        norms[t] = float(np.max(np.abs(np.linalg.eigvalsh(D))))
    return norms


def truncated_correlation(A: np.ndarray, x0: np.ndarray, directions: np.ndarray) -> np.ndarray:
    """(1/m) sum 1{|<a_i,x0>| <= 3||x0||} |<a_i,x0>| |<a_i,x1>| per direction,
    normalized by ||x0|| ||x1||; ``directions`` is one unit vector per row."""
    A = np.asarray(A, dtype=float)
    x0 = np.asarray(x0, dtype=float)
    scale = np.linalg.norm(x0)
    proj = A @ x0
    weights = np.abs(proj) * (np.abs(proj) <= TRUNCATION * scale)
    vals = weights @ np.abs(A @ directions.T) / A.shape[0]
    return vals / scale


def mc_lower_bound(
    n: int,
    m: int,
    x0: np.ndarray,
    directions: int,
    trials: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """Per-trial minimum of the truncated correlation over sampled directions.

    Directions include ``directions`` random unit vectors plus the
    coordinate axes and the x0 direction itself.
    """
    if m < n:
        raise ValueError("need m >= n")
    x0 = np.asarray(x0, dtype=float)
    minima = np.empty(trials)
    for t in range(trials):
        A = rng.standard_normal((m, n))
        dirs = rng.standard_normal((directions, n))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        fixed = np.vstack([np.eye(n), x0 / np.linalg.norm(x0)])
        all_dirs = np.vstack([dirs, fixed])
        minima[t] = float(truncated_correlation(A, x0, all_dirs).min())
    return minima


def rowset_bound_constant(delta: float) -> float:
    """sqrt(4 + 2 log(1/delta)) + 2, the certified row-subset ratio bound."""
    if not 0.0 < delta <= 1.0:
        raise ValueError("delta must lie in (0, 1]")
    return math.sqrt(4.0 + 2.0 * math.log(1.0 / delta)) + 2.0


def rowset_ratio(A: np.ndarray, h: np.ndarray, delta: float) -> float:
    """||A_Omega h||_1 / (delta m ||h||_2) with Omega the adversarial
    support for this h: the floor(delta m) rows of largest |<a_i, h>|.
    Zero direction gives ratio zero."""
    A = np.asarray(A, dtype=float)
    h = np.asarray(h, dtype=float)
    scale = float(np.linalg.norm(h))
    if scale == 0.0:
        return 0.0
    m = A.shape[0]
    k = int(math.floor(delta * m + 1e-9))
    if k < 1:
        raise ValueError("support floor(delta * m) must be at least one row")
    proj = np.abs(A @ h)
    top = np.partition(proj, m - k)[m - k:]
    return float(top.sum() / (delta * m * scale))


def mc_l1_rowset_bound(
    n: int,
    m: int,
    delta: float,
    trials: int,
    rng: np.random.Generator,
) -> float:
    """Worst observed :func:`rowset_ratio` over trials.

    Per trial, h is a fresh random direction and the support greedily takes
    the floor(delta m) rows with the largest |<a_i, h>| -- the worst set
    for that h.  This probes a harder point than a random support, though a
    weaker one than the uniform-over-all-supports claim.
    """
    if m < n / delta:
        raise ValueError("need m >= n / delta")
    worst = 0.0
    for _ in range(trials):
        A = rng.standard_normal((m, n))
        h = rng.standard_normal(n)
        worst = max(worst, rowset_ratio(A, h, delta))
    return worst


# ---------------------------------------------------------------------------
# bundled check suite (shared by the CLI and the acceptance tests)

@dataclass
class LemmaCheck:
    name: str
    observed: float
    bound: float
    relation: str       # "<=" or ">="
    passed: bool
    detail: str = ""


def _check(name, observed, bound, relation, detail="") -> LemmaCheck:
    passed = observed <= bound if relation == "<=" else observed >= bound
    return LemmaCheck(name, float(observed), float(bound), relation, bool(passed), detail)


def run_lemma_checks(
    seed: int = 2024,
    *,
    grid_points: int = 32,
    mc_samples: int = 1_000_000,
    moment_samples: int = 10_000_000,
    opnorm_n: int = 20,
    opnorm_m: int = 100_000,
    opnorm_trials: int = 20,
    lower_n: int = 20,
    lower_m: int = 100_000,
    lower_directions: int = 64,
    lower_trials: int = 10,
    rowset_n: int = 10,
    rowset_m: int = 2000,
    rowset_delta: float = 0.05,
    rowset_trials: int = 50,
) -> list[LemmaCheck]:
    """Run every lemma verifier at its reference operating point."""
    root = np.random.SeedSequence(seed)
    rngs = [np.random.default_rng(s) for s in root.spawn(6)]
    checks: list[LemmaCheck] = []

    alpha, beta = truncated_moments()
    checks.append(_check("alpha_truncated_second_moment", abs(alpha - 0.9707), 5e-4, "<=",
                         f"alpha={alpha:.6f}"))
    checks.append(_check("beta_truncation_mass", abs(beta - 0.9973), 5e-4, "<=",
                         f"beta={beta:.6f}"))

    z = rngs[0].standard_normal(moment_samples)
    inside = np.abs(z) <= TRUNCATION
    alpha_mc = float(np.mean(z * z * inside))
    beta_mc = float(np.mean(inside))
    checks.append(_check("alpha_mc_crosscheck", abs(alpha_mc - alpha), 3e-3, "<=",
                         f"mc={alpha_mc:.6f}"))
    checks.append(_check("beta_mc_crosscheck", abs(beta_mc - beta), 3e-3, "<=",
                         f"mc={beta_mc:.6f}"))

    thetas = np.linspace(0.0, math.pi, grid_points)
    max_dev = 0.0
    min_disc = math.inf
    min_box_minus_disc = math.inf
    for theta in thetas:
        box, disc = mc_expectation_theta(float(theta), mc_samples, rngs[1])
        max_dev = max(max_dev, abs(disc - closed_form_disc(float(theta))))
        min_disc = min(min_disc, disc)
        min_box_minus_disc = min(min_box_minus_disc, box - disc)
    checks.append(_check("disc_mc_vs_closed_form", max_dev, 0.01, "<=",
                         f"{grid_points}-point grid"))
    checks.append(_check("disc_grid_minimum", min_disc, EXPECTATION_BOUND - 0.01, ">=",
                         f"bound {EXPECTATION_BOUND} - 0.01"))
    checks.append(_check("box_dominates_disc", min_box_minus_disc, -0.01, ">=",
                         "box >= disc up to MC error"))

    x0 = rngs[2].standard_normal(opnorm_n)
    norms = mc_operator_norm(opnorm_n, opnorm_m, x0, opnorm_trials, rngs[2])
    checks.append(_check("truncated_covariance_norm", float(norms.max()),
                         OPERATOR_NORM_BOUND, "<=",
                         f"n={opnorm_n}, m={opnorm_m}, {opnorm_trials} trials"))

    x0 = rngs[3].standard_normal(lower_n)
    minima = mc_lower_bound(lower_n, lower_m, x0, lower_directions, lower_trials, rngs[3])
    checks.append(_check("direction_minimum", float(minima.min()),
                         DIRECTION_MIN_BOUND, ">=",
                         f"n={lower_n}, m={lower_m}, {lower_directions} directions"))

    A = rngs[4].standard_normal((lower_m, lower_n))
    fixed = truncated_correlation(A, x0, (x0 / np.linalg.norm(x0))[None, :])
    checks.append(_check("fixed_direction_estimate", float(fixed[0]),
                         FIXED_DIRECTION_BOUND, ">=", "x1 = x0 direction"))

    ratio = mc_l1_rowset_bound(rowset_n, rowset_m, rowset_delta, rowset_trials, rngs[5])
    checks.append(_check("adversarial_rowset_ratio", ratio,
                         rowset_bound_constant(rowset_delta), "<=",
                         f"delta={rowset_delta}, m={rowset_m}, {rowset_trials} trials"))

    full = mc_l1_rowset_bound(rowset_n, rowset_m, 1.0, rowset_trials, rngs[5])
    checks.append(_check("full_matrix_l1_ratio", full, 3.0, "<=",
                         "delta=1 analog of the fixed-size bound with C=1"))
    return checks
