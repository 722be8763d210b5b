"""Signals, Gaussian sensing ensembles, and sparsely corrupted magnitudes.

The measurement model is ``b_i = |<a_i, x0>| + eta_i`` with rows ``a_i``
drawn i.i.d. standard normal and ``eta`` supported on at most
``floor(fraction * m)`` adversarially chosen entries.  Four corruption
models are provided; all keep the corrupted magnitudes nonnegative (real
magnitude data cannot go below zero, and clipping does not weaken the
adversary: eta_i = -b_clean_i is already the extreme under-report).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

CORRUPTION_MODELS = (
    "shrink_to_zero",
    "inflate_positive",
    "mixed_random",
    "worst_support",
)


@dataclass(frozen=True)
class CorruptionSpec:
    """Sparse corruption description: fraction, adversary model, scale."""

    fraction: float
    model: str = "shrink_to_zero"
    magnitude_scale: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.fraction < 1.0:
            raise ValueError(f"corruption fraction must be in [0, 1), got {self.fraction}")
        if self.model not in CORRUPTION_MODELS:
            raise ValueError(f"unknown corruption model {self.model!r}; expected one of {CORRUPTION_MODELS}")
        if self.magnitude_scale <= 0.0:
            raise ValueError("magnitude_scale must be positive")

    def support_size(self, m: int) -> int:
        # floor(fraction * m); the epsilon absorbs float rounding like 0.3 * 10 = 2.999...
        return int(math.floor(self.fraction * m + 1e-9))


@dataclass(frozen=True)
class MeasurementSet:
    """One generated instance: sensing rows plus clean / corrupted magnitudes."""

    sensing: np.ndarray   # (m, n)
    b_clean: np.ndarray   # (m,) = |A x0|
    eta: np.ndarray       # (m,) corruption, zero off support
    b: np.ndarray         # (m,) = b_clean + eta, entrywise >= 0
    support: np.ndarray   # sorted corrupted indices, len <= floor(fraction*m)


def gen_signal(n: int, norm: float, rng: np.random.Generator) -> np.ndarray:
    """Uniformly random direction in R^n scaled to Euclidean norm ``norm``."""
    if n < 1:
        raise ValueError("signal length must be >= 1")
    if norm <= 0.0:
        raise ValueError("signal norm must be positive")
    v = rng.standard_normal(n)
    length = np.linalg.norm(v)
    while length == 0.0:  # probability-zero safeguard
        v = rng.standard_normal(n)
        length = np.linalg.norm(v)
    return v * (norm / length)


def gen_sensing(m: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """m x n matrix with independent standard normal entries."""
    if m < 1 or n < 1:
        raise ValueError("sensing matrix dimensions must be >= 1")
    return rng.standard_normal((m, n))


def clean_measurements(A: np.ndarray, x0: np.ndarray) -> np.ndarray:
    """Noiseless magnitudes |A x0|."""
    A = np.asarray(A, dtype=float)
    x0 = np.asarray(x0, dtype=float)
    if A.ndim != 2 or x0.ndim != 1 or A.shape[1] != x0.shape[0]:
        raise ValueError(f"dimension mismatch: A is {A.shape}, x0 has length {x0.shape}")
    return np.abs(A @ x0)


def apply_corruption(
    b_clean: np.ndarray,
    A: np.ndarray,
    x0: np.ndarray,
    spec: CorruptionSpec,
    rng: np.random.Generator,
):
    """Corrupt ``floor(fraction * m)`` magnitudes according to ``spec.model``.

    Returns ``(b, eta, support)`` with ``b = b_clean + eta`` exact, ``eta``
    zero off ``support`` and ``b >= 0`` entrywise.

    Models
    ------
    shrink_to_zero
        eta_i = -beta_i * b_clean_i with beta_i ~ U[0.5, 1]: under-reporting,
        the regime where an unpenalized feasible set collapses.
    inflate_positive
        eta_i = +magnitude_scale * ||x0||_2 * U[0.5, 1.5]: gross over-reports.
    mixed_random
        signs drawn at random with inflate-sized magnitudes; entries that
        would drive b below zero fall back to eta_i = -b_clean_i exactly.
    worst_support
        shrink_to_zero values placed on the largest clean magnitudes.

    Support selection is uniform without replacement except worst_support.
    """
    b_clean = np.asarray(b_clean, dtype=float)
    m = b_clean.shape[0]
    k = spec.support_size(m)

    eta = np.zeros(m)
    if k == 0:
        return b_clean.copy(), eta, np.empty(0, dtype=int)

    if spec.model == "worst_support":
        support = np.sort(np.argsort(b_clean, kind="stable")[m - k:])
    else:
        support = np.sort(rng.choice(m, size=k, replace=False))

    x0_norm = float(np.linalg.norm(x0))
    if spec.model in ("shrink_to_zero", "worst_support"):
        beta = rng.uniform(0.5, 1.0, size=k)
        eta[support] = -beta * b_clean[support]
    elif spec.model == "inflate_positive":
        eta[support] = spec.magnitude_scale * x0_norm * rng.uniform(0.5, 1.5, size=k)
    else:  # mixed_random
        signs = rng.integers(0, 2, size=k) * 2 - 1
        magnitudes = spec.magnitude_scale * x0_norm * rng.uniform(0.5, 1.5, size=k)
        raw = signs * magnitudes
        # clip by replacing the corruption with an exact full under-report,
        # so b_i = b_clean_i + (-b_clean_i) = 0 without rounding residue
        clipped = b_clean[support] + raw < 0.0
        raw[clipped] = -b_clean[support][clipped]
        eta[support] = raw

    b = b_clean + eta  # the defining identity; nonnegative for every model
    return b, eta, support


def build_measurement_set(
    A: np.ndarray,
    x0: np.ndarray,
    spec: CorruptionSpec,
    rng: np.random.Generator,
) -> MeasurementSet:
    """Assemble the full clean + corrupted bundle for one instance."""
    b_clean = clean_measurements(A, x0)
    b, eta, support = apply_corruption(b_clean, A, x0, spec, rng)
    return MeasurementSet(sensing=A, b_clean=b_clean, eta=eta, b=b, support=support)
