"""Assembly and solution of the slack-penalized anchored recovery program.

The primary program maximizes <phi, x> - lambda * sum(e) subject to
-b_i - e_i <= <a_i, x> <= b_i + e_i and e_i >= 0.  Under the recovery
conditions its unique maximizer is (x0, -eta^-) with eta^- = min(eta, 0):
the slacks repair exactly the under-reported measurements.  Two equivalent
variants are provided: an l1-penalized form with free slacks (linearized by
a positive/negative split), and the unpenalized baseline with e fixed to
zero, whose feasible set collapses under under-reporting.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .anchor import norm_estimate
from .lp import LPProblem, LPStatus, solve_lp

FORMULATIONS = ("nonneg_slack", "l1_split", "plain_phasemax")
LAMBDA_MODES = ("explicit", "auto_seven", "auto_scaled", "auto")

#: lower endpoint of the certified penalty range, in units of ||x0||_2 / m
LAMBDA_FLOOR = 7.0

DEFAULT_SUCCESS_TOL = 1e-6


@dataclass(frozen=True)
class RPMConfig:
    """Penalty weight policy and formulation choice.

    ``auto_seven`` puts lambda at the certified floor 7 * norm_est(b) / m;
    ``auto_scaled`` uses kappa * norm_est(b) / m for a chosen kappa >= 7
    (larger multipliers stay inside the guarantee).  ``auto`` is the
    unvalidated experiment hook: the same formula with any kappa > 0, used
    by sweeps to probe below the certified floor.  ``explicit`` takes
    lambda as given.
    """

    lambda_mode: str = "auto_seven"
    lam: Optional[float] = None
    kappa: float = LAMBDA_FLOOR
    formulation: str = "nonneg_slack"

    def __post_init__(self):
        if self.lambda_mode not in LAMBDA_MODES:
            raise ValueError(f"unknown lambda mode {self.lambda_mode!r}")
        if self.formulation not in FORMULATIONS:
            raise ValueError(f"unknown formulation {self.formulation!r}")
        if self.lambda_mode == "explicit":
            if self.lam is None or self.lam <= 0.0:
                raise ValueError("explicit mode needs a positive lambda")
        elif self.lambda_mode == "auto_seven":
            if self.kappa != LAMBDA_FLOOR:
                raise ValueError("auto_seven fixes kappa = 7")
        elif self.lambda_mode == "auto_scaled":
            if self.kappa < LAMBDA_FLOOR:
                raise ValueError(f"auto_scaled requires kappa >= {LAMBDA_FLOOR}, got {self.kappa}")
        else:  # auto
            if self.kappa <= 0.0:
                raise ValueError("auto mode needs kappa > 0")

    @classmethod
    def explicit(cls, lam: float, formulation: str = "nonneg_slack") -> "RPMConfig":
        return cls(lambda_mode="explicit", lam=lam, formulation=formulation)

    @classmethod
    def auto_seven(cls, formulation: str = "nonneg_slack") -> "RPMConfig":
        return cls(lambda_mode="auto_seven", formulation=formulation)

    @classmethod
    def auto_scaled(cls, kappa: float, formulation: str = "nonneg_slack") -> "RPMConfig":
        return cls(lambda_mode="auto_scaled", kappa=kappa, formulation=formulation)

    def resolve_lambda(self, b: np.ndarray) -> float:
        if self.lambda_mode == "explicit":
            return float(self.lam)
        return self.kappa * norm_estimate(b) / b.shape[0]


@dataclass
class RecoveryReport:
    """Solver output plus error metrics when the ground truth is supplied."""

    x_hat: Optional[np.ndarray]
    e_hat: Optional[np.ndarray]
    solver_status: LPStatus
    iterations: int
    runtime_s: float
    lam: float
    rel_err_signed: Optional[float] = None
    rel_err_sym: Optional[float] = None
    slack_residual: Optional[float] = None
    success: bool = False


def _validate_instance(A, b, phi, lam=1.0):
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    phi = np.asarray(phi, dtype=float)
    if A.ndim != 2:
        raise ValueError("sensing matrix must be 2-D")
    m, n = A.shape
    if m < 1 or n < 1:
        raise ValueError("measurement set must be non-empty")
    if b.shape != (m,) or phi.shape != (n,):
        raise ValueError(f"dimension mismatch: A {A.shape}, b {b.shape}, phi {phi.shape}")
    if np.any(b < 0):
        raise ValueError("magnitude measurements must be nonnegative")
    if lam <= 0.0:
        raise ValueError("penalty weight lambda must be positive")
    return A, b, phi


def build_rpm(A: np.ndarray, b: np.ndarray, phi: np.ndarray, lam: float) -> LPProblem:
    """Slack-penalized program over z = (x free, e >= 0).

    Objective (phi, -lam * 1); rows <a_i, x> - e_i <= b_i and
    -<a_i, x> - e_i <= b_i.
    """
    A, b, phi = _validate_instance(A, b, phi, lam)
    m, n = A.shape
    eye = np.eye(m)
    G = np.block([[A, -eye], [-A, -eye]])
    h = np.concatenate([b, b])
    c = np.concatenate([phi, -lam * np.ones(m)])
    lower = np.concatenate([np.full(n, -np.inf), np.zeros(m)])
    return LPProblem(c=c, G=G, h=h, lower=lower)


def build_rpm_l1(A: np.ndarray, b: np.ndarray, phi: np.ndarray, lam: float) -> LPProblem:
    """l1-penalized variant with free slacks, split as e = p - q, p, q >= 0.

    Objective (phi, -lam * 1, -lam * 1); at any optimum min(p_i, q_i) = 0,
    so sum(p + q) equals ||e||_1 (and in fact q = 0: flipping a negative
    slack to zero stays feasible and strictly improves the objective).
    """
    A, b, phi = _validate_instance(A, b, phi, lam)
    m, n = A.shape
    eye = np.eye(m)
    G = np.block([[A, -eye, eye], [-A, -eye, eye]])
    h = np.concatenate([b, b])
    c = np.concatenate([phi, -lam * np.ones(2 * m)])
    lower = np.concatenate([np.full(n, -np.inf), np.zeros(2 * m)])
    return LPProblem(c=c, G=G, h=h, lower=lower)


def build_plain_phasemax(A: np.ndarray, b: np.ndarray, phi: np.ndarray) -> LPProblem:
    """Unpenalized baseline: maximize <phi, x> with e fixed to zero."""
    A, b, phi = _validate_instance(A, b, phi)
    G = np.vstack([A, -A])
    h = np.concatenate([b, b])
    return LPProblem(c=phi.copy(), G=G, h=h, lower=np.full(A.shape[1], -np.inf))


def recovery_metrics(x_hat: np.ndarray, x0: np.ndarray):
    """(signed, sign-symmetric) relative errors of an estimate against x0."""
    x_hat = np.asarray(x_hat, dtype=float)
    x0 = np.asarray(x0, dtype=float)
    scale = np.linalg.norm(x0)
    if scale == 0.0:
        raise ValueError("relative error undefined for a zero ground truth")
    signed = float(np.linalg.norm(x_hat - x0) / scale)
    sym = float(min(np.linalg.norm(x_hat - x0), np.linalg.norm(x_hat + x0)) / scale)
    return signed, sym


def slack_check(e_hat: np.ndarray, eta: np.ndarray) -> float:
    """max_i |e_hat_i - max(-eta_i, 0)|: distance of the recovered slacks
    from the ideal pattern that repairs exactly the under-reports."""
    e_hat = np.asarray(e_hat, dtype=float)
    eta = np.asarray(eta, dtype=float)
    if e_hat.shape != eta.shape:
        raise ValueError("slack and corruption vectors must have equal length")
    return float(np.max(np.abs(e_hat - np.maximum(-eta, 0.0)), initial=0.0))


def verify_feasibility_of_truth(A, b, x0, eta) -> bool:
    """Check |<a_i, x0>| <= b_i + max(-eta_i, 0) for all i.

    Holds by construction whenever b = |A x0| + eta, so it serves as a
    harness assertion that an instance was assembled consistently.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    x0 = np.asarray(x0, dtype=float)
    eta = np.asarray(eta, dtype=float)
    lhs = np.abs(A @ x0)
    rhs = b + np.maximum(-eta, 0.0)
    return bool(np.all(lhs <= rhs + 1e-12 * np.maximum(1.0, rhs)))


def solve_rpm(
    A: np.ndarray,
    b: np.ndarray,
    phi: np.ndarray,
    config: RPMConfig,
    *,
    x0: Optional[np.ndarray] = None,
    eta: Optional[np.ndarray] = None,
    success_tol: float = DEFAULT_SUCCESS_TOL,
    symmetric_success: bool = False,
    max_iters: Optional[int] = None,
) -> RecoveryReport:
    """Solve the configured formulation and report recovery metrics.

    ``x0`` and ``eta``, when given, are used only to fill the error fields;
    the program itself is built from (A, b, phi, lambda) alone.  Success is
    judged on the signed error, or the sign-symmetric one when
    ``symmetric_success`` is set (spectral anchors carry a sign ambiguity).
    """
    A, b, phi = _validate_instance(A, b, phi)
    m, n = A.shape
    lam = config.resolve_lambda(b)
    if config.formulation == "nonneg_slack":
        prob = build_rpm(A, b, phi, lam)
    elif config.formulation == "l1_split":
        prob = build_rpm_l1(A, b, phi, lam)
    else:
        prob = build_plain_phasemax(A, b, phi)

    start = time.perf_counter()
    sol = solve_lp(prob, max_iters=max_iters)
    runtime = time.perf_counter() - start

    report = RecoveryReport(
        x_hat=None,
        e_hat=None,
        solver_status=sol.status,
        iterations=sol.iterations,
        runtime_s=runtime,
        lam=lam,
    )
    if sol.status is not LPStatus.OPTIMAL or sol.z is None:
        return report

    report.x_hat = sol.z[:n]
    if config.formulation == "nonneg_slack":
        report.e_hat = sol.z[n:]
    elif config.formulation == "l1_split":
        report.e_hat = sol.z[n:n + m] - sol.z[n + m:]
    else:
        report.e_hat = np.zeros(m)

    if x0 is not None:
        signed, sym = recovery_metrics(report.x_hat, x0)
        report.rel_err_signed = signed
        report.rel_err_sym = sym
        report.success = (sym if symmetric_success else signed) <= success_tol
        if eta is not None:
            report.slack_residual = slack_check(report.e_hat, eta)
    return report
