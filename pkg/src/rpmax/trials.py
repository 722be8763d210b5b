"""Seeded recovery trials and phase-transition sweeps.

A trial is fully determined by its configuration and seed: generate the
signal and sensing matrix, corrupt the magnitudes, build the anchor, solve,
and score the result.  A sweep runs a cartesian grid of cells (measurement
ratio x corruption fraction x anchor error x penalty multiplier) with
per-trial seeds derived by a stable hash, executes trials in a process
pool, and writes one data row per trial plus a per-cell summary, in
deterministic order regardless of completion order.

Wall-clock time is recorded on each TrialResult but deliberately kept out
of the CSV files so identical runs produce identical bytes.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from . import fileio
from .anchor import PowerIterationError, oracle_anchor, spectral_init
from .measurements import CorruptionSpec, apply_corruption, clean_measurements, gen_sensing, gen_signal
from .phasemax import DEFAULT_SUCCESS_TOL, RPMConfig, solve_rpm, verify_feasibility_of_truth
from .seeding import cell_seed, trial_streams

ANCHOR_MODES = ("oracle", "spectral")

INIT_FAILED = "init_failed"


@dataclass(frozen=True)
class TrialConfig:
    """Everything one recovery experiment needs, seed included."""

    n: int
    m: int
    corruption: CorruptionSpec
    rpm: RPMConfig
    seed: int
    anchor_mode: str = "oracle"
    anchor_param: float = 0.3       # oracle: relative error; spectral: truncation factor
    success_tol: float = DEFAULT_SUCCESS_TOL
    signal_norm: float = 1.0
    power_iters: int = 1000

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise ValueError("n and m must be >= 1")
        if self.anchor_mode not in ANCHOR_MODES:
            raise ValueError(f"unknown anchor mode {self.anchor_mode!r}")
        if self.success_tol <= 0.0:
            raise ValueError("success_tol must be positive")


@dataclass(frozen=True)
class TrialResult:
    """Flat record of one trial; scalar fields only so rows pickle cheaply."""

    n: int
    m: int
    delta: float
    model: str
    anchor_mode: str
    anchor_param: float
    lambda_mode: str
    kappa: float
    seed: int
    status: str
    rel_err_signed: float
    rel_err_sym: float
    slack_residual: float
    success: bool
    lp_iterations: int
    runtime_ms: float


def run_trial(cfg: TrialConfig) -> TrialResult:
    """Generate, corrupt, anchor, solve, and score one seeded instance."""
    start = time.perf_counter()
    streams = trial_streams(cfg.seed)
    x0 = gen_signal(cfg.n, cfg.signal_norm, streams.signal)
    A = gen_sensing(cfg.m, cfg.n, streams.sensing)
    b_clean = clean_measurements(A, x0)
    b, eta, _ = apply_corruption(b_clean, A, x0, cfg.corruption, streams.corruption)
    assert verify_feasibility_of_truth(A, b, x0, eta)

    kappa = cfg.rpm.kappa if cfg.rpm.lambda_mode != "explicit" else float("nan")
    base = dict(
        n=cfg.n, m=cfg.m, delta=cfg.corruption.fraction, model=cfg.corruption.model,
        anchor_mode=cfg.anchor_mode, anchor_param=cfg.anchor_param,
        lambda_mode=cfg.rpm.lambda_mode, kappa=kappa, seed=cfg.seed,
    )

    if cfg.anchor_mode == "oracle":
        phi = oracle_anchor(x0, cfg.anchor_param, streams.anchor)
    else:
        try:
            phi = spectral_init(A, b, truncation_factor=cfg.anchor_param,
                                power_iters=cfg.power_iters, rng=streams.anchor)
        except PowerIterationError:
            runtime_ms = (time.perf_counter() - start) * 1000.0
            return TrialResult(**base, status=INIT_FAILED,
                               rel_err_signed=float("nan"), rel_err_sym=float("nan"),
                               slack_residual=float("nan"), success=False,
                               lp_iterations=0, runtime_ms=runtime_ms)

    report = solve_rpm(A, b, phi, cfg.rpm, x0=x0, eta=eta,
                       success_tol=cfg.success_tol,
                       symmetric_success=(cfg.anchor_mode == "spectral"))
    runtime_ms = (time.perf_counter() - start) * 1000.0

    def _metric(value: Optional[float]) -> float:
        return float("nan") if value is None else float(value)

    return TrialResult(
        **base,
        status=report.solver_status.value,
        rel_err_signed=_metric(report.rel_err_signed),
        rel_err_sym=_metric(report.rel_err_sym),
        slack_residual=_metric(report.slack_residual),
        success=bool(report.success),
        lp_iterations=report.iterations,
        runtime_ms=runtime_ms,
    )


# ---------------------------------------------------------------------------
# sweeps

@dataclass(frozen=True)
class SweepGrid:
    """Cartesian experiment grid; one cell per parameter combination."""

    n: int
    m_over_n: tuple[float, ...]
    deltas: tuple[float, ...]
    anchor_rel_errs: tuple[float, ...]
    kappas: tuple[float, ...]
    trials: int
    base_seed: int
    model: str = "shrink_to_zero"
    magnitude_scale: float = 1.0
    success_tol: float = DEFAULT_SUCCESS_TOL
    formulation: str = "nonneg_slack"

    def __post_init__(self):
        if not (self.m_over_n and self.deltas and self.anchor_rel_errs and self.kappas):
            raise ValueError("sweep grid must be non-empty on every axis")
        if self.trials < 1:
            raise ValueError("need at least one trial per cell")

    def cells(self) -> list[dict]:
        out = []
        index = 0
        for ratio in self.m_over_n:
            for delta in self.deltas:
                for rel_err in self.anchor_rel_errs:
                    for kappa in self.kappas:
                        out.append(dict(index=index, m_over_n=ratio, delta=delta,
                                        anchor_rel_err=rel_err, kappa=kappa))
                        index += 1
        return out

    def trial_config(self, cell: dict, trial_index: int) -> TrialConfig:
        m = int(round(cell["m_over_n"] * self.n))
        rpm = RPMConfig(lambda_mode="auto", kappa=cell["kappa"], formulation=self.formulation)
        return TrialConfig(
            n=self.n,
            m=m,
            corruption=CorruptionSpec(cell["delta"], self.model, self.magnitude_scale),
            rpm=rpm,
            seed=cell_seed(self.base_seed, cell["index"], trial_index),
            anchor_mode="oracle",
            anchor_param=cell["anchor_rel_err"],
            success_tol=self.success_tol,
        )


DATA_HEADER = [
    "n", "m", "delta", "model", "anchor_mode", "anchor_err", "lambda_mode",
    "kappa", "seed", "status", "rel_err_signed", "rel_err_sym",
    "slack_residual", "success", "lp_iterations",
]

SUMMARY_HEADER = [
    "n", "m", "m_over_n", "delta", "model", "anchor_mode", "anchor_err",
    "lambda_mode", "kappa", "trials", "successes", "success_rate",
]


def result_row(r: TrialResult) -> list[str]:
    return [
        str(r.n), str(r.m), repr(float(r.delta)), r.model, r.anchor_mode,
        repr(float(r.anchor_param)), r.lambda_mode, repr(float(r.kappa)),
        str(r.seed), r.status, repr(float(r.rel_err_signed)),
        repr(float(r.rel_err_sym)), repr(float(r.slack_residual)),
        "true" if r.success else "false", str(r.lp_iterations),
    ]


def parse_result_row(row: dict) -> TrialResult:
    """Inverse of :func:`result_row` over a DictReader row (runtime is not
    serialized and reads back as nan)."""
    return TrialResult(
        n=int(row["n"]), m=int(row["m"]), delta=float(row["delta"]),
        model=row["model"], anchor_mode=row["anchor_mode"],
        anchor_param=float(row["anchor_err"]), lambda_mode=row["lambda_mode"],
        kappa=float(row["kappa"]), seed=int(row["seed"]), status=row["status"],
        rel_err_signed=float(row["rel_err_signed"]),
        rel_err_sym=float(row["rel_err_sym"]),
        slack_residual=float(row["slack_residual"]),
        success=row["success"] == "true",
        lp_iterations=int(row["lp_iterations"]),
        runtime_ms=float("nan"),
    )


def worker_count(requested: Optional[int] = None) -> int:
    """Worker pool size: explicit request, else RPM_THREADS, else cpu count."""
    if requested is not None:
        return max(1, requested)
    env = os.environ.get("RPM_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError as exc:
            raise ValueError(f"RPM_THREADS must be an integer, got {env!r}") from exc
    return os.cpu_count() or 1


def run_trials_parallel(configs: list[TrialConfig], workers: Optional[int] = None) -> list[TrialResult]:
    """Run trials across a process pool, results in input order."""
    count = min(worker_count(workers), len(configs))
    if count <= 1 or len(configs) <= 2:
        return [run_trial(cfg) for cfg in configs]
    with ProcessPoolExecutor(max_workers=count) as pool:
        return list(pool.map(run_trial, configs, chunksize=max(1, len(configs) // (4 * count))))


def run_sweep(grid: SweepGrid, out_dir, workers: Optional[int] = None):
    """Run the grid and write ``trials.csv`` and ``summary.csv``.

    Returns (data_path, summary_path, results).  Rows are emitted in
    (cell, trial) order; per-trial seeds depend only on (base_seed, cell,
    trial), so any subset of the grid reproduces in isolation.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    cells = grid.cells()
    configs = [grid.trial_config(cell, t) for cell in cells for t in range(grid.trials)]
    results = run_trials_parallel(configs, workers)

    data_path = out_dir / "trials.csv"
    fileio.write_csv_rows(data_path, DATA_HEADER, [result_row(r) for r in results])

    summary_rows = []
    for i, cell in enumerate(cells):
        block = results[i * grid.trials:(i + 1) * grid.trials]
        successes = sum(r.success for r in block)
        first = block[0]
        summary_rows.append([
            str(first.n), str(first.m), repr(float(cell["m_over_n"])),
            repr(float(first.delta)), first.model, first.anchor_mode,
            repr(float(first.anchor_param)), first.lambda_mode,
            repr(float(first.kappa)), str(grid.trials), str(successes),
            repr(successes / grid.trials),
        ])
    summary_path = out_dir / "summary.csv"
    fileio.write_csv_rows(summary_path, SUMMARY_HEADER, summary_rows)
    return data_path, summary_path, results


def success_rate(results: list[TrialResult]) -> float:
    return sum(r.success for r in results) / len(results)
