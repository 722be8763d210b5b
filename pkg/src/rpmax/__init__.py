"""Linear-programming phase retrieval robust to sparse magnitude corruptions.

Recovers a real signal x0 from measurements b_i = |<a_i, x0>| + eta_i by
maximizing <phi, x> - lambda * sum(e) over the slack-relaxed magnitude
constraints, where phi is an approximate anchor vector and eta is a sparse,
otherwise arbitrary corruption.  The package bundles the measurement and
anchor generators, a self-contained dense simplex solver with a
vertex-enumeration test oracle, Monte Carlo verifiers for the concentration
bounds that drive the recovery guarantee, and a seeded trial / sweep
harness with CSV and heatmap output.
"""

from .lp import LPProblem, LPSolution, LPStatus, brute_force_lp, check_feasible, solve_lp
from .measurements import (
    CorruptionSpec,
    MeasurementSet,
    apply_corruption,
    build_measurement_set,
    clean_measurements,
    gen_sensing,
    gen_signal,
)
from .anchor import (
    PowerIterationError,
    norm_estimate,
    oracle_anchor,
    power_iteration,
    spectral_init,
)
from .phasemax import (
    RecoveryReport,
    RPMConfig,
    build_plain_phasemax,
    build_rpm,
    build_rpm_l1,
    recovery_metrics,
    slack_check,
    solve_rpm,
    verify_feasibility_of_truth,
)
from .trials import SweepGrid, TrialConfig, TrialResult, run_sweep, run_trial

__version__ = "0.1.0"

__all__ = [
    "CorruptionSpec",
    "LPProblem",
    "LPSolution",
    "LPStatus",
    "MeasurementSet",
    "PowerIterationError",
    "RPMConfig",
    "RecoveryReport",
    "SweepGrid",
    "TrialConfig",
    "TrialResult",
    "apply_corruption",
    "brute_force_lp",
    "build_measurement_set",
    "build_plain_phasemax",
    "build_rpm",
    "build_rpm_l1",
    "check_feasible",
    "clean_measurements",
    "gen_sensing",
    "gen_signal",
    "norm_estimate",
    "oracle_anchor",
    "power_iteration",
    "recovery_metrics",
    "run_sweep",
    "run_trial",
    "slack_check",
    "solve_lp",
    "solve_rpm",
    "spectral_init",
    "verify_feasibility_of_truth",
]
