"""Command-line front end.

Subcommands:
  solve          solve one instance from CSV files (A, b, phi)
  simulate       run one seeded synthetic trial
  sweep          run a seeded experiment grid, write trials.csv + summary.csv
  verify-lemmas  check every concentration constant, exit nonzero on failure
  heatmap        render a success-rate heatmap from a sweep summary

Exit codes: 0 on success, 1 on failed verification or solver failure,
2 on configuration errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import fileio
from .lemmas import run_lemma_checks
from .measurements import CORRUPTION_MODELS, CorruptionSpec
from .phasemax import FORMULATIONS, RPMConfig, build_plain_phasemax, build_rpm, build_rpm_l1, solve_rpm
from .plots import emit_heatmap
from .trials import SweepGrid, TrialConfig, run_sweep, run_trial

_FORMULATION_ALIASES = {
    "nonneg-slack": "nonneg_slack",
    "l1-split": "l1_split",
    "plain": "plain_phasemax",
}


def _formulation(name: str) -> str:
    return _FORMULATION_ALIASES.get(name, name)


def _rpm_config(args) -> RPMConfig:
    if args.lambda_mode == "explicit":
        if args.lam is None:
            raise SystemExit("--lambda is required with --lambda-mode explicit")
        return RPMConfig.explicit(args.lam, formulation=_formulation(args.formulation))
    if args.lambda_mode == "auto-seven":
        return RPMConfig.auto_seven(formulation=_formulation(args.formulation))
    if args.lambda_mode == "auto-scaled":
        return RPMConfig.auto_scaled(args.kappa, formulation=_formulation(args.formulation))
    return RPMConfig(lambda_mode="auto", kappa=args.kappa,
                     formulation=_formulation(args.formulation))


def _add_lambda_flags(p: argparse.ArgumentParser):
    p.add_argument("--lambda", dest="lam", type=float, default=None,
                   help="explicit penalty weight (with --lambda-mode explicit)")
    p.add_argument("--lambda-mode", choices=["explicit", "auto-seven", "auto-scaled", "auto"],
                   default="auto-seven",
                   help="penalty policy; auto modes use kappa * norm_est(b) / m")
    p.add_argument("--kappa", type=float, default=7.0,
                   help="multiplier for the auto lambda modes")
    p.add_argument("--formulation",
                   choices=sorted(set(FORMULATIONS) | set(_FORMULATION_ALIASES)),
                   default="nonneg_slack")


def _cmd_solve(args) -> int:
    A = fileio.load_matrix(args.sensing)
    b = fileio.load_vector(args.measurements)
    phi = fileio.load_vector(args.anchor)
    config = _rpm_config(args)
    if args.lp_dump:
        lam = config.resolve_lambda(b)
        if config.formulation == "nonneg_slack":
            prob = build_rpm(A, b, phi, lam)
        elif config.formulation == "l1_split":
            prob = build_rpm_l1(A, b, phi, lam)
        else:
            prob = build_plain_phasemax(A, b, phi)
        fileio.write_lp_dump(args.lp_dump, prob)
    report = solve_rpm(A, b, phi, config)
    print(f"status: {report.solver_status.value}  lambda: {report.lam:.6g}  "
          f"iterations: {report.iterations}  runtime_s: {report.runtime_s:.3f}")
    if report.x_hat is None:
        return 1
    fileio.save_vector(args.out_x, report.x_hat)
    fileio.save_vector(args.out_e, report.e_hat)
    return 0


def _cmd_simulate(args) -> int:
    cfg = TrialConfig(
        n=args.n,
        m=args.m,
        corruption=CorruptionSpec(args.delta, args.model, args.magnitude_scale),
        rpm=_rpm_config(args),
        seed=args.seed,
        anchor_mode=args.anchor,
        anchor_param=args.anchor_err if args.anchor == "oracle" else args.truncation,
        success_tol=args.success_tol,
        signal_norm=args.signal_norm,
    )
    result = run_trial(cfg)
    if args.json:
        print(json.dumps(result.__dict__, default=float))
    else:
        print(f"status: {result.status}  success: {str(result.success).lower()}")
        print(f"rel_err_signed: {result.rel_err_signed:.3e}  "
              f"rel_err_sym: {result.rel_err_sym:.3e}  "
              f"slack_residual: {result.slack_residual:.3e}")
        print(f"lp_iterations: {result.lp_iterations}  runtime_ms: {result.runtime_ms:.1f}")
    return 0


def _parse_list(text: str) -> tuple[float, ...]:
    return tuple(float(tok) for tok in text.split(",") if tok.strip())


def _read_config_file(path) -> dict:
    """`key = value` lines; lists comma-separated; blank lines and
    #-comments ignored."""
    values = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise SystemExit(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key, _, value = line.partition("=")
        values[key.strip()] = value.strip()
    return values


def _cmd_sweep(args) -> int:
    values = _read_config_file(args.config) if args.config else {}

    def pick(name, flag_value, cast):
        if flag_value is not None:
            return flag_value
        if name in values:
            return cast(values[name])
        raise SystemExit(f"sweep parameter {name!r} missing (flag or config file)")

    grid = SweepGrid(
        n=int(pick("n", args.n, int)),
        m_over_n=pick("m_over_n", args.m_over_n, _parse_list),
        deltas=pick("deltas", args.deltas, _parse_list),
        anchor_rel_errs=pick("anchor_rel_errs", args.anchor_errs, _parse_list),
        kappas=pick("kappas", args.kappas, _parse_list),
        trials=int(pick("trials", args.trials, int)),
        base_seed=int(pick("base_seed", args.base_seed, int)),
        model=pick("model", args.model, str) if (args.model or "model" in values) else "shrink_to_zero",
        success_tol=args.success_tol,
        formulation=_formulation(args.formulation),
    )
    data_path, summary_path, results = run_sweep(grid, args.out_dir, workers=args.workers)
    print(f"wrote {data_path} ({len(results)} rows) and {summary_path}")
    if args.heatmap_x and args.heatmap_y:
        out = Path(args.out_dir) / "heatmap.svg"
        emit_heatmap(summary_path, args.heatmap_x, args.heatmap_y, out)
        print(f"wrote {out}")
    return 0


_FAST_LEMMA_SIZES = dict(
    grid_points=8, mc_samples=100_000, moment_samples=1_000_000,
    opnorm_trials=2, lower_trials=2, lower_directions=16, rowset_trials=10,
)


def _cmd_verify_lemmas(args) -> int:
    sizes = _FAST_LEMMA_SIZES if args.fast else {}
    checks = run_lemma_checks(seed=args.seed, **sizes)
    width = max(len(c.name) for c in checks)
    rows = []
    for c in checks:
        verdict = "pass" if c.passed else "FAIL"
        print(f"{c.name:<{width}}  observed={c.observed: .6f}  "
              f"{c.relation} {c.bound: .6f}  [{verdict}]  {c.detail}")
        rows.append([c.name, repr(c.observed), c.relation, repr(c.bound),
                     "true" if c.passed else "false", c.detail])
    failed = [c for c in checks if not c.passed]
    if args.report == "csv":
        out = args.out or "lemma_report.csv"
        fileio.write_csv_rows(out, ["check", "observed", "relation", "bound", "passed", "detail"], rows)
        print(f"wrote {out}")
    print(f"{len(checks) - len(failed)}/{len(checks)} checks passed")
    return 1 if failed else 0


def _cmd_heatmap(args) -> int:
    emit_heatmap(args.summary, args.x, args.y, args.out)
    print(f"wrote {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rpmax", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve one instance from CSV files")
    p.add_argument("--sensing", required=True, help="CSV file with the m x n sensing matrix")
    p.add_argument("--measurements", required=True, help="CSV file with the m magnitudes")
    p.add_argument("--anchor", required=True, help="CSV file with the anchor vector")
    p.add_argument("--out-x", default="x_hat.csv")
    p.add_argument("--out-e", default="e_hat.csv")
    p.add_argument("--lp-dump", default=None, help="write the assembled LP to this file")
    _add_lambda_flags(p)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("simulate", help="run one seeded synthetic trial")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--delta", type=float, default=0.0, help="corrupted fraction in [0, 1)")
    p.add_argument("--model", choices=CORRUPTION_MODELS, default="shrink_to_zero")
    p.add_argument("--magnitude-scale", type=float, default=1.0)
    p.add_argument("--anchor", choices=["oracle", "spectral"], default="oracle")
    p.add_argument("--anchor-err", type=float, default=0.3, help="oracle anchor relative error")
    p.add_argument("--truncation", type=float, default=3.0, help="spectral anchor truncation factor")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--success-tol", type=float, default=1e-6)
    p.add_argument("--signal-norm", type=float, default=1.0)
    p.add_argument("--json", action="store_true", help="emit the result as one JSON object")
    _add_lambda_flags(p)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("sweep", help="run an experiment grid")
    p.add_argument("--config", default=None, help="key = value file supplying grid parameters")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--m-over-n", type=_parse_list, default=None)
    p.add_argument("--deltas", type=_parse_list, default=None)
    p.add_argument("--anchor-errs", type=_parse_list, default=None)
    p.add_argument("--kappas", type=_parse_list, default=None)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--base-seed", type=int, default=None)
    p.add_argument("--model", choices=CORRUPTION_MODELS, default=None)
    p.add_argument("--success-tol", type=float, default=1e-6)
    p.add_argument("--formulation",
                   choices=sorted(set(FORMULATIONS) | set(_FORMULATION_ALIASES)),
                   default="nonneg_slack")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--workers", type=int, default=None,
                   help="worker processes (default: RPM_THREADS or cpu count)")
    p.add_argument("--heatmap-x", default=None)
    p.add_argument("--heatmap-y", default=None)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("verify-lemmas", help="check the concentration constants")
    p.add_argument("--seed", type=int, default=2024)
    p.add_argument("--report", choices=["table", "csv"], default="table")
    p.add_argument("--out", default=None, help="csv report path (with --report csv)")
    p.add_argument("--fast", action="store_true",
                   help="smoke mode: fewer trials and samples (same bounds)")
    p.set_defaults(func=_cmd_verify_lemmas)

    p = sub.add_parser("heatmap", help="render a success-rate heatmap")
    p.add_argument("--summary", required=True)
    p.add_argument("--x", required=True, help="summary field for the x axis")
    p.add_argument("--y", required=True, help="summary field for the y axis")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_heatmap)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
