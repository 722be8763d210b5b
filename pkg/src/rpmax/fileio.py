"""CSV serialization for matrices, vectors, trial rows, and the LP dump.

Matrices and vectors travel as headerless CSV: one matrix row per line,
values printed with shortest round-trip precision (``repr``); a vector is a
single-column file.  Trial and summary tables carry one header line and are
written in a fixed field order so identical runs produce byte-identical
files.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .lp import LPProblem


def _fmt(x: float) -> str:
    return repr(float(x))


def save_matrix(path, M: np.ndarray) -> None:
    M = np.atleast_2d(np.asarray(M, dtype=float))
    with open(path, "w", newline="") as fh:
        for row in M:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def load_matrix(path) -> np.ndarray:
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line:
                rows.append([float(tok) for tok in line.split(",")])
    if not rows:
        raise ValueError(f"{path}: empty matrix file")
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise ValueError(f"{path}: ragged rows (widths {sorted(widths)})")
    return np.array(rows, dtype=float)


def save_vector(path, v: np.ndarray) -> None:
    save_matrix(path, np.asarray(v, dtype=float).reshape(-1, 1))


def load_vector(path) -> np.ndarray:
    M = load_matrix(path)
    if 1 not in M.shape:
        raise ValueError(f"{path}: expected a single row or column, got shape {M.shape}")
    return M.reshape(-1)


def write_lp_dump(path, prob: LPProblem) -> None:
    """Debug rendering of an assembled LP (documented in the README).

    Line 1: objective coefficients (maximize).  One line per constraint:
    the row coefficients followed by the right-hand side.  Last line: the
    per-variable lower bounds, ``-inf`` marking a free variable.
    """
    with open(path, "w", newline="") as fh:
        fh.write("# maximize c . z\n")
        fh.write(",".join(_fmt(v) for v in prob.c) + "\n")
        fh.write("# rows: g . z <= h, coefficients then rhs\n")
        for row, rhs in zip(prob.G, prob.h):
            fh.write(",".join(_fmt(v) for v in row) + "," + _fmt(rhs) + "\n")
        fh.write("# lower bounds (-inf = free)\n")
        fh.write(",".join("-inf" if not np.isfinite(v) else _fmt(v) for v in prob.lower) + "\n")


def write_csv_rows(path, header: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def read_csv_dicts(path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))
