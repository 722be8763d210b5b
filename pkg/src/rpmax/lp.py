"""Dense linear programming for small and medium instances.

``solve_lp`` is a self-contained two-phase primal simplex on the tableau of
the standard-form conversion (slack variables for the inequality rows, a
shift for finite lower bounds, splitting for free variables).  Pricing is
Dantzig's rule, with Bland's rule engaged after a stall of
``2 * (rows + variables)`` non-improving pivots so cycling cannot persist.

``brute_force_lp`` is an independent oracle for testing: it enumerates all
candidate vertices (square subsystems of active constraints) after
projecting out the lineality space, checks recession rays for
unboundedness, and returns the best feasible vertex.  It is exponential in
the instance size and capped accordingly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

FEAS_TOL = 1e-9
OPT_TOL = 1e-9
PIVOT_TOL = 1e-10


class LPStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    ITERATION_LIMIT = "iteration_limit"


@dataclass(frozen=True)
class LPProblem:
    """maximize c.z  subject to  G z <= h  and  z_j >= lower_j.

    ``lower`` entries are finite or ``-inf`` (free variable).  Upper bounds,
    if needed, are encoded as rows of G.
    """

    c: np.ndarray
    G: np.ndarray
    h: np.ndarray
    lower: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.c, dtype=float))
        G = np.asarray(self.G, dtype=float)
        if G.size == 0:
            G = G.reshape(0, c.shape[0])
        h = np.atleast_1d(np.asarray(self.h, dtype=float))
        lower = np.atleast_1d(np.asarray(self.lower, dtype=float))
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "G", G)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "lower", lower)
        d = c.shape[0]
        if d < 1:
            raise ValueError("LP needs at least one variable")
        if G.shape != (h.shape[0], d):
            raise ValueError(f"constraint shapes inconsistent: G {G.shape}, h {h.shape}, d={d}")
        if lower.shape != (d,):
            raise ValueError("lower bounds must have one entry per variable")
        if not (np.all(np.isfinite(c)) and np.all(np.isfinite(G)) and np.all(np.isfinite(h))):
            raise ValueError("objective and constraints must be finite")
        if np.any(np.isposinf(lower)) or np.any(np.isnan(lower)):
            raise ValueError("lower bounds must be finite or -inf")

    @property
    def num_vars(self) -> int:
        return self.c.shape[0]

    @property
    def num_rows(self) -> int:
        return self.G.shape[0]


def free_lower(d: int) -> np.ndarray:
    return np.full(d, -np.inf)


@dataclass
class LPSolution:
    status: LPStatus
    z: Optional[np.ndarray]
    objective_value: float
    iterations: int


def check_feasible(prob: LPProblem, z: np.ndarray, tol: float = FEAS_TOL) -> bool:
    """True iff G z <= h + tol entrywise and lower bounds hold within tol."""
    z = np.asarray(z, dtype=float)
    if z.shape != (prob.num_vars,):
        raise ValueError(f"point has shape {z.shape}, LP has {prob.num_vars} variables")
    if prob.num_rows and np.any(prob.G @ z > prob.h + tol):
        return False
    finite = np.isfinite(prob.lower)
    return bool(np.all(z[finite] >= prob.lower[finite] - tol))


class _Tableau:
    """Standard-form tableau shared by the two simplex phases."""

    def __init__(self, prob: LPProblem):
        G, h, c, lower = prob.G, prob.h, prob.c, prob.lower
        r, d = G.shape[0], prob.num_vars
        finite = np.isfinite(lower)
        self.shift = np.where(finite, lower, 0.0)
        rhs = h - G @ self.shift if r else h.copy()

        # structured columns: one per variable, plus a negated copy per free variable
        free_idx = np.flatnonzero(~finite)
        ns = d + free_idx.shape[0]
        cols = np.empty((r, ns))
        cost = np.empty(ns)
        cols[:, :d] = G
        cost[:d] = c
        cols[:, d:] = -G[:, free_idx]
        cost[d:] = -c[free_idx]
        self.d = d
        self.free_idx = free_idx
        self.ns = ns
        self.r = r

        neg = rhs < 0
        n_art = int(np.count_nonzero(neg))
        self.n_real = ns + r            # structured + slack columns
        n_total = self.n_real + n_art

        # rows 0..r-1: constraints; row r: objective reduced costs; row r+1 (phase 1 only)
        extra = 2 if n_art else 1
        T = np.zeros((r + extra, n_total + 1))
        T[:r, :ns] = cols
        T[:r, ns:ns + r] = np.eye(r)
        T[:r, -1] = rhs
        if n_art:
            T[:r][neg] *= -1.0
            art_rows = np.flatnonzero(neg)
            for j, i in enumerate(art_rows):
                T[i, self.n_real + j] = 1.0
        T[r, :ns] = cost
        # objective row value: negative of current objective (starts at 0)
        if n_art:
            # phase-1 reduced costs: maximize -sum(artificials); pricing out the
            # basic artificials leaves the sum of their (flipped) rows
            T[r + 1, :] = T[:r][neg].sum(axis=0)
            T[r + 1, self.n_real:n_total] = 0.0

        basis = np.where(neg, 0, np.arange(ns, ns + r))
        if n_art:
            basis[neg] = self.n_real + np.arange(n_art)
        self.T = T
        self.basis = basis.astype(int)
        self.n_art = n_art
        self.obj_row = r
        self.iterations = 0

    def _pivot(self, row: int, col: int):
        T = self.T
        piv = T[row, col]
        T[row, :] /= piv
        column = T[:, col].copy()
        column[row] = 0.0
        T -= np.outer(column, T[row, :])
        T[:, col] = 0.0
        T[row, col] = 1.0
        self.basis[row] = col
        self.iterations += 1

    def _run(self, cost_row: int, price_limit: int, opt_tol: float, pivot_tol: float,
             max_iters: int, stall_limit: int) -> LPStatus:
        """Pivot until the given cost row is non-positive.  Returns OPTIMAL
        (no entering column), UNBOUNDED, or ITERATION_LIMIT."""
        T = self.T
        r = self.r
        stall = 0
        bland = False
        last_obj = -T[cost_row, -1]
        while True:
            costs = T[cost_row, :price_limit]
            if bland:
                eligible = np.flatnonzero(costs > opt_tol)
                if eligible.size == 0:
                    return LPStatus.OPTIMAL
                col = int(eligible[0])
            else:
                col = int(np.argmax(costs))
                if costs[col] <= opt_tol:
                    return LPStatus.OPTIMAL
            if self.iterations >= max_iters:
                return LPStatus.ITERATION_LIMIT

            colvals = T[:r, col]
            pos = colvals > pivot_tol
            if not np.any(pos):
                return LPStatus.UNBOUNDED
            ratios = np.full(r, np.inf)
            ratios[pos] = T[:r, -1][pos] / colvals[pos]
            best = ratios.min()
            ties = np.flatnonzero(ratios <= best + 1e-12)
            # lowest basic-variable index among ties (Bland-compatible)
            row = int(ties[np.argmin(self.basis[ties])])
            self._pivot(row, col)
            # numerical hygiene: clamp rounding residue on the rhs
            rhs = T[:r, -1]
            rhs[(rhs < 0) & (rhs > -1e-11)] = 0.0

            obj = -T[cost_row, -1]
            if obj > last_obj + 1e-12:
                last_obj = obj
                stall = 0
                bland = False
            else:
                stall += 1
                if stall >= stall_limit:
                    bland = True


def solve_lp(
    prob: LPProblem,
    *,
    feas_tol: float = FEAS_TOL,
    opt_tol: float = OPT_TOL,
    pivot_tol: float = PIVOT_TOL,
    max_iters: Optional[int] = None,
) -> LPSolution:
    """Two-phase primal simplex for ``maximize c.z s.t. G z <= h, z >= lower``."""
    tab = _Tableau(prob)
    r = tab.r
    if max_iters is None:
        max_iters = 10000 + 20 * (r + prob.num_vars)
    stall_limit = 2 * (r + prob.num_vars)

    if tab.n_art:
        status = tab._run(r + 1, tab.n_real, opt_tol, pivot_tol, max_iters, stall_limit)
        if status is LPStatus.ITERATION_LIMIT:
            return LPSolution(status, _extract(tab, prob), float("nan"), tab.iterations)
        infeasibility = tab.T[r + 1, -1]  # the row stores -objective = sum of artificials
        if infeasibility > feas_tol:
            return LPSolution(LPStatus.INFEASIBLE, None, float("nan"), tab.iterations)
        _evict_artificials(tab, pivot_tol)
        tab.T = tab.T[:r + 1]  # drop the phase-1 row

    status = tab._run(r, tab.n_real, opt_tol, pivot_tol, max_iters, stall_limit)
    if status is LPStatus.UNBOUNDED:
        return LPSolution(status, None, float("inf"), tab.iterations)
    z = _extract(tab, prob)
    objective = float(prob.c @ z) if z is not None else float("nan")
    return LPSolution(status, z, objective, tab.iterations)


def _evict_artificials(tab: _Tableau, pivot_tol: float):
    """Pivot basic artificials (at value zero) out of the basis where possible.

    A basic artificial whose row is zero across all real columns marks a
    redundant constraint; it stays basic at zero and never moves again.
    """
    for row in np.flatnonzero(tab.basis >= tab.n_real):
        candidates = np.flatnonzero(np.abs(tab.T[row, :tab.n_real]) > pivot_tol)
        if candidates.size:
            tab._pivot(int(row), int(candidates[0]))


def _extract(tab: _Tableau, prob: LPProblem) -> np.ndarray:
    """Map the structured basic solution back to original variables."""
    y = np.zeros(tab.n_real + tab.n_art)
    y[tab.basis] = tab.T[:tab.r, -1]
    z = y[:tab.d].copy()
    z[tab.free_idx] -= y[tab.d:tab.ns]
    return z + tab.shift


# ---------------------------------------------------------------------------
# vertex-enumeration oracle

BRUTE_FORCE_MAX_VARS = 8
BRUTE_FORCE_MAX_CONSTRAINTS = 16


def brute_force_lp(prob: LPProblem, tol: float = 1e-8) -> LPSolution:
    """Exact reference solve by exhaustive vertex enumeration.

    Collects every constraint (rows of G plus finite lower bounds), projects
    out the lineality space of the constraint normals, enumerates all square
    active subsystems as vertex candidates, and scans recession directions
    (null spaces of (k-1)-subsets) for an improving ray.  Rank-deficient
    subsystems are skipped.  Exact up to linear-solve roundoff.
    """
    d = prob.num_vars
    finite = np.isfinite(prob.lower)
    n_bounds = int(np.count_nonzero(finite))
    if d > BRUTE_FORCE_MAX_VARS:
        raise ValueError(f"brute force capped at {BRUTE_FORCE_MAX_VARS} variables, got {d}")
    if prob.num_rows + n_bounds > BRUTE_FORCE_MAX_CONSTRAINTS:
        raise ValueError("brute force capped at "
                         f"{BRUTE_FORCE_MAX_CONSTRAINTS} constraints, got {prob.num_rows + n_bounds}")

    rows = [prob.G] if prob.num_rows else []
    rhs = [prob.h] if prob.num_rows else []
    if n_bounds:
        bound_rows = -np.eye(d)[finite]
        rows.append(bound_rows)
        rhs.append(-prob.lower[finite])
    if rows:
        R = np.vstack(rows)
        q = np.concatenate(rhs)
    else:
        R = np.zeros((0, d))
        q = np.zeros(0)
    N = R.shape[0]

    if N == 0:
        if np.linalg.norm(prob.c) > tol:
            return LPSolution(LPStatus.UNBOUNDED, None, float("inf"), 0)
        z = np.zeros(d)
        return LPSolution(LPStatus.OPTIMAL, z, 0.0, 0)

    # lineality reduction: directions unconstrained by every row
    _, svals, Vt = np.linalg.svd(R)
    rank = int(np.count_nonzero(svals > max(tol * svals[0], 1e-12)))
    V = Vt[:rank].T                      # basis of the constrained subspace
    lineality = Vt[rank:].T
    c_line = lineality.T @ prob.c if lineality.size else np.zeros(0)
    Rk = R @ V
    ck = V.T @ prob.c
    k = rank

    vertices = []
    if k == 0:
        # no constrained directions: the origin of the reduced space stands in
        vertices = [np.zeros(0)] if np.all(q >= -tol * np.maximum(1.0, np.abs(q))) else []
    for subset in itertools.combinations(range(N), k) if k else ():
        sub = Rk[list(subset)]
        try:
            v = np.linalg.solve(sub, q[list(subset)])
        except np.linalg.LinAlgError:
            continue
        if not np.all(np.isfinite(v)):
            continue
        if np.max(np.abs(sub @ v - q[list(subset)])) > tol * max(1.0, np.abs(q[list(subset)]).max()):
            continue  # near-singular subsystem
        if np.all(Rk @ v <= q + tol * np.maximum(1.0, np.abs(q))):
            vertices.append(v)

    if not vertices:
        # the reduced polyhedron is pointed, so nonempty implies a vertex exists
        return LPSolution(LPStatus.INFEASIBLE, None, float("nan"), 0)

    if lineality.size and np.linalg.norm(c_line) > tol:
        return LPSolution(LPStatus.UNBOUNDED, None, float("inf"), 0)
    if _improving_ray_exists(Rk, ck, tol):
        return LPSolution(LPStatus.UNBOUNDED, None, float("inf"), 0)

    values = [float(ck @ v) for v in vertices]
    best = int(np.argmax(values))
    z = V @ vertices[best]
    return LPSolution(LPStatus.OPTIMAL, z, float(prob.c @ z), 0)


def _improving_ray_exists(Rk: np.ndarray, ck: np.ndarray, tol: float) -> bool:
    """Scan extreme rays of the recession cone {u : Rk u <= 0} for c.u > 0."""
    N, k = Rk.shape
    if k == 0:
        return False  # every constrained direction is pinned; rays live in the lineality
    row_scale = np.maximum(1.0, np.linalg.norm(Rk, axis=1))
    if k == 1:
        for u in (np.ones(1), -np.ones(1)):
            if np.all(Rk @ u <= tol * row_scale) and ck @ u > tol:
                return True
        return False
    for subset in itertools.combinations(range(N), k - 1):
        sub = Rk[list(subset)]
        _, svals, Vt = np.linalg.svd(sub)
        null_dim = k - int(np.count_nonzero(svals > max(tol * svals[0], 1e-12)))
        if null_dim != 1:
            continue  # rank-deficient subset: ray not uniquely determined here
        u = Vt[-1]
        for s in (u, -u):
            if np.all(Rk @ s <= tol * row_scale) and ck @ s > tol:
                return True
    return False
