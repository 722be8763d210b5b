"""Shared generators for randomized solver tests."""

import numpy as np

from rpmax.lp import LPProblem, free_lower


def random_small_lp(rng: np.random.Generator) -> LPProblem:
    """Random instance within the brute-force caps, mixing all three statuses.

    Built around a witness point z*: feasible rows get slack at z*, so the
    instance is feasible unless a contradictory pair is injected; a box of
    upper-bound rows is added most of the time, leaving a minority of
    potentially unbounded instances.
    """
    d = int(rng.integers(1, 7))
    z_star = rng.normal(size=d)
    c = rng.normal(size=d)

    lower = free_lower(d)
    bounded_below = rng.random(d) < 0.6
    lower[bounded_below] = z_star[bounded_below] - rng.uniform(0.1, 2.0, size=d)[bounded_below]
    n_bounds = int(np.count_nonzero(bounded_below))

    max_rows = min(12, 16 - n_bounds)
    r = int(rng.integers(0, max_rows + 1))
    G = rng.normal(size=(r, d))
    h = G @ z_star + rng.uniform(0.1, 2.0, size=r)

    rows = [G]
    rhs = [h]
    roll = rng.random()
    if roll < 0.25 and r + n_bounds + 2 <= 16:
        # contradictory pair: g.z <= g.z* - 1 and -g.z <= -g.z* - 1
        g = rng.normal(size=d)
        rows.append(np.vstack([g, -g]))
        rhs.append(np.array([g @ z_star - 1.0, -(g @ z_star) - 1.0]))
    elif roll < 0.85:
        # cap every coordinate from above so the instance is bounded
        take = min(d, 16 - r - n_bounds)
        if take:
            idx = rng.permutation(d)[:take]
            rows.append(np.eye(d)[idx])
            rhs.append(z_star[idx] + rng.uniform(0.5, 3.0, size=take))

    return LPProblem(c=c, G=np.vstack(rows), h=np.concatenate(rhs), lower=lower)
