"""Shared generators and oracles for the test suite."""

from math import comb

import numpy as np

from krongambler import BirthDeathSpec, ErgodicBDSpec, preset_r_of_d


def rand_bd(rng, n, q1_zero=False, budget=0.9, min_rate=0.3):
    """Random valid chain spec with per-state move mass p(i)+q(i) <= budget.

    ``min_rate`` floors the raw draws before scaling, which keeps absorption
    times (and hence power-iteration horizons) moderate.
    """
    p = rng.uniform(min_rate, 1.0, n - 1)
    q = rng.uniform(min_rate, 1.0, n - 1)
    scale = budget / np.maximum(p + q, 1e-9).max()
    p, q = p * scale, q * scale
    if q1_zero and n > 1:
        q[0] = 0.0
    return BirthDeathSpec(N=n, p=tuple(p), q=tuple(q))


def rand_ergodic(rng, m, budget=0.9, min_rate=0.02):
    p = rng.uniform(min_rate, 1.0, m - 1)
    q = rng.uniform(min_rate, 1.0, m - 1)
    # out-of-state mass: p'(i) + q'(i) per interior state
    scale = budget / max(
        max(p[i] + (q[i - 1] if i else 0.0) for i in range(m - 1)), q[-1]
    )
    return ErgodicBDSpec(M=m, p=tuple(p * scale), q=tuple(q * scale))


def game_safe_budget(d, r):
    """Per-state move cap keeping the mixed game matrix entrywise nonnegative
    for the at-most-r-coordinates preset."""
    c = comb(d, r)
    if c == 1:
        return 0.45
    floor = (1.0 - 1.0 / c + 0.02) ** (1.0 / r)
    return min(1.0 - floor, 0.45)


def dual_safe_budget(d, r):
    """Tighter cap that also keeps the pure-birth dual nonnegative; the dual
    diagonal involves eigenvalues, bounded below by 1 - 2 * budget."""
    c = comb(d, r)
    if c == 1:
        return 0.45
    floor = (1.0 - 1.0 / c + 0.02) ** (1.0 / r)
    return (1.0 - floor) / 2.0


def rand_game(rng, d=None, r=None, n_max=4, q1_zero=False, dual_safe=True):
    """Random at-most-r-of-d preset game over random component chains."""
    d = int(rng.integers(1, 4)) if d is None else d
    r = int(rng.integers(1, d + 1)) if r is None else r
    budget = dual_safe_budget(d, r) if dual_safe else min(
        game_safe_budget(d, r), 0.9 / d
    )
    dims = [
        rand_bd(rng, int(rng.integers(2, n_max + 1)), q1_zero=q1_zero,
                budget=budget)
        for _ in range(d)
    ]
    return preset_r_of_d(dims, r)


def direct_game_matrix(dims):
    """Hand-coded transition matrix of the one-coordinate-at-a-time game.

    Independent of the Kronecker construction: iterates lattice states and
    applies the displayed move/ruin/hold rules directly.
    """
    shape = tuple(s.N for s in dims)
    size = int(np.prod(shape))
    out = np.zeros((size + 1, size + 1))
    out[0, 0] = 1.0

    def lin(multi):
        return 1 + int(np.ravel_multi_index([c - 1 for c in multi], shape))

    for multi0 in np.ndindex(*shape):
        multi = tuple(c + 1 for c in multi0)
        row = lin(multi)
        total_move = 0.0
        ruin = 0.0
        for j, (spec, c) in enumerate(zip(dims, multi)):
            up = spec.p[c - 1] if c < spec.N else 0.0
            down = spec.q[c - 1] if c < spec.N else 0.0
            total_move += up + down
            if up > 0.0:
                target = list(multi)
                target[j] += 1
                out[row, lin(target)] += up
            if down > 0.0:
                if c == 1:
                    ruin += down
                else:
                    target = list(multi)
                    target[j] -= 1
                    out[row, lin(target)] += down
        out[row, 0] = ruin
        out[row, row] = 1.0 - total_move
    return out


def chi_square_bins(observed_counts, probs, total):
    """Bin observed counts against expected ones, merging tiny-expectation bins."""
    horizon = max(len(observed_counts), len(probs))
    obs = np.zeros(horizon)
    obs[: len(observed_counts)] = observed_counts
    expected = np.zeros(horizon)
    expected[: len(probs)] = probs
    expected = expected / expected.sum() * total
    keep = expected >= 5.0
    obs_binned = np.append(obs[keep], obs[~keep].sum())
    exp_binned = np.append(expected[keep], expected[~keep].sum())
    if exp_binned[-1] == 0.0:
        obs_binned, exp_binned = obs_binned[:-1], exp_binned[:-1]
    return obs_binned, exp_binned


def power_iteration_pmf(matrix, start, target, horizon):
    """Independent absorption-law oracle: plain repeated multiplication."""
    n = matrix.shape[0]
    v = np.zeros(n)
    v[start] = 1.0
    pmf = [v[target]]
    prev = v[target]
    for _ in range(horizon):
        v = v @ matrix
        pmf.append(v[target] - prev)
        prev = v[target]
    return np.array(pmf)
