"""Absorption-time laws: exact pgf forms and power-iteration distributions.

One-dimensional chains get exact rational pgfs built from eigenvalue factor
lists. Multidimensional games go through the pure-birth dual: the absorption
law of the dual is extracted by power iteration and mixed with the (possibly
signed) dual start weights.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .birth_death import (
    BirthDeathSpec,
    bd_eigenvalues,
    bd_win_prob,
    tridiag_block_eigs,
)
from .errors import HorizonError, SpecError
from .game import GameSpec
from .intertwine import PureBirthChain, SpectralLink, build_dual, dual_initial
from .pgf import GeometricProductPgf, MixturePgf, SeriesPgf

MAX_HORIZON = 10**6


def _nonunit_eigenvalues(spec: BirthDeathSpec) -> np.ndarray:
    return bd_eigenvalues(spec)[:-1]


def pgf_keilson(spec: BirthDeathSpec) -> GeometricProductPgf:
    """pgf of the time from state 1 to N for a chain that cannot be ruined.

    A product of geometric factors, one per non-unit eigenvalue.
    """
    if spec.sink_reachable:
        raise SpecError("q(1) > 0; use pgf_two_sided for two-sided absorption")
    return GeometricProductPgf(scale=1.0, num=tuple(_nonunit_eigenvalues(spec)))


def pgf_interior(spec: BirthDeathSpec, start: int) -> GeometricProductPgf:
    """pgf of the time from an interior start to N when ruin is unreachable.

    The full-spectrum product divided by the factors of the leading block on
    the states below the start.
    """
    if spec.sink_reachable:
        raise SpecError("q(1) > 0; use pgf_two_sided for two-sided absorption")
    if not 1 <= start < spec.N:
        raise SpecError(f"start must lie in 1..{spec.N - 1}, got {start}")
    den = tridiag_block_eigs(spec, 1, start - 1)
    return GeometricProductPgf(
        scale=1.0,
        num=tuple(_nonunit_eigenvalues(spec)),
        den=tuple(den),
    )


def pgf_two_sided(spec: BirthDeathSpec, start: int) -> tuple:
    """(win, lose) pgfs for a chain with both ruin and win reachable.

    Each is a defective law: the win branch carries mass rho(start), scaled
    by the ratio of the full factor product to the block below (win) or
    above (lose) the start.
    """
    if not spec.sink_reachable:
        raise SpecError("q(1) = 0; the losing time is undefined")
    if not 1 <= start <= spec.N - 1:
        raise SpecError(f"start must be a transient state 1..{spec.N - 1}")
    rho = float(bd_win_prob(spec)[start - 1])
    full = tuple(_nonunit_eigenvalues(spec))
    lower = tuple(tridiag_block_eigs(spec, 1, start - 1))
    upper = tuple(tridiag_block_eigs(spec, start + 1, spec.N - 1))
    win = GeometricProductPgf(scale=rho, num=full, den=lower)
    lose = GeometricProductPgf(scale=1.0 - rho, num=full, den=upper)
    return win, lose


@dataclass(frozen=True, eq=False)
class AbsorptionDist:
    """Time-indexed absorption probabilities P(T = t, absorbed at target).

    ``tail`` is the target mass beyond the horizon, computed exactly from the
    fundamental matrix, so pmf.sum() + tail equals the total absorption
    probability at the target.
    """

    pmf: np.ndarray
    tail: float
    target: int
    eps: float

    def cdf(self) -> np.ndarray:
        return np.cumsum(self.pmf)

    def mass(self) -> float:
        return float(self.pmf.sum() + self.tail)


def _absorbing_states(p: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    n = p.shape[0]
    out = []
    for i in range(n):
        unit = np.zeros(n)
        unit[i] = 1.0
        if np.max(np.abs(p[i] - unit)) <= tol:
            out.append(i)
    return np.array(out, dtype=int)


def absorb_dist(
    chain,
    nu,
    target: int | None = None,
    horizon: int | None = None,
    eps: float = 1e-12,
) -> AbsorptionDist:
    """Law of the absorption time at ``target`` by power iteration.

    ``chain`` is a stochastic matrix, an AbsorbingChain, or a PureBirthChain;
    ``nu`` may be signed (mixtures of dual weights). Iteration stops once the
    transient mass drops below eps or the horizon is reached; without an
    explicit horizon, failing to converge within 10^6 steps raises.
    """
    if isinstance(chain, PureBirthChain):
        p = chain.matrix
        target = chain.win_index if target is None else target
    elif hasattr(chain, "matrix"):
        p = chain.matrix
        target = chain.win_index if target is None else target
    else:
        p = np.asarray(chain, dtype=float)
        if target is None:
            raise ValueError("target index required for a bare matrix")
    n = p.shape[0]
    nu_arr = np.asarray(nu, dtype=float).ravel()
    if nu_arr.size == n - 1 and getattr(chain, "sink_index", None) == 0:
        nu_arr = np.concatenate([[0.0], nu_arr])
    absorbing = _absorbing_states(p)
    if target not in absorbing:
        raise ValueError(f"state {target} is not absorbing")
    transient = np.array([i for i in range(n) if i not in set(absorbing)])

    nu = nu_arr.reshape(n)
    cap = MAX_HORIZON if horizon is None else int(horizon)

    # exact absorption-at-target probabilities, for the tail
    h = np.zeros(n)
    h[target] = 1.0
    if len(transient):
        q = p[np.ix_(transient, transient)]
        rhs = p[transient, target]
        h[transient] = np.linalg.solve(np.eye(len(transient)) - q, rhs)

    pmf = [float(nu[target])]
    v = nu
    t = 0
    while t < cap:
        trans_mass = float(np.abs(v[transient]).sum()) if len(transient) else 0.0
        if trans_mass < eps:
            break
        v = v @ p
        t += 1
        prev = sum(pmf)
        pmf.append(float(v[target]) - prev)
    else:
        if horizon is None:
            raise HorizonError(
                f"transient mass {float(np.abs(v[transient]).sum()):.3e} "
                f"after {cap} steps"
            )
    pmf = np.asarray(pmf)
    low = float(pmf.min(initial=0.0))
    if low < -1e-12:
        raise SpecError(f"mixture pmf entry {low:.3e}; inconsistent weights")
    np.clip(pmf, 0.0, None, out=pmf)
    tail = float(v @ h - pmf.sum())
    return AbsorptionDist(pmf=pmf, tail=tail, target=int(target), eps=eps)


def pgf_multidim(game: GameSpec, nu_star, eps: float = 1e-12) -> MixturePgf:
    """Pipeline pgf of the game's time to the win corner, start law nu_star.

    Builds the pure-birth dual, converts each charged dual start state into a
    series-backed pgf by power iteration, and scales the signed mixture by
    the product of the per-dimension winning probabilities from state 1.
    """
    link, dual = build_dual(game)
    weights = dual_initial(link, nu_star).values
    return pgf_from_dual(link, dual, weights, eps=eps)


def pgf_from_dual(
    link: SpectralLink, dual: PureBirthChain, weights, eps: float = 1e-12
) -> MixturePgf:
    """Mixture pgf from an already-built dual and start weights.

    All charged start states share one power iteration.
    """
    weights = np.asarray(weights, dtype=float)
    charged = np.nonzero(np.abs(weights) > 1e-14)[0]
    pmfs, tails = _absorb_dist_batch(dual.matrix, charged, dual.win_index, eps)
    parts = tuple(
        SeriesPgf(pmf=pmf, tail=tail, eps=eps) for pmf, tail in zip(pmfs, tails)
    )
    used = tuple(float(weights[i]) for i in charged)
    return MixturePgf(scale=link.iso_value, weights=used, parts=parts)


def _absorb_dist_batch(p: np.ndarray, starts, target: int, eps: float):
    """Absorption pmfs at ``target`` for several point-mass starts at once."""
    n = p.shape[0]
    absorbing = set(_absorbing_states(p))
    transient = np.array([i for i in range(n) if i not in absorbing])
    v = np.zeros((len(starts), n))
    for row, s in enumerate(starts):
        v[row, int(s)] = 1.0
    pmf = [v[:, target].copy()]
    reached = pmf[0].copy()
    t = 0
    while t < MAX_HORIZON:
        mass = np.abs(v[:, transient]).sum(axis=1).max() if len(transient) else 0.0
        if mass < eps:
            break
        v = v @ p
        t += 1
        now = v[:, target]
        pmf.append(now - reached)
        reached = now.copy()
    else:
        raise HorizonError(f"batch power iteration did not converge in {t} steps")
    pmf = np.column_stack(pmf) if pmf else np.zeros((len(starts), 1))
    h = np.zeros(n)
    h[target] = 1.0
    if len(transient):
        q = p[np.ix_(transient, transient)]
        h[transient] = np.linalg.solve(
            np.eye(len(transient)) - q, p[transient, target]
        )
    tails = v @ h - pmf.sum(axis=1)
    return [pmf[k] for k in range(len(starts))], [float(x) for x in tails]


def expected_time(obj) -> float:
    """Partial expectation sum(t * P(T = t, target)) of a pgf or distribution."""
    if isinstance(obj, AbsorptionDist):
        if obj.tail > obj.eps:
            raise HorizonError(
                f"tail {obj.tail:.3e} above eps {obj.eps:.3e}; extend the horizon"
            )
        return float(np.dot(np.arange(len(obj.pmf)), obj.pmf))
    return obj.mean()


def geometric_convolution_pmf(rates, horizon: int) -> np.ndarray:
    """pmf of a sum of independent geometric times with the given success rates.

    Brute-force convolution; serves as the oracle for the factorized pgf of
    one-sided chains.
    """
    pmf = np.zeros(horizon + 1)
    pmf[0] = 1.0
    for a in rates:
        g = np.zeros(horizon + 1)
        t = np.arange(1, horizon + 1)
        g[1:] = a * (1.0 - a) ** (t - 1)
        pmf = np.convolve(pmf, g)[: horizon + 1]
    return pmf
