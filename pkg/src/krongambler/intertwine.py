"""Spectral intertwining links and the pure-birth absorption-time dual.

For each one-dimensional component, stacking the first rows of normalized
spectral polynomials of its restricted matrix gives a lower-triangular link
whose Kronecker product intertwines the multidimensional game with a
pure-birth chain on the same lattice. Absorption of the game at the win
corner then has the same (suitably weighted) law as absorption of the
pure-birth chain, which is cheap to analyze.

The module also carries the classical sharp-dual construction for ergodic
chains, and the closed forms of the lazy two-urn diffusion family, whose link
can be reached both spectrally and through the classical route.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb, prod

import numpy as np
from scipy.linalg import solve_triangular

from .birth_death import (
    BirthDeathSpec,
    ErgodicBDSpec,
    bd_eigenvalues,
    bd_is_monotone,
    bd_restricted,
    bd_stationary,
    bd_win_prob,
)
from .errors import (
    DegenerateSpectrumError,
    InternalCheckError,
    MonotonicityError,
    SpecError,
)
from .game import AbsorbingChain, GameSpec, build_game
from .linalg import kron_all
from .pgf import GeometricProductPgf, MixturePgf

_EIG_TOL = 1e-10
_DEGENERATE_TOL = 1e-12
_INTERTWINE_TOL = 1e-10


def _checked_eigenvalues(spec: BirthDeathSpec) -> np.ndarray:
    lam = bd_eigenvalues(spec)
    if lam[0] < -_EIG_TOL:
        raise MonotonicityError(
            f"negative eigenvalue {lam[0]:.3e}; spectral link needs a "
            "nonnegative spectrum"
        )
    if np.any(1.0 - lam[:-1] < _DEGENERATE_TOL):
        raise DegenerateSpectrumError(
            "a non-top eigenvalue is within 1e-12 of 1"
        )
    return lam


def spectral_link_1d(spec: BirthDeathSpec) -> np.ndarray:
    """Lower-triangular link with rows Q_k(1, .) of the spectral polynomials.

    Q_1 = I and Q_{k+1} = Q_k (P' - lam_k I) / (1 - lam_k) with eigenvalues
    taken in ascending order; only first rows are materialized. Row k is
    supported on columns 1..k, the (1,1) entry is 1, and the (N,N) entry is
    the winning probability from state 1.
    """
    lam = _checked_eigenvalues(spec)
    p_res = bd_restricted(spec)
    n = spec.N
    rows = np.zeros((n, n))
    v = np.zeros(n)
    v[0] = 1.0
    rows[0] = v
    for k in range(1, n):
        v = v @ (p_res - lam[k - 1] * np.eye(n)) / (1.0 - lam[k - 1])
        rows[k] = v
    return rows


def spectral_polynomials(spec: BirthDeathSpec) -> list:
    """Full normalized spectral polynomial matrices Q_1 .. Q_N.

    Materialized only for verification; the link itself needs first rows.
    """
    lam = _checked_eigenvalues(spec)
    p_res = bd_restricted(spec)
    n = spec.N
    out = [np.eye(n)]
    for k in range(1, n):
        out.append(out[-1] @ (p_res - lam[k - 1] * np.eye(n)) / (1.0 - lam[k - 1]))
    return out


def pure_birth_1d(eigenvalues) -> np.ndarray:
    """One-dimensional pure-birth kernel: hold lam_i, move up 1 - lam_i."""
    lam = np.asarray(eigenvalues, dtype=float)
    n = len(lam)
    out = np.diag(lam)
    for i in range(n - 1):
        out[i, i + 1] = 1.0 - lam[i]
    return out


@dataclass(frozen=True, eq=False)
class SpectralLink:
    """Kronecker link between a built game and its pure-birth dual.

    ``matrix`` is lower triangular and nonsingular; its last column is
    supported on the last row only, with value ``iso_value`` (the product of
    the per-dimension winning probabilities from state 1).
    """

    matrix: np.ndarray
    per_dim: tuple
    eigen: tuple
    iso_value: float
    dims: tuple


@dataclass(frozen=True, eq=False)
class PureBirthChain:
    """Pure-birth dual on the lattice: no coordinate ever decreases.

    ``diag`` holds the holding probabilities; the diagonal doubles as the
    spectrum of the game's restricted matrix.
    """

    matrix: np.ndarray
    dims: tuple

    @property
    def size(self) -> int:
        return prod(self.dims)

    @property
    def win_index(self) -> int:
        return self.size - 1

    @property
    def diag(self) -> np.ndarray:
        return np.diag(self.matrix).copy()


def _move_sets(subsets) -> list:
    """Nonempty coordinate sets contained in at least one mixture subset."""
    seen = set()
    for a in subsets:
        a = sorted(a)
        for r in range(1, len(a) + 1):
            for b in itertools.combinations(a, r):
                seen.add(frozenset(b))
    return sorted(seen, key=lambda b: (len(b), sorted(b)))


def build_dual(
    game: GameSpec,
    chain: AbsorbingChain | None = None,
    tol: float = 1e-12,
) -> tuple:
    """Construct the link and the pure-birth dual of a scalar-coefficient game.

    The dual kernel is filled in directly from the mixture: a step raising
    exactly the coordinates in B has probability
    prod_{j in B} (1 - lam_j) * sum_{k: B subset A_k} b_k prod_{j in A_k - B} lam_j,
    and the holding probability is sum_k b_k prod_{j in A_k} lam_j. The same
    kernel is rebuilt as a Kronecker mixture and both must agree; the
    intertwining residual against the built game is also enforced here.
    """
    if not game.scalar_coeffs:
        raise SpecError(
            "absorption-time duality is defined for scalar coefficients only"
        )
    for s in game.dims:
        if not bd_is_monotone(s):
            raise MonotonicityError("every component must be monotone")
    eigs = [_checked_eigenvalues(s) for s in game.dims]
    links = [spectral_link_1d(s) for s in game.dims]
    lam_big = kron_all(links)
    iso = float(prod(bd_win_prob(s)[0] for s in game.dims))

    shape = game.shape
    d = game.d
    size = game.size
    subsets = game.subsets
    coeffs = np.asarray(game.coeffs, dtype=float)
    moves = _move_sets(subsets)

    p_hat = np.zeros((size, size))
    for lin, multi0 in enumerate(np.ndindex(*shape)):
        lam_here = np.array([eigs[j][multi0[j]] for j in range(d)])
        hold = 0.0
        for b_k, a_k in zip(coeffs, subsets):
            hold += b_k * float(np.prod([lam_here[j - 1] for j in a_k]))
        p_hat[lin, lin] = hold
        for bset in moves:
            if any(multi0[j - 1] + 1 >= shape[j - 1] for j in bset):
                continue
            up = float(np.prod([1.0 - lam_here[j - 1] for j in bset]))
            mix = 0.0
            for b_k, a_k in zip(coeffs, subsets):
                if bset <= a_k:
                    mix += b_k * float(
                        np.prod([lam_here[j - 1] for j in a_k - bset])
                    )
            w = up * mix
            target = tuple(
                multi0[j] + (1 if (j + 1) in bset else 0) for j in range(d)
            )
            p_hat[lin, int(np.ravel_multi_index(target, shape))] = w

    low = float(p_hat.min())
    if low < -tol:
        i, j = np.unravel_index(int(p_hat.argmin()), p_hat.shape)
        src = tuple(int(c) + 1 for c in np.unravel_index(i, shape))
        dst = tuple(int(c) + 1 for c in np.unravel_index(j, shape))
        raise SpecError(
            f"pure-birth dual entry {low:.3e} at lattice states {src} -> {dst}; "
            "the mixture violates the dual nonnegativity assumption"
        )
    np.clip(p_hat, 0.0, None, out=p_hat)

    # independent assembly of the same kernel as a Kronecker mixture
    eyes = {n: np.eye(n) for n in set(shape)}
    alt = np.zeros((size, size))
    for b_k, a_k in zip(coeffs, subsets):
        factors = [
            pure_birth_1d(eigs[j]) if (j + 1) in a_k else eyes[shape[j]]
            for j in range(d)
        ]
        alt += b_k * kron_all(factors)
    if np.max(np.abs(alt - p_hat)) > 1e-12:
        raise InternalCheckError("direct and Kronecker dual kernels disagree")

    if chain is None:
        chain = build_game(game)
    residual = np.max(np.abs(lam_big @ chain.restricted() - p_hat @ lam_big))
    if residual > _INTERTWINE_TOL:
        raise InternalCheckError(f"intertwining residual {residual:.3e}")

    if np.max(np.abs(lam_big[:-1, -1])) != 0.0 or abs(
        lam_big[-1, -1] - iso
    ) > 1e-10:
        raise InternalCheckError("link is not isolated at the win corner")

    link = SpectralLink(
        matrix=lam_big,
        per_dim=tuple(links),
        eigen=tuple(eigs),
        iso_value=iso,
        dims=shape,
    )
    return link, PureBirthChain(matrix=p_hat, dims=shape)


@dataclass(frozen=True, eq=False)
class DualInitial:
    """Start weights of the pure-birth dual; signed unless the start is minimal."""

    values: np.ndarray
    is_distribution: bool


def dual_initial(link: SpectralLink, nu_star, tol: float = 1e-12) -> DualInitial:
    """Solve nu_hat (kron of links) = nu_star with per-dimension triangular solves.

    ``nu_star`` is a distribution over lattice states, flat or in lattice
    shape. The result can carry negative weights; ``is_distribution`` is set
    when it is entrywise nonnegative and sums to 1.
    """
    shape = link.dims
    size = prod(shape)
    nu = np.asarray(nu_star, dtype=float)
    if nu.size != size:
        raise ValueError(f"start vector has {nu.size} entries, expected {size}")
    tensor = nu.reshape(shape).copy()
    for axis, lam in enumerate(link.per_dim):
        moved = np.moveaxis(tensor, axis, 0)
        flat = moved.reshape(lam.shape[0], -1)
        solved = solve_triangular(lam, flat, trans="T", lower=True)
        tensor = np.moveaxis(solved.reshape(moved.shape), 0, axis)
    values = tensor.reshape(size)
    ok = values.min() >= -tol and abs(values.sum() - 1.0) <= 1e-9
    return DualInitial(values=values, is_distribution=bool(ok))


def support_dominates(dims, nu_star, nu_hat, tol: float = 1e-12) -> bool:
    """Check: every state charged by nu_star is dominated by a positive nu_hat state."""
    shape = tuple(dims)
    star = np.asarray(nu_star, dtype=float).reshape(shape)
    hat = np.asarray(nu_hat, dtype=float).reshape(shape)
    pos = list(zip(*np.nonzero(hat > tol)))
    for idx in zip(*np.nonzero(np.abs(star) > tol)):
        if not any(all(h >= s for h, s in zip(p, idx)) for p in pos):
            return False
    return True


def classical_ssd_1d(x: ErgodicBDSpec) -> tuple:
    """Sharp classical dual of a monotone ergodic walk and its link.

    Returns ``(dual_spec, link)`` where the dual is an absorbing chain on the
    same states with the top state absorbing, moving down with rate
    H(i-1) p'(i) / H(i) and up with rate H(i+1) q'(i+1) / H(i) for the
    cumulative stationary mass H, and link(i, j) = 1{j <= i} pi(j) / H(i).
    """
    if not bd_is_monotone(x):
        raise MonotonicityError("classical dual needs a monotone chain")
    m = x.M
    pi = bd_stationary(x)
    h = np.cumsum(pi)
    up = np.empty(m - 1)
    down = np.empty(m - 1)
    for i in range(1, m):
        up[i - 1] = h[i] * x.q[i - 1] / h[i - 1]  # q'(i+1) = x.q[i-1]
        down[i - 1] = (h[i - 2] if i >= 2 else 0.0) * x.p[i - 1] / h[i - 1]
    spec = BirthDeathSpec(N=m, p=tuple(up), q=tuple(down))
    link = np.tril(np.tile(pi, (m, 1))) / h[:, None]
    return spec, link


# -- lazy two-urn diffusion family (closed forms) ---------------------------


def ehrenfest_ergodic(n: int) -> ErgodicBDSpec:
    """Lazy two-urn walk on {1..n}: binomial stationary law, spectrum i/(n-1)."""
    if n < 3:
        raise SpecError("need at least 3 states")
    denom = 2.0 * (n - 1)
    p = tuple((n - i) / denom for i in range(1, n))
    q = tuple((i - 1) / denom for i in range(2, n + 1))
    return ErgodicBDSpec(M=n, p=p, q=q)


def ehrenfest_binomial_link(n: int) -> np.ndarray:
    """Link with rows binom(i-1, j-1) / 2^(i-1)."""
    out = np.zeros((n, n))
    for i in range(1, n + 1):
        for j in range(1, i + 1):
            out[i - 1, j - 1] = comb(i - 1, j - 1) / 2.0 ** (i - 1)
    return out


def ehrenfest_binomial_link_inv(n: int) -> np.ndarray:
    """Exact inverse: entries (-1)^(j-i) 2^(j-1) binom(i-1, j-1).

    Row i holds the coefficients of (2x - 1)^(i-1).
    """
    out = np.zeros((n, n))
    for i in range(1, n + 1):
        for j in range(1, i + 1):
            out[i - 1, j - 1] = (-1.0) ** (j - i) * 2.0 ** (j - 1) * comb(
                i - 1, j - 1
            )
    return out


def ehrenfest_dual_weights(n: int, m: int) -> np.ndarray:
    """Closed-form start weights of the pure-birth dual for start state m."""
    if not 1 <= m <= n:
        raise SpecError(f"start must lie in 1..{n}, got {m}")
    nu = np.zeros(n)
    if m == n:
        # already absorbed; the ratio form degenerates to 0/0 here but the
        # link route gives a point mass at the top
        nu[n - 1] = 1.0
        return nu
    denom = sum(comb(n - 1, k) for k in range(m))
    for j in range(1, m + 1):
        nu[j - 1] = (
            2.0 ** (j - 1)
            * (-1.0) ** (m + j)
            * (m - j + 1)
            * comb(n - 1, m)
            * comb(m, j - 1)
        ) / ((n - j) * denom)
    return nu


def ehrenfest_dual_weights_link_route(n: int, m: int) -> np.ndarray:
    """Same weights through the two-link matrix route, for cross-checking."""
    if not 1 <= m <= n:
        raise SpecError(f"start must lie in 1..{n}, got {m}")
    _, link_classical = classical_ssd_1d(ehrenfest_ergodic(n))
    nu_star = np.zeros(n)
    nu_star[m - 1] = 1.0
    return nu_star @ link_classical @ ehrenfest_binomial_link_inv(n)


def ehrenfest_pgf(n: int, m: int) -> MixturePgf:
    """pgf of the absorption time from state m, as a signed mixture of
    geometric-factor products with parameters (k-1)/(n-1)."""
    nu = ehrenfest_dual_weights(n, m)
    parts = []
    weights = []
    for j in range(1, m + 1):
        lam = tuple((k - 1.0) / (n - 1.0) for k in range(j, n))
        parts.append(GeometricProductPgf(scale=1.0, num=lam))
        weights.append(float(nu[j - 1]))
    return MixturePgf(scale=1.0, weights=tuple(weights), parts=tuple(parts))


def ehrenfest_expected_time(n: int, m: int) -> float:
    """Expected absorption time: (n-1) sum_j nu(j) sum_{k=j}^{n-1} 1/(n-k)."""
    nu = ehrenfest_dual_weights(n, m)
    total = 0.0
    for j in range(1, m + 1):
        total += nu[j - 1] * sum(1.0 / (n - k) for k in range(j, n))
    return (n - 1) * total


@dataclass(frozen=True, eq=False)
class EhrenfestForms:
    """Bundle of the closed forms for one (n, m) instance."""

    nu: np.ndarray
    pgf: MixturePgf
    expected_time: float


def ehrenfest_closed_forms(n: int, m: int) -> EhrenfestForms:
    return EhrenfestForms(
        nu=ehrenfest_dual_weights(n, m),
        pgf=ehrenfest_pgf(n, m),
        expected_time=ehrenfest_expected_time(n, m),
    )
