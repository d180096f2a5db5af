"""Siegmund duality on products of total orders.

The coordinatewise order on the lattice is encoded by a 0/1 indicator matrix
C (a Kronecker product of one-dimensional "upper triangle of ones" factors)
whose inverse is the Mobius function of the order. Conjugating with C turns
absorption probabilities of the game chain into the stationary distribution
of an ergodic partner chain, which is what makes the product formula for
winning probabilities checkable by three independent routes.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .birth_death import bd_win_prob
from .errors import InternalCheckError
from .game import AbsorbingChain, GameSpec
from .linalg import as_matrix


@dataclass(frozen=True, eq=False)
class OrderMatrix:
    """Indicator of the product order and its exact integer inverse."""

    c: np.ndarray
    mobius: np.ndarray
    dims: tuple


def product_order(dims) -> OrderMatrix:
    """Order matrix C = kron of total-order indicators, with Mobius inverse.

    Each one-dimensional factor is upper triangular ones; its inverse is the
    bidiagonal +1/-1 matrix, and both Kronecker products are exact in integer
    arithmetic.
    """
    dims = tuple(int(n) for n in dims)
    cs = [np.triu(np.ones((n, n), dtype=np.int64)) for n in dims]
    mus = [
        np.eye(n, dtype=np.int64) - np.eye(n, k=1, dtype=np.int64) for n in dims
    ]
    c = reduce(np.kron, cs)
    mobius = reduce(np.kron, mus)
    size = c.shape[0]
    if not np.array_equal(c @ mobius, np.eye(size, dtype=np.int64)):
        raise InternalCheckError("order matrix inverse is not exact")
    return OrderMatrix(c=c, mobius=mobius, dims=dims)


def siegmund_dual(p_x, order: OrderMatrix) -> np.ndarray:
    """Dual kernel (C^-1 P C)^T of a stochastic matrix on the ordered lattice.

    The result is substochastic exactly when the input is Mobius monotone;
    classification is left to the caller.
    """
    p_x = as_matrix(p_x)
    c = order.c.astype(float)
    mobius = order.mobius.astype(float)
    return (mobius @ p_x @ c).T


def reconstruct_primal(chain: AbsorbingChain, order: OrderMatrix) -> np.ndarray:
    """Ergodic partner C (P')^T C^-1 of a built game's restricted matrix.

    Row sums are exactly 1; entrywise nonnegativity is equivalent to the
    Mobius monotonicity of the partner and holds for valid games.
    """
    c = order.c.astype(float)
    mobius = order.mobius.astype(float)
    return c @ chain.restricted().T @ mobius


def win_prob_product(game: GameSpec) -> np.ndarray:
    """Winning probabilities as the product of per-dimension probabilities.

    Indexed over lattice states in linear order (coordinate d fastest).
    """
    return reduce(np.kron, [bd_win_prob(s) for s in game.dims])


def win_prob_solve(chain: AbsorbingChain) -> np.ndarray:
    """Winning probabilities from the fundamental-matrix solve on the built chain."""
    size = chain.size
    win = chain.win_index
    idx = chain.transient_indices()
    out = np.ones(size)
    if len(idx):
        q = chain.matrix[np.ix_(idx, idx)]
        rhs = chain.matrix[idx, win]
        out[: size - 1] = np.linalg.solve(np.eye(len(idx)) - q, rhs)
    return out


def stationary_of(p_x: np.ndarray) -> np.ndarray:
    """Left unit eigenvector of a reconstructed partner chain, normalized to 1.

    Uses a dense eigensolve so it stays meaningful even when the partner has
    tiny negative entries from rounding.
    """
    vals, vecs = np.linalg.eig(p_x.T)
    k = int(np.argmin(np.abs(vals - 1.0)))
    pi = np.real(vecs[:, k])
    pi = pi / pi.sum()
    return pi


def win_prob_pi_route(chain: AbsorbingChain, order: OrderMatrix | None = None) -> np.ndarray:
    """Winning probabilities as cumulative stationary mass of the partner chain.

    Third, duality-based route: reconstruct the ergodic partner, find its
    stationary vector, and accumulate it through the order matrix.
    """
    if order is None:
        order = product_order(chain.dims)
    p_x = reconstruct_primal(chain, order)
    pi = stationary_of(p_x)
    return pi @ order.c.astype(float)
