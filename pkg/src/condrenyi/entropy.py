"""Classical entropy functionals in bits: Shannon, Renyi, conditional Shannon, Arimoto-Renyi.

The Arimoto-Renyi conditional entropy (ARCE) of a joint ``p(x, y)`` is

    H_a(X|Y) = a/(1-a) * log2( sum_y [ sum_x p(x,y)^a ]^(1/a) ),

defined for ``a in [0, 1) U (1, inf)``. At ``a = 0`` the formula is indeterminate;
we return its ``a -> 0+`` limit ``log2 max_y |supp p(.|y)|``.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import AlphaOne, AlphaOutOfRange, OutOfRange
from .prob_core import as_joint, as_prob_vector

ALPHA_ONE_GUARD = 1e-6
LN2 = math.log(2.0)


def check_alpha(alpha: float, allow_one: bool = False) -> float:
    """Validate a Renyi order; ``alpha`` within ``1e-6`` of 1 raises :class:`AlphaOne`."""
    alpha = float(alpha)
    if not math.isfinite(alpha) or alpha < 0:
        raise AlphaOutOfRange(f"alpha must be a finite number >= 0, got {alpha!r}")
    if not allow_one and abs(alpha - 1.0) < ALPHA_ONE_GUARD:
        raise AlphaOne(f"alpha={alpha!r} is at the Shannon point; use the Shannon route")
    return alpha


def _xlog2x(v: np.ndarray) -> float:
    nz = v[v > 0]
    return float(np.sum(nz * np.log2(nz)))


def shannon_entropy(v) -> float:
    return max(0.0, -_xlog2x(as_prob_vector(v).entries))


def renyi_entropy(v, alpha: float) -> float:
    alpha = check_alpha(alpha)
    nz = as_prob_vector(v).entries
    nz = nz[nz > 0]
    if alpha == 0.0:
        return math.log2(nz.size)
    return math.log2(float(np.sum(nz**alpha))) / (1.0 - alpha)


def cond_shannon(p) -> float:
    """``H(X|Y) = H(XY) - H(Y)``; zero-marginal columns contribute nothing."""
    m = as_joint(p).matrix
    return max(0.0, -_xlog2x(m.ravel()) + _xlog2x(m.sum(axis=0)))


def column_log_norms(m: np.ndarray, alpha: float) -> np.ndarray:
    """Natural log of ``||m[:, y]||_alpha`` per column (``-inf`` for zero columns)."""
    powered = np.zeros_like(m, dtype=float)
    mask = m > 0
    powered[mask] = m[mask] ** alpha
    with np.errstate(divide="ignore"):
        return np.log(powered.sum(axis=0)) / alpha


def _logsumexp(a: np.ndarray) -> float:
    top = float(np.max(a))
    if top == -math.inf:
        return -math.inf
    return top + math.log(float(np.sum(np.exp(a - top))))


def arce_from_matrix(m: np.ndarray, alpha: float) -> float:
    """ARCE of a non-negative matrix without validation (internal fast path)."""
    if alpha == 0.0:
        live = m.sum(axis=0) > 0
        return math.log2(int((m[:, live] > 0).sum(axis=0).max()))
    # log-sum-exp keeps ||.||_alpha^(1/alpha) from overflowing for small alpha
    return alpha / (1.0 - alpha) * _logsumexp(column_log_norms(m, alpha)) / LN2


def arce(p, alpha: float) -> float:
    """Arimoto-Renyi conditional entropy ``H_alpha(X|Y)`` in bits."""
    alpha = check_alpha(alpha)
    return arce_from_matrix(as_joint(p).matrix, alpha)


def arce_weighted_form(p, alpha: float) -> float:
    """ARCE through ``a/(1-a) log2 sum_y p_Y(y) ||p_{X|Y=y}||_a``.

    Algebraically identical to :func:`arce`; kept as an independent evaluation route.
    """
    alpha = check_alpha(alpha)
    if alpha == 0.0:
        return arce(p, 0.0)
    m = as_joint(p).matrix
    total = 0.0
    for y in range(m.shape[1]):
        weight = m[:, y].sum()
        if weight <= 0:
            continue
        cond = m[:, y] / weight
        cond = cond[cond > 0]
        total += weight * float(np.sum(cond**alpha)) ** (1.0 / alpha)
    return alpha / (1.0 - alpha) * math.log2(total)


def binary_entropy(eps: float) -> float:
    eps = float(eps)
    if not 0.0 <= eps <= 1.0:
        raise OutOfRange(f"eps {eps!r} outside [0, 1]")
    if eps in (0.0, 1.0):
        return 0.0
    return -eps * math.log2(eps) - (1.0 - eps) * math.log2(1.0 - eps)
