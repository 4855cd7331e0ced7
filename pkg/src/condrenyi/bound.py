"""The tight uniform continuity bound for the ARCE and its supporting monotonicity facts.

For ``alpha in [0, 1)``, ``d = |X| >= 2`` and ``TV(p, q) <= eps <= 1 - 1/d``::

    |H_alpha(X|Y)_p - H_alpha(X|Y)_q| <= gamma(alpha, eps, d)
        = 1/(1-alpha) * log2((1-eps)^alpha + (d-1)^(1-alpha) * eps^alpha)
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

from .entropy import arce, binary_entropy
from .errors import AlphaOutOfRange, EpsOutOfRange, ParamOutOfRange, ShapeMismatch, TvBudgetExceeded
from .prob_core import as_joint, tv_distance

SLACK_TOL = 1e-9
EDGE_TOL = 1e-12


def max_eps(d: int) -> float:
    return 1.0 - 1.0 / d


def _check_alpha_sub_one(alpha):
    alpha = float(alpha)
    if not (0.0 <= alpha < 1.0):
        raise AlphaOutOfRange(f"alpha must lie in [0, 1), got {alpha!r}")
    return alpha


def _check_dim(d):
    if int(d) != d or d < 2:
        raise ParamOutOfRange(f"dimension must be an integer >= 2, got {d!r}")
    return int(d)


def _check_eps(eps, d):
    eps = float(eps)
    top = max_eps(d)
    if not (0.0 <= eps <= top + EDGE_TOL):
        raise EpsOutOfRange(f"eps must lie in [0, {top!r}], got {eps!r}")
    return min(eps, top)


def _pow(x, a):
    # 0**a := 0 for every a, including a == 0
    return 0.0 if x == 0.0 else x**a


def gamma(alpha: float, eps: float, d: int) -> float:
    """Right-hand side of the continuity bound, in bits. ``gamma(alpha, 0, d) == 0``."""
    alpha = _check_alpha_sub_one(alpha)
    d = _check_dim(d)
    eps = _check_eps(eps, d)
    if eps == 0.0:
        return 0.0
    inner = _pow(1.0 - eps, alpha) + (d - 1) ** (1.0 - alpha) * eps**alpha
    return math.log2(inner) / (1.0 - alpha)


def shannon_limit_bound(eps: float, d: int) -> float:
    """``eps*log2(d-1) + h(eps)``, the ``alpha -> 1`` limit of :func:`gamma`."""
    d = _check_dim(d)
    eps = _check_eps(eps, d)
    return eps * math.log2(d - 1) + binary_entropy(eps)


def f_step_e(u: float, alpha: float, d: int, t_tilde: float) -> float:
    """``log2[u^a + (d-1)^(1-a) t^a] - log2[(u + t)^a]``; non-increasing for ``u >= t/(d-1)``."""
    alpha = _check_alpha_sub_one(alpha)
    d = _check_dim(d)
    u = float(u)
    if u < 0:
        raise ParamOutOfRange(f"u must be >= 0, got {u!r}")
    t_tilde = float(t_tilde)
    if not (0.0 < t_tilde <= max_eps(d) + EDGE_TOL):
        raise ParamOutOfRange(f"t_tilde must lie in (0, {max_eps(d)!r}], got {t_tilde!r}")
    return _gap(u, alpha, d, t_tilde)


def _gap(u, alpha, d, t):
    """Unvalidated body of :func:`f_step_e`; also defined at ``t == 0`` (value 0)."""
    head = _pow(u, alpha) + (d - 1) ** (1.0 - alpha) * _pow(t, alpha)
    tail = _pow(u + t, alpha)
    return math.log2(head) - math.log2(tail)


def g_mono(u: float, alpha: float, d: int) -> float:
    """``(1-u)^a + (d-1)^(1-a) u^a``, non-decreasing on ``(0, 1 - 1/d]``."""
    alpha = _check_alpha_sub_one(alpha)
    d = _check_dim(d)
    u = float(u)
    if not (0.0 < u <= max_eps(d) + EDGE_TOL):
        raise ParamOutOfRange(f"u must lie in (0, {max_eps(d)!r}], got {u!r}")
    return _pow(1.0 - u, alpha) + (d - 1) ** (1.0 - alpha) * u**alpha


@dataclass
class BoundCertificate:
    alpha: float
    eps_budget: float
    dimension: int
    tv_actual: float
    lhs: float
    rhs: float
    slack: float
    holds: bool
    checks: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def make_certificate(alpha, eps_budget, dimension, tv_actual, lhs, rhs, checks=None):
    slack = rhs - lhs
    return BoundCertificate(
        alpha=float(alpha),
        eps_budget=float(eps_budget),
        dimension=int(dimension),
        tv_actual=float(tv_actual),
        lhs=float(lhs),
        rhs=float(rhs),
        slack=float(slack),
        holds=bool(slack >= -SLACK_TOL),
        checks=dict(checks or {}),
    )


def check_continuity_bound(p, q, alpha: float, eps_budget: float) -> BoundCertificate:
    """Certify ``|arce(p) - arce(q)| <= gamma(alpha, eps_budget, nx)``.

    Raises :class:`TvBudgetExceeded` (no certificate) when ``TV(p, q) > eps_budget``.
    """
    p, q = as_joint(p), as_joint(q)
    if p.shape != q.shape:
        raise ShapeMismatch(f"shapes differ: {p.shape} vs {q.shape}")
    alpha = _check_alpha_sub_one(alpha)
    if p.nx < 2:
        raise EpsOutOfRange("|X| = 1 leaves no admissible eps budget")
    eps_budget = _check_eps(eps_budget, p.nx)
    if eps_budget <= 0.0:
        raise EpsOutOfRange("eps_budget must be > 0")
    tv = tv_distance(p, q).value
    if tv > eps_budget + EDGE_TOL:
        raise TvBudgetExceeded(tv, eps_budget)
    lhs = abs(arce(p, alpha) - arce(q, alpha))
    return make_certificate(alpha, eps_budget, p.nx, tv, lhs, gamma(alpha, eps_budget, p.nx))
