"""Vector majorization, X-majorization of joint matrices, and the mass-transfer moves.

Indices are 0-based throughout: the "top" entry of a vector is index 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .entropy import arce
from .errors import (
    LengthMismatch,
    NegativeEntry,
    NotSorted,
    PreconditionNotMet,
    ShapeMismatch,
    SlotNotZero,
    SupportOverlap,
    TransferTooLarge,
)
from .prob_core import as_joint

MAJ_TOL = 1e-12
MARGINAL_TOL = 1e-10


@dataclass(frozen=True)
class MajorizationVerdict:
    """Outcome of a majorization test.

    ``failing_prefix`` is the length ``k`` of the first sorted prefix whose sum
    breaks the inequality; ``failing_column`` is set by :func:`x_majorizes`.
    """

    holds: bool
    failing_prefix: Optional[int] = None
    sum_mismatch: Optional[float] = None
    failing_column: Optional[int] = None

    def __bool__(self):
        return self.holds


def _vec(v) -> np.ndarray:
    a = np.asarray(v, dtype=float)
    if a.ndim != 1:
        raise LengthMismatch(f"expected a 1-d sequence, got shape {a.shape}")
    if np.any(a < -MAJ_TOL):
        raise NegativeEntry("majorization is defined here for non-negative vectors")
    return a


def sorted_prefix_sums(v) -> np.ndarray:
    # stable descending sort: ties keep their input order
    a = np.asarray(v, dtype=float)
    order = np.argsort(-a, kind="stable")
    return np.cumsum(a[order])


def majorizes(u, v, tol: float = MAJ_TOL) -> MajorizationVerdict:
    """Test ``u ≺ v`` (``u`` is majorized by ``v``)."""
    u, v = _vec(u), _vec(v)
    if u.shape != v.shape:
        raise LengthMismatch(f"lengths differ: {u.size} vs {v.size}")
    cu, cv = sorted_prefix_sums(u), sorted_prefix_sums(v)
    bad = np.nonzero(cu[:-1] > cv[:-1] + tol)[0]
    if bad.size:
        return MajorizationVerdict(False, failing_prefix=int(bad[0]) + 1)
    mismatch = float(cu[-1] - cv[-1])
    if abs(mismatch) > tol:
        return MajorizationVerdict(False, sum_mismatch=mismatch)
    return MajorizationVerdict(True)


def _matrix(m) -> np.ndarray:
    if hasattr(m, "matrix"):
        return np.asarray(m.matrix)
    return np.asarray(as_joint(m).matrix)


def x_majorizes(q, p) -> MajorizationVerdict:
    """Test ``q ≺_X p``: equal Y-marginals and every column of ``q`` majorized by that of ``p``.

    Columns are compared unnormalized, so a zero column is only majorized by a
    zero column.
    """
    qm, pm = _matrix(q), _matrix(p)
    if qm.shape != pm.shape:
        raise ShapeMismatch(f"shapes differ: {qm.shape} vs {pm.shape}")
    diff = qm.sum(axis=0) - pm.sum(axis=0)
    off = np.nonzero(np.abs(diff) > MARGINAL_TOL)[0]
    if off.size:
        y = int(off[0])
        return MajorizationVerdict(False, sum_mismatch=float(diff[y]), failing_column=y)
    for y in range(qm.shape[1]):
        verdict = majorizes(qm[:, y], pm[:, y])
        if not verdict.holds:
            return MajorizationVerdict(
                False, verdict.failing_prefix, verdict.sum_mismatch, failing_column=y
            )
    return MajorizationVerdict(True)


def transfer_to_top(v, i: int, s: float) -> np.ndarray:
    """Move mass ``s`` from entry ``i`` of a non-increasing vector onto entry 0.

    The result majorizes the input.
    """
    v = _vec(v)
    if np.any(np.diff(v) > 0):
        raise NotSorted("vector must be sorted non-increasing")
    if not 1 <= i < v.size:
        raise IndexError(f"index {i} must lie in 1..{v.size - 1}")
    if not 0 < s <= v[i]:
        raise TransferTooLarge(f"transfer {s!r} must lie in (0, {v[i]!r}]")
    out = v.copy()
    out[0] += s
    out[i] -= s
    return out


def spill_to_zero_slot(v, i: int, j: int, s: float) -> np.ndarray:
    """Split mass ``s`` off entry ``i`` into the empty slot ``j``; the result is majorized by ``v``."""
    v = _vec(v)
    if i == j:
        raise IndexError("source and slot must differ")
    if v[j] != 0:
        raise SlotNotZero(f"slot {j} holds {v[j]!r}, expected 0")
    if not 0 < s <= v[i]:
        raise TransferTooLarge(f"transfer {s!r} must lie in (0, {v[i]!r}]")
    out = v.copy()
    out[i] -= s
    out[j] = s
    return out


def check_orthogonal_padding(v, v2, perp) -> bool:
    """Padding both sides of ``v2 ≺ v`` by a disjointly supported ``perp`` preserves majorization."""
    v, v2, perp = _vec(v), _vec(v2), _vec(perp)
    if not v.shape == v2.shape == perp.shape:
        raise LengthMismatch("all three vectors must have equal length")
    if np.any((perp > 0) & ((v > 0) | (v2 > 0))):
        raise SupportOverlap("perp must vanish wherever v or v2 is non-zero")
    if not majorizes(v2, v).holds:
        raise PreconditionNotMet("v2 is not majorized by v")
    return majorizes(v2 + perp, v + perp).holds


def marginal_schur_concavity_witness(p, q, alpha: float) -> bool:
    """For ``q ≺_X p`` report whether ``arce(p) <= arce(q) + 1e-9``."""
    if not x_majorizes(q, p).holds:
        raise PreconditionNotMet("q is not X-majorized by p")
    return arce(p, alpha) <= arce(q, alpha) + 1e-9


def t_transform(v, i: int, j: int, lam: float) -> np.ndarray:
    """Apply ``lam*I + (1-lam)*P_ij`` (``P_ij`` the transposition of ``i`` and ``j``)."""
    out = np.array(v, dtype=float)
    a, b = out[i], out[j]
    out[i] = lam * a + (1 - lam) * b
    out[j] = lam * b + (1 - lam) * a
    return out


def random_doubly_stochastic(d: int, rng, n_transforms: int = 5) -> np.ndarray:
    """Product of random T-transforms; always doubly stochastic."""
    mat = np.eye(d)
    if d < 2:
        return mat
    for _ in range(n_transforms):
        i, j = rng.choice(d, size=2, replace=False)
        lam = rng.random()
        t = np.eye(d)
        t[i, i] = t[j, j] = lam
        t[i, j] = t[j, i] = 1 - lam
        mat = t @ mat
    return mat


def mix_columns(p, rng, n_transforms: int = 5):
    """Return ``q`` with ``q ≺_X p`` by applying a random doubly-stochastic map per column."""
    pm = _matrix(p)
    cols = [random_doubly_stochastic(pm.shape[0], rng, n_transforms) @ pm[:, y] for y in range(pm.shape[1])]
    return as_joint(np.column_stack(cols))


# A finite family of convex symmetric functions for spot-checking the
# conditional-majorization characterization.
def _top_k_sum(v, k):
    return float(np.sort(v)[::-1][:k].sum())


CONVEX_SYMMETRIC_FAMILY = {
    "max": lambda v: float(np.max(v)),
    "top2_sum": lambda v: _top_k_sum(v, 2),
    "norm2": lambda v: float(np.linalg.norm(v, 2)),
    "norm3": lambda v: float(np.sum(np.abs(v) ** 3) ** (1 / 3)),
}


def weighted_phi(p, phi) -> float:
    """``sum_y p_Y(y) * phi(p_{X|Y=y})`` over columns with positive marginal."""
    pm = _matrix(p)
    total = 0.0
    for y in range(pm.shape[1]):
        w = pm[:, y].sum()
        if w > 0:
            total += w * phi(pm[:, y] / w)
    return total
