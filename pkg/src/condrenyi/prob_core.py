"""Validated probability vectors and joint distributions, distances, and samplers.

Joint distributions over ``X x Y`` are stored as ``|X| x |Y|`` matrices:
row ``x``, column ``y``. Columns are the (unnormalized) conditional slices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NegativeEntry, NotNormalized, ParamOutOfRange, ShapeMismatch, ZeroMarginal

TAU_NORM = 1e-9


def _clean(arr, ndim):
    a = np.array(arr, dtype=float)
    if a.ndim != ndim or a.size == 0:
        raise ShapeMismatch(f"expected a non-empty {ndim}-d array, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NegativeEntry("entries must be finite")
    if np.any(a < -TAU_NORM):
        raise NegativeEntry(f"entry {a.min()!r} is negative")
    a[a < 0] = 0.0
    total = a.sum()
    if abs(total - 1.0) > TAU_NORM:
        raise NotNormalized(f"entries sum to {total!r}, not 1")
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class ProbVector:
    entries: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "entries", _clean(self.entries, 1))

    def __len__(self):
        return len(self.entries)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)

    def sorted_desc(self) -> np.ndarray:
        return np.sort(self.entries)[::-1]


@dataclass(frozen=True, eq=False)
class JointDistribution:
    """Joint distribution ``p(x, y)`` as an ``nx x ny`` read-only matrix."""

    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "matrix", _clean(self.matrix, 2))

    @property
    def nx(self) -> int:
        return self.matrix.shape[0]

    @property
    def ny(self) -> int:
        return self.matrix.shape[1]

    @property
    def shape(self):
        return self.matrix.shape

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)

    def to_dict(self) -> dict:
        return {"nx": self.nx, "ny": self.ny, "matrix": self.matrix.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "JointDistribution":
        joint = cls(np.asarray(data["matrix"], dtype=float))
        if "nx" in data and "ny" in data and (data["nx"], data["ny"]) != joint.shape:
            raise ShapeMismatch(
                f"declared shape {(data['nx'], data['ny'])} != matrix shape {joint.shape}"
            )
        return joint


@dataclass(frozen=True)
class TvDistance:
    value: float

    def __post_init__(self):
        if not 0.0 <= self.value <= 1.0:
            raise ParamOutOfRange(f"total variation {self.value!r} outside [0, 1]")

    def __float__(self):
        return float(self.value)


def validate_joint(matrix) -> JointDistribution:
    """Validate a rectangular matrix as a joint distribution.

    Entries in ``[-TAU_NORM, 0)`` are clamped to zero; anything more negative
    raises :class:`NegativeEntry`, and a total off by more than ``TAU_NORM``
    raises :class:`NotNormalized`.
    """
    if isinstance(matrix, JointDistribution):
        return matrix
    try:
        arr = np.array(matrix, dtype=float)
    except ValueError as exc:  # ragged input
        raise ShapeMismatch(f"matrix is not rectangular: {exc}") from None
    return JointDistribution(arr)


as_joint = validate_joint


def as_prob_vector(v) -> ProbVector:
    return v if isinstance(v, ProbVector) else ProbVector(np.asarray(v, dtype=float))


def tv_distance(p, q) -> TvDistance:
    p, q = as_joint(p), as_joint(q)
    if p.shape != q.shape:
        raise ShapeMismatch(f"shapes differ: {p.shape} vs {q.shape}")
    value = 0.5 * float(np.abs(p.matrix - q.matrix).sum())
    return TvDistance(min(value, 1.0))


def marginal_y(p) -> ProbVector:
    return ProbVector(as_joint(p).matrix.sum(axis=0))


def marginal_x(p) -> ProbVector:
    return ProbVector(as_joint(p).matrix.sum(axis=1))


def conditional_column(p, y: int) -> ProbVector:
    """Conditional distribution ``p(. | Y=y)`` (``y`` is a 0-based column index)."""
    p = as_joint(p)
    col = p.matrix[:, y]
    weight = col.sum()
    if weight <= 0.0:
        raise ZeroMarginal(f"column {y} has zero marginal probability")
    return ProbVector(col / weight)


def product_joint(px, py) -> JointDistribution:
    return JointDistribution(np.outer(np.asarray(px, float), np.asarray(py, float)))


def _rng(seed):
    return np.random.default_rng(seed)


def _dirichlet_flat(rng, shape):
    draws = rng.exponential(size=shape)
    return draws / draws.sum()


def sample_random_joint(nx: int, ny: int, seed=None) -> JointDistribution:
    """Flat-Dirichlet joint distribution, deterministic in ``seed``."""
    if nx < 1 or ny < 1:
        raise ParamOutOfRange("nx and ny must be >= 1")
    return JointDistribution(_dirichlet_flat(_rng(seed), (nx, ny)))


def perturb_within_tv(p, eps: float, rng) -> JointDistribution:
    """Move a total mass ``u <= eps`` out of random cells of ``p`` into random cells.

    The returned ``q`` satisfies ``TV(p, q) <= u``.
    """
    p = as_joint(p)
    if not 0.0 <= eps <= 1.0:
        raise ParamOutOfRange(f"eps {eps!r} outside [0, 1]")
    base = p.matrix.ravel()
    n = base.size
    # half the draws use the whole budget so the boundary TV = eps is exercised
    u = eps if rng.random() < 0.5 else eps * rng.random()
    if u == 0.0 or n == 1:
        return JointDistribution(p.matrix.copy())

    sources = rng.random(n) < rng.uniform(0.2, 1.0)
    if not sources.any():
        sources[rng.integers(n)] = True
    frac = np.where(rng.random(n) < 0.3, 1.0, rng.random(n)) * sources
    available = base * frac
    if available.sum() < u:
        # take whole cells if the random fractions do not cover the budget
        available = base * sources
        if available.sum() < u:
            available = base
    removed = available * min(1.0, u / available.sum())
    moved = removed.sum()

    targets = rng.random(n) < rng.uniform(0.1, 1.0)
    if not targets.any():
        targets[rng.integers(n)] = True
    weights = rng.exponential(size=n) * targets
    added = moved * weights / weights.sum()

    q = np.clip(base - removed, 0.0, None) + added
    return JointDistribution(q.reshape(p.shape))


def sample_pair_within_tv(nx: int, ny: int, eps: float, seed=None):
    """Sample ``(p, q)`` with ``tv_distance(p, q) <= eps``, deterministic in ``seed``."""
    if not 0.0 <= eps <= 1.0:
        raise ParamOutOfRange(f"eps {eps!r} outside [0, 1]")
    if nx < 1 or ny < 1:
        raise ParamOutOfRange("nx and ny must be >= 1")
    rng = _rng(seed)
    p = JointDistribution(_dirichlet_flat(rng, (nx, ny)))
    if eps == 0.0:
        return p, JointDistribution(p.matrix.copy())
    for _ in range(8):
        q = perturb_within_tv(p, eps, rng)
        if tv_distance(p, q).value <= eps:
            return p, q
    # rounding pushed TV a hair past eps; fall back to a shrunk move
    return p, perturb_within_tv(p, eps * (1 - 1e-9), rng)
