"""Extremal pairs and a hill-climbing search for the supremum of ``|dH| / gamma``."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

import numpy as np

from .bound import EDGE_TOL, _check_alpha_sub_one, _check_dim, _check_eps, gamma, max_eps
from .entropy import arce
from .errors import EpsOutOfRange, ParamOutOfRange, ShapeMismatch, TvBudgetExceeded, ZeroBound
from .prob_core import JointDistribution, as_joint, sample_pair_within_tv, tv_distance

STEP_SIZES = (1e-1, 1e-2, 1e-3)
RATIO_CEILING = 1.0 + 1e-9


def extremal_pair(d: int, ny: int, eps: float):
    """``(p, q)`` with ``q`` a point mass and ``p`` spreading ``eps`` evenly over the other rows."""
    d = _check_dim(d)
    if int(ny) != ny or ny < 1:
        raise ParamOutOfRange(f"ny must be an integer >= 1, got {ny!r}")
    eps = float(eps)
    if not (0.0 < eps <= max_eps(d) + EDGE_TOL):
        raise ParamOutOfRange(f"eps must lie in (0, {max_eps(d)!r}], got {eps!r}")
    eps = min(eps, max_eps(d))
    q = np.zeros((d, int(ny)))
    q[0, 0] = 1.0
    p = np.zeros((d, int(ny)))
    p[0, 0] = 1.0 - eps
    p[1:, 0] = eps / (d - 1)
    return JointDistribution(p), JointDistribution(q)


def saturation_ratio(p, q, alpha: float, eps: float) -> float:
    p, q = as_joint(p), as_joint(q)
    if p.shape != q.shape:
        raise ShapeMismatch(f"shapes differ: {p.shape} vs {q.shape}")
    alpha = _check_alpha_sub_one(alpha)
    if p.nx < 2:
        raise EpsOutOfRange("|X| = 1 leaves no admissible eps budget")
    eps = _check_eps(eps, p.nx)
    tv = tv_distance(p, q).value
    if eps == 0.0:
        if tv > 0.0:
            raise ZeroBound("gamma is 0 at eps = 0 but p != q")
        return 0.0
    if tv > eps + EDGE_TOL:
        raise TvBudgetExceeded(tv, eps)
    return abs(arce(p, alpha) - arce(q, alpha)) / gamma(alpha, eps, p.nx)


@dataclass
class SearchResult:
    best_ratio: float
    best_pair: tuple
    iterations: int
    seed: int
    visited: int = 0
    max_visited_ratio: float = 0.0
    violations: int = 0
    restarts: list = field(default_factory=list)

    def to_dict(self) -> dict:
        p, q = self.best_pair
        return {
            "best_ratio": self.best_ratio,
            "best_pair": [p.to_dict(), q.to_dict()],
            "iterations": self.iterations,
            "seed": self.seed,
            "visited": self.visited,
            "max_visited_ratio": self.max_visited_ratio,
            "violations": self.violations,
            "restarts": list(self.restarts),
        }


class _ArceTracker:
    """ARCE of a flat row-major matrix, updated one cell at a time.

    Keeps one statistic per column: ``ln(sum_x m^a) / a`` for ``a > 0`` and the
    support size for ``a == 0``.
    """

    def __init__(self, cells, nx, ny, alpha):
        self.nx, self.ny, self.alpha = nx, ny, alpha
        self.cells = list(cells)
        self.stats = [self._column_stat(y, self.cells) for y in range(ny)]

    def _column_stat(self, y, cells, override=None):
        a = self.alpha
        vals = [cells[x * self.ny + y] for x in range(self.nx)]
        if override:
            for k, v in override.items():
                if k % self.ny == y:
                    vals[k // self.ny] = v
        if a == 0.0:
            return sum(1 for v in vals if v > 0.0)
        s = 0.0
        for v in vals:
            if v > 0.0:
                s += v**a
        return math.log(s) / a if s > 0.0 else -math.inf

    def value(self, stats=None):
        stats = self.stats if stats is None else stats
        if self.alpha == 0.0:
            return math.log2(max(stats))
        top = max(stats)
        total = 0.0
        for s in stats:
            if s != -math.inf:
                total += math.exp(s - top)
        return self.alpha / (1.0 - self.alpha) * (top + math.log(total)) / math.log(2.0)

    def propose(self, changes):
        """Entropy after applying ``{cell: new_value}`` without committing."""
        stats = list(self.stats)
        for y in {k % self.ny for k in changes}:
            stats[y] = self._column_stat(y, self.cells, changes)
        return self.value(stats), stats

    def commit(self, changes, stats):
        for k, v in changes.items():
            self.cells[k] = v
        self.stats = stats


def _climb(p0, q0, alpha, eps, budget, rng, g):
    """Greedy single-cell transfer hill-climbing from ``(p0, q0)``."""
    pm, qm = p0.matrix, q0.matrix
    nx, ny = pm.shape
    n = nx * ny
    trackers = [_ArceTracker(pm.ravel().tolist(), nx, ny, alpha), _ArceTracker(qm.ravel().tolist(), nx, ny, alpha)]
    h = [trackers[0].value(), trackers[1].value()]
    diff = [a - b for a, b in zip(trackers[0].cells, trackers[1].cells)]
    tv = 0.5 * sum(abs(v) for v in diff)
    ratio = abs(h[0] - h[1]) / g
    visited, max_seen, violations = 0, ratio, int(ratio > RATIO_CEILING)
    for _ in range(budget):
        side = rng.randrange(2)
        tr = trackers[side]
        src = rng.randrange(n)
        mass = tr.cells[src]
        if mass <= 0.0:
            continue
        dst = rng.randrange(n - 1)
        dst += dst >= src
        # cap at the available mass so the proposal stays on the simplex
        s = min(STEP_SIZES[rng.randrange(3)], mass)
        new_src, new_dst = mass - s, tr.cells[dst] + s
        sign = 1.0 if side == 0 else -1.0
        d_src = diff[src] - sign * s
        d_dst = diff[dst] + sign * s
        new_tv = tv + 0.5 * (abs(d_src) - abs(diff[src]) + abs(d_dst) - abs(diff[dst]))
        if new_tv > eps:
            continue
        changes = {src: new_src, dst: new_dst}
        h_new, stats = tr.propose(changes)
        other = h[1 - side]
        r = abs(h_new - other) / g
        visited += 1
        if r > max_seen:
            max_seen = r
        if r > RATIO_CEILING:
            violations += 1
        if r > ratio:
            tr.commit(changes, stats)
            h[side] = h_new
            diff[src], diff[dst] = d_src, d_dst
            tv = 0.5 * sum(abs(v) for v in diff)
            ratio = r
    best = (
        JointDistribution(_renormalized(trackers[0].cells, nx, ny)),
        JointDistribution(_renormalized(trackers[1].cells, nx, ny)),
    )
    return ratio, best, visited, max_seen, violations


def _renormalized(cells, nx, ny):
    m = np.clip(np.asarray(cells, dtype=float).reshape(nx, ny), 0.0, None)
    return m / m.sum()


def search_sup_ratio(
    nx: int,
    ny: int,
    alpha: float,
    eps: float,
    budget: int,
    seed: int = 0,
    restarts: int = 4,
    seed_extremal: bool = True,
) -> SearchResult:
    """Randomized search for ``sup |dH| / gamma`` over pairs with ``TV <= eps``.

    ``budget`` proposals are split evenly over ``restarts`` climbs. When
    ``seed_extremal`` is set the first climb starts from :func:`extremal_pair`.
    Identical arguments give identical results.
    """
    if int(budget) != budget or budget < 1:
        raise ParamOutOfRange(f"budget must be an integer >= 1, got {budget!r}")
    alpha = _check_alpha_sub_one(alpha)
    nx = _check_dim(nx)
    if int(ny) != ny or ny < 1:
        raise ParamOutOfRange(f"ny must be an integer >= 1, got {ny!r}")
    eps = _check_eps(eps, nx)
    if eps <= 0.0:
        raise EpsOutOfRange("eps must be > 0 for a finite ratio")
    restarts = max(1, min(int(restarts), int(budget)))
    g = gamma(alpha, eps, nx)
    master = random.Random(seed)
    shares = [budget // restarts + (k < budget % restarts) for k in range(restarts)]

    best = None
    visited = violations = 0
    max_seen = 0.0
    log = []
    for k, share in enumerate(shares):
        sub_seed = master.randrange(2**32)
        if k == 0 and seed_extremal:
            p0, q0 = extremal_pair(nx, ny, eps)
        else:
            p0, q0 = sample_pair_within_tv(nx, ny, eps, seed=sub_seed)
            if tv_distance(p0, q0).value > eps:
                continue
        ratio, pair, n_vis, top, bad = _climb(p0, q0, alpha, eps, share, random.Random(sub_seed), g)
        visited += n_vis
        violations += bad
        max_seen = max(max_seen, top)
        log.append({"restart": k, "seed": sub_seed, "ratio": ratio})
        # strict comparison keeps the earlier restart on ties
        if best is None or ratio > best[0]:
            best = (ratio, pair)
    return SearchResult(
        best_ratio=float(best[0]),
        best_pair=best[1],
        iterations=int(budget),
        seed=seed,
        visited=visited,
        max_visited_ratio=float(max_seen),
        violations=violations,
        restarts=log,
    )


def extremal_local_max_gap(d: int, ny: int, alpha: float, eps: float, delta: float = 1e-3) -> float:
    """Largest ratio gain over every admissible single-cell ``delta`` transfer from the extremal pair.

    Non-positive (up to rounding) when the extremal pair is a local maximum.
    """
    p, q = extremal_pair(d, ny, eps)
    base = saturation_ratio(p, q, alpha, eps)
    gain = -math.inf
    for side in (0, 1):
        m = (p if side == 0 else q).matrix
        for src in zip(*np.nonzero(m > 0)):
            for dst in np.ndindex(m.shape):
                if dst == src:
                    continue
                s = min(delta, m[src])
                moved = m.copy()
                moved[src] -= s
                moved[dst] += s
                moved = np.clip(moved, 0.0, None)
                pair = (JointDistribution(moved), q) if side == 0 else (p, JointDistribution(moved))
                if tv_distance(*pair).value > eps:
                    continue
                gain = max(gain, saturation_ratio(pair[0], pair[1], alpha, eps) - base)
    return gain
