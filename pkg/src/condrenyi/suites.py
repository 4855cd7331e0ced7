"""Randomized property suites for the majorization moves and the two monotonicity facts.

Each suite returns a :class:`SuiteReport` with pass/fail counts; nothing raises on a
failed instance, so the CLI can report counts and pick an exit status.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from .bound import _gap, g_mono, max_eps
from .majorization import check_orthogonal_padding, majorizes, spill_to_zero_slot, transfer_to_top

MONO_TOL = 1e-12
ALPHA_GRID = tuple(round(0.1 * k, 1) for k in range(1, 10))
DIM_GRID = (2, 3, 4, 5, 6)


@dataclass
class SuiteReport:
    name: str
    passed: int = 0
    failed: int = 0
    examples: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.failed == 0 and self.passed > 0

    def record(self, good: bool, detail=None):
        if good:
            self.passed += 1
        else:
            self.failed += 1
            if len(self.examples) < 5:
                self.examples.append(detail)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["ok"] = self.ok
        return out


def _random_vector(rng, d):
    v = rng.exponential(size=d)
    if rng.random() < 0.3:
        v[rng.random(d) < 0.3] = 0.0
    if v.sum() == 0:
        v[0] = 1.0
    return v / v.sum()


def top_transfer_suite(n: int = 10_000, seed: int = 0) -> SuiteReport:
    """Moving mass onto the largest entry of a sorted vector never loses majorization."""
    rng = np.random.default_rng(seed)
    rep = SuiteReport("top_transfer")
    while rep.passed + rep.failed < n:
        d = int(rng.integers(2, 9))
        v = np.sort(_random_vector(rng, d))[::-1]
        movable = np.nonzero(v[1:] > 0)[0] + 1
        if movable.size == 0:
            continue
        i = int(rng.choice(movable))
        s = float(v[i] * (1.0 if rng.random() < 0.2 else rng.uniform(1e-6, 1.0)))
        out = transfer_to_top(v, i, s)
        rep.record(majorizes(v, out).holds, {"v": v.tolist(), "i": i, "s": s})
    return rep


def zero_slot_suite(n: int = 10_000, seed: int = 1) -> SuiteReport:
    """Splitting mass into an empty slot yields a vector majorized by the original."""
    rng = np.random.default_rng(seed)
    rep = SuiteReport("zero_slot")
    while rep.passed + rep.failed < n:
        d = int(rng.integers(2, 9))
        v = _random_vector(rng, d)
        zeros = int(rng.integers(1, d))
        v[rng.choice(d, size=zeros, replace=False)] = 0.0
        if v.sum() == 0:
            continue
        v /= v.sum()
        i = int(rng.choice(np.nonzero(v > 0)[0]))
        j = int(rng.choice(np.nonzero(v == 0)[0]))
        s = float(v[i] * (1.0 if rng.random() < 0.2 else rng.uniform(1e-6, 1.0)))
        out = spill_to_zero_slot(v, i, j, s)
        rep.record(majorizes(out, v).holds, {"v": v.tolist(), "i": i, "j": j, "s": s})
    return rep


def padding_suite(n: int = 10_000, seed: int = 2) -> SuiteReport:
    """Adding a disjointly supported vector to both sides preserves majorization."""
    rng = np.random.default_rng(seed)
    rep = SuiteReport("orthogonal_padding")
    while rep.passed + rep.failed < n:
        d = int(rng.integers(2, 10))
        mask = rng.random(d) < 0.5
        if mask.all() or not mask.any():
            continue
        k = int(mask.sum())
        v = np.zeros(d)
        v[mask] = rng.exponential(size=k)
        # a random doubly-stochastic image on the shared support
        w = rng.exponential(size=(k, k))
        for _ in range(50):
            w /= w.sum(axis=1, keepdims=True)
            w /= w.sum(axis=0, keepdims=True)
        w /= w.sum(axis=1, keepdims=True)
        v2 = np.zeros(d)
        v2[mask] = v[mask] @ w
        # Sinkhorn leaves a 1e-16 column defect; rescale so totals agree
        v2 *= v.sum() / v2.sum()
        if not majorizes(v2, v).holds:
            continue
        perp = np.zeros(d)
        perp[~mask] = rng.exponential(size=d - k)
        rep.record(check_orthogonal_padding(v, v2, perp), {"v": v.tolist(), "v2": v2.tolist()})
    return rep


def step_e_grid(u_lo, n_points=100):
    return np.geomspace(u_lo, u_lo + 100.0, n_points)


def step_e_monotone_suite(alphas=ALPHA_GRID, dims=DIM_GRID, n_points: int = 100) -> SuiteReport:
    """``f(u) = log2[u^a + (d-1)^(1-a) t^a] - log2[(u+t)^a]`` is non-increasing for ``u >= 1 - t``."""
    rep = SuiteReport("step_e_decreasing")
    for a in alphas:
        for d in dims:
            for t in sorted({0.1, max_eps(d)}):
                u = step_e_grid(1.0 - t, n_points)
                f = np.array([_gap(x, a, d, t) for x in u])
                worst = float(np.max(np.diff(f)))
                rep.record(worst <= MONO_TOL, {"alpha": a, "d": d, "t_tilde": t, "rise": worst})
    return rep


def g_monotone_suite(alphas=ALPHA_GRID, dims=DIM_GRID, n_points: int = 100) -> SuiteReport:
    """``g(u) = (1-u)^a + (d-1)^(1-a) u^a`` is non-decreasing on ``(0, 1 - 1/d]``."""
    rep = SuiteReport("g_increasing")
    for a in alphas:
        for d in dims:
            for hi in sorted({0.1, max_eps(d)}):
                u = np.linspace(0.0, hi, n_points + 1)[1:]
                g = np.array([g_mono(x, a, d) for x in u])
                worst = float(np.min(np.diff(g)))
                rep.record(worst >= -MONO_TOL, {"alpha": a, "d": d, "upper": hi, "drop": worst})
    return rep


def run_all(n: int = 10_000, seed: int = 0) -> list:
    return [
        top_transfer_suite(n, seed),
        padding_suite(n, seed + 2),
        zero_slot_suite(n, seed + 1),
        step_e_monotone_suite(),
        g_monotone_suite(),
    ]
