"""Constructive derivation of the ARCE continuity bound as certified matrix moves.

Given ``arce(p) >= arce(q)`` and ``t = TV(p, q)``:

* A (reorder)  -- permute columns so ``q_Y`` is non-increasing, and rows inside each
  column so ``I_y = {x : q >= p}`` comes first, each block sorted by ``q``.
* B (walk)     -- concentrate ``q`` onto row 0 of every column; ``arce(q)`` can only drop.
* C (enlarge)  -- pad to ``2|X|-1`` rows and split ``p`` into ``q``-matching rows plus
  residual rows; ``arce(p)`` can only grow.
* D (bound)    -- Minkowski / reverse-Minkowski bounds on the two entropies.
* E (conclude) -- monotonicity in ``R`` and in ``t_tilde`` yields ``gamma(alpha, eps, |X|)``.

Each step records boolean certificates; D and E record both sides of every inequality.
Row and column indices are 0-based.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bound import EDGE_TOL, _gap, gamma, max_eps
from .entropy import LN2, arce_from_matrix, column_log_norms
from .errors import AlphaOutOfRange, ChainViolation, NotReordered, NotWalked, ShapeMismatch, TvBudgetExceeded
from .majorization import x_majorizes
from .prob_core import as_joint

INVARIANT_TOL = 1e-12
CHAIN_TOL = 1e-10
FINAL_TOL = 1e-9


@dataclass
class StepSnapshot:
    label: str
    p: np.ndarray
    q: np.ndarray
    delta_h: float
    tv: float
    alpha: float
    certificates: dict = field(default_factory=dict)
    scalars: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.certificates.values())

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "p": self.p.tolist(),
            "q": self.q.tolist(),
            "delta_h": self.delta_h,
            "tv": self.tv,
            "certificates": dict(self.certificates),
            "scalars": dict(self.scalars),
        }


@dataclass
class PipelineTrace:
    steps: list
    alpha: float
    t: float
    t_tilde: float
    r_matrix: np.ndarray
    final_bound: float
    eps: float
    delta_h_original: float
    swapped: bool = False

    @property
    def delta_h(self) -> list:
        return [s.delta_h for s in self.steps]

    @property
    def ok(self) -> bool:
        return all(s.ok for s in self.steps)

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "t": self.t,
            "t_tilde": self.t_tilde,
            "eps": self.eps,
            "final_bound": self.final_bound,
            "delta_h_original": self.delta_h_original,
            "swapped": self.swapped,
            "r_matrix": self.r_matrix.tolist(),
            "steps": [s.to_dict() for s in self.steps],
        }


def _tv(a, b):
    return 0.5 * float(np.abs(a - b).sum())


def _arce(m, alpha):
    return arce_from_matrix(m, alpha)


def _check_alpha_open(alpha):
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise AlphaOutOfRange(f"the constructive chain needs alpha in (0, 1), got {alpha!r}")
    return alpha


def _close(a, b, tol=INVARIANT_TOL):
    return bool(abs(a - b) <= tol)


# -- Step A -------------------------------------------------------------------


def step_a_reorder(p, q, alpha: float) -> StepSnapshot:
    p, q = as_joint(p), as_joint(q)
    if p.shape != q.shape:
        raise ShapeMismatch(f"shapes differ: {p.shape} vs {q.shape}")
    alpha = _check_alpha_open(alpha)
    pm, qm = p.matrix, q.matrix

    cols = np.argsort(-qm.sum(axis=0), kind="stable")
    pm, qm = pm[:, cols].copy(), qm[:, cols].copy()
    i_sizes = []
    for y in range(qm.shape[1]):
        qc, pc = qm[:, y], pm[:, y]
        rows_i = np.nonzero(qc >= pc)[0]
        rows_c = np.nonzero(qc < pc)[0]
        rows_i = rows_i[np.argsort(-qc[rows_i], kind="stable")]
        rows_c = rows_c[np.argsort(-qc[rows_c], kind="stable")]
        order = np.concatenate([rows_i, rows_c])
        pm[:, y], qm[:, y] = pc[order], qc[order]
        i_sizes.append(int(rows_i.size))

    hp0, hq0 = _arce(p.matrix, alpha), _arce(q.matrix, alpha)
    hp, hq = _arce(pm, alpha), _arce(qm, alpha)
    t0, t = _tv(p.matrix, q.matrix), _tv(pm, qm)
    return StepSnapshot(
        label="A",
        p=pm,
        q=qm,
        delta_h=hp - hq,
        tv=t,
        alpha=alpha,
        certificates={
            "arce_p_unchanged": _close(hp, hp0),
            "arce_q_unchanged": _close(hq, hq0),
            "tv_unchanged": _close(t, t0),
        },
        scalars={"arce_p": hp, "arce_q": hq, "i_sizes": i_sizes},
    )


def _assert_reordered(snap: StepSnapshot):
    pm, qm = snap.p, snap.q
    if np.any(np.diff(qm.sum(axis=0)) > INVARIANT_TOL):
        raise NotReordered("columns are not sorted by non-increasing q_Y")
    for y in range(qm.shape[1]):
        in_i = qm[:, y] >= pm[:, y]
        k = int(in_i.sum())
        if not in_i[:k].all():
            raise NotReordered(f"column {y}: rows of I_y do not come first")
        for block in (qm[:k, y], qm[k:, y]):
            if np.any(np.diff(block) > 0):
                raise NotReordered(f"column {y}: q is not non-increasing inside a block")


# -- Step B -------------------------------------------------------------------


def _walk_column(qc, pc):
    """Concentrate one column of ``q`` onto row 0 without changing ``|q - p|_1``."""
    v = qc.copy()
    k = int((qc >= pc).sum())
    if k > 0:
        # rows 1..k-1 are the rest of I_y: hand their excess to row 0
        for i in range(1, k):
            v[0] += qc[i] - pc[i]
            v[i] = pc[i]
    else:
        for i in range(1, v.size):
            cap = pc[0] - v[0]
            if cap <= 0:
                break
            if v[i] >= cap:
                v[i] -= cap
                v[0] = pc[0]
            else:
                v[0] += v[i]
                v[i] = 0.0
    return v


def step_b_walk(snapshot: StepSnapshot) -> StepSnapshot:
    if snapshot.label != "A":
        raise NotReordered(f"expected a Step A snapshot, got {snapshot.label!r}")
    _assert_reordered(snapshot)
    alpha = snapshot.alpha
    pm, q_old = snapshot.p, snapshot.q
    q_new = np.column_stack([_walk_column(q_old[:, y], pm[:, y]) for y in range(pm.shape[1])])

    in_j = q_new[0] >= pm[0]
    cols = np.concatenate([np.nonzero(in_j)[0], np.nonzero(~in_j)[0]])
    pm, q_new, q_old = pm[:, cols], q_new[:, cols], q_old[:, cols]
    n_j = int(in_j.sum())

    t = _tv(pm, q_new)
    hp, hq_old, hq = _arce(pm, alpha), _arce(q_old, alpha), _arce(q_new, alpha)
    rest = (q_new[1:] - pm[1:])
    cond_j = bool(np.all(q_new[0, :n_j] >= pm[0, :n_j]) and np.all(rest[:, :n_j] <= 0))
    cond_jc = bool(np.all(q_new[0, n_j:] < pm[0, n_j:]) and np.all(q_new[1:, n_j:] == 0))
    excess_j = float(np.sum(q_new[0, :n_j] - pm[0, :n_j]))
    return StepSnapshot(
        label="B",
        p=pm,
        q=q_new,
        delta_h=hp - hq,
        tv=t,
        alpha=alpha,
        certificates={
            "q_old_x_majorized_by_q_new": x_majorizes(q_old, q_new).holds,
            "arce_q_not_increased": bool(hq <= hq_old + INVARIANT_TOL),
            "tv_unchanged": _close(t, snapshot.tv),
            "columns_in_J_conditions": cond_j,
            "columns_in_Jc_conditions": cond_jc,
            "excess_on_J_equals_tv": _close(excess_j, t),
        },
        scalars={"arce_p": hp, "arce_q": hq, "n_j": n_j, "excess_on_J": excess_j},
    )


def _assert_walked(snap: StepSnapshot):
    pm, qm = snap.p, snap.q
    in_j = qm[0] >= pm[0]
    n_j = int(in_j.sum())
    if not in_j[:n_j].all():
        raise NotWalked("columns of J do not precede those of J^c")
    if np.any(qm[1:, :n_j] > pm[1:, :n_j]) or np.any(qm[1:, n_j:] != 0):
        raise NotWalked("rows below the top are not dominated by p / not drained")


# -- Step C -------------------------------------------------------------------


def step_c_enlarge(snapshot: StepSnapshot) -> StepSnapshot:
    if snapshot.label != "B":
        raise NotWalked(f"expected a Step B snapshot, got {snapshot.label!r}")
    _assert_walked(snapshot)
    alpha = snapshot.alpha
    pm, qm = snapshot.p, snapshot.q
    n, ny = pm.shape
    p_pad = np.zeros((2 * n - 1, ny))
    q_pad = np.zeros((2 * n - 1, ny))
    p_pad[:n], q_pad[:n] = pm, qm
    p_split = np.zeros_like(p_pad)
    p_split[0] = pm[0]
    p_split[1:n] = qm[1:]
    p_split[n:] = pm[1:] - qm[1:]

    n_j = int((qm[0] >= pm[0]).sum())
    t = snapshot.tv
    t_tilde = float(p_split[n:].sum())
    t_tilde_alt = t - float(np.sum(pm[0, n_j:] - qm[0, n_j:]))
    hp_pad, hp = _arce(p_pad, alpha), _arce(p_split, alpha)
    hq = _arce(q_pad, alpha)
    tv_new = _tv(p_split, q_pad)
    return StepSnapshot(
        label="C",
        p=p_split,
        q=q_pad,
        delta_h=hp - hq,
        tv=tv_new,
        alpha=alpha,
        certificates={
            "p_split_x_majorized_by_p_pad": x_majorizes(p_split, p_pad).holds,
            "arce_p_not_decreased": bool(hp >= hp_pad - INVARIANT_TOL),
            "q_unchanged": bool(np.array_equal(q_pad[:n], qm) and not q_pad[n:].any()),
            "tv_unchanged": _close(tv_new, t),
            "t_tilde_le_t": bool(t_tilde <= t + INVARIANT_TOL),
            "t_tilde_identity": _close(t_tilde, t_tilde_alt),
        },
        scalars={"arce_p": hp, "arce_q": hq, "t_tilde": t_tilde, "n_j": n_j},
    )


# -- Steps D and E ------------------------------------------------------------


def _log_norm_rows(w_log, alpha):
    """ln of ``|| exp(w_log) ||_{1/alpha}``, computed stably."""
    return alpha * _lse(w_log / alpha)


def _lse(a):
    a = np.asarray(a, dtype=float)
    if a.size == 0:
        return -math.inf
    top = float(np.max(a))
    if top == -math.inf:
        return -math.inf
    return top + math.log(float(np.sum(np.exp(a - top))))


def _ln(x):
    return math.log(x) if x > 0 else -math.inf


def _log2_sum_exp(*lns):
    return _lse(np.array(lns)) / LN2


class _Chain:
    """Collects named ``lhs <= rhs`` checks and raises on the first failure."""

    def __init__(self, tol=CHAIN_TOL):
        self.tol = tol
        self.results = {}
        self.values = {}

    def le(self, name, lhs, rhs, tol=None):
        tol = self.tol if tol is None else tol
        ok = bool(lhs <= rhs + tol)
        self.results[name] = ok
        self.values[name] = (float(lhs), float(rhs))
        if not ok:
            raise ChainViolation(name, lhs, rhs)

    def eq(self, name, lhs, rhs, tol=None):
        tol = self.tol if tol is None else tol
        ok = bool(abs(lhs - rhs) <= tol)
        self.results[name] = ok
        self.values[name] = (float(lhs), float(rhs))
        if not ok:
            raise ChainViolation(name, lhs, rhs)


def _step_d(c: StepSnapshot, n: int, chain: _Chain):
    alpha = c.alpha
    p2, q1 = c.p, c.q
    t_tilde = c.scalars["t_tilde"]
    t = c.tv
    top, res = p2[:n], p2[n:]
    k = 1.0 / (1.0 - alpha)

    # D.1: upper bound on arce(p'')
    hp2 = _arce(p2, alpha)
    with np.errstate(divide="ignore"):
        ln_top_rows = np.log(_pow_sum(top, alpha))  # ln sum_x r(x,y)^a, per y
        ln_res_rows = np.log(_pow_sum(res, alpha))
        ln_res_mass = np.log(res.sum(axis=1))  # ln sum_y p''(x,y), per residual row
    ln_norm_top = _log_norm_rows(ln_top_rows, alpha)  # = alpha * ln R
    ln_norm_res = _log_norm_rows(ln_res_rows, alpha)
    ln_res_terms = _lse(alpha * ln_res_mass)
    ln_cap = math.log(n - 1) * (1 - alpha) + alpha * _ln(t_tilde)
    ln_r = _lse(ln_top_rows / alpha)  # ln R, R = sum_y ||r(., y)||_a

    mink_1 = k * _log2_sum_exp(ln_norm_top, ln_norm_res)
    mink_2 = k * _log2_sum_exp(ln_norm_top, ln_res_terms)
    hp_sec = k * _log2_sum_exp(alpha * ln_r, ln_cap)
    chain.eq("arce_p_split_as_row_norm", hp2, k * _log2_sum_exp(_log_norm_rows(
        np.logaddexp(ln_top_rows, ln_res_rows), alpha)))
    chain.le("minkowski_split", hp2, mink_1)
    chain.le("minkowski_rows", mink_1, mink_2)
    if t_tilde > 0:
        chain.le("residual_row_bound", ln_res_terms, ln_cap)
    else:
        chain.eq("residual_row_bound", math.exp(ln_res_terms), 0.0)
    chain.le("hp_sec", mink_2, hp_sec)
    r_mass = float(top.sum())
    chain.eq("r_mass_is_1_minus_t_tilde", r_mass, 1.0 - t_tilde)

    # D.2: lower bound on arce(q')
    hq1 = _arce(q1, alpha)
    in_j = q1[0] >= top[0]
    q_extra = np.where(in_j, q1[0] - top[0], 0.0)
    chain.eq("extra_mass_on_J_is_t", float(q_extra.sum()), t)
    ln_col_q = column_log_norms(q1[:n], alpha)
    ln_col_r = column_log_norms(top, alpha)
    for y in np.nonzero(in_j & (q1[:n].sum(axis=0) > 0))[0]:
        lhs = float(np.logaddexp(ln_col_r[y], _ln(q_extra[y])))
        rhs = float(ln_col_q[y])
        chain.le(f"reverse_minkowski_col{y}", lhs, rhs, tol=CHAIN_TOL * max(1.0, abs(rhs)))
    jc = ~in_j
    chain.eq("t_tilde_from_Jc", t + float(q1[0, jc].sum()) - float(top[0, jc].sum()), t_tilde)
    hq_lower = alpha * k * _log2_sum_exp(ln_r, _ln(t_tilde))
    chain.le("hq_lower", hq_lower, hq1)

    bound_d = hp_sec - hq_lower
    chain.le("delta_h_C_le_D", c.delta_h, bound_d)
    scalars = {
        "arce_p_split": hp2,
        "minkowski_1": mink_1,
        "minkowski_2": mink_2,
        "hp_sec": hp_sec,
        "residual_terms": math.exp(ln_res_terms),
        "residual_cap": math.exp(ln_cap),
        "arce_q_pad": hq1,
        "hq_lower": hq_lower,
        "ln_R": ln_r,
        "t_tilde": t_tilde,
    }
    return bound_d, ln_r, scalars


def _pow_sum(m, alpha):
    out = np.zeros_like(m, dtype=float)
    mask = m > 0
    out[mask] = m[mask] ** alpha
    return out.sum(axis=0) if m.shape[0] else np.zeros(m.shape[1])


def _gap_log(ln_u, alpha, d, t):
    """``_gap(u, ...)`` evaluated from ``ln u`` so huge ``u`` does not overflow."""
    ln_cap = (1 - alpha) * math.log(d - 1) + alpha * _ln(t)
    return _log2_sum_exp(alpha * ln_u, ln_cap) - alpha * _log2_sum_exp(ln_u, _ln(t))


def verify_proof_chain(p, q, alpha: float, eps: float | None = None) -> PipelineTrace:
    """Run Steps A to E on ``(p, q)`` and check every inequality numerically.

    ``eps`` defaults to ``TV(p, q)``. Raises :class:`ChainViolation` when any
    intermediate inequality fails beyond tolerance.
    """
    alpha = _check_alpha_open(alpha)
    p, q = as_joint(p), as_joint(q)
    if p.shape != q.shape:
        raise ShapeMismatch(f"shapes differ: {p.shape} vs {q.shape}")
    n = p.nx
    if n < 2:
        raise ShapeMismatch("the chain needs |X| >= 2")
    t0 = _tv(p.matrix, q.matrix)
    if t0 > max_eps(n) + EDGE_TOL:
        raise TvBudgetExceeded(t0, max_eps(n))
    eps = t0 if eps is None else float(eps)
    if eps < t0 - EDGE_TOL:
        raise TvBudgetExceeded(t0, eps)
    eps = min(max(eps, t0), max_eps(n))

    swapped = _arce(p.matrix, alpha) < _arce(q.matrix, alpha)
    if swapped:
        p, q = q, p
    delta0 = _arce(p.matrix, alpha) - _arce(q.matrix, alpha)

    a = step_a_reorder(p, q, alpha)
    b = step_b_walk(a)
    c = step_c_enlarge(b)
    chain = _Chain()
    for snap in (a, b, c):
        for name, ok in snap.certificates.items():
            if not ok:
                raise ChainViolation(f"{snap.label}:{name}", snap.delta_h, math.nan)
    chain.le("delta_h_A_le_B", a.delta_h, b.delta_h)
    chain.le("delta_h_B_le_C", b.delta_h, c.delta_h)

    bound_d, ln_r, d_scalars = _step_d(c, n, chain)
    t_tilde = c.scalars["t_tilde"]
    d_snap = StepSnapshot("D", c.p, c.q, bound_d, c.tv, alpha, dict(chain.results), d_scalars)

    # E: R >= 1 - t_tilde (subadditivity of u -> u^a), then monotonicity in R and t_tilde
    chain_e = _Chain()
    k = 1.0 / (1.0 - alpha)
    chain_e.le("subadditivity_R", math.log1p(-t_tilde), ln_r, tol=1e-12)
    gap_r = _gap_log(ln_r, alpha, n, t_tilde)
    gap_min = _gap(1.0 - t_tilde, alpha, n, t_tilde)
    chain_e.eq("gap_at_R_matches_D", k * gap_r, bound_d, tol=CHAIN_TOL * max(1.0, k))
    chain_e.le("gap_monotone_R_to_1_minus_t_tilde", gap_r, gap_min)
    gamma_tt = gamma(alpha, min(t_tilde, max_eps(n)), n) if t_tilde > 0 else 0.0
    chain_e.eq("gamma_at_t_tilde", k * gap_min, gamma_tt)
    chain_e.le("t_tilde_le_t", t_tilde, c.tv, tol=INVARIANT_TOL)
    chain_e.le("t_le_eps", c.tv, eps, tol=INVARIANT_TOL)
    final = gamma(alpha, eps, n)
    chain_e.le("g_monotone_t_tilde_to_eps", gamma_tt, final)
    chain_e.le("final_bound", delta0, final, tol=FINAL_TOL)
    e_snap = StepSnapshot(
        "E",
        c.p,
        c.q,
        final,
        c.tv,
        alpha,
        dict(chain_e.results),
        {"gap_at_R": k * gap_r, "gamma_t_tilde": gamma_tt, "gamma_eps": final},
    )

    steps = [a, b, c, d_snap, e_snap]
    return PipelineTrace(
        steps=steps,
        alpha=alpha,
        t=t0,
        t_tilde=t_tilde,
        r_matrix=c.p[:n].copy(),
        final_bound=final,
        eps=eps,
        delta_h_original=delta0,
        swapped=bool(swapped),
    )
