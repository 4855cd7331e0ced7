"""Cyclic Jacobi eigensolver for small dense Hermitian matrices.

Rotations are applied in round-robin (tournament) order: every round annihilates
``n/2`` disjoint off-diagonal pairs at once, which is exact because a rotation on
``(p, q)`` leaves the ``{r, s}`` 2x2 block of any disjoint pair untouched.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NoConvergence, NotHermitian

HERMITIAN_TOL = 1e-12
OFF_TOL = 1e-13
MAX_SWEEPS = 100


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigenvalues in descending order and the matching eigenvectors as columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    sweeps: int = 0

    def reconstruct(self) -> np.ndarray:
        u = self.eigenvectors
        return (u * self.eigenvalues) @ u.conj().T


def _round_robin(n):
    """Yield ``n - 1`` (or ``n``, for odd n) rounds of disjoint index pairs."""
    players = list(range(n)) + ([None] if n % 2 else [])
    m = len(players)
    for _ in range(m - 1):
        pairs = []
        for k in range(m // 2):
            a, b = players[k], players[m - 1 - k]
            if a is not None and b is not None:
                pairs.append((min(a, b), max(a, b)))
        yield pairs
        players = [players[0], players[-1]] + players[1:-1]


def _off_norm(a):
    off = a - np.diag(np.diag(a))
    return float(np.linalg.norm(off))


def _rotation_block(app, aqq, apq):
    """2x2 unitary ``U`` with ``(U^H [[app, apq], [conj(apq), aqq]] U)`` diagonal."""
    mag = abs(apq)
    phase = apq / mag
    tau = (aqq - app) / (2.0 * mag)
    t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c
    conj_phase = np.conj(phase)
    return c, s, conj_phase


def hermitian_eig(m, tol: float = OFF_TOL, max_sweeps: int = MAX_SWEEPS) -> Spectrum:
    """Eigendecomposition of a Hermitian matrix by complex cyclic Jacobi rotations.

    Iterates until the off-diagonal Frobenius norm drops below ``tol * ||m||_F``.
    Raises :class:`NotHermitian` if ``m`` deviates from its conjugate transpose by
    more than ``1e-12`` in any entry and :class:`NoConvergence` after ``max_sweeps``.
    """
    a = np.array(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotHermitian(f"expected a square matrix, got shape {a.shape}")
    dev = np.max(np.abs(a - a.conj().T)) if a.size else 0.0
    if dev > HERMITIAN_TOL:
        raise NotHermitian(f"matrix deviates from Hermitian by {dev!r}")
    a = 0.5 * (a + a.conj().T)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = float(np.linalg.norm(a))
    threshold = tol * scale
    rounds = list(_round_robin(n)) if n > 1 else []

    sweep = 0
    while _off_norm(a) > threshold:
        if sweep >= max_sweeps:
            raise NoConvergence(f"Jacobi did not converge in {max_sweeps} sweeps")
        sweep += 1
        for pairs in rounds:
            u = np.eye(n, dtype=complex)
            active = False
            for p, q in pairs:
                apq = a[p, q]
                if abs(apq) <= 1e-300 or abs(apq) <= 1e-18 * scale:
                    continue
                c, s, cp = _rotation_block(a[p, p].real, a[q, q].real, apq)
                u[p, p] = c
                u[p, q] = s
                u[q, p] = -s * cp
                u[q, q] = c * cp
                active = True
            if active:
                a = u.conj().T @ a @ u
                v = v @ u
        a = 0.5 * (a + a.conj().T)

    values = np.real(np.diag(a)).copy()
    order = np.argsort(-values, kind="stable")
    return Spectrum(values[order], v[:, order], sweep)


def matrix_function(spec: Spectrum, fn) -> np.ndarray:
    """``U diag(fn(lambda)) U^H`` for an elementwise function ``fn``."""
    u = spec.eigenvectors
    return (u * fn(spec.eigenvalues)) @ u.conj().T
