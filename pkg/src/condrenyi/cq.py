"""Classical-quantum states and their conditional Renyi entropies.

A c-q state ``rho_AY = sum_y r_Y(y) rho_A^y (x) |y><y|`` is stored as its weights
and its blocks. Diagonalising every block turns it into the classical joint
``r_XY(x, y) = r_Y(y) * lambda_x(rho_A^y)``, and then the conditional Renyi entropy
of ``A`` given ``Y`` is the ARCE of ``r_XY``.

Full matrices on ``A (x) Y`` use the Kronecker ordering: index ``a * |Y| + y``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .bound import EDGE_TOL, _check_alpha_sub_one, _check_eps, gamma, make_certificate
from .eigen import Spectrum, hermitian_eig, matrix_function
from .entropy import arce, check_alpha, renyi_entropy, shannon_entropy
from .errors import EpsOutOfRange, NegativeEntry, NotNormalized, ShapeMismatch, TraceBudgetExceeded
from .majorization import x_majorizes
from .prob_core import JointDistribution, ProbVector, _dirichlet_flat, as_joint, tv_distance

PSD_TOL = 1e-10
TRACE_TOL = 1e-10
# eigenvalues this close to zero are rounding noise from the eigensolver
ZERO_EIG = 1e-14
SUPPORT_TOL = 1e-10


def _clamped(values):
    out = np.array(values, dtype=float)
    out[np.abs(out) <= ZERO_EIG] = 0.0
    out[(out < 0) & (out >= -PSD_TOL)] = 0.0
    return out


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    entries: np.ndarray

    def __post_init__(self):
        a = np.array(self.entries, dtype=complex)
        spec = hermitian_eig(a)  # raises NotHermitian
        if spec.eigenvalues.size and spec.eigenvalues[-1] < -PSD_TOL:
            raise NegativeEntry(f"smallest eigenvalue {spec.eigenvalues[-1]!r} < 0")
        tr = float(np.trace(a).real)
        if abs(tr - 1.0) > TRACE_TOL:
            raise NotNormalized(f"trace {tr!r} != 1")
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)
        object.__setattr__(self, "_spectrum", spec)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def spectrum(self) -> Spectrum:
        return self._spectrum

    @property
    def probabilities(self) -> np.ndarray:
        """Eigenvalues, descending, with rounding noise clamped to zero."""
        return _clamped(self._spectrum.eigenvalues)

    @classmethod
    def diagonal(cls, probs) -> "DensityMatrix":
        return cls(np.diag(np.asarray(probs, dtype=float)))

    @classmethod
    def pure(cls, psi) -> "DensityMatrix":
        psi = np.asarray(psi, dtype=complex)
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, psi.conj()))


@dataclass(frozen=True, eq=False)
class CQState:
    weights: ProbVector
    blocks: tuple

    def __post_init__(self):
        w = self.weights if isinstance(self.weights, ProbVector) else ProbVector(self.weights)
        blocks = tuple(b if isinstance(b, DensityMatrix) else DensityMatrix(b) for b in self.blocks)
        if len(blocks) != len(w):
            raise ShapeMismatch(f"{len(w)} weights but {len(blocks)} blocks")
        if len({b.dim for b in blocks}) != 1:
            raise ShapeMismatch("all blocks must share one dimension")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "blocks", blocks)

    @property
    def d_a(self) -> int:
        return self.blocks[0].dim

    @property
    def ny(self) -> int:
        return len(self.blocks)

    @property
    def shape(self):
        return (self.d_a, self.ny)

    def to_matrix(self) -> np.ndarray:
        """Block-diagonal density matrix on ``A (x) Y``."""
        out = np.zeros((self.d_a * self.ny,) * 2, dtype=complex)
        for y, (w, block) in enumerate(zip(self.weights.entries, self.blocks)):
            proj = np.zeros((self.ny, self.ny))
            proj[y, y] = 1.0
            out += w * np.kron(block.entries, proj)
        return out

    def reduced_a(self) -> np.ndarray:
        return sum(w * b.entries for w, b in zip(self.weights.entries, self.blocks))

    @cached_property
    def spectral_joint(self) -> JointDistribution:
        cols = [w * b.probabilities for w, b in zip(self.weights.entries, self.blocks)]
        return JointDistribution(np.column_stack(cols))

    def to_dict(self) -> dict:
        return {
            "d_a": self.d_a,
            "weights": self.weights.entries.tolist(),
            "blocks": [
                [[[float(z.real), float(z.imag)] for z in row] for row in b.entries]
                for b in self.blocks
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CQState":
        blocks = []
        for b in data["blocks"]:
            arr = np.asarray(b, dtype=float)
            if arr.ndim == 3 and arr.shape[-1] == 2:
                blocks.append(arr[..., 0] + 1j * arr[..., 1])
            elif arr.ndim == 2:
                blocks.append(arr.astype(complex))
            else:
                raise ShapeMismatch(f"block entries must be [re, im] pairs, got shape {arr.shape}")
        state = cls(ProbVector(np.asarray(data["weights"], dtype=float)), tuple(blocks))
        if "d_a" in data and data["d_a"] != state.d_a:
            raise ShapeMismatch(f"declared d_a={data['d_a']} but blocks are {state.d_a}-dimensional")
        return state

    @classmethod
    def from_joint(cls, p) -> "CQState":
        """Embed a classical joint as a c-q state with diagonal blocks."""
        m = as_joint(p).matrix
        weights = m.sum(axis=0)
        blocks = []
        for y in range(m.shape[1]):
            if weights[y] > 0:
                blocks.append(np.diag(m[:, y] / weights[y]))
            else:
                blocks.append(np.eye(m.shape[0]) / m.shape[0])
        return cls(ProbVector(weights), tuple(blocks))


def von_neumann_entropy(rho: DensityMatrix) -> float:
    return shannon_entropy(_renorm(rho.probabilities))


def _renorm(v):
    return v / v.sum()


def cond_entropy_cq(rho: CQState) -> float:
    """``H(A|Y) = sum_y r_Y(y) H(rho_A^y)``."""
    return float(sum(w * von_neumann_entropy(b) for w, b in zip(rho.weights.entries, rho.blocks) if w > 0))


def cond_renyi_cq(rho: CQState, alpha: float) -> float:
    """Conditional Renyi entropy of ``A`` given the classical ``Y``, in bits."""
    alpha = check_alpha(alpha)
    return arce(rho.spectral_joint, alpha)


def cond_renyi_direct(rho: CQState, alpha: float) -> float:
    """Evaluate ``a/(1-a) log2 Tr[(Tr_A rho_AY^a)^(1/a)]`` on the full block matrix.

    Independent of the spectral-joint route; used to cross-check it.
    """
    alpha = check_alpha(alpha)
    if alpha == 0.0:
        # the support-size limit has no matrix-power analogue
        return cond_renyi_cq(rho, 0.0)
    d_a, ny = rho.shape
    full = hermitian_eig(rho.to_matrix())
    powered = matrix_function(full, lambda lam: np.where(lam > ZERO_EIG, np.abs(lam), 0.0) ** alpha)
    reduced = np.einsum("ayaz->yz", powered.reshape(d_a, ny, d_a, ny))
    inner = hermitian_eig(0.5 * (reduced + reduced.conj().T))
    vals = np.clip(inner.eigenvalues, 0.0, None)
    return alpha / (1.0 - alpha) * math.log2(float(np.sum(vals ** (1.0 / alpha))))


def identity_tensor(sigma_y, d_a: int) -> np.ndarray:
    """``I_A (x) sigma_Y`` in the ``a * |Y| + y`` ordering."""
    return np.kron(np.eye(d_a), np.asarray(sigma_y, dtype=complex))


def variational_objective(rho: CQState, sigma_y, alpha: float) -> float:
    """``-D_a(rho_AY || I_A (x) sigma_Y)``; never exceeds :func:`cond_renyi_cq`."""
    return -renyi_divergence(rho.to_matrix(), identity_tensor(sigma_y, rho.d_a), alpha)


def optimal_sigma_y(rho: CQState, alpha: float) -> np.ndarray:
    """Maximizer of :func:`variational_objective`: ``sigma(y) ~ (sum_x r(x,y)^a)^(1/a)``."""
    alpha = check_alpha(alpha)
    m = rho.spectral_joint.matrix
    weights = (m**alpha).sum(axis=0) ** (1.0 / alpha)
    return np.diag(weights / weights.sum())


def renyi_entropy_state(rho: DensityMatrix, alpha: float) -> float:
    return renyi_entropy(_renorm(rho.probabilities), alpha)


def _spectrum_of(m):
    if isinstance(m, DensityMatrix):
        return m.spectrum
    return hermitian_eig(m)


def renyi_divergence(rho, sigma, alpha: float) -> float:
    """Petz Renyi divergence ``1/(a-1) log2 Tr[rho^a sigma^(1-a)]``.

    ``sigma`` may be any positive semidefinite matrix (e.g. ``I_A (x) sigma_B``).
    Returns ``math.inf`` when ``supp(rho)`` is not contained in ``supp(sigma)``.
    """
    alpha = check_alpha(alpha)
    rs, ss = _spectrum_of(rho), _spectrum_of(sigma)
    if rs.eigenvalues.size != ss.eigenvalues.size:
        raise ShapeMismatch("rho and sigma act on spaces of different dimension")
    kernel = ss.eigenvectors[:, ss.eigenvalues <= SUPPORT_TOL]
    rho_m = rho.entries if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    if kernel.size and float(np.trace(kernel.conj().T @ rho_m @ kernel).real) > SUPPORT_TOL:
        return math.inf

    def rho_pow(lam):
        lam = np.where(lam > SUPPORT_TOL, lam, 0.0)
        out = np.zeros_like(lam)
        mask = lam > 0
        out[mask] = lam[mask] ** alpha
        return out

    def sigma_pow(lam):
        out = np.zeros_like(lam)
        mask = lam > SUPPORT_TOL
        out[mask] = lam[mask] ** (1.0 - alpha)
        return out

    overlap = float(np.trace(matrix_function(rs, rho_pow) @ matrix_function(ss, sigma_pow)).real)
    return math.log2(overlap) / (alpha - 1.0)


def _block_spectra(state: CQState):
    return [b.spectrum for b in state.blocks]


def dephase_conditional(sigma: CQState, basis_source: CQState) -> JointDistribution:
    """Pinch ``sigma`` onto the per-``y`` eigenbases of ``basis_source``.

    Entry ``(x, y)`` is ``s_Y(y) <phi_x^y| sigma^y |phi_x^y>`` where ``phi^y`` are the
    eigenvectors of ``basis_source``'s block ``y`` in descending-eigenvalue order,
    so rows line up with ``basis_source.spectral_joint``.
    """
    if sigma.shape != basis_source.shape:
        raise ShapeMismatch(f"shapes differ: {sigma.shape} vs {basis_source.shape}")
    cols = []
    for w, block, spec in zip(sigma.weights.entries, sigma.blocks, _block_spectra(basis_source)):
        u = spec.eigenvectors
        diag = np.real(np.einsum("ix,ij,jx->x", u.conj(), block.entries, u))
        cols.append(w * np.clip(diag, 0.0, None))
    return as_joint(np.column_stack(cols))


def dephasing_fixed_point_error(rho: CQState) -> float:
    """Max deviation between ``dephase(rho, rho)`` and ``rho``'s spectral joint."""
    return float(np.max(np.abs(dephase_conditional(rho, rho).matrix - rho.spectral_joint.matrix)))


def trace_norm(m) -> float:
    return float(np.sum(np.abs(hermitian_eig(m).eigenvalues)))


def trace_distance(rho: CQState, sigma: CQState) -> float:
    """``1/2 ||rho_AY - sigma_AY||_1`` computed block by block."""
    if rho.shape != sigma.shape:
        raise ShapeMismatch(f"shapes differ: {rho.shape} vs {sigma.shape}")
    total = 0.0
    for r, rb, s, sb in zip(rho.weights.entries, rho.blocks, sigma.weights.entries, sigma.blocks):
        total += trace_norm(r * rb.entries - s * sb.entries)
    return min(0.5 * total, 1.0)


def check_cq_bound(rho: CQState, sigma: CQState, alpha: float, eps_budget: float):
    """Certify the c-q continuity bound and re-derive its classical reduction.

    ``checks`` records: the dephasing fixed point, data processing for the
    dephased pair, the eigenvalue/diagonal majorization, the resulting entropy
    monotonicity, and the classical bound on the dephased pair.
    """
    if rho.shape != sigma.shape:
        raise ShapeMismatch(f"shapes differ: {rho.shape} vs {sigma.shape}")
    alpha = _check_alpha_sub_one(alpha)
    d = rho.d_a
    if d < 2:
        raise EpsOutOfRange("d_A = 1 leaves no admissible eps budget")
    eps_budget = _check_eps(eps_budget, d)
    if eps_budget <= 0:
        raise EpsOutOfRange("eps_budget must be > 0")
    td = trace_distance(rho, sigma)
    if td > eps_budget + EDGE_TOL:
        raise TraceBudgetExceeded(td, eps_budget)

    h_rho, h_sigma = cond_renyi_cq(rho, alpha), cond_renyi_cq(sigma, alpha)
    rhs = gamma(alpha, eps_budget, d)
    low, high = (rho, sigma) if h_rho <= h_sigma else (sigma, rho)
    r = low.spectral_joint
    s = high.spectral_joint
    s_tilde = dephase_conditional(high, low)
    tv_deph = tv_distance(r, s_tilde).value
    h_s_tilde = arce(s_tilde, alpha)
    checks = {
        "fixed_point": dephasing_fixed_point_error(low) <= 1e-10,
        "data_processing": tv_deph <= td + 1e-10,
        "dephased_within_budget": tv_deph <= eps_budget + 1e-10,
        "schur_horn_x_majorization": x_majorizes(s_tilde, s).holds,
        "dephasing_raises_entropy": arce(s, alpha) <= h_s_tilde + 1e-9,
        "classical_bound_on_dephased_pair": h_s_tilde - arce(r, alpha) <= rhs + 1e-9,
    }
    return make_certificate(alpha, eps_budget, d, td, abs(h_rho - h_sigma), rhs, checks)


# -- random generators ------------------------------------------------------


def random_density_matrix(d: int, rng, rank: int | None = None) -> DensityMatrix:
    """Ginibre-ensemble state of the given rank (full rank by default)."""
    rank = d if rank is None else rank
    g = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    m = g @ g.conj().T
    m = 0.5 * (m + m.conj().T)
    return DensityMatrix(m / np.trace(m).real)


def random_cq_state(d_a: int, ny: int, rng, full_rank: bool = True) -> CQState:
    weights = _dirichlet_flat(rng, ny)
    blocks = []
    for _ in range(ny):
        rank = d_a if full_rank else int(rng.integers(1, d_a + 1))
        blocks.append(random_density_matrix(d_a, rng, rank))
    return CQState(ProbVector(weights), tuple(blocks))


def mix_cq(rho: CQState, tau: CQState, lam: float) -> CQState:
    """``(1 - lam) rho + lam tau`` as a c-q state."""
    weights = (1 - lam) * rho.weights.entries + lam * tau.weights.entries
    blocks = []
    for w, a, wr, ra, wt, ta in zip(
        weights, rho.blocks, rho.weights.entries, rho.blocks, tau.weights.entries, tau.blocks
    ):
        if w > 0:
            m = ((1 - lam) * wr * ra.entries + lam * wt * ta.entries) / w
        else:
            m = a.entries
        blocks.append(0.5 * (m + m.conj().T))
    return CQState(ProbVector(weights), tuple(blocks))


def sample_cq_pair_within_trace(d_a: int, ny: int, eps: float, seed=None):
    """Random c-q pair with trace distance ``<= eps`` (non-commuting blocks in general)."""
    rng = np.random.default_rng(seed)
    rho = random_cq_state(d_a, ny, rng)
    tau = random_cq_state(d_a, ny, rng, full_rank=bool(rng.random() < 0.5))
    dist = trace_distance(rho, tau)
    if dist == 0:
        return rho, tau
    lam = min(1.0, eps / dist) * (1.0 if rng.random() < 0.5 else rng.random())
    sigma = mix_cq(rho, tau, lam)
    if trace_distance(rho, sigma) > eps:
        sigma = mix_cq(rho, tau, lam * (1 - 1e-9))
    return rho, sigma


def extremal_cq_pair(d_a: int, ny: int, eps: float):
    """Commuting diagonal pair built from the extremal classical distributions."""
    from .tightness import extremal_pair

    p, q = extremal_pair(d_a, ny, eps)
    return CQState.from_joint(p), CQState.from_joint(q)
