"""Arimoto-Renyi conditional entropy: evaluation, the tight continuity bound, and its certificates."""

from .bound import BoundCertificate, check_continuity_bound, f_step_e, g_mono, gamma, shannon_limit_bound
from .cq import (
    CQState,
    DensityMatrix,
    check_cq_bound,
    cond_entropy_cq,
    cond_renyi_cq,
    dephase_conditional,
    renyi_divergence,
    trace_distance,
    von_neumann_entropy,
)
from .eigen import Spectrum, hermitian_eig
from .entropy import arce, cond_shannon, renyi_entropy, shannon_entropy
from .majorization import majorizes, x_majorizes
from .pipeline import PipelineTrace, verify_proof_chain
from .prob_core import JointDistribution, ProbVector, sample_pair_within_tv, tv_distance, validate_joint
from .tightness import SearchResult, extremal_pair, saturation_ratio, search_sup_ratio

__version__ = "0.1.0"

__all__ = [
    "BoundCertificate",
    "CQState",
    "DensityMatrix",
    "JointDistribution",
    "PipelineTrace",
    "ProbVector",
    "SearchResult",
    "Spectrum",
    "arce",
    "check_continuity_bound",
    "check_cq_bound",
    "cond_entropy_cq",
    "cond_renyi_cq",
    "cond_shannon",
    "dephase_conditional",
    "extremal_pair",
    "f_step_e",
    "g_mono",
    "gamma",
    "hermitian_eig",
    "majorizes",
    "renyi_divergence",
    "renyi_entropy",
    "sample_pair_within_tv",
    "saturation_ratio",
    "search_sup_ratio",
    "shannon_entropy",
    "shannon_limit_bound",
    "trace_distance",
    "tv_distance",
    "validate_joint",
    "verify_proof_chain",
    "von_neumann_entropy",
    "x_majorizes",
]
