import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from condrenyi.entropy import arce
from condrenyi.errors import (
    LengthMismatch,
    NotSorted,
    PreconditionNotMet,
    ShapeMismatch,
    SlotNotZero,
    SupportOverlap,
    TransferTooLarge,
)
from condrenyi.majorization import (
    CONVEX_SYMMETRIC_FAMILY,
    check_orthogonal_padding,
    majorizes,
    marginal_schur_concavity_witness,
    mix_columns,
    random_doubly_stochastic,
    spill_to_zero_slot,
    transfer_to_top,
    weighted_phi,
    x_majorizes,
)
from condrenyi.prob_core import sample_random_joint

from conftest import ALPHA_GRID, joints


def test_majorizes_examples():
    assert majorizes([0.5, 0.5], [1, 0]).holds
    assert majorizes([0.2, 0.3, 0.5], [0.2, 0.3, 0.5])
    v = majorizes([0.5, 0.25, 0.25], [0.4, 0.4, 0.2])
    assert not v.holds and v.failing_prefix == 1
    with pytest.raises(LengthMismatch):
        majorizes([1], [0.5, 0.5])


def test_verdict_fields_absent_when_holding():
    v = majorizes([0.5, 0.5], [1, 0])
    assert v.failing_prefix is None and v.sum_mismatch is None


def test_total_mismatch_reported():
    v = majorizes([0.5, 0.4], [0.6, 0.4])
    assert not v.holds and v.sum_mismatch == pytest.approx(-0.1)


def test_x_majorizes_examples():
    p = sample_random_joint(3, 2, 4)
    assert x_majorizes(p, p).holds
    q = p.matrix.copy()
    q[[0, 1], 1] = q[[0, 1], 1].mean()
    assert x_majorizes(q / q.sum(), p).holds
    r = np.array([[0.5, 0.0], [0.5, 0.0]])
    s = np.array([[0.5, 0.5], [0.0, 0.0]])
    v = x_majorizes(r, s)
    assert not v.holds and v.failing_column == 0
    with pytest.raises(ShapeMismatch):
        x_majorizes(np.ones((2, 2)) / 4, np.ones((1, 4)) / 4)


def test_zero_column_only_majorized_by_zero():
    p = np.array([[0.5, 0.0], [0.5, 0.0]])
    q = np.array([[0.5, 0.0], [0.4, 0.1]])
    assert not x_majorizes(q, p).holds


def test_transfer_to_top_examples():
    assert np.allclose(transfer_to_top([0.5, 0.5], 1, 0.5), [1, 0])
    out = transfer_to_top([0.4, 0.3, 0.3], 2, 0.1)
    assert np.allclose(out, [0.5, 0.3, 0.2])
    assert majorizes([0.4, 0.3, 0.3], out).holds
    with pytest.raises(TransferTooLarge):
        transfer_to_top([0.5, 0.5], 1, 0.6)
    with pytest.raises(NotSorted):
        transfer_to_top([0.3, 0.7], 1, 0.1)
    with pytest.raises(IndexError):
        transfer_to_top([0.5, 0.5], 0, 0.1)


def test_spill_examples():
    out = spill_to_zero_slot([1, 0], 0, 1, 0.3)
    assert np.allclose(out, [0.7, 0.3]) and majorizes(out, [1, 0]).holds
    assert np.allclose(spill_to_zero_slot([0.6, 0.4, 0, 0], 1, 2, 0.4), [0.6, 0, 0.4, 0])
    with pytest.raises(SlotNotZero):
        spill_to_zero_slot([0.5, 0.5], 0, 1, 0.1)
    with pytest.raises(TransferTooLarge):
        spill_to_zero_slot([0.5, 0, 0.5], 0, 1, 0.7)


def test_padding_examples():
    assert check_orthogonal_padding([0.8, 0, 0], [0.4, 0.4, 0], [0, 0, 0.2])
    v, v2 = np.array([1, 0.0]), np.array([0.5, 0.5])
    assert check_orthogonal_padding(v, v2, [0, 0]) == majorizes(v2, v).holds
    with pytest.raises(SupportOverlap):
        check_orthogonal_padding([0.8, 0, 0], [0.4, 0.4, 0], [0.2, 0, 0])
    with pytest.raises(PreconditionNotMet):
        check_orthogonal_padding([0.4, 0.4, 0], [0.8, 0, 0], [0, 0, 0.2])


def test_schur_concavity_examples(rng):
    p = sample_random_joint(3, 3, 2)
    assert marginal_schur_concavity_witness(p, p, 0.5)
    q = mix_columns(p, rng)
    assert marginal_schur_concavity_witness(p, q, 0.5)
    a = np.array([[0.9, 0.0], [0.1, 0.0]])
    b = np.array([[0.5, 0.0], [0.5, 0.0]])
    with pytest.raises(PreconditionNotMet):
        marginal_schur_concavity_witness(b, a, 0.5)


@given(st.integers(2, 8), st.integers(0, 10**6))
def test_doubly_stochastic_image_is_majorized(d, seed):
    rng = np.random.default_rng(seed)
    v = rng.exponential(size=d)
    dmat = random_doubly_stochastic(d, rng)
    assert np.allclose(dmat.sum(axis=0), 1) and np.allclose(dmat.sum(axis=1), 1)
    assert majorizes(dmat @ v, v).holds


@given(joints(), st.integers(0, 10**6), st.sampled_from(ALPHA_GRID + [2.0, 5.0]))
def test_arce_antitone_under_x_majorization(m, seed, a):
    q = mix_columns(m, np.random.default_rng(seed))
    assert x_majorizes(q, m).holds
    assert arce(m, a) <= arce(q, a) + 1e-9


@given(joints(), st.integers(0, 10**6))
def test_convex_symmetric_family(m, seed):
    q = mix_columns(m, np.random.default_rng(seed))
    for phi in CONVEX_SYMMETRIC_FAMILY.values():
        assert weighted_phi(m, phi) >= weighted_phi(q, phi) - 1e-9
