import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from condrenyi.errors import NegativeEntry, NotNormalized, ShapeMismatch, ZeroMarginal
from condrenyi.prob_core import (
    JointDistribution,
    ProbVector,
    TvDistance,
    conditional_column,
    marginal_x,
    marginal_y,
    product_joint,
    sample_pair_within_tv,
    sample_random_joint,
    tv_distance,
    validate_joint,
)
from condrenyi.tightness import extremal_pair

from conftest import joints


def test_validate_point_mass_and_uniform():
    assert validate_joint([[1, 0], [0, 0]]).shape == (2, 2)
    u = validate_joint([[0.25, 0.25], [0.25, 0.25]])
    assert np.allclose(u.matrix, 0.25)


def test_validate_rejects_bad_sum_and_negatives():
    with pytest.raises(NotNormalized):
        validate_joint([[0.5, 0.6], [0, 0]])
    with pytest.raises(NegativeEntry):
        validate_joint([[1.1, -0.1]])
    with pytest.raises(ShapeMismatch):
        validate_joint([[0.5, 0.5], [0.0]])


def test_tiny_negative_entries_are_clamped():
    j = validate_joint([[1.0 + 5e-10, -5e-10]])
    assert j.matrix[0, 1] == 0.0


def test_matrix_is_read_only():
    j = validate_joint([[0.5, 0.5]])
    with pytest.raises(ValueError):
        j.matrix[0, 0] = 1.0


def test_tv_examples():
    p = validate_joint([[1, 0], [0, 0]])
    assert tv_distance(p, p).value == 0
    q = validate_joint([[0.5, 0], [0.5, 0]])
    assert tv_distance(p, q).value == pytest.approx(0.5)
    pe, qe = extremal_pair(3, 1, 0.3)
    assert tv_distance(pe, qe).value == pytest.approx(0.3, abs=1e-15)
    with pytest.raises(ShapeMismatch):
        tv_distance(p, validate_joint([[1.0]]))


def test_tv_value_range_enforced():
    with pytest.raises(ValueError):
        TvDistance(1.5)


def test_marginals_and_conditionals():
    m = validate_joint([[0.1, 0.2], [0.3, 0.4]])
    assert np.allclose(marginal_y(m).entries, [0.4, 0.6])
    assert np.allclose(marginal_x(m).entries, [0.3, 0.7])
    assert np.allclose(conditional_column(m, 0).entries, [0.25, 0.75])
    assert np.allclose(marginal_y([[0.25, 0.25], [0.25, 0.25]]).entries, [0.5, 0.5])
    assert np.allclose(marginal_y([[1, 0], [0, 0]]).entries, [1, 0])
    assert np.allclose(conditional_column([[0.25, 0.25], [0.25, 0.25]], 0).entries, [0.5, 0.5])
    with pytest.raises(ZeroMarginal):
        conditional_column([[1, 0], [0, 0]], 1)


def test_sample_random_joint():
    assert np.array_equal(sample_random_joint(1, 1, 7).matrix, [[1.0]])
    a, b = sample_random_joint(2, 2, 3), sample_random_joint(2, 2, 3)
    assert np.array_equal(a.matrix, b.matrix)
    validate_joint(sample_random_joint(3, 3, 9).matrix)


def test_sample_pair_examples():
    p, q = sample_pair_within_tv(3, 2, 0.0, seed=1)
    assert np.array_equal(p.matrix, q.matrix)
    p, q = sample_pair_within_tv(2, 2, 0.3, seed=5)
    assert tv_distance(p, q).value <= 0.3
    p2, q2 = sample_pair_within_tv(2, 2, 0.3, seed=5)
    assert np.array_equal(p.matrix, p2.matrix) and np.array_equal(q.matrix, q2.matrix)


def test_json_round_trip():
    j = sample_random_joint(3, 2, 0)
    back = JointDistribution.from_dict(j.to_dict())
    assert np.array_equal(back.matrix, j.matrix)
    with pytest.raises(ShapeMismatch):
        JointDistribution.from_dict({"nx": 2, "ny": 2, "matrix": j.matrix.tolist()})


def test_prob_vector_sorted():
    v = ProbVector([0.2, 0.5, 0.3])
    assert list(v.sorted_desc()) == [0.5, 0.3, 0.2]


@given(st.integers(1, 6), st.integers(1, 6), st.floats(0, 1), st.integers(0, 10**6))
def test_sampled_pairs_respect_budget(nx, ny, eps, seed):
    p, q = sample_pair_within_tv(nx, ny, eps, seed=seed)
    t = tv_distance(p, q).value
    assert 0.0 <= t <= eps
    assert tv_distance(p, p).value == 0.0


@given(joints(), st.integers(0, 10**6))
def test_tv_symmetric_and_triangle(m, seed):
    rng = np.random.default_rng(seed)
    q = rng.permutation(m.ravel()).reshape(m.shape)
    r = rng.exponential(size=m.shape)
    r /= r.sum()
    pq, qp = tv_distance(m, q).value, tv_distance(q, m).value
    assert pq == qp
    assert pq <= tv_distance(m, r).value + tv_distance(r, q).value + 1e-15


@given(joints())
def test_chain_rule(m):
    j = validate_joint(m)
    py = marginal_y(j).entries
    assert abs(py.sum() - 1) <= 1e-9
    for y in range(j.ny):
        if py[y] > 0:
            col = conditional_column(j, y).entries
            assert np.max(np.abs(py[y] * col - j.matrix[:, y])) <= 1e-12


def test_product_joint():
    j = product_joint([0.25, 0.75], [0.5, 0.5])
    assert np.allclose(j.matrix, [[0.125, 0.125], [0.375, 0.375]])
