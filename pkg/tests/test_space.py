import numpy as np
import pytest

from hilbertlevy.errors import DomainError, LayoutMismatchError
from hilbertlevy.space import (CovOperator, OperatorSum, RankOneTensor, SpaceLayout,
                               TruncatedVector, apply_cov, as_vector, cov_matrix, embed, inner,
                               quadratic_form, scale_by_multiindex, scale_cov_by_multiindex, trace)


def vector(*components):
    return TruncatedVector.from_components(components)


def test_layout():
    layout = SpaceLayout((2, 1, 3))
    assert layout.d == 3
    assert layout.total_dim == 6
    assert list(layout.offsets) == [0, 2, 3]
    assert layout.block(2) == slice(3, 6)
    assert list(layout.component_of()) == [0, 0, 1, 2, 2, 2]


@pytest.mark.parametrize("dims", [(), (0,), (2, -1)])
def test_layout_rejects_empty_components(dims):
    with pytest.raises(ValueError):
        SpaceLayout(dims)


def test_inner():
    assert inner(vector([0.0, 0.0]), vector([0.0, 0.0])) == 0.0
    layout = SpaceLayout((2, 1))
    e1 = TruncatedVector.basis(layout, 0, 0)
    assert inner(e1, e1) == 1.0
    assert inner(vector([1.0, 2.0], [3.0]), vector([1.0, 0.0], [2.0])) == 7.0


def test_inner_rejects_other_layouts():
    with pytest.raises(LayoutMismatchError):
        inner(vector([1.0, 2.0]), vector([1.0], [2.0]))


def test_vector_arithmetic():
    u = vector([1.0, 2.0], [3.0])
    v = vector([1.0, 0.0], [2.0])
    assert (u + v) == vector([2.0, 2.0], [5.0])
    assert (u - v) == vector([0.0, 2.0], [1.0])
    assert (2 * u) == u * 2.0 == vector([2.0, 4.0], [6.0])
    assert (-u).to_list() == [[-1.0, -2.0], [-3.0]]
    assert u.norm() == pytest.approx(np.sqrt(14.0))
    np.testing.assert_allclose(u.component_norms(), [np.sqrt(5.0), 3.0])


def test_vectors_are_immutable():
    u = vector([1.0, 2.0])
    with pytest.raises(ValueError):
        u.values[0] = 5.0


def test_apply_cov():
    u = vector([1.0, 1.0])
    identity = CovOperator.identity(u.layout)
    assert apply_cov(identity, u) == u
    assert apply_cov(CovOperator.from_eigenvalues([[2.0, 3.0]]), u) == vector([2.0, 3.0])
    assert apply_cov(CovOperator.zeros(u.layout), u) == TruncatedVector.zeros(u.layout)


def test_scale_by_multiindex():
    u = vector([1.0], [5.0])
    assert scale_by_multiindex([1.0, 1.0], u) == u
    assert scale_by_multiindex([0.0, 0.0], u) == TruncatedVector.zeros(u.layout)
    assert scale_by_multiindex([2.0, 0.0], u) == vector([2.0], [0.0])


def test_scaled_covariance_rejects_negative_factors():
    q = CovOperator.from_eigenvalues([[1.0], [2.0]])
    np.testing.assert_allclose(scale_cov_by_multiindex([2.0, 0.5], q).eigenvalues, [2.0, 1.0])
    with pytest.raises(DomainError):
        q.scaled([1.0, -1.0])


def test_from_matrices_keeps_the_eigenbasis():
    block = np.array([[2.0, 1.0], [1.0, 2.0]])
    q = CovOperator.from_matrices([block, [[0.5]]])
    np.testing.assert_allclose(cov_matrix(q)[0], block)
    assert trace(q) == pytest.approx(4.5)
    u = vector([1.0, 0.0], [2.0])
    np.testing.assert_allclose(apply_cov(q, u).values, [2.0, 1.0, 1.0])
    assert quadratic_form(q, u) == pytest.approx(2.0 + 0.5 * 4.0)
    np.testing.assert_allclose(q.sqrt_apply(q.sqrt_apply(u.values)), q.apply(u.values))


@pytest.mark.parametrize("matrix", [
    [[1.0, 2.0], [0.0, 1.0]],
    [[1.0, 0.0], [0.0, -1.0]],
])
def test_from_matrices_rejects_invalid_blocks(matrix):
    with pytest.raises(DomainError):
        CovOperator.from_matrices([matrix])


def test_embed():
    layout = SpaceLayout((2, 1))
    assert embed(layout, 1, [4.0]) == vector([0.0, 0.0], [4.0])
    with pytest.raises(LayoutMismatchError):
        embed(layout, 1, [1.0, 2.0])


def test_rank_one_tensor():
    x = vector([1.0, 2.0])
    y = vector([0.0, 3.0])
    tensor = RankOneTensor(x, y)
    z = vector([1.0, 1.0])
    assert tensor(z) == vector([0.0, 9.0])
    assert tensor.trace() == pytest.approx(inner(x, y))
    np.testing.assert_allclose(tensor.to_matrix() @ z.values, tensor(z).values)


def test_operator_sum():
    b = vector([0.5, 0.0])
    q = CovOperator.from_eigenvalues([[1.0, 0.5]])
    total = OperatorSum(q, ((1.0, RankOneTensor(b, b)),))
    np.testing.assert_allclose(total.to_matrix(), np.diag([1.25, 0.5]))
    assert total.trace() == pytest.approx(1.75)
    assert total.quadratic_form(vector([1.0, 0.0])) == pytest.approx(1.25)


def test_as_vector():
    layout = SpaceLayout((2, 1))
    expected = vector([1.0, 2.0], [3.0])
    assert as_vector(layout, [[1.0, 2.0], [3.0]]) == expected
    assert as_vector(layout, np.array([1.0, 2.0, 3.0])) == expected
    assert as_vector(layout, expected) is expected
    with pytest.raises(LayoutMismatchError):
        as_vector(layout, [1.0, 2.0])
