import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st
from titan.arith_entanglement.fp_linalg import (
    FpMatrix,
    Subspace
)
from titan.arith_entanglement.symplectic import (
    LocalFactor,
    SymplecticSpace,
    direct_sum,
    is_lagrangian,
    isotropy_defect,
    orthogonal_complement,
    pairing,
    random_lagrangian,
    standard_symplectic
)
from titan.arith_entanglement.exceptions import (
    DimensionMismatchException,
    InvalidArgumentException
)


def test_standard_form():
    s = standard_symplectic(2, 5)
    assert s.dim() == 4
    assert s.half_dim() == 2
    assert pairing(s, [1, 0, 0, 0], [0, 0, 1, 0]) == 1
    assert pairing(s, [0, 0, 1, 0], [1, 0, 0, 0]) == 4
    assert pairing(s, [1, 0, 0, 0], [0, 1, 0, 0]) == 0


@pytest.mark.parametrize("gram", [
    [[0, 1], [1, 0]],
    [[1, 1], [-1, 0]],
    [[0, 0], [0, 0]],
    [[0, 1, 0], [-1, 0, 0], [0, 0, 0]],
])
def test_rejects_bad_gram(gram):
    with pytest.raises(InvalidArgumentException):
        SymplecticSpace(FpMatrix(gram, 3))


def test_characteristic_two_gram_is_symmetric():
    s = SymplecticSpace(FpMatrix([[0, 1], [1, 0]], 2))
    assert s.half_dim() == 1


def test_isotropy_defect_names_pair():
    s = standard_symplectic(1, 3)
    assert isotropy_defect(s, Subspace.span([[1, 0]], 3, 2)) is None
    i, j, value = isotropy_defect(s, Subspace.full(2, 3))
    assert (i, j) == (0, 1)
    assert value == 1
    assert not is_lagrangian(s, Subspace.full(2, 3))
    assert not is_lagrangian(s, Subspace.zero(2, 3))
    with pytest.raises(DimensionMismatchException):
        is_lagrangian(s, Subspace.zero(4, 3))


@seed(31337)
@settings(max_examples=30, deadline=None)
@given(st.sampled_from([2, 3, 5]), st.lists(st.integers(1, 2), min_size=1, max_size=3), st.integers(0, 2 ** 32 - 1))
def test_random_lagrangian(p, half_dims, s):
    space = direct_sum([standard_symplectic(m, p) for m in half_dims])
    lagrangian = random_lagrangian(space, s)
    assert is_lagrangian(space, lagrangian)
    assert orthogonal_complement(space, lagrangian) == lagrangian


def test_random_lagrangian_is_deterministic():
    space = direct_sum([standard_symplectic(2, 3), standard_symplectic(1, 3)])
    assert random_lagrangian(space, 5) == random_lagrangian(space, 5)
    assert random_lagrangian(space, np.random.default_rng(5)) == random_lagrangian(space, 5)


def test_orthogonal_complement_dimension():
    s = standard_symplectic(2, 3)
    line = Subspace.span([[1, 2, 0, 1]], 3, 4)
    complement = orthogonal_complement(s, line)
    assert complement.dim() == 3
    assert line.is_subspace_of(complement)
    assert orthogonal_complement(s, Subspace.zero(4, 3)) == Subspace.full(4, 3)


def test_direct_sum_offsets():
    s = direct_sum([standard_symplectic(1, 2), standard_symplectic(2, 2)])
    assert s.dim() == 6
    assert s.block_offsets() == (0, 2, 6)
    assert pairing(s, [1, 0, 0, 0, 0, 0], [0, 0, 1, 0, 0, 0]) == 0
    with pytest.raises(InvalidArgumentException):
        direct_sum([standard_symplectic(1, 2), standard_symplectic(1, 3)])


def test_local_factors():
    aux = LocalFactor.auxiliary(3)
    assert aux.dim() == 2
    assert aux.unramified_line() == Subspace.span([[1, 0]], 3, 2)
    assert LocalFactor.standard(2, 3).unramified_line() is None
    with pytest.raises(InvalidArgumentException):
        LocalFactor(standard_symplectic(2, 3), Subspace.span([[1, 0, 0, 0]], 3, 4))


@seed(4242)
@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 3]),
       st.lists(st.integers(1, 2), min_size=1, max_size=2),
       st.lists(st.integers(1, 2), min_size=1, max_size=2),
       st.integers(0, 2 ** 32 - 1))
def test_product_of_lagrangians_is_lagrangian(p, half_dims1, half_dims2, s):
    space1 = direct_sum([standard_symplectic(m, p) for m in half_dims1])
    space2 = direct_sum([standard_symplectic(m, p) for m in half_dims2])
    space = direct_sum([space1, space2])
    l1 = random_lagrangian(space1, s).basis().entries()
    l2 = random_lagrangian(space2, s + 1).basis().entries()
    rows = [np.concatenate([row, np.zeros(space2.dim(), dtype=np.int64)]) for row in l1]
    rows += [np.concatenate([np.zeros(space1.dim(), dtype=np.int64), row]) for row in l2]
    product = Subspace.span(rows, p, space.dim())
    assert product.dim() == space.half_dim()
    assert is_lagrangian(space, product)


@seed(2718)
@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3]), st.lists(st.integers(1, 3), min_size=1, max_size=3), st.data())
def test_pairing_is_alternating(p, half_dims, data):
    space = direct_sum([standard_symplectic(m, p) for m in half_dims])
    vector = st.lists(st.integers(0, p - 1), min_size=space.dim(), max_size=space.dim())
    u, v = data.draw(vector), data.draw(vector)
    assert (pairing(space, u, v) + pairing(space, v, u)) % p == 0
    assert pairing(space, u, u) == 0
    assert pairing(space, v, v) == 0
