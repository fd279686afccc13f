import numpy as np
import pytest
from titan.arith_entanglement import (
    ComputationSettings,
    EntropyCalculator,
    FpMatrix,
    Instance,
    InstanceFactory,
    InstanceFile,
    InstanceValidator,
    LocalFactor,
    PhaseKind,
    PhaseSpec,
    StateBuilder
)
from titan.arith_entanglement.fp_linalg import kernel
from titan.arith_entanglement.exceptions import (
    InstanceValidationException,
    InvalidArgumentException,
    ResourceCapException
)


CANONICAL_SIGNATURES = {
    1: (0, 2),
    2: (1, 2),
    3: (2, 2),
    4: (0, 1),
    5: (1, 1),
}


def two_plane_instance(loc1, loc2, d, p=3):
    return Instance(p=p,
                    side1=[LocalFactor.standard(1, p)],
                    side2=[LocalFactor.standard(1, p)],
                    d=d,
                    loc1=FpMatrix(loc1, p, cols=d),
                    loc2=FpMatrix(loc2, p, cols=d),
                    label='two-plane')


@pytest.mark.parametrize("p", [2, 3, 5])
@pytest.mark.parametrize("case_id", sorted(CANONICAL_SIGNATURES))
def test_canonical_signature(case_id, p):
    instance = InstanceFactory.canonical_case(case_id, p)
    stats = InstanceValidator.validate(instance)
    s1, t2 = CANONICAL_SIGNATURES[case_id]
    assert (stats.s1(), stats.t2(), stats.nu()) == (s1, t2, 0)
    assert stats.entropy_exponent() == t2 - s1
    assert stats.d() == 3
    assert instance.side_dims() == (4, 2)
    assert instance.lagrangian_required() == (case_id in (1, 5))


def test_canonical_first_case_stats():
    stats = InstanceValidator.validate(InstanceFactory.canonical_case(1, 3))
    assert stats.as_tuple() == (0, 1, 3, 2, 0, 3, 3)
    assert stats.kernel_sum_dim() == 1
    assert stats.kernel_intersection_dim() == 0


@pytest.mark.parametrize("case_id", sorted(CANONICAL_SIGNATURES))
def test_canonical_higher_degree(case_id):
    instance = InstanceFactory.canonical_case(case_id, 3, degree=6)
    stats = InstanceValidator.validate(instance)
    assert instance.side_dims() == (8, 2)
    assert stats.d() == 5
    assert (stats.s1(), stats.t2()) == CANONICAL_SIGNATURES[case_id]


def test_canonical_rejects_bad_arguments():
    with pytest.raises(InvalidArgumentException):
        InstanceFactory.canonical_case(6, 3)
    with pytest.raises(InvalidArgumentException):
        InstanceFactory.canonical_case(1, 3, degree=3)
    with pytest.raises(InvalidArgumentException):
        InstanceFactory.canonical_case(1, 9)


def test_waived_lagrangian_check_logs_warning(caplog):
    InstanceValidator.validate(InstanceFactory.canonical_case(2, 2))
    assert "without the Lagrangian image requirement" in caplog.text


def test_zero_localization_rejected():
    instance = two_plane_instance([[0], [0]], [[0], [0]], d=1)
    with pytest.raises(InstanceValidationException):
        InstanceValidator.validate(instance)


def test_non_isotropic_image_names_pair():
    instance = two_plane_instance([[1, 0], [0, 1]], [[0, 0], [0, 0]], d=2)
    with pytest.raises(InstanceValidationException, match="basis vectors 0 and 1"):
        InstanceValidator.validate(instance)


def test_structural_checks():
    with pytest.raises(InstanceValidationException):
        two_plane_instance([[1, 0]], [[0, 0], [0, 0]], d=2)
    with pytest.raises(InstanceValidationException):
        Instance(p=3, side1=[], side2=[LocalFactor.standard(1, 3)], d=0,
                 loc1=FpMatrix.zeros(0, 0, 3), loc2=FpMatrix.zeros(2, 0, 3))
    with pytest.raises(InstanceValidationException):
        Instance(p=3, side1=[LocalFactor.standard(1, 2)], side2=[LocalFactor.standard(1, 3)], d=1,
                 loc1=FpMatrix.zeros(2, 1, 3), loc2=FpMatrix.zeros(2, 1, 3))


@pytest.mark.parametrize("seed", range(100))
def test_random_instances_validate(seed, corpus_instance):
    instance = corpus_instance(seed)
    stats = InstanceValidator.validate(instance)
    assert stats.s1() + stats.t1() == stats.d()
    assert stats.s2() + stats.t2() == stats.d()
    assert stats.mu() + stats.nu() == stats.d()
    assert stats.entropy_exponent() == stats.d() - stats.kernel_sum_dim()
    assert stats.kernel_intersection_dim() == stats.nu()


def test_requested_nu_is_realized(corpus_instance):
    for nu in range(3):
        instance = corpus_instance(4, nu=nu)
        assert kernel(instance.stacked_loc()).dim() == nu
        assert InstanceValidator.validate(instance).nu() == nu


def test_generation_is_deterministic():
    first = InstanceFactory.generate_random(3, [2], [1], nu=1, seed=11)
    second = InstanceFactory.generate_random(3, [2], [1], nu=1, seed=11)
    other = InstanceFactory.generate_random(3, [2], [1], nu=1, seed=12)
    assert InstanceFile.dumps(first) == InstanceFile.dumps(second)
    assert first != other


def test_generation_caps():
    with pytest.raises(ResourceCapException):
        InstanceFactory.generate_random(3, [6], [6], nu=0, seed=1)
    small = ComputationSettings(max_global_vectors=10)
    with pytest.raises(ResourceCapException):
        InstanceFactory.generate_random(2, [1], [1], nu=2, seed=1, settings=small)
    with pytest.raises(InvalidArgumentException):
        InstanceFactory.generate_random(2, [0], [1], nu=0, seed=1)
    with pytest.raises(InvalidArgumentException):
        InstanceFactory.generate_random(2, [1], [1], nu=-1, seed=1)


def test_quadratic_phase_evaluation():
    p = 5
    phase = PhaseSpec.quadratic(FpMatrix([[1, 2], [0, 3]], p), [4, 1])
    rho = np.array([[1, 0], [1, 1], [2, 3]])
    # rho^T Q rho + l^T rho
    expected = [(1 + 4) % p, (1 + 2 + 3 + 4 + 1) % p, (4 + 12 + 27 + 8 + 3) % p]
    assert phase.evaluate(rho, p).tolist() == expected
    assert not phase.is_zero()
    assert PhaseSpec.quadratic(FpMatrix.zeros(2, 2, p), [0, 0]).is_zero()


def test_table_phase_uses_mixed_radix_index():
    phase = PhaseSpec.from_table([0, 1, 2, 0, 0, 0, 0, 0, 1])
    assert phase.evaluate(np.array([[1, 0], [2, 0], [2, 2]]), 3).tolist() == [1, 2, 1]
    with pytest.raises(InstanceValidationException):
        InstanceFactory.canonical_case(1, 3).with_phase(phase)


def test_random_phase_attachment():
    base = InstanceFactory.canonical_case(1, 3)
    quadratic = InstanceFactory.with_random_phase(base, PhaseKind.QUADRATIC, seed=3)
    table = InstanceFactory.with_random_phase(base, PhaseKind.TABLE, seed=3)
    assert quadratic.phase().kind() == PhaseKind.QUADRATIC
    assert table.phase().table().shape == (27,)
    assert quadratic.loc1() == base.loc1()
    generated = InstanceFactory.generate_random(2, [1], [1], nu=0, seed=5, phase_kind=PhaseKind.TABLE)
    assert generated.phase().kind() == PhaseKind.TABLE


def test_random_table_phase_follows_settings():
    base = InstanceFactory.canonical_case(1, 3)
    with pytest.raises(ResourceCapException):
        InstanceFactory.with_random_phase(base, PhaseKind.TABLE, seed=1, settings=ComputationSettings(max_global_vectors=10))
    with pytest.raises(ResourceCapException):
        InstanceFactory.generate_random(2, [8], [8], nu=0, seed=1, phase_kind=PhaseKind.TABLE)
    roomy = ComputationSettings(max_global_vectors=2 ** 17)
    generated = InstanceFactory.generate_random(2, [8], [8], nu=0, seed=1, phase_kind=PhaseKind.TABLE, settings=roomy)
    assert generated.phase().table().shape == (2 ** 16,)


def test_phase_values_are_reduced_mod_p():
    base = InstanceFactory.canonical_case(1, 3)
    multiples = base.with_phase(PhaseSpec.from_table([3] * 27))
    assert multiples.phase().is_zero()
    assert multiples.phase().table().tolist() == [0] * 27
    assert StateBuilder.build_state(multiples) == StateBuilder.build_state(base)
    assert EntropyCalculator.entropy_formula(multiples).exact_k() == 2
    assert PhaseSpec.quadratic(FpMatrix.zeros(2, 2, 3), [3, 6]).linear().tolist() == [0, 0]


@pytest.mark.parametrize("p,q,linear,expected", [
    (3, [[0, 1], [2, 0]], [0, 0], True),
    (3, [[0, 1], [1, 0]], [0, 0], False),
    (3, [[1, 0], [0, 0]], [0, 0], False),
    (2, [[1, 0], [0, 0]], [1, 0], True),
    (2, [[1, 0], [0, 0]], [0, 0], False),
    (2, [[0, 1], [1, 0]], [0, 1], False),
    (2, [[0, 1], [1, 0]], [0, 0], True),
])
def test_quadratic_phase_zero_as_function(p, q, linear, expected):
    phase = PhaseSpec.quadratic(FpMatrix(q, p), linear)
    assert phase.is_zero() == expected
    grid = np.array([[a, b] for a in range(p) for b in range(p)])
    assert (not phase.evaluate(grid, p).any()) == expected
