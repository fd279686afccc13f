import pytest
from titan.arith_entanglement import (
    ComputationSettings,
    InstanceFactory,
    PhaseKind
)


# (side-1 half dims, side-2 half dims); total local dimension stays <= 8
CORPUS_SHAPES = [
    ([1], [1]),
    ([2], [1]),
    ([1], [2]),
    ([1, 1], [1]),
    ([1], [1, 1]),
    ([2], [2]),
]

# (s1, t2) -> k for the five canonical cases
CANONICAL_K = {
    1: 2,
    2: 1,
    3: 0,
    4: 1,
    5: 0,
}


def corpus_parameters(seed: int):
    p = (2, 3)[seed % 2]
    side1, side2 = CORPUS_SHAPES[(seed // 2) % len(CORPUS_SHAPES)]
    nu = (seed // 3) % 3
    return p, side1, side2, nu


def make_corpus_instance(seed: int, phase_kind: PhaseKind = PhaseKind.ZERO, nu=None):
    p, side1, side2, default_nu = corpus_parameters(seed)
    return InstanceFactory.generate_random(p=p,
                                           side1_halfdims=side1,
                                           side2_halfdims=side2,
                                           nu=default_nu if nu is None else nu,
                                           seed=seed,
                                           phase_kind=phase_kind)


@pytest.fixture(scope='session')
def settings():
    return ComputationSettings()


@pytest.fixture(scope='session')
def canonical_instances():
    return {(case_id, p): InstanceFactory.canonical_case(case_id, p) for case_id in CANONICAL_K for p in (2, 3)}


@pytest.fixture(scope='session')
def corpus_instance():
    return make_corpus_instance


@pytest.fixture(scope='session')
def random_corpus():
    return [make_corpus_instance(seed) for seed in range(200)]


@pytest.fixture(scope='session')
def canonical_k():
    return dict(CANONICAL_K)
