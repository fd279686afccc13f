"""End-to-end checks of the exact entropy formula against explicit states."""
import math
import numpy as np
import pytest
from titan.arith_entanglement import (
    AmplitudeBlocks,
    EntropyCalculator,
    Glueing,
    InstanceFactory,
    InstanceValidator,
    PhaseKind,
    StateBuilder,
    StateOperations
)
from conftest import (
    CANONICAL_K,
    corpus_parameters
)


RAMIFIED_SEEDS = [seed for seed in range(120) if corpus_parameters(seed)[3] > 0][:60]


@pytest.mark.parametrize("p", [2, 3])
@pytest.mark.parametrize("case_id", sorted(CANONICAL_K))
def test_canonical_cases(case_id, p, canonical_instances, settings):
    instance = canonical_instances[(case_id, p)]
    k = CANONICAL_K[case_id]
    stats = InstanceValidator.validate(instance)
    assert stats.entropy_exponent() == k
    assert EntropyCalculator.entropy_formula(instance).exact_k() == k
    assert EntropyCalculator.entropy_rank(instance, settings).exact_k() == k
    spectrum = EntropyCalculator.schmidt_spectrum(StateBuilder.build_state(instance, settings), settings)
    assert spectrum.rank() == p ** k
    assert spectrum.nonzero() == pytest.approx([p ** -k] * (p ** k))
    assert EntropyCalculator.von_neumann(spectrum).nats() == pytest.approx(k * math.log(p), abs=settings.agreement_tol())


@pytest.mark.parametrize("seed", RAMIFIED_SEEDS)
def test_eigenstructure_with_kernel(seed, corpus_instance, settings):
    instance = corpus_instance(seed)
    stats = InstanceValidator.validate(instance)
    p, nu, k = instance.p(), stats.nu(), stats.entropy_exponent()
    assert nu > 0
    state = StateBuilder.build_state(instance, settings)
    blocks = AmplitudeBlocks.from_state(state)
    assert blocks.block_count() == p ** k
    assert blocks.block_shapes() == [(p ** (stats.s2() - nu), p ** (stats.s1() - nu))]
    spectrum = EntropyCalculator.schmidt_spectrum(state, settings)
    assert spectrum.rank() == p ** k
    assert spectrum.is_flat(settings.spectrum_tol())


def test_formula_matches_spectrum_on_random_corpus(random_corpus, settings):
    for instance in random_corpus:
        formula = EntropyCalculator.entropy_formula(instance)
        spectral = EntropyCalculator.entropy_spectral(StateBuilder.build_state(instance, settings), settings)
        assert abs(formula.nats() - spectral.nats()) <= settings.agreement_tol(), instance.label()


@pytest.mark.parametrize("seed", [0, 1, 2, 6, 7, 8])
def test_local_phases_leave_spectrum_unchanged(seed, corpus_instance, settings):
    instance = corpus_instance(seed, phase_kind=PhaseKind.TABLE, nu=0)
    state = StateBuilder.build_state(instance, settings)
    reference = EntropyCalculator.schmidt_spectrum(state, settings)
    first, second = EntropyCalculator.side_entropies(state, settings)
    assert first.nats() == pytest.approx(second.nats(), abs=settings.spectrum_tol())
    rng = np.random.default_rng(seed)
    for _ in range(50):
        f1, f2 = StateOperations.random_local_phases(state, rng)
        perturbed = EntropyCalculator.schmidt_spectrum(StateOperations.apply_local_phases(state, f1, f2), settings)
        assert perturbed.is_close(reference, settings.spectrum_tol())


@pytest.mark.parametrize("seed", range(0, 60, 3))
def test_glueing_over_corpus(seed, corpus_instance, settings):
    instance = corpus_instance(seed)
    nu = InstanceValidator.validate(instance).nu()
    result = Glueing.round_trip(instance, nu + 1, seed, settings)
    assert result.is_exact()
    assert result.uniform_value() * instance.p() == instance.p() ** nu
    assert EntropyCalculator.entropy_spectral(result.contracted(), settings).nats() == pytest.approx(
        EntropyCalculator.entropy_formula(instance).nats(), abs=settings.agreement_tol())


@pytest.mark.parametrize("seed", range(10))
def test_global_factor_is_a_product_state(seed, corpus_instance, settings):
    product = StateOperations.global_factor_state(corpus_instance(seed), settings)
    assert EntropyCalculator.schmidt_spectrum(product, settings).rank() == 1
    assert EntropyCalculator.entropy_spectral(product, settings).nats() == pytest.approx(0.0, abs=1e-12)
