import json
import typing
import logging
import numpy as np
from fractions import Fraction
from concurrent.futures import ThreadPoolExecutor
from titan.arith_entanglement.config import (
    ComputationSettings,
    DEFAULT_SETTINGS
)
from titan.arith_entanglement.cyclotomic import CyclotomicAmplitude
from titan.arith_entanglement.fp_linalg import (
    enumerate_vectors,
    image,
    mixed_radix_digits,
    mixed_radix_index
)
from titan.arith_entanglement.instance import (
    Instance,
    InstanceValidator
)
from titan.arith_entanglement.exceptions import (
    DimensionMismatchException,
    InstanceParseException,
    InvalidArgumentException,
    ResourceCapException,
    UnsupportedComputationException
)


logger = logging.getLogger(__name__)

IndexPair = typing.Tuple[int, int]


class AmplitudeState:
    """
    A sparse vector on F_(S_1) x F_(S_2): `scale * amplitudes[(i1, i2)]`.

    Side indices are mixed-radix base-p encodings of the local coordinates,
    least-significant coordinate first, factors in instance order.
    """

    def __init__(self, p: int, m1: int, m2: int,
                 amplitudes: typing.Mapping[IndexPair, CyclotomicAmplitude],
                 scale: Fraction = Fraction(1)):
        self._p = p
        self._m1 = m1
        self._m2 = m2
        self._scale = Fraction(scale)
        self._amplitudes = {}
        for (i1, i2), value in sorted(amplitudes.items()):
            if value.p() != p:
                raise DimensionMismatchException(f"Amplitude in Z[zeta_{value.p()}] for a state over F_{p}")
            if not (0 <= i1 < p ** m1 and 0 <= i2 < p ** m2):
                raise DimensionMismatchException(f"Index pair ({i1}, {i2}) outside F_{p}^{m1} x F_{p}^{m2}")
            if not value.is_zero():
                self._amplitudes[(int(i1), int(i2))] = value

    def p(self):
        return self._p

    def m1(self):
        return self._m1

    def m2(self):
        return self._m2

    def scale(self) -> Fraction:
        return self._scale

    def amplitudes(self) -> typing.Dict[IndexPair, CyclotomicAmplitude]:
        return dict(self._amplitudes)

    def amplitude(self, i1: int, i2: int) -> CyclotomicAmplitude:
        return self._amplitudes.get((i1, i2), CyclotomicAmplitude.zero(self._p))

    def support(self) -> typing.FrozenSet[IndexPair]:
        return frozenset(self._amplitudes)

    def side_indices(self, side: int) -> typing.List[int]:
        """Sorted distinct indices of one side that carry a nonzero amplitude."""
        if side not in (1, 2):
            raise InvalidArgumentException(f"Side must be 1 or 2, got {side}")
        return sorted({pair[side - 1] for pair in self._amplitudes})

    def __len__(self):
        return len(self._amplitudes)

    def is_uniform(self):
        return len(set(self._amplitudes.values())) <= 1

    def norm_squared_element(self) -> CyclotomicAmplitude:
        """sum |a|^2 in Z[zeta_p], without the squared scale."""
        total = CyclotomicAmplitude.zero(self._p)
        for value in self._amplitudes.values():
            total = total + value.abs_squared()
        return total

    def norm_squared(self) -> Fraction:
        element = self.norm_squared_element()
        if not element.is_rational():
            raise UnsupportedComputationException(f"Squared norm {element} is not rational")
        return element.rational_value() * self._scale ** 2

    def norm_squared_float(self) -> float:
        total = sum(abs(value.to_complex()) ** 2 for value in self._amplitudes.values())
        return float(total * self._scale ** 2)

    def proportionality_factor(self, other) -> typing.Optional[Fraction]:
        """The rational r with other == r * self entrywise, or None."""
        if (self._p, self._m1, self._m2) != (other.p(), other.m1(), other.m2()):
            return None
        if self.support() != other.support():
            return None
        if not self._amplitudes:
            return Fraction(1)
        ratio = None
        for pair, value in self._amplitudes.items():
            entry = value.ratio_to(other.amplitude(*pair))
            if entry is None or (ratio is not None and entry != ratio):
                return None
            ratio = entry
        return ratio * other.scale() / self._scale

    def __eq__(self, other):
        return (isinstance(other, AmplitudeState)
                and (self._p, self._m1, self._m2, self._scale) == (other.p(), other.m1(), other.m2(), other.scale())
                and self._amplitudes == other.amplitudes())

    def __repr__(self):
        return f"AmplitudeState(p={self._p}, m1={self._m1}, m2={self._m2}, entries={len(self)}, scale={self._scale})"


class StateBuilder:

    CHUNK_SIZE = 1 << 15

    @classmethod
    def _ensure_indexable(cls, p: int, m: int):
        if p ** m >= 2 ** 62:
            raise ResourceCapException(f"Side space F_{p}^{m} is too large to index")

    @classmethod
    def _chunks(cls, total: int):
        return [(start, min(start + cls.CHUNK_SIZE, total)) for start in range(0, total, cls.CHUNK_SIZE)]

    @classmethod
    def _count_chunk(cls, instance: Instance, start: int, stop: int, with_phase: bool):
        """(i1, i2, phase) -> number of global classes in [start, stop) hitting it."""
        p = instance.p()
        rho = mixed_radix_digits(np.arange(start, stop, dtype=np.int64), p, instance.d())
        i1 = mixed_radix_index(instance.loc1().apply_rows(rho), p)
        i2 = mixed_radix_index(instance.loc2().apply_rows(rho), p)
        phases = instance.phase().evaluate(rho, p) if with_phase else np.zeros(len(rho), dtype=np.int64)
        keys, counts = np.unique(np.stack([i1, i2, phases], axis=1), axis=0, return_counts=True)
        return keys, counts

    @classmethod
    def _accumulate(cls, instance: Instance, settings: ComputationSettings, with_phase: bool):
        InstanceValidator.ensure_enumerable(instance, settings)
        for m in instance.side_dims():
            cls._ensure_indexable(instance.p(), m)
        chunks = cls._chunks(instance.p() ** instance.d())
        if settings.workers() > 1 and len(chunks) > 1:
            with ThreadPoolExecutor(max_workers=settings.workers()) as executor:
                partials = list(executor.map(lambda c: cls._count_chunk(instance, c[0], c[1], with_phase), chunks))
        else:
            partials = [cls._count_chunk(instance, start, stop, with_phase) for start, stop in chunks]
        p = instance.p()
        counts = {}
        for keys, values in partials:
            for (i1, i2, phase), n in zip(keys.tolist(), values.tolist()):
                counts.setdefault((i1, i2), [0] * p)[phase] += n
        logger.debug(f"Accumulated {p ** instance.d()} global classes of `{instance.label()}` "
                     f"into {len(counts)} index pairs over {len(chunks)} chunk(s)")
        return counts

    @classmethod
    def build_state(cls, instance: Instance, settings: ComputationSettings = DEFAULT_SETTINGS) -> AmplitudeState:
        p = instance.p()
        counts = cls._accumulate(instance, settings, with_phase=True)
        amplitudes = {pair: CyclotomicAmplitude.from_exponent_counts(c, p) for pair, c in counts.items()}
        m1, m2 = instance.side_dims()
        state = AmplitudeState(p, m1, m2, amplitudes, Fraction(1, p))
        logger.info(f"Built state of `{instance.label()}` with {len(state)} nonzero entries")
        return state

    @classmethod
    def support_counts(cls, instance: Instance, settings: ComputationSettings = DEFAULT_SETTINGS) -> typing.Dict[IndexPair, int]:
        """Fiber size of every image point (phase ignored)."""
        counts = cls._accumulate(instance, settings, with_phase=False)
        return {pair: c[0] for pair, c in counts.items()}


class StateOperations:

    @classmethod
    def apply_local_phases(cls, state: AmplitudeState,
                           f1: typing.Mapping[int, int],
                           f2: typing.Mapping[int, int]) -> AmplitudeState:
        amplitudes = {}
        for (i1, i2), value in state.amplitudes().items():
            if i1 not in f1 or i2 not in f2:
                raise InvalidArgumentException(f"Local phase maps do not cover support index ({i1}, {i2})")
            amplitudes[(i1, i2)] = value.rotate(int(f1[i1]) + int(f2[i2]))
        return AmplitudeState(state.p(), state.m1(), state.m2(), amplitudes, state.scale())

    @classmethod
    def random_local_phases(cls, state: AmplitudeState, rng: np.random.Generator):
        p = state.p()
        f1 = {i: int(rng.integers(0, p)) for i in state.side_indices(1)}
        f2 = {i: int(rng.integers(0, p)) for i in state.side_indices(2)}
        return f1, f2

    @classmethod
    def global_factor_state(cls, instance: Instance, settings: ComputationSettings = DEFAULT_SETTINGS) -> AmplitudeState:
        if not instance.phase().is_zero():
            raise UnsupportedComputationException("The global factor state is only defined for zero phase")
        p = instance.p()
        images = [image(instance.loc(side)) for side in (1, 2)]
        count = p ** (images[0].dim() + images[1].dim())
        if count > settings.max_global_vectors():
            raise ResourceCapException(f"Product support of {count} entries exceeds the cap of {settings.max_global_vectors()}")
        images = [enumerate_vectors(s, settings.enumeration_digits()) for s in images]
        indices1 = mixed_radix_index(images[0], p).tolist()
        indices2 = mixed_radix_index(images[1], p).tolist()
        one = CyclotomicAmplitude.one(p)
        m1, m2 = instance.side_dims()
        return AmplitudeState(p, m1, m2, {(i1, i2): one for i1 in indices1 for i2 in indices2}, Fraction(1, p))

    @classmethod
    def inner_product(cls, s: AmplitudeState, t: AmplitudeState) -> typing.Tuple[CyclotomicAmplitude, Fraction]:
        """sum s(x) * conj(t(x)), returned as (element, scale) with value element * scale."""
        if (s.p(), s.m1(), s.m2()) != (t.p(), t.m1(), t.m2()):
            raise DimensionMismatchException(f"Cannot pair {s} with {t}")
        total = CyclotomicAmplitude.zero(s.p())
        for pair, value in s.amplitudes().items():
            total = total + value * t.amplitude(*pair).conjugate()
        return total, s.scale() * t.scale()


class AmplitudeStateFile:

    FORMAT_VERSION = 1

    @classmethod
    def to_document(cls, state: AmplitudeState) -> dict:
        return {
            'version': cls.FORMAT_VERSION,
            'p': state.p(),
            'm1': state.m1(),
            'm2': state.m2(),
            'scale': str(state.scale()),
            'entries': [{'i1': i1, 'i2': i2, 'coeffs': list(value.coeffs())}
                        for (i1, i2), value in sorted(state.amplitudes().items())],
        }

    @classmethod
    def dumps(cls, state: AmplitudeState) -> str:
        return json.dumps(cls.to_document(state), indent=4) + "\n"

    @classmethod
    def loads(cls, text: str) -> AmplitudeState:
        try:
            document = json.loads(text)
        except json.JSONDecodeError as e:
            raise InstanceParseException(f"Malformed JSON: {e.msg}", f"line {e.lineno} column {e.colno}")
        try:
            if document['version'] != cls.FORMAT_VERSION:
                raise InstanceParseException(f"Unsupported state format version `{document['version']}`", '$.version')
            p = document['p']
            amplitudes = {}
            for n, entry in enumerate(document['entries']):
                location = f"$.entries[{n}]"
                try:
                    amplitudes[(entry['i1'], entry['i2'])] = CyclotomicAmplitude(entry['coeffs'], p)
                except ValueError as e:
                    raise InstanceParseException(str(e), location)
            return AmplitudeState(p, document['m1'], document['m2'], amplitudes, Fraction(document['scale']))
        except (KeyError, TypeError) as e:
            raise InstanceParseException(f"Malformed state document: {e!r}")
        except ValueError as e:
            raise InstanceParseException(str(e))
