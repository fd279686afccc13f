"""Auxiliary places appended to side 2 with coordinates (unramified, ramified), and the contraction back."""
import json
import typing
import logging
import numpy as np
from fractions import Fraction
from titan.arith_entanglement.config import (
    ComputationSettings,
    DEFAULT_SETTINGS
)
from titan.arith_entanglement.cyclotomic import CyclotomicAmplitude
from titan.arith_entanglement.fp_linalg import (
    FpMatrix,
    image,
    kernel,
    mixed_radix_digits,
    mixed_radix_index
)
from titan.arith_entanglement.symplectic import (
    LocalFactor,
    is_lagrangian
)
from titan.arith_entanglement.instance import (
    Instance,
    InstanceValidator
)
from titan.arith_entanglement.instance_file import (
    InstanceFile,
    parse_matrix
)
from titan.arith_entanglement.state import (
    AmplitudeState,
    StateBuilder
)
from titan.arith_entanglement.exceptions import (
    GenerationException,
    InstanceParseException,
    InvalidArgumentException,
    InvariantViolationException,
    UnsupportedComputationException
)


logger = logging.getLogger(__name__)


class InflatedInstance:

    def __init__(self, base: Instance, k: int, c_matrix: FpMatrix, a_matrix: FpMatrix, enlarged: Instance):
        self._base = base
        self._k = k
        self._c_matrix = c_matrix
        self._a_matrix = a_matrix
        self._enlarged = enlarged

    def base(self) -> Instance:
        return self._base

    def k(self):
        return self._k

    def c_matrix(self) -> FpMatrix:
        return self._c_matrix

    def a_matrix(self) -> FpMatrix:
        return self._a_matrix

    def enlarged(self) -> Instance:
        return self._enlarged

    def aux_factors(self):
        return self._enlarged.side2()[len(self._base.side2()):]

    def __eq__(self, other):
        return (isinstance(other, InflatedInstance)
                and self._base == other.base()
                and self._c_matrix == other.c_matrix()
                and self._a_matrix == other.a_matrix())

    def __repr__(self):
        return f"InflatedInstance(base={self._base.label()!r}, k={self._k}, d'={self._enlarged.d()})"


class ContractionWeights:
    """Weights on the p^k unramified auxiliary tuples, indexed mixed-radix."""

    def __init__(self, p: int, k: int, weights: typing.Sequence[CyclotomicAmplitude]):
        if len(weights) != p ** k:
            raise InvalidArgumentException(f"Expected {p ** k} weights, got {len(weights)}")
        self._p = p
        self._k = k
        self._weights = list(weights)

    @classmethod
    def ones(cls, p: int, k: int):
        return cls(p, k, [CyclotomicAmplitude.one(p)] * (p ** k))

    @classmethod
    def from_phase_values(cls, p: int, k: int, values):
        return cls(p, k, [CyclotomicAmplitude.zeta_power(-int(v), p) for v in values])

    def p(self):
        return self._p

    def k(self):
        return self._k

    def weight(self, index: int) -> CyclotomicAmplitude:
        return self._weights[index]

    def is_ones(self):
        return all(w == 1 for w in self._weights)


class GlueingResult:

    def __init__(self, inflated: InflatedInstance, base_state: AmplitudeState, contracted: AmplitudeState,
                 factor: typing.Optional[Fraction], uniform_value: Fraction):
        self._inflated = inflated
        self._base_state = base_state
        self._contracted = contracted
        self._factor = factor
        self._uniform_value = uniform_value

    def inflated(self):
        return self._inflated

    def base_state(self):
        return self._base_state

    def contracted(self):
        return self._contracted

    def factor(self):
        """r with contracted == r * base_state, None when they are not proportional."""
        return self._factor

    def is_exact(self):
        return self._factor is not None

    def uniform_value(self):
        return self._uniform_value

    def to_dict(self):
        return {
            'k': self._inflated.k(),
            'enlarged_d': self._inflated.enlarged().d(),
            'exact': self.is_exact(),
            'factor': None if self._factor is None else str(self._factor),
            'uniform_value': str(self._uniform_value),
        }


class Glueing:

    MAX_RETRIES = 64

    @classmethod
    def _random_matrix(cls, rng: np.random.Generator, rows: int, cols: int, p: int) -> FpMatrix:
        return FpMatrix(rng.integers(0, p, size=(rows, cols)), p, cols=cols)

    @classmethod
    def _draw_c_matrix(cls, instance: Instance, k: int, nu: int, rng: np.random.Generator):
        """(c, m): c = m P is injective on the kernel of the stacked localization, m has rank nu."""
        p, d = instance.p(), instance.d()
        kernel_basis = kernel(instance.stacked_loc()).basis()
        for attempt in range(cls.MAX_RETRIES):
            projection = cls._random_matrix(rng, nu, d, p)
            mixing = cls._random_matrix(rng, k, nu, p)
            if (projection @ kernel_basis.transpose()).rank() == nu and mixing.rank() == nu:
                logger.debug(f"Drew auxiliary coefficients after {attempt + 1} attempt(s)")
                return mixing @ projection, mixing
        raise GenerationException(f"Failed to draw auxiliary coefficients for k={k}, nu={nu} in {cls.MAX_RETRIES} attempts")

    @classmethod
    def assemble(cls, base: Instance, c_matrix: FpMatrix, a_matrix: FpMatrix) -> InflatedInstance:
        p, d = base.p(), base.d()
        k = c_matrix.rows()
        extra = a_matrix.rows()
        if c_matrix.cols() != d or a_matrix.cols() != k:
            raise InvalidArgumentException(f"Auxiliary matrices {c_matrix.shape()} and {a_matrix.shape()} do not fit d={d}, k={k}")
        m1, m2 = base.side_dims()
        loc1 = base.loc1().hstack(FpMatrix.zeros(m1, extra, p))
        aux_rows = np.zeros((2 * k, d + extra), dtype=np.int64)
        aux_rows[0::2, :d] = c_matrix.entries()
        aux_rows[1::2, d:] = a_matrix.entries().T
        loc2 = base.loc2().hstack(FpMatrix.zeros(m2, extra, p)).vstack(FpMatrix(aux_rows, p, cols=d + extra))
        enlarged = Instance(p=p,
                            side1=base.side1(),
                            side2=list(base.side2()) + [LocalFactor.auxiliary(p)] * k,
                            d=d + extra,
                            loc1=loc1,
                            loc2=loc2,
                            label=f"{base.label()}+aux{k}",
                            lagrangian_required=base.lagrangian_required())
        stats = InstanceValidator.validate(enlarged)
        if stats.nu() != 0:
            raise InvariantViolationException(f"Enlarged localization has a kernel of dimension {stats.nu()}")
        if base.lagrangian_required() and not is_lagrangian(enlarged.local_space(), image(enlarged.stacked_loc())):
            raise InvariantViolationException("Enlarged image is not Lagrangian")
        return InflatedInstance(base, k, c_matrix, a_matrix, enlarged)

    @classmethod
    def inflate(cls, instance: Instance, k: int, seed) -> InflatedInstance:
        if not instance.phase().is_zero():
            raise UnsupportedComputationException("Glueing is only modeled for zero-phase instances")
        nu = InstanceValidator.validate(instance).nu()
        if k < nu:
            raise InvalidArgumentException(f"Need at least nu={nu} auxiliary places, got k={k}")
        p, d = instance.p(), instance.d()
        if nu == 0:
            c_matrix = FpMatrix.zeros(k, d, p)
            a_matrix = FpMatrix.identity(k, p)
        else:
            rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
            c_matrix, mixing = cls._draw_c_matrix(instance, k, nu, rng)
            a_matrix = kernel(mixing.transpose()).basis()
        inflated = cls.assemble(instance, c_matrix, a_matrix)
        logger.info(f"Inflated `{instance.label()}` by {k} auxiliary place(s): d'={inflated.enlarged().d()}")
        return inflated

    @classmethod
    def contract_unramified(cls, inflated: InflatedInstance,
                            weights: typing.Optional[ContractionWeights] = None,
                            settings: ComputationSettings = DEFAULT_SETTINGS) -> AmplitudeState:
        base = inflated.base()
        p, k = base.p(), inflated.k()
        weights = ContractionWeights.ones(p, k) if weights is None else weights
        if (weights.p(), weights.k()) != (p, k):
            raise InvalidArgumentException(f"Weights for p={weights.p()}, k={weights.k()} do not fit p={p}, k={k}")
        enlarged_state = StateBuilder.build_state(inflated.enlarged(), settings)
        m1, m2 = base.side_dims()
        radix = p ** m2
        sums = {}
        for (i1, i2), value in enlarged_state.amplitudes().items():
            aux = mixed_radix_digits([i2 // radix], p, 2 * k)[0]
            if aux[1::2].any():
                continue
            weight = weights.weight(int(mixed_radix_index(aux[0::2].reshape(1, -1), p)[0]))
            pair = (i1, i2 % radix)
            sums[pair] = sums.get(pair, CyclotomicAmplitude.zero(p)) + value * weight
        contracted = AmplitudeState(p, m1, m2, sums, enlarged_state.scale())
        logger.debug(f"Contracted {len(enlarged_state)} enlarged entries into {len(contracted)}")
        return contracted

    @classmethod
    def uniform_value(cls, inflated: InflatedInstance, settings: ComputationSettings = DEFAULT_SETTINGS,
                      contracted: typing.Optional[AmplitudeState] = None) -> Fraction:
        if not inflated.base().phase().is_zero():
            raise UnsupportedComputationException("The uniform value is only defined for zero phase")
        contracted = cls.contract_unramified(inflated, settings=settings) if contracted is None else contracted
        values = set(contracted.amplitudes().values())
        if len(values) != 1:
            raise InvariantViolationException(f"Contracted state takes {len(values)} distinct values on its support")
        value = values.pop()
        if not value.is_rational():
            raise InvariantViolationException(f"Contracted value {value} is not rational")
        return value.rational_value() * contracted.scale()

    @classmethod
    def round_trip(cls, instance: Instance, k: int, seed,
                   settings: ComputationSettings = DEFAULT_SETTINGS) -> GlueingResult:
        inflated = cls.inflate(instance, k, seed)
        contracted = cls.contract_unramified(inflated, settings=settings)
        base_state = StateBuilder.build_state(instance, settings)
        factor = base_state.proportionality_factor(contracted)
        value = cls.uniform_value(inflated, settings, contracted=contracted)
        return GlueingResult(inflated, base_state, contracted, factor, value)


class InflatedInstanceFile:
    """An instance document with an `auxiliary` section {k, c_matrix, a_matrix}."""

    @classmethod
    def to_document(cls, inflated: InflatedInstance) -> dict:
        document = InstanceFile.to_document(inflated.base())
        document['auxiliary'] = {
            'k': inflated.k(),
            'c_matrix': inflated.c_matrix().to_list(),
            'a_matrix': inflated.a_matrix().to_list(),
        }
        return document

    @classmethod
    def dumps(cls, inflated: InflatedInstance) -> str:
        return json.dumps(cls.to_document(inflated), indent=4) + "\n"

    @classmethod
    def loads(cls, text: str) -> InflatedInstance:
        try:
            document = json.loads(text)
        except json.JSONDecodeError as e:
            raise InstanceParseException(f"Malformed JSON: {e.msg}", f"line {e.lineno} column {e.colno}")
        if not isinstance(document, dict) or not isinstance(document.get('auxiliary'), dict):
            raise InstanceParseException("Missing field `auxiliary`")
        auxiliary = document.pop('auxiliary')
        base = InstanceFile.from_document(document)
        k = auxiliary.get('k')
        if isinstance(k, bool) or not isinstance(k, int) or k < 0:
            raise InstanceParseException(f"Invalid auxiliary count `{k!r}`", '$.auxiliary.k')
        c_matrix = parse_matrix(auxiliary.get('c_matrix'), base.p(), '$.auxiliary.c_matrix', cols=base.d())
        a_matrix = parse_matrix(auxiliary.get('a_matrix'), base.p(), '$.auxiliary.a_matrix', cols=k)
        if c_matrix.rows() != k:
            raise InstanceParseException(f"Expected {k} rows, got {c_matrix.rows()}", '$.auxiliary.c_matrix')
        try:
            return Glueing.assemble(base, c_matrix, a_matrix)
        except InvalidArgumentException as e:
            raise InstanceParseException(str(e), '$.auxiliary')
