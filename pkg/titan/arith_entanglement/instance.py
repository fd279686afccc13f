import enum
import typing
import logging
import numpy as np
from titan.arith_entanglement.config import (
    ComputationSettings,
    DEFAULT_SETTINGS
)
from titan.arith_entanglement.fp_linalg import (
    FpMatrix,
    ensure_prime,
    image,
    kernel,
    mixed_radix_index,
    subspace_intersection,
    subspace_sum
)
from titan.arith_entanglement.symplectic import (
    LocalFactor,
    SymplecticSpace,
    direct_sum,
    isotropy_defect,
    random_lagrangian
)
from titan.arith_entanglement.exceptions import (
    GenerationException,
    InstanceValidationException,
    InvalidArgumentException,
    InvariantViolationException,
    ResourceCapException
)


logger = logging.getLogger(__name__)


class PhaseKind(enum.Enum):
    ZERO = 'zero'
    TABLE = 'table'
    QUADRATIC = 'quadratic'


class PhaseSpec:
    """
    The Chern-Simons phase on global classes, as a Z/pZ-valued function of rho in F_p^d.

    `table` is indexed by the mixed-radix index of rho; `quadratic` evaluates
    rho^T Q rho + l^T rho mod p.
    """

    def __init__(self, kind: PhaseKind, table=None, q_matrix: typing.Optional[FpMatrix] = None, linear=None):
        self._kind = kind
        self._table = None if table is None else np.asarray(table, dtype=np.int64)
        self._q_matrix = q_matrix
        self._linear = None if linear is None else np.asarray(linear, dtype=np.int64)
        if q_matrix is not None and self._linear is not None:
            self._linear = np.mod(self._linear, q_matrix.p())
        if kind == PhaseKind.TABLE and self._table is None:
            raise InvalidArgumentException("Table phase needs a table")
        if kind == PhaseKind.QUADRATIC and (q_matrix is None or self._linear is None):
            raise InvalidArgumentException("Quadratic phase needs a q_matrix and a linear part")
        if kind == PhaseKind.QUADRATIC and q_matrix.rows() != q_matrix.cols():
            raise InvalidArgumentException(f"q_matrix must be square, got {q_matrix.shape()}")
        if kind == PhaseKind.QUADRATIC and self._linear.shape != (q_matrix.rows(),):
            raise InvalidArgumentException(f"Linear part of length {self._linear.shape} does not fit q_matrix {q_matrix.shape()}")

    @classmethod
    def zero(cls):
        return cls(PhaseKind.ZERO)

    @classmethod
    def from_table(cls, values):
        return cls(PhaseKind.TABLE, table=values)

    @classmethod
    def quadratic(cls, q_matrix: FpMatrix, linear):
        return cls(PhaseKind.QUADRATIC, q_matrix=q_matrix, linear=linear)

    def kind(self):
        return self._kind

    def table(self):
        return self._table

    def q_matrix(self):
        return self._q_matrix

    def linear(self):
        return self._linear

    def is_zero(self):
        """True when the phase vanishes as a function on F_p^d."""
        if self._kind == PhaseKind.ZERO:
            return True
        if self._kind == PhaseKind.TABLE:
            return not self._table.any()
        p = self._q_matrix.p()
        q = self._q_matrix.entries()
        symmetric = np.mod(q + q.T, p)
        np.fill_diagonal(symmetric, 0)
        # over F_2, x^2 = x folds the diagonal into the linear part
        diagonal = np.mod(np.diag(q) + self._linear, p) if p == 2 else np.concatenate([np.diag(q), self._linear])
        return not symmetric.any() and not diagonal.any()

    def reduced(self, p: int):
        """Copy with table values reduced mod p."""
        if self._kind != PhaseKind.TABLE:
            return self
        return self.__class__(PhaseKind.TABLE, table=np.mod(self._table, p))

    def ensure_fits(self, p: int, d: int):
        if self._kind == PhaseKind.TABLE and self._table.shape != (p ** d,):
            raise InstanceValidationException(f"Phase table has {self._table.size} entries, expected {p ** d}")
        if self._kind == PhaseKind.QUADRATIC:
            if self._q_matrix.p() != p:
                raise InstanceValidationException(f"Phase q_matrix has modulus {self._q_matrix.p()}, expected {p}")
            if self._q_matrix.rows() != d:
                raise InstanceValidationException(f"Phase q_matrix is {self._q_matrix.shape()}, expected {d}x{d}")

    def evaluate(self, vectors: np.ndarray, p: int) -> np.ndarray:
        """Phase values for each row of `vectors` (N x d)."""
        vectors = np.asarray(vectors, dtype=np.int64)
        if self._kind == PhaseKind.ZERO:
            return np.zeros(vectors.shape[0], dtype=np.int64)
        if self._kind == PhaseKind.TABLE:
            return np.mod(self._table[mixed_radix_index(vectors, p)], p)
        quadratic = np.einsum('ni,ij,nj->n', vectors, self._q_matrix.entries(), vectors)
        return np.mod(quadratic + vectors @ self._linear, p)

    def __eq__(self, other):
        if not isinstance(other, PhaseSpec) or self._kind != other.kind():
            return False
        if self._kind == PhaseKind.TABLE:
            return np.array_equal(self._table, other.table())
        if self._kind == PhaseKind.QUADRATIC:
            return self._q_matrix == other.q_matrix() and np.array_equal(self._linear, other.linear())
        return True

    def __repr__(self):
        return f"PhaseSpec({self._kind.value})"


class DerivedStats:

    def __init__(self, s1: int, s2: int, t1: int, t2: int, nu: int, mu: int, d: int,
                 kernel_sum_dim: int, kernel_intersection_dim: int):
        self._s1 = s1
        self._s2 = s2
        self._t1 = t1
        self._t2 = t2
        self._nu = nu
        self._mu = mu
        self._d = d
        self._kernel_sum_dim = kernel_sum_dim
        self._kernel_intersection_dim = kernel_intersection_dim

    def s1(self):
        return self._s1

    def s2(self):
        return self._s2

    def t1(self):
        return self._t1

    def t2(self):
        return self._t2

    def nu(self):
        return self._nu

    def mu(self):
        return self._mu

    def d(self):
        return self._d

    def kernel_sum_dim(self):
        return self._kernel_sum_dim

    def kernel_intersection_dim(self):
        return self._kernel_intersection_dim

    def entropy_exponent(self):
        return self._t2 - self._s1 + self._nu

    def as_tuple(self):
        return (self._s1, self._s2, self._t1, self._t2, self._nu, self._mu, self._d)

    def to_dict(self):
        return {
            's1': self._s1,
            's2': self._s2,
            't1': self._t1,
            't2': self._t2,
            'nu': self._nu,
            'mu': self._mu,
            'd': self._d,
            'kernel_sum_dim': self._kernel_sum_dim,
            'kernel_intersection_dim': self._kernel_intersection_dim,
        }

    def __eq__(self, other):
        return isinstance(other, DerivedStats) and self.to_dict() == other.to_dict()

    def __repr__(self):
        return f"DerivedStats({self.to_dict()})"


class Instance:

    def __init__(self,
                 p: int,
                 side1: typing.Sequence[LocalFactor],
                 side2: typing.Sequence[LocalFactor],
                 d: int,
                 loc1: FpMatrix,
                 loc2: FpMatrix,
                 phase: typing.Optional[PhaseSpec] = None,
                 label: str = '',
                 lagrangian_required: bool = True):
        p = ensure_prime(p)
        side1 = tuple(side1)
        side2 = tuple(side2)
        if not side1 or not side2:
            raise InstanceValidationException("Both sides need at least one local factor")
        if d < 0:
            raise InstanceValidationException(f"Global dimension must be nonnegative, got {d}")
        for factor in side1 + side2:
            if factor.p() != p:
                raise InstanceValidationException(f"Local factor has modulus {factor.p()}, expected {p}")
        for name, loc, side in (('loc1', loc1, side1), ('loc2', loc2, side2)):
            if loc.p() != p:
                raise InstanceValidationException(f"{name} has modulus {loc.p()}, expected {p}")
            expected = (sum(f.dim() for f in side), d)
            if loc.shape() != expected:
                raise InstanceValidationException(f"{name} has shape {loc.shape()}, expected {expected}")
        phase = PhaseSpec.zero() if phase is None else phase
        phase.ensure_fits(p, d)
        phase = phase.reduced(p)
        self._p = p
        self._side1 = side1
        self._side2 = side2
        self._d = d
        self._loc1 = loc1
        self._loc2 = loc2
        self._phase = phase
        self._label = label
        self._lagrangian_required = bool(lagrangian_required)

    def p(self):
        return self._p

    def side1(self):
        return self._side1

    def side2(self):
        return self._side2

    def side(self, index: int):
        if index not in (1, 2):
            raise InvalidArgumentException(f"Side must be 1 or 2, got {index}")
        return self._side1 if index == 1 else self._side2

    def d(self):
        return self._d

    def loc1(self) -> FpMatrix:
        return self._loc1

    def loc2(self) -> FpMatrix:
        return self._loc2

    def loc(self, index: int) -> FpMatrix:
        return self._loc1 if index == 1 else self._loc2

    def phase(self) -> PhaseSpec:
        return self._phase

    def label(self):
        return self._label

    def lagrangian_required(self):
        return self._lagrangian_required

    def side_dims(self):
        return (self._loc1.rows(), self._loc2.rows())

    def total_local_dim(self):
        return sum(self.side_dims())

    def stacked_loc(self) -> FpMatrix:
        return self._loc1.vstack(self._loc2)

    def local_space(self) -> SymplecticSpace:
        return direct_sum([f.space() for f in self._side1 + self._side2])

    def with_phase(self, phase: PhaseSpec, label: typing.Optional[str] = None):
        return self.__class__(p=self._p,
                              side1=self._side1,
                              side2=self._side2,
                              d=self._d,
                              loc1=self._loc1,
                              loc2=self._loc2,
                              phase=phase,
                              label=self._label if label is None else label,
                              lagrangian_required=self._lagrangian_required)

    def __eq__(self, other):
        return (isinstance(other, Instance)
                and self._p == other.p()
                and self._side1 == other.side1()
                and self._side2 == other.side2()
                and self._d == other.d()
                and self._loc1 == other.loc1()
                and self._loc2 == other.loc2()
                and self._phase == other.phase()
                and self._label == other.label()
                and self._lagrangian_required == other.lagrangian_required())

    def __repr__(self):
        return f"Instance(label={self._label!r}, p={self._p}, d={self._d}, side_dims={self.side_dims()})"


class InstanceValidator:

    @classmethod
    def derive_stats(cls, instance: Instance) -> DerivedStats:
        kernel1 = kernel(instance.loc1())
        kernel2 = kernel(instance.loc2())
        d = instance.d()
        return DerivedStats(s1=kernel1.dim(),
                            s2=kernel2.dim(),
                            t1=d - kernel1.dim(),
                            t2=d - kernel2.dim(),
                            nu=kernel(instance.stacked_loc()).dim(),
                            mu=instance.total_local_dim() // 2,
                            d=d,
                            kernel_sum_dim=subspace_sum(kernel1, kernel2).dim(),
                            kernel_intersection_dim=subspace_intersection(kernel1, kernel2).dim())

    @classmethod
    def ensure_lagrangian_image(cls, instance: Instance):
        space = instance.local_space()
        lagrangian = image(instance.stacked_loc())
        if lagrangian.dim() != space.half_dim():
            raise InstanceValidationException(f"Image of the localization has dimension {lagrangian.dim()}, "
                                              f"a Lagrangian needs {space.half_dim()}")
        defect = isotropy_defect(space, lagrangian)
        if defect is not None:
            i, j, value = defect
            raise InstanceValidationException(f"Image of the localization is not isotropic: basis vectors {i} and {j} "
                                              f"pair to {value} ({lagrangian.basis().to_list()[i]} vs {lagrangian.basis().to_list()[j]})")

    @classmethod
    def ensure_consistent_stats(cls, stats: DerivedStats, instance: Instance):
        if stats.kernel_intersection_dim() != stats.nu():
            raise InvariantViolationException(f"dim(Ker loc1 cap Ker loc2) = {stats.kernel_intersection_dim()} differs from nu = {stats.nu()}")
        if stats.entropy_exponent() != stats.d() - stats.kernel_sum_dim():
            raise InvariantViolationException(f"t2 - s1 + nu = {stats.entropy_exponent()} but d - dim(Ker loc1 + Ker loc2) = {stats.d() - stats.kernel_sum_dim()}")
        if stats.entropy_exponent() < 0:
            raise InvariantViolationException(f"Negative entropy exponent {stats.entropy_exponent()}")
        if instance.lagrangian_required():
            m1, m2 = instance.side_dims()
            if stats.t2() + stats.s1() - stats.nu() != m2 or stats.t1() + stats.s2() - stats.nu() != m1:
                raise InvariantViolationException(f"Lagrangian image violates t_i + (s_j - nu) = dim F_(S_i): {stats}")

    @classmethod
    def validate(cls, instance: Instance) -> DerivedStats:
        stats = cls.derive_stats(instance)
        if 2 * instance.d() != instance.total_local_dim() + 2 * stats.nu():
            raise InstanceValidationException(f"Global dimension {instance.d()} differs from (total local dim)/2 + nu = "
                                              f"{instance.total_local_dim()}/2 + {stats.nu()}")
        if instance.lagrangian_required():
            cls.ensure_lagrangian_image(instance)
        else:
            logger.warning(f"Instance `{instance.label()}` validated without the Lagrangian image requirement")
        cls.ensure_consistent_stats(stats, instance)
        logger.debug(f"Validated instance `{instance.label()}`: {stats}")
        return stats

    @classmethod
    def ensure_enumerable(cls, instance: Instance, settings: ComputationSettings = DEFAULT_SETTINGS):
        count = instance.p() ** instance.d()
        if count > settings.max_global_vectors():
            raise ResourceCapException(f"Enumerating p^d = {instance.p()}^{instance.d()} = {count} global classes "
                                       f"exceeds the cap of {settings.max_global_vectors()}")


class InstanceFactory:

    # (s1, t2) realized by each canonical case
    CANONICAL_CASES = {
        1: (0, 2),
        2: (1, 2),
        3: (2, 2),
        4: (0, 1),
        5: (1, 1),
    }

    MAX_RETRIES = 64

    @classmethod
    def _canonical_generators(cls, case_id: int, half_dim1: int):
        """Images of the first three global basis vectors as (side-1 vector, side-2 vector)."""
        def a(i):
            v = np.zeros(2 * half_dim1, dtype=np.int64)
            v[i] = 1
            return v

        def b(i):
            return a(half_dim1 + i)

        zero1 = np.zeros(2 * half_dim1, dtype=np.int64)
        c0 = np.array([1, 0], dtype=np.int64)
        c1 = np.array([0, 1], dtype=np.int64)
        zero2 = np.zeros(2, dtype=np.int64)
        if case_id == 1:
            return [(a(0), c0), (b(0), -c1), (a(1), zero2)]
        elif case_id == 2:
            return [(zero1, c0), (a(0), c1), (a(1), zero2)]
        elif case_id == 3:
            return [(zero1, c0), (zero1, c1), (a(0), zero2)]
        elif case_id == 4:
            return [(a(0), c0), (a(1), zero2), (b(0), zero2)]
        else:
            return [(zero1, c0), (a(0), zero2), (a(1), zero2)]

    @classmethod
    def canonical_case(cls, case_id: int, p: int, degree: int = 2) -> Instance:
        if case_id not in cls.CANONICAL_CASES:
            raise InvalidArgumentException(f"Canonical case must be one of {sorted(cls.CANONICAL_CASES)}, got {case_id}")
        if degree < 2 or degree % 2:
            raise InvalidArgumentException(f"Field degree must be even and at least 2, got {degree}")
        p = ensure_prime(p)
        half_dim1 = 1 + degree // 2
        generators = cls._canonical_generators(case_id, half_dim1)
        for i in range(2, half_dim1):
            extra = np.zeros(2 * half_dim1, dtype=np.int64)
            extra[i] = 1
            generators.append((extra, np.zeros(2, dtype=np.int64)))
        s1, t2 = cls.CANONICAL_CASES[case_id]
        # a Lagrangian image forces t2 + s1 = dim F_(S_2) = 2
        lagrangian_required = (t2 + s1 == 2)
        return Instance(p=p,
                        side1=[LocalFactor.standard(half_dim1, p)],
                        side2=[LocalFactor.standard(1, p)],
                        d=len(generators),
                        loc1=FpMatrix.from_columns([g[0] for g in generators], p, rows=2 * half_dim1),
                        loc2=FpMatrix.from_columns([g[1] for g in generators], p, rows=2),
                        phase=PhaseSpec.zero(),
                        label=f"canonical-{case_id}-s1={s1}-t2={t2}-p={p}",
                        lagrangian_required=lagrangian_required)

    @classmethod
    def _random_full_rank(cls, rng: np.random.Generator, rows: int, cols: int, p: int) -> FpMatrix:
        for attempt in range(cls.MAX_RETRIES):
            candidate = FpMatrix(rng.integers(0, p, size=(rows, cols)), p, cols=cols)
            if candidate.rank() == min(rows, cols):
                logger.debug(f"Drew a full-rank {rows}x{cols} matrix after {attempt + 1} attempt(s)")
                return candidate
        raise GenerationException(f"Failed to draw a full-rank {rows}x{cols} matrix over F_{p} in {cls.MAX_RETRIES} attempts")

    @classmethod
    def ensure_feasible(cls, p: int, d: int, settings: ComputationSettings):
        if p ** d > settings.max_global_vectors():
            raise ResourceCapException(f"p^d = {p}^{d} exceeds the cap of {settings.max_global_vectors()} global classes")

    @classmethod
    def generate_random(cls,
                        p: int,
                        side1_halfdims: typing.Sequence[int],
                        side2_halfdims: typing.Sequence[int],
                        nu: int,
                        seed: int,
                        phase_kind: PhaseKind = PhaseKind.ZERO,
                        settings: ComputationSettings = DEFAULT_SETTINGS) -> Instance:
        p = ensure_prime(p)
        if not side1_halfdims or not side2_halfdims or min(list(side1_halfdims) + list(side2_halfdims)) < 1:
            raise InvalidArgumentException("Each side needs at least one local factor of half dimension >= 1")
        if nu < 0:
            raise InvalidArgumentException(f"nu must be nonnegative, got {nu}")
        side1 = [LocalFactor.standard(m, p) for m in side1_halfdims]
        side2 = [LocalFactor.standard(m, p) for m in side2_halfdims]
        m1 = 2 * sum(side1_halfdims)
        m2 = 2 * sum(side2_halfdims)
        mu = (m1 + m2) // 2
        d = mu + nu
        cls.ensure_feasible(p, d, settings)

        rng = np.random.default_rng(seed)
        space = direct_sum([f.space() for f in side1 + side2])
        lagrangian = random_lagrangian(space, rng)
        surjection = cls._random_full_rank(rng, mu, d, p)
        stacked = lagrangian.basis().transpose() @ surjection
        entries = stacked.entries()
        instance = Instance(p=p,
                            side1=side1,
                            side2=side2,
                            d=d,
                            loc1=FpMatrix(entries[:m1], p, cols=d),
                            loc2=FpMatrix(entries[m1:], p, cols=d),
                            phase=PhaseSpec.zero(),
                            label=f"random-p={p}-h1={list(side1_halfdims)}-h2={list(side2_halfdims)}-nu={nu}-seed={seed}")
        if phase_kind != PhaseKind.ZERO:
            instance = cls.with_random_phase(instance, phase_kind, rng, settings)
        logger.info(f"Generated instance `{instance.label()}` with d={d}")
        return instance

    @classmethod
    def with_random_phase(cls, instance: Instance, phase_kind: PhaseKind, seed,
                          settings: ComputationSettings = DEFAULT_SETTINGS) -> Instance:
        rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
        p, d = instance.p(), instance.d()
        if phase_kind == PhaseKind.ZERO:
            phase = PhaseSpec.zero()
        elif phase_kind == PhaseKind.TABLE:
            if p ** d > settings.max_global_vectors():
                raise ResourceCapException(f"Phase table of {p ** d} entries exceeds the cap of {settings.max_global_vectors()}")
            phase = PhaseSpec.from_table(rng.integers(0, p, size=p ** d))
        else:
            phase = PhaseSpec.quadratic(FpMatrix(rng.integers(0, p, size=(d, d)), p, cols=d),
                                        rng.integers(0, p, size=d))
        return instance.with_phase(phase, label=f"{instance.label()}-phase={phase_kind.value}")
