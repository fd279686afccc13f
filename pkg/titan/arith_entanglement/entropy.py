import enum
import math
import typing
import logging
import numpy as np
import scipy.linalg
import scipy.sparse
from scipy.sparse.csgraph import connected_components
from titan.arith_entanglement.config import (
    ComputationSettings,
    DEFAULT_SETTINGS
)
from titan.arith_entanglement.fp_linalg import (
    kernel,
    subspace_sum
)
from titan.arith_entanglement.instance import Instance
from titan.arith_entanglement.state import (
    AmplitudeState,
    StateBuilder
)
from titan.arith_entanglement.exceptions import (
    InvalidArgumentException,
    InvariantViolationException,
    NumericException,
    ResourceCapException,
    UnsupportedComputationException
)


logger = logging.getLogger(__name__)


class EntropyMethod(enum.Enum):
    FORMULA = 'formula'
    RANK = 'rank'
    SPECTRAL = 'spectral'


class SchmidtSpectrum:
    """Eigenvalues of a normalized reduced density matrix, descending."""

    def __init__(self, eigenvalues, settings: ComputationSettings = DEFAULT_SETTINGS):
        values = np.sort(np.asarray(eigenvalues, dtype=float))[::-1]
        if values.size and values[-1] < -settings.eigen_threshold():
            logger.debug(f"Clamping eigenvalue {values[-1]} below -{settings.eigen_threshold()}")
        values = np.clip(values, 0.0, None)
        total = float(values.sum())
        if abs(total - 1.0) > settings.spectrum_tol():
            raise NumericException(f"Spectrum sums to {total}, not 1")
        self._eigenvalues = values
        self._threshold = settings.eigen_threshold()

    def eigenvalues(self) -> np.ndarray:
        return self._eigenvalues

    def nonzero(self) -> np.ndarray:
        return self._eigenvalues[self._eigenvalues > self._threshold]

    def rank(self):
        return int(self.nonzero().size)

    def min_nonzero(self):
        return float(self.nonzero().min())

    def max_eigenvalue(self):
        return float(self._eigenvalues[0])

    def is_flat(self, tol: float):
        nonzero = self.nonzero()
        return bool(nonzero.max() / nonzero.min() - 1.0 <= tol)

    def is_close(self, other, tol: float):
        """Entrywise comparison of the nonzero parts as sorted multisets."""
        mine, theirs = self.nonzero(), other.nonzero()
        return mine.shape == theirs.shape and bool(np.all(np.abs(mine - theirs) <= tol))

    def csv_rows(self):
        return [(i, repr(float(v))) for i, v in enumerate(self._eigenvalues)]

    def summary(self):
        return {
            'rank': self.rank(),
            'min_nonzero': self.min_nonzero(),
            'max': self.max_eigenvalue(),
        }

    def __len__(self):
        return int(self._eigenvalues.size)

    def __repr__(self):
        return f"SchmidtSpectrum(rank={self.rank()}, eigenvalues={self._eigenvalues.tolist()})"


class EntropyResult:

    def __init__(self, nats: float, method: EntropyMethod, exact_k: typing.Optional[int] = None):
        if nats < -1e-12:
            raise NumericException(f"Negative entropy {nats}")
        self._nats = max(float(nats), 0.0)
        self._method = method
        self._exact_k = exact_k

    @classmethod
    def exact(cls, k: int, p: int, method: EntropyMethod):
        return cls(k * math.log(p), method, exact_k=k)

    def nats(self):
        return self._nats

    def method(self):
        return self._method

    def exact_k(self):
        return self._exact_k

    def to_dict(self):
        return {
            'method': self._method.value,
            'nats': self._nats,
            'exact_k': self._exact_k,
        }

    def __repr__(self):
        return f"EntropyResult({self.to_dict()})"


class AmplitudeBlocks:
    """
    Connected components of the bipartite support graph of an amplitude matrix.

    Rows are side-1 indices, columns side-2 indices. For zero phase every block
    is a full p^(s2-nu) x p^(s1-nu) rectangle and there are p^(t2-s1+nu) blocks.
    """

    def __init__(self, blocks: typing.List[typing.Tuple[int, int, int]]):
        self._blocks = sorted(blocks)

    @classmethod
    def from_support(cls, pairs: typing.Iterable[typing.Tuple[int, int]]):
        pairs = sorted(pairs)
        if not pairs:
            return cls([])
        rows = sorted({i1 for i1, _ in pairs})
        cols = sorted({i2 for _, i2 in pairs})
        row_pos = {r: n for n, r in enumerate(rows)}
        col_pos = {c: len(rows) + n for n, c in enumerate(cols)}
        size = len(rows) + len(cols)
        edges_from = [row_pos[i1] for i1, _ in pairs]
        edges_to = [col_pos[i2] for _, i2 in pairs]
        graph = scipy.sparse.coo_matrix((np.ones(len(pairs)), (edges_from, edges_to)), shape=(size, size))
        count, labels = connected_components(graph, directed=False)
        shapes = {label: [0, 0, 0] for label in range(count)}
        for n in range(len(rows)):
            shapes[labels[n]][0] += 1
        for n in range(len(cols)):
            shapes[labels[len(rows) + n]][1] += 1
        for i1, _ in pairs:
            shapes[labels[row_pos[i1]]][2] += 1
        return cls([tuple(s) for s in shapes.values()])

    @classmethod
    def from_state(cls, state: AmplitudeState):
        return cls.from_support(state.support())

    def block_count(self):
        return len(self._blocks)

    def blocks(self):
        """(rows, cols, entries) per block."""
        return list(self._blocks)

    def block_shapes(self):
        return sorted({(rows, cols) for rows, cols, _ in self._blocks})

    def is_complete(self):
        return all(rows * cols == entries for rows, cols, entries in self._blocks)

    def is_uniform_complete(self):
        return self.is_complete() and len(self.block_shapes()) <= 1

    def __repr__(self):
        return f"AmplitudeBlocks(count={self.block_count()}, shapes={self.block_shapes()})"


class ReducedDensityMatrix:

    def __init__(self, side: int, indices: typing.List[int], matrix: np.ndarray):
        self._side = side
        self._indices = indices
        self._matrix = matrix

    def side(self):
        return self._side

    def indices(self):
        return self._indices

    def matrix(self) -> np.ndarray:
        return self._matrix

    def trace(self) -> float:
        return float(np.real(np.trace(self._matrix)))

    def spectrum(self, settings: ComputationSettings = DEFAULT_SETTINGS) -> SchmidtSpectrum:
        return SchmidtSpectrum(EntropyCalculator.hermitian_eigenvalues(self._matrix), settings)


class SchmidtDecomposition:

    def __init__(self, singular_values: np.ndarray, left: np.ndarray, right: np.ndarray,
                 row_indices: typing.List[int], col_indices: typing.List[int]):
        self._singular_values = singular_values
        self._left = left
        self._right = right
        self._row_indices = row_indices
        self._col_indices = col_indices

    def singular_values(self):
        return self._singular_values

    def left(self):
        """Columns are side-1 Schmidt vectors on `row_indices`."""
        return self._left

    def right(self):
        """Columns are side-2 Schmidt vectors on `col_indices`."""
        return self._right

    def row_indices(self):
        return self._row_indices

    def col_indices(self):
        return self._col_indices

    def reconstruct(self) -> np.ndarray:
        return (self._left * self._singular_values) @ self._right.T


class EntropyCalculator:

    @classmethod
    def _ensure_zero_phase(cls, instance: Instance, route: str):
        if not instance.phase().is_zero():
            raise UnsupportedComputationException(f"The {route} route only covers zero-phase instances")

    @classmethod
    def entropy_formula(cls, instance: Instance) -> EntropyResult:
        cls._ensure_zero_phase(instance, 'formula')
        k = instance.d() - subspace_sum(kernel(instance.loc1()), kernel(instance.loc2())).dim()
        logger.info(f"Formula route for `{instance.label()}`: k={k}")
        return EntropyResult.exact(k, instance.p(), EntropyMethod.FORMULA)

    @classmethod
    def entropy_rank(cls, instance: Instance, settings: ComputationSettings = DEFAULT_SETTINGS) -> EntropyResult:
        cls._ensure_zero_phase(instance, 'rank')
        p = instance.p()
        counts = StateBuilder.support_counts(instance, settings)
        if len(set(counts.values())) > 1:
            raise UnsupportedComputationException(f"Fiber sizes {sorted(set(counts.values()))} are not uniform")
        blocks = AmplitudeBlocks.from_support(counts)
        if not blocks.is_uniform_complete():
            raise InvariantViolationException(f"Zero-phase support is not a union of equal full blocks: {blocks}")
        # disjoint full blocks each contribute rank 1 and the same eigenvalue
        rank = blocks.block_count()
        k = round(math.log(rank, p)) if rank > 0 else 0
        if p ** k != rank:
            raise InvariantViolationException(f"Support rank {rank} is not a power of {p}")
        logger.info(f"Rank route for `{instance.label()}`: {rank} blocks of shape {blocks.block_shapes()}, k={k}")
        return EntropyResult.exact(k, p, EntropyMethod.RANK)

    @classmethod
    def hermitian_eigenvalues(cls, matrix: np.ndarray) -> np.ndarray:
        try:
            return scipy.linalg.eigvalsh(matrix)
        except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as e:
            raise NumericException(f"Eigensolver failed: {e}")

    @classmethod
    def amplitude_matrix(cls, state: AmplitudeState):
        """Sparse complex matrix on support rows/columns with the state's scale applied."""
        rows = state.side_indices(1)
        cols = state.side_indices(2)
        row_pos = {r: n for n, r in enumerate(rows)}
        col_pos = {c: n for n, c in enumerate(cols)}
        amplitudes = state.amplitudes()
        scale = float(state.scale())
        data = np.array([value.to_complex() * scale for value in amplitudes.values()], dtype=complex)
        row_idx = [row_pos[i1] for i1, _ in amplitudes]
        col_idx = [col_pos[i2] for _, i2 in amplitudes]
        matrix = scipy.sparse.csr_matrix((data, (row_idx, col_idx)), shape=(len(rows), len(cols)))
        return matrix, rows, cols

    @classmethod
    def _ensure_nonzero(cls, state: AmplitudeState):
        if len(state) == 0:
            raise UnsupportedComputationException("The state vector is zero, its normalized state is undefined")

    @classmethod
    def _ensure_dense_cap(cls, count: int, settings: ComputationSettings):
        if count > settings.max_dense_dim():
            raise ResourceCapException(f"Dense side of {count} support indices exceeds the cap of {settings.max_dense_dim()}")

    @classmethod
    def reduced_density(cls, state: AmplitudeState, side: int,
                        settings: ComputationSettings = DEFAULT_SETTINGS) -> ReducedDensityMatrix:
        if side not in (1, 2):
            raise InvalidArgumentException(f"Side must be 1 or 2, got {side}")
        cls._ensure_nonzero(state)
        matrix, rows, cols = cls.amplitude_matrix(state)
        cls._ensure_dense_cap(len(rows) if side == 1 else len(cols), settings)
        if side == 1:
            density = (matrix @ matrix.conj().T).toarray()
        else:
            density = (matrix.T @ matrix.conj()).toarray()
        density = density / np.real(np.trace(density))
        return ReducedDensityMatrix(side, rows if side == 1 else cols, density)

    @classmethod
    def schmidt_spectrum(cls, state: AmplitudeState, settings: ComputationSettings = DEFAULT_SETTINGS) -> SchmidtSpectrum:
        cls._ensure_nonzero(state)
        matrix, rows, cols = cls.amplitude_matrix(state)
        # both reduced states share their nonzero spectrum, use the smaller Gram matrix
        if len(cols) <= len(rows):
            gram = matrix.conj().T @ matrix
        else:
            gram = matrix @ matrix.conj().T
        cls._ensure_dense_cap(gram.shape[0], settings)
        dense = gram.toarray()
        dense = dense / np.real(np.trace(dense))
        spectrum = SchmidtSpectrum(cls.hermitian_eigenvalues(dense), settings)
        logger.debug(f"Schmidt spectrum on a {dense.shape[0]}x{dense.shape[0]} Gram matrix: rank {spectrum.rank()}")
        return spectrum

    @classmethod
    def von_neumann(cls, spectrum: SchmidtSpectrum) -> EntropyResult:
        nonzero = spectrum.nonzero()
        return EntropyResult(float(-np.sum(nonzero * np.log(nonzero))), EntropyMethod.SPECTRAL)

    @classmethod
    def entropy_spectral(cls, state: AmplitudeState, settings: ComputationSettings = DEFAULT_SETTINGS) -> EntropyResult:
        return cls.von_neumann(cls.schmidt_spectrum(state, settings))

    @classmethod
    def side_entropies(cls, state: AmplitudeState,
                       settings: ComputationSettings = DEFAULT_SETTINGS) -> typing.Tuple[EntropyResult, EntropyResult]:
        return tuple(cls.von_neumann(cls.reduced_density(state, side, settings).spectrum(settings)) for side in (1, 2))

    @classmethod
    def schmidt_decomposition(cls, state: AmplitudeState,
                              settings: ComputationSettings = DEFAULT_SETTINGS) -> SchmidtDecomposition:
        cls._ensure_nonzero(state)
        matrix, rows, cols = cls.amplitude_matrix(state)
        cls._ensure_dense_cap(max(len(rows), len(cols)), settings)
        dense = matrix.toarray() / math.sqrt(state.norm_squared_float())
        try:
            left, singular, right_h = np.linalg.svd(dense, full_matrices=False)
        except np.linalg.LinAlgError as e:
            raise NumericException(f"SVD failed: {e}")
        keep = singular ** 2 > settings.eigen_threshold()
        return SchmidtDecomposition(singular[keep], left[:, keep], right_h[keep].T, rows, cols)
