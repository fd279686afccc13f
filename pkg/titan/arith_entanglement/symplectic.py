import typing
import logging
import numpy as np
from titan.arith_entanglement.fp_linalg import (
    FpMatrix,
    Subspace,
    kernel,
    mod_p
)
from titan.arith_entanglement.exceptions import (
    DimensionMismatchException,
    InvalidArgumentException,
    GenerationException
)


logger = logging.getLogger(__name__)


class SymplecticSpace:
    """
    An F_p-space with a nonsingular alternating Gram matrix.

    `block_offsets` records where each summand starts when the space is a direct sum.
    """

    def __init__(self, gram: FpMatrix, block_offsets: typing.Optional[typing.Sequence[int]] = None):
        dim = gram.rows()
        if gram.cols() != dim:
            raise InvalidArgumentException(f"Gram matrix must be square, got {gram.shape()}")
        if dim == 0 or dim % 2:
            raise InvalidArgumentException(f"Symplectic dimension must be even and positive, got {dim}")
        entries = gram.entries()
        if not np.array_equal(entries.T, mod_p(-entries, gram.p())):
            raise InvalidArgumentException("Gram matrix is not antisymmetric")
        if np.any(np.diag(entries)):
            raise InvalidArgumentException("Gram matrix is not alternating (nonzero diagonal)")
        if gram.rank() != dim:
            raise InvalidArgumentException("Gram matrix is singular")
        self._gram = gram
        self._block_offsets = tuple(block_offsets) if block_offsets is not None else (0, dim)

    def p(self):
        return self._gram.p()

    def dim(self):
        return self._gram.rows()

    def half_dim(self):
        return self.dim() // 2

    def gram(self) -> FpMatrix:
        return self._gram

    def block_offsets(self):
        return self._block_offsets

    def __eq__(self, other):
        return isinstance(other, SymplecticSpace) and self._gram == other.gram()

    def __hash__(self):
        return hash(self._gram)

    def __repr__(self):
        return f"SymplecticSpace(dim={self.dim()}, p={self.p()})"


class LocalFactor:

    def __init__(self, space: SymplecticSpace, unramified_line: typing.Optional[Subspace] = None):
        if unramified_line is not None and not is_lagrangian(space, unramified_line):
            raise InvalidArgumentException("Unramified line is not Lagrangian in its local factor")
        self._space = space
        self._unramified_line = unramified_line

    @classmethod
    def standard(cls, half_dim: int, p: int):
        return cls(standard_symplectic(half_dim, p))

    @classmethod
    def auxiliary(cls, p: int):
        """A tame place: dimension 2, unramified line spanned by the first coordinate."""
        return cls(standard_symplectic(1, p), Subspace.span([[1, 0]], p, 2))

    def dim(self):
        return self._space.dim()

    def p(self):
        return self._space.p()

    def space(self) -> SymplecticSpace:
        return self._space

    def unramified_line(self) -> typing.Optional[Subspace]:
        return self._unramified_line

    def __eq__(self, other):
        return (isinstance(other, LocalFactor)
                and self._space == other.space()
                and self._unramified_line == other.unramified_line())

    def __hash__(self):
        return hash((self._space, self._unramified_line))

    def __repr__(self):
        return f"LocalFactor(dim={self.dim()}, p={self.p()}, unramified={self._unramified_line is not None})"


def standard_symplectic(m: int, p: int) -> SymplecticSpace:
    if m < 1:
        raise InvalidArgumentException(f"Half dimension must be at least 1, got {m}")
    gram = np.zeros((2 * m, 2 * m), dtype=np.int64)
    identity = np.eye(m, dtype=np.int64)
    gram[:m, m:] = identity
    gram[m:, :m] = -identity
    return SymplecticSpace(FpMatrix(gram, p))


def pairing(s: SymplecticSpace, u, v) -> int:
    u = np.asarray(u, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    if u.shape != (s.dim(),) or v.shape != (s.dim(),):
        raise DimensionMismatchException(f"Pairing expects vectors of length {s.dim()}, got {u.shape} and {v.shape}")
    return int((u @ s.gram().entries() @ v) % s.p())


def pairing_matrix(s: SymplecticSpace, l: Subspace) -> np.ndarray:
    """Pairings between all basis vectors of `l`."""
    basis = l.basis().entries()
    return np.mod(basis @ s.gram().entries() @ basis.T, s.p())


def _ensure_fits(s: SymplecticSpace, l: Subspace):
    if l.p() != s.p() or l.ambient_dim() != s.dim():
        raise DimensionMismatchException(f"Subspace in F_{l.p()}^{l.ambient_dim()} does not live in {s}")


def isotropy_defect(s: SymplecticSpace, l: Subspace) -> typing.Optional[typing.Tuple[int, int, int]]:
    """First basis pair (i, j, value) of `l` with nonzero pairing, or None if `l` is isotropic."""
    _ensure_fits(s, l)
    offending = np.argwhere(pairing_matrix(s, l) != 0)
    if offending.size == 0:
        return None
    i, j = (int(x) for x in offending[0])
    return i, j, int(pairing_matrix(s, l)[i, j])


def is_lagrangian(s: SymplecticSpace, l: Subspace) -> bool:
    _ensure_fits(s, l)
    return l.dim() == s.half_dim() and isotropy_defect(s, l) is None


def orthogonal_complement(s: SymplecticSpace, l: Subspace) -> Subspace:
    _ensure_fits(s, l)
    if l.dim() == 0:
        return Subspace.full(s.dim(), s.p())
    return kernel(l.basis() @ s.gram())


def random_lagrangian(s: SymplecticSpace, seed, max_draws: int = 1000) -> Subspace:
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    p = s.p()
    current = Subspace.zero(s.dim(), p)
    while current.dim() < s.half_dim():
        complement = orthogonal_complement(s, current).basis().entries()
        for _ in range(max_draws):
            coefficients = rng.integers(0, p, size=complement.shape[0])
            candidate = np.mod(coefficients @ complement, p)
            if candidate.any() and not current.contains(candidate):
                break
        else:
            raise GenerationException(f"Failed to extend an isotropic subspace of dimension {current.dim()}")
        current = Subspace(current.basis().vstack(FpMatrix(candidate.reshape(1, -1), p)))
    return current


def direct_sum(factors: typing.Sequence[SymplecticSpace]) -> SymplecticSpace:
    if not factors:
        raise InvalidArgumentException("Direct sum needs at least one factor")
    p = factors[0].p()
    if any(f.p() != p for f in factors):
        raise InvalidArgumentException(f"Factors have different moduli: {[f.p() for f in factors]}")
    total = sum(f.dim() for f in factors)
    gram = np.zeros((total, total), dtype=np.int64)
    offsets = [0]
    for f in factors:
        start = offsets[-1]
        gram[start:start + f.dim(), start:start + f.dim()] = f.gram().entries()
        offsets.append(start + f.dim())
    return SymplecticSpace(FpMatrix(gram, p), block_offsets=offsets)
