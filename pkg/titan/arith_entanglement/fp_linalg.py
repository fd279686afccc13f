"""Subspaces of F_p^n kept in reduced row-echelon form, so equal subspaces compare equal."""
import typing
import logging
import numpy as np
from sympy import isprime
from titan.arith_entanglement.config import DEFAULT_SETTINGS
from titan.arith_entanglement.exceptions import (
    DimensionMismatchException,
    InvalidArgumentException,
    ResourceCapException
)


logger = logging.getLogger(__name__)


def ensure_prime(p: int):
    if isinstance(p, bool) or not isinstance(p, (int, np.integer)):
        raise InvalidArgumentException(f"Modulus must be an integer, got `{p!r}`")
    if not isprime(int(p)):
        raise InvalidArgumentException(f"Modulus `{p}` is not prime")
    return int(p)


def mod_p(a, p: int) -> np.ndarray:
    return np.mod(np.asarray(a, dtype=np.int64), p)


def inverse_mod(a: int, p: int) -> int:
    a = int(a) % p
    if a == 0:
        raise ZeroDivisionError(f"0 has no inverse mod {p}")
    return pow(a, p - 2, p)


def coefficient_grid(p: int, n: int) -> np.ndarray:
    """All p^n coefficient vectors, row r holding the base-p digits of r (digit 0 least significant)."""
    count = p ** n
    if n == 0:
        return np.zeros((1, 0), dtype=np.int64)
    radix = p ** np.arange(n, dtype=np.int64)
    return (np.arange(count, dtype=np.int64)[:, None] // radix[None, :]) % p


def mixed_radix_index(vectors, p: int) -> np.ndarray:
    vectors = np.atleast_2d(np.asarray(vectors, dtype=np.int64))
    if vectors.shape[1] == 0:
        return np.zeros(vectors.shape[0], dtype=np.int64)
    radix = p ** np.arange(vectors.shape[1], dtype=np.int64)
    return vectors @ radix


def mixed_radix_digits(indices, p: int, n: int) -> np.ndarray:
    indices = np.atleast_1d(np.asarray(indices, dtype=np.int64))
    if n == 0:
        return np.zeros((indices.shape[0], 0), dtype=np.int64)
    radix = p ** np.arange(n, dtype=np.int64)
    return (indices[:, None] // radix[None, :]) % p


class FpMatrix:

    def __init__(self, entries, p: int, cols: typing.Optional[int] = None):
        array = np.asarray(entries, dtype=np.int64)
        if array.size == 0:
            rows = array.shape[0] if array.ndim >= 1 else 0
            if cols is None:
                cols = array.shape[1] if array.ndim == 2 else 0
            array = np.zeros((rows, cols), dtype=np.int64)
        if array.ndim != 2:
            raise DimensionMismatchException(f"Expected a 2-dimensional array, got shape {array.shape}")
        if cols is not None and array.shape[1] != cols:
            raise DimensionMismatchException(f"Expected {cols} columns, got {array.shape[1]}")
        self._p = int(p)
        self._entries = np.mod(array, self._p)
        self._entries.setflags(write=False)

    @classmethod
    def zeros(cls, rows: int, cols: int, p: int):
        return cls(np.zeros((rows, cols), dtype=np.int64), p)

    @classmethod
    def identity(cls, n: int, p: int):
        return cls(np.eye(n, dtype=np.int64), p)

    @classmethod
    def from_columns(cls, columns, p: int, rows: int):
        columns = list(columns)
        if not columns:
            return cls.zeros(rows, 0, p)
        return cls(np.stack([np.asarray(c, dtype=np.int64) for c in columns], axis=1), p)

    def p(self):
        return self._p

    def rows(self):
        return self._entries.shape[0]

    def cols(self):
        return self._entries.shape[1]

    def shape(self):
        return self._entries.shape

    def entries(self) -> np.ndarray:
        return self._entries

    def to_list(self):
        return self._entries.tolist()

    def transpose(self):
        return FpMatrix(self._entries.T, self._p)

    def _ensure_same_field(self, other):
        if self._p != other.p():
            raise DimensionMismatchException(f"Modulus mismatch: {self._p} vs {other.p()}")

    def __matmul__(self, other):
        if isinstance(other, FpMatrix):
            self._ensure_same_field(other)
            if self.cols() != other.rows():
                raise DimensionMismatchException(f"Cannot multiply {self.shape()} by {other.shape()}")
            return FpMatrix(self._entries @ other.entries(), self._p)
        return NotImplemented

    def apply(self, vector) -> np.ndarray:
        vector = np.asarray(vector, dtype=np.int64)
        if vector.shape[-1] != self.cols():
            raise DimensionMismatchException(f"Vector of length {vector.shape[-1]} does not fit {self.shape()}")
        return np.mod(self._entries @ vector, self._p)

    def apply_rows(self, vectors) -> np.ndarray:
        """Image of every row of `vectors` (N x cols) as an N x rows array."""
        vectors = np.asarray(vectors, dtype=np.int64)
        if vectors.shape[1] != self.cols():
            raise DimensionMismatchException(f"Vectors of length {vectors.shape[1]} do not fit {self.shape()}")
        return np.mod(vectors @ self._entries.T, self._p)

    def vstack(self, other):
        self._ensure_same_field(other)
        if self.cols() != other.cols():
            raise DimensionMismatchException(f"Cannot stack {self.shape()} on {other.shape()}")
        return FpMatrix(np.vstack([self._entries, other.entries()]), self._p)

    def hstack(self, other):
        self._ensure_same_field(other)
        if self.rows() != other.rows():
            raise DimensionMismatchException(f"Cannot place {self.shape()} beside {other.shape()}")
        return FpMatrix(np.hstack([self._entries, other.entries()]), self._p)

    def rank(self):
        return len(rref(self)[1])

    def __eq__(self, other):
        if not isinstance(other, FpMatrix):
            return False
        return (self._p == other.p()
                and self.shape() == other.shape()
                and np.array_equal(self._entries, other.entries()))

    def __hash__(self):
        return hash((self._p, self.shape(), self._entries.tobytes()))

    def __repr__(self):
        return f"FpMatrix({self.to_list()}, p={self._p})"


class Subspace:

    def __init__(self, generators: FpMatrix):
        reduced, pivots = rref(generators)
        self._ambient_dim = generators.cols()
        self._basis = FpMatrix(reduced.entries()[:len(pivots)], generators.p(), cols=self._ambient_dim)
        self._pivots = tuple(pivots)

    @classmethod
    def span(cls, vectors, p: int, ambient_dim: int):
        vectors = np.asarray(vectors, dtype=np.int64)
        if vectors.size == 0:
            return cls.zero(ambient_dim, p)
        return cls(FpMatrix(vectors.reshape(-1, ambient_dim), p, cols=ambient_dim))

    @classmethod
    def zero(cls, ambient_dim: int, p: int):
        return cls(FpMatrix.zeros(0, ambient_dim, p))

    @classmethod
    def full(cls, ambient_dim: int, p: int):
        return cls(FpMatrix.identity(ambient_dim, p))

    def p(self):
        return self._basis.p()

    def ambient_dim(self):
        return self._ambient_dim

    def dim(self):
        return self._basis.rows()

    def basis(self) -> FpMatrix:
        return self._basis

    def pivots(self):
        return self._pivots

    def contains(self, vector):
        vector = mod_p(vector, self.p()).reshape(1, -1)
        if vector.shape[1] != self._ambient_dim:
            raise DimensionMismatchException(f"Vector of length {vector.shape[1]} not in ambient dimension {self._ambient_dim}")
        return Subspace(self._basis.vstack(FpMatrix(vector, self.p()))).dim() == self.dim()

    def is_subspace_of(self, other):
        ensure_same_ambient(self, other)
        return subspace_sum(self, other).dim() == other.dim()

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return False
        return self._ambient_dim == other.ambient_dim() and self._basis == other.basis()

    def __hash__(self):
        return hash((self._ambient_dim, self._basis))

    def __repr__(self):
        return f"Subspace(dim={self.dim()}, ambient_dim={self._ambient_dim}, p={self.p()}, basis={self._basis.to_list()})"


def ensure_same_ambient(u: Subspace, w: Subspace):
    if u.p() != w.p():
        raise DimensionMismatchException(f"Modulus mismatch: {u.p()} vs {w.p()}")
    if u.ambient_dim() != w.ambient_dim():
        raise DimensionMismatchException(f"Ambient dimension mismatch: {u.ambient_dim()} vs {w.ambient_dim()}")


def rref(m: FpMatrix) -> typing.Tuple[FpMatrix, typing.List[int]]:
    p = m.p()
    a = np.array(m.entries(), dtype=np.int64)
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        nonzero = np.nonzero(a[r:, c])[0]
        if nonzero.size == 0:
            continue
        pivot_row = r + int(nonzero[0])
        if pivot_row != r:
            a[[r, pivot_row]] = a[[pivot_row, r]]
        a[r] = (a[r] * inverse_mod(a[r, c], p)) % p
        factors = a[:, c].copy()
        factors[r] = 0
        # eliminate the pivot column everywhere else in one rank-1 update
        a = (a - np.outer(factors, a[r])) % p
        pivots.append(c)
        r += 1
    return FpMatrix(a, p, cols=cols), pivots


def kernel(m: FpMatrix) -> Subspace:
    p = m.p()
    reduced, pivots = rref(m)
    r = reduced.entries()
    free = [c for c in range(m.cols()) if c not in set(pivots)]
    vectors = np.zeros((len(free), m.cols()), dtype=np.int64)
    for i, f in enumerate(free):
        vectors[i, f] = 1
        for row, pc in enumerate(pivots):
            vectors[i, pc] = (-r[row, f]) % p
    return Subspace(FpMatrix(vectors, p, cols=m.cols()))


def image(m: FpMatrix) -> Subspace:
    return Subspace(m.transpose())


def subspace_sum(u: Subspace, w: Subspace) -> Subspace:
    ensure_same_ambient(u, w)
    return Subspace(u.basis().vstack(w.basis()))


def subspace_intersection(u: Subspace, w: Subspace) -> Subspace:
    ensure_same_ambient(u, w)
    p = u.p()
    if u.dim() == 0 or w.dim() == 0:
        return Subspace.zero(u.ambient_dim(), p)
    # coefficient pairs (a, b) with U^T a = W^T b
    system = u.basis().transpose().hstack(FpMatrix(-w.basis().entries().T, p))
    solutions = kernel(system).basis().entries()
    coefficients = FpMatrix(solutions[:, :u.dim()], p, cols=u.dim())
    return Subspace(coefficients @ u.basis())


def enumerate_vectors(s: Subspace, cap_digits: typing.Optional[int] = None) -> np.ndarray:
    cap_digits = DEFAULT_SETTINGS.enumeration_digits() if cap_digits is None else cap_digits
    if s.dim() > cap_digits:
        raise ResourceCapException(f"Cannot enumerate a subspace of dimension {s.dim()} (cap is {cap_digits} base-{s.p()} digits)")
    logger.debug(f"Enumerating {s.p() ** s.dim()} vectors of a dimension {s.dim()} subspace")
    grid = coefficient_grid(s.p(), s.dim())
    return np.mod(grid @ s.basis().entries(), s.p())
