"""Exact elements of Z[zeta_p] in the power basis {1, zeta, ..., zeta^(p-2)}."""
from __future__ import annotations

import cmath
import typing
from fractions import Fraction
from functools import cached_property


class CyclotomicAmplitude:

    def __init__(self, coeffs: typing.Sequence[int], p: int):
        coeffs = tuple(int(c) for c in coeffs)
        if len(coeffs) != p - 1:
            raise ValueError(f"Expected {p - 1} coefficients for Z[zeta_{p}], got {len(coeffs)}")
        self._p = p
        self._coeffs = coeffs

    @classmethod
    def from_exponent_counts(cls, counts: typing.Sequence[int], p: int) -> CyclotomicAmplitude:
        """sum_k counts[k] * zeta^k for k in [0, p)."""
        counts = [int(c) for c in counts]
        if len(counts) != p:
            raise ValueError(f"Expected {p} exponent counts, got {len(counts)}")
        top = counts[p - 1]
        return cls([c - top for c in counts[:p - 1]], p)

    @classmethod
    def zeta_power(cls, k: int, p: int) -> CyclotomicAmplitude:
        counts = [0] * p
        counts[k % p] = 1
        return cls.from_exponent_counts(counts, p)

    @classmethod
    def from_int(cls, n: int, p: int) -> CyclotomicAmplitude:
        return cls([n] + [0] * (p - 2), p)

    @classmethod
    def zero(cls, p: int) -> CyclotomicAmplitude:
        return cls.from_int(0, p)

    @classmethod
    def one(cls, p: int) -> CyclotomicAmplitude:
        return cls.from_int(1, p)

    def p(self):
        return self._p

    def coeffs(self):
        return self._coeffs

    def exponent_counts(self):
        return list(self._coeffs) + [0]

    def is_zero(self):
        return not any(self._coeffs)

    def is_rational(self):
        return not any(self._coeffs[1:])

    def rational_value(self) -> int:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return self._coeffs[0]

    def _ensure_same_ring(self, other: CyclotomicAmplitude):
        if self._p != other.p():
            raise ValueError(f"Cannot combine Z[zeta_{self._p}] with Z[zeta_{other.p()}]")

    def __add__(self, other):
        if isinstance(other, int):
            other = self.from_int(other, self._p)
        if not isinstance(other, CyclotomicAmplitude):
            return NotImplemented
        self._ensure_same_ring(other)
        return self.__class__([a + b for a, b in zip(self._coeffs, other.coeffs())], self._p)

    def __radd__(self, other):
        return self + other

    def __neg__(self):
        return self.__class__([-a for a in self._coeffs], self._p)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return self.__class__([a * other for a in self._coeffs], self._p)
        if not isinstance(other, CyclotomicAmplitude):
            return NotImplemented
        self._ensure_same_ring(other)
        p = self._p
        # multiply in Z[x]/(x^p - 1), then project to Z[zeta_p]
        counts = [0] * p
        for i, a in enumerate(self._coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs()):
                if b:
                    counts[(i + j) % p] += a * b
        return self.from_exponent_counts(counts, p)

    def __rmul__(self, other):
        return self * other

    def rotate(self, k: int) -> CyclotomicAmplitude:
        """Multiply by zeta^k."""
        p = self._p
        counts = [0] * p
        for i, c in enumerate(self.exponent_counts()):
            counts[(i + k) % p] = c
        return self.from_exponent_counts(counts, p)

    def conjugate(self) -> CyclotomicAmplitude:
        p = self._p
        counts = [0] * p
        for i, c in enumerate(self.exponent_counts()):
            counts[(-i) % p] = c
        return self.from_exponent_counts(counts, p)

    def abs_squared(self) -> CyclotomicAmplitude:
        return self * self.conjugate()

    def ratio_to(self, other: CyclotomicAmplitude) -> typing.Optional[Fraction]:
        """The rational r with other == r * self, or None if there is none."""
        self._ensure_same_ring(other)
        if self.is_zero():
            return Fraction(0) if other.is_zero() else None
        ratio = None
        for a, b in zip(self._coeffs, other.coeffs()):
            if a == 0:
                if b != 0:
                    return None
                continue
            candidate = Fraction(b, a)
            if ratio is None:
                ratio = candidate
            elif candidate != ratio:
                return None
        return ratio

    @cached_property
    def _complex_value(self) -> complex:
        zeta = cmath.exp(2j * cmath.pi / self._p)
        return sum(c * zeta ** k for k, c in enumerate(self._coeffs))

    def to_complex(self) -> complex:
        return self._complex_value

    def __eq__(self, other):
        if isinstance(other, int):
            return self == self.from_int(other, self._p)
        if not isinstance(other, CyclotomicAmplitude):
            return False
        return self._p == other.p() and self._coeffs == other.coeffs()

    def __hash__(self):
        return hash((self._p, self._coeffs))

    def __repr__(self):
        return f"CyclotomicAmplitude({list(self._coeffs)}, p={self._p})"

    def __str__(self):
        terms = [f"{c}*z^{k}" if k else f"{c}" for k, c in enumerate(self._coeffs) if c]
        return " + ".join(terms) if terms else "0"
