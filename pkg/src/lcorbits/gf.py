"""Exact arithmetic and linear algebra over the prime field GF(d)."""

from __future__ import annotations

import numpy as np


class FieldError(Exception):
    """Invalid field operation (bad modulus, mixed moduli, inverting zero)."""


def is_prime(d: int) -> bool:
    if d < 2:
        return False
    if d < 4:
        return True
    if d % 2 == 0:
        return False
    f = 3
    while f * f <= d:
        if d % f == 0:
            return False
        f += 2
    return True


def check_prime(d: int) -> int:
    """Validate a field modulus once, at the API boundary."""
    if not isinstance(d, (int, np.integer)) or not is_prime(int(d)):
        raise FieldError(f"field order must be a prime integer, got {d!r}")
    return int(d)


class FieldElement:
    """An element of GF(d), kept reduced mod d."""

    __slots__ = ("value", "d")

    def __init__(self, value: int, d: int):
        self.d = check_prime(d)
        self.value = int(value) % self.d

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.d != self.d:
                raise FieldError(f"modulus mismatch: {self.d} vs {other.d}")
            return other
        return FieldElement(other, self.d)

    def __add__(self, other):
        o = self._coerce(other)
        return FieldElement(self.value + o.value, self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        return FieldElement(self.value - o.value, self.d)

    def __neg__(self):
        return FieldElement(-self.value, self.d)

    def __mul__(self, other):
        o = self._coerce(other)
        return FieldElement(self.value * o.value, self.d)

    def inv(self) -> "FieldElement":
        if self.value == 0:
            raise FieldError("zero has no multiplicative inverse")
        return FieldElement(pow(self.value, self.d - 2, self.d), self.d)

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.d == other.d and self.value == other.value
        if isinstance(other, (int, np.integer)):
            return self.value == int(other) % self.d
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.d))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"GF{self.d}({self.value})"


def field_add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def field_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def field_inv(a: FieldElement) -> FieldElement:
    return a.inv()


def inv_mod(a: int, d: int) -> int:
    """Inverse of a nonzero residue mod prime d."""
    a %= d
    if a == 0:
        raise FieldError("zero has no multiplicative inverse")
    return pow(a, d - 2, d)


class FieldMatrix:
    """Dense matrix over GF(d); entries stored as a reduced int64 ndarray."""

    __slots__ = ("a", "d")

    def __init__(self, entries, d: int):
        self.d = check_prime(d)
        a = np.asarray(entries, dtype=np.int64)
        if a.ndim != 2:
            raise FieldError("matrix entries must be two-dimensional")
        self.a = np.mod(a, self.d)

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    def __eq__(self, other):
        return (
            isinstance(other, FieldMatrix)
            and self.d == other.d
            and self.a.shape == other.a.shape
            and bool(np.all(self.a == other.a))
        )

    def transpose(self) -> "FieldMatrix":
        return FieldMatrix(self.a.T, self.d)

    def rank(self) -> int:
        return rank_mod(self.a, self.d)

    def __repr__(self):
        return f"FieldMatrix(d={self.d},\n{self.a})"


def rank_mod(a, d: int) -> int:
    """Rank over GF(d) by Gaussian elimination with first-nonzero pivoting."""
    d = check_prime(d)
    m = np.mod(np.asarray(a, dtype=np.int64), d).copy()
    if m.size == 0:
        return 0
    rows, cols = m.shape
    rank = 0
    for col in range(cols):
        pivot = None
        for r in range(rank, rows):
            if m[r, col] != 0:
                pivot = r
                break
        if pivot is None:
            continue
        if pivot != rank:
            m[[rank, pivot]] = m[[pivot, rank]]
        m[rank] = (m[rank] * inv_mod(int(m[rank, col]), d)) % d
        for r in range(rows):
            if r != rank and m[r, col] != 0:
                m[r] = (m[r] - m[r, col] * m[rank]) % d
        rank += 1
        if rank == rows:
            break
    return rank


def matrix_rank(m: FieldMatrix) -> int:
    return m.rank()
