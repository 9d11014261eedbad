import itertools

import numpy as np
import pytest

from lcorbits.gf import (
    FieldElement,
    FieldError,
    FieldMatrix,
    field_add,
    field_inv,
    field_mul,
    inv_mod,
    is_prime,
    matrix_rank,
    rank_mod,
)


def test_primality():
    primes = [2, 3, 5, 7, 11, 13]
    assert all(is_prime(p) for p in primes)
    assert not any(is_prime(c) for c in [0, 1, 4, 6, 8, 9, 10, 12, 15, 49])


def test_non_prime_modulus_rejected():
    with pytest.raises(FieldError):
        FieldElement(1, 4)
    with pytest.raises(FieldError):
        FieldMatrix([[1]], 9)


def test_add():
    assert field_add(FieldElement(2, 3), FieldElement(2, 3)) == 1
    assert field_add(FieldElement(0, 3), FieldElement(2, 3)) == 2
    assert field_add(FieldElement(4, 5), FieldElement(3, 5)) == 2


def test_mul():
    assert field_mul(FieldElement(2, 3), FieldElement(2, 3)) == 1
    assert field_mul(FieldElement(1, 3), FieldElement(2, 3)) == 2
    assert field_mul(FieldElement(3, 7), FieldElement(5, 7)) == 1


def test_modulus_mismatch():
    with pytest.raises(FieldError):
        field_add(FieldElement(1, 3), FieldElement(1, 5))
    with pytest.raises(FieldError):
        field_mul(FieldElement(1, 3), FieldElement(1, 7))


def test_inv():
    assert field_inv(FieldElement(2, 3)) == 2
    assert field_inv(FieldElement(3, 5)) == 2
    with pytest.raises(FieldError):
        field_inv(FieldElement(0, 3))
    with pytest.raises(FieldError):
        inv_mod(0, 5)


def test_inv_involution_exhaustive():
    for d in [2, 3, 5, 7, 11, 13]:
        for a in range(1, d):
            x = FieldElement(a, d)
            assert field_inv(field_inv(x)) == x
            assert field_mul(x, field_inv(x)) == 1


def test_rank_identity_and_zero():
    assert rank_mod(np.eye(4, dtype=int), 3) == 4
    assert rank_mod(np.zeros((3, 5), dtype=int), 7) == 0


def test_rank_singular_mod3():
    # det = 1 - 4 = -3 = 0 (mod 3), but the matrix is nonzero
    assert rank_mod([[1, 2], [2, 1]], 3) == 1
    assert rank_mod([[1, 2], [2, 1]], 5) == 2


def test_rank_matches_transpose():
    rng = np.random.default_rng(11)
    for _ in range(50):
        m = rng.integers(0, 3, size=(4, 6))
        assert rank_mod(m, 3) == rank_mod(m.T, 3)


def _rowspan_size(mat, d):
    """Brute-force oracle: count the distinct row-span vectors."""
    rows = [tuple(r % d) for r in mat]
    span = {tuple([0] * len(rows[0]))}
    for _ in range(len(rows)):
        new = set()
        for v in span:
            for r in rows:
                for c in range(1, d):
                    new.add(tuple((a + c * b) % d for a, b in zip(v, r)))
        span |= new
    return len(span)


def test_rank_against_rowspan_oracle():
    rng = np.random.default_rng(5)
    for _ in range(20):
        m = rng.integers(0, 3, size=(5, 5))
        r = rank_mod(m, 3)
        assert 3**r == _rowspan_size(m, 3)


def test_field_matrix_api():
    m = FieldMatrix([[1, 2], [2, 4]], 3)
    assert (m.rows, m.cols) == (2, 2)
    assert matrix_rank(m) == 1
    assert m.transpose().rank() == 1
    assert m == FieldMatrix([[1, 2], [2, 1]], 3)  # 4 = 1 mod 3


def test_field_element_arithmetic_ops():
    a = FieldElement(2, 5)
    assert a + 4 == 1
    assert a - 3 == 4
    assert -a == 3
    assert int(a * a) == 4
    assert hash(a) == hash(FieldElement(7, 5))
