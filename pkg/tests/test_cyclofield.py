import random
from fractions import Fraction

import pytest

from amitsur.cyclofield import (
    CycloElement,
    cyclotomic_polynomial,
    verify_unit_decomposition,
    zeta8_expr,
)

Z = CycloElement.zeta


def test_cyclotomic_polynomials():
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(4) == (1, 0, 1)
    assert cyclotomic_polynomial(8) == (1, 0, 0, 0, 1)
    assert cyclotomic_polynomial(6) == (1, -1, 1)
    assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)


def test_zeta8_relations():
    z = Z(8)
    assert z ** 4 == -1
    assert z ** 8 == 1
    assert (z ** 3 - z) == CycloElement(8, [0, -1, 0, 1])
    # (1 - z)^3 = 1 - 3z + 3z^2 - z^3
    assert (1 - z) ** 3 == CycloElement(8, [1, -3, 3, -1])
    # sqrt2 = z + z^7
    s = z + Z(8, 7)
    assert s * s == 2


def test_field_axioms_randomized():
    rng = random.Random(5)
    for n in (3, 5, 8, 12):
        for _ in range(10):
            a, b, c = (CycloElement(n, [Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(n)])
                       for _ in range(3))
            assert a * (b + c) == a * b + a * c
            assert (a * b) * c == a * (b * c)
            assert a * b == b * a
            if not a.is_zero():
                assert a * a.inverse() == 1
                assert (b / a) * a == b


def test_zero_has_no_inverse():
    with pytest.raises(ZeroDivisionError):
        CycloElement(8).inverse()


def test_galois_automorphism():
    z = Z(8)
    a = zeta8_expr(1, 2, -1, 3)
    b = zeta8_expr(0, 1, 5, -2, scale=Fraction(1, 2))
    for k in (3, 5, 7):
        assert z.galois(k) == Z(8, k)
        assert (a * b).galois(k) == a.galois(k) * b.galois(k)
        assert (a + b).galois(k) == a.galois(k) + b.galois(k)
    assert (1 - z).norm() == 2
    assert (z + Z(8, 7) - 1).norm() == 1  # sqrt2 - 1 is a unit


def test_verify_unit_decomposition():
    z = Z(8)
    gens = [z + Z(8, 7) - 1, 1 - z]
    val = Z(8, 3) * gens[0] ** 2 * gens[1] ** -1
    assert verify_unit_decomposition(val, 3, [2, -1], gens)
    assert not verify_unit_decomposition(val, 1, [2, -1], gens)
    assert not verify_unit_decomposition(val, 3, [1, -1], gens)
    with pytest.raises(ValueError):
        verify_unit_decomposition(val, 3, [2], gens)


def test_mixed_fields_rejected():
    with pytest.raises(ValueError):
        Z(8) + Z(5)


def test_list_roundtrip():
    a = zeta8_expr(1, 0, Fraction(1, 3), -2)
    assert CycloElement.from_list(8, a.to_list()) == a
