import random
from fractions import Fraction
from math import gcd

import pytest

from semifluid import (FractionSyntaxError, format_decimal, format_fraction,
                       parse_fraction)


def test_parse_basic():
    assert parse_fraction("3/4") == Fraction(3, 4)
    assert parse_fraction("7") == Fraction(7)
    assert parse_fraction("2/4") == Fraction(1, 2)
    assert parse_fraction("-5/10") == Fraction(-1, 2)
    assert parse_fraction("  4/6 ") == Fraction(2, 3)


@pytest.mark.parametrize("bad", ["", "1/", "/2", "x", "1.5", "1e3", "--3",
                                 "1/-2", "1 / 2", "3/4/5"])
def test_parse_malformed(bad):
    with pytest.raises(FractionSyntaxError) as err:
        parse_fraction(bad)
    assert repr(bad.strip()) in str(err.value)


def test_parse_zero_denominator():
    with pytest.raises(FractionSyntaxError, match="zero denominator"):
        parse_fraction("1/0")


def test_format_roundtrip_random():
    rng = random.Random(42)
    for _ in range(500):
        x = Fraction(rng.randint(-10**9, 10**9), rng.randint(1, 10**9))
        assert parse_fraction(format_fraction(x)) == x


def test_ordering():
    assert Fraction(1, 3) == Fraction(2, 6)
    assert Fraction(0) < Fraction(1, 1000)
    assert Fraction(999, 1000) < Fraction(1)


def test_ring_axioms_random():
    rng = random.Random(7)
    for _ in range(200):
        a, b, c = (Fraction(rng.randint(-1000, 1000), rng.randint(1, 1000))
                   for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + b == b + a and a * b == b * a
        assert a * 1 == a
        if b != 0:
            assert (a / b) * b == a
    half = Fraction(1, 2)
    assert half + Fraction(1, 3) == Fraction(5, 6)
    assert half / half == 1


def test_results_stay_reduced():
    rng = random.Random(11)
    for _ in range(200):
        a = Fraction(rng.randint(-500, 500), rng.randint(1, 500))
        b = Fraction(rng.randint(1, 500), rng.randint(1, 500))
        for x in (a + b, a - b, a * b, a / b):
            assert x.denominator > 0
            assert gcd(abs(x.numerator), x.denominator) == 1


def test_format_decimal_round_half_even():
    assert format_decimal(Fraction(1, 2)) == "0.500000"
    assert format_decimal(Fraction(1, 2000000)) == "0.000000"   # tie -> even
    assert format_decimal(Fraction(3, 2000000)) == "0.000002"   # tie -> even
    assert format_decimal(Fraction(-1, 3)) == "-0.333333"
    assert format_decimal(Fraction(5)) == "5.000000"
    assert format_decimal(Fraction(5, 2), places=0) == "2"
    assert format_decimal(Fraction(7, 2), places=0) == "4"
    assert format_decimal(Fraction(24)) == "24.000000"
