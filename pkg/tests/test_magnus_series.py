from __future__ import annotations

from fractions import Fraction
from typing import Union

import numpy as np
import pytest

from magnus.magnus_series import (
    INFINITE,
    Series,
    binomial,
    format_series,
    homogeneous_component,
    metric,
    mul,
    parse_series,
    unit_inverse,
    unit_pow_rational,
    valuation,
)


def _xi(i: int, rank: int = 2, trunc: int = 3) -> Series:
    return Series.xi(i, rank, trunc)


def _random_series(rng: np.random.Generator, rank: int, trunc: int, constant: Union[int, Fraction] = 0) -> Series:
    terms = {(): constant}
    for _ in range(int(rng.integers(0, 6))):
        degree = int(rng.integers(1, trunc + 1))
        mono = tuple(int(x) for x in rng.integers(0, rank, size=degree))
        terms[mono] = Fraction(int(rng.integers(-3, 4)), int(rng.integers(1, 4)))
    return Series(rank, trunc, terms)


def test_arithmetic_basics():
    one = Series.one(2, 2)
    a = one + _xi(0, trunc=2)
    b = one - _xi(0, trunc=2)
    assert a * b == Series(2, 2, {(): 1, (0, 0): -1})
    assert (_xi(0, trunc=2) * _xi(1, trunc=2)).terms == {(0, 1): 1}
    assert 3 * _xi(0) == _xi(0) * 3 == Series(2, 3, {(0,): 3})
    assert (-_xi(0)).terms == {(0,): -1}


def test_products_are_truncated():
    x = Series.xi(0, 1, 1)
    assert (x * x).is_zero()


def test_incompatible_series_rejected():
    with pytest.raises(ValueError):
        Series.one(2, 2) + Series.one(2, 3)
    with pytest.raises(ValueError):
        mul(Series.one(1, 2), Series.one(2, 2))


@pytest.mark.parametrize(
    "terms",
    [{(0, 0, 0, 0): 1}, {(2,): 1}],
)
def test_constructor_validation(terms):
    with pytest.raises(ValueError):
        Series(2, 3, terms)


def test_unit_inverse():
    a = Series(1, 1, {(): 2, (0,): 1})
    assert unit_inverse(a) == Series(1, 1, {(): Fraction(1, 2), (0,): Fraction(-1, 4)})
    b = Series(2, 4, {(): 1, (0,): 1, (1, 0): 3})
    assert unit_inverse(b) * b == Series.one(2, 4)
    with pytest.raises(ValueError):
        unit_inverse(_xi(0))


def test_binomial():
    assert binomial(Fraction(1, 2), 2) == Fraction(-1, 8)
    assert binomial(5, 2) == 10
    assert binomial(-1, 3) == -1


def test_square_root_of_unit():
    s = unit_pow_rational(Series(1, 2, {(): 1, (0,): 1}), Fraction(1, 2))
    assert s == Series(1, 2, {(): 1, (0,): Fraction(1, 2), (0, 0): Fraction(-1, 8)})
    base = Series(1, 6, {(): 1, (0,): 1})
    root = unit_pow_rational(base, Fraction(1, 2))
    assert root * root == base
    with pytest.raises(ValueError):
        unit_pow_rational(Series(1, 2, {(): 2}), Fraction(1, 2))


def test_integer_powers_agree_with_products():
    base = Series(2, 4, {(): 1, (0,): 1, (1,): -1, (0, 1): 2})
    assert unit_pow_rational(base, 3) == base * base * base
    assert unit_pow_rational(base, -1) == unit_inverse(base)


def test_valuation():
    assert valuation(Series.zero(2, 3)) == INFINITE
    assert str(valuation(Series.zero(2, 3), truncated=True)) == ">=4"
    assert valuation(_xi(0) * _xi(1)).value == 2
    assert valuation(Series.one(2, 3)).value == 0
    assert str(INFINITE) == "inf"


def test_metric(rng):
    assert metric(_xi(0) * _xi(1)) == Fraction(1, 4)
    assert metric(Series.zero(2, 3)) == 0
    with pytest.raises(ValueError):
        metric(Series.one(2, 3))
    for _ in range(1000):
        a, b = _random_series(rng, 2, 4), _random_series(rng, 2, 4)
        assert (metric(a) == 0) == a.is_zero()
        assert metric(a + b) <= max(metric(a), metric(b))
        if valuation(a) != valuation(b):
            assert metric(a + b) == max(metric(a), metric(b))


def test_homogeneous_component():
    s = Series(2, 3, {(): 1, (0,): 2, (0, 1): 3, (1, 1, 1): 4})
    assert homogeneous_component(s, 2).terms == {(0, 1): 3}
    assert homogeneous_component(s, 0) == Series.one(2, 3)
    with pytest.raises(ValueError):
        homogeneous_component(s, 4)


def test_format_series():
    assert format_series(Series(1, 2, {(): 1, (0,): -1, (0, 0): 1})) == "1 - x1 + x1.x1"
    assert format_series(Series(2, 2, {(0,): Fraction(1, 2), (1, 0): -3})) == "1/2*x1 - 3*x2.x1"
    assert format_series(Series(2, 2, {(1,): -1})) == "-x2"
    assert format_series(Series.zero(2, 2)) == "0"
    assert format_series(Series.one(2, 2), header=True) == "rank=2 trunc=2\n1"
    assert format_series(Series.xi(1, 2, 2), names=["a", "b"]) == "b"


def test_parse_series_round_trip(rng):
    for _ in range(100):
        s = _random_series(rng, 3, 3, constant=int(rng.integers(-2, 3)))
        assert parse_series(format_series(s, header=True)) == s
    assert parse_series("1 + a.b", names=["a", "b"], rank=2, trunc=2) == Series(2, 2, {(): 1, (0, 1): 1})
    with pytest.raises(ValueError):
        parse_series("1 + x1")
    with pytest.raises(ValueError):
        parse_series("rank=1 trunc=2\n1 + y1")


def test_ring_axioms(rng):
    for _ in range(1000):
        rank, trunc = int(rng.integers(1, 4)), int(rng.integers(1, 6))
        a, b, c = (_random_series(rng, rank, trunc, int(rng.integers(-2, 3))) for _ in range(3))
        assert mul(mul(a, b), c) == mul(a, mul(b, c))
        assert mul(a, b + c) == mul(a, b) + mul(a, c)
        assert mul(a + b, c) == mul(a, c) + mul(b, c)


@pytest.mark.parametrize("r0", [Fraction(1), Fraction(-1), Fraction(2), Fraction(1, 2)])
def test_random_units_invert(rng, r0):
    for _ in range(250):
        rank, trunc = int(rng.integers(1, 4)), int(rng.integers(1, 6))
        a = _random_series(rng, rank, trunc, r0)
        one = Series.one(rank, trunc)
        assert mul(a, unit_inverse(a)) == one
        assert mul(unit_inverse(a), a) == one


def test_valuation_of_products(rng):
    for _ in range(1000):
        trunc = int(rng.integers(1, 6))
        a, b = _random_series(rng, 2, trunc), _random_series(rng, 2, trunc)
        if a.is_zero() or b.is_zero():
            continue
        bound = min(valuation(a).value + valuation(b).value, trunc + 1)
        assert valuation(mul(a, b), truncated=True).value >= bound


def test_rational_power_law(rng):
    for _ in range(300):
        rank, trunc = int(rng.integers(1, 3)), int(rng.integers(1, 5))
        a = _random_series(rng, rank, trunc, 1)
        e1, e2 = (Fraction(int(rng.integers(-4, 5)), int(rng.integers(1, 4))) for _ in range(2))
        assert unit_pow_rational(a, e1 + e2) == mul(unit_pow_rational(a, e1), unit_pow_rational(a, e2))
