"""Scalar arithmetic: Gaussian rationals and pi-graded symbolic values."""

import math
from fractions import Fraction

import pytest

from fuzzyloop.errors import PiPowerMismatchError
from fuzzyloop.exact import (
    GaussianRational,
    I,
    SymbolicScalar,
    conj_scalar,
    gauss,
    im_part,
    re_part,
)


def test_gauss_normalizes_real_values_to_fraction():
    assert isinstance(gauss(2, 0), Fraction)
    assert isinstance(gauss(Fraction(1, 3), Fraction(1, 2)), GaussianRational)
    assert (I * I) == -1
    assert isinstance(I * I, Fraction)


def test_gaussian_arithmetic():
    a = gauss(1, 2)
    b = gauss(3, -1)
    assert a + b == gauss(4, 1)
    assert a * b == gauss(5, 5)
    assert a - b == gauss(-2, 3)
    assert (a / a) == 1
    assert -a == gauss(-1, -2)
    assert conj_scalar(a) == gauss(1, -2)
    assert re_part(a) == 1 and im_part(a) == 2


def test_gaussian_interop_with_rationals():
    a = gauss(1, 1)
    assert a + 1 == gauss(2, 1)
    assert 1 + a == gauss(2, 1)
    assert Fraction(1, 2) * a == gauss(Fraction(1, 2), Fraction(1, 2))
    assert a / 2 == gauss(Fraction(1, 2), Fraction(1, 2))
    assert 2 / gauss(0, 1) == gauss(0, -2)
    assert Fraction(3, 2) / gauss(0, 1) == gauss(0, Fraction(-3, 2))


def test_gaussian_hash_matches_equality():
    assert hash(GaussianRational(2, 0)) == hash(Fraction(2))
    assert GaussianRational(2, 0) == Fraction(2)
    d = {gauss(1, 1): "a"}
    assert d[GaussianRational(1, 1)] == "a"


def test_symbolic_scalar_addition_same_power():
    a = SymbolicScalar(Fraction(2, 3), 1)
    b = SymbolicScalar(Fraction(1, 3), 1)
    assert a + b == SymbolicScalar(1, 1)
    assert (a - a).is_zero
    # zero combines with any power
    assert SymbolicScalar.zero() + a == a


def test_symbolic_scalar_power_mismatch():
    a = SymbolicScalar(1, 1)
    b = SymbolicScalar(1, 2)
    with pytest.raises(PiPowerMismatchError):
        a + b


def test_symbolic_scalar_multiplication_adds_powers():
    a = SymbolicScalar(Fraction(3, 2), 1)
    b = SymbolicScalar(2, -2)
    assert a * b == SymbolicScalar(3, -1)
    assert (a / b) == SymbolicScalar(Fraction(3, 4), 3)
    assert a * Fraction(2) == SymbolicScalar(3, 1)


def test_symbolic_scalar_float_boundary():
    v = SymbolicScalar(Fraction(2, 3), 1)
    assert v.to_float() == pytest.approx(2 * math.pi / 3, rel=1e-15)
    w = SymbolicScalar(1, -1)
    assert w.to_float() == pytest.approx(1 / math.pi, rel=1e-15)


def test_symbolic_scalar_complex_coefficient():
    v = SymbolicScalar(I, 0)
    assert not v.is_real
    with pytest.raises(ValueError):
        v.rational()
    assert v.conjugate() == SymbolicScalar(-I, 0)


def test_symbolic_scalar_comparison():
    assert SymbolicScalar(1, 1) < SymbolicScalar(2, 1)
    assert abs(SymbolicScalar(-2, 1)) == SymbolicScalar(2, 1)
