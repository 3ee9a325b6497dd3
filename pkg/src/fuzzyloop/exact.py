"""Exact scalar arithmetic: Gaussian rationals and rational multiples of pi powers.

Scalars throughout the package are plain ``int``, ``fractions.Fraction``, or
``GaussianRational`` (a + b*i with rational a, b).  Arithmetic never leaves
this family, so every upstream quantity stays exact; floats appear only at
the reporting boundary via ``SymbolicScalar.to_float``.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import PiPowerMismatchError

Rat = (int, Fraction)


def _frac(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    raise TypeError(f"not a rational: {v!r}")


class GaussianRational:
    """Immutable Gaussian rational re + im*i with exact rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _frac(re))
        object.__setattr__(self, "im", _frac(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    # -- normalization ------------------------------------------------
    @staticmethod
    def of(v):
        """Coerce int/Fraction/GaussianRational, demoting to Fraction if real."""
        if isinstance(v, GaussianRational):
            return v.re if not v.im else v
        return _frac(v)

    def conjugate(self):
        return gauss(self.re, -self.im)

    def abs_squared(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        if isinstance(other, GaussianRational):
            return gauss(self.re + other.re, self.im + other.im)
        if isinstance(other, Rat):
            return gauss(self.re + other, self.im)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, GaussianRational):
            return gauss(self.re - other.re, self.im - other.im)
        if isinstance(other, Rat):
            return gauss(self.re - other, self.im)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, Rat):
            return gauss(other - self.re, -self.im)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, GaussianRational):
            return gauss(
                self.re * other.re - self.im * other.im,
                self.re * other.im + self.im * other.re,
            )
        if isinstance(other, Rat):
            return gauss(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, GaussianRational):
            d = other.abs_squared()
            if not d:
                raise ZeroDivisionError("division by zero Gaussian rational")
            return self * gauss(other.re / d, -other.im / d)
        if isinstance(other, Rat):
            return gauss(self.re / other, self.im / other)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, Rat):
            return GaussianRational(other) / self
        return NotImplemented

    def __neg__(self):
        return gauss(-self.re, -self.im)

    def __pos__(self):
        return self

    # -- comparison / hashing -----------------------------------------
    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, Rat):
            return self.im == 0 and self.re == other
        if isinstance(other, complex):
            return complex(self) == other
        return NotImplemented

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        if not self.im:
            return f"{self.re}"
        if not self.re:
            return f"{self.im}*i"
        sign = "+" if self.im > 0 else "-"
        return f"({self.re} {sign} {abs(self.im)}*i)"


def gauss(re=0, im=0):
    """Build a scalar; returns a plain Fraction when the imaginary part is 0."""
    re, im = _frac(re), _frac(im)
    if not im:
        return re
    return GaussianRational(re, im)


I = GaussianRational(0, 1)

Scalar = (int, Fraction, GaussianRational)


def is_scalar(v) -> bool:
    return isinstance(v, Scalar)


def re_part(v) -> Fraction:
    if isinstance(v, GaussianRational):
        return v.re
    return _frac(v)


def im_part(v) -> Fraction:
    if isinstance(v, GaussianRational):
        return v.im
    return Fraction(0)


def conj_scalar(v):
    if isinstance(v, GaussianRational):
        return v.conjugate()
    return v


def scalar_to_complex(v) -> complex:
    if isinstance(v, GaussianRational):
        return complex(v)
    return complex(float(v), 0.0)


def scalar_to_json(v) -> list:
    """Serialize as [re_num, re_den, im_num, im_den]."""
    re, im = re_part(v), im_part(v)
    return [re.numerator, re.denominator, im.numerator, im.denominator]


def scalar_from_json(q) -> "Fraction | GaussianRational":
    rn, rd, im_n, im_d = q
    return gauss(Fraction(rn, rd), Fraction(im_n, im_d))


class SymbolicScalar:
    """An exact multiple q * pi**p with Gaussian-rational q and integer p.

    Addition is defined only between equal pi powers (zero is the sole
    exception); multiplication adds powers.  Comparison with a float goes
    through :meth:`to_float`, which is the only place a numeric value of pi
    enters.
    """

    __slots__ = ("coeff", "pi_power")

    def __init__(self, coeff=0, pi_power: int = 0):
        coeff = GaussianRational.of(coeff)
        if not coeff:
            coeff, pi_power = Fraction(0), 0
        object.__setattr__(self, "coeff", coeff)
        object.__setattr__(self, "pi_power", int(pi_power))

    def __setattr__(self, name, value):
        raise AttributeError("SymbolicScalar is immutable")

    @classmethod
    def zero(cls):
        return cls(0, 0)

    @property
    def is_zero(self) -> bool:
        return not self.coeff

    @property
    def is_real(self) -> bool:
        return not im_part(self.coeff)

    def rational(self) -> Fraction:
        """The coefficient as a real rational; raises if it has imaginary part."""
        if not self.is_real:
            raise ValueError(f"scalar {self!r} is not real")
        return re_part(self.coeff)

    # -- arithmetic ---------------------------------------------------
    def _check_power(self, other: "SymbolicScalar") -> int:
        if self.is_zero:
            return other.pi_power
        if other.is_zero:
            return self.pi_power
        if self.pi_power != other.pi_power:
            raise PiPowerMismatchError(
                f"cannot combine pi^{self.pi_power} with pi^{other.pi_power}"
            )
        return self.pi_power

    def __add__(self, other):
        if not isinstance(other, SymbolicScalar):
            return NotImplemented
        p = self._check_power(other)
        return SymbolicScalar(self.coeff + other.coeff, p)

    def __sub__(self, other):
        if not isinstance(other, SymbolicScalar):
            return NotImplemented
        p = self._check_power(other)
        return SymbolicScalar(self.coeff - other.coeff, p)

    def __mul__(self, other):
        if isinstance(other, SymbolicScalar):
            return SymbolicScalar(self.coeff * other.coeff, self.pi_power + other.pi_power)
        if is_scalar(other):
            return SymbolicScalar(self.coeff * other, self.pi_power)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, SymbolicScalar):
            if other.is_zero:
                raise ZeroDivisionError("division by zero SymbolicScalar")
            return SymbolicScalar(self.coeff / other.coeff, self.pi_power - other.pi_power)
        if is_scalar(other):
            return SymbolicScalar(self.coeff / other, self.pi_power)
        return NotImplemented

    def __neg__(self):
        return SymbolicScalar(-self.coeff, self.pi_power)

    def conjugate(self):
        return SymbolicScalar(conj_scalar(self.coeff), self.pi_power)

    def __abs__(self):
        return SymbolicScalar(abs(self.rational()), self.pi_power)

    def __eq__(self, other):
        if isinstance(other, SymbolicScalar):
            if self.is_zero or other.is_zero:
                return self.is_zero and other.is_zero
            return self.pi_power == other.pi_power and self.coeff == other.coeff
        if is_scalar(other):
            return self == SymbolicScalar(other, 0)
        return NotImplemented

    def __hash__(self):
        if self.is_zero:
            return hash(0)
        return hash((self.coeff, self.pi_power))

    def __lt__(self, other):
        # pi**p > 0 for every integer p, so same-power comparison reduces to
        # the rational coefficients.
        if isinstance(other, SymbolicScalar):
            self._check_power(other)
            return self.rational() < other.rational()
        return NotImplemented

    # -- reporting boundary -------------------------------------------
    def to_float(self) -> float:
        return float(self.rational()) * math.pi ** self.pi_power

    def to_complex(self) -> complex:
        return scalar_to_complex(self.coeff) * math.pi ** self.pi_power

    def __repr__(self):
        if self.pi_power == 0:
            return f"{self.coeff}"
        if self.pi_power == 1:
            return f"{self.coeff}*pi"
        return f"{self.coeff}*pi**{self.pi_power}"
