"""q-numbers, half-integer indices and the coefficient fields used by the algebra layer."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, total_ordering
from numbers import Rational


@total_ordering
class HalfInt:
    """An element of ½ℤ, stored as twice its value so index arithmetic stays exact."""

    __slots__ = ("twice",)

    def __init__(self, twice: int):
        self.twice = int(twice)

    @classmethod
    def of(cls, value) -> HalfInt:
        if isinstance(value, HalfInt):
            return value
        if isinstance(value, str):
            value = Fraction(value)
        if isinstance(value, float):
            doubled = 2 * value
            if doubled != round(doubled):
                raise ValueError(f"{value!r} is not a half-integer")
            return cls(round(doubled))
        frac = Fraction(value)
        doubled = 2 * frac
        if doubled.denominator != 1:
            raise ValueError(f"{value!r} is not a half-integer")
        return cls(int(doubled))

    @property
    def is_integer(self) -> bool:
        return self.twice % 2 == 0

    def __float__(self) -> float:
        return self.twice / 2

    def __int__(self) -> int:
        if self.twice % 2:
            raise ValueError(f"{self} is not an integer")
        return self.twice // 2

    def __index__(self) -> int:
        return int(self)

    def to_fraction(self) -> Fraction:
        return Fraction(self.twice, 2)

    def _other(self, other) -> HalfInt:
        return other if isinstance(other, HalfInt) else HalfInt.of(other)

    def __add__(self, other):
        return HalfInt(self.twice + self._other(other).twice)

    __radd__ = __add__

    def __sub__(self, other):
        return HalfInt(self.twice - self._other(other).twice)

    def __rsub__(self, other):
        return HalfInt(self._other(other).twice - self.twice)

    def __neg__(self):
        return HalfInt(-self.twice)

    def __abs__(self):
        return HalfInt(abs(self.twice))

    def __mul__(self, other: int):
        if not isinstance(other, int):
            return NotImplemented
        return HalfInt(self.twice * other)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, HalfInt):
            return self.twice == other.twice
        try:
            return self.twice == 2 * Fraction(other)
        except (TypeError, ValueError):
            return NotImplemented

    def __lt__(self, other):
        return self.twice < self._other(other).twice

    def __hash__(self):
        return hash(("HalfInt", self.twice))

    def __repr__(self):
        return f"HalfInt({self})"

    def __str__(self):
        return str(self.twice // 2) if self.twice % 2 == 0 else f"{self.twice}/2"


def half_range(top: HalfInt | float):
    """Yield -top, -top+1, ..., top."""
    top = HalfInt.of(top)
    for t in range(-top.twice, top.twice + 1, 2):
        yield HalfInt(t)


@dataclass(frozen=True)
class QParam:
    """Deformation parameter ``q`` and Podleś parameter ``c`` (``math.inf`` is the equatorial sphere)."""

    q: float
    c: float = math.inf

    def __post_init__(self):
        if not 0.0 < self.q < 1.0:
            raise ValueError(f"q must lie in (0, 1), got {self.q}")
        if math.isnan(self.c) or self.c < 0:
            raise ValueError(f"c must lie in [0, inf], got {self.c}")

    @property
    def equatorial(self) -> bool:
        return math.isinf(self.c)


@lru_cache(maxsize=65536)
def _qint(x: float, q: float) -> float:
    return (q**x - q ** (-x)) / (q - 1.0 / q)


def qint(x, q: float) -> float:
    """The q-number [x] = (q^x - q^-x) / (q - q^-1)."""
    return _qint(float(x), float(q))


def qpow_halfint(q: float, x) -> float:
    """q**x for half-integer x, taking the square root of q once."""
    twice = HalfInt.of(x).twice
    return math.sqrt(q) ** twice


def sqrt_qint(x, q: float) -> float:
    """[x]^{1/2}, with [x] = 0 mapped to 0 and negative arguments rejected."""
    value = qint(x, q)
    if value < 0:
        if value > -1e-14:
            return 0.0
        raise ValueError(f"[{x}]_q = {value} is negative")
    return math.sqrt(value)


class NumericScalars:
    """Double-precision coefficients."""

    exact = False

    def __init__(self, q: float, atol: float = 1e-14):
        if not 0.0 < q < 1.0:
            raise ValueError(f"q must lie in (0, 1), got {q}")
        self.q = float(q)
        self.sqrt_q = math.sqrt(self.q)
        self.zero = 0.0
        self.one = 1.0
        self.atol = atol

    def __call__(self, value):
        return complex(value) if isinstance(value, complex) else float(value)

    def is_zero(self, value) -> bool:
        return abs(value) <= self.atol

    def qpow(self, n: int):
        return self.q**n

    def sqrt_q_pow(self, n: int):
        """q^{n/2}."""
        return self.sqrt_q**n

    def conj(self, value):
        return value.conjugate() if isinstance(value, complex) else value

    def to_complex(self, value) -> complex:
        return complex(value)

    def __repr__(self):
        return f"NumericScalars(q={self.q})"


class MpScalars:
    """Multiprecision floating coefficients (mpmath) with ``dps`` decimal digits.

    Normal-ordered monomials are a badly conditioned basis for the Haar inner
    product, so orthonormal vectors need far more than double precision.
    """

    exact = False

    def __init__(self, q: float, dps: int = 60):
        import mpmath

        if not 0.0 < q < 1.0:
            raise ValueError(f"q must lie in (0, 1), got {q}")
        self.ctx = mpmath.MPContext()
        self.ctx.dps = dps
        self.dps = dps
        self.q = self.ctx.mpf(q)
        self.sqrt_q = self.ctx.sqrt(self.q)
        self.zero = self.ctx.mpf(0)
        self.one = self.ctx.mpf(1)
        self.atol = self.ctx.mpf(10) ** (-(dps - 8))

    def __call__(self, value):
        if isinstance(value, complex):
            return self.ctx.mpc(value) if value.imag else self.ctx.mpf(value.real)
        return self.ctx.mpf(value) if not isinstance(value, Fraction) else self.ctx.mpf(value.numerator) / value.denominator

    def is_zero(self, value) -> bool:
        return abs(value) <= self.atol

    def qpow(self, n: int):
        return self.q**n

    def sqrt_q_pow(self, n: int):
        return self.sqrt_q**n

    def sqrt(self, value):
        return self.ctx.sqrt(value)

    def conj(self, value):
        return self.ctx.conj(value)

    def to_complex(self, value) -> complex:
        return complex(value)

    def __repr__(self):
        return f"MpScalars(q={float(self.q)}, dps={self.dps})"


class ExactScalars:
    """Exact coefficients in Q(q^{1/2}) for rational q, backed by sympy's algebraic number fields.

    Only real coefficients are supported; complex scalars are rejected.
    """

    exact = True

    def __init__(self, q):
        import sympy

        q = Fraction(q) if not isinstance(q, Rational) else Fraction(q.numerator, q.denominator)
        if not 0 < q < 1:
            raise ValueError(f"q must lie in (0, 1), got {q}")
        self.q_rational = q
        root = sympy.sqrt(sympy.Rational(q.numerator, q.denominator))
        self.field = sympy.QQ.algebraic_field(root)
        self.sqrt_q = self.field.from_sympy(root)
        self.q = self.sqrt_q * self.sqrt_q
        self.zero = self.field.zero
        self.one = self.field.one
        self._sympy = sympy

    def __call__(self, value):
        if isinstance(value, complex):
            if value.imag != 0:
                raise TypeError("exact scalars are real")
            value = value.real
        if isinstance(value, float):
            value = Fraction(value)
        if isinstance(value, Fraction):
            return self.field.convert(self._sympy.Rational(value.numerator, value.denominator))
        if isinstance(value, int):
            return self.field.convert(value)
        return self.field.convert(value)

    def is_zero(self, value) -> bool:
        return value == self.zero

    def _power(self, base, n: int):
        out = self.one
        step = base if n >= 0 else self.one / base
        for _ in range(abs(n)):
            out = out * step
        return out

    def qpow(self, n: int):
        return self._power(self.q, n)

    def sqrt_q_pow(self, n: int):
        return self._power(self.sqrt_q, n)

    def conj(self, value):
        return value

    def to_complex(self, value) -> complex:
        return complex(float(self.field.to_sympy(value)))

    def to_sympy(self, value):
        return self.field.to_sympy(value)

    def __repr__(self):
        return f"ExactScalars(q={self.q_rational})"


def make_scalars(q, exact: bool = False):
    return ExactScalars(q) if exact else NumericScalars(float(q))
