import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qsphere.scalars import ExactScalars, HalfInt, MpScalars, QParam, half_range, qint, sqrt_qint

qs = st.floats(min_value=0.05, max_value=0.95)
halves = st.integers(min_value=-40, max_value=40).map(HalfInt)


def test_halfint_parsing():
    assert HalfInt.of("7/2") == HalfInt(7)
    assert HalfInt.of(3) == HalfInt(6)
    assert HalfInt.of(2.5) == HalfInt(5)
    assert str(HalfInt(-3)) == "-3/2"
    with pytest.raises(ValueError):
        HalfInt.of(0.3)


@given(halves, halves)
def test_halfint_arithmetic(a, b):
    assert (a + b) - b == a
    assert float(a + b) == float(a) + float(b)
    assert (a < b) == (float(a) < float(b))
    assert -(-a) == a


@given(st.integers(min_value=0, max_value=20))
def test_half_range_length(t):
    values = list(half_range(HalfInt(t)))
    assert len(values) == t + 1
    assert values[0] == HalfInt(-t) and values[-1] == HalfInt(t)


def test_qint_known_values():
    q = 0.5
    assert qint(0, q) == 0
    assert qint(1, q) == pytest.approx(1)
    assert qint(2, q) == pytest.approx(2.5)
    assert qint(3, q) == pytest.approx(q**2 + 1 + q**-2)


@given(qs, st.integers(min_value=1, max_value=30))
def test_qint_recurrence(q, n):
    assert qint(n + 1, q) == pytest.approx(qint(2, q) * qint(n, q) - qint(n - 1, q), rel=1e-10)


@given(qs, st.floats(min_value=-10, max_value=10))
def test_qint_symmetries(q, x):
    assert qint(-x, q) == pytest.approx(-qint(x, q), abs=1e-9)
    assert qint(x, 1 / q) == pytest.approx(qint(x, q), rel=1e-9, abs=1e-12)


def test_sqrt_qint_rejects_negative():
    assert sqrt_qint(0, 0.5) == 0
    with pytest.raises(ValueError):
        sqrt_qint(-1, 0.5)


@pytest.mark.parametrize("q", [0.0, 1.0, -0.2, 1.5])
def test_qparam_range(q):
    with pytest.raises(ValueError):
        QParam(q)


def test_qparam_equatorial():
    assert QParam(0.5).equatorial
    assert not QParam(0.5, 2.0).equatorial
    with pytest.raises(ValueError):
        QParam(0.5, -1.0)


def test_exact_scalars_sqrt_q():
    s = ExactScalars(Fraction(1, 4))
    assert s.sqrt_q * s.sqrt_q == s.q
    assert s.to_complex(s.sqrt_q) == pytest.approx(0.5)
    with pytest.raises(TypeError):
        s(1j)


def test_mp_scalars_precision():
    s = MpScalars(0.5, dps=50)
    x = s.sqrt(s(2))
    assert abs(x * x - 2) < s.ctx.mpf(10) ** -45
    assert s.to_complex(s.qpow(3)) == pytest.approx(0.125)
