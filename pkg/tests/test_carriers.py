"""Carrier arithmetic: floats, extended reals, and dual numbers."""

import math

import pytest
from hypothesis import given, strategies as st

from dlc.carriers import (
    Dual,
    DualCarrier,
    F64Carrier,
    XReal,
    XRealCarrier,
)
from dlc.errors import CarrierError

finite = st.floats(-50, 50, allow_nan=False, allow_infinity=False)
small = st.floats(-5, 5, allow_nan=False, allow_infinity=False)


class TestXReal:
    def test_never_nan(self):
        with pytest.raises(Exception):
            XReal(float("nan"))

    def test_infinity_identities(self):
        inf = XRealCarrier.plus_inf()
        ninf = XRealCarrier.minus_inf()
        x = XReal(3.0)
        assert XRealCarrier.add(inf, x).value == math.inf
        assert XRealCarrier.add(ninf, x).value == -math.inf
        assert XRealCarrier.min2(inf, x) == x
        assert XRealCarrier.max2(ninf, x) == x
        assert XRealCarrier.neg(inf).value == -math.inf

    def test_indeterminate_forms_raise(self):
        inf = XRealCarrier.plus_inf()
        ninf = XRealCarrier.minus_inf()
        with pytest.raises(CarrierError):
            XRealCarrier.add(inf, ninf)
        with pytest.raises(CarrierError):
            XRealCarrier.mul(inf, XReal(0.0))
        with pytest.raises(CarrierError):
            XRealCarrier.div(XReal(1.0), XReal(0.0))

    @given(a=finite, b=finite)
    def test_finite_arithmetic_matches_floats(self, a, b):
        xa, xb = XReal(a), XReal(b)
        assert XRealCarrier.add(xa, xb).value == a + b
        assert XRealCarrier.sub(xa, xb).value == a - b
        assert XRealCarrier.mul(xa, xb).value == pytest.approx(a * b)
        assert XRealCarrier.min2(xa, xb).value == min(a, b)
        assert XRealCarrier.max2(xa, xb).value == max(a, b)


class TestRpow:
    def test_zero_conventions(self):
        for c in (F64Carrier, XRealCarrier):
            zero = c.lift(0.0)
            assert c.primal(c.rpow(zero, 2.0)) == 0.0
            assert c.primal(c.rpow(zero, 0.0)) == 1.0

    @given(x=st.floats(0.01, 10), a=st.floats(-3, 3))
    def test_matches_pow_on_positive_base(self, x, a):
        assert F64Carrier.rpow(x, a) == pytest.approx(x**a)


class TestDual:
    @given(a=small, b=small, ta=small, tb=small)
    def test_ring_operations(self, a, b, ta, tb):
        x, y = Dual(a, ta), Dual(b, tb)
        s = DualCarrier.add(x, y)
        assert (s.primal, s.tangent) == (a + b, ta + tb)
        p = DualCarrier.mul(x, y)
        assert p.primal == pytest.approx(a * b)
        assert p.tangent == pytest.approx(a * tb + b * ta)

    @given(a=st.floats(-3, 3, allow_nan=False))
    def test_exp_derivative(self, a):
        out = DualCarrier.exp(Dual(a, 1.0))
        assert out.tangent == pytest.approx(math.exp(a))

    @given(a=st.floats(0.1, 5), e=st.floats(-2, 2))
    def test_derivative_matches_finite_difference(self, a, e):
        def f(c, x):
            return c.mul(c.exp(c.neg(x)), c.add(x, c.lift(e)))

        dual = f(DualCarrier, Dual(a, 1.0)).tangent
        h = 1e-6
        fd = (f(F64Carrier, a + h) - f(F64Carrier, a - h)) / (2 * h)
        assert dual == pytest.approx(fd, abs=1e-4)

    def test_min_max_left_tie_breaking(self):
        a = Dual(1.0, 5.0)
        b = Dual(1.0, -5.0)
        assert DualCarrier.min2(a, b).tangent == 5.0
        assert DualCarrier.max2(a, b).tangent == 5.0

    def test_abs_right_derivative_at_zero(self):
        assert DualCarrier.abs(Dual(0.0, 1.0)).tangent == 1.0

    @given(a=st.floats(-5, 5, allow_nan=False))
    def test_abs_derivative_off_zero(self, a):
        if a == 0:
            return
        out = DualCarrier.abs(Dual(a, 1.0))
        assert out.tangent == (1.0 if a > 0 else -1.0)
