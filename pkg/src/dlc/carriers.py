"""Scalar carriers the generic interpreter runs over.

Three carriers: plain floats, extended reals with ±∞ (for the min/max
limit logic), and dual numbers for forward-mode differentiation.  Each
carrier exposes the same operation suite so the interpreter stays
generic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Tuple

from .errors import CarrierError, DomainError

INF = math.inf


def _float_rpow(x: float, a: float) -> float:
    if x < 0:
        raise DomainError(f"rpow base {x} is negative")
    if x == 0.0:
        return 1.0 if a == 0.0 else 0.0
    return x ** a


@dataclass(frozen=True)
class XReal:
    """Extended real; value may be ±inf but never NaN."""

    value: float

    def __post_init__(self):
        if math.isnan(self.value):
            raise CarrierError("NaN has no extended-real reading")

    def is_finite(self) -> bool:
        return math.isfinite(self.value)

    def __repr__(self):
        return f"XReal({self.value})"


XR_PLUS_INF = XReal(INF)
XR_MINUS_INF = XReal(-INF)


def _xr(v: float) -> XReal:
    if math.isnan(v):
        raise CarrierError("indeterminate extended-real form")
    return XReal(v)


@dataclass(frozen=True)
class Dual:
    """First-order dual number ⟨primal, tangent⟩."""

    primal: float
    tangent: float

    def __repr__(self):
        return f"⟨{self.primal}, {self.tangent}⟩"

    @staticmethod
    def _coerce(x) -> "Dual":
        return x if isinstance(x, Dual) else Dual(float(x), 0.0)

    def __add__(self, other):
        o = Dual._coerce(other)
        return Dual(self.primal + o.primal, self.tangent + o.tangent)

    __radd__ = __add__

    def __sub__(self, other):
        o = Dual._coerce(other)
        return Dual(self.primal - o.primal, self.tangent - o.tangent)

    def __rsub__(self, other):
        return Dual._coerce(other).__sub__(self)

    def __mul__(self, other):
        o = Dual._coerce(other)
        return Dual(
            self.primal * o.primal,
            self.primal * o.tangent + self.tangent * o.primal,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = Dual._coerce(other)
        return Dual(
            self.primal / o.primal,
            (self.tangent * o.primal - self.primal * o.tangent)
            / (o.primal * o.primal),
        )

    def __rtruediv__(self, other):
        return Dual._coerce(other).__truediv__(self)

    def __neg__(self):
        return Dual(-self.primal, -self.tangent)

    def __abs__(self):
        s = -1.0 if self.primal < 0 else 1.0
        return Dual(abs(self.primal), s * self.tangent)


class F64Carrier:
    """Plain float arithmetic."""

    name = "f64"
    has_infinity = False

    @staticmethod
    def lift(r: float) -> float:
        return float(r)

    @staticmethod
    def primal(x: float) -> float:
        return x

    zero = 0.0
    one = 1.0

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def sub(a, b):
        return a - b

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def div(a, b):
        return a / b

    @staticmethod
    def neg(a):
        return -a

    @staticmethod
    def abs(a):
        return abs(a)

    @staticmethod
    def exp(a):
        return math.exp(a)

    @staticmethod
    def rpow(x, a: float):
        return _float_rpow(x, a)

    @staticmethod
    def min2(a, b):
        return a if a <= b else b

    @staticmethod
    def max2(a, b):
        return a if a >= b else b

    @classmethod
    def plus_inf(cls):
        raise CarrierError(f"carrier {cls.name} lacks +inf")

    @classmethod
    def minus_inf(cls):
        raise CarrierError(f"carrier {cls.name} lacks -inf")


class XRealCarrier:
    """Extended reals; indeterminate forms raise instead of yielding NaN."""

    name = "xreal"
    has_infinity = True

    @staticmethod
    def lift(r: float) -> XReal:
        return XReal(float(r))

    @staticmethod
    def primal(x: XReal) -> float:
        return x.value

    zero = XReal(0.0)
    one = XReal(1.0)

    @staticmethod
    def add(a: XReal, b: XReal) -> XReal:
        return _xr(a.value + b.value)

    @staticmethod
    def sub(a: XReal, b: XReal) -> XReal:
        return _xr(a.value - b.value)

    @staticmethod
    def mul(a: XReal, b: XReal) -> XReal:
        if (a.value == 0.0 and not b.is_finite()) or (
            b.value == 0.0 and not a.is_finite()
        ):
            raise CarrierError("indeterminate form 0 * inf")
        return _xr(a.value * b.value)

    @staticmethod
    def div(a: XReal, b: XReal) -> XReal:
        if not a.is_finite() and not b.is_finite():
            raise CarrierError("indeterminate form inf / inf")
        if b.value == 0.0:
            raise CarrierError("extended-real division by zero")
        return _xr(a.value / b.value)

    @staticmethod
    def neg(a: XReal) -> XReal:
        return XReal(-a.value)

    @staticmethod
    def abs(a: XReal) -> XReal:
        return XReal(abs(a.value))

    @staticmethod
    def exp(a: XReal) -> XReal:
        try:
            return XReal(math.exp(a.value))
        except OverflowError:
            return XR_PLUS_INF

    @staticmethod
    def rpow(x: XReal, a: float) -> XReal:
        if not x.is_finite():
            if x.value < 0:
                raise DomainError("rpow base is negative")
            return XR_PLUS_INF if a > 0 else XReal(1.0)
        return XReal(_float_rpow(x.value, a))

    @staticmethod
    def min2(a: XReal, b: XReal) -> XReal:
        return a if a.value <= b.value else b

    @staticmethod
    def max2(a: XReal, b: XReal) -> XReal:
        return a if a.value >= b.value else b

    @staticmethod
    def plus_inf() -> XReal:
        return XR_PLUS_INF

    @staticmethod
    def minus_inf() -> XReal:
        return XR_MINUS_INF


class DualCarrier:
    """Forward-mode dual numbers; min/max break ties toward the left."""

    name = "dual"
    has_infinity = False

    @staticmethod
    def lift(r: float) -> Dual:
        return Dual(float(r), 0.0)

    @staticmethod
    def primal(x: Dual) -> float:
        return x.primal

    zero = Dual(0.0, 0.0)
    one = Dual(1.0, 0.0)

    @staticmethod
    def add(a: Dual, b: Dual) -> Dual:
        return Dual(a.primal + b.primal, a.tangent + b.tangent)

    @staticmethod
    def sub(a: Dual, b: Dual) -> Dual:
        return Dual(a.primal - b.primal, a.tangent - b.tangent)

    @staticmethod
    def mul(a: Dual, b: Dual) -> Dual:
        return Dual(a.primal * b.primal, a.primal * b.tangent + a.tangent * b.primal)

    @staticmethod
    def div(a: Dual, b: Dual) -> Dual:
        return Dual(
            a.primal / b.primal,
            (a.tangent * b.primal - a.primal * b.tangent) / (b.primal * b.primal),
        )

    @staticmethod
    def neg(a: Dual) -> Dual:
        return Dual(-a.primal, -a.tangent)

    @staticmethod
    def abs(a: Dual) -> Dual:
        # |x| at 0: treat as the right derivative (sign +1), keeping totality
        s = -1.0 if a.primal < 0 else 1.0
        return Dual(abs(a.primal), s * a.tangent)

    @staticmethod
    def exp(a: Dual) -> Dual:
        v = math.exp(a.primal)
        return Dual(v, a.tangent * v)

    @staticmethod
    def rpow(x: Dual, a: float) -> Dual:
        v = _float_rpow(x.primal, a)
        if x.primal == 0.0:
            slope = x.tangent if a == 1.0 else 0.0
        else:
            slope = a * (x.primal ** (a - 1.0)) * x.tangent
        return Dual(v, slope)

    @staticmethod
    def min2(a: Dual, b: Dual) -> Dual:
        # exact tie keeps the LEFT argument's tangent
        return a if a.primal <= b.primal else b

    @staticmethod
    def max2(a: Dual, b: Dual) -> Dual:
        return a if a.primal >= b.primal else b

    @classmethod
    def plus_inf(cls):
        raise CarrierError(f"carrier {cls.name} lacks +inf")

    @classmethod
    def minus_inf(cls):
        raise CarrierError(f"carrier {cls.name} lacks -inf")


CARRIERS = {c.name: c for c in (F64Carrier, XRealCarrier, DualCarrier)}


def rpow(x, a: float):
    """Real power with the 0^a = 0 (a > 0), 0^0 = 1 convention."""
    if isinstance(x, Dual):
        return DualCarrier.rpow(x, a)
    if isinstance(x, XReal):
        return XRealCarrier.rpow(x, a)
    return _float_rpow(float(x), a)


def dual_eval(
    f: Callable[[Dual], Dual], a: float, direction: float = 1.0
) -> Tuple[float, float]:
    """Evaluate f and its directional derivative at a via dual numbers."""
    out = f(Dual(float(a), float(direction)))
    return out.primal, out.tangent
