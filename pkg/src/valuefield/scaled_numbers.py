"""Scaled number structures and the number-preserving, value-changing connection.

A base-set element ("number") carries no intrinsic value; its value in a
structure scaled by s is raw/s. Scaled arithmetic is rescaled so the usual
axioms still hold (multiplication divides by s, division multiplies by s,
the unit is the raw element s). The connection between structures at scales
t -> s multiplies values by t/s and leaves the raw element unchanged.

Everything here is exactness-preserving: Fraction in, Fraction out. Floats
are accepted and simply stay floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

from .errors import MixedScales, NotInBaseSet

_BINARY_OPS = ("add", "sub", "mul", "div")


def _check_scale(s) -> None:
    if not (s > 0):
        raise ValueError(f"scale factor must be positive, got {s!r}")


def _ratio(num, den):
    """num/den, kept exact when both ends are rational."""
    if isinstance(num, Rational) and isinstance(den, Rational):
        return Fraction(num) / Fraction(den)
    return num / den


@dataclass(frozen=True)
class NaturalStructure:
    """Natural numbers thinned to every n-th element, with rescaled multiply."""

    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")

    def contains(self, m: int) -> bool:
        return isinstance(m, int) and m >= 0 and m % self.n == 0


def valuation_natural(struct: NaturalStructure, m: int) -> Fraction:
    """Value of the base-set element m: its index in the well ordering, m/n."""
    if not struct.contains(m):
        raise NotInBaseSet(f"{m} is not a multiple of {struct.n}")
    return Fraction(m, struct.n)


def natural_op(struct: NaturalStructure, op: str, m1: int, m2: int) -> int:
    """Structure-level add/mul on base-set elements; the result stays in the base set.

    Addition is untouched; multiplication carries the 1/n factor so that the
    valuation is a homomorphism: v(m1 mul m2) = v(m1) * v(m2).
    """
    for m in (m1, m2):
        if not struct.contains(m):
            raise NotInBaseSet(f"{m} is not a multiple of {struct.n}")
    if op == "add":
        return m1 + m2
    if op == "mul":
        prod = m1 * m2
        # m1 = a*n, m2 = b*n  =>  prod/n = a*b*n, an exact base-set element
        return prod // struct.n
    raise ValueError(f"op must be 'add' or 'mul', got {op!r}")


@dataclass(frozen=True)
class ScaledNumber:
    """A number value together with the scale factor of its home structure.

    The underlying base-set element is ``raw = scale * value``; it is what the
    connection preserves while the value changes.
    """

    value: object
    scale: object

    def __post_init__(self):
        _check_scale(self.scale)

    @property
    def raw(self):
        return self.scale * self.value


@dataclass(frozen=True)
class ScaledVector:
    """A finite-dimensional vector of values at a common scale factor."""

    value: tuple
    scale: object

    def __post_init__(self):
        _check_scale(self.scale)
        object.__setattr__(self, "value", tuple(self.value))

    def norm(self) -> ScaledNumber:
        sq = sum(v * v for v in self.value)
        return ScaledNumber(math.sqrt(sq), self.scale)

    def dot(self, other: "ScaledVector") -> ScaledNumber:
        if other.scale != self.scale:
            raise MixedScales(f"dot across scales {self.scale!r} and {other.scale!r}")
        if len(other.value) != len(self.value):
            raise ValueError("dimension mismatch")
        return ScaledNumber(sum(a * b for a, b in zip(self.value, other.value)), self.scale)


@dataclass(frozen=True)
class TransportedComponents:
    """Coefficients of the source structure's operations re-expressed at the target scale."""

    add_coeff: object
    mul_coeff: object
    div_coeff: object
    one: object
    zero: object


def value_of_raw(r, s):
    """Value of the bare base-set element r in the structure scaled by s: r/s."""
    _check_scale(s)
    return _ratio(r, s)


def connect_value(target_s, source_t, x: ScaledNumber) -> ScaledNumber:
    """Map a number at scale t to the *same number* at scale s.

    The value picks up the factor t/s; the raw element is unchanged:
    s * ((t/s) * value) == t * value.
    """
    _check_scale(target_s)
    if x.scale != source_t:
        raise MixedScales(f"number has scale {x.scale!r}, expected {source_t!r}")
    factor = _ratio(source_t, target_s)
    return ScaledNumber(factor * x.value, target_s)


def connect_raw_string(target_d, source_b, r):
    """Value at scale d of a bare symbol string r, regardless of where it came from.

    A meaningless string is re-read in the target structure, so the result is
    r/d. Contrast with :func:`connect_value`, which transports a number that
    already *has* a value at the source scale and therefore keeps the factor b.
    """
    _check_scale(target_d)
    _check_scale(source_b)
    return _ratio(r, target_d)


def scaled_combine(op: str, s, x: ScaledNumber, y: ScaledNumber) -> ScaledNumber:
    """Combine two numbers living at the same scale s.

    At the value level this is ordinary arithmetic (each structure is
    isomorphic to the standard one under valuation); the rescaled raw-level
    behavior follows: raw(mul) = raw(x)*raw(y)/s, raw(div) = s*raw(x)/raw(y).
    """
    if op not in _BINARY_OPS:
        raise ValueError(f"op must be one of {_BINARY_OPS}, got {op!r}")
    _check_scale(s)
    if x.scale != s or y.scale != s:
        raise MixedScales(
            f"operands have scales {x.scale!r}, {y.scale!r}; expected {s!r}"
        )
    a, b = x.value, y.value
    if op == "add":
        v = a + b
    elif op == "sub":
        v = a - b
    elif op == "mul":
        v = a * b
    else:
        v = _ratio(a, b)  # raises ZeroDivisionError for b == 0
    return ScaledNumber(v, s)


def commutation_table(s, t, op: str, a, b):
    """Compare transport-then-combine with combine-then-transport.

    Returns ``(transport_of_combo, combo_of_transports, ratio)`` where the
    first entry transports the already-combined value (one factor t/s) and the
    second combines the two transported values inside the target structure.
    The mismatch ratio combo/transport is t/s for mul, s/t for div and 1 for
    add/sub: the connection commutes with addition only.
    """
    _check_scale(s)
    _check_scale(t)
    if op not in ("add", "sub", "mul", "div"):
        raise ValueError(f"unsupported op {op!r}")
    factor = _ratio(t, s)
    ta, tb = factor * a, factor * b
    if op == "add":
        combo, combined = ta + tb, a + b
    elif op == "sub":
        combo, combined = ta - tb, a - b
    elif op == "mul":
        combo, combined = ta * tb, a * b
    else:
        combo, combined = _ratio(ta, tb), _ratio(a, b)
    transport = factor * combined
    return transport, combo, _ratio(combo, transport)


def transported_components(s, t) -> TransportedComponents:
    """Operation coefficients of the scale-t structure expressed at scale s."""
    _check_scale(s)
    _check_scale(t)
    return TransportedComponents(
        add_coeff=1,
        mul_coeff=_ratio(s, t),
        div_coeff=_ratio(t, s),
        one=_ratio(t, s),
        zero=0,
    )


def connect_vector(target_s, source_t, v: ScaledVector) -> ScaledVector:
    """Transport a vector between scales: every component picks up t/s.

    The norm (and any dot product) transforms exactly like a scalar value.
    """
    _check_scale(target_s)
    if v.scale != source_t:
        raise MixedScales(f"vector has scale {v.scale!r}, expected {source_t!r}")
    factor = _ratio(source_t, target_s)
    return ScaledVector(tuple(factor * c for c in v.value), target_s)
