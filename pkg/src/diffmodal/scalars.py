"""Exact scalar arithmetic over a handful of commutative rigs.

A :class:`Rig` works on raw Python values (``int``, ``Fraction``, ``bool``)
so that the linear algebra layer can stay fast; :class:`RigElement` wraps a
raw value together with its rig for the public, checked API.
"""

from __future__ import annotations

import operator
import re
from dataclasses import dataclass
from fractions import Fraction

RATIONALS = "Q"
INTEGERS = "Z"
INTEGERS_MOD = "Zmod"
BOOLEANS = "bool"
NATURALS = "nat"

_KINDS = (RATIONALS, INTEGERS, INTEGERS_MOD, BOOLEANS, NATURALS)
_SCALAR_RE = re.compile(r"^\s*([+-]?)(\d+)(?:/(\d+))?\s*$")


class RigError(ValueError):
    pass


@dataclass(frozen=True)
class Rig:
    kind: str
    modulus: int | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise RigError(f"unknown rig kind {self.kind!r}")
        if self.kind == INTEGERS_MOD:
            if self.modulus is None or self.modulus < 2:
                raise RigError("IntegersMod(n) requires n >= 2")
        elif self.modulus is not None:
            raise RigError("only IntegersMod takes a modulus")

    # -- descriptors -----------------------------------------------------

    @property
    def has_negatives(self) -> bool:
        return self.kind in (RATIONALS, INTEGERS, INTEGERS_MOD)

    @property
    def name(self) -> str:
        if self.kind == INTEGERS_MOD:
            return f"Zmod:{self.modulus}"
        return self.kind

    def __str__(self):
        return self.name

    @property
    def zero(self):
        return False if self.kind == BOOLEANS else 0

    @property
    def one(self):
        return True if self.kind == BOOLEANS else 1

    # -- raw arithmetic --------------------------------------------------

    def add(self, a, b):
        if self.kind == BOOLEANS:
            return a or b
        if self.kind == INTEGERS_MOD:
            return (a + b) % self.modulus
        return a + b

    def mul(self, a, b):
        if self.kind == BOOLEANS:
            return a and b
        if self.kind == INTEGERS_MOD:
            return (a * b) % self.modulus
        return a * b

    def neg(self, a):
        if not self.has_negatives:
            raise RigError("no negatives")
        if self.kind == INTEGERS_MOD:
            return (-a) % self.modulus
        return -a

    def is_zero(self, a) -> bool:
        return not a

    def from_int(self, n: int):
        """Image of the integer n under the unique rig map from Z (or N)."""
        if self.kind == BOOLEANS:
            if n < 0:
                raise RigError("no negatives")
            return n != 0
        if self.kind == INTEGERS_MOD:
            return n % self.modulus
        if self.kind == NATURALS and n < 0:
            raise RigError("no negatives")
        return n

    def normalize(self, value):
        """Coerce a raw value into canonical form, validating membership."""
        if self.kind == BOOLEANS:
            if isinstance(value, bool):
                return value
            if isinstance(value, int) and value in (0, 1):
                return bool(value)
            raise RigError(f"{value!r} is not a boolean")
        if isinstance(value, bool):
            value = int(value)
        if self.kind == RATIONALS:
            if isinstance(value, Fraction):
                return value.numerator if value.denominator == 1 else value
            if isinstance(value, int):
                return value
            raise RigError(f"{value!r} is not rational")
        if isinstance(value, Fraction):
            if value.denominator != 1:
                raise RigError(f"{value} is not integral")
            value = value.numerator
        if not isinstance(value, int):
            raise RigError(f"{value!r} is not an integer")
        return self.from_int(value)

    # -- text --------------------------------------------------------------

    def parse_raw(self, text: str):
        m = _SCALAR_RE.match(text)
        if not m:
            raise RigError(f"malformed scalar {text!r}")
        sign, num, den = m.group(1), int(m.group(2)), m.group(3)
        if sign == "-" and not self.has_negatives and num != 0:
            raise RigError(f"sign in a rig without negatives: {text!r}")
        if den is not None:
            den = int(den)
            if den == 0:
                raise RigError("denominator 0")
            q = Fraction(num, den)
        else:
            q = Fraction(num)
        if sign == "-":
            q = -q
        if self.kind == RATIONALS:
            return q.numerator if q.denominator == 1 else q
        if q.denominator != 1:
            raise RigError(f"fraction {text!r} not allowed in {self.name}")
        return self.from_int(q.numerator)

    def render_raw(self, value) -> str:
        if self.kind == BOOLEANS:
            return "1" if value else "0"
        return str(value)

    def element(self, value) -> "RigElement":
        return RigElement(self, self.normalize(value))


def rig_from_name(name: str) -> Rig:
    """Parse the CLI spelling: Q, Z, Zmod:n, bool, nat."""
    text = name.strip()
    if text.startswith("Zmod:"):
        try:
            n = int(text[5:])
        except ValueError as exc:
            raise RigError(f"bad modulus in {name!r}") from exc
        return Rig(INTEGERS_MOD, n)
    if text in (RATIONALS, INTEGERS, BOOLEANS, NATURALS):
        return Rig(text)
    raise RigError(f"unknown rig {name!r}")


QQ = Rig(RATIONALS)
ZZ = Rig(INTEGERS)
BOOL = Rig(BOOLEANS)
NAT = Rig(NATURALS)


@dataclass(frozen=True)
class RigElement:
    rig: Rig
    value: object

    def _check(self, other: "RigElement"):
        if not isinstance(other, RigElement) or other.rig != self.rig:
            raise RigError("rig mismatch")

    def __add__(self, other):
        return add(self, other)

    def __mul__(self, other):
        return mul(self, other)

    def __neg__(self):
        return negate(self)

    def __str__(self):
        return render(self)


def add(a: RigElement, b: RigElement) -> RigElement:
    a._check(b)
    return RigElement(a.rig, a.rig.add(a.value, b.value))


def mul(a: RigElement, b: RigElement) -> RigElement:
    a._check(b)
    return RigElement(a.rig, a.rig.mul(a.value, b.value))


def negate(a: RigElement) -> RigElement:
    return RigElement(a.rig, a.rig.neg(a.value))


def parse(text: str, rig: Rig) -> RigElement:
    return RigElement(rig, rig.parse_raw(text))


def render(a: RigElement) -> str:
    return a.rig.render_raw(a.value)


# Used by linalg when the rig is Q, Z or N: plain Python arithmetic.
_FAST = {RATIONALS: (operator.add, operator.mul), INTEGERS: (operator.add, operator.mul),
         NATURALS: (operator.add, operator.mul)}


def fast_ops(rig: Rig):
    """(add, mul) callables on raw values, avoiding method dispatch when possible."""
    return _FAST.get(rig.kind, (rig.add, rig.mul))
