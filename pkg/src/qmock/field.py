"""Exact scalar arithmetic over Q, Q(i), and Q(w).

Every coefficient in the library lives in one of three fields: the
rationals, the Gaussian rationals Q(zeta_4), or the Eisenstein rationals
Q(zeta_3).  A value is stored as its conductor together with exact
rational coordinates in the power basis of the root of unity:

    conductor 1:  (a,)       meaning a
    conductor 3:  (a, b)     meaning a + b*w,  w^2 + w + 1 = 0
    conductor 4:  (a, b)     meaning a + b*i,  i^2 + 1 = 0

Values whose higher coordinates vanish are normalized down to conductor 1,
so equality and hashing are structural.  Mixing conductors 3 and 4 is
rejected; no identity in the corpus needs a composite field.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

from .errors import IncompatibleConductorsError, UnsupportedRootOrderError

Rational = Union[int, Fraction]


class FieldElement:
    """An exact element of Q, Q(i), or Q(w)."""

    __slots__ = ("con", "coords")

    def __init__(self, con: int, coords: tuple[Fraction, ...]):
        # Normalize: demote to the rationals when the extension part is 0.
        if con != 1 and not coords[1]:
            con, coords = 1, coords[:1]
        object.__setattr__(self, "con", con)
        object.__setattr__(self, "coords", coords)

    def __setattr__(self, *a):  # immutable
        raise AttributeError("FieldElement is immutable")

    # -- constructors -------------------------------------------------

    @staticmethod
    def from_rational(value: Rational) -> "FieldElement":
        return FieldElement(1, (Fraction(value),))

    # -- plumbing -----------------------------------------------------

    def _coerce(self, other) -> "FieldElement | None":
        if isinstance(other, FieldElement):
            return other
        if isinstance(other, (int, Fraction)):
            return FieldElement.from_rational(other)
        return None

    def _lift(self, con: int) -> tuple[Fraction, ...]:
        """Coordinates of self viewed inside conductor `con`."""
        if self.con == con:
            return self.coords
        if self.con == 1:
            return (self.coords[0], Fraction(0))
        raise IncompatibleConductorsError(
            f"cannot mix conductors {self.con} and {con}"
        )

    def _join(self, other: "FieldElement") -> int:
        if self.con == other.con or other.con == 1:
            return self.con
        if self.con == 1:
            return other.con
        raise IncompatibleConductorsError(
            f"cannot mix conductors {self.con} and {other.con}"
        )

    # -- predicates ---------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not any(self.coords)

    @property
    def is_one(self) -> bool:
        return self.con == 1 and self.coords[0] == 1

    @property
    def is_rational(self) -> bool:
        return self.con == 1

    def to_fraction(self) -> Fraction:
        if self.con != 1:
            raise ValueError(f"{self} is not rational")
        return self.coords[0]

    # -- ring operations ----------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        con = self._join(other)
        a, b = self._lift(con), other._lift(con)
        return FieldElement(con, tuple(x + y for x, y in zip(a, b)))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __neg__(self):
        return FieldElement(self.con, tuple(-x for x in self.coords))

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        con = self._join(other)
        if con == 1:
            return FieldElement(1, (self.coords[0] * other.coords[0],))
        a0, a1 = self._lift(con)
        b0, b1 = other._lift(con)
        if con == 4:
            # (a0 + a1 i)(b0 + b1 i), i^2 = -1
            return FieldElement(4, (a0 * b0 - a1 * b1, a0 * b1 + a1 * b0))
        # (a0 + a1 w)(b0 + b1 w), w^2 = -1 - w
        cross = a1 * b1
        return FieldElement(3, (a0 * b0 - cross, a0 * b1 + a1 * b0 - cross))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero:
            raise ZeroDivisionError("division by zero field element")
        if self.con == 1:
            return FieldElement(1, (1 / self.coords[0],))
        conj = self.conjugate()
        norm = (self * conj).coords[0]  # rational by construction
        return FieldElement(conj.con, tuple(x / norm for x in conj._lift(self.con)))

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, k: int) -> "FieldElement":
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        out = ONE
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self) -> "FieldElement":
        """The nontrivial field automorphism (identity on Q)."""
        if self.con == 1:
            return self
        a, b = self.coords
        if self.con == 4:
            return FieldElement(4, (a, -b))
        # w -> w^2 = -1 - w
        return FieldElement(3, (a - b, -b))

    # -- comparisons / hashing ----------------------------------------

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.con == other.con and self.coords == other.coords

    def __hash__(self):
        return hash((self.con, self.coords))

    # -- rendering ----------------------------------------------------

    def __str__(self):
        if self.con == 1:
            return str(self.coords[0])
        sym = "i" if self.con == 4 else "w"
        a, b = self.coords
        parts = []
        if a:
            parts.append(str(a))
        if b == 1:
            parts.append("+" + sym if parts else sym)
        elif b == -1:
            parts.append("-" + sym)
        elif b > 0:
            parts.append(("+" if parts else "") + f"{b}*{sym}")
        else:
            parts.append(f"{b}*{sym}")
        return "".join(parts) or "0"

    def __repr__(self):
        return f"FieldElement({self})"


ZERO = FieldElement.from_rational(0)
ONE = FieldElement.from_rational(1)
MINUS_ONE = FieldElement.from_rational(-1)


def fe(value: Rational | FieldElement) -> FieldElement:
    """Coerce an int or Fraction to a FieldElement."""
    if isinstance(value, FieldElement):
        return value
    return FieldElement.from_rational(value)


def root_of_unity(n: int) -> FieldElement:
    """A primitive n-th root of unity for n in {1, 2, 3, 4, 6}."""
    if n == 1:
        return ONE
    if n == 2:
        return MINUS_ONE
    if n == 3:
        return FieldElement(3, (Fraction(0), Fraction(1)))
    if n == 4:
        return FieldElement(4, (Fraction(0), Fraction(1)))
    if n == 6:
        # -w^2 = 1 + w
        return FieldElement(3, (Fraction(1), Fraction(1)))
    raise UnsupportedRootOrderError(f"no supported root of unity of order {n}")
