"""Truncated Laurent series in q with exact coefficients.

A series carries a global exponent scale s: stored keys are integers k
representing q^(k/s).  Scale 2 is the working default so that the half
powers q^(1/2) arising from square-root substitutions are ordinary keys.

Truncation is tracked by a scaled `cutoff`: every coefficient at scaled
exponent k <= cutoff is exact; nothing is claimed beyond it.  Exact finite
objects (monomials, theta polynomials) carry the sentinel cutoff EXACT so
that multiplying by them never narrows the guarantee.  Order bookkeeping
is conservative:

    cutoff(a + b)  = min(cutoff(a), cutoff(b))
    cutoff(a * b)  = min(cutoff(a) + val(b), cutoff(b) + val(a))
    cutoff(1 / a)  = cutoff(a) - 2 * val(a)

where val is the least stored exponent (for a series with no stored terms
the true valuation exceeds the cutoff, and cutoff + 1 is used).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple

from .errors import InsufficientOrderError, ScaleMismatchError
from .field import ONE, FieldElement, fe

EXACT = 1 << 62

DEFAULT_SCALE = 2
DEFAULT_ORDER = 40


def _sat(x: int) -> int:
    return EXACT if x >= EXACT else x


@dataclass(frozen=True)
class QMonomial:
    """A single exact term c * q^exp with c != 0 and exp an exact rational."""

    coeff: FieldElement
    exp: Fraction

    def __post_init__(self):
        if self.coeff.is_zero:
            raise ValueError("QMonomial coefficient must be nonzero")

    @staticmethod
    def of(coeff, exp=0) -> "QMonomial":
        return QMonomial(fe(coeff), Fraction(exp))

    @staticmethod
    def one() -> "QMonomial":
        return QMonomial(ONE, Fraction(0))

    @staticmethod
    def q(exp=1) -> "QMonomial":
        return QMonomial(ONE, Fraction(exp))

    @property
    def is_one(self) -> bool:
        return self.coeff.is_one and self.exp == 0

    def __mul__(self, other: "QMonomial") -> "QMonomial":
        return QMonomial(self.coeff * other.coeff, self.exp + other.exp)

    def __truediv__(self, other: "QMonomial") -> "QMonomial":
        return QMonomial(self.coeff / other.coeff, self.exp - other.exp)

    def __pow__(self, k: int) -> "QMonomial":
        return QMonomial(self.coeff ** k, self.exp * k)

    def inverse(self) -> "QMonomial":
        return QMonomial(self.coeff.inverse(), -self.exp)

    def scaled_exp(self, scale: int) -> int:
        k = self.exp * scale
        if k.denominator != 1:
            raise ScaleMismatchError(
                f"exponent {self.exp} is not a multiple of 1/{scale}"
            )
        return int(k)

    def as_series(self, scale: int) -> "TruncatedLaurentSeries":
        return TruncatedLaurentSeries(
            scale, {self.scaled_exp(scale): self.coeff}, EXACT
        )

    def __str__(self):
        if self.exp == 0:
            return str(self.coeff)
        q = "q" if self.exp == 1 else f"q^({self.exp})"
        if self.coeff.is_one:
            return q
        c = str(self.coeff)
        if ("+" in c[1:]) or ("-" in c[1:]):
            c = f"({c})"
        return f"{c}*{q}"


class Mismatch(NamedTuple):
    """First disagreeing coefficient found by equal_to_order."""

    exponent: Fraction
    lhs: FieldElement
    rhs: FieldElement


class TruncatedLaurentSeries:
    """Finitely many exact coefficients on q^(k/scale), k <= cutoff."""

    __slots__ = ("scale", "cutoff", "coeffs")

    def __init__(self, scale: int, coeffs: dict[int, FieldElement], cutoff: int):
        if scale < 1:
            raise ValueError("scale must be a positive integer")
        object.__setattr__(self, "scale", scale)
        object.__setattr__(self, "cutoff", min(cutoff, EXACT))
        clean = {
            k: c for k, c in coeffs.items() if k <= cutoff and not c.is_zero
        }
        object.__setattr__(self, "coeffs", clean)

    def __setattr__(self, *a):
        raise AttributeError("TruncatedLaurentSeries is immutable")

    # -- constructors ---------------------------------------------------

    @staticmethod
    def zero(scale: int, cutoff: int = EXACT) -> "TruncatedLaurentSeries":
        return TruncatedLaurentSeries(scale, {}, cutoff)

    @staticmethod
    def one(scale: int) -> "TruncatedLaurentSeries":
        return TruncatedLaurentSeries(scale, {0: ONE}, EXACT)

    @staticmethod
    def from_scalar(value, scale: int) -> "TruncatedLaurentSeries":
        c = fe(value)
        return TruncatedLaurentSeries(scale, {} if c.is_zero else {0: c}, EXACT)

    # -- inspection -----------------------------------------------------

    @property
    def is_zero(self) -> bool:
        """True when no coefficient is stored (zero within the window)."""
        return not self.coeffs

    @property
    def is_exact(self) -> bool:
        return self.cutoff >= EXACT

    @property
    def order(self) -> Fraction:
        """Guaranteed order in ambient q units."""
        return Fraction(self.cutoff, self.scale)

    def valuation_scaled(self) -> int | None:
        """Least stored scaled exponent; None for the zero series."""
        return min(self.coeffs) if self.coeffs else None

    def valuation(self) -> Fraction | None:
        v = self.valuation_scaled()
        return None if v is None else Fraction(v, self.scale)

    def _vbound(self) -> int:
        v = self.valuation_scaled()
        return _sat(self.cutoff + 1) if v is None else v

    def coefficient(self, exp) -> FieldElement:
        k = Fraction(exp) * self.scale
        if k.denominator != 1:
            return fe(0)
        k = int(k)
        if k > self.cutoff:
            raise InsufficientOrderError(k, self.cutoff)
        return self.coeffs.get(k, fe(0))

    # -- ring operations --------------------------------------------------

    def _check(self, other: "TruncatedLaurentSeries"):
        if self.scale != other.scale:
            raise ScaleMismatchError(
                f"scale {self.scale} vs {other.scale}; rescale explicitly"
            )

    def __add__(self, other):
        if isinstance(other, (int, Fraction, FieldElement)):
            other = TruncatedLaurentSeries.from_scalar(other, self.scale)
        if not isinstance(other, TruncatedLaurentSeries):
            return NotImplemented
        self._check(other)
        cutoff = min(self.cutoff, other.cutoff)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            s = out.get(k)
            out[k] = c if s is None else s + c
        return TruncatedLaurentSeries(self.scale, out, cutoff)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedLaurentSeries(
            self.scale, {k: -c for k, c in self.coeffs.items()}, self.cutoff
        )

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, FieldElement)):
            other = TruncatedLaurentSeries.from_scalar(other, self.scale)
        if not isinstance(other, TruncatedLaurentSeries):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scalar_mul(self, value) -> "TruncatedLaurentSeries":
        c = fe(value)
        if c.is_zero:
            return TruncatedLaurentSeries.zero(self.scale, self.cutoff)
        return TruncatedLaurentSeries(
            self.scale, {k: c * v for k, v in self.coeffs.items()}, self.cutoff
        )

    def monomial_mul(self, mono: QMonomial) -> "TruncatedLaurentSeries":
        shift = mono.scaled_exp(self.scale)
        return TruncatedLaurentSeries(
            self.scale,
            {k + shift: mono.coeff * v for k, v in self.coeffs.items()},
            _sat(self.cutoff + shift),
        )

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, FieldElement)):
            return self.scalar_mul(other)
        if isinstance(other, QMonomial):
            return self.monomial_mul(other)
        if not isinstance(other, TruncatedLaurentSeries):
            return NotImplemented
        self._check(other)
        cutoff = min(
            _sat(self.cutoff + other._vbound()),
            _sat(other.cutoff + self._vbound()),
        )
        a, b = self.coeffs, other.coeffs
        if len(a) > len(b):
            a, b = b, a
        out: dict[int, FieldElement] = {}
        bk = sorted(b)
        for k1, c1 in a.items():
            limit = cutoff - k1
            for k2 in bk:
                if k2 > limit:
                    break
                k = k1 + k2
                c = c1 * b[k2]
                s = out.get(k)
                out[k] = c if s is None else s + c
        return TruncatedLaurentSeries(self.scale, out, cutoff)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "TruncatedLaurentSeries":
        if k < 0:
            return self.invert() ** (-k)
        out = TruncatedLaurentSeries.one(self.scale)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def invert(self, min_cutoff: int | None = None) -> "TruncatedLaurentSeries":
        """Multiplicative inverse q^-v * u^-1 of a series q^v * u.

        Exact finite inputs produce an infinite inverse; they are expanded
        to min_cutoff (or a generous default window) before inverting.
        """
        v = self.valuation_scaled()
        if v is None:
            raise ZeroDivisionError(
                "cannot invert a series that vanishes to its full order"
            )
        if self.is_exact:
            window = max(
                DEFAULT_ORDER * self.scale * 2,
                (min_cutoff + 2 * v) if min_cutoff is not None else 0,
            ) - v
        else:
            window = self.cutoff - v
        cutoff = window - v
        dense = [fe(0)] * (window + 1)
        for k, c in self.coeffs.items():
            if k - v <= window:
                dense[k - v] = c
        lead = dense[0].inverse()
        inv = [lead]
        for k in range(1, window + 1):
            acc = None
            for j in range(1, k + 1):
                if not dense[j].is_zero and not inv[k - j].is_zero:
                    t = dense[j] * inv[k - j]
                    acc = t if acc is None else acc + t
            inv.append(fe(0) if acc is None else -lead * acc)
        out = {k - v: c for k, c in enumerate(inv) if not c.is_zero}
        return TruncatedLaurentSeries(self.scale, out, cutoff)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, FieldElement)):
            return self.scalar_mul(fe(other).inverse())
        if isinstance(other, QMonomial):
            return self.monomial_mul(other.inverse())
        if not isinstance(other, TruncatedLaurentSeries):
            return NotImplemented
        return self * other.invert()

    def __rtruediv__(self, other):
        inv = self.invert()
        if isinstance(other, (int, Fraction, FieldElement)):
            return inv.scalar_mul(other)
        return NotImplemented

    # -- structural transforms -------------------------------------------

    def truncated(self, cutoff: int) -> "TruncatedLaurentSeries":
        return TruncatedLaurentSeries(
            self.scale, self.coeffs, min(self.cutoff, cutoff)
        )

    def dilate(self, k: int) -> "TruncatedLaurentSeries":
        """Base change q -> q^k: the coefficient of q^e moves to q^(k*e)."""
        if k < 1:
            raise ValueError("dilation factor must be a positive integer")
        return TruncatedLaurentSeries(
            self.scale,
            {key * k: c for key, c in self.coeffs.items()},
            _sat(self.cutoff * k),
        )

    def compose_base(self, base: QMonomial) -> "TruncatedLaurentSeries":
        """Substitute q -> c*q^d for a series with integer exponents only.

        The coefficient of q^e becomes c^e * q^(d*e); d must be a positive
        integer.
        """
        d = base.exp
        if d.denominator != 1 or d < 1:
            raise ValueError("base substitution requires a positive integer power")
        d = int(d)
        c = base.coeff
        s = self.scale
        out: dict[int, FieldElement] = {}
        for k, v in self.coeffs.items():
            if k % s:
                raise ScaleMismatchError(
                    "base substitution requires integer exponents"
                )
            e = k // s
            out[e * d * s] = v * (c ** e)
        if self.is_exact:
            cutoff = EXACT
        else:
            cutoff = (self.cutoff // s) * d * s
        return TruncatedLaurentSeries(s, out, cutoff)

    def rescale(self, scale: int) -> "TruncatedLaurentSeries":
        """Lift to a finer exponent grid (the new scale is a multiple)."""
        if scale == self.scale:
            return self
        if scale % self.scale:
            raise ScaleMismatchError(
                f"cannot rescale {self.scale} -> {scale}: not a multiple"
            )
        m = scale // self.scale
        return TruncatedLaurentSeries(
            scale,
            {k * m: c for k, c in self.coeffs.items()},
            _sat(self.cutoff * m),
        )

    # -- comparison -------------------------------------------------------

    def equal_to_order(
        self, other: "TruncatedLaurentSeries", order
    ) -> Mismatch | None:
        """None if all coefficients of q^e, e <= order, agree; else the
        least disagreeing exponent with both coefficients."""
        self._check(other)
        bound = Fraction(order) * self.scale
        if bound.denominator != 1:
            bound = Fraction(int(bound), 1)
        bound = int(bound)
        if bound > self.cutoff:
            raise InsufficientOrderError(bound, self.cutoff)
        if bound > other.cutoff:
            raise InsufficientOrderError(bound, other.cutoff)
        keys = sorted(
            k
            for k in set(self.coeffs) | set(other.coeffs)
            if k <= bound
        )
        zero = fe(0)
        for k in keys:
            a = self.coeffs.get(k, zero)
            b = other.coeffs.get(k, zero)
            if a != b:
                return Mismatch(Fraction(k, self.scale), a, b)
        return None

    def __eq__(self, other):
        if not isinstance(other, TruncatedLaurentSeries):
            return NotImplemented
        return (
            self.scale == other.scale
            and self.cutoff == other.cutoff
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.scale, self.cutoff, tuple(sorted(self.coeffs.items()))))

    # -- rendering ----------------------------------------------------------

    def terms(self) -> Iterable[tuple[Fraction, FieldElement]]:
        for k in sorted(self.coeffs):
            yield Fraction(k, self.scale), self.coeffs[k]

    def text(self) -> str:
        if not self.coeffs:
            return "0"
        parts: list[str] = []
        for e, c in self.terms():
            body, sign = _term_text(e, c)
            if not parts:
                parts.append(("-" if sign < 0 else "") + body)
            else:
                parts.append(("- " if sign < 0 else "+ ") + body)
        return " ".join(parts)

    def to_json_dict(self) -> dict:
        return {
            "schema": "qmock.series/1",
            "scale": self.scale,
            "order": "exact" if self.is_exact else str(self.order),
            "terms": [
                {"exp": str(e), "coeff": str(c)} for e, c in self.terms()
            ],
        }

    def __str__(self):
        return self.text()

    def __repr__(self):
        return f"<series s={self.scale} cutoff={'exact' if self.is_exact else self.cutoff}: {self.text()}>"


def _term_text(e: Fraction, c: FieldElement) -> tuple[str, int]:
    """Render one term; returns (body, sign) with the sign pulled out for
    rational coefficients."""
    sign = 1
    if c.is_rational:
        r = c.to_fraction()
        if r < 0:
            sign, r = -1, -r
        cs = str(r)
        composite = False
    else:
        cs = str(c)
        composite = True
    if e == 0:
        return (f"({cs})" if composite else cs), sign
    if e == 1:
        qpart = "q"
    elif e.denominator == 1 and e > 0:
        qpart = f"q^{e}"
    else:
        qpart = f"q^({e})"
    if cs == "1" and not composite:
        return qpart, sign
    if composite:
        cs = f"({cs})"
    return f"{cs}*{qpart}", sign
