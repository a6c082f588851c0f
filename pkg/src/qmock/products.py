"""q-shifted factorials, Jacobi theta j(z;q), and eta products J_m.

The shifted factorial (a;q)_n follows the three-case definition: empty
product for n = 0, the product (1-a)(1-aq)...(1-aq^(n-1)) for n > 0, and
the reciprocal 1/((1-a/q)(1-a/q^2)...(1-aq^n)) for n < 0, with n = oo
meaning the full infinite product.

Factors are never inverted wholesale.  Each reciprocal factor
1/(1 - c*q^E) is applied as a linear recurrence when E > 0, and when
E < 0 its dominant monomial is extracted first:

    1/(1 - c*q^E)  =  (-q^-E/c) * 1/(1 - q^-E/c)

so every intermediate object is a monomial times an exact polynomial
times unit series, and the guaranteed order never collapses.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import DegenerateSpecializationError
from .field import FieldElement, fe
from .series import EXACT, QMonomial, TruncatedLaurentSeries


@dataclass(frozen=True)
class PochhammerSpec:
    """(arg; q^modulus)_count with count None meaning infinity."""

    arg: QMonomial
    modulus: Fraction
    count: int | None

    def __post_init__(self):
        if self.modulus <= 0:
            raise ValueError("Pochhammer modulus must be positive")


def pochhammer(spec: PochhammerSpec, order, scale: int) -> TruncatedLaurentSeries:
    """Expand a shifted factorial to the given ambient order."""
    return poch_scaled(
        spec.arg, spec.modulus, spec.count, int(Fraction(order) * scale), scale
    )


def poch_scaled(
    arg: QMonomial,
    modulus: Fraction,
    count: int | None,
    cutoff: int,
    scale: int,
) -> TruncatedLaurentSeries:
    """Internal entry point with a scaled cutoff; result cutoff >= cutoff."""
    key_cut = -(-cutoff // 16) * 16  # round up for cache reuse
    return _poch_cached(arg, modulus, count, key_cut, scale)


@lru_cache(maxsize=None)
def _poch_cached(arg, modulus, count, cutoff, scale):
    M = QMonomial.of(1, modulus).scaled_exp(scale)
    E0 = arg.scaled_exp(scale)
    c = arg.coeff

    # Exponents of the direct (resp. reciprocal) binomial factors.
    if count is None or count >= 0:
        direct = True
        if count is None:
            exps = []
            e = E0
            # Later factors are 1 to every order we could be asked about;
            # the stop bound is refined below once the valuation is known.
            while e <= cutoff + 1:
                exps.append(e)
                e += M
            neg_part = sum(x for x in exps if x < 0)
            want = cutoff + max(0, -neg_part)
            while e <= want:
                exps.append(e)
                e += M
            exact = False
        else:
            exps = [E0 + j * M for j in range(count)]
            exact = True
    else:
        direct = False
        exps = [E0 - j * M for j in range(1, -count + 1)]
        exact = True

    if direct:
        return _product_of_binomials(c, exps, exact, cutoff, scale, count is None)
    return _reciprocal_of_binomials(c, exps, cutoff, scale)


def _product_of_binomials(c, exps, exact, cutoff, scale, infinite):
    """prod (1 - c q^(e/scale)) over the listed scaled exponents."""
    for e in exps:
        if e == 0 and c.is_one and infinite:
            raise DegenerateSpecializationError(
                "infinite product has an exactly zero factor (1 - q^0)"
            )
    neg_part = sum(e for e in exps if e < 0)
    window = cutoff + max(0, -neg_part)
    coeffs = {0: fe(1)}
    # Omitted factors of an infinite product are 1 + O(q^(window+1)); after
    # the negative-valuation part shifts exponents down, coefficients are
    # trustworthy only up to the requested cutoff.
    out_cut = EXACT if exact else cutoff
    for e in exps:
        new = dict(coeffs)
        for k, v in coeffs.items():
            ke = k + e
            if not exact and ke > window:
                continue
            t = c * v
            s = new.get(ke)
            new[ke] = -t if s is None else s - t
        coeffs = {k: v for k, v in new.items() if not v.is_zero}
    return TruncatedLaurentSeries(scale, coeffs, out_cut)


def _reciprocal_of_binomials(c, exps, cutoff, scale):
    """prod 1/(1 - c q^(e/scale)) over the listed scaled exponents."""
    shift = 0          # scaled exponent of the extracted monomial
    coeff = fe(1)      # scalar of the extracted monomial
    units: list[tuple[FieldElement, int]] = []  # (c', E'>0) recurrences
    for e in exps:
        if e > 0:
            units.append((c, e))
        elif e == 0:
            if c.is_one:
                raise DegenerateSpecializationError(
                    "reciprocal factor 1/(1 - q^0) with unit coefficient"
                )
            coeff = coeff / (fe(1) - c)
        else:
            # 1/(1 - c q^e) = (-q^-e/c) / (1 - q^-e/c)
            inv = c.inverse()
            coeff = coeff * (-inv)
            shift += -e
            units.append((inv, -e))
    window = cutoff + max(0, -shift)
    dense = [fe(0)] * (window + 1)
    dense[0] = coeff
    zero = fe(0)
    for cu, eu in units:
        for k in range(eu, window + 1):
            prev = dense[k - eu]
            if not prev.is_zero:
                cur = dense[k]
                dense[k] = cu * prev if cur.is_zero else cur + cu * prev
    coeffs = {
        k + shift: v for k, v in enumerate(dense) if not v.is_zero
    }
    return TruncatedLaurentSeries(scale, coeffs, window + shift)


def theta_is_zero(z: QMonomial, modulus: Fraction) -> bool:
    """True iff j(z; q^modulus) vanishes identically (z a power of the base)."""
    return z.coeff.is_one and (z.exp / Fraction(modulus)).denominator == 1


def theta_j(
    z: QMonomial,
    modulus,
    order,
    scale: int,
    route: str = "sum",
) -> TruncatedLaurentSeries:
    """Jacobi theta j(z;q^M) = (z, q^M/z, q^M; q^M)_oo
    = sum over n of (-1)^n q^(M*n(n-1)/2) z^n."""
    modulus = Fraction(modulus)
    cutoff = int(Fraction(order) * scale)
    if route == "product":
        return _theta_product(z, modulus, cutoff, scale)
    if route != "sum":
        raise ValueError(f"unknown theta route {route!r}")
    return _theta_sum(z, modulus, cutoff, scale)


@lru_cache(maxsize=None)
def _theta_sum_cached(z, modulus, cutoff, scale):
    if theta_is_zero(z, modulus):
        return TruncatedLaurentSeries.zero(scale, cutoff)
    M = QMonomial.of(1, modulus).scaled_exp(scale)
    ez = z.scaled_exp(scale)
    cz = z.coeff
    coeffs: dict[int, FieldElement] = {}

    def add(n: int) -> bool:
        e = M * n * (n - 1) // 2 + n * ez
        if e > cutoff:
            return False
        term = cz ** n
        if n % 2:
            term = -term
        s = coeffs.get(e)
        coeffs[e] = term if s is None else s + term
        return True

    n = 0
    while True:
        inside = add(n)
        # Beyond the vertex the exponent grows monotonically; stop there.
        if not inside and M * n + ez > 0:
            break
        n += 1
    n = -1
    while True:
        inside = add(n)
        if not inside and M * n + ez < 0:
            break
        n -= 1
    return TruncatedLaurentSeries(scale, coeffs, cutoff)


def _theta_sum(z, modulus, cutoff, scale):
    key_cut = -(-cutoff // 16) * 16
    return _theta_sum_cached(z, modulus, key_cut, scale)


def _theta_product(z, modulus, cutoff, scale):
    if theta_is_zero(z, modulus):
        return TruncatedLaurentSeries.zero(scale, cutoff)
    base = QMonomial.of(1, modulus)
    shift = max(0, -z.scaled_exp(scale)) + max(
        0, -(base / z).scaled_exp(scale)
    )
    w = cutoff + shift
    a = poch_scaled(z, modulus, None, w, scale)
    b = poch_scaled(base / z, modulus, None, w, scale)
    c = poch_scaled(base, modulus, None, w, scale)
    return (a * b * c).truncated(cutoff)


def eta_J(m, order, scale: int) -> TruncatedLaurentSeries:
    """J_m = (q^m; q^m)_oo."""
    m = Fraction(m)
    if m <= 0:
        raise ValueError("eta index must be positive")
    cutoff = int(Fraction(order) * scale)
    return poch_scaled(QMonomial.of(1, m), m, None, cutoff, scale)


def clear_caches():
    _poch_cached.cache_clear()
    _theta_sum_cached.cache_clear()
