"""Certified summation of unilateral and bilateral q-series.

A SeriesFamily describes the general term

    q^(alpha*n^2 + beta*n + gamma) * u^n * prod(numer) / prod(denom)

where each numerator/denominator entry is a shifted factorial
(arg; q^modulus)_(slope*n + offset) with a fixed monomial argument, or the
corresponding infinite product.  Division by (b; q^M)_m is performed as
multiplication by (b*q^(M*m); q^M)_(-m), so no wholesale series inversion
ever happens inside a term.

Convergence is decided symbolically.  Every shifted-factorial value has an
exactly computable q-valuation; on each tail the total term valuation is
eventually an exact quadratic A*t^2 + B*t + C in the tail step t, whose
coefficients are assembled per atom.  A tail is q-adically convergent when
A > 0, or A = 0 and B > 0.  The cutoff certificate records, per tail, the
quadratic and the index beyond which no term can touch any exponent at or
below the truncation order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    DegenerateSpecializationError,
    DivergentTailError,
    PoleInTermError,
)
from .field import fe
from .series import QMonomial, TruncatedLaurentSeries
from .products import poch_scaled

_ALLOWED_SLOPES = (-2, -1, 0, 1, 2)


@dataclass(frozen=True)
class FamilyAtom:
    """(arg; q^modulus)_count with count = slope*n + offset, or infinite."""

    arg: QMonomial
    modulus: Fraction
    slope: int = 0
    offset: int = 0
    infinite: bool = False

    def __post_init__(self):
        if Fraction(self.modulus) <= 0:
            raise ValueError("atom modulus must be positive")
        if self.slope not in _ALLOWED_SLOPES:
            raise ValueError(f"unsupported count slope {self.slope}")

    def count(self, n: int) -> int | None:
        return None if self.infinite else self.slope * n + self.offset


def atom(arg, modulus, slope=0, offset=0, infinite=False) -> FamilyAtom:
    if not isinstance(arg, QMonomial):
        arg = QMonomial.of(arg)
    return FamilyAtom(arg, Fraction(modulus), slope, offset, infinite)


@dataclass(frozen=True)
class SeriesFamily:
    """Term-indexed description of a unilateral or bilateral sum."""

    start: int | None  # n >= start, or None for a bilateral sum over Z
    quad: tuple[Fraction, Fraction, Fraction]
    power: QMonomial
    numer: tuple[FamilyAtom, ...] = ()
    denom: tuple[FamilyAtom, ...] = ()

    @property
    def bilateral(self) -> bool:
        return self.start is None


def family(
    start,
    quad=(0, 0, 0),
    power: QMonomial | None = None,
    numer=(),
    denom=(),
) -> SeriesFamily:
    a, b, c = (Fraction(x) for x in quad)
    return SeriesFamily(
        start,
        (a, b, c),
        power if power is not None else QMonomial.one(),
        tuple(numer),
        tuple(denom),
    )


# ---------------------------------------------------------------------------
# exact valuations
# ---------------------------------------------------------------------------


def _atom_val(E: int, M: int, count: int | None) -> int:
    """Exact q-valuation (scaled) of (c*q^(E); q^M)_count for c without
    accidental cancellation; zero factors are the caller's concern."""
    if count is None or count >= 0:
        t_all = 0 if E >= 0 else (-E + M - 1) // M
        t = t_all if count is None else min(count, t_all)
        return t * E + M * t * (t - 1) // 2
    k = -count
    j0 = 0 if E <= 0 else min(k, E // M)
    g = (k - j0) * E - M * (k * (k + 1) - j0 * (j0 + 1)) // 2
    return -g


def _scaled(x: Fraction, scale: int) -> int:
    v = Fraction(x) * scale
    if v.denominator != 1:
        raise ValueError(f"exponent {x} is not a multiple of 1/{scale}")
    return int(v)


def term_valuation(fam: SeriesFamily, n: int, scale: int) -> int:
    """Exact scaled q-valuation of the n-th term (poles not considered)."""
    a, b, c = fam.quad
    v = _scaled(a * n * n + b * n + c, scale)
    v += n * _scaled(fam.power.exp, scale)
    for at in fam.numer:
        E = at.arg.scaled_exp(scale)
        M = _scaled(at.modulus, scale)
        v += _atom_val(E, M, at.count(n))
    for at in fam.denom:
        E = at.arg.scaled_exp(scale)
        M = _scaled(at.modulus, scale)
        v -= _atom_val(E, M, at.count(n))
    return v


# ---------------------------------------------------------------------------
# degeneracy scan
# ---------------------------------------------------------------------------


def _zero_factor_reachable(fam, at: FamilyAtom, scale, reciprocal_only):
    """Whether some term's factor range contains an exactly zero factor."""
    if not at.arg.coeff.is_one:
        return None
    E = at.arg.scaled_exp(scale)
    M = _scaled(at.modulus, scale)

    def counts_reach_at_least(m):  # some n in range with count(n) >= m
        if at.infinite:
            return True
        if at.slope != 0:
            return fam.start is None or at.slope > 0 or (
                at.slope * fam.start + at.offset >= m
            )
        return at.offset >= m
    # zero direct factor: arg * q^(j*M) = 1 with 0 <= j < count
    if E <= 0 and (-E) % M == 0:
        j = (-E) // M
        if not reciprocal_only and counts_reach_at_least(j + 1):
            return f"direct factor (1 - q^0) at j={j}"
        if reciprocal_only and at.infinite:
            return f"zero factor in infinite product at j={j}"

    def counts_reach_at_most(m):  # some n in range with count(n) <= m
        if at.infinite:
            return False
        if at.slope != 0:
            return fam.start is None or at.slope < 0 or (
                at.slope * fam.start + at.offset <= m
            )
        return at.offset <= m
    # zero reciprocal factor: arg / q^(j*M) = 1 with 1 <= j <= -count
    if E > 0 and E % M == 0:
        j = E // M
        if counts_reach_at_most(-j):
            return f"reciprocal factor (1 - q^0) at j={j}"
    return None


def check_specialization(fam: SeriesFamily, scale: int) -> None:
    """Reject families whose index range hits an exactly zero factor in a
    reciprocal position (denominator, or negative-count numerator)."""
    for at in fam.denom:
        why = _zero_factor_reachable(fam, at, scale, reciprocal_only=False)
        if why:
            raise DegenerateSpecializationError(
                f"denominator ({at.arg}; q^{at.modulus}) degenerate: {why}"
            )
    for at in fam.numer:
        why = _zero_factor_reachable(fam, at, scale, reciprocal_only=True)
        if why:
            raise DegenerateSpecializationError(
                f"numerator ({at.arg}; q^{at.modulus}) degenerate: {why}"
            )


# ---------------------------------------------------------------------------
# tail profiles and the cutoff certificate
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TailProfile:
    """Exact valuation quadratic A*t^2 + B*t + C valid for tail step
    t >= stable (n = sigma*t)."""

    sigma: int
    A: Fraction
    B: Fraction
    C: Fraction
    stable: int

    def value(self, t: int) -> Fraction:
        return self.A * t * t + self.B * t + self.C


def _tail_profile(fam: SeriesFamily, sigma: int, scale: int) -> TailProfile:
    a, b, c = fam.quad
    A = Fraction(a) * scale
    B = Fraction(b) * scale * sigma
    C = Fraction(c) * scale
    B += sigma * _scaled(fam.power.exp, scale)
    stable = 1
    for at, sign in [(x, 1) for x in fam.numer] + [(x, -1) for x in fam.denom]:
        E = at.arg.scaled_exp(scale)
        M = _scaled(at.modulus, scale)
        if at.infinite:
            C += sign * _atom_val(E, M, None)
            continue
        sl = at.slope * sigma
        if sl == 0:
            C += sign * _atom_val(E, M, at.offset)
            continue
        if sl > 0:
            # count -> +oo: valuation settles at the full-product value
            t_neg = 0 if E >= 0 else (-E + M - 1) // M
            C += sign * _atom_val(E, M, None)
            stable = max(stable, -((at.offset - t_neg) // sl))
            continue
        # count -> -oo with k(t) = pp*t - offset reciprocal factors
        pp = -sl
        j0 = 0 if E <= 0 else max(0, E // M)
        c2 = Fraction(M, 2)
        c1 = Fraction(M, 2) - E
        c0 = j0 * E - Fraction(M * j0 * (j0 + 1), 2)
        r = at.offset
        A += sign * c2 * pp * pp
        B += sign * (c1 * pp - 2 * c2 * pp * r)
        C += sign * (c2 * r * r - c1 * r + c0)
        kmin = max(j0, 1)
        stable = max(stable, -((-(kmin + r)) // pp))
    return TailProfile(sigma, A, B, C, stable)


def _tail_cut(profile: TailProfile, target: int) -> int:
    """Smallest t0 >= stable with profile.value(t) > target for all t >= t0."""
    A, B, C = profile.A, profile.B, profile.C
    if A > 0:
        vertex = -B / (2 * A)
        t = max(profile.stable, -(-int(vertex) // 1))
        t = max(t, int(vertex) + 1)
        while profile.value(t) <= target:
            t += 1
        return t
    if A == 0 and B > 0:
        need = (Fraction(target) - C) / B
        return max(profile.stable, int(need) + 1)
    tail = "positive" if profile.sigma > 0 else "negative"
    raise DivergentTailError(tail, (profile.A, profile.B))


@dataclass(frozen=True)
class CutoffCertificate:
    """Window [n_lo, n_hi]; every omitted term has valuation > order."""

    n_lo: int
    n_hi: int
    pos: TailProfile
    neg: TailProfile | None


def certify(fam: SeriesFamily, cutoff: int, scale: int) -> CutoffCertificate:
    pos = _tail_profile(fam, 1, scale)
    n_hi = _tail_cut(pos, cutoff)
    if fam.bilateral:
        neg = _tail_profile(fam, -1, scale)
        n_lo = -_tail_cut(neg, cutoff)
    else:
        neg = None
        n_lo = fam.start
        n_hi = max(n_hi, n_lo)
    return CutoffCertificate(n_lo, n_hi, pos, neg)


# ---------------------------------------------------------------------------
# term evaluation and summation
# ---------------------------------------------------------------------------


def _term_scaled(
    fam: SeriesFamily, n: int, cutoff: int, scale: int
) -> TruncatedLaurentSeries:
    vn = term_valuation(fam, n, scale)
    a, b, c = fam.quad
    exp = a * n * n + b * n + c + fam.power.exp * n
    mono = QMonomial(fam.power.coeff ** n, exp)
    out = mono.as_series(scale)
    factors: list[tuple[QMonomial, Fraction, int | None]] = []
    for at in fam.numer:
        factors.append((at.arg, at.modulus, at.count(n)))
    for at in fam.denom:
        cnt = at.count(n)
        if cnt is None:
            raise DegenerateSpecializationError(
                "infinite product in a denominator is not supported"
            )
        # 1/(b; q^M)_m = (b*q^(M*m); q^M)_(-m)
        shifted = at.arg * QMonomial.of(1, at.modulus * cnt)
        factors.append((shifted, at.modulus, -cnt))
    try:
        for arg, modulus, cnt in factors:
            E = arg.scaled_exp(scale)
            M = _scaled(modulus, scale)
            vj = _atom_val(E, M, cnt)
            out = out * poch_scaled(arg, modulus, cnt, cutoff - vn + vj, scale)
    except DegenerateSpecializationError as exc:
        raise PoleInTermError(n, str(exc)) from exc
    if not out.is_zero and out.valuation_scaled() != vn:
        raise AssertionError(
            f"term valuation mismatch at n={n}: "
            f"predicted {vn}, got {out.valuation_scaled()}"
        )
    if out.cutoff < cutoff:
        raise AssertionError(f"term at n={n} lost precision: {out.cutoff} < {cutoff}")
    return out


def term_at(fam: SeriesFamily, n: int, order, scale: int) -> TruncatedLaurentSeries:
    """One exact summand, truncated at the ambient order."""
    cutoff = int(Fraction(order) * scale)
    return _term_scaled(fam, n, cutoff, scale).truncated(cutoff)


def sum_family(
    fam: SeriesFamily, order, scale: int, oracle: bool = False
) -> TruncatedLaurentSeries:
    """Sum a family to the ambient order with a certified index window."""
    cutoff = int(Fraction(order) * scale)
    check_specialization(fam, scale)
    cert = certify(fam, cutoff, scale)
    total = TruncatedLaurentSeries.zero(scale, cutoff)
    for n in range(cert.n_lo, cert.n_hi + 1):
        if term_valuation(fam, n, scale) > cutoff:
            continue
        total = total + _term_scaled(fam, n, cutoff, scale)
    total = total.truncated(cutoff)
    if oracle and fam.bilateral:
        from .oracles import naive_bilateral

        margin = max(abs(cert.n_lo), abs(cert.n_hi)) + 5
        check = naive_bilateral(fam, margin, order, scale)
        if check.equal_to_order(total, Fraction(cutoff, scale)) is not None:
            raise AssertionError("bilateral engine disagrees with naive oracle")
    return total


def sum_bilateral(fam: SeriesFamily, order, scale: int) -> TruncatedLaurentSeries:
    if not fam.bilateral:
        raise ValueError("sum_bilateral requires a bilateral family")
    return sum_family(fam, order, scale)


def sum_unilateral(fam: SeriesFamily, order, scale: int) -> TruncatedLaurentSeries:
    if fam.bilateral:
        raise ValueError("sum_unilateral requires a unilateral family")
    return sum_family(fam, order, scale)


# ---------------------------------------------------------------------------
# classical series shapes
# ---------------------------------------------------------------------------


def bilateral_psi(
    upper: list[QMonomial], lower: list[QMonomial], modulus, z: QMonomial
) -> SeriesFamily:
    """r-psi-s: term (a_1..a_r; q^M)_n / (b_1..b_s; q^M)_n
    [(-1)^n q^(M*C(n,2))]^(s-r) z^n over all n in Z."""
    modulus = Fraction(modulus)
    d = len(lower) - len(upper)
    quad = (Fraction(d) * modulus / 2, -Fraction(d) * modulus / 2, Fraction(0))
    power = QMonomial(z.coeff * fe((-1) ** d), z.exp)
    return family(
        None,
        quad,
        power,
        numer=[atom(a, modulus, 1, 0) for a in upper],
        denom=[atom(b, modulus, 1, 0) for b in lower],
    )


def unilateral_phi(
    upper: list[QMonomial], lower: list[QMonomial], modulus, z: QMonomial
) -> SeriesFamily:
    """r-phi-s: term (a_1..a_r; q^M)_n / ((q^M, b_1..b_s; q^M)_n)
    [(-1)^n q^(M*C(n,2))]^(1+s-r) z^n over n >= 0."""
    modulus = Fraction(modulus)
    d = 1 + len(lower) - len(upper)
    quad = (Fraction(d) * modulus / 2, -Fraction(d) * modulus / 2, Fraction(0))
    power = QMonomial(z.coeff * fe((-1) ** d), z.exp)
    denom = [atom(QMonomial.q(modulus), modulus, 1, 0)]
    denom += [atom(b, modulus, 1, 0) for b in lower]
    return family(
        0,
        quad,
        power,
        numer=[atom(a, modulus, 1, 0) for a in upper],
        denom=denom,
    )
