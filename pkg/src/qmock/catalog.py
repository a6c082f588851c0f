"""Catalog of mock theta functions, two-parameter families, and
Appell-Lerch sums.

Single-argument entries are defined at base q and evaluated at a signed
base power: dilation d > 0 means the substitution q -> q^d, and d < 0
means q -> -q^|d|.  Two-parameter entries take a monomial first argument
in ambient units together with a positive base dilation.

Every entry records whether its bilateral companion (same general term
summed over all of Z) exists; the bilateral psi-series of the third-order
psi(q) does not converge q-adically (its negative-tail terms all have
valuation zero) and the sixth-order gamma(q) hits zero factors at
negative indices, so neither is available bilaterally.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import DegenerateSpecializationError, UnknownNameError
from .field import fe
from .hypergeom import SeriesFamily, atom, family, sum_family, term_valuation
from .oracles import enumerate_partitions
from .products import poch_scaled, theta_is_zero, theta_j
from .series import QMonomial, TruncatedLaurentSeries

Q = QMonomial.q
MONO = QMonomial.of


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    order_label: str
    arity: str  # "base" or "x-base"
    bilateral: bool
    note: str = ""


def _mk(start, quad, power=None, numer=(), denom=()):
    return family(start, quad, power, numer, denom)


# -- single-argument families at base q --------------------------------------
# builder: variant-independent (start applies to the unilateral form)

def _fam_f():
    return _mk(0, (1, 0, 0), denom=[atom(MONO(-1, 1), 1, 1, 0)] * 2)


def _fam_phi():
    return _mk(0, (1, 0, 0), denom=[atom(MONO(-1, 2), 2, 1, 0)])


def _fam_psi():
    return _mk(1, (1, 0, 0), denom=[atom(Q(1), 2, 1, 0)])


def _fam_chi():
    return _mk(
        0, (1, 0, 0),
        numer=[atom(MONO(-1, 1), 1, 1, 0)],
        denom=[atom(MONO(-1, 3), 3, 1, 0)],
    )


def _fam_omega():
    return _mk(0, (2, 2, 0), denom=[atom(Q(1), 2, 1, 1)] * 2)


def _fam_nu():
    return _mk(0, (1, 1, 0), denom=[atom(MONO(-1, 1), 2, 1, 1)])


def _fam_rho():
    return _mk(
        0, (2, 2, 0),
        numer=[atom(Q(1), 2, 1, 1)],
        denom=[atom(Q(3), 6, 1, 1)],
    )


def _fam_xi():
    return _mk(
        1, (6, -6, 1),
        denom=[atom(Q(1), 6, 1, 0), atom(Q(5), 6, 1, 0)],
    )


def _fam_sigma():
    return _mk(
        1, (3, -3, 0),
        denom=[atom(MONO(-1, 1), 3, 1, 0), atom(MONO(-1, 2), 3, 1, 0)],
    )


def _fam_gamma():
    return _mk(
        0, (1, 0, 0),
        numer=[atom(Q(1), 1, 1, 0)],
        denom=[atom(Q(3), 3, 1, 0)],
    )


def _fam_phi_minus():
    return _mk(
        1, (0, 1, 0),
        numer=[atom(MONO(-1, 1), 1, 2, -1)],
        denom=[atom(Q(1), 2, 1, 0)],
    )


def _fam_beta():
    return _mk(0, (3, 3, 1), denom=[atom(Q(1), 3, 1, 1), atom(Q(2), 3, 1, 1)])


def _fam_phi_cap():
    return _mk(
        0, (0, 1, 1),
        numer=[atom(MONO(-1, 1), 1, 2, 0)],
        denom=[atom(Q(1), 2, 1, 1)] * 2,
    )


def _fam_u0():
    return _mk(
        0, (1, 0, 0),
        numer=[atom(MONO(-1, 1), 2, 1, 0)],
        denom=[atom(MONO(-1, 4), 4, 1, 0)],
    )


def _fam_u1():
    return _mk(
        0, (1, 2, 1),
        numer=[atom(MONO(-1, 1), 2, 1, 0)],
        denom=[atom(MONO(-1, 2), 4, 1, 1)],
    )


def _fam_v1():
    return _mk(
        0, (2, 2, 1),
        numer=[atom(MONO(-1, 4), 4, 1, 0)],
        denom=[atom(Q(1), 2, 2, 2)],
    )


def _fam_a2():
    return _mk(
        0, (1, 2, 1),
        numer=[atom(MONO(-1, 1), 2, 1, 0)],
        denom=[atom(Q(1), 2, 1, 1)] * 2,
    )


def _fam_b2():
    return _mk(
        0, (1, 1, 0),
        numer=[atom(MONO(-1, 2), 2, 1, 0)],
        denom=[atom(Q(1), 2, 1, 1)] * 2,
    )


def _fam_mu():
    return _mk(
        0, (1, 0, 0), MONO(-1, 0),
        numer=[atom(Q(1), 2, 1, 0)],
        denom=[atom(MONO(-1, 2), 2, 1, 0)] * 2,
    )


def _fam_r2():
    return _mk(
        0, (1, 2, 0), MONO(-1, 0),
        numer=[atom(Q(1), 2, 1, 0)],
        denom=[atom(MONO(-1, 2), 2, 1, 0), atom(MONO(-1, 2), 2, 1, 1)],
    )


def _fam_f0():
    return _mk(0, (1, 0, 0), denom=[atom(MONO(-1, 1), 1, 1, 0)])


def _fam_psi0():
    return _mk(
        1, (Fraction(1, 2), Fraction(1, 2), 0),
        numer=[atom(MONO(-1, 1), 1, 1, -1)],
    )


def _fam_d5():
    return _mk(0, (0, 2, 0), numer=[atom(Q(1), 2, 1, 0)] * 2)


def _fam_m_other():
    return _mk(
        0, (1, 1, 0),
        denom=[atom(MONO(-1, 0), 1, 1, 1), atom(MONO(-1, 1), 1, 1, 1)],
    )


def _fam_n_other():
    return _mk(0, (6, 6, 1), denom=[atom(Q(1), 6, 1, 1), atom(Q(5), 6, 1, 1)])


def _finish_identity(value, cutoff, scale):
    return value


def _finish_xi(value, cutoff, scale):
    return TruncatedLaurentSeries.one(scale) + value.scalar_mul(2)


def _finish_r2(value, cutoff, scale):
    return value + value.monomial_mul(Q(1))


def _finish_d5(value, cutoff, scale):
    p = poch_scaled(Q(1), Fraction(2), None, cutoff, scale)
    return (value * (p * p).invert(cutoff)).truncated(cutoff)


_SINGLE = {
    # name: (order label, bilateral available, family builder, finisher, note)
    "f": ("3", True, _fam_f, _finish_identity, ""),
    "phi": ("3", True, _fam_phi, _finish_identity, ""),
    "psi": ("3", False, _fam_psi, _finish_identity,
            "bilateral series diverges q-adically"),
    "chi": ("3", True, _fam_chi, _finish_identity, ""),
    "omega": ("3", True, _fam_omega, _finish_identity, ""),
    "nu": ("3", True, _fam_nu, _finish_identity, ""),
    "rho": ("3", True, _fam_rho, _finish_identity, ""),
    "xi": ("3", True, _fam_xi, _finish_xi, "no relations; expansion only"),
    "sigma": ("3", True, _fam_sigma, _finish_identity, ""),
    "gamma": ("6", False, _fam_gamma, _finish_identity,
              "bilateral terms hit zero factors"),
    "phi_minus": ("6", True, _fam_phi_minus, _finish_identity, ""),
    "beta": ("6", True, _fam_beta, _finish_identity, ""),
    "Phi_cap": ("6", True, _fam_phi_cap, _finish_identity, ""),
    "U0": ("8", True, _fam_u0, _finish_identity, ""),
    "U1": ("8", True, _fam_u1, _finish_identity, ""),
    "V1": ("8", True, _fam_v1, _finish_identity, ""),
    "A": ("2", True, _fam_a2, _finish_identity, ""),
    "B": ("2", True, _fam_b2, _finish_identity, ""),
    "mu": ("2", True, _fam_mu, _finish_identity, ""),
    "R2": ("2", True, _fam_r2, _finish_identity, ""),
    "f0": ("5", True, _fam_f0, _finish_identity, ""),
    "psi0": ("5", False, _fam_psi0, _finish_identity,
             "companion of the f0 split; unilateral only"),
    "D5": ("other", False, _fam_d5, _finish_d5,
           "companion series in the omega_c split"),
    "M": ("other", True, _fam_m_other, _finish_identity, ""),
    "N": ("other", True, _fam_n_other, _finish_identity, ""),
}

_TWO_PARAM = ("g2", "g3", "R", "K", "K1", "S2")


def entries() -> list[CatalogEntry]:
    out = [
        CatalogEntry(name, label, "base", bilat, note)
        for name, (label, bilat, _, _, note) in _SINGLE.items()
    ]
    out += [
        CatalogEntry(name, "universal", "x-base", True, "")
        for name in _TWO_PARAM
    ]
    return out


def _as_bilateral(fam: SeriesFamily) -> SeriesFamily:
    return SeriesFamily(None, fam.quad, fam.power, fam.numer, fam.denom)


@lru_cache(maxsize=None)
def _eval_single_base_q(name, variant, cutoff, scale):
    label, bilat, builder, finisher, note = _SINGLE[name]
    fam = builder()
    if variant == "bilateral":
        if not bilat:
            raise DegenerateSpecializationError(
                f"{name} has no bilateral companion ({note})"
            )
        fam = _as_bilateral(fam)
    value = sum_family(fam, Fraction(cutoff, scale), scale)
    return finisher(value, cutoff, scale).truncated(cutoff)


def eval_named(
    name: str, variant: str, base: int, order, scale: int
) -> TruncatedLaurentSeries:
    """Evaluate a catalog function at base q^base (base < 0: -q^|base|)."""
    if name not in _SINGLE:
        raise UnknownNameError(f"unknown catalog name {name!r}")
    if variant not in ("unilateral", "bilateral"):
        raise ValueError(f"unknown variant {variant!r}")
    if base == 0:
        raise ValueError("base power must be nonzero")
    d = abs(base)
    cutoff = int(Fraction(order) * scale)
    base_cut = -(-cutoff // d)
    value = _eval_single_base_q(name, variant, base_cut, scale)
    if d != 1 or base < 0:
        value = value.compose_base(MONO(1 if base > 0 else -1, d))
    return value.truncated(cutoff)


# -- two-parameter families ---------------------------------------------------


def two_param_family(name: str, x: QMonomial, dilation: int) -> SeriesFamily:
    """Family of the named two-parameter function with base q^dilation and
    first argument x (an ambient monomial)."""
    M = Fraction(dilation)
    if M <= 0:
        raise ValueError("base dilation must be positive")
    qM = Q(M)
    if name == "g3":
        return _mk(0, (M, M, 0),
                   denom=[atom(x, M, 1, 1), atom(qM / x, M, 1, 1)])
    if name == "g2":
        return _mk(0, (M / 2, M / 2, 0),
                   numer=[atom(MONO(-1, M), M, 1, 0)],
                   denom=[atom(x, M, 1, 1), atom(qM / x, M, 1, 1)])
    if name == "R":
        return _mk(0, (M, 0, 0),
                   denom=[atom(x * qM, M, 1, 0), atom(qM / x, M, 1, 0)])
    if name == "K":
        return _mk(0, (M, 0, 0), MONO(-1, 0),
                   numer=[atom(qM, 2 * M, 1, 0)],
                   denom=[atom(x * qM ** 2, 2 * M, 1, 0),
                          atom(qM ** 2 / x, 2 * M, 1, 0)])
    if name == "K1":
        return _mk(0, (M, 2 * M, M), MONO(-1, 0),
                   numer=[atom(qM, 2 * M, 1, 0)],
                   denom=[atom(x * qM, 2 * M, 1, 1),
                          atom(qM / x, 2 * M, 1, 1)])
    if name == "S2":
        return _mk(0, (0, M, M),
                   numer=[atom(MONO(-1, M), M, 2, 0)],
                   denom=[atom(x * qM, 2 * M, 1, 1),
                          atom(qM / x, 2 * M, 1, 1)])
    raise UnknownNameError(f"unknown two-parameter name {name!r}")


@lru_cache(maxsize=None)
def _eval_two_param_cached(name, x, dilation, variant, cutoff, scale):
    fam = two_param_family(name, x, dilation)
    if variant == "bilateral":
        fam = _as_bilateral(fam)
    value = sum_family(fam, Fraction(cutoff, scale), scale)
    if name == "S2":
        pref = TruncatedLaurentSeries.one(scale) + x.inverse().as_series(scale)
        value = (pref * value).truncated(cutoff)
    return value.truncated(cutoff)


def eval_two_param(
    name: str, x: QMonomial, dilation: int, variant: str, order, scale: int
) -> TruncatedLaurentSeries:
    if name not in _TWO_PARAM:
        raise UnknownNameError(f"unknown two-parameter name {name!r}")
    if variant not in ("unilateral", "bilateral"):
        raise ValueError(f"unknown variant {variant!r}")
    cutoff = int(Fraction(order) * scale)
    return _eval_two_param_cached(name, x, dilation, variant, cutoff, scale)


# -- Appell-Lerch sums ---------------------------------------------------------


@dataclass(frozen=True)
class AppellLerchSpec:
    """m(x, q^dilation, z) with monomial x and z in ambient units."""

    x: QMonomial
    dilation: Fraction
    z: QMonomial

    def __post_init__(self):
        if Fraction(self.dilation) <= 0:
            raise ValueError("base dilation must be positive")


def _is_base_power(mono: QMonomial, modulus: Fraction) -> bool:
    return mono.coeff.is_one and (mono.exp / modulus).denominator == 1


def appell_lerch_m(
    spec: AppellLerchSpec, order, scale: int
) -> TruncatedLaurentSeries:
    """m(x,q,z) = (-z / j(z;q)) * sum_r (-1)^r q^(r(r+1)/2) z^r / (1 - q^r x z),
    with q replaced by q^dilation throughout."""
    cutoff = int(Fraction(order) * scale)
    return _appell_lerch_cached(spec.x, Fraction(spec.dilation), spec.z,
                                cutoff, scale)


@lru_cache(maxsize=None)
def _appell_lerch_cached(x, M, z, cutoff, scale):
    if _is_base_power(z, M):
        raise DegenerateSpecializationError(
            f"Appell-Lerch z = {z} is an integral power of the base"
        )
    xz = x * z
    if _is_base_power(xz, M):
        raise DegenerateSpecializationError(
            f"Appell-Lerch x*z = {xz} is an integral power of the base"
        )
    Ms = QMonomial.of(1, M).scaled_exp(scale)
    ez = z.scaled_exp(scale)
    exz = xz.scaled_exp(scale)

    # valuation of j(z; q^M): product over the three factors
    from .hypergeom import _atom_val

    vt = _atom_val(ez, Ms, None) + _atom_val(Ms - ez, Ms, None)

    def val(r: int) -> int:
        return Ms * (r * (r + 1) // 2) + r * ez + max(0, -(exz + Ms * r))

    # generous working window covering the division by j(z;q^M)
    vS = min(val(r) for r in range(-4, 5))
    work = cutoff + 2 * max(0, -vt) + max(0, -vS) + max(0, -ez) + 2 * Ms

    total = TruncatedLaurentSeries.zero(scale, work)

    def add_term(r: int) -> None:
        nonlocal total
        if val(r) > work:
            return
        num = QMonomial(z.coeff ** r * fe((-1) ** r),
                        M * Fraction(r * (r + 1), 2) + z.exp * r)
        w = xz * QMonomial.of(1, M * r)
        E = w.scaled_exp(scale)
        c = w.coeff
        if E == 0:
            total = total + num.as_series(scale).scalar_mul(
                (fe(1) - c).inverse()
            )
            return
        if E < 0:
            # 1/(1 - c q^E) = (-q^-E/c) / (1 - q^-E/c)
            num = num * QMonomial(-c.inverse(), Fraction(-E, scale))
            c, E = c.inverse(), -E
        dense_len = work - val(r) + 1
        term = num.as_series(scale)
        geo: dict[int, object] = {}
        acc = fe(1)
        e = 0
        while e <= dense_len:
            geo[e] = acc
            acc = acc * c
            e += E
        term = term * TruncatedLaurentSeries(scale, geo, dense_len)
        total = total + term.truncated(work)

    r = 0
    while True:
        inside = val(r) <= work
        add_term(r)
        if not inside and Ms * (r + 1) + ez >= 0 and exz + Ms * r >= 0:
            break
        r += 1
    r = -1
    while True:
        inside = val(r) <= work
        add_term(r)
        if not inside and Ms * (r - 1) + ez <= 0 and exz + Ms * r <= 0:
            break
        r -= 1

    theta = theta_j(z, M, Fraction(work, scale), scale)
    out = total.monomial_mul(z).scalar_mul(-1) * theta.invert(cutoff + 2 * abs(vt))
    return out.truncated(cutoff)


# -- auxiliary summation shapes used by the transform identities ---------------


def _interleaved_families(a, c, z, lo: bool):
    two = Fraction(2)
    if lo:
        ev_args = (a * c * Q(1), c / a)
        od_args = (a * c * Q(2), c * Q(1) / a)
    else:
        ev_args = (a * c, c * Q(1) / a)
        od_args = (a * c * Q(1), c * Q(2) / a)
    even = family(None, (2, 0, 0), z ** 2,
                  denom=[atom(ev_args[0], two, 1, 0), atom(ev_args[1], two, 1, 0)])
    odd = family(None, (2, 2, Fraction(1, 2)), z ** 2,
                 denom=[atom(od_args[0], two, 1, 0), atom(od_args[1], two, 1, 0)])
    return ev_args, even, od_args, odd


def interleaved_product_sum(
    a: QMonomial, c: QMonomial, z: QMonomial, lo: bool, order, scale: int
) -> TruncatedLaurentSeries:
    """sum over n in Z of (a*c*q^(n+1), c*q^n/a; q^2)_oo z^n q^(n^2/2) when
    lo, and of (a*c*q^n, c*q^(n+1)/a; q^2)_oo z^n q^(n^2/2) otherwise,
    evaluated by splitting the index by parity."""
    cutoff = int(Fraction(order) * scale)
    ev_args, even, od_args, odd = _interleaved_families(a, c, z, lo)
    two = Fraction(2)

    def prefactor(args, extra=None):
        shift = sum(min(0, x.scaled_exp(scale)) for x in args)
        w = cutoff + max(0, -shift) + (0 if extra is None else
                                       max(0, -extra.scaled_exp(scale)))
        p = poch_scaled(args[0], two, None, w, scale)
        p = p * poch_scaled(args[1], two, None, w, scale)
        return p if extra is None else p.monomial_mul(extra)

    ev = prefactor(ev_args) * sum_family(even, Fraction(cutoff, scale), scale)
    od_extra = z * Q(Fraction(1, 2))
    od = prefactor(od_args, od_extra) * sum_family(
        odd, Fraction(cutoff, scale), scale
    )
    return (ev + od).truncated(cutoff)


def recip_pair_sum(a: QMonomial, c: QMonomial) -> SeriesFamily:
    """sum over n >= 0 of (a, 1/a; q)_n q^(n(n-1)/2) c^n / ((q^2;q^2)_n (c;q)_n)."""
    return family(
        0, (Fraction(1, 2), Fraction(-1, 2), 0), c,
        numer=[atom(a, 1, 1, 0), atom(a.inverse(), 1, 1, 0)],
        denom=[atom(Q(2), 2, 1, 0), atom(c, 1, 1, 0)],
    )


def recip_pair_geom_sum(a: QMonomial, u: QMonomial) -> SeriesFamily:
    """sum over n >= 0 of (a, 1/a; q)_n u^n / (q^2; q^2)_n."""
    return family(
        0, (0, 0, 0), u,
        numer=[atom(a, 1, 1, 0), atom(a.inverse(), 1, 1, 0)],
        denom=[atom(Q(2), 2, 1, 0)],
    )


# -- partition rank oracle ------------------------------------------------------


def partition_rank_table(n_max: int) -> dict[int, dict[int, int]]:
    """N(m, n) for n <= n_max by brute-force enumeration."""
    return enumerate_partitions(n_max)


def rank_generating_check(c, n_max: int, scale: int) -> bool:
    """sum_m N(m,n) c^m must equal the q^n coefficient of R(c, q)."""
    table = partition_rank_table(n_max)
    cf = fe(c)
    series = eval_two_param(
        "R", QMonomial.of(c, 0), 1, "unilateral", n_max, scale
    )
    for n in range(n_max + 1):
        acc = fe(0)
        for m, cnt in table[n].items():
            acc = acc + (cf ** m) * cnt
        if series.coefficient(n) != acc:
            return False
    return True


def bilateral_families_for_oracle() -> list[tuple[str, SeriesFamily]]:
    """Every bilateral catalog family, for engine-vs-oracle agreement runs."""
    out = []
    for name, (label, bilat, builder, _fin, _note) in _SINGLE.items():
        if bilat:
            out.append((f"{name}_c", _as_bilateral(builder())))
    x = MONO(2, 0)
    for name in _TWO_PARAM:
        out.append((f"{name}_c(2)", _as_bilateral(two_param_family(name, x, 1))))
    return out
