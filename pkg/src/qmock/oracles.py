"""Brute-force baselines used for differential testing.

These deliberately avoid the clever parts of the engine: the bilateral
oracle sums every index in a wide symmetric window with no valuation
skipping, and the partition oracle enumerates actual partitions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .hypergeom import SeriesFamily, certify, check_specialization, _term_scaled
from .series import TruncatedLaurentSeries


@dataclass(frozen=True)
class OracleConfig:
    naive_range: int = 25
    n_max: int = 30


def naive_bilateral(
    fam: SeriesFamily, R: int, order, scale: int
) -> TruncatedLaurentSeries:
    """Plain loop over n in [-R, R]; must match the certified engine."""
    if not fam.bilateral:
        raise ValueError("naive_bilateral requires a bilateral family")
    cutoff = int(Fraction(order) * scale)
    check_specialization(fam, scale)
    cert = certify(fam, cutoff, scale)  # same convergence contract
    if R < cert.n_hi or -R > cert.n_lo:
        raise ValueError(
            f"oracle range {R} does not cover certified window "
            f"[{cert.n_lo}, {cert.n_hi}]"
        )
    total = TruncatedLaurentSeries.zero(scale, cutoff)
    for n in range(-R, R + 1):
        total = total + _term_scaled(fam, n, cutoff, scale)
    return total.truncated(cutoff)


def _partitions(n: int, max_part: int):
    if n == 0:
        yield []
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in _partitions(n - first, first):
            yield [first] + rest


def enumerate_partitions(n_max: int) -> dict[int, dict[int, int]]:
    """Rank table N(m, n) by exhaustive enumeration, n <= n_max <= 30.

    The rank of a partition is its largest part minus its number of parts;
    the empty partition has rank 0.
    """
    if n_max > 30:
        raise ValueError("partition enumeration is desk-scale: n_max <= 30")
    table: dict[int, dict[int, int]] = {0: {0: 1}}
    for n in range(1, n_max + 1):
        row: dict[int, int] = {}
        for p in _partitions(n, n):
            m = p[0] - len(p)
            row[m] = row.get(m, 0) + 1
        table[n] = row
    return table
