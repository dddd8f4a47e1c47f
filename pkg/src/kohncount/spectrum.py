"""Exact point spectrum of the Kohn Laplacian on functions on S^{2n-1}.

Eigenvalues are 2q(p+n-1) over bidegrees (p, q) with q >= 1; multiplicities
are dimensions of the spherical-harmonic spaces H_{p,q}. Counting functions
are evaluated in exact integer arithmetic under two conventions that differ
in whether the boundary eigenspaces H_{0,q} are included (``full_spectrum``)
or dropped by the p >= n divisor restriction (``paper_restricted``).
"""

from __future__ import annotations

import csv
import enum
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

from .exact import binomial

__all__ = [
    "CountingConvention",
    "SpectrumEntry",
    "CountingResult",
    "validate_sphere_n",
    "hpq_dim",
    "eigenvalue",
    "f_value",
    "delta_M",
    "count_M",
    "count_N",
    "spectrum_table",
    "write_spectrum_csv",
    "read_spectrum_csv",
]


class CountingConvention(enum.Enum):
    """Divisor-restriction convention for the counting functions.

    ``PAPER_RESTRICTED`` sums f(p, q) over divisors p >= n, which drops the
    H_{0,q} eigenspaces; ``FULL_SPECTRUM`` keeps every eigenspace with q >= 1
    (divisors p >= n-1).
    """

    PAPER_RESTRICTED = "paper_restricted"
    FULL_SPECTRUM = "full_spectrum"

    @classmethod
    def from_name(cls, name: str) -> "CountingConvention":
        key = name.strip().lower()
        aliases = {
            "paper": cls.PAPER_RESTRICTED,
            "paper_restricted": cls.PAPER_RESTRICTED,
            "paper-restricted": cls.PAPER_RESTRICTED,
            "full": cls.FULL_SPECTRUM,
            "full_spectrum": cls.FULL_SPECTRUM,
            "full-spectrum": cls.FULL_SPECTRUM,
        }
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown convention {name!r}") from None


@dataclass(frozen=True)
class SpectrumEntry:
    eigenvalue: int
    multiplicity: int


@dataclass(frozen=True)
class CountingResult:
    lam: float
    count: int
    convention: CountingConvention


def validate_sphere_n(n: int) -> int:
    """Sphere parameter n for S^{2n-1} in C^n; the formulas need n >= 2."""
    if not isinstance(n, int) or n < 2:
        raise ValueError("sphere parameter n must be an integer >= 2")
    return n


def hpq_dim(n: int, p: int, q: int) -> int:
    """dim H_{p,q}(S^{2n-1}) for bidegree (p, q), both >= 0.

    C(n+p-1, p) C(n+q-1, q) - C(n+p-2, p-1) C(n+q-2, q-1); the zero-binomial
    conventions make p = 0 and q = 0 come out right.
    """
    validate_sphere_n(n)
    if p < 0 or q < 0:
        raise ValueError("bidegrees must be >= 0")
    return binomial(n + p - 1, p) * binomial(n + q - 1, q) - binomial(
        n + p - 2, p - 1
    ) * binomial(n + q - 2, q - 1)


def eigenvalue(n: int, p: int, q: int) -> int:
    """Eigenvalue 2q(p+n-1) on the bidegree-(p, q) harmonics."""
    validate_sphere_n(n)
    if p < 0 or q < 0:
        raise ValueError("bidegrees must be >= 0")
    return 2 * q * (p + n - 1)


@dataclass(frozen=True)
class FValue:
    """Reindexed eigenspace dimension f(p, q) = f1 + f2.

    f1 = C(p-1, n-2) C(q+n-2, n-1) and f2 = C(p, n-1) C(q+n-2, n-2); for
    p >= n-1 the total equals dim H_{p-n+1, q}. The product form avoids the
    0/0 of the division form at p = n-1.
    """

    total: int
    f1: int
    f2: int


def f_value(n: int, p: int, q: int) -> FValue:
    validate_sphere_n(n)
    if q < 1:
        raise ValueError("q must be >= 1")
    f1 = binomial(p - 1, n - 2) * binomial(q + n - 2, n - 1)
    f2 = binomial(p, n - 1) * binomial(q + n - 2, n - 2)
    return FValue(f1 + f2, f1, f2)


def _divisor_floor(conv: CountingConvention, n: int) -> int:
    return n if conv is CountingConvention.PAPER_RESTRICTED else n - 1


def delta_M(n: int, m: int, conv: CountingConvention) -> int:
    """Multiplicity of the eigenvalue 2m: sum of f(p, m/p) over divisors p.

    Divisors are restricted to p >= n (paper_restricted) or p >= n-1
    (full_spectrum).
    """
    validate_sphere_n(n)
    if m < 1:
        raise ValueError("m must be >= 1")
    pmin = _divisor_floor(conv, n)
    total = 0
    d = 1
    while d * d <= m:
        if m % d == 0:
            if d >= pmin:
                total += f_value(n, d, m // d).total
            other = m // d
            if other != d and other >= pmin:
                total += f_value(n, other, d).total
        d += 1
    return total


def _q_sums(n: int, Q: int) -> tuple[int, int]:
    # Collapsed inner q-sums: A(Q) = sum_{q<=Q} C(q+n-2, n-1) = C(Q+n-1, n)
    # and B(Q) = sum_{q<=Q} C(q+n-2, n-2) = C(Q+n-1, n-1) - 1 (hockey stick).
    return math.comb(Q + n - 1, n), math.comb(Q + n - 1, n - 1) - 1


def _count_block_range(n: int, X: int, p_lo: int, p_hi: int) -> int:
    """Sum of f(p, q) over p in [p_lo, p_hi], q <= X//p, exactly.

    Iterates the O(sqrt X) blocks on which Q = X//p is constant and collapses
    each block's p-sum with a second hockey-stick identity, so both loops of
    the transposed double sum are in closed form.
    """
    total = 0
    p = p_lo
    while p <= p_hi:
        Q = X // p
        p2 = min(X // Q, p_hi)
        A, B = _q_sums(n, Q)
        # sum_{p'=p}^{p2} C(p'-1, n-2) and sum_{p'=p}^{p2} C(p', n-1)
        s1 = math.comb(p2, n - 1) - math.comb(p - 1, n - 1)
        s2 = math.comb(p2 + 1, n) - math.comb(p, n)
        total += A * s1 + B * s2
        p = p2 + 1
    return total


def _count_linear_range(n: int, X: int, p_lo: int, p_hi: int) -> int:
    """Reference per-p loop (O(X) with O(1) work per p); used as a cross-check."""
    total = 0
    for p in range(p_lo, p_hi + 1):
        A, B = _q_sums(n, X // p)
        total += binomial(p - 1, n - 2) * A + binomial(p, n - 1) * B
    return total


def count_M(
    n: int,
    x: float,
    conv: CountingConvention,
    workers: int = 1,
) -> int:
    """M(x) = number of eigenvalues <= 2x, exactly.

    Transposed form of the cumulative divisor sum: sum over p >= n (or n-1)
    of the collapsed inner q-sum with q <= floor(x)/p. With ``workers`` > 1
    the p-range is partitioned and partial sums are combined; integer
    addition makes the result identical to the serial run.
    """
    validate_sphere_n(n)
    if x < 0:
        raise ValueError("x must be >= 0")
    X = math.floor(x)
    pmin = _divisor_floor(conv, n)
    if X < pmin:
        return 0
    if workers <= 1 or X - pmin < 1024:
        return _count_block_range(n, X, pmin, X)
    bounds = [pmin + (X - pmin + 1) * i // workers for i in range(workers + 1)]
    chunks = [
        (n, X, lo, hi - 1) for lo, hi in zip(bounds, bounds[1:]) if lo < hi
    ]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        partials = pool.map(_count_chunk, chunks)
        return sum(partials)


def _count_chunk(args: tuple[int, int, int, int]) -> int:
    return _count_block_range(*args)


def count_N(
    n: int, lam: float, conv: CountingConvention, workers: int = 1
) -> CountingResult:
    """N(lambda) = number of positive eigenvalues <= lambda, with multiplicity.

    Equals M(lambda/2) since every eigenvalue is an even integer. The zero
    eigenvalue (q = 0, the infinite-dimensional space of CR functions) is
    never counted.
    """
    if lam < 0:
        raise ValueError("lambda must be >= 0")
    count = count_M(n, lam / 2, conv, workers=workers)
    return CountingResult(lam=lam, count=count, convention=conv)


def spectrum_table(
    n: int, lambda_max: float, conv: CountingConvention
) -> list[SpectrumEntry]:
    """All (eigenvalue, multiplicity) pairs with 0 < eigenvalue <= lambda_max."""
    validate_sphere_n(n)
    if lambda_max < 2:
        raise ValueError("lambda_max must be >= 2")
    entries = []
    for m in range(1, math.floor(lambda_max / 2) + 1):
        mult = delta_M(n, m, conv)
        if mult > 0:
            entries.append(SpectrumEntry(eigenvalue=2 * m, multiplicity=mult))
    return entries


def write_spectrum_csv(entries: Sequence[SpectrumEntry], stream: TextIO) -> None:
    """CSV export: header ``eigenvalue,multiplicity,cumulative``, ascending."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["eigenvalue", "multiplicity", "cumulative"])
    cumulative = 0
    for entry in entries:
        cumulative += entry.multiplicity
        writer.writerow([entry.eigenvalue, entry.multiplicity, cumulative])


def read_spectrum_csv(stream: Iterable[str]) -> list[SpectrumEntry]:
    reader = csv.reader(stream)
    header = next(reader)
    if header != ["eigenvalue", "multiplicity", "cumulative"]:
        raise ValueError(f"unexpected spectrum CSV header: {header}")
    return [
        SpectrumEntry(eigenvalue=int(ev), multiplicity=int(mult))
        for ev, mult, _ in reader
    ]
