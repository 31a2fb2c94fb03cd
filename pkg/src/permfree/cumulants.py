"""Free and Boolean moment-cumulant transforms and the Wick formulas.

Everything here is exact: inputs are coerced to :class:`fractions.Fraction`
and no floating point is involved.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Callable, Hashable, Mapping, Sequence, Union

from .partitions import (
    PairPartition,
    enumerate_intervals,
    enumerate_nc,
    enumerate_nc2,
    enumerate_pairings,
    interval_pairing,
)

Kernel = Union[Callable[[Hashable, Hashable], Fraction], Mapping]


def _frac_list(values) -> list[Fraction]:
    return [Fraction(v) for v in values]


def _compositions_product(m: Sequence[Fraction], total: int, parts: int) -> Fraction:
    # sum over i_1+...+i_parts = total (i_j >= 0) of m_{i_1}...m_{i_parts}, m_0 = 1
    table = [Fraction(0)] * (total + 1)
    table[0] = Fraction(1)
    for _ in range(parts):
        new = [Fraction(0)] * (total + 1)
        for t, val in enumerate(table):
            if val:
                for i in range(total - t + 1):
                    new[t + i] += val * m[i]
        table = new
    return table[total]


def moments_from_free_cumulants(kappa: Sequence) -> list[Fraction]:
    """Moments ``m_1..m_K`` of a single variable with free cumulants ``kappa``.

    Uses the first-block decomposition of ``NC(n)``: the block containing 1
    has size ``s`` and the ``s`` gaps it leaves carry arbitrary moments.
    """
    kappa = _frac_list(kappa)
    m = [Fraction(1)]
    for n in range(1, len(kappa) + 1):
        m.append(sum((kappa[s - 1] * _compositions_product(m, n - s, s) for s in range(1, n + 1)), Fraction(0)))
    return m[1:]


def free_cumulants_from_moments(moments: Sequence) -> list[Fraction]:
    """Inverse of :func:`moments_from_free_cumulants`."""
    moments = _frac_list(moments)
    m = [Fraction(1)] + moments
    kappa: list[Fraction] = []
    for n in range(1, len(moments) + 1):
        rest = sum((kappa[s - 1] * _compositions_product(m, n - s, s) for s in range(1, n)), Fraction(0))
        kappa.append(m[n] - rest)
    return kappa


def moments_from_boolean_cumulants(b: Sequence) -> list[Fraction]:
    """Moments from Boolean cumulants via ``m_n = sum_s b_s m_{n-s}``."""
    b = _frac_list(b)
    m = [Fraction(1)]
    for n in range(1, len(b) + 1):
        m.append(sum((b[s - 1] * m[n - s] for s in range(1, n + 1)), Fraction(0)))
    return m[1:]


def boolean_cumulants_from_moments(moments: Sequence) -> list[Fraction]:
    moments = _frac_list(moments)
    m = [Fraction(1)] + moments
    b: list[Fraction] = []
    for n in range(1, len(moments) + 1):
        b.append(m[n] - sum((b[s - 1] * m[n - s] for s in range(1, n)), Fraction(0)))
    return b


# -- multivariate cumulants from a moment functional ----------------------


@lru_cache(maxsize=None)
def _proper_nc(n: int):
    return [p.blocks for p in enumerate_nc(n) if len(p.blocks) > 1]


@lru_cache(maxsize=None)
def _proper_intervals(n: int):
    return [p.blocks for p in enumerate_intervals(n) if len(p.blocks) > 1]


def _cumulant(word, moment, partitions_of, cache):
    word = tuple(word)
    if word in cache:
        return cache[word]
    value = Fraction(moment(word))
    for blocks in partitions_of(len(word)):
        term = Fraction(1)
        for block in blocks:
            term *= _cumulant([word[i - 1] for i in block], moment, partitions_of, cache)
            if not term:
                break
        value -= term
    cache[word] = value
    return value


def free_cumulant(word: Sequence[Hashable], moment: Callable[[tuple], Fraction], cache=None) -> Fraction:
    """Mixed free cumulant ``kappa_n(a_1, ..., a_n)`` given a moment functional
    on words. Pass the same ``cache`` dict across calls to share work."""
    return _cumulant(word, moment, _proper_nc, {} if cache is None else cache)


def boolean_cumulant(word: Sequence[Hashable], moment: Callable[[tuple], Fraction], cache=None) -> Fraction:
    """Mixed Boolean cumulant, the interval-partition analogue of :func:`free_cumulant`."""
    return _cumulant(word, moment, _proper_intervals, {} if cache is None else cache)


# -- Wick formulas --------------------------------------------------------


def _kernel(cov: Kernel) -> Callable[[Hashable, Hashable], Fraction]:
    if isinstance(cov, Mapping):
        def lookup(a, b):
            if (a, b) in cov:
                return Fraction(cov[(a, b)])
            return Fraction(cov.get((b, a), 0))
        return lookup
    return lambda a, b: Fraction(cov(a, b))


def _pairing_product(word, pairs, k) -> Fraction:
    out = Fraction(1)
    for i, j in pairs:
        out *= k(word[i - 1], word[j - 1])
        if not out:
            break
    return out


def wick_free(word: Sequence[Hashable], cov: Kernel) -> Fraction:
    """``phi(x_1...x_n)`` for a free semicircular family: sum over
    non-crossing pairings of the products of pair covariances.

    ``cov`` is a callable or a dict keyed by letter pairs (missing pairs
    fall back to the swapped key, then 0).
    """
    k = _kernel(cov)
    word = tuple(word)
    if not word:
        return Fraction(1)
    return sum((_pairing_product(word, p.pairs, k) for p in enumerate_nc2(len(word))), Fraction(0))


def wick_boolean(word: Sequence[Hashable], cov: Kernel) -> Fraction:
    """``phi(x_1...x_n)`` for a Boolean Bernoulli family: the product
    ``phi(x_1 x_2) phi(x_3 x_4) ... phi(x_{n-1} x_n)``, 0 for odd ``n``."""
    word = tuple(word)
    if not word:
        return Fraction(1)
    pairing = interval_pairing(len(word))
    if pairing is None:
        return Fraction(0)
    return _pairing_product(word, pairing.pairs, _kernel(cov))


def wick_classical(
    word: Sequence[Hashable],
    cov: Kernel,
    pairing_weight: Callable[[PairPartition], Fraction] | None = None,
) -> Fraction:
    """Classical Wick sum over all pairings, each term optionally scaled by
    ``pairing_weight(pairing)``."""
    k = _kernel(cov)
    word = tuple(word)
    if not word:
        return Fraction(1)
    total = Fraction(0)
    for p in enumerate_pairings(len(word)):
        term = _pairing_product(word, p.pairs, k)
        if term and pairing_weight is not None:
            term *= Fraction(pairing_weight(p))
        total += term
    return total
