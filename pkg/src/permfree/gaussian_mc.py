"""Gaussian random matrices, block-permuted versions, and the exact genus
expansion their mixed moments must match.

A Gaussian matrix of size ``m*N`` is viewed as an ``m x m`` grid of ``N x N``
blocks; ``G^[sigma]`` has block ``(k, l)`` equal to block ``sigma(k, l)`` of
``G`` for a permutation ``sigma`` of ``[m] x [m]``. ``sigma = transpose``
gives the left partial transpose.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Sequence

import numpy as np

from .errors import InternalInconsistencyError, SizeLimitError, ValidationError
from .matrix_model import PERMUTED, EntryPermutation, parse_word, semicircular_word_moment
from .partitions import enumerate_pairings, genus, is_noncrossing

MC_BUDGET = 256
MAX_WORD = 10


@dataclass(frozen=True)
class BlockWordSpec:
    """A product ``G_{j_1, j_-1} ... G_{j_n, j_-n}`` of ``N x N`` blocks of an
    ``mN x mN`` Gaussian matrix; ``blocks[k] = (j_k, j_-k)``, 1-based."""

    m: int
    blocks: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple((int(a), int(b)) for a, b in self.blocks))
        for a, b in self.blocks:
            if not (1 <= a <= self.m and 1 <= b <= self.m):
                raise ValidationError(f"block index ({a}, {b}) outside [1, {self.m}]")

    @property
    def n(self) -> int:
        return len(self.blocks)


@dataclass(frozen=True)
class MCEstimate:
    mean: float
    stderr: float
    samples: int
    seed: int


@lru_cache(maxsize=None)
def _pairings_with_genus(n: int):
    out = []
    for p in enumerate_pairings(n):
        g = genus(p)
        # a crossing pairing must carry a strictly negative power of N
        if g == 0 and not is_noncrossing(p):
            raise InternalInconsistencyError(f"crossing pairing {p} with genus 0")
        out.append((p.pairs, g))
    return tuple(out)


def _genus_sum(m: int, blocks: Sequence[tuple[int, int]], N: int) -> Fraction:
    n = len(blocks)
    total = Fraction(0)
    for pairs, g in _pairings_with_genus(n):
        # entry (k) pairs with entry (l) only if block l is the adjoint block of k
        if all(blocks[k - 1] == (blocks[l - 1][1], blocks[l - 1][0]) for k, l in pairs):
            total += Fraction(1, N ** (2 * g))
    return total / Fraction(m) ** (n // 2)


def genus_expansion_moment(spec: BlockWordSpec, N: int) -> Fraction:
    """Exact ``E tr`` of a block word:
    ``m^(-n/2) * sum over all pairings pi of N^(-2 g(pi)) * [blocks match along pi]``."""
    n = spec.n
    if n > MAX_WORD:
        raise SizeLimitError(f"word length {n} > {MAX_WORD}")
    if n % 2 or n == 0:
        return Fraction(0)
    return _genus_sum(spec.m, spec.blocks, N)


def _letter_blocks(word, sigma: EntryPermutation, j: Sequence[int]):
    n = len(word)
    out = []
    for k in range(n):
        a, b = j[k], j[(k + 1) % n]
        out.append(sigma(a, b) if word[k] == PERMUTED else (a, b))
    return out


def gaussian_word_moment(word, sigma: EntryPermutation, N: int) -> Fraction:
    """Exact ``E tr`` over the full ``mN x mN`` matrix of a word in ``G`` and
    ``G^[sigma]``, by summing block words over the outer indices."""
    word = parse_word(word)
    m = sigma.N
    n = len(word)
    if n > MAX_WORD:
        raise SizeLimitError(f"word length {n} > {MAX_WORD}")
    if n % 2:
        return Fraction(0)
    total = Fraction(0)
    for j in product(range(1, m + 1), repeat=n):
        total += _genus_sum(m, _letter_blocks(word, sigma, j), N)
    return total / m


def block_word_moment_oracle(spec: BlockWordSpec, N: int) -> Fraction:
    """Brute-force Wick sum over every inner index tuple and every pairing,
    using ``E(g_xy g_uv) = delta_xv delta_yu / (mN)``."""
    n, m = spec.n, spec.m
    if n % 2 or n == 0:
        return Fraction(0)
    if N**n > 10**7:
        raise SizeLimitError("oracle budget exceeded")
    idx = np.array(list(product(range(N), repeat=n)), dtype=np.int64).reshape(-1, n)
    rows = [(spec.blocks[k][0] - 1) * N + idx[:, k] for k in range(n)]
    cols = [(spec.blocks[k][1] - 1) * N + idx[:, (k + 1) % n] for k in range(n)]
    count = 0
    for p in enumerate_pairings(n):
        ok = np.ones(idx.shape[0], dtype=bool)
        for k, l in p.pairs:
            ok &= (rows[k - 1] == cols[l - 1]) & (cols[k - 1] == rows[l - 1])
        count += int(ok.sum())
    return Fraction(count, N) / Fraction(m * N) ** (n // 2)


# -- sampling -------------------------------------------------------------


def sample_gaussian(N: int, rng: np.random.Generator) -> np.ndarray:
    """Hermitian ``N x N`` matrix: diagonal real with variance ``1/N``,
    off-diagonal real and imaginary parts independent with variance ``1/(2N)``."""
    if N < 1:
        raise ValidationError("N must be positive")
    z = (rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))) / math.sqrt(N)
    return (z + z.conj().T) / 2


def sample_rng(seed: int, index: int) -> np.random.Generator:
    """Generator for sample ``index``; independent of how samples are scheduled."""
    return np.random.default_rng(np.random.SeedSequence([seed & (2**64 - 1), index]))


def block_permute(G: np.ndarray, sigma: EntryPermutation) -> np.ndarray:
    """``G^[sigma]``: block ``(k, l)`` replaced by block ``sigma(k, l)``."""
    m = sigma.N
    N = G.shape[0] // m
    if N * m != G.shape[0]:
        raise ValidationError(f"matrix size {G.shape[0]} is not a multiple of m={m}")
    blocks = G.reshape(m, N, m, N)
    img = sigma.as_array().reshape(m, m)
    src_row, src_col = img // m, img % m
    # advanced indices first: shape (m, m, N, N)
    out = blocks[src_row, :, src_col, :]
    return out.transpose(0, 2, 1, 3).reshape(m * N, m * N)


def _trace_samples(word, sigma, N, indices, seed):
    m = sigma.N
    out = np.empty(len(indices))
    for pos, s in enumerate(indices):
        G = sample_gaussian(m * N, sample_rng(seed, s))
        Gs = block_permute(G, sigma) if PERMUTED in word else None
        prod_ = np.eye(m * N, dtype=complex)
        for x in word:
            prod_ = prod_ @ (Gs if x == PERMUTED else G)
        out[pos] = np.trace(prod_).real / (m * N)
    return out


def empirical_word_moment(
    word, sigma: EntryPermutation, N: int, samples: int, seed: int, workers: int = 1
) -> MCEstimate:
    """Monte Carlo estimate of ``E tr`` of a word in ``G`` and ``G^[sigma]``
    (``G`` of size ``m*N`` with ``m = sigma.N``).

    Sample ``s`` is drawn from :func:`sample_rng` ``(seed, s)``, so the
    result does not depend on ``workers``.
    """
    word = parse_word(word)
    m = sigma.N
    if samples < 2:
        raise ValidationError("need at least 2 samples")
    if m * N > MC_BUDGET:
        raise SizeLimitError(f"m*N = {m * N} exceeds the Monte Carlo budget {MC_BUDGET}")
    indices = list(range(samples))
    if workers > 1:
        chunks = [indices[i::workers] for i in range(workers)]
        values = np.empty(samples)
        with ThreadPoolExecutor(workers) as pool:
            for chunk, vals in zip(chunks, pool.map(lambda c: _trace_samples(word, sigma, N, c, seed), chunks)):
                values[chunk] = vals
    else:
        values = _trace_samples(word, sigma, N, indices, seed)
    return MCEstimate(
        mean=float(np.mean(values)),
        stderr=float(np.std(values, ddof=1) / math.sqrt(samples)),
        samples=samples,
        seed=seed,
    )


def semicircular_limit_value(word, sigma: EntryPermutation) -> Fraction:
    """``phi o tr`` of the word in an ``m x m`` semicircular matrix ``S`` and ``S^sigma``."""
    return semicircular_word_moment(sigma.N, word, sigma)


def exact_limit_gap(word, sigma: EntryPermutation, m: int, N: int) -> Fraction:
    """Exact ``E tr(G-word) - phi o tr(S-word)``; only crossing pairings contribute."""
    if sigma.N != m:
        raise ValidationError(f"sigma acts on [{sigma.N}]^2 but m={m}")
    return gaussian_word_moment(word, sigma, N) - semicircular_limit_value(word, sigma)


def semicircular_limit_gap(
    word, sigma: EntryPermutation, m: int, N: int, samples: int = 10_000, seed: int = 0
) -> float:
    """``|MC estimate of E tr(word) - phi o tr of the semicircular word at size m|``."""
    if sigma.N != m:
        raise ValidationError(f"sigma acts on [{sigma.N}]^2 but m={m}")
    est = empirical_word_moment(word, sigma, N, samples, seed)
    return abs(est.mean - float(semicircular_limit_value(word, sigma)))
