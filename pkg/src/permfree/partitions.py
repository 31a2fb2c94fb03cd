"""Set partitions, non-crossing (pair) partitions, interval partitions and
signed-index permutations.

Ground sets are 1-based: ``[n] = {1, ..., n}``. Signed permutations act on
``{-M, ..., -1, 1, ..., M}``. Every object is immutable and canonical, so
equality and hashing behave as for the underlying mathematical object.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .errors import InternalInconsistencyError, SizeLimitError, ValidationError

MAX_SET_PARTITION_N = 12
MAX_PAIRING_N = 16


@dataclass(frozen=True)
class SetPartition:
    """A partition of ``[n]`` with blocks sorted ascending and ordered by minimum."""

    n: int
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        blocks = tuple(sorted((tuple(sorted(b)) for b in self.blocks), key=lambda b: b[0] if b else 0))
        seen = [x for b in blocks for x in b]
        if any(len(b) == 0 for b in blocks):
            raise ValidationError("empty block")
        if sorted(seen) != list(range(1, self.n + 1)):
            raise ValidationError(f"blocks {self.blocks} do not partition [{self.n}]")
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]]) -> "SetPartition":
        blocks = [tuple(b) for b in blocks]
        return cls(sum(len(b) for b in blocks), tuple(blocks))

    def block_of(self, k: int) -> tuple[int, ...]:
        for b in self.blocks:
            if k in b:
                return b
        raise KeyError(k)

    def __len__(self):
        return len(self.blocks)

    def __str__(self):
        return "{" + ",".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks) + "}"


@dataclass(frozen=True)
class PairPartition:
    """A pairing of ``[n]``; also usable as a fixed-point-free involution."""

    n: int
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        pairs = tuple(sorted(tuple(sorted(p)) for p in self.pairs))
        flat = sorted(x for p in pairs for x in p)
        if any(len(p) != 2 for p in pairs) or flat != list(range(1, self.n + 1)):
            raise ValidationError(f"{self.pairs} is not a pairing of [{self.n}]")
        object.__setattr__(self, "pairs", pairs)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]]) -> "PairPartition":
        pairs = [tuple(p) for p in pairs]
        return cls(2 * len(pairs), tuple(pairs))

    def partner(self, k: int) -> int:
        return self.involution()[k]

    def involution(self) -> dict[int, int]:
        out = {}
        for a, b in self.pairs:
            out[a] = b
            out[b] = a
        return out

    def as_set_partition(self) -> SetPartition:
        return SetPartition(self.n, self.pairs)

    def __str__(self):
        return "".join(f"({a},{b})" for a, b in self.pairs)


@dataclass(frozen=True)
class IntervalPartition:
    """An interval partition of ``[n]`` given by its block lengths in order."""

    lengths: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "lengths", tuple(self.lengths))
        if any(l < 1 for l in self.lengths):
            raise ValidationError("interval block lengths must be positive")

    @property
    def n(self) -> int:
        return sum(self.lengths)

    @property
    def blocks(self) -> tuple[tuple[int, ...], ...]:
        out, start = [], 1
        for l in self.lengths:
            out.append(tuple(range(start, start + l)))
            start += l
        return tuple(out)

    def block_index(self) -> dict[int, int]:
        """Map each element of ``[n]`` to the 0-based index of its block."""
        return {k: i for i, b in enumerate(self.blocks) for k in b}

    def as_set_partition(self) -> SetPartition:
        return SetPartition(self.n, self.blocks)


@dataclass(frozen=True)
class SignedPermutation:
    """A bijection of ``{-M..-1, 1..M}`` stored as a sorted item tuple."""

    M: int
    items: tuple[tuple[int, int], ...]

    def __post_init__(self):
        mapping = dict(self.items)
        domain = set(range(-self.M, 0)) | set(range(1, self.M + 1))
        if set(mapping) != domain or set(mapping.values()) != domain:
            raise ValidationError(f"not a bijection of [+-{self.M}]")
        object.__setattr__(self, "items", tuple(sorted(mapping.items())))

    @classmethod
    def from_mapping(cls, M: int, mapping: Mapping[int, int]) -> "SignedPermutation":
        return cls(M, tuple(mapping.items()))

    @classmethod
    def identity(cls, M: int) -> "SignedPermutation":
        return cls.from_mapping(M, {k: k for k in signed_points(M)})

    @classmethod
    def from_cycles(cls, M: int, cycles: Iterable[Sequence[int]]) -> "SignedPermutation":
        mapping = {k: k for k in signed_points(M)}
        for cyc in cycles:
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                mapping[a] = b
        return cls.from_mapping(M, mapping)

    @property
    def map(self) -> dict[int, int]:
        return dict(self.items)

    def __call__(self, k: int) -> int:
        return self.map[k]

    def __mul__(self, other: "SignedPermutation") -> "SignedPermutation":
        """Composition ``self o other`` (apply ``other`` first)."""
        if other.M != self.M:
            raise ValidationError("signed permutations on different sets")
        a, b = self.map, other.map
        return SignedPermutation.from_mapping(self.M, {k: a[b[k]] for k in b})

    def inverse(self) -> "SignedPermutation":
        return SignedPermutation.from_mapping(self.M, {v: k for k, v in self.items})

    def cycles(self) -> list[tuple[int, ...]]:
        m, seen, out = self.map, set(), []
        for k in sorted(m, key=lambda x: (abs(x), x)):
            if k in seen:
                continue
            cyc = [k]
            seen.add(k)
            j = m[k]
            while j != k:
                cyc.append(j)
                seen.add(j)
                j = m[j]
            out.append(tuple(cyc))
        return out


def signed_points(M: int) -> list[int]:
    return [s * k for k in range(1, M + 1) for s in (1, -1)]


# -- enumeration ----------------------------------------------------------


def _check(n: int, cap: int, what: str):
    if n < 0 or n > cap:
        raise SizeLimitError(f"{what}: n={n} outside [0, {cap}]")


def enumerate_set_partitions(n: int) -> list[SetPartition]:
    """All ``Bell(n)`` partitions of ``[n]`` via restricted growth strings."""
    if n < 1 or n > MAX_SET_PARTITION_N:
        raise SizeLimitError(f"set partitions: n={n} outside [1, {MAX_SET_PARTITION_N}]")
    out = []

    def rec(k, blocks):
        if k > n:
            out.append(SetPartition(n, tuple(tuple(b) for b in blocks)))
            return
        for b in blocks:
            b.append(k)
            rec(k + 1, blocks)
            b.pop()
        blocks.append([k])
        rec(k + 1, blocks)
        blocks.pop()

    rec(1, [])
    return out


@lru_cache(maxsize=None)
def _nc_blocks(lo: int, hi: int) -> tuple[tuple[tuple[int, ...], ...], ...]:
    # non-crossing partitions of the interval {lo, ..., hi}
    if lo > hi:
        return ((),)
    out = []
    rest = list(range(lo + 1, hi + 1))

    # choose the block of lo: lo < a_2 < ... < a_k; the gaps are independent
    def rec(block, last):
        gaps = [(block[i] + 1, block[i + 1] - 1) for i in range(len(block) - 1)] + [(last + 1, hi)]
        combos = [()]
        for g in gaps:
            combos = [c + p for c in combos for p in _nc_blocks(*g)]
        for c in combos:
            out.append((tuple(block),) + c)
        for nxt in rest:
            if nxt > last:
                rec(block + [nxt], nxt)

    rec([lo], lo)
    return tuple(out)


def enumerate_nc(n: int) -> list[SetPartition]:
    """All ``Catalan(n)`` non-crossing partitions of ``[n]``."""
    _check(n, MAX_SET_PARTITION_N, "non-crossing partitions")
    if n == 0:
        return []
    return [SetPartition(n, blocks) for blocks in _nc_blocks(1, n)]


@lru_cache(maxsize=None)
def _nc2_pairs(lo: int, hi: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    if lo > hi:
        return ((),)
    out = []
    for j in range(lo + 1, hi + 1, 2):
        for inner in _nc2_pairs(lo + 1, j - 1):
            for outer in _nc2_pairs(j + 1, hi):
                out.append(((lo, j),) + inner + outer)
    return tuple(out)


def enumerate_nc2(n: int) -> list[PairPartition]:
    """Non-crossing pairings of ``[n]``; empty for odd ``n``."""
    _check(n, MAX_PAIRING_N, "non-crossing pairings")
    if n % 2 or n == 0:
        return []
    return [PairPartition(n, p) for p in _nc2_pairs(1, n)]


def enumerate_pairings(n: int) -> list[PairPartition]:
    """All ``(n-1)!!`` pairings of ``[n]``."""
    _check(n, MAX_PAIRING_N, "pairings")
    if n % 2 or n == 0:
        return []
    out = []

    def rec(rest, acc):
        if not rest:
            out.append(PairPartition(n, tuple(acc)))
            return
        a = rest[0]
        for i in range(1, len(rest)):
            rec(rest[1:i] + rest[i + 1:], acc + [(a, rest[i])])

    rec(list(range(1, n + 1)), [])
    return out


def enumerate_intervals(n: int) -> list[IntervalPartition]:
    """All ``2^(n-1)`` interval partitions of ``[n]``."""
    _check(n, MAX_PAIRING_N, "interval partitions")
    if n == 0:
        return []
    out = []

    def rec(rem, acc):
        if rem == 0:
            out.append(IntervalPartition(tuple(acc)))
            return
        for l in range(1, rem + 1):
            rec(rem - l, acc + [l])

    rec(n, [])
    return out


def interval_pairing(n: int) -> PairPartition | None:
    """The unique element ``{(1,2),(3,4),...}`` of the interval pairings of ``[n]``."""
    if n % 2 or n == 0:
        return None
    return PairPartition(n, tuple((2 * k - 1, 2 * k) for k in range(1, n // 2 + 1)))


# -- predicates -----------------------------------------------------------


def _blocks_cross(v: Sequence[int], w: Sequence[int]) -> bool:
    labels = sorted([(x, 0) for x in v] + [(x, 1) for x in w])
    runs = 1
    for (_, a), (_, b) in zip(labels, labels[1:]):
        runs += a != b
    return runs > 3


def is_noncrossing(p: SetPartition | PairPartition) -> bool:
    blocks = p.blocks if isinstance(p, SetPartition) else p.pairs
    return not any(
        _blocks_cross(blocks[i], blocks[j]) for i in range(len(blocks)) for j in range(i + 1, len(blocks))
    )


def has_interval_block(p: SetPartition) -> bool:
    """True if some block of ``p`` consists of consecutive integers."""
    return any(b[-1] - b[0] + 1 == len(b) for b in p.blocks)


def count_cycles(perm: Mapping[int, int]) -> int:
    seen, count = set(), 0
    for k in perm:
        if k in seen:
            continue
        count += 1
        while k not in seen:
            seen.add(k)
            k = perm[k]
    return count


def genus(p: PairPartition) -> int:
    """Genus of a pairing from ``#cycles(gamma o p) = n/2 + 1 - 2g``,
    ``gamma = (1, 2, ..., n)``.

    >>> genus(PairPartition.from_pairs([(1, 3), (2, 4)]))
    1
    """
    n = p.n
    inv = p.involution()
    gamma_p = {k: inv[k] % n + 1 for k in range(1, n + 1)}
    twice_g = n // 2 + 1 - count_cycles(gamma_p)
    if twice_g < 0 or twice_g % 2:
        raise InternalInconsistencyError(f"non-integral genus for {p}")
    return twice_g // 2


def respects_labels(p: PairPartition, labels: Sequence) -> bool:
    return all(labels[a - 1] == labels[b - 1] for a, b in p.pairs)


def nc2_respecting(M: int, labels: Sequence) -> list[PairPartition]:
    """Non-crossing pairings of ``[M]`` that only pair equal labels."""
    if len(labels) != M:
        raise ValidationError("labels must have length M")
    return [p for p in enumerate_nc2(M) if respects_labels(p, labels)]


def _block_graph_components(p: PairPartition, beta: IntervalPartition) -> int:
    idx = beta.block_index()
    parent = list(range(len(beta.lengths)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in p.pairs:
        ra, rb = find(idx[a]), find(idx[b])
        if ra != rb:
            parent[ra] = rb
    return len({find(i) for i in range(len(parent))})


def leaves_blocks_invariant(p: PairPartition, beta: IntervalPartition) -> bool:
    """True if ``p`` never pairs elements of two different blocks of ``beta``."""
    idx = beta.block_index()
    return all(idx[a] == idx[b] for a, b in p.pairs)


def connects_blocks(p: PairPartition, beta: IntervalPartition) -> bool:
    """True if the graph on blocks of ``beta`` with an edge per cross pair is connected."""
    return _block_graph_components(p, beta) == 1


def nc2_block_relations(M: int, beta: IntervalPartition) -> tuple[list[PairPartition], list[PairPartition]]:
    """Split ``NC2(M)`` into the pairings leaving every block of ``beta``
    invariant and the pairings connecting all blocks."""
    if beta.n != M:
        raise ValidationError(f"interval partition covers [{beta.n}], expected [{M}]")
    ncs = enumerate_nc2(M)
    return (
        [p for p in ncs if leaves_blocks_invariant(p, beta)],
        [p for p in ncs if connects_blocks(p, beta)],
    )


# -- signed permutations --------------------------------------------------


def tilde(sigma: Mapping[int, int] | Sequence[int]) -> SignedPermutation:
    """Signed lift: ``l -> -sigma(l)`` and ``-l -> sigma(l)``.

    ``sigma`` is a mapping on ``[M]`` or a sequence of images ``sigma(1..M)``.
    """
    if not isinstance(sigma, Mapping):
        sigma = {i + 1: v for i, v in enumerate(sigma)}
    M = len(sigma)
    if sorted(sigma) != list(range(1, M + 1)) or sorted(sigma.values()) != list(range(1, M + 1)):
        raise ValidationError("tilde expects a permutation of [M]")
    mapping = {}
    for l, s in sigma.items():
        mapping[l] = -s
        mapping[-l] = s
    return SignedPermutation.from_mapping(M, mapping)


def pairing_tilde(p: PairPartition) -> SignedPermutation:
    return tilde(p.involution())


def trace_linking(lengths: Sequence[int]) -> SignedPermutation:
    """Involution of ``[+-M]`` with 2-cycles ``(-k, k+1)`` inside each trace
    and ``(-M_j, M_{j-1}+1)`` closing trace ``j``.

    Coincides with ``tilde`` of the block-cycle permutation when every
    length is at most 2.
    """
    mapping, start = {}, 1
    for l in lengths:
        if l < 1:
            raise ValidationError("trace lengths must be positive")
        block = list(range(start, start + l))
        for i, k in enumerate(block):
            nxt = block[(i + 1) % l]
            mapping[-k] = nxt
            mapping[nxt] = -k
        start += l
    return SignedPermutation.from_mapping(start - 1, mapping)


def sign_flip(eps: Sequence[int]) -> SignedPermutation:
    """Involution fixing ``k`` when ``eps[|k|-1] == 1`` and swapping ``k <-> -k`` otherwise."""
    M = len(eps)
    mapping = {}
    for k in range(1, M + 1):
        if eps[k - 1] == 1:
            mapping[k], mapping[-k] = k, -k
        elif eps[k - 1] == -1:
            mapping[k], mapping[-k] = -k, k
        else:
            raise ValidationError("eps entries must be +1 or -1")
    return SignedPermutation.from_mapping(M, mapping)


def orbit_join_count(a: SignedPermutation, b: SignedPermutation) -> int:
    """Number of orbits of the group generated by ``a`` and ``b`` on ``[+-M]``."""
    if a.M != b.M:
        raise ValidationError("signed permutations on different sets")
    points = signed_points(a.M)
    parent = {k: k for k in points}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for perm in (a.map, b.map):
        for k in points:
            ra, rb = find(k), find(perm[k])
            if ra != rb:
                parent[ra] = rb
    return len({find(k) for k in points})


def orbit_sizes(a: SignedPermutation, b: SignedPermutation) -> list[int]:
    """Sizes of the orbits counted by :func:`orbit_join_count`."""
    points = signed_points(a.M)
    am, bm = a.map, b.map
    seen, sizes = set(), []
    for k in points:
        if k in seen:
            continue
        stack, size = [k], 0
        seen.add(k)
        while stack:
            x = stack.pop()
            size += 1
            for y in (am[x], bm[x]):
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        sizes.append(size)
    return sizes


# -- text forms -----------------------------------------------------------


def parse_set_partition(text: str) -> SetPartition:
    """Parse ``{{1,4},{2,3}}``."""
    compact = re.sub(r"\s", "", text)
    if not re.fullmatch(r"\{\{\d+(,\d+)*\}(,\{\d+(,\d+)*\})*\}", compact):
        raise ValidationError(f"bad partition text {text!r}")
    blocks = re.findall(r"\{([\d,]+)\}", compact[1:-1])
    return SetPartition.from_blocks([int(x) for x in b.split(",")] for b in blocks)


def parse_pairing(text: str) -> PairPartition:
    """Parse ``(1,4)(2,3)``."""
    compact = re.sub(r"\s", "", text)
    if not re.fullmatch(r"(\(\d+,\d+\))+", compact):
        raise ValidationError(f"bad pairing text {text!r}")
    pairs = re.findall(r"\((\d+),(\d+)\)", compact)
    if not pairs:
        raise ValidationError(f"bad pairing text {text!r}")
    return PairPartition.from_pairs((int(a), int(b)) for a, b in pairs)
