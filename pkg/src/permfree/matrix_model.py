"""Exact finite-N moments of words in a semicircular (or Bernoulli) matrix
and its entry-permuted version.

Conventions
-----------
Indices are 1-based in the public API. An entry permutation ``p`` acts on the
grid ``[N] x [N]`` and ``[S^p]_{ij} = [S]_{p(i,j)}``. Entries have covariance
``phi(c_{ij} c_{kl}) = delta_{il} delta_{jk} / N``, i.e. ``c_{kl}`` must be the
adjoint entry ``c_{ji}``; with this choice ``phi(tr S^2) = 1``.

A word is a tuple of letters, ``BASE`` (0) for ``S`` and ``PERMUTED`` (1) for
``S^p``. :func:`parse_word` reads the text form ``"S St S St"``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import SizeLimitError, ValidationError
from .partitions import PairPartition, enumerate_nc2, interval_pairing, nc2_respecting

BASE = 0
PERMUTED = 1

ORACLE_BUDGET = 10**8
SEARCH_BUDGET = 10**7

_LETTERS = {
    "S": BASE, "B": BASE, "G": BASE, "X": BASE,
    "St": PERMUTED, "Sp": PERMUTED, "Bs": PERMUTED, "Bt": PERMUTED, "Gs": PERMUTED, "Gt": PERMUTED,
    "Xt": PERMUTED,
}


def parse_word(text: str | Sequence) -> tuple[int, ...]:
    """``"S St S"`` -> ``(0, 1, 0)``. Tuples of 0/1 pass through unchanged."""
    if not isinstance(text, str):
        word = tuple(int(x) for x in text)
        if any(x not in (BASE, PERMUTED) for x in word):
            raise ValidationError(f"letters must be 0 or 1, got {text!r}")
        return word
    try:
        return tuple(_LETTERS[tok] for tok in text.split())
    except KeyError as exc:
        raise ValidationError(f"unknown letter {exc.args[0]!r} in word {text!r}") from None


def format_word(word: Sequence[int], base: str = "S", permuted: str = "St") -> str:
    return " ".join(permuted if x else base for x in word)


@dataclass(frozen=True)
class EntryPermutation:
    """A bijection of ``[N] x [N]``, stored as the flat 0-based image of
    each flat index ``(i-1)*N + (j-1)``."""

    N: int
    image: tuple[int, ...]
    name: str = field(default="custom", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "image", tuple(int(x) for x in self.image))
        if self.N < 1 or len(self.image) != self.N * self.N:
            raise ValidationError(f"need {self.N * self.N} images, got {len(self.image)}")
        if sorted(self.image) != list(range(self.N * self.N)):
            raise ValidationError("entry map is not a bijection of the index grid")

    def __call__(self, i: int, j: int) -> tuple[int, int]:
        f = self.image[(i - 1) * self.N + (j - 1)]
        return f // self.N + 1, f % self.N + 1

    def as_array(self) -> np.ndarray:
        return np.asarray(self.image, dtype=np.int64)

    def inverse(self) -> "EntryPermutation":
        inv = [0] * len(self.image)
        for a, b in enumerate(self.image):
            inv[b] = a
        return EntryPermutation(self.N, tuple(inv), name=f"{self.name}^-1")

    def compose(self, other: "EntryPermutation") -> "EntryPermutation":
        """``self o other``."""
        if other.N != self.N:
            raise ValidationError("size mismatch")
        return EntryPermutation(self.N, tuple(self.image[x] for x in other.image))

    def is_identity(self) -> bool:
        return self.image == tuple(range(self.N * self.N))

    def is_transpose(self) -> bool:
        N = self.N
        return all(self.image[a * N + b] == b * N + a for a in range(N) for b in range(N))

    def pairs(self) -> Iterable[tuple[tuple[int, int], tuple[int, int]]]:
        for i in range(1, self.N + 1):
            for j in range(1, self.N + 1):
                yield (i, j), self(i, j)


def identity_perm(N: int) -> EntryPermutation:
    return EntryPermutation(N, tuple(range(N * N)), name="identity")


def transpose_perm(N: int) -> EntryPermutation:
    return EntryPermutation(N, tuple(b * N + a for a in range(N) for b in range(N)), name="transpose")


def left_partial_transpose(m: int, N0: int) -> EntryPermutation:
    """Transpose the ``m x m`` grid of ``N0 x N0`` blocks, keeping each block's content."""
    N = m * N0
    image = []
    for i in range(N):
        for j in range(N):
            (k, a), (l, b) = divmod(i, N0), divmod(j, N0)
            image.append((l * N0 + a) * N + (k * N0 + b))
    return EntryPermutation(N, tuple(image), name=f"left_partial_transpose({m},{N0})")


def from_mapping(pairs: Iterable[tuple[tuple[int, int], tuple[int, int]]], N: int | None = None) -> EntryPermutation:
    """Build from ``((i, j), (k, l))`` pairs, 1-based. Every grid point must
    appear exactly once as a source and once as a target."""
    pairs = list(pairs)
    if N is None:
        N = int(round(len(pairs) ** 0.5))
    if len(pairs) != N * N:
        raise ValidationError(f"mapping has {len(pairs)} entries, expected {N * N}")
    image = [-1] * (N * N)
    targets = set()
    for (i, j), (k, l) in pairs:
        for x in (i, j, k, l):
            if not 1 <= x <= N:
                raise ValidationError(f"index {x} outside [1, {N}]")
        src = (i - 1) * N + (j - 1)
        dst = (k - 1) * N + (l - 1)
        if image[src] != -1:
            raise ValidationError(f"duplicate source ({i}, {j})")
        if dst in targets:
            raise ValidationError(f"duplicate target ({k}, {l})")
        image[src] = dst
        targets.add(dst)
    return EntryPermutation(N, tuple(image), name="mapping")


def read_mapping_file(path) -> EntryPermutation:
    """Read lines ``i j -> k l``; blank lines and ``#`` comments are ignored."""
    pairs = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                lhs, rhs = line.split("->")
                i, j = (int(x) for x in lhs.split())
                k, l = (int(x) for x in rhs.split())
            except ValueError:
                raise ValidationError(f"{path}:{lineno}: expected 'i j -> k l', got {raw.strip()!r}") from None
            pairs.append(((i, j), (k, l)))
    return from_mapping(pairs)


def write_mapping_file(perm: EntryPermutation, path) -> None:
    with open(path, "w") as fh:
        for (i, j), (k, l) in perm.pairs():
            fh.write(f"{i} {j} -> {k} {l}\n")


def builtin_perm(name: str, N: int) -> EntryPermutation:
    """Look up ``identity``, ``transpose``, ``antidiagonal`` or ``lpt:<m>``
    (left partial transpose with ``m`` blocks of size ``N // m``)."""
    if name == "identity":
        return identity_perm(N)
    if name == "transpose":
        return transpose_perm(N)
    if name == "antidiagonal":
        return antidiagonal_perm(N)
    if name.startswith("lpt:"):
        m = int(name[4:])
        if N % m:
            raise ValidationError(f"N={N} is not a multiple of m={m}")
        return left_partial_transpose(m, N // m)
    raise ValidationError(f"unknown permutation {name!r}")


def antidiagonal_perm(N: int) -> EntryPermutation:
    """``(i, j) -> (N+1-i, N+1-j)``; commutes with ``t`` and, for even ``N``,
    moves every entry out of its row."""
    return EntryPermutation(
        N, tuple((N - 1 - a) * N + (N - 1 - b) for a in range(N) for b in range(N)), name="antidiagonal"
    )


# -- the two conditions ---------------------------------------------------


def commutes_with_transpose(p: EntryPermutation) -> bool:
    N = p.N
    img = p.image
    for a in range(N):
        for b in range(N):
            x = img[a * N + b]
            if img[b * N + a] != (x % N) * N + x // N:
                return False
    return True


def row_fixing_count(p: EntryPermutation) -> int:
    """``#{(i, j, k) : p(i, j) = (i, k)}``."""
    N = p.N
    return sum(1 for f, x in enumerate(p.image) if x // N == f // N)


EXACT = "ExactCondition"
ASYMPTOTIC = "AsymptoticCandidate"
FAILS = "Fails"


@dataclass(frozen=True)
class FreenessVerdict:
    commutes_with_t: bool
    row_fixing_count: int
    ratio: Fraction
    verdict: str


def classify(p: EntryPermutation) -> FreenessVerdict:
    """Check the freeness conditions at this single ``N``.

    ``ExactCondition``: commutes with ``t`` and no entry stays in its row.
    ``Fails``: does not commute with ``t``, or every entry stays in its row
    (ratio 1, the maximum). Otherwise ``AsymptoticCandidate``, whose ratio
    must be followed along an ``N``-sweep before concluding anything.
    """
    commutes = commutes_with_transpose(p)
    count = row_fixing_count(p)
    ratio = Fraction(count, p.N * p.N)
    if not commutes or ratio == 1:
        verdict = FAILS
    elif count == 0:
        verdict = EXACT
    else:
        verdict = ASYMPTOTIC
    return FreenessVerdict(commutes, count, ratio, verdict)


def ratio_sweep(factory, Ns: Iterable[int]) -> list[tuple[int, Fraction]]:
    """``[(N, row_fixing_count / N^2)]`` for ``factory(N)``."""
    return [(N, classify(factory(N)).ratio) for N in Ns]


# -- structured engine ----------------------------------------------------


def _letter_perms(word, p: EntryPermutation):
    ident = identity_perm(p.N)
    return [p if x == PERMUTED else ident for x in word]


def _symbolic_kind(q: EntryPermutation) -> str | None:
    if q.is_identity():
        return "id"
    if q.is_transpose():
        return "t"
    return None


def _count_symbolic(M: int, pairs, kinds) -> int:
    # each pair (l, k) forces t(sigma_l(i_l, i_{l+1})) = sigma_k(i_k, i_{k+1});
    # for sigma in {id, t} both sides are index pairs, so the constraint is
    # two variable identifications
    parent = list(range(M))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    for l, k in pairs:
        a, b = l - 1, l % M
        lhs = (b, a) if kinds[l - 1] == "id" else (a, b)
        c, d = k - 1, k % M
        rhs = (c, d) if kinds[k - 1] == "id" else (d, c)
        union(lhs[0], rhs[0])
        union(lhs[1], rhs[1])
    return len({find(x) for x in range(M)})


def _pair_tables(N, q_l: EntryPermutation, q_k: EntryPermutation):
    # forward: flat (i_l, i_{l+1}) -> flat (i_k, i_{k+1}) with
    # q_k(i_k, i_{k+1}) = t(q_l(i_l, i_{l+1}))
    inv_k = q_k.inverse().image
    fwd = []
    for f in range(N * N):
        x = q_l.image[f]
        tx = (x % N) * N + x // N
        fwd.append(inv_k[tx])
    bwd = [0] * (N * N)
    for a, b in enumerate(fwd):
        bwd[b] = a
    return fwd, bwd


def _count_search(N: int, M: int, pairs, perms) -> int:
    constraints = []
    for l, k in pairs:
        fwd, bwd = _pair_tables(N, perms[l - 1], perms[k - 1])
        constraints.append(((l - 1, l % M), (k - 1, k % M), fwd, bwd))

    def propagate(assign):
        changed = True
        while changed:
            changed = False
            for src, dst, fwd, bwd in constraints:
                for (x, y), (u, v), table in ((src, dst, fwd), (dst, src, bwd)):
                    if assign[x] < 0 or assign[y] < 0:
                        continue
                    target = table[assign[x] * N + assign[y]]
                    tu, tv = divmod(target, N)
                    for var, val in ((u, tu), (v, tv)):
                        if assign[var] < 0:
                            assign[var] = val
                            changed = True
                        elif assign[var] != val:
                            return False
        return True

    def rec(assign):
        if not propagate(assign):
            return 0
        try:
            free = assign.index(-1)
        except ValueError:
            return 1
        total = 0
        for val in range(N):
            nxt = list(assign)
            nxt[free] = val
            total += rec(nxt)
        return total

    return rec([-1] * M)


def pairing_index_count(N: int, word: Sequence[int], p: EntryPermutation, pi: PairPartition) -> int:
    """Number of index tuples ``i in [N]^M`` with nonzero weight ``w(pi, sigma, i)``."""
    word = parse_word(word)
    M = len(word)
    if p.N != N:
        raise ValidationError(f"permutation acts on [{p.N}]^2, expected [{N}]^2")
    perms = _letter_perms(word, p)
    kinds = [_symbolic_kind(q) for q in perms]
    if all(kinds):
        return N ** _count_symbolic(M, pi.pairs, kinds)
    if N ** (M // 2 + 1) > SEARCH_BUDGET:
        raise SizeLimitError(f"N={N}, M={M} exceeds the search budget for a general permutation")
    return _count_search(N, M, pi.pairs, perms)


def pairing_weight(N: int, word: Sequence[int], p: EntryPermutation, pi: PairPartition) -> Fraction:
    """``v(pi, sigma) = (1/N) sum_i w(pi, sigma, i)``; each nonzero ``w`` equals ``N^(-M/2)``."""
    count = pairing_index_count(N, word, p, pi)
    return Fraction(count, N ** (1 + len(parse_word(word)) // 2))


def semicircular_word_moment(N: int, word, p: EntryPermutation) -> Fraction:
    """Exact ``phi o tr`` of ``S^{sigma_1} ... S^{sigma_M}``, summed pairing by pairing.

    For letters in ``{identity, transpose}`` the index count per pairing is
    resolved symbolically, so the cost does not depend on ``N``; any other
    permutation falls back to a propagating search over the index tuple.
    """
    word = parse_word(word)
    if not word:
        raise ValidationError("empty word")
    return sum((pairing_weight(N, word, p, pi) for pi in enumerate_nc2(len(word))), Fraction(0))


def bernoulli_word_moment(N: int, word, p: EntryPermutation) -> Fraction:
    """Exact ``phi o tr`` of ``B^{sigma_1} ... B^{sigma_M}``: only the interval
    pairing ``(1,2)(3,4)...`` contributes."""
    word = parse_word(word)
    if not word:
        raise ValidationError("empty word")
    pi = interval_pairing(len(word))
    if pi is None:
        return Fraction(0)
    return pairing_weight(N, word, p, pi)


def nc2_count(word) -> int:
    """``#NC2(M, sigma)``: non-crossing pairings joining equal letters only."""
    word = parse_word(word)
    return len(nc2_respecting(len(word), word))


# -- brute-force oracle ---------------------------------------------------


def _brute_count(N: int, word, p: EntryPermutation, pairings) -> int:
    M = len(word)
    if N**M > ORACLE_BUDGET:
        raise SizeLimitError(f"N^M = {N}^{M} exceeds the oracle budget {ORACLE_BUDGET}")
    img = p.as_array()
    ident = np.arange(N * N, dtype=np.int64)
    total = 0
    # chunk over the first index to bound memory
    rest = np.array(list(itertools.product(range(N), repeat=M - 1)), dtype=np.int64).reshape(-1, M - 1)
    for i1 in range(N):
        idx = np.concatenate([np.full((rest.shape[0], 1), i1, dtype=np.int64), rest], axis=1)
        entries = []
        for pos in range(M):
            flat = idx[:, pos] * N + idx[:, (pos + 1) % M]
            entries.append(img[flat] if word[pos] == PERMUTED else ident[flat])
        for pi in pairings:
            ok = np.ones(idx.shape[0], dtype=bool)
            for l, k in pi.pairs:
                el, ek = entries[l - 1], entries[k - 1]
                ok &= (el % N) * N + el // N == ek
            total += int(ok.sum())
    return total


def semicircular_word_moment_oracle(N: int, word, p: EntryPermutation) -> Fraction:
    """Direct summation over every index tuple and every non-crossing pairing."""
    word = parse_word(word)
    M = len(word)
    if p.N != N:
        raise ValidationError(f"permutation acts on [{p.N}]^2, expected [{N}]^2")
    if M % 2:
        return Fraction(0)
    count = _brute_count(N, word, p, enumerate_nc2(M))
    return Fraction(count, N ** (1 + M // 2))


def bernoulli_word_moment_oracle(N: int, word, p: EntryPermutation) -> Fraction:
    word = parse_word(word)
    M = len(word)
    if p.N != N:
        raise ValidationError(f"permutation acts on [{p.N}]^2, expected [{N}]^2")
    pi = interval_pairing(M)
    if pi is None:
        return Fraction(0)
    return Fraction(_brute_count(N, word, p, [pi]), N ** (1 + M // 2))
