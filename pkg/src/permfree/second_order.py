"""Exact finite-N moments and free cumulants of products of unnormalized
traces of words in ``S`` and ``S^t``, and the limits they should approach.

A trace product ``Tr(W_1) ... Tr(W_r)`` is described by the word lengths
``l_1..l_r`` and one sign per letter (``+1`` for ``S``, ``-1`` for ``S^t``).
Each non-crossing pairing ``pi`` contributes ``N^(#orbits - M/2)`` where the
orbits are those of the group generated by the trace-linking involution and
``eps o tilde(pi) o eps`` on the ``2M`` signed positions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .cumulants import wick_free
from .errors import InternalInconsistencyError, SizeLimitError, ValidationError
from .matrix_model import parse_word, semicircular_word_moment, transpose_perm
from .partitions import (
    IntervalPartition,
    PairPartition,
    connects_blocks,
    enumerate_nc2,
    orbit_join_count,
    orbit_sizes,
    pairing_tilde,
    sign_flip,
    trace_linking,
)

MAX_M = 12
ORACLE_BUDGET = 10**7


@dataclass(frozen=True)
class TraceProductSpec:
    lengths: tuple[int, ...]
    eps: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "lengths", tuple(self.lengths))
        object.__setattr__(self, "eps", tuple(self.eps))
        if not self.lengths or any(l < 1 for l in self.lengths):
            raise ValidationError("trace lengths must be positive")
        if len(self.eps) != sum(self.lengths):
            raise ValidationError(f"need {sum(self.lengths)} signs, got {len(self.eps)}")
        if any(e not in (1, -1) for e in self.eps):
            raise ValidationError("signs must be +1 or -1")

    @classmethod
    def from_words(cls, words: Sequence) -> "TraceProductSpec":
        """One word per trace, each in the ``"S St S"`` form or as 0/1 letters."""
        parsed = [parse_word(w) for w in words]
        return cls(tuple(len(w) for w in parsed), tuple(-1 if x else 1 for w in parsed for x in w))

    @property
    def M(self) -> int:
        return len(self.eps)

    @property
    def r(self) -> int:
        return len(self.lengths)

    def words(self) -> list[tuple[int, ...]]:
        out, start = [], 0
        for l in self.lengths:
            out.append(tuple(0 if e == 1 else 1 for e in self.eps[start:start + l]))
            start += l
        return out

    def sub(self, which: Sequence[int]) -> "TraceProductSpec":
        """The product of the selected traces (0-based), in the given order."""
        words = self.words()
        return TraceProductSpec.from_words([words[i] for i in which])

    def __str__(self):
        return "|".join("Tr(" + " ".join("St" if x else "S" for x in w) + ")" for w in self.words())


def _check_size(M: int):
    if M > MAX_M:
        raise SizeLimitError(f"M={M} > {MAX_M}")


def pairing_exponent(spec: TraceProductSpec, pi: PairPartition) -> int:
    """``#(gamma~ v eps pi~ eps) - M/2``: the power of ``N`` contributed by ``pi``."""
    gamma = trace_linking(spec.lengths)
    eps = sign_flip(spec.eps)
    return orbit_join_count(gamma, eps * pairing_tilde(pi) * eps) - spec.M // 2


def trace_product_moment(spec: TraceProductSpec, N: int) -> Fraction:
    """Exact ``phi(Tr W_1 ... Tr W_r)`` via the orbit count, summed over ``NC2(M)``."""
    _check_size(spec.M)
    return sum((Fraction(N) ** pairing_exponent(spec, pi) for pi in enumerate_nc2(spec.M)), Fraction(0))


def _check_orbits(spec, pi, beta):
    # pairings joining only distinct blocks give orbits of size >= 4
    idx = beta.block_index()
    if any(idx[a] == idx[b] for a, b in pi.pairs):
        return
    gamma = trace_linking(spec.lengths)
    eps = sign_flip(spec.eps)
    sizes = orbit_sizes(gamma, eps * pairing_tilde(pi) * eps)
    if min(sizes) < 4:
        raise InternalInconsistencyError(f"orbit of size {min(sizes)} for {pi} on {spec}")


def kappa_r_traces(spec: TraceProductSpec, N: int) -> Fraction:
    """Free cumulant ``kappa_r(Tr W_1, ..., Tr W_r)``: the orbit weights summed
    over the non-crossing pairings that connect all ``r`` words."""
    _check_size(spec.M)
    beta = IntervalPartition(spec.lengths)
    total = Fraction(0)
    for pi in enumerate_nc2(spec.M):
        if not connects_blocks(pi, beta):
            continue
        if spec.r > 1:
            _check_orbits(spec, pi, beta)
        total += Fraction(N) ** pairing_exponent(spec, pi)
    return total


def trace_product_moment_oracle(spec: TraceProductSpec, N: int) -> Fraction:
    """Direct summation over row indices and non-crossing pairings of the
    entry covariances ``phi(c_ab c_cd) = delta_ad delta_bc / N``."""
    M = spec.M
    if M % 2:
        return Fraction(0)
    if N**M > ORACLE_BUDGET:
        raise SizeLimitError(f"N^M = {N}^{M} exceeds the oracle budget")
    # next position inside the same trace, cyclically
    nxt, start = [], 0
    for l in spec.lengths:
        nxt += [start + (i + 1) % l for i in range(l)]
        start += l
    idx = np.array(list(itertools.product(range(N), repeat=M)), dtype=np.int64).reshape(-1, M)
    rows, cols = [], []
    for k in range(M):
        a, b = idx[:, k], idx[:, nxt[k]]
        if spec.eps[k] == -1:
            a, b = b, a
        rows.append(a)
        cols.append(b)
    count = 0
    for pi in enumerate_nc2(M):
        ok = np.ones(idx.shape[0], dtype=bool)
        for k, l in pi.pairs:
            ok &= (rows[k - 1] == cols[l - 1]) & (cols[k - 1] == rows[l - 1])
        count += int(ok.sum())
    return Fraction(count, N ** (M // 2))


# -- centered polynomials -------------------------------------------------


Poly = Mapping[int, Fraction]


def _poly(p) -> dict[int, Fraction]:
    out = {}
    for e, c in dict(p).items():
        if e < 0:
            raise ValidationError("negative exponent")
        c = Fraction(c)
        if c:
            out[int(e)] = out.get(int(e), Fraction(0)) + c
    return out


@dataclass(frozen=True)
class CenteredPolyWord:
    """``Tr(alpha_1 ... alpha_s)`` and ``Tr(alpha_{s+1} ... alpha_{s+r})`` with
    ``alpha_k = P_k(S^{omega_k}) - phi(tr P_k(S^{omega_k}))``.

    ``polys[k]`` maps exponents to coefficients; ``omega[k]`` is ``+1`` or ``-1``.
    """

    polys: tuple
    omega: tuple[int, ...]
    s: int

    def __post_init__(self):
        object.__setattr__(self, "polys", tuple(tuple(sorted(_poly(p).items())) for p in self.polys))
        object.__setattr__(self, "omega", tuple(self.omega))
        if len(self.polys) != len(self.omega):
            raise ValidationError("one sign per polynomial")
        if not 1 <= self.s < len(self.polys):
            raise ValidationError("need s >= 1 and r >= 1")
        if any(w not in (1, -1) for w in self.omega):
            raise ValidationError("omega entries must be +1 or -1")
        if any(not p for p in self.polys):
            raise ValidationError("zero polynomial")

    @classmethod
    def monomials(cls, exponents: Sequence[int], omega: Sequence[int], s: int) -> "CenteredPolyWord":
        return cls(tuple({e: 1} for e in exponents), tuple(omega), s)

    @property
    def r(self) -> int:
        return len(self.polys) - self.s

    def poly(self, k: int) -> dict[int, Fraction]:
        return dict(self.polys[k])

    def degree(self) -> int:
        return sum(max(dict(p)) for p in self.polys)

    def alternates(self) -> bool:
        """``omega(p) != omega(p+1)`` for every ``p`` except ``p = s``."""
        return all(self.omega[p - 1] != self.omega[p] for p in range(1, len(self.omega)) if p != self.s)

    def __str__(self):
        from .dsl import format_centered_spec

        return format_centered_spec(self)


def _centered_expansion(poly: dict[int, Fraction], sign: int, N: int) -> dict[int, Fraction]:
    # alpha = sum_e a_e X^e - phi(tr sum_e a_e X^e); exponent 0 is the identity
    letter = 0 if sign == 1 else 1
    shift = sum(
        (c * (semicircular_word_moment(N, (letter,) * e, transpose_perm(N)) if e else 1) for e, c in poly.items()),
        Fraction(0),
    )
    out = dict(poly)
    out[0] = out.get(0, Fraction(0)) - shift
    return {e: c for e, c in out.items() if c}


def _trace_terms(polys, omegas, N):
    """Expand ``Tr(alpha_1 ... alpha_q)`` into ``[(coef, sign pattern)]``."""
    expanded = [sorted(_centered_expansion(p, w, N).items()) for p, w in zip(polys, omegas)]
    terms = []
    for choice in itertools.product(*expanded):
        coef = Fraction(1)
        eps = []
        for (e, c), w in zip(choice, omegas):
            coef *= c
            eps += [w] * e
        terms.append((coef, tuple(eps)))
    return terms


def kappa2_centered(spec: CenteredPolyWord, N: int) -> Fraction:
    """Exact ``kappa_2(Tr(alpha_1...alpha_s), Tr(alpha_{s+1}...alpha_{s+r}))``.

    Both traces are expanded by multilinearity; the centering constants are
    the exact finite-``N`` values ``phi(tr P_k(S^{omega_k}))``. Terms where a
    side reduces to ``Tr(I)`` are constants and drop out of ``kappa_2``.
    """
    if spec.degree() > MAX_M:
        raise SizeLimitError(f"total degree {spec.degree()} > {MAX_M}")
    polys = [spec.poly(k) for k in range(len(spec.polys))]
    left = _trace_terms(polys[: spec.s], spec.omega[: spec.s], N)
    right = _trace_terms(polys[spec.s:], spec.omega[spec.s:], N)
    total = Fraction(0)
    for c1, e1 in left:
        if not e1:
            continue
        for c2, e2 in right:
            if not e2:
                continue
            total += c1 * c2 * kappa_r_traces(TraceProductSpec((len(e1), len(e2)), e1 + e2), N)
    return total


def kappa2_from_moments(spec: CenteredPolyWord, N: int) -> Fraction:
    """``phi(Tr A Tr B) - phi(Tr A) phi(Tr B)`` from the moment engine; an
    independent route to :func:`kappa2_centered`."""
    polys = [spec.poly(k) for k in range(len(spec.polys))]
    left = _trace_terms(polys[: spec.s], spec.omega[: spec.s], N)
    right = _trace_terms(polys[spec.s:], spec.omega[spec.s:], N)

    def tr(eps):
        return Fraction(N) if not eps else trace_product_moment(TraceProductSpec((len(eps),), eps), N)

    def tr2(e1, e2):
        if not e1:
            return N * tr(e2)
        if not e2:
            return N * tr(e1)
        return trace_product_moment(TraceProductSpec((len(e1), len(e2)), e1 + e2), N)

    joint = sum((c1 * c2 * tr2(e1, e2) for c1, e1 in left for c2, e2 in right), Fraction(0))
    a = sum((c * tr(e) for c, e in left), Fraction(0))
    b = sum((c * tr(e) for c, e in right), Fraction(0))
    return joint - a * b


def centered_product_moment(polys: Sequence, omega: Sequence[int], N: int) -> Fraction:
    """Exact ``phi(tr(alpha_1 ... alpha_q))`` at size ``N``."""
    polys = [_poly(p) for p in polys]
    total = Fraction(0)
    for coef, eps in _trace_terms(polys, tuple(omega), N):
        if not eps:
            total += coef
        else:
            word = tuple(0 if e == 1 else 1 for e in eps)
            total += coef * semicircular_word_moment(N, word, transpose_perm(N))
    return total


# -- limit predictions ----------------------------------------------------


class NotCovered:
    """Returned when the limit theorem makes no claim for the given data."""

    def __init__(self, reason: str):
        self.reason = reason

    def __repr__(self):
        return f"NotCovered({self.reason!r})"

    def __str__(self):
        return "not covered by the theorem"

    def __eq__(self, other):
        return isinstance(other, NotCovered)

    def __hash__(self):
        return hash(NotCovered)


def _limit_cov(a, b):
    return Fraction(1) if a == b else Fraction(0)


def limit_moment(polys: Sequence, omega: Sequence[int]) -> Fraction:
    """``phi(alpha_1 ... alpha_q)`` in the limit algebra, where ``S`` and
    ``S^t`` become two free standard semicirculars and each ``alpha_k`` is
    centered there."""
    expanded = []
    for p, w in zip(polys, omega):
        p = _poly(p)
        shift = sum((c * wick_free((w,) * e, _limit_cov) if e else c for e, c in p.items()), Fraction(0))
        q = dict(p)
        q[0] = q.get(0, Fraction(0)) - shift
        expanded.append([(e, c) for e, c in q.items() if c])
    total = Fraction(0)
    for choice in itertools.product(*expanded):
        coef = Fraction(1)
        word = []
        for (e, c), w in zip(choice, omega):
            coef *= c
            word += [w] * e
        total += coef * wick_free(word, _limit_cov)
    return total


def _check_alternation(polys, omega, s):
    for p in range(1, len(omega)):
        if p != s and omega[p - 1] == omega[p]:
            raise ValidationError(f"omega must alternate except at position {s}; omega({p}) = omega({p + 1})")


def alternating_centered_product_limit(polys: Sequence, omega: Sequence[int], s: int) -> Fraction:
    """Predicted ``lim phi(tr(W_1 ... W_{s+r}))`` for centered ``W_k`` whose
    signs alternate except between ``s`` and ``s+1``:
    ``delta_{s,r} prod_j lim phi(W_{s+1-j} W_{s+j})``."""
    _check_alternation(polys, omega, s)
    r = len(polys) - s
    if s != r:
        return Fraction(0)
    out = Fraction(1)
    for j in range(1, s + 1):
        a, b = s - j, s + j - 1
        out *= limit_moment([polys[a], polys[b]], [omega[a], omega[b]])
    return out


def kappa2_limit_prediction(spec: CenteredPolyWord) -> Fraction | NotCovered:
    """Predicted ``lim kappa_2`` of the two centered traces.

    Same sign across the cut: ``delta_{s,r} prod_j lim phi(alpha_j alpha_{s+r+1-j})``.
    Sign change across the cut with ``s != r`` or ``s, r >= 3``: 0.
    Sign change with ``s = r <= 2``: :class:`NotCovered`.
    """
    polys = [spec.poly(k) for k in range(len(spec.polys))]
    _check_alternation(polys, spec.omega, spec.s)
    s, r = spec.s, spec.r
    if spec.omega[s - 1] == spec.omega[s]:
        if s != r:
            return Fraction(0)
        out = Fraction(1)
        for j in range(1, s + 1):
            a, b = j - 1, s + r - j
            out *= limit_moment([polys[a], polys[b]], [spec.omega[a], spec.omega[b]])
        return out
    if s != r or (s >= 3 and r >= 3):
        return Fraction(0)
    return NotCovered(f"sign change across the cut with s = r = {s}")
