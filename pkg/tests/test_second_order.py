import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import all_set_partitions, trace_product_loops
from permfree.cumulants import free_cumulant
from permfree.errors import SizeLimitError, ValidationError
from permfree.matrix_model import semicircular_word_moment, transpose_perm
from permfree.second_order import (
    CenteredPolyWord,
    NotCovered,
    TraceProductSpec,
    alternating_centered_product_limit,
    centered_product_moment,
    kappa2_centered,
    kappa2_from_moments,
    kappa2_limit_prediction,
    kappa_r_traces,
    limit_moment,
    trace_product_moment,
    trace_product_moment_oracle,
)

NS = (2, 4, 8, 16)


def spec(*words):
    return TraceProductSpec.from_words(words)


def classical_cumulant(s: TraceProductSpec, N: int) -> Fraction:
    """Moebius inversion over all set partitions of the r traces."""
    words = s.words()
    total = Fraction(0)
    for blocks in all_set_partitions(len(words)):
        k = len(blocks)
        term = Fraction((-1) ** (k - 1) * math.factorial(k - 1))
        for b in blocks:
            term *= trace_product_moment(TraceProductSpec.from_words([words[i - 1] for i in b]), N)
        total += term
    return total


def compositions(M):
    for cuts in itertools.product((0, 1), repeat=M - 1):
        out, run = [], 1
        for c in cuts:
            if c:
                out.append(run)
                run = 1
            else:
                run += 1
        out.append(run)
        yield tuple(out)


def all_specs(M):
    for lengths in compositions(M):
        for eps in itertools.product((1, -1), repeat=M):
            yield TraceProductSpec(lengths, eps)


# -- moments -------------------------------------------------------------------


def test_examples():
    for N in range(1, 9):
        assert trace_product_moment(spec("S", "St"), N) == 1
        assert trace_product_moment(spec("S S"), N) == N
        assert trace_product_moment(spec("S", "S", "St"), N) == 0


@pytest.mark.parametrize("M", [2, 4])
@pytest.mark.parametrize("N", [1, 2, 3, 4])
def test_orbit_formula_matches_oracle_exhaustive(M, N):
    for s in all_specs(M):
        assert trace_product_moment(s, N) == trace_product_moment_oracle(s, N), s


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(list(all_specs(6))), st.integers(1, 3))
def test_orbit_formula_matches_oracle_m6(s, N):
    assert trace_product_moment(s, N) == trace_product_moment_oracle(s, N)


@pytest.mark.parametrize("N", [1, 2])
def test_numpy_oracle_matches_plain_loops(N):
    for s in all_specs(4):
        assert trace_product_moment_oracle(s, N) == trace_product_loops(N, s.words())


@pytest.mark.parametrize("N", [1, 2, 3, 5])
def test_single_trace_is_n_times_normalized_moment(N):
    for M in (2, 4, 6):
        for eps in itertools.product((1, -1), repeat=M):
            s = TraceProductSpec((M,), eps)
            word = tuple(0 if e == 1 else 1 for e in eps)
            assert trace_product_moment(s, N) == N * semicircular_word_moment(N, word, transpose_perm(N))


def test_even_power_leading_term():
    # N * Catalan(m) plus lower-order corrections
    for m in (1, 2, 3):
        vals = [trace_product_moment(spec(" ".join(["S"] * (2 * m))), N) for N in (10, 100)]
        assert abs(vals[1] / 100 - math.comb(2 * m, m) // (m + 1)) <= abs(vals[0] / 10 - math.comb(2 * m, m) // (m + 1))


def test_odd_total_is_zero():
    assert trace_product_moment(spec("S", "S St"), 5) == 0


def test_size_guard():
    with pytest.raises(SizeLimitError):
        trace_product_moment(TraceProductSpec((14,), (1,) * 14), 2)


def test_spec_validation():
    with pytest.raises(ValidationError):
        TraceProductSpec((2,), (1,))
    with pytest.raises(ValidationError):
        TraceProductSpec((0, 2), (1, 1))
    assert str(spec("S St", "S")) == "Tr(S St)|Tr(S)"


# -- cumulants -----------------------------------------------------------------


def test_kappa2_tr_s_tr_st():
    for N in range(1, 17):
        assert kappa_r_traces(spec("S", "St"), N) == 1


CUMULANT_CASES = [("S S", "St St"), ("S St", "S St"), ("S", "S St S"), ("S S", "S S", "S S"),
                  ("S St", "St", "S"), ("S", "St", "S", "St"), ("S S S", "St St St"), ("S", "S", "S", "S")]


def free_cumulant_of_traces(s: TraceProductSpec, N: int) -> Fraction:
    words = s.words()

    def moment(idx):
        return trace_product_moment(TraceProductSpec.from_words([words[i] for i in idx]), N)

    return free_cumulant(tuple(range(len(words))), moment)


@pytest.mark.parametrize("N", [1, 2, 3, 5])
def test_kappa_is_free_cumulant_of_traces(N):
    for words in CUMULANT_CASES:
        s = spec(*words)
        assert kappa_r_traces(s, N) == free_cumulant_of_traces(s, N), words


@pytest.mark.parametrize("N", [1, 3])
def test_classical_and_free_agree_up_to_three_traces(N):
    for words in CUMULANT_CASES:
        s = spec(*words)
        if s.r <= 3:
            assert kappa_r_traces(s, N) == classical_cumulant(s, N), words
    # four copies of Tr S: a standard semicircular, free kappa_4 = 0, classical = 2 - 3
    s = spec("S", "S", "S", "S")
    assert kappa_r_traces(s, N) == 0
    assert classical_cumulant(s, N) == -1


def test_kappa_vanishes_without_connecting_pairing():
    assert kappa_r_traces(spec("S S", "S S S"), 4) == 0


def test_kappa3_decays():
    s = spec("S S", "S S", "S S")
    vals = [kappa_r_traces(s, N) for N in NS]
    scaled = [N * abs(v) for N, v in zip(NS, vals)]
    assert max(scaled) <= 2 * scaled[0]
    assert abs(vals[-1]) < abs(vals[0]) or vals[0] == 0


# -- centered polynomials --------------------------------------------------------


def test_poly_word_validation():
    with pytest.raises(ValidationError):
        CenteredPolyWord.monomials([1, 1], [1, 2], 1)
    with pytest.raises(ValidationError):
        CenteredPolyWord.monomials([1, 1], [1, 1], 2)


def test_kappa2_centered_examples():
    for N in NS:
        assert kappa2_centered(CenteredPolyWord.monomials([1, 1], [1, -1], 1), N) == 1
        assert kappa2_centered(CenteredPolyWord.monomials([2, 2], [1, 1], 1), N) == 1


SAME_SIGN_CASES = [
    ([2, 2], [1, 1], 1),
    ([3, 3], [1, 1], 1),
    ([1, 2], [1, 1], 1),
    ([2, 1, 1, 2], [1, -1, -1, 1], 2),
    ([1, 2, 2, 1], [-1, 1, 1, -1], 2),
    ([2, 1, 3], [1, -1, -1], 2),
]
CHANGE_SIGN_CASES = [
    ([1, 2, 3], [1, -1, 1], 1),
    ([2, 2, 2], [1, 1, -1], 1),
    ([1, 1, 1], [1, 1, -1], 1),
    ([2, 1, 2], [1, -1, 1], 2),
    ([1, 1, 2, 1], [1, 1, -1, 1], 1),
]


@pytest.mark.parametrize("exps,omega,s", SAME_SIGN_CASES + CHANGE_SIGN_CASES)
def test_kappa2_two_routes_agree(exps, omega, s):
    w = CenteredPolyWord.monomials(exps, omega, s)
    for N in (1, 2, 3):
        assert kappa2_centered(w, N) == kappa2_from_moments(w, N)


@pytest.mark.parametrize("exps,omega,s", SAME_SIGN_CASES)
def test_case_i_convergence(exps, omega, s):
    w = CenteredPolyWord.monomials(exps, omega, s)
    pred = kappa2_limit_prediction(w)
    assert isinstance(pred, Fraction)
    gaps = [abs(kappa2_centered(w, N) - pred) for N in NS]
    C = max(N * g for N, g in zip(NS[:2], gaps[:2]))
    for N, g in zip(NS, gaps):
        assert g <= Fraction(C, N) or g == 0, (N, g, C)


@pytest.mark.parametrize("exps,omega,s", CHANGE_SIGN_CASES)
def test_case_ii_decay(exps, omega, s):
    w = CenteredPolyWord.monomials(exps, omega, s)
    assert kappa2_limit_prediction(w) == 0
    scaled = [N * abs(kappa2_centered(w, N)) for N in NS]
    assert max(scaled) <= max(scaled[0], 1) * 2


def test_uncovered_case():
    w = CenteredPolyWord.monomials([1, 2, 2, 1], [1, -1, 1, -1], 2)
    assert isinstance(kappa2_limit_prediction(w), NotCovered)
    assert str(kappa2_limit_prediction(w)) == "not covered by the theorem"


def test_prediction_examples():
    assert kappa2_limit_prediction(CenteredPolyWord.monomials([2, 2], [1, 1], 1)) == 1
    assert kappa2_limit_prediction(CenteredPolyWord.monomials([2, 1, 2], [1, 1, -1], 1)) == 0
    assert kappa2_limit_prediction(CenteredPolyWord.monomials([1, 2, 1, 2], [1, -1, 1, -1], 1)) == 0


def test_prediction_rejects_bad_alternation():
    with pytest.raises(ValidationError):
        kappa2_limit_prediction(CenteredPolyWord.monomials([1, 1, 1], [1, 1, 1], 1))


def test_alternating_product_limit_examples():
    sq = {2: 1}
    assert alternating_centered_product_limit([sq, sq], [1, 1], 1) == 1
    assert alternating_centered_product_limit([sq, sq], [1, -1], 1) == 0
    assert alternating_centered_product_limit([sq, {1: 1}, sq], [1, -1, 1], 2) == 0
    with pytest.raises(ValidationError):
        alternating_centered_product_limit([sq, sq, sq], [1, 1, 1], 1)


def test_limit_moment_values():
    assert limit_moment([{2: 1}, {2: 1}], [1, 1]) == 1
    assert limit_moment([{4: 1}], [1]) == 0  # centered
    assert limit_moment([{3: 1}, {3: 1}], [-1, -1]) == 5


def test_centered_products_approach_limit():
    polys = [{2: 1}, {1: 1}, {1: 1}, {2: 1}]
    omega = [1, -1, -1, 1]
    vals = [centered_product_moment(polys, omega, N) for N in NS]
    limit = alternating_centered_product_limit(polys, omega, 2)
    assert limit == 1
    assert [abs(v - limit) for v in vals] == sorted((abs(v - limit) for v in vals), reverse=True)
