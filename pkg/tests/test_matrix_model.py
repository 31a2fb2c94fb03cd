import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import catalan, entry_moment_loops
from permfree.errors import SizeLimitError, ValidationError
from permfree.matrix_model import (
    ASYMPTOTIC,
    EXACT,
    FAILS,
    EntryPermutation,
    antidiagonal_perm,
    bernoulli_word_moment,
    bernoulli_word_moment_oracle,
    builtin_perm,
    classify,
    commutes_with_transpose,
    format_word,
    from_mapping,
    identity_perm,
    left_partial_transpose,
    nc2_count,
    parse_word,
    ratio_sweep,
    read_mapping_file,
    row_fixing_count,
    semicircular_word_moment,
    semicircular_word_moment_oracle,
    transpose_perm,
    write_mapping_file,
)


def all_words(max_len):
    for M in range(1, max_len + 1):
        yield from itertools.product((0, 1), repeat=M)


def row_shift(N):
    return from_mapping((((i, j), (i, j % N + 1)) for i in range(1, N + 1) for j in range(1, N + 1)), N)


# -- permutations -----------------------------------------------------------


def test_transpose_maps():
    assert transpose_perm(2)(1, 2) == (2, 1)
    assert left_partial_transpose(2, 1) == transpose_perm(2)
    assert left_partial_transpose(1, 3) == identity_perm(3)


def test_partial_transpose_moves_whole_blocks():
    p = left_partial_transpose(2, 2)
    # entry (1,3) sits in block (1,2) at offset (1,1); it moves to block (2,1)
    assert p(1, 3) == (3, 1)
    assert p(2, 4) == (4, 2)
    assert p(1, 1) == (1, 1)


def test_from_mapping_rejects_duplicates():
    with pytest.raises(ValidationError):
        from_mapping([((1, 1), (1, 1)), ((1, 2), (1, 1)), ((2, 1), (2, 1)), ((2, 2), (2, 2))])
    with pytest.raises(ValidationError):
        from_mapping([((1, 1), (1, 1))], N=2)
    with pytest.raises(ValidationError):
        EntryPermutation(2, (0, 0, 1, 2))


def test_mapping_file_roundtrip(tmp_path):
    p = left_partial_transpose(2, 2)
    path = tmp_path / "lpt.txt"
    write_mapping_file(p, path)
    assert read_mapping_file(path) == p
    bad = tmp_path / "bad.txt"
    bad.write_text("1 1 -> 1\n")
    with pytest.raises(ValidationError):
        read_mapping_file(bad)


def test_builtin_names():
    assert builtin_perm("transpose", 3) == transpose_perm(3)
    assert builtin_perm("lpt:2", 4) == left_partial_transpose(2, 2)
    with pytest.raises(ValidationError):
        builtin_perm("lpt:3", 4)
    with pytest.raises(ValidationError):
        builtin_perm("nope", 2)


def test_inverse_and_compose():
    p = left_partial_transpose(2, 3)
    assert p.compose(p.inverse()).is_identity()
    assert transpose_perm(4).compose(transpose_perm(4)).is_identity()
    assert transpose_perm(3).is_transpose()


def test_word_parsing():
    assert parse_word("S St S") == (0, 1, 0)
    assert parse_word("B Bs") == (0, 1)
    assert format_word((0, 1)) == "S St"
    with pytest.raises(ValidationError):
        parse_word("S Q")


# -- conditions -------------------------------------------------------------


def test_commutation_examples():
    assert commutes_with_transpose(transpose_perm(5))
    assert commutes_with_transpose(identity_perm(5))
    assert not commutes_with_transpose(row_shift(3))
    assert commutes_with_transpose(left_partial_transpose(2, 3))


@pytest.mark.parametrize("N", [1, 2, 3, 5, 8, 16, 32])
def test_row_fixing_counts(N):
    assert row_fixing_count(transpose_perm(N)) == N
    assert row_fixing_count(identity_perm(N)) == N * N


def test_row_fixing_partial_transpose():
    assert row_fixing_count(left_partial_transpose(2, 2)) == 8


def test_classify():
    v = classify(transpose_perm(6))
    assert v.verdict == ASYMPTOTIC and v.ratio == Fraction(1, 6)
    v = classify(identity_perm(4))
    assert v.verdict == FAILS and v.ratio == 1
    v = classify(antidiagonal_perm(2))
    assert v.verdict == EXACT and v.row_fixing_count == 0
    assert classify(row_shift(3)).verdict == FAILS


def test_ratio_sweep_transpose():
    assert ratio_sweep(transpose_perm, [2, 4, 8]) == [(2, Fraction(1, 2)), (4, Fraction(1, 4)), (8, Fraction(1, 8))]


# -- moments ----------------------------------------------------------------


@pytest.mark.parametrize("N", range(1, 6))
@pytest.mark.parametrize("m", range(1, 5))
def test_catalan_moments(N, m):
    for p in (identity_perm(N), transpose_perm(N)):
        assert semicircular_word_moment(N, (0,) * (2 * m), p) == catalan(m)
        assert semicircular_word_moment(N, (1,) * (2 * m), p) == catalan(m)


@pytest.mark.parametrize("N", range(1, 17))
def test_s_st(N):
    assert semicircular_word_moment(N, "S St", transpose_perm(N)) == Fraction(1, N)


def test_alternating_transpose_word():
    # brute-force oracle values for S St S St
    assert [semicircular_word_moment(N, "S St S St", transpose_perm(N)) for N in (1, 2, 3)] == [
        entry_moment_loops(N, (0, 1, 0, 1), lambda i, j: (j, i)) for N in (1, 2, 3)
    ]
    assert semicircular_word_moment(2, "S St S St", transpose_perm(2)) == Fraction(1, 2)


@pytest.mark.parametrize("N", range(1, 5))
def test_engine_matches_oracle(N):
    perms = [identity_perm(N), transpose_perm(N)]
    if N == 4:
        perms.append(left_partial_transpose(2, 2))
    if N % 2 == 0:
        perms.append(antidiagonal_perm(N))
    for p in perms:
        for w in all_words(6):
            assert semicircular_word_moment(N, w, p) == semicircular_word_moment_oracle(N, w, p), (p.name, w)
            assert bernoulli_word_moment(N, w, p) == bernoulli_word_moment_oracle(N, w, p), (p.name, w)


@pytest.mark.parametrize("N", [1, 2, 3])
def test_oracle_matches_plain_loops(N):
    t = transpose_perm(N)
    for w in all_words(4):
        assert semicircular_word_moment_oracle(N, w, t) == entry_moment_loops(N, w, t)
        assert bernoulli_word_moment_oracle(N, w, t) == entry_moment_loops(N, w, t, boolean=True)


@settings(max_examples=15, deadline=None)
@given(st.permutations(range(9)), st.lists(st.sampled_from((0, 1)), min_size=2, max_size=6))
def test_engine_matches_oracle_random_sigma(image, word):
    p = EntryPermutation(3, tuple(image))
    assert semicircular_word_moment(3, word, p) == semicircular_word_moment_oracle(3, word, p)


def test_basic_oracle_values():
    for N in range(1, 5):
        assert semicircular_word_moment_oracle(N, "S S", identity_perm(N)) == 1
        assert semicircular_word_moment_oracle(N, "S S S", identity_perm(N)) == 0


@st.composite
def commuting_sigma(draw, N):
    """Random entry permutation commuting with t: diagonal points go to diagonal
    points, off-diagonal t-orbits {(i,j),(j,i)} go to off-diagonal orbits."""
    diag = [(i, i) for i in range(1, N + 1)]
    pairs = [(i, j) for i in range(1, N + 1) for j in range(i + 1, N + 1)]
    dimg = draw(st.permutations(diag))
    pimg = draw(st.permutations(pairs))
    flips = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    mapping = list(zip(diag, dimg))
    for (i, j), (k, l), f in zip(pairs, pimg, flips):
        if f:
            k, l = l, k
        mapping += [((i, j), (k, l)), ((j, i), (l, k))]
    return from_mapping(mapping, N)


@settings(max_examples=20, deadline=None)
@given(st.integers(2, 4).flatmap(commuting_sigma))
def test_commuting_sigma_keeps_semicircle(p):
    assert commutes_with_transpose(p)
    for m in (1, 2, 3):
        assert semicircular_word_moment(p.N, (1,) * (2 * m), p) == catalan(m)


def test_decay_for_words_without_respecting_pairings():
    for w in all_words(6):
        if len(w) % 2 or nc2_count(w) or 1 not in w:
            continue
        scaled = [N * semicircular_word_moment(N, w, transpose_perm(N)) for N in (2, 4, 8, 16)]
        assert max(scaled) <= 2 * scaled[0] + 2, (w, scaled)


def test_moment_tends_to_nc2_count():
    for w in [(0, 1, 1, 0), (0, 0, 1, 1), (0, 1, 0, 1), (0, 1, 1, 0, 0, 1)]:
        gaps = [abs(semicircular_word_moment(N, w, transpose_perm(N)) - nc2_count(w)) for N in (4, 8, 16)]
        assert gaps[2] <= gaps[0]


def test_bernoulli_values():
    for N in range(1, 5):
        for p in range(1, 4):
            assert bernoulli_word_moment(N, (0,) * (2 * p), transpose_perm(N)) == 1
        assert bernoulli_word_moment(N, (0,) * 3, transpose_perm(N)) == 0
    assert bernoulli_word_moment(3, "B Bs B Bs", transpose_perm(3)) == Fraction(1, 9)


def test_size_guard():
    with pytest.raises(SizeLimitError):
        semicircular_word_moment_oracle(20, (0,) * 8, identity_perm(20))
