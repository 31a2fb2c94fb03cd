# ---
# jupyter:
#   jupytext:
#     formats: py:percent
#   kernelspec:
#     display_name: Python 3
#     language: python
#     name: python3
# ---

# %% [markdown]
# # A semicircular matrix and its transpose
#
# Exact mixed moments of `S` and `S^t` at finite `N`, and an entry
# permutation for which the two are free already at `N = 2`.

# %%
import itertools
from fractions import Fraction

from permfree.matrix_model import (
    EntryPermutation,
    antidiagonal_perm,
    classify,
    commutes_with_transpose,
    format_word,
    nc2_count,
    row_fixing_count,
    semicircular_word_moment,
    transpose_perm,
)

# %%
for w in [(0, 1), (0, 1, 0, 1), (0, 0, 1, 1), (0, 1, 1, 0, 0, 1)]:
    vals = [semicircular_word_moment(N, w, transpose_perm(N)) for N in (2, 4, 8, 16)]
    print(f"{format_word(w):18s} limit {nc2_count(w)}  ", [str(v) for v in vals])

# %% [markdown]
# The moments move towards the count of label-respecting non-crossing
# pairings at rate `1/N`; the row-fixing ratio of the transpose is `1/N` too.

# %%
print([str(classify(transpose_perm(N)).ratio) for N in (2, 4, 8, 16)])

# %% [markdown]
# Search every bijection of the `2 x 2` grid for one that commutes with the
# transpose and moves every entry out of its row.

# %%
good = [
    EntryPermutation(2, img)
    for img in itertools.permutations(range(4))
    if commutes_with_transpose(EntryPermutation(2, img)) and row_fixing_count(EntryPermutation(2, img)) == 0
]
print([p.image for p in good], good[0] == antidiagonal_perm(2))

# %%
p = good[0]
for w in [(0, 1), (0, 1, 0, 1), (0, 0, 1, 1), (0, 1, 1, 0)]:
    print(format_word(w, "S", "Ss"), semicircular_word_moment(2, w, p), nc2_count(w))
