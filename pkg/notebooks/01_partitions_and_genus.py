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
# # Non-crossing partitions and genus
#
# Enumerate partitions of `[n]`, compare the counts with Catalan numbers and
# look at how the genus spreads the pairings of `[n]`.

# %%
import math
from collections import Counter

from permfree.partitions import enumerate_nc, enumerate_nc2, enumerate_pairings, genus, is_noncrossing

# %%
for n in range(1, 9):
    print(n, len(enumerate_nc(n)), math.comb(2 * n, n) // (n + 1))

# %% [markdown]
# Pairings of `[2m]`: the non-crossing ones are exactly those of genus 0.

# %%
for n in (4, 6, 8, 10):
    dist = Counter(genus(p) for p in enumerate_pairings(n))
    planar = sum(is_noncrossing(p) for p in enumerate_pairings(n))
    print(n, dict(sorted(dist.items())), "non-crossing:", planar, "NC2:", len(enumerate_nc2(n)))

# %%
p = enumerate_pairings(6)[7]
print(p, "genus", genus(p))
