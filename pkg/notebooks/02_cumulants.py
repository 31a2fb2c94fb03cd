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
# # Free and Boolean cumulants
#
# The same moment sequence read through non-crossing and through interval
# partitions gives two different cumulant sequences.

# %%
from permfree.cumulants import (
    boolean_cumulants_from_moments,
    free_cumulant,
    free_cumulants_from_moments,
    wick_free,
)

semicircle = [0, 1, 0, 2, 0, 5, 0, 14]
bernoulli = [0, 1, 0, 1, 0, 1, 0, 1]

# %%
print("semicircle free   ", [str(k) for k in free_cumulants_from_moments(semicircle)])
print("semicircle boolean", [str(k) for k in boolean_cumulants_from_moments(semicircle)])
print("bernoulli free    ", [str(k) for k in free_cumulants_from_moments(bernoulli)])
print("bernoulli boolean ", [str(k) for k in boolean_cumulants_from_moments(bernoulli)])

# %% [markdown]
# Two semicircular letters with zero cross-covariance: every mixed free
# cumulant computed from the Wick moments vanishes.

# %%
cov = {("x", "x"): 1, ("y", "y"): 1}
moment = lambda w: wick_free(w, cov)
cache = {}
for w in ["xy", "xxyy", "xyxy", "xyyx", "xxyxyy"]:
    print(w, moment(w), free_cumulant(w, moment, cache))
