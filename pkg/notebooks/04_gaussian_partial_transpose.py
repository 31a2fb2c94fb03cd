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
# # Gaussian matrices and the partial transpose
#
# Monte Carlo against the exact genus expansion, then the gap between a
# block-transposed Gaussian word and its semicircular counterpart.

# %%
import numpy as np

from permfree.gaussian_mc import (
    BlockWordSpec,
    empirical_word_moment,
    exact_limit_gap,
    genus_expansion_moment,
)
from permfree.matrix_model import identity_perm, transpose_perm

# %%
for N in (2, 4, 8):
    exact = genus_expansion_moment(BlockWordSpec(1, ((1, 1),) * 4), N)
    est = empirical_word_moment("G G G G", identity_perm(1), N, samples=4000, seed=N)
    print(N, exact, f"{est.mean:.4f} +- {est.stderr:.4f}")

# %% [markdown]
# With two blocks per side, `G Gt G Gt` sits exactly `1/(4 N^2)` above its
# semicircular value.

# %%
for N in (2, 4, 8, 16):
    print(N, exact_limit_gap("G Gt G Gt", transpose_perm(2), 2, N))

# %%
est = empirical_word_moment("G Gt G Gt", transpose_perm(2), 8, samples=4000, seed=1)
print(f"{est.mean:.4f} +- {est.stderr:.4f}", np.round(0.5 + 1 / 256, 6))
