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
# # Fluctuations of traces
#
# Exact covariances of unnormalized traces of words in `S` and `S^t`, and
# how centered polynomial traces approach their predicted limits.

# %%
from permfree.dsl import parse_spec
from permfree.second_order import kappa2_centered, kappa2_limit_prediction, kappa_r_traces

SWEEP = (2, 4, 8, 16)

# %%
for text in ["Tr(S)|Tr(St)", "Tr(S^2)|Tr(St^2)", "Tr(S St)|Tr(S St)", "Tr(S^2)|Tr(S^2)|Tr(S^2)"]:
    spec = parse_spec(text)
    print(f"{text:24s}", [str(kappa_r_traces(spec, N)) for N in SWEEP])

# %% [markdown]
# Centered polynomial traces. When the sign is the same on both sides of the
# cut the limit is a product of limit-algebra moments; otherwise it is 0, or
# outside what the theory covers.

# %%
for text in [
    "TrP(x^2;+)|TrP(x^2;+)",
    "TrP(x^2;+)P(x;-)|TrP(x;-)P(x^2;+)",
    "TrP(x;+)|TrP(x^2;-)P(x^3;+)",
    "TrP(x;+)P(x^2;-)|TrP(x^2;+)P(x;-)",
]:
    spec = parse_spec(text)
    pred = kappa2_limit_prediction(spec)
    print(f"{text:36s} prediction {str(pred):28s}", [str(kappa2_centered(spec, N)) for N in SWEEP])
