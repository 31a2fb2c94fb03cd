"""Exact combinatorics and finite-N moments for semicircular and Bernoulli
matrices under entry permutations."""

from .errors import InternalInconsistencyError, SizeLimitError, ValidationError
from .matrix_model import (
    EntryPermutation,
    bernoulli_word_moment,
    classify,
    identity_perm,
    left_partial_transpose,
    semicircular_word_moment,
    transpose_perm,
)
from .partitions import enumerate_nc, enumerate_nc2, enumerate_pairings, genus
from .second_order import CenteredPolyWord, TraceProductSpec, kappa2_centered, kappa_r_traces, trace_product_moment

__version__ = "0.1.0"

__all__ = [
    "CenteredPolyWord",
    "EntryPermutation",
    "InternalInconsistencyError",
    "SizeLimitError",
    "TraceProductSpec",
    "ValidationError",
    "bernoulli_word_moment",
    "classify",
    "enumerate_nc",
    "enumerate_nc2",
    "enumerate_pairings",
    "genus",
    "identity_perm",
    "kappa2_centered",
    "kappa_r_traces",
    "left_partial_transpose",
    "semicircular_word_moment",
    "trace_product_moment",
    "transpose_perm",
]
