"""Probability-pair belief sequences and their LLR counterparts.

A belief sequence is a float array of shape (n, 2) holding per-position
probability pairs (q0, q1) with q0 + q1 = 1.  An erasure is the
uninformative pair (0.5, 0.5).  Decoders work internally in the
log-likelihood-ratio domain, llr = ln(q0 / q1), capped at +-LLR_CAP so
certainties stay finite.
"""

from __future__ import annotations

import numpy as np
from scipy.special import expit

from .errors import DecodingFailureError

# ln(q0/q1) cap; exp(-30) ~ 9e-14 keeps certainties numerically dominant.
LLR_CAP = 30.0

# |q0 - 0.5| >= 0.5 - CERTAIN_TOL counts as a hard bit.
CERTAIN_TOL = 1e-9


def erasures(n: int) -> np.ndarray:
    """n uninformative pairs."""
    return np.full((n, 2), 0.5)


def certainty_pairs(bits: np.ndarray) -> np.ndarray:
    """Hard bits as degenerate probability pairs."""
    bits = np.asarray(bits)
    out = np.zeros((bits.size, 2))
    out[np.arange(bits.size), bits.astype(np.intp)] = 1.0
    return out


def normalize_pairs(pairs: np.ndarray) -> np.ndarray:
    """Rescale each pair to sum 1; zero-mass pairs are inconsistent evidence."""
    pairs = np.asarray(pairs, dtype=np.float64)
    totals = pairs.sum(axis=-1, keepdims=True)
    if np.any(totals <= 0.0):
        raise DecodingFailureError("belief pair with zero total probability")
    return pairs / totals


def xor_pairs(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Distribution of the XOR of two independent bits, per position."""
    a = np.asarray(a)
    b = np.asarray(b)
    out = np.empty(np.broadcast_shapes(a.shape, b.shape))
    out[..., 0] = a[..., 0] * b[..., 0] + a[..., 1] * b[..., 1]
    out[..., 1] = a[..., 0] * b[..., 1] + a[..., 1] * b[..., 0]
    return out


def is_certain(pairs: np.ndarray, tol: float = CERTAIN_TOL) -> np.ndarray:
    """Boolean mask of positions whose belief is a hard 0 or 1."""
    return np.abs(np.asarray(pairs)[..., 0] - 0.5) >= 0.5 - tol


def pairs_to_llr(pairs: np.ndarray) -> np.ndarray:
    pairs = normalize_pairs(pairs)
    with np.errstate(divide="ignore"):
        llr = np.log(pairs[..., 0]) - np.log(pairs[..., 1])
    return np.clip(llr, -LLR_CAP, LLR_CAP)


def llr_to_pairs(llr: np.ndarray) -> np.ndarray:
    llr = np.asarray(llr, dtype=np.float64)
    return np.stack([expit(llr), expit(-llr)], axis=-1)
