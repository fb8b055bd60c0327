"""Independent reference implementations the tests check against.

Everything here recomputes results by brute force or textbook methods,
deliberately avoiding the package's own code paths.
"""

from __future__ import annotations

import itertools

import numpy as np
from scipy.optimize import minimize_scalar


def entropy_bits(p: float) -> float:
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -p * np.log2(p) - (1 - p) * np.log2(1 - p)


def max_mutual_information(p1: float, p2: float) -> float:
    """Channel capacity by numeric maximization of I(X;Y) over the input bias."""

    def neg_mi(q):  # q = P(X = 1)
        w = (1 - q) * p1 + q * (1 - p2)  # P(Y = 1)
        hy = entropy_bits(w)
        hyx = (1 - q) * entropy_bits(p1) + q * entropy_bits(p2)
        return -(hy - hyx)

    res = minimize_scalar(neg_mi, bounds=(0.0, 1.0), method="bounded",
                          options={"xatol": 1e-12})
    return -res.fun


def noise_posterior(a: np.ndarray, b: np.ndarray, pi: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Exhaustive posterior bit marginals of a hidden-Markov noise sequence.

    Enumerates all 2^n bit sequences; each sequence's weight is its path
    probability under (pi, A, B) times the per-position evidence g.
    """
    n = g.shape[0]
    s = pi.size
    m = [a * b[None, :, v] for v in (0, 1)]
    post = np.zeros((n, 2))
    for bits in itertools.product((0, 1), repeat=n):
        mat = np.eye(s)
        for v in bits:
            mat = mat @ m[v]
        w = float(pi @ mat @ np.ones(s))
        for i, v in enumerate(bits):
            w *= g[i, v]
        for i, v in enumerate(bits):
            post[i, v] += w
    return post / post.sum(axis=1, keepdims=True)


def gf2_matvec(h: np.ndarray, word: np.ndarray) -> np.ndarray:
    """Row-by-row dot products mod 2."""
    out = np.zeros(h.shape[0], dtype=np.uint8)
    for i in range(h.shape[0]):
        acc = 0
        for j in range(h.shape[1]):
            acc ^= int(h[i, j]) & int(word[j])
        out[i] = acc
    return out


def hamming74_h() -> np.ndarray:
    return np.array([
        [1, 0, 1, 0, 1, 0, 1],
        [0, 1, 1, 0, 0, 1, 1],
        [0, 0, 0, 1, 1, 1, 1],
    ], dtype=np.uint8)


def hamming_codebook(h: np.ndarray) -> set[tuple[int, ...]]:
    """All length-n words with zero syndrome, by enumeration."""
    n = h.shape[1]
    book = set()
    for bits in itertools.product((0, 1), repeat=n):
        word = np.array(bits, dtype=np.uint8)
        if not gf2_matvec(h, word).any():
            book.add(bits)
    return book


def hamming_syndrome_decode(h: np.ndarray, word: np.ndarray) -> np.ndarray:
    """Single-error syndrome decoding: flip the column matching the syndrome."""
    syn = gf2_matvec(h, word)
    out = word.copy()
    if syn.any():
        for j in range(h.shape[1]):
            if np.array_equal(h[:, j], syn):
                out[j] ^= 1
                break
    return out


def peel_erasures(h: np.ndarray, word: np.ndarray, erased: np.ndarray) -> tuple[np.ndarray, bool]:
    """Iteratively resolve erasures from checks with a single erased neighbor."""
    word = word.copy()
    erased = erased.copy()
    progress = True
    while progress and erased.any():
        progress = False
        for i in range(h.shape[0]):
            idx = np.nonzero(h[i])[0]
            unknown = idx[erased[idx]]
            if unknown.size == 1:
                known = idx[~erased[idx]]
                word[unknown[0]] = np.bitwise_xor.reduce(word[known]) if known.size else 0
                erased[unknown[0]] = False
                progress = True
    return word, not erased.any()
