"""Binary channels, entropies, and capacity formulas.

The correlation between the two sources is a binary asymmetric channel
(BAC) applied to a biased input: X2 is X1 passed through BAC(p1, p2)
where P(X1 = 0) = alpha.  Capacities of the X1->X2 direction and the
reversed X2->X1 direction drive all rate planning.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import DegenerateChannelError

_DEGENERATE_TOL = 1e-12


def binary_entropy(p: float) -> float:
    """Entropy in bits of a Bernoulli(p) variable; h(0) = h(1) = 0."""
    if p < 0.0 or p > 1.0:
        raise ValueError(f"probability out of range: {p}")
    if p == 0.0 or p == 1.0:
        return 0.0
    return float(-p * np.log2(p) - (1.0 - p) * np.log2(1.0 - p))


def invert_binary_entropy(target: float) -> float:
    """The p in [0, 1/2] with binary_entropy(p) == target."""
    if target < 0.0 or target > 1.0:
        raise ValueError(f"entropy out of range: {target}")
    if target == 0.0:
        return 0.0
    if target == 1.0:
        return 0.5
    return float(brentq(lambda p: binary_entropy(p) - target, 1e-300, 0.5))


@dataclass(frozen=True)
class BinaryAsymmetricChannel:
    """Memoryless binary channel flipping 0->1 with p1 and 1->0 with p2."""

    p1: float
    p2: float

    def __post_init__(self):
        for name, p in (("p1", self.p1), ("p2", self.p2)):
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} out of range: {p}")
        if abs(self.p1 + self.p2 - 1.0) < _DEGENERATE_TOL:
            raise DegenerateChannelError(
                f"p1 + p2 = 1 leaves output independent of input (p1={self.p1}, p2={self.p2})"
            )

    @property
    def transition_matrix(self) -> np.ndarray:
        """Rows indexed by input bit, columns by output bit."""
        return np.array([[1.0 - self.p1, self.p1], [self.p2, 1.0 - self.p2]])

    @property
    def is_symmetric(self) -> bool:
        return self.p1 == self.p2


def bsc(p: float) -> BinaryAsymmetricChannel:
    """Binary symmetric channel as the p1 == p2 special case."""
    return BinaryAsymmetricChannel(p, p)


@dataclass(frozen=True)
class CorrelationModel:
    """Joint law of (X1, X2): P(X1 = 0) = alpha, X2 = forward(X1)."""

    alpha: float
    forward: BinaryAsymmetricChannel

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie strictly inside (0, 1): {self.alpha}")


def bac_capacity(ch: BinaryAsymmetricChannel) -> float:
    """Capacity in bits per use of a binary asymmetric channel.

    Closed form: with z = 1 / (1 + 2^((h(p1) - h(p2)) / (1 - p1 - p2)))
    and beta = (z - p2) / (1 - p1 - p2), capacity is
    h(z) - beta h(p1) - (1 - beta) h(p2).  beta is the input bias
    achieving the maximum; inputs are mirror-swapped when p1 + p2 > 1.
    """
    p1, p2 = ch.p1, ch.p2
    if p1 + p2 > 1.0:
        p1, p2 = 1.0 - p2, 1.0 - p1
    d = 1.0 - p1 - p2
    h1, h2 = binary_entropy(p1), binary_entropy(p2)
    z = 1.0 / (1.0 + 2.0 ** ((h1 - h2) / d))
    beta = (z - p2) / d
    cap = binary_entropy(z) - beta * h1 - (1.0 - beta) * h2
    return float(min(1.0, max(0.0, cap)))


def backward_channel(model: CorrelationModel) -> BinaryAsymmetricChannel:
    """Crossovers of the reversed X2 -> X1 channel, closed form.

    p1' = p2 (1 - alpha) / (alpha (1 - p1) + (1 - alpha) p2)
    p2' = p1 alpha / (alpha p1 + (1 - alpha) (1 - p1))
    """
    a, p1, p2 = model.alpha, model.forward.p1, model.forward.p2
    d1 = a * (1.0 - p1) + (1.0 - a) * p2
    d2 = a * p1 + (1.0 - a) * (1.0 - p1)
    if d1 < _DEGENERATE_TOL or d2 < _DEGENERATE_TOL:
        raise DegenerateChannelError("joint distribution puts no mass on one X2 value")
    return BinaryAsymmetricChannel(p2 * (1.0 - a) / d1, p1 * a / d2)


def backward_capacity(model: CorrelationModel) -> float:
    """Capacity of the reversed channel."""
    return bac_capacity(backward_channel(model))


def joint_distribution(model: CorrelationModel) -> np.ndarray:
    """2x2 array J[x1, x2] = P(X1 = x1, X2 = x2)."""
    prior = np.array([model.alpha, 1.0 - model.alpha])
    return prior[:, None] * model.forward.transition_matrix


def posterior_channel(model: CorrelationModel) -> BinaryAsymmetricChannel:
    """Exact Bayes inversion: the X2 -> X1 channel P(x1 | x2).

    Unlike backward_channel this is the honest conditional of the joint
    distribution; it is what decoders use to weigh cross-source evidence.
    """
    j = joint_distribution(model)
    py = j.sum(axis=0)
    if py.min() < _DEGENERATE_TOL:
        raise DegenerateChannelError("joint distribution puts no mass on one X2 value")
    return BinaryAsymmetricChannel(j[1, 0] / py[0], j[0, 1] / py[1])


def x2_bias(model: CorrelationModel) -> float:
    """P(X2 = 0) under the model."""
    return float(joint_distribution(model)[:, 0].sum())


def joint_entropy(model: CorrelationModel) -> float:
    """H(X1, X2) = h(alpha) + alpha h(p1) + (1 - alpha) h(p2), in bits per pair."""
    a, p1, p2 = model.alpha, model.forward.p1, model.forward.p2
    return binary_entropy(a) + a * binary_entropy(p1) + (1.0 - a) * binary_entropy(p2)


def transmit(ch: BinaryAsymmetricChannel, bits: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Pass bits through the channel, flipping each independently."""
    bits = np.asarray(bits, dtype=np.uint8)
    u = rng.random(bits.shape)
    flip = np.where(bits == 0, u < ch.p1, u < ch.p2)
    return bits ^ flip.astype(np.uint8)
