"""Hidden-Markov noise models, their trellises, and posterior smoothing.

The noise process is a finite-state chain: a transition matrix A, per-state
emission probabilities B over {0, 1}, and an initial state distribution pi.
The trellis unrolls the chain with two parallel branches (one per emitted
bit) between every connected state pair; forward_backward turns soft
per-position evidence about the emitted bits into posterior bit beliefs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .beliefs import normalize_pairs
from .errors import DecodingFailureError, UnsupportedModelError

_ROW_TOL = 1e-9


@dataclass
class MarkovNoiseModel:
    """Chain parameters: A (S x S), B (S x 2), pi (S,)."""

    a: np.ndarray
    b: np.ndarray
    pi: np.ndarray

    def __post_init__(self):
        self.a = np.asarray(self.a, dtype=np.float64)
        self.b = np.asarray(self.b, dtype=np.float64)
        self.pi = np.asarray(self.pi, dtype=np.float64)

    @property
    def n_states(self) -> int:
        return self.a.shape[0]


def two_state_model(p: float) -> MarkovNoiseModel:
    """Two deterministic-emission states (emit 0 / emit 1), switch probability p."""
    return MarkovNoiseModel(
        a=np.array([[1.0 - p, p], [p, 1.0 - p]]),
        b=np.array([[1.0, 0.0], [0.0, 1.0]]),
        pi=np.array([0.5, 0.5]),
    )


def validate(model: MarkovNoiseModel) -> list[str]:
    """Violation messages for the stochasticity invariants (empty = ok)."""
    violations = []
    s = model.n_states
    if model.a.shape != (s, s):
        violations.append(f"A must be square, got shape {model.a.shape}")
    if model.b.shape != (s, 2):
        violations.append(f"B must be {s}x2, got shape {model.b.shape}")
    if model.pi.shape != (s,):
        violations.append(f"pi must have length {s}, got shape {model.pi.shape}")
    if violations:
        return violations
    for name, mat in (("A", model.a), ("B", model.b)):
        if np.any(mat < 0.0):
            row = int(np.nonzero(np.any(mat < 0.0, axis=1))[0][0])
            violations.append(f"{name} row {row} has a negative entry")
        bad = np.nonzero(np.abs(mat.sum(axis=1) - 1.0) > _ROW_TOL)[0]
        if bad.size:
            violations.append(f"{name} row {int(bad[0])} sums to {mat[bad[0]].sum():.9f}")
    if np.any(model.pi < 0.0):
        violations.append("pi has a negative entry")
    if abs(model.pi.sum() - 1.0) > _ROW_TOL:
        violations.append(f"pi sums to {model.pi.sum():.9f}")
    return violations


def _require_valid(model: MarkovNoiseModel):
    violations = validate(model)
    if violations:
        raise ValueError("invalid Markov model: " + "; ".join(violations))


def sample_noise(model: MarkovNoiseModel, n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw an n-bit noise sequence.

    The start state is drawn from pi; each step first transitions via A
    and then emits from the B row of the state just entered, matching the
    trellis convention (edge prior A[s', s] * B[s, bit]).
    """
    _require_valid(model)
    cum_pi = np.cumsum(model.pi)
    cum_a = np.cumsum(model.a, axis=1)
    u_state = rng.random(n + 1)
    u_bit = rng.random(n)
    bits = np.empty(n, dtype=np.uint8)
    s = min(int(np.searchsorted(cum_pi, u_state[0], side="right")), model.n_states - 1)
    for t in range(n):
        s = min(int(np.searchsorted(cum_a[s], u_state[t + 1], side="right")), model.n_states - 1)
        bits[t] = u_bit[t] >= model.b[s, 0]
    return bits


def stationary_distribution(model: MarkovNoiseModel) -> np.ndarray:
    """Left fixed point of A, normalized to sum 1."""
    s = model.n_states
    m = np.vstack([model.a.T - np.eye(s), np.ones((1, s))])
    rhs = np.zeros(s + 1)
    rhs[-1] = 1.0
    mu, *_ = np.linalg.lstsq(m, rhs, rcond=None)
    if np.any(mu < -1e-9) or abs(mu.sum() - 1.0) > 1e-9:
        raise ValueError("chain has no valid stationary distribution")
    return np.clip(mu, 0.0, None) / mu.sum()


def entropy_rate(model: MarkovNoiseModel) -> float:
    """Bits per symbol of the emitted process, for deterministic emissions.

    Each state must emit a fixed bit; the rate is then the entropy rate
    of the state chain itself: sum_i mu_i sum_j -a_ij log2 a_ij with mu
    the stationary distribution.
    """
    _require_valid(model)
    if np.any(np.abs(model.b - np.rint(model.b)) > _ROW_TOL):
        raise UnsupportedModelError("entropy rate requires deterministic per-state emissions")
    mu = stationary_distribution(model)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(model.a > 0.0, -model.a * np.log2(np.where(model.a > 0.0, model.a, 1.0)), 0.0)
    return float(mu @ terms.sum(axis=1))


@dataclass
class Trellis:
    """Unrolled chain: per-stage edge set with priors A[src, dst] * B[dst, bit].

    The chain is homogeneous so one edge set describes every stage;
    n_stages records the unrolled length.  m0/m1 collect the same priors
    as S x S matrices, split by emitted bit, for vectorized recursions.
    """

    pi: np.ndarray
    n_stages: int
    src: np.ndarray = field(repr=False)
    dst: np.ndarray = field(repr=False)
    bit: np.ndarray = field(repr=False)
    prior: np.ndarray = field(repr=False)
    m0: np.ndarray = field(repr=False)
    m1: np.ndarray = field(repr=False)


def build_trellis(model: MarkovNoiseModel, n: int) -> Trellis:
    """Edges for every (src, dst) pair with positive transition probability.

    Parallel branches carry the two bit values; branches whose combined
    prior A * B is zero are pruned.
    """
    _require_valid(model)
    m0 = model.a * model.b[None, :, 0]
    m1 = model.a * model.b[None, :, 1]
    src_list, dst_list, bit_list, prior_list = [], [], [], []
    for v, mat in ((0, m0), (1, m1)):
        s_idx, d_idx = np.nonzero(mat > 0.0)
        src_list.append(s_idx)
        dst_list.append(d_idx)
        bit_list.append(np.full(s_idx.size, v, dtype=np.uint8))
        prior_list.append(mat[s_idx, d_idx])
    return Trellis(
        pi=model.pi.copy(),
        n_stages=n,
        src=np.concatenate(src_list),
        dst=np.concatenate(dst_list),
        bit=np.concatenate(bit_list),
        prior=np.concatenate(prior_list),
        m0=m0,
        m1=m1,
    )


def _scan_prefix(m: np.ndarray, renormalize: bool) -> np.ndarray:
    """Inclusive left-to-right products P[i] = m[0] @ ... @ m[i]."""
    p = m.copy()
    off = 1
    while off < p.shape[0]:
        p[off:] = np.matmul(p[:-off], p[off:])
        if renormalize:
            norms = p.sum(axis=(1, 2), keepdims=True)
            if np.any(norms <= 0.0):
                raise DecodingFailureError("evidence assigns zero mass to every noise path")
            p /= norms
        off *= 2
    return p


def _scan_suffix(m: np.ndarray, renormalize: bool) -> np.ndarray:
    """Inclusive right-to-left products Q[i] = m[i] @ ... @ m[-1]."""
    q = m.copy()
    off = 1
    while off < q.shape[0]:
        q[:-off] = np.matmul(q[:-off], q[off:])
        if renormalize:
            norms = q.sum(axis=(1, 2), keepdims=True)
            if np.any(norms <= 0.0):
                raise DecodingFailureError("evidence assigns zero mass to every noise path")
            q /= norms
        off *= 2
    return q


def _alpha_beta(trellis: Trellis, g: np.ndarray, renormalize: bool) -> tuple[np.ndarray, np.ndarray]:
    """State beliefs before (alpha) and after (beta) each stage, given evidence g."""
    n = trellis.n_stages
    m = g[:, 0, None, None] * trellis.m0 + g[:, 1, None, None] * trellis.m1
    if renormalize:
        norms = m.sum(axis=(1, 2), keepdims=True)
        if np.any(norms <= 0.0):
            raise DecodingFailureError("evidence assigns zero mass to every noise path")
        m = m / norms

    s = trellis.pi.size
    alpha_pre = np.empty((n, s))
    alpha_pre[0] = trellis.pi
    beta_post = np.empty((n, s))
    beta_post[n - 1] = 1.0
    if n > 1:
        prefix = _scan_prefix(m[:-1], renormalize)
        alpha_pre[1:] = np.einsum("s,nst->nt", trellis.pi, prefix)
        suffix = _scan_suffix(m[1:], renormalize)
        beta_post[:-1] = suffix.sum(axis=2)
    return alpha_pre, beta_post


def _check_evidence(trellis: Trellis, g: np.ndarray) -> np.ndarray:
    g = np.asarray(g, dtype=np.float64)
    if g.shape != (trellis.n_stages, 2):
        raise ValueError(f"evidence shape {g.shape} does not match trellis length {trellis.n_stages}")
    if np.any(g < 0.0):
        raise ValueError("evidence entries must be nonnegative")
    return g


def forward_backward(trellis: Trellis, g: np.ndarray, renormalize: bool = True) -> np.ndarray:
    """Posterior bit beliefs t given per-position evidence g.

    Runs the forward recursion from pi and the backward recursion from an
    uninformative terminal, then combines them per stage:

        t_n(x) ~ g_n(x) * alpha_{n-1} @ M_x @ beta_n

    where M_x[src, dst] = A[src, dst] B[dst, x].  Every stage is
    renormalized so beliefs survive long sequences; positions whose total
    mass vanishes signal inconsistent evidence.
    """
    g = _check_evidence(trellis, g)
    alpha_pre, beta_post = _alpha_beta(trellis, g, renormalize)
    t = np.stack([
        g[:, 0] * np.einsum("ns,st,nt->n", alpha_pre, trellis.m0, beta_post),
        g[:, 1] * np.einsum("ns,st,nt->n", alpha_pre, trellis.m1, beta_post),
    ], axis=1)
    return normalize_pairs(t)


def forward_backward_extrinsic(trellis: Trellis, g: np.ndarray,
                               renormalize: bool = True) -> np.ndarray:
    """Chain-only bit beliefs: the posterior combine without the g_n factor.

    This is what iterative loops must feed back to the nodes that produced
    g_n; returning the full posterior would hand each decoder its own
    evidence again.  At positions where g_n is uninformative it coincides
    with forward_backward.
    """
    g = _check_evidence(trellis, g)
    alpha_pre, beta_post = _alpha_beta(trellis, g, renormalize)
    t = np.stack([
        np.einsum("ns,st,nt->n", alpha_pre, trellis.m0, beta_post),
        np.einsum("ns,st,nt->n", alpha_pre, trellis.m1, beta_post),
    ], axis=1)
    return normalize_pairs(t)


def load_markov_model(path) -> MarkovNoiseModel:
    """Read a model from whitespace-separated decimal text.

    Layout: the state count S, then the S x S transition matrix row-major,
    the S x 2 emission matrix row-major, and the length-S initial
    distribution.
    """
    with open(path, "r", encoding="ascii") as fh:
        tokens = fh.read().split()
    if not tokens:
        raise ValueError(f"empty model file: {path}")
    s = int(tokens[0])
    need = 1 + s * s + 2 * s + s
    if len(tokens) != need:
        raise ValueError(f"model file holds {len(tokens)} values, expected {need} for S={s}")
    vals = np.array([float(tok) for tok in tokens[1:]])
    model = MarkovNoiseModel(
        a=vals[: s * s].reshape(s, s),
        b=vals[s * s: s * s + 2 * s].reshape(s, 2),
        pi=vals[s * s + 2 * s:],
    )
    _require_valid(model)
    return model


def save_markov_model(model: MarkovNoiseModel, path):
    """Write a model in the format load_markov_model reads."""
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"{model.n_states}\n")
        for mat in (model.a, model.b):
            for row in mat:
                fh.write(" ".join(format(v, ".17g") for v in row) + "\n")
        fh.write(" ".join(format(v, ".17g") for v in model.pi) + "\n")
