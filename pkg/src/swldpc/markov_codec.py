"""Distributed source coding for Markov-correlated sources: joint decoding.

Each encoder sends a shared set of equally spaced raw bits plus its share
of a systematic codeword over the remaining positions (noiseless links).
The joint decoder couples the two belief-propagation decoders through the
noise chain: per iteration it combines the sources' systematic beliefs
into noise beliefs, smooths them over the trellis, writes the result back
into whichever source is less reliable per position, and runs one
message-passing pass in each decoder; it stops when both hard decisions
satisfy their parity checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .beliefs import certainty_pairs, erasures, is_certain, llr_to_pairs, normalize_pairs, pairs_to_llr, xor_pairs
from .errors import DecodingFailureError
from .jscc import EncodedStream, StreamLayout, stream_layout
from .ldpc import BeliefPropagationDecoder, SystematicLdpcCode
from .markov import MarkovNoiseModel, Trellis, build_trellis, forward_backward_extrinsic
from .planner import CodePlan


def uncoded_positions(k: int, alpha: float) -> np.ndarray:
    """floor(k * alpha) equally spaced source positions sent raw."""
    count = math.floor(k * alpha + 1e-9)
    if count == 0:
        return np.empty(0, dtype=np.int64)
    return (np.arange(count, dtype=np.int64) * k) // count


@dataclass
class MarkovSetup:
    """Shared state for the Markov scheme at one operating point."""

    k: int
    alpha_raw: float
    plan: CodePlan
    code: SystematicLdpcCode
    model: MarkovNoiseModel
    uncoded_idx: np.ndarray = field(init=False)
    coded_idx: np.ndarray = field(init=False)
    layout: StreamLayout = field(init=False)
    trellis: Trellis = field(init=False, repr=False)
    decoder: BeliefPropagationDecoder = field(init=False, repr=False)

    def __post_init__(self):
        self.uncoded_idx = uncoded_positions(self.k, self.alpha_raw)
        mask = np.ones(self.k, dtype=bool)
        mask[self.uncoded_idx] = False
        self.coded_idx = np.nonzero(mask)[0]
        if self.coded_idx.size != self.code.k:
            raise ValueError(
                f"code carries {self.code.k} information bits but "
                f"{self.coded_idx.size} source positions are coded"
            )
        self.layout = stream_layout(self.plan, self.code.k, self.code.m_parity)
        self.trellis = build_trellis(self.model, self.k)
        self.decoder = BeliefPropagationDecoder(self.code.h)


@dataclass(frozen=True)
class MarkovStream:
    """One encoder's transmission: raw bits plus its codeword share."""

    uncoded: np.ndarray
    coded: EncodedStream


def encode_markov(setup: MarkovSetup, x1: np.ndarray, x2: np.ndarray) -> tuple[MarkovStream, MarkovStream]:
    """Raw equally spaced bits plus each source's codeword share."""
    x1 = np.asarray(x1, dtype=np.uint8)
    x2 = np.asarray(x2, dtype=np.uint8)
    if x1.shape != (setup.k,) or x2.shape != (setup.k,):
        raise ValueError(f"both sources must have {setup.k} bits")
    code, lay, m = setup.code, setup.layout, setup.code.m_parity
    c1 = code.encode(x1[setup.coded_idx])
    c2 = code.encode(x2[setup.coded_idx])
    pos1 = np.concatenate([code.sys_positions[: lay.n_info1],
                           code.parity_positions[: lay.n_par1]])
    pos2 = np.concatenate([code.sys_positions[lay.n_info1:],
                           code.parity_positions[m - lay.n_par2:]])
    return (
        MarkovStream(x1[setup.uncoded_idx].copy(), EncodedStream(c1[pos1], pos1, lay.n_info1, 1)),
        MarkovStream(x2[setup.uncoded_idx].copy(), EncodedStream(c2[pos2], pos2, lay.n_info2, 2)),
    )


def combine_to_noise_beliefs(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Beliefs about the noise bits N = X1 xor X2 from the two source beliefs."""
    return normalize_pairs(xor_pairs(a, b))


def update_systematic(a: np.ndarray, b: np.ndarray, t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Refresh each source's systematic beliefs from the noise posterior.

    Per position the more reliable side (larger |q0 - 0.5|, ties toward
    source 1) anchors; the other side becomes anchor xor t, unless it is
    already a hard bit, in which case it stays untouched.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    anchor_is_a = np.abs(a[:, 0] - 0.5) >= np.abs(b[:, 0] - 0.5)
    from_a = normalize_pairs(xor_pairs(a, t))
    from_b = normalize_pairs(xor_pairs(b, t))
    keep_a = anchor_is_a | is_certain(a)
    keep_b = ~anchor_is_a | is_certain(b)
    h = np.where(keep_a[:, None], a, from_b)
    j = np.where(keep_b[:, None], b, from_a)
    return h, j


@dataclass
class JointDecoderState:
    """Mutable per-call state of the joint decoder."""

    a: np.ndarray
    b: np.ndarray
    g: np.ndarray | None
    t: np.ndarray | None
    h: np.ndarray | None
    j: np.ndarray | None
    channel1: np.ndarray
    channel2: np.ndarray
    prior1: np.ndarray
    prior2: np.ndarray
    posterior1: np.ndarray
    posterior2: np.ndarray
    c2v1: np.ndarray
    c2v2: np.ndarray
    check_sums1: np.ndarray
    check_sums2: np.ndarray
    iteration: int


class JointDecoder:
    """Stepwise joint decoder; joint_decode drives it to convergence.

    Information crosses the source/noise interface extrinsically in both
    directions: the beliefs combined into g come from each decoder's
    received evidence plus its check messages (not the injected trellis
    prior), and the trellis returns its chain-only combine.  Feeding full
    posteriors back creates a self-reinforcing loop that locks in early
    errors and diverges.
    """

    def __init__(self, setup: MarkovSetup, stream1: MarkovStream, stream2: MarkovStream,
                 check_inputs: bool = True):
        self.setup = setup
        self.stream1 = stream1
        self.stream2 = stream2
        channel1 = self._channel_prior(stream1.coded)
        channel2 = self._channel_prior(stream2.coded)
        zeros = np.zeros(setup.code.n)
        self.state = JointDecoderState(
            a=self._source_pairs(stream1, channel1),
            b=self._source_pairs(stream2, channel2),
            g=None, t=None, h=None, j=None,
            channel1=channel1, channel2=channel2,
            prior1=channel1.copy(), prior2=channel2.copy(),
            posterior1=channel1.copy(), posterior2=channel2.copy(),
            c2v1=setup.decoder.new_messages(), c2v2=setup.decoder.new_messages(),
            check_sums1=zeros, check_sums2=zeros.copy(),
            iteration=0,
        )
        if check_inputs:
            decided = is_certain(self.state.a) | is_certain(self.state.b)
            if not np.all(decided):
                raise DecodingFailureError(
                    "encoding split leaves a position with no hard bit on either source"
                )

    def _channel_prior(self, coded: EncodedStream) -> np.ndarray:
        pairs = erasures(self.setup.code.n)
        pairs[coded.positions] = certainty_pairs(coded.payload)
        return pairs_to_llr(pairs)

    def _source_pairs(self, stream: MarkovStream, llr: np.ndarray) -> np.ndarray:
        """Length-k beliefs: raw-bit certainties plus coded-position beliefs."""
        setup = self.setup
        pairs = erasures(setup.k)
        pairs[setup.coded_idx] = llr_to_pairs(llr[setup.code.sys_positions])
        pairs[setup.uncoded_idx] = certainty_pairs(stream.uncoded)
        return pairs

    def iterate(self) -> bool:
        """One trellis pass plus one message-passing pass per decoder.

        Returns True once both hard decisions satisfy their parity checks.
        """
        setup, st = self.setup, self.state
        st.a = self._source_pairs(self.stream1, st.channel1 + st.check_sums1)
        st.b = self._source_pairs(self.stream2, st.channel2 + st.check_sums2)
        st.g = combine_to_noise_beliefs(st.a, st.b)
        st.t = forward_backward_extrinsic(setup.trellis, st.g)
        st.h, st.j = update_systematic(st.a, st.b, st.t)

        st.prior1[setup.code.sys_positions] = pairs_to_llr(st.h[setup.coded_idx])
        st.prior2[setup.code.sys_positions] = pairs_to_llr(st.j[setup.coded_idx])
        st.posterior1, st.c2v1 = setup.decoder.step(st.prior1, st.c2v1)
        st.posterior2, st.c2v2 = setup.decoder.step(st.prior2, st.c2v2)
        st.check_sums1 = st.posterior1 - st.prior1
        st.check_sums2 = st.posterior2 - st.prior2
        st.iteration += 1

        word1 = (st.posterior1 < 0.0).astype(np.uint8)
        word2 = (st.posterior2 < 0.0).astype(np.uint8)
        return setup.decoder.syndrome_ok(word1) and setup.decoder.syndrome_ok(word2)

    def source_estimates(self) -> tuple[np.ndarray, np.ndarray]:
        """Hard decisions spliced with the raw-received bits."""
        setup, st = self.setup, self.state
        out = []
        for stream, posterior in ((self.stream1, st.posterior1), (self.stream2, st.posterior2)):
            bits = np.zeros(setup.k, dtype=np.uint8)
            bits[setup.coded_idx] = (posterior[setup.code.sys_positions] < 0.0).astype(np.uint8)
            bits[setup.uncoded_idx] = stream.uncoded
            out.append(bits)
        return out[0], out[1]


class JointDecodeResult(NamedTuple):
    x1: np.ndarray
    x2: np.ndarray
    converged: bool
    iterations: int


def joint_decode(setup: MarkovSetup, stream1: MarkovStream, stream2: MarkovStream,
                 max_iter: int = 100) -> JointDecodeResult:
    """Run the coupled trellis / belief-propagation loop to convergence."""
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    decoder = JointDecoder(setup, stream1, stream2)
    converged = False
    try:
        for _ in range(max_iter):
            if decoder.iterate():
                converged = True
                break
    except DecodingFailureError:
        converged = False
    x1, x2 = decoder.source_estimates()
    return JointDecodeResult(x1, x2, converged, decoder.state.iteration)
