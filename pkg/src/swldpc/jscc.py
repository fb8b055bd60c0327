"""Memoryless joint source-channel codec: bit selection and separate decoding.

Both sources are encoded with one systematic code.  Encoder 1 transmits
the first part of the information bits plus the leading parity window of
its own codeword; encoder 2 the remaining information bits plus the
trailing parity window of its codeword.  Each decoder initializes beliefs
from its own stream's link evidence and from the other stream's
information bits viewed through the correlation channel, and treats every
untransmitted position as an erasure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .beliefs import erasures, pairs_to_llr
from .channels import BinaryAsymmetricChannel, CorrelationModel, joint_distribution
from .errors import MalformedStreamError
from .ldpc import BeliefPropagationDecoder, SystematicLdpcCode
from .planner import CodePlan


@dataclass(frozen=True)
class StreamLayout:
    """Per-encoder payload sizes for a plan at block size (k info, m parity).

    Information counts take the ceiling of the split fraction; parity
    window sizes absorb the rounding remainder so each payload matches
    its rate identity k * Rx / Rc to within one bit.
    """

    n_info1: int
    n_par1: int
    n_info2: int
    n_par2: int


def stream_layout(plan: CodePlan, k: int, m: int) -> StreamLayout:
    t = 1.0 / plan.r - 1.0
    n_info1 = math.ceil(k / plan.a - 1e-9)
    total1 = round(k * (1.0 / plan.a + t / plan.b))
    n_par1 = min(max(total1 - n_info1, 0), m)
    n_info2 = k - n_info1
    total2 = round(k * (1.0 - 1.0 / plan.a + t / plan.c))
    n_par2 = min(max(total2 - n_info2, 0), m)
    return StreamLayout(n_info1, n_par1, n_info2, n_par2)


@dataclass(frozen=True)
class EncodedStream:
    """Transmitted bits plus their codeword positions.

    The first info_count payload entries are information bits; the rest
    are parity bits.  positions maps payload index to codeword position.
    """

    payload: np.ndarray
    positions: np.ndarray
    info_count: int
    origin: int

    def __post_init__(self):
        if self.payload.shape != self.positions.shape:
            raise ValueError("payload and position arrays differ in length")
        if np.unique(self.positions).size != self.positions.size:
            raise MalformedStreamError("stream index map is not injective")

    def with_payload(self, payload: np.ndarray) -> "EncodedStream":
        return EncodedStream(payload, self.positions, self.info_count, self.origin)

    @property
    def info_positions(self) -> np.ndarray:
        return self.positions[: self.info_count]

    @property
    def parity_positions(self) -> np.ndarray:
        return self.positions[self.info_count:]


def _normalize_columns(table: np.ndarray) -> np.ndarray:
    return table / table.sum(axis=0, keepdims=True)


@dataclass
class DecoderSetup:
    """Everything both decoders share: plan, code, links, correlation.

    Belief tables are 2x2 arrays indexed [bit value, received symbol],
    normalized over the bit value, built once from the exact joint
    distribution of the two sources and the link transition matrices.
    """

    plan: CodePlan
    code: SystematicLdpcCode
    link1: BinaryAsymmetricChannel
    link2: BinaryAsymmetricChannel
    correlation: CorrelationModel
    layout: StreamLayout = field(init=False)
    decoder: BeliefPropagationDecoder = field(init=False, repr=False)

    def __post_init__(self):
        if abs(self.code.rate - self.plan.r) > 1.0 / self.code.n + 1e-9:
            raise ValueError(
                f"code rate {self.code.rate:.6f} does not match plan rate {self.plan.r:.6f}"
            )
        self.layout = stream_layout(self.plan, self.code.k, self.code.m_parity)
        self.decoder = BeliefPropagationDecoder(self.code.h)

        l1 = self.link1.transition_matrix
        l2 = self.link2.transition_matrix
        j = joint_distribution(self.correlation)
        px1 = j.sum(axis=1)
        px2 = j.sum(axis=0)
        # Posteriors for a source bit given: its own link output, the other
        # link's output (correlation cascade), or a parity bit's link output.
        self._own_sys = (_normalize_columns(px1[:, None] * l1),
                         _normalize_columns(px2[:, None] * l2))
        self._cross_sys = (_normalize_columns(j @ l2),
                           _normalize_columns(j.T @ l1))
        self._parity = (_normalize_columns(l1), _normalize_columns(l2))


def encode_pair(setup: DecoderSetup, x1: np.ndarray, x2: np.ndarray) -> tuple[EncodedStream, EncodedStream]:
    """Encode both sources with the shared code and select each payload."""
    code, lay = setup.code, setup.layout
    x1 = np.asarray(x1, dtype=np.uint8)
    x2 = np.asarray(x2, dtype=np.uint8)
    if x1.shape != (code.k,) or x2.shape != (code.k,):
        raise ValueError(f"both sources must have {code.k} bits")
    c1 = code.encode(x1)
    c2 = code.encode(x2)
    m = code.m_parity

    pos1 = np.concatenate([code.sys_positions[: lay.n_info1],
                           code.parity_positions[: lay.n_par1]])
    pos2 = np.concatenate([code.sys_positions[lay.n_info1:],
                           code.parity_positions[m - lay.n_par2:]])
    return (
        EncodedStream(c1[pos1], pos1, lay.n_info1, 1),
        EncodedStream(c2[pos2], pos2, lay.n_info2, 2),
    )


def _assign(beliefs: np.ndarray, assigned: np.ndarray, positions: np.ndarray,
            values: np.ndarray) -> None:
    clash = assigned[positions]
    if np.any(clash):
        old = beliefs[positions[clash]]
        new = values[clash]
        if np.any(np.abs(old - new) > 1e-9):
            raise MalformedStreamError("overlapping streams carry contradictory evidence")
    beliefs[positions] = values
    assigned[positions] = True


def init_beliefs(setup: DecoderSetup, decode_target: int,
                 received1: EncodedStream, received2: EncodedStream) -> np.ndarray:
    """Channel beliefs per codeword position for one source's decoder.

    Own-stream positions get the link posterior; information bits arriving
    from the other encoder get the posterior through the correlation
    cascade; everything else stays an erasure.
    """
    if decode_target not in (1, 2):
        raise ValueError("decode_target must be 1 or 2")
    own, cross = (received1, received2) if decode_target == 1 else (received2, received1)
    own_sys_table = setup._own_sys[decode_target - 1]
    cross_table = setup._cross_sys[decode_target - 1]
    parity_table = setup._parity[decode_target - 1]

    beliefs = erasures(setup.code.n)
    assigned = np.zeros(setup.code.n, dtype=bool)
    own_info = own.payload[: own.info_count].astype(np.intp)
    _assign(beliefs, assigned, own.info_positions, own_sys_table.T[own_info])
    own_par = own.payload[own.info_count:].astype(np.intp)
    _assign(beliefs, assigned, own.parity_positions, parity_table.T[own_par])
    cross_info = cross.payload[: cross.info_count].astype(np.intp)
    _assign(beliefs, assigned, cross.info_positions, cross_table.T[cross_info])
    return beliefs


class SourceDecodeResult(NamedTuple):
    bits: np.ndarray
    converged: bool
    iterations: int


def decode_source(setup: DecoderSetup, beliefs: np.ndarray,
                  max_iter: int = 100) -> SourceDecodeResult:
    """Run sum-product on the beliefs and return the systematic bits."""
    result = setup.decoder.decode(pairs_to_llr(beliefs), max_iter)
    return SourceDecodeResult(result.word[setup.code.sys_positions],
                              result.converged, result.iterations)
