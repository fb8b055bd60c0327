"""Monte-Carlo sweep harness and CSV emission.

Two experiment families: the memoryless scheme swept over the second
crossover of the correlation channel (which moves the joint entropy of
the source pair), and the Markov scheme swept over the switch probability
of the two-state noise chain.  Randomness comes from a counter-based
generator keyed per (seed, point, trial) so trials are independent,
reproducible, and safe to split across workers.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field

import numpy as np

from . import jscc, markov_codec
from .channels import (
    BinaryAsymmetricChannel,
    CorrelationModel,
    bac_capacity,
    backward_capacity,
    bsc,
    joint_entropy,
    transmit,
)
from .errors import ConfigError, ConstructionError
from .ldpc import SystematicLdpcCode, construct_regular, to_systematic
from .markov import entropy_rate, sample_noise, two_state_model
from .planner import CodePlan, RateTargets, repuncture, solve_plan, sw_plan

_CODE_STREAM = 0xC0DE


def derived_rng(seed: int, *key: int) -> np.random.Generator:
    """Independent generator for one (point, trial) cell."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence((seed,) + key)))


def build_systematic_code(k: int, rate: float, seed: int,
                          max_attempts: int = 25) -> SystematicLdpcCode:
    """Full-rank regular code with exactly k information bits.

    Retries construction with derived seeds until the parity-check matrix
    has full row rank, so the systematic block matches the source length.
    """
    m = int(round(k * (1.0 / rate - 1.0)))
    n = k + m
    for attempt in range(max_attempts):
        rng = derived_rng(seed, _CODE_STREAM, attempt)
        code = to_systematic(construct_regular(n, k / n, rng))
        if code.k == k:
            return code
    raise ConstructionError(f"no full-rank construction for n={n}, k={k} in {max_attempts} tries")


@dataclass
class SweepConfig:
    """Parsed simulation parameters for either scheme."""

    scheme: str
    k: int
    trials: int
    seed: int
    max_iter: int
    sweep: list[float]
    rx1: float
    rx2: float
    # memoryless fields
    alpha: float = 0.0
    p1: float = 0.0
    p2_design: float = 0.0
    rc1: float = 1.0
    rc2: float = 1.0
    link1_p: float = 0.0
    link2_p: float = 0.0
    # markov fields (alpha is reused as the uncoded fraction)
    design_cf: float = 0.0
    design_cb: float = 0.0

    def __post_init__(self):
        if self.scheme not in ("memoryless", "markov"):
            raise ConfigError(f"unknown scheme: {self.scheme}")
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1: {self.trials}")
        if not self.sweep:
            raise ConfigError("sweep list is empty")
        diffs = np.diff(self.sweep)
        if len(self.sweep) > 1 and not (np.all(diffs > 0) or np.all(diffs < 0)):
            raise ConfigError("sweep values must be strictly monotone")

    @classmethod
    def from_file(cls, path) -> "SweepConfig":
        raw = parse_config_file(path)
        try:
            scheme = raw.pop("scheme")
            common = dict(
                scheme=scheme,
                k=int(raw.pop("k")),
                trials=int(raw.pop("trials")),
                seed=int(raw.pop("seed")),
                max_iter=int(raw.pop("max_iter", "100")),
                sweep=[float(tok) for tok in raw.pop("sweep").split(",")],
                rx1=float(raw.pop("rx1")),
                rx2=float(raw.pop("rx2")),
            )
            if scheme == "memoryless":
                cfg = cls(
                    **common,
                    alpha=float(raw.pop("alpha")),
                    p1=float(raw.pop("p1")),
                    p2_design=float(raw.pop("p2_design")),
                    rc1=float(raw.pop("rc1")),
                    rc2=float(raw.pop("rc2")),
                    link1_p=float(raw.pop("link1_p")),
                    link2_p=float(raw.pop("link2_p")),
                )
            else:
                cfg = cls(
                    **common,
                    alpha=float(raw.pop("alpha")),
                    design_cf=float(raw.pop("design_cf")),
                    design_cb=float(raw.pop("design_cb")),
                )
        except KeyError as exc:
            raise ConfigError(f"missing config key: {exc.args[0]}") from None
        except ValueError as exc:
            raise ConfigError(f"bad config value: {exc}") from None
        if raw:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(raw))}")
        return cfg


def parse_config_file(path) -> dict[str, str]:
    """key = value lines; # starts a comment; later keys override earlier."""
    out: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"line {lineno}: expected 'key = value'")
            key, value = line.split("=", 1)
            out[key.strip()] = value.strip()
    return out


@dataclass
class SweepRow:
    """Aggregated Monte-Carlo results for one sweep point."""

    sweep: float
    entropy: float
    ber1: float
    ber2: float
    fer: float
    iters: float
    trials: int


def memoryless_plan(config: SweepConfig) -> CodePlan:
    design = CorrelationModel(config.alpha, BinaryAsymmetricChannel(config.p1, config.p2_design))
    targets = RateTargets(
        rx1=config.rx1, rx2=config.rx2, rc1=config.rc1, rc2=config.rc2,
        cf=bac_capacity(design.forward), cb=backward_capacity(design),
    )
    return repuncture(solve_plan(targets))


def run_memoryless_sweep(config: SweepConfig) -> list[SweepRow]:
    """Monte-Carlo bit error rates of the memoryless scheme per sweep point."""
    plan = memoryless_plan(config)
    code = build_systematic_code(config.k, plan.r, config.seed)
    link1 = bsc(config.link1_p)
    link2 = bsc(config.link2_p)

    rows = []
    for point, p2 in enumerate(config.sweep):
        model = CorrelationModel(config.alpha, BinaryAsymmetricChannel(config.p1, p2))
        setup = jscc.DecoderSetup(plan, code, link1, link2, model)
        errs1 = errs2 = frames = 0
        iters = 0.0
        for trial in range(config.trials):
            rng = derived_rng(config.seed, point, trial)
            x1 = (rng.random(config.k) >= config.alpha).astype(np.uint8)
            x2 = transmit(model.forward, x1, rng)
            s1, s2 = jscc.encode_pair(setup, x1, x2)
            r1 = s1.with_payload(transmit(link1, s1.payload, rng))
            r2 = s2.with_payload(transmit(link2, s2.payload, rng))
            d1 = jscc.decode_source(setup, jscc.init_beliefs(setup, 1, r1, r2), config.max_iter)
            d2 = jscc.decode_source(setup, jscc.init_beliefs(setup, 2, r1, r2), config.max_iter)
            e1 = int(np.count_nonzero(d1.bits != x1))
            e2 = int(np.count_nonzero(d2.bits != x2))
            errs1 += e1
            errs2 += e2
            frames += e1 > 0 or e2 > 0
            iters += 0.5 * (d1.iterations + d2.iterations)
        total = config.trials * config.k
        rows.append(SweepRow(p2, joint_entropy(model), errs1 / total, errs2 / total,
                             frames / config.trials, iters / config.trials, config.trials))
    return rows


def markov_setup_for(config: SweepConfig, p: float, code: SystematicLdpcCode,
                     plan: CodePlan) -> markov_codec.MarkovSetup:
    return markov_codec.MarkovSetup(config.k, config.alpha, plan, code, two_state_model(p))


def markov_plan(config: SweepConfig) -> CodePlan:
    ra = (config.rx1 - config.alpha) / (1.0 - config.alpha)
    rb = (config.rx2 - config.alpha) / (1.0 - config.alpha)
    return sw_plan(ra, rb, config.design_cf, config.design_cb)


def run_markov_sweep(config: SweepConfig) -> list[SweepRow]:
    """Monte-Carlo bit error rates of the Markov scheme per sweep point."""
    plan = markov_plan(config)
    k_coded = config.k - markov_codec.uncoded_positions(config.k, config.alpha).size
    code = build_systematic_code(k_coded, plan.r, config.seed)

    rows = []
    for point, p in enumerate(config.sweep):
        setup = markov_setup_for(config, p, code, plan)
        errs1 = errs2 = frames = 0
        iters = 0.0
        for trial in range(config.trials):
            rng = derived_rng(config.seed, point, trial)
            x1 = rng.integers(0, 2, size=config.k, dtype=np.uint8)
            noise = sample_noise(setup.model, config.k, rng)
            x2 = x1 ^ noise
            s1, s2 = markov_codec.encode_markov(setup, x1, x2)
            res = markov_codec.joint_decode(setup, s1, s2, config.max_iter)
            e1 = int(np.count_nonzero(res.x1 != x1))
            e2 = int(np.count_nonzero(res.x2 != x2))
            errs1 += e1
            errs2 += e2
            frames += e1 > 0 or e2 > 0
            iters += res.iterations
        total = config.trials * config.k
        rows.append(SweepRow(p, entropy_rate(setup.model), errs1 / total, errs2 / total,
                             frames / config.trials, iters / config.trials, config.trials))
    return rows


CSV_HEADER = "sweep,entropy,ber1,ber2,fer,iters,trials"


def rows_to_csv_bytes(rows: list[SweepRow]) -> bytes:
    lines = [CSV_HEADER]
    for r in rows:
        lines.append(
            f"{r.sweep:.6f},{r.entropy:.6f},{r.ber1:.6f},{r.ber2:.6f},"
            f"{r.fer:.6f},{r.iters:.6f},{r.trials}"
        )
    return ("\n".join(lines) + "\n").encode("ascii")


def parse_csv_bytes(data: bytes) -> list[SweepRow]:
    lines = data.decode("ascii").strip().split("\n")
    if lines[0] != CSV_HEADER:
        raise ValueError("unexpected CSV header")
    rows = []
    for line in lines[1:]:
        parts = line.split(",")
        rows.append(SweepRow(float(parts[0]), float(parts[1]), float(parts[2]),
                             float(parts[3]), float(parts[4]), float(parts[5]), int(parts[6])))
    return rows


def export_csv(rows: list[SweepRow], destination) -> bytes:
    """Write rows as CSV to a path or binary file object; returns the bytes."""
    data = rows_to_csv_bytes(rows)
    if isinstance(destination, (str, bytes)) or hasattr(destination, "__fspath__"):
        with open(destination, "wb") as fh:
            fh.write(data)
    elif isinstance(destination, io.TextIOBase):
        destination.write(data.decode("ascii"))
    else:
        destination.write(data)
    return data
