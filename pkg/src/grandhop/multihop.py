"""Decode-and-forward chains with guessing decoders at the nodes.

A chain of num_relays + 1 hops carries one CRC codeword from source to
destination.  Three placements are supported:

* DEST_ONLY: relays demodulate and remodulate their hard decisions
  verbatim (payload and parity bits alike); only the destination decodes.
  With the soft decoder, destination LLRs come from the last hop's
  observation alone, so errors injected by earlier hops look confident.
* ALL_NODES: every relay and the destination runs the decoder; a relay
  that abandons forwards its received hard bits unchanged.
* NO_GRAND: no decoding anywhere - the accumulated hard-decision baseline.

Hop errors compose by XOR: the destination's pre-decode word equals the
transmitted codeword plus the XOR of all per-hop error patterns, and under
ALL_NODES the residual after decoding is the XOR of the per-node undetected
patterns.  Both identities are asserted on every simulated block.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import crc as crc_mod
from . import grand, modem, orbgrand
from .bitblock import BitBlock, ErrorPattern

__all__ = [
    "Scenario",
    "DecoderKind",
    "HopChainConfig",
    "NodeDecode",
    "HopTrace",
    "BatchResult",
    "run_hop",
    "run_blocks",
    "run_chain",
    "run_chain_scenario1",
    "run_chain_scenario2",
    "count_errors",
]


class Scenario(str, Enum):
    DEST_ONLY = "dest_only"
    ALL_NODES = "all_nodes"
    NO_GRAND = "no_grand"


class DecoderKind(str, Enum):
    GRAND_HARD = "grand"
    ORBGRAND = "orbgrand"
    NONE = "none"


@dataclass(frozen=True)
class HopChainConfig:
    """One source-to-destination configuration shared by a sweep cell."""

    code: crc_mod.CrcCode
    num_relays: int
    scenario: Scenario
    decoder: DecoderKind
    channel: str
    snr: modem.SnrSpec
    fading: str = modem.FADING_PER_SYMBOL
    max_weight: int = grand.DEFAULT_MAX_WEIGHT
    max_queries: int = grand.DEFAULT_MAX_QUERIES
    per_hop_eb_n0_db: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        if self.num_relays < 0:
            raise ValueError("num_relays must be >= 0")
        if self.scenario is Scenario.NO_GRAND and self.decoder is not DecoderKind.NONE:
            raise ValueError("the undecoded baseline must use decoder NONE")
        if self.scenario is not Scenario.NO_GRAND and self.decoder is DecoderKind.NONE:
            raise ValueError(f"scenario {self.scenario.value} needs a decoder")
        if self.channel not in (modem.CHANNEL_AWGN, modem.CHANNEL_RAYLEIGH):
            raise ValueError(f"unknown channel {self.channel!r}")
        if self.per_hop_eb_n0_db is not None and len(self.per_hop_eb_n0_db) != self.hops:
            raise ValueError("per-hop SNR vector must have one entry per hop")
        if self.max_queries < 1:
            raise ValueError("max_queries must be positive")

    @property
    def hops(self) -> int:
        return self.num_relays + 1

    def hop_noise_variances(self) -> list[float]:
        if self.per_hop_eb_n0_db is None:
            return [modem.noise_variance(self.snr)] * self.hops
        return [
            modem.noise_variance(
                modem.SnrSpec(db, self.snr.code_rate, self.snr.bits_per_symbol)
            )
            for db in self.per_hop_eb_n0_db
        ]


@dataclass(frozen=True)
class NodeDecode:
    """One node's decoding outcome inside a trace."""

    queries_used: int
    abandoned: bool
    undetected: ErrorPattern


@dataclass(frozen=True)
class HopTrace:
    """Everything one simulated block did on its way to the destination."""

    config: HopChainConfig
    message: BitBlock
    codeword: BitBlock
    hop_errors: tuple[ErrorPattern, ...]
    node_decodes: tuple[NodeDecode, ...]
    destination_input: BitBlock
    decoded: BitBlock
    queries_used: int
    abandoned: bool


@dataclass
class BatchResult:
    """Per-block counters for a batch of chains."""

    bit_errors: np.ndarray
    block_errors: np.ndarray
    queries: np.ndarray
    abandoned: np.ndarray


def _decode_batch(
    cfg: HopChainConfig, hard: np.ndarray, llr: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Decode each row of hard decisions; returns (bits, queries, abandoned)."""
    code = cfg.code
    synds = crc_mod.syndrome_ints(code, hard)
    out = hard.copy()
    queries = np.ones(hard.shape[0], dtype=np.int64)
    abandoned = np.zeros(hard.shape[0], dtype=bool)
    for i in np.flatnonzero(synds != 0):
        if cfg.decoder is DecoderKind.GRAND_HARD:
            flips, used = grand.match_syndrome(
                code, int(synds[i]), cfg.max_weight, cfg.max_queries
            )
        else:
            ranking = orbgrand.rank_bits(llr[i])
            flips, used = orbgrand.match_syndrome_soft(
                code, int(synds[i]), ranking.permutation, cfg.max_queries
            )
        queries[i] = used
        if flips is None:
            abandoned[i] = True
        else:
            out[i, list(flips)] ^= 1
    return out, queries, abandoned


def run_blocks(
    cfg: HopChainConfig,
    messages: np.ndarray,
    rng: np.random.Generator,
    collect_traces: bool = False,
) -> BatchResult | tuple[BatchResult, list[HopTrace]]:
    """Carry a batch of messages (B, k) through the chain.

    RNG draw order per hop is fixed: fading gains (Rayleigh only), then
    noise.  Draw shapes depend only on (batch size, n, hops), which keeps
    a (seed, batch) pair bit-reproducible.
    """
    code = cfg.code
    msgs = np.asarray(messages, dtype=np.uint8)
    if msgs.ndim != 2 or msgs.shape[1] != code.k:
        raise ValueError(f"messages must be (B, {code.k})")
    batch = msgs.shape[0]
    cw = crc_mod.encode_array(code, msgs)
    tx_bits = cw
    queries = np.zeros(batch, dtype=np.int64)
    abandoned = np.zeros(batch, dtype=bool)
    n0s = cfg.hop_noise_variances()
    accumulated = np.zeros_like(cw)          # XOR of raw hop errors so far
    corrections = np.zeros_like(cw)          # XOR of flips applied by decoders
    undetected_sum = np.zeros_like(cw)       # XOR of per-node undetected patterns
    hop_error_list: list[np.ndarray] = []
    node_list: list[tuple[np.ndarray, np.ndarray, np.ndarray]] = []
    destination_input = None

    for hop in range(cfg.hops):
        x = modem.modulate(tx_bits)
        y, realization = modem.transmit(x, cfg.channel, n0s[hop], rng, cfg.fading)
        hard, llr = modem.demodulate(y, realization)
        hop_error = hard ^ tx_bits
        accumulated ^= hop_error
        # any node's pre-decode word is the codeword plus all raw hop errors
        # plus all corrections applied upstream
        assert np.array_equal(hard ^ cw, accumulated ^ corrections)
        is_last = hop == cfg.hops - 1
        if is_last:
            destination_input = hard
        decode_here = cfg.scenario is Scenario.ALL_NODES or (
            is_last and cfg.scenario is Scenario.DEST_ONLY
        )
        if decode_here:
            out_bits, q, ab = _decode_batch(cfg, hard, llr)
            queries += q
            abandoned |= ab
            corrections ^= out_bits ^ hard
            undetected = out_bits ^ tx_bits
            undetected_sum ^= undetected
            if collect_traces:
                node_list.append((q, ab, undetected))
        else:
            out_bits = hard
        if collect_traces:
            hop_error_list.append(hop_error)
        tx_bits = out_bits

    decoded = tx_bits
    if cfg.scenario is Scenario.ALL_NODES:
        # residual equals the XOR of every node's undetected pattern
        assert np.array_equal(decoded ^ cw, undetected_sum)
    elif cfg.scenario is Scenario.DEST_ONLY:
        # pre-decode destination word equals codeword plus all hop errors
        assert np.array_equal(destination_input ^ cw, accumulated)
    else:
        assert np.array_equal(decoded ^ cw, accumulated)

    info = decoded[:, : code.k]
    bit_errors = np.count_nonzero(info != msgs, axis=1).astype(np.int64)
    result = BatchResult(
        bit_errors=bit_errors,
        block_errors=bit_errors > 0,
        queries=queries,
        abandoned=abandoned,
    )
    if not collect_traces:
        return result
    traces = []
    for b in range(batch):
        nodes = tuple(
            NodeDecode(
                queries_used=int(q[b]),
                abandoned=bool(ab[b]),
                undetected=ErrorPattern(und[b]),
            )
            for q, ab, und in node_list
        )
        traces.append(
            HopTrace(
                config=cfg,
                message=BitBlock(msgs[b]),
                codeword=BitBlock(cw[b]),
                hop_errors=tuple(ErrorPattern(e[b]) for e in hop_error_list),
                node_decodes=nodes,
                destination_input=BitBlock(destination_input[b]),
                decoded=BitBlock(decoded[b]),
                queries_used=int(queries[b]),
                abandoned=bool(abandoned[b]),
            )
        )
    return result, traces


def run_hop(
    prev_bits: BitBlock,
    channel: str,
    n0: float,
    rng: np.random.Generator,
    fading: str = modem.FADING_PER_SYMBOL,
) -> tuple[BitBlock, np.ndarray, ErrorPattern]:
    """One hop: modulate stored bits, cross the channel, demodulate.

    Returns (hard decisions, LLRs, hop error pattern); the error pattern is
    the XOR of the transmitted bits and this node's hard decisions.
    """
    x = modem.modulate(prev_bits.bits)
    y, realization = modem.transmit(x, channel, n0, rng, fading)
    hard, llr = modem.demodulate(y, realization)
    return BitBlock(hard), llr, ErrorPattern(hard ^ prev_bits.bits)


def run_chain(cfg: HopChainConfig, message: BitBlock, rng: np.random.Generator) -> HopTrace:
    """Carry one message through the chain and return its full trace."""
    if len(message) != cfg.code.k:
        raise ValueError(f"message must have {cfg.code.k} bits")
    _, traces = run_blocks(cfg, message.bits[None, :], rng, collect_traces=True)
    return traces[0]


def run_chain_scenario1(cfg: HopChainConfig, message: BitBlock, rng: np.random.Generator) -> HopTrace:
    if cfg.scenario is not Scenario.DEST_ONLY:
        raise ValueError("config does not describe a destination-only chain")
    return run_chain(cfg, message, rng)


def run_chain_scenario2(cfg: HopChainConfig, message: BitBlock, rng: np.random.Generator) -> HopTrace:
    if cfg.scenario is not Scenario.ALL_NODES:
        raise ValueError("config does not describe an all-nodes chain")
    return run_chain(cfg, message, rng)


def count_errors(trace: HopTrace, message: BitBlock) -> tuple[int, bool]:
    """Information-bit error count and block-error flag for one trace."""
    k = trace.config.code.k
    if len(message) != k:
        raise ValueError(f"message must have {k} bits")
    errs = int(np.count_nonzero(trace.decoded.bits[:k] != message.bits))
    return errs, errs > 0
