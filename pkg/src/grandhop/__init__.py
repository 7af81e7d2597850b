"""Multihop decode-and-forward link simulation with guessing-based decoders.

The package measures bit error rates of CRC-coded BPSK blocks relayed over
AWGN or Rayleigh-fading hops, with noise-guessing decoders (hard-detection
weight-ordered guessing, and its soft-detection variant ordered by logistic
weight) placed either at the destination only or at every node, and locates
the SNR below which guessing decoding stops paying off.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .bitblock import BitBlock, ErrorPattern, hamming_weight, xor
from .crc import CRC12_K8F3, TOY_CRC4, CrcCode, check, encode, koopman_to_explicit, syndrome
from .grand import DecodeResult, PatternSchedule, decode, iter_patterns
from .orbgrand import ReliabilityRanking, decode_soft, iter_patterns_soft, rank_bits
from .modem import (
    CHANNEL_AWGN,
    CHANNEL_RAYLEIGH,
    ChannelRealization,
    SnrSpec,
    demodulate,
    modulate,
    noise_variance,
    transmit,
)
from .multihop import (
    DecoderKind,
    HopChainConfig,
    HopTrace,
    Scenario,
    count_errors,
    run_chain,
    run_chain_scenario1,
    run_chain_scenario2,
    run_hop,
)
from .montecarlo import (
    BerRecord,
    ErrorTarget,
    FixedTrials,
    SweepGrid,
    read_records_csv,
    run_sweep,
    write_records_csv,
)
from .analysis import (
    BarrierEstimate,
    BerCurve,
    CrossingEstimate,
    barrier_consensus,
    curves_from_records,
    find_crossing,
)

__all__ = [
    "__version__",
    "BitBlock", "ErrorPattern", "hamming_weight", "xor",
    "CrcCode", "CRC12_K8F3", "TOY_CRC4", "encode", "check", "syndrome", "koopman_to_explicit",
    "PatternSchedule", "DecodeResult", "decode", "iter_patterns",
    "ReliabilityRanking", "rank_bits", "decode_soft", "iter_patterns_soft",
    "SnrSpec", "noise_variance", "modulate", "transmit", "demodulate",
    "ChannelRealization", "CHANNEL_AWGN", "CHANNEL_RAYLEIGH",
    "Scenario", "DecoderKind", "HopChainConfig", "HopTrace",
    "run_hop", "run_chain", "run_chain_scenario1", "run_chain_scenario2", "count_errors",
    "SweepGrid", "BerRecord", "ErrorTarget", "FixedTrials",
    "run_sweep", "write_records_csv", "read_records_csv",
    "BerCurve", "CrossingEstimate", "BarrierEstimate",
    "curves_from_records", "find_crossing", "barrier_consensus",
]
