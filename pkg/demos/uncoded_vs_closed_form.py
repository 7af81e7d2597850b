"""Check the undecoded baseline against textbook BER formulas.

BPSK over AWGN has BER Q(sqrt(2*Es/N0)); over per-symbol Rayleigh fading
with coherent detection it is (1 - sqrt(g/(1+g)))/2 with g the signalling
SNR.  The no-decode simulation path should land on both curves inside
Monte Carlo error, SNR point by SNR point.
"""

import math

from grandhop import crc
from grandhop.montecarlo import ErrorTarget, SweepGrid, run_sweep

code = crc.CRC12_K8F3
rate = code.rate


def q_function(x):
    return 0.5 * math.erfc(x / math.sqrt(2.0))


def awgn_theory(db):
    return q_function(math.sqrt(2.0 * 10.0 ** (db / 10.0) * rate))


def rayleigh_theory(db):
    g = 10.0 ** (db / 10.0) * rate
    return 0.5 * (1.0 - math.sqrt(g / (1.0 + g)))


grid = SweepGrid(
    scenarios=("no_grand",),
    decoders=("none",),
    channels=("awgn", "rayleigh"),
    relay_counts=(0,),
    eb_n0_points=(0.0, 2.0, 4.0, 6.0, 8.0),
    master_seed=0xC0FFEE,
)
records = run_sweep(code, grid, ErrorTarget(target_errors=200))

theory = {"awgn": awgn_theory, "rayleigh": rayleigh_theory}
print(f"{'channel':>9} {'Eb/N0':>6} {'measured':>12} {'theory':>12} {'ratio':>7}")
for rec in records:
    expect = theory[rec.channel](rec.eb_n0_db)
    print(
        f"{rec.channel:>9} {rec.eb_n0_db:5.1f}  {rec.ber:12.4e} {expect:12.4e}"
        f" {rec.ber / expect:7.3f}"
    )
print("\nratios should sit near 1.00; deviations shrink as trials grow")
