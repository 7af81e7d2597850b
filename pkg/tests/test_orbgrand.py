"""Soft-decision guessing decoder: ranking, logistic-weight order, parity with
an exhaustive rank-sum oracle."""

import numpy as np
import pytest

from grandhop import crc
from grandhop.bitblock import BitBlock
from grandhop.orbgrand import (
    ReliabilityRanking,
    decode_soft,
    iter_patterns_soft,
    match_syndrome_soft,
    rank_bits,
)

from oracle_utils import int_from_bits, logistic_decode_oracle, toy_codewords

CODE = crc.CRC12_K8F3
TOY = crc.TOY_CRC4


class TestRankBits:
    def test_stable_tie_break_to_lower_index(self):
        ranking = rank_bits([0.5, -0.1, 2.0, -0.1])
        assert ranking.permutation.tolist() == [1, 3, 0, 2]
        assert ranking.reliabilities.tolist() == [0.1, 0.1, 0.5, 2.0]
        assert len(ranking) == 4

    def test_sign_ignored(self):
        a = rank_bits([1.0, -2.0, 3.0])
        b = rank_bits([-1.0, 2.0, -3.0])
        assert a.permutation.tolist() == b.permutation.tolist() == [0, 1, 2]

    def test_positive_scaling_invariance(self):
        rng = np.random.Generator(np.random.Philox(41))
        for _ in range(50):
            llrs = rng.standard_normal(32)
            base = rank_bits(llrs).permutation
            assert np.array_equal(base, rank_bits(llrs * 7.25).permutation)

    def test_arrays_read_only(self):
        ranking = rank_bits([0.3, 0.1])
        with pytest.raises(ValueError):
            ranking.permutation[0] = 5
        with pytest.raises(ValueError):
            ranking.reliabilities[0] = 9.0

    def test_validation(self):
        with pytest.raises(ValueError):
            rank_bits([])
        with pytest.raises(ValueError):
            rank_bits([[1.0, 2.0]])
        with pytest.raises(ValueError):
            rank_bits([1.0, np.nan])
        with pytest.raises(ValueError):
            rank_bits([1.0, np.inf])


class TestIterPatternsSoft:
    def test_identity_ranking_matches_rank_schedule(self):
        # |llr| already ascending by index -> rank t+1 is bit t
        ranking = rank_bits(np.arange(1, 9, dtype=float))
        pats = list(iter_patterns_soft(ranking, max_queries=9))
        assert pats[0].weight == 0
        got = [p.indices for p in pats[1:]]
        # lw 1:(1)  2:(2)  3:(1,2),(3)  4:(1,3),(4)  5:(1,4),(2,3)
        assert got == [(0,), (1,), (0, 1), (2,), (0, 2), (3,), (0, 3), (1, 2)]

    def test_permutation_applied_to_bit_space(self):
        # bit 2 least reliable, then bit 0, then bit 1
        ranking = rank_bits([0.5, 0.9, 0.1])
        pats = list(iter_patterns_soft(ranking, max_queries=4))
        assert pats[1].indices == (2,)
        assert pats[2].indices == (0,)
        assert pats[3].indices == (0, 2)

    def test_full_enumeration_covers_all_subsets(self):
        ranking = rank_bits(np.arange(1, 7, dtype=float))
        pats = list(iter_patterns_soft(ranking))
        assert len(pats) == 64
        assert len({p.indices for p in pats}) == 64


class TestQueryAccounting:
    def test_clean_word_single_query(self):
        rng = np.random.Generator(np.random.Philox(42))
        msg = BitBlock(rng.integers(0, 2, size=CODE.k, dtype=np.uint8))
        cw = crc.encode(CODE, msg)
        llrs = (1.0 - 2.0 * cw.bits) * 3.0
        res = decode_soft(CODE, cw, llrs)
        assert res.queries_used == 1
        assert res.codeword == cw

    def test_weakest_bit_flip_costs_two(self):
        rng = np.random.Generator(np.random.Philox(43))
        msg = BitBlock(rng.integers(0, 2, size=CODE.k, dtype=np.uint8))
        cw = crc.encode(CODE, msg)
        for j in (0, 17, 127):
            llrs = (1.0 - 2.0 * cw.bits) * 1.0
            llrs[j] = -llrs[j] * 0.1  # wrong sign, smallest magnitude
            hard = BitBlock((llrs < 0).astype(np.uint8))
            res = decode_soft(CODE, hard, llrs)
            assert res.queries_used == 2
            assert res.codeword == cw
            assert res.noise_estimate.indices == (j,)

    def test_match_syndrome_soft_zero(self):
        perm = np.arange(CODE.n, dtype=np.int32)
        assert match_syndrome_soft(CODE, 0, perm) == ((), 1)

    def test_budget_abandonment(self):
        rng = np.random.Generator(np.random.Philox(44))
        msg = BitBlock(rng.integers(0, 2, size=CODE.k, dtype=np.uint8))
        cw = crc.encode(CODE, msg)
        llrs = (1.0 - 2.0 * cw.bits) * 1.0
        llrs[77] = -llrs[77] * 5.0  # wrong sign on the most reliable bit
        hard = BitBlock((llrs < 0).astype(np.uint8))
        res = decode_soft(CODE, hard, llrs, max_queries=10)
        assert res.abandoned
        assert res.queries_used == 10


class TestDecodeSoftCorrectness:
    def test_matches_rank_sum_oracle(self):
        codewords = toy_codewords()
        rng = np.random.Generator(np.random.Philox(99))
        for _ in range(1000):
            llrs = rng.standard_normal(TOY.n) * 2.0
            hard_arr = (llrs < 0).astype(np.uint8)
            res = decode_soft(TOY, BitBlock(hard_arr), llrs, max_queries=256)
            assert not res.abandoned
            expect = logistic_decode_oracle(hard_arr, llrs, codewords)
            assert int_from_bits(res.codeword.bits) == expect

    def test_scaling_does_not_change_outcome(self):
        rng = np.random.Generator(np.random.Philox(45))
        for _ in range(100):
            llrs = rng.standard_normal(TOY.n)
            hard = BitBlock((llrs < 0).astype(np.uint8))
            a = decode_soft(TOY, hard, llrs, max_queries=256)
            b = decode_soft(TOY, hard, llrs * 100.0, max_queries=256)
            assert a.codeword == b.codeword
            assert a.queries_used == b.queries_used

    def test_noise_estimate_consistency(self):
        rng = np.random.Generator(np.random.Philox(46))
        for _ in range(100):
            llrs = rng.standard_normal(CODE.n)
            hard = BitBlock((llrs < 0).astype(np.uint8))
            res = decode_soft(CODE, hard, llrs)
            if res.abandoned:
                continue
            assert crc.check(CODE, res.codeword)
            assert np.array_equal(res.codeword.bits ^ hard.bits, res.noise_estimate.block.bits)


class TestValidation:
    def test_wrong_hard_length(self):
        with pytest.raises(ValueError, match="128 bits"):
            decode_soft(CODE, BitBlock.zeros(8), np.ones(128))

    def test_wrong_llr_shape(self):
        with pytest.raises(ValueError, match="shape"):
            decode_soft(CODE, BitBlock.zeros(128), np.ones(64))

    def test_non_finite_llrs(self):
        llrs = np.ones(128)
        llrs[3] = np.nan
        with pytest.raises(ValueError, match="finite"):
            decode_soft(CODE, BitBlock.zeros(128), llrs)

    def test_hard_llr_sign_mismatch(self):
        llrs = np.ones(128)
        bits = np.zeros(128, dtype=np.uint8)
        bits[5] = 1
        with pytest.raises(ValueError, match="sign"):
            decode_soft(CODE, BitBlock(bits), llrs)

    def test_zero_llr_tie_is_bit_zero(self):
        llrs = np.ones(128)
        llrs[9] = 0.0
        # tie resolves to hard bit 0, so all-zeros hard decisions are consistent
        res = decode_soft(CODE, BitBlock.zeros(128), llrs)
        assert res.queries_used == 1

    def test_bad_max_queries(self):
        with pytest.raises(ValueError, match="positive"):
            decode_soft(CODE, BitBlock.zeros(128), np.ones(128), max_queries=0)
