"""Sweep driver: stopping rules, scheduling invariance, CSV round trips."""

from concurrent.futures import ProcessPoolExecutor

import numpy as np
import pytest

from grandhop import crc, modem
from grandhop.montecarlo import (
    CSV_COLUMNS,
    DEFAULT_BATCH_SIZE,
    BerRecord,
    ErrorTarget,
    FixedTrials,
    SweepGrid,
    batch_generator,
    cell_entropy_words,
    read_records_csv,
    run_cell,
    run_sweep,
    standard_metadata,
    write_records_csv,
)
from grandhop.multihop import DecoderKind, HopChainConfig, Scenario

CODE = crc.CRC12_K8F3


def make_cell(
    scenario=Scenario.NO_GRAND,
    decoder=DecoderKind.NONE,
    eb_n0_db=4.0,
    num_relays=0,
    channel=modem.CHANNEL_AWGN,
    **kw,
):
    return HopChainConfig(
        code=CODE,
        num_relays=num_relays,
        scenario=scenario,
        decoder=decoder,
        channel=channel,
        snr=modem.SnrSpec(eb_n0_db, CODE.rate),
        **kw,
    )


class TestStoppingRules:
    def test_fixed_trials_validation(self):
        assert FixedTrials(10).trials == 10
        with pytest.raises(ValueError):
            FixedTrials(0)

    def test_error_target_validation(self):
        rule = ErrorTarget()
        assert rule.target_errors == 200
        assert rule.max_trials == 2_000_000
        with pytest.raises(ValueError):
            ErrorTarget(target_errors=0)
        with pytest.raises(ValueError):
            ErrorTarget(min_trials=0)
        with pytest.raises(ValueError):
            ErrorTarget(min_trials=100, max_trials=50)

    def test_describe_strings(self):
        assert FixedTrials(500).describe() == "fixed_trials trials=500"
        assert "target_errors=7" in ErrorTarget(target_errors=7).describe()


class TestRunCell:
    def test_fixed_trials_exact_count(self):
        rec = run_cell(make_cell(), FixedTrials(1000), master_seed=11)
        assert rec.trials == 1000  # 256+256+256+232, final batch clamped

    def test_fixed_trials_below_batch(self):
        rec = run_cell(make_cell(), FixedTrials(10), master_seed=11)
        assert rec.trials == 10

    def test_error_target_stops_on_batch_boundary(self):
        # at 4 dB most baseline blocks contain an error
        rule = ErrorTarget(target_errors=50, max_trials=10_000, min_trials=256)
        rec = run_cell(make_cell(), rule, master_seed=12)
        assert rec.trials == 256
        assert rec.block_errors >= 50

    def test_error_target_min_trials_enforced(self):
        rule = ErrorTarget(target_errors=1, max_trials=10_000, min_trials=512)
        rec = run_cell(make_cell(), rule, master_seed=13)
        assert rec.trials >= 512

    def test_error_target_cap_and_upper_bound(self):
        # 60 dB: no errors ever; runs to the cap and flags the bound
        rule = ErrorTarget(target_errors=5, max_trials=600, min_trials=256)
        rec = run_cell(make_cell(eb_n0_db=60.0), rule, master_seed=14)
        assert rec.trials == 600
        assert rec.bit_errors == 0
        assert rec.is_upper_bound
        assert rec.ber == 0.0

    def test_derived_statistics(self):
        rec = run_cell(make_cell(), FixedTrials(512), master_seed=15)
        assert rec.ber == rec.bit_errors / (512 * CODE.k)
        assert rec.bler == rec.block_errors / 512
        assert rec.seed == 15
        assert rec.scenario == "no_grand"
        assert rec.decoder == "none"
        assert rec.wall_time > 0.0

    def test_batch_size_validated(self):
        with pytest.raises(ValueError):
            run_cell(make_cell(), FixedTrials(10), master_seed=1, batch_size=0)


class TestSchedulingInvariance:
    def test_executor_does_not_change_record(self):
        cfg = make_cell(
            scenario=Scenario.DEST_ONLY,
            decoder=DecoderKind.GRAND_HARD,
            eb_n0_db=7.0,
        )
        serial = run_cell(cfg, FixedTrials(512), master_seed=16)
        with ProcessPoolExecutor(max_workers=2) as pool:
            parallel = run_cell(cfg, FixedTrials(512), master_seed=16, executor=pool, wave=2)
        assert serial == parallel  # wall_time excluded from comparison

    def test_wave_speculation_does_not_overrun_stopping(self):
        cfg = make_cell()
        rule = ErrorTarget(target_errors=10, max_trials=10_000, min_trials=256)
        serial = run_cell(cfg, rule, master_seed=17)
        with ProcessPoolExecutor(max_workers=2) as pool:
            parallel = run_cell(cfg, rule, master_seed=17, executor=pool, wave=4)
        assert serial == parallel

    def test_isolated_cell_reproduces_sweep_record(self):
        grid = SweepGrid(
            scenarios=(Scenario.NO_GRAND, Scenario.DEST_ONLY),
            decoders=(DecoderKind.GRAND_HARD,),
            channels=(modem.CHANNEL_AWGN,),
            relay_counts=(0, 1),
            eb_n0_points=(6.0, 7.0),
            master_seed=18,
        )
        full = run_sweep(CODE, grid, FixedTrials(256))
        target = next(
            r
            for r in full
            if r.scenario == "dest_only" and r.num_relays == 1 and r.eb_n0_db == 7.0
        )
        solo_grid = SweepGrid(
            scenarios=(Scenario.DEST_ONLY,),
            decoders=(DecoderKind.GRAND_HARD,),
            channels=(modem.CHANNEL_AWGN,),
            relay_counts=(1,),
            eb_n0_points=(7.0,),
            master_seed=18,
        )
        solo = run_sweep(CODE, solo_grid, FixedTrials(256))
        assert solo == [target]


class TestSweepGrid:
    def test_cells_nested_order_with_baseline_dedup(self):
        grid = SweepGrid(
            scenarios=(Scenario.DEST_ONLY, Scenario.NO_GRAND),
            decoders=(DecoderKind.GRAND_HARD, DecoderKind.ORBGRAND, DecoderKind.NONE),
            channels=(modem.CHANNEL_AWGN,),
            relay_counts=(0, 2),
            eb_n0_points=(1.0, 3.0),
            master_seed=1,
        )
        cells = grid.cells(CODE)
        key = [(c.scenario.value, c.decoder.value, c.num_relays, c.snr.eb_n0_db) for c in cells]
        assert key == [
            ("dest_only", "grand", 0, 1.0),
            ("dest_only", "grand", 0, 3.0),
            ("dest_only", "grand", 2, 1.0),
            ("dest_only", "grand", 2, 3.0),
            ("dest_only", "orbgrand", 0, 1.0),
            ("dest_only", "orbgrand", 0, 3.0),
            ("dest_only", "orbgrand", 2, 1.0),
            ("dest_only", "orbgrand", 2, 3.0),
            ("no_grand", "none", 0, 1.0),
            ("no_grand", "none", 0, 3.0),
            ("no_grand", "none", 2, 1.0),
            ("no_grand", "none", 2, 3.0),
        ]

    def test_string_axes_coerced(self):
        grid = SweepGrid(
            scenarios=("dest_only",),
            decoders=("grand",),
            channels=("awgn",),
            relay_counts=(2,),
            eb_n0_points=(5,),
            master_seed=0,
        )
        assert grid.scenarios == (Scenario.DEST_ONLY,)
        assert grid.decoders == (DecoderKind.GRAND_HARD,)
        assert isinstance(grid.eb_n0_points[0], float)

    def test_validation(self):
        base = dict(
            scenarios=(Scenario.DEST_ONLY,),
            decoders=(DecoderKind.GRAND_HARD,),
            channels=(modem.CHANNEL_AWGN,),
            relay_counts=(0,),
            eb_n0_points=(1.0,),
            master_seed=1,
        )
        with pytest.raises(ValueError):
            SweepGrid(**{**base, "channels": ()})
        with pytest.raises(ValueError):
            SweepGrid(**{**base, "channels": ("hf",)})
        with pytest.raises(ValueError):
            SweepGrid(**{**base, "fading": "burst"})
        with pytest.raises(ValueError):
            SweepGrid(**{**base, "master_seed": -1})

    def test_budgets_flow_into_cells(self):
        grid = SweepGrid(
            scenarios=(Scenario.DEST_ONLY,),
            decoders=(DecoderKind.GRAND_HARD,),
            channels=(modem.CHANNEL_AWGN,),
            relay_counts=(0,),
            eb_n0_points=(1.0,),
            master_seed=1,
        )
        cell = grid.cells(CODE, max_weight=3, max_queries=777)[0]
        assert cell.max_weight == 3
        assert cell.max_queries == 777


class TestRngPlumbing:
    def test_entropy_words_deterministic_and_distinct(self):
        a = cell_entropy_words(make_cell(eb_n0_db=5.0))
        b = cell_entropy_words(make_cell(eb_n0_db=5.0))
        c = cell_entropy_words(make_cell(eb_n0_db=5.5))
        d = cell_entropy_words(make_cell(eb_n0_db=5.0, num_relays=1))
        assert a == b
        assert a != c
        assert a != d
        assert all(0 <= w < 2**32 for w in a)

    def test_batch_generator_streams(self):
        cfg = make_cell()
        x = batch_generator(7, cfg, 0).integers(0, 2**31, size=8)
        y = batch_generator(7, cfg, 0).integers(0, 2**31, size=8)
        z = batch_generator(7, cfg, 1).integers(0, 2**31, size=8)
        w = batch_generator(8, cfg, 0).integers(0, 2**31, size=8)
        assert np.array_equal(x, y)
        assert not np.array_equal(x, z)
        assert not np.array_equal(x, w)


class TestBerRecord:
    def make(self, **kw):
        base = dict(
            scenario="dest_only",
            decoder="grand",
            channel="awgn",
            fading_mode="symbol",
            num_relays=2,
            eb_n0_db=5.0,
            trials=1000,
            bit_errors=58,
            block_errors=31,
            ber=58 / 116000,
            bler=0.031,
            mean_queries=3.7,
            abandoned_fraction=0.0,
            seed=42,
        )
        base.update(kw)
        return BerRecord(**base)

    def test_validation(self):
        with pytest.raises(ValueError):
            self.make(ber=1.5)
        with pytest.raises(ValueError):
            self.make(bler=-0.1)
        with pytest.raises(ValueError):
            self.make(trials=0)

    def test_upper_bound_flag(self):
        assert self.make(bit_errors=0, block_errors=0, ber=0.0, bler=0.0).is_upper_bound
        assert not self.make().is_upper_bound

    def test_all_abandoned(self):
        assert self.make(abandoned_fraction=1.0).all_abandoned
        assert not self.make(abandoned_fraction=0.99).all_abandoned

    def test_wall_time_ignored_in_equality(self):
        assert self.make(wall_time=1.0) == self.make(wall_time=2.0)


class TestCsvRoundTrip:
    def run_small_sweep(self):
        grid = SweepGrid(
            scenarios=(Scenario.NO_GRAND,),
            decoders=(DecoderKind.NONE,),
            channels=(modem.CHANNEL_AWGN, modem.CHANNEL_RAYLEIGH),
            relay_counts=(0, 3),
            eb_n0_points=(2.0, 6.5),
            master_seed=19,
        )
        return grid, run_sweep(CODE, grid, FixedTrials(256))

    def test_exact_round_trip(self, tmp_path):
        grid, records = self.run_small_sweep()
        path = str(tmp_path / "results.csv")
        meta = standard_metadata(CODE, grid, FixedTrials(256))
        write_records_csv(path, records, meta)
        back = read_records_csv(path)
        assert back == records
        # floats round trip exactly through repr
        for a, b in zip(records, back):
            assert a.ber == b.ber
            assert a.mean_queries == b.mean_queries

    def test_header_and_comments(self, tmp_path):
        grid, records = self.run_small_sweep()
        path = str(tmp_path / "results.csv")
        write_records_csv(path, records, {"note": "hello"})
        lines = open(path).read().splitlines()
        assert lines[0] == "# note: hello"
        assert lines[1] == ",".join(CSV_COLUMNS)
        assert len(lines) == 2 + len(records)

    def test_no_metadata(self, tmp_path):
        _, records = self.run_small_sweep()
        path = str(tmp_path / "bare.csv")
        write_records_csv(path, records)
        assert read_records_csv(path) == records

    def test_missing_column_diagnostic(self, tmp_path):
        path = str(tmp_path / "bad.csv")
        cols = [c for c in CSV_COLUMNS if c != "bler"]
        with open(path, "w") as fh:
            fh.write(",".join(cols) + "\n")
        with pytest.raises(ValueError, match="missing: \\['bler'\\]"):
            read_records_csv(path)

    def test_wrong_order_diagnostic(self, tmp_path):
        path = str(tmp_path / "shuffled.csv")
        cols = list(CSV_COLUMNS)
        cols[0], cols[1] = cols[1], cols[0]
        with open(path, "w") as fh:
            fh.write(",".join(cols) + "\n")
        with pytest.raises(ValueError, match="wrong order"):
            read_records_csv(path)

    def test_malformed_row(self, tmp_path):
        path = str(tmp_path / "short.csv")
        with open(path, "w") as fh:
            fh.write(",".join(CSV_COLUMNS) + "\n")
            fh.write("dest_only,grand\n")
        with pytest.raises(ValueError, match="malformed"):
            read_records_csv(path)

    def test_empty_file(self, tmp_path):
        path = str(tmp_path / "empty.csv")
        open(path, "w").close()
        assert read_records_csv(path) == []

    def test_metadata_excludes_environment(self):
        grid, _ = self.run_small_sweep()
        meta = standard_metadata(CODE, grid, FixedTrials(256))
        text = " ".join(meta) + " ".join(meta.values())
        assert "worker" not in text
        assert "time" not in text
        assert meta["master_seed"] == "19"
        assert "fixed_trials" in meta["stopping"]


class TestRunSweep:
    def test_progress_callback_order(self):
        grid = SweepGrid(
            scenarios=(Scenario.NO_GRAND,),
            decoders=(DecoderKind.NONE,),
            channels=(modem.CHANNEL_AWGN,),
            relay_counts=(0,),
            eb_n0_points=(2.0, 4.0, 6.0),
            master_seed=20,
        )
        seen = []
        records = run_sweep(
            CODE, grid, FixedTrials(256), progress=lambda i, n, r: seen.append((i, n, r))
        )
        assert [s[0] for s in seen] == [0, 1, 2]
        assert all(s[1] == 3 for s in seen)
        assert [s[2] for s in seen] == records

    def test_workers_identical_records(self):
        grid = SweepGrid(
            scenarios=(Scenario.DEST_ONLY,),
            decoders=(DecoderKind.GRAND_HARD,),
            channels=(modem.CHANNEL_AWGN,),
            relay_counts=(0,),
            eb_n0_points=(6.0, 7.0),
            master_seed=21,
        )
        one = run_sweep(CODE, grid, FixedTrials(512), workers=1)
        two = run_sweep(CODE, grid, FixedTrials(512), workers=2)
        assert one == two
