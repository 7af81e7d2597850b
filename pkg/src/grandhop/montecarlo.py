"""Deterministic BER sweep engine.

A sweep walks the (scenario x decoder x channel x relay count x Eb/N0)
grid in a fixed documented order and estimates bit and block error rates
for each cell with batched Monte Carlo trials.

Determinism contract
--------------------
Every random draw is determined by (master_seed, cell identity, batch
index).  The cell identity is hashed from its content (scenario, decoder,
channel, fading mode, relay count, Eb/N0, code parameters), not from its
position in the grid, so re-running any single cell in isolation - a one
cell grid with the same master seed - reproduces its record bit for bit.
Batches are independent generators, and the stopping rule is evaluated
strictly in batch-index order on completed-batch boundaries, so the worker
count never changes which batches contribute to a record.

Stopping
--------
``FixedTrials(n)`` runs exactly n trials (the final batch may be short).
``ErrorTarget(e, max_trials, min_trials)`` stops at the first batch
boundary with at least e block errors (never before min_trials), or once
max_trials trials have run, whichever comes first; the final batch is
clamped so a cell never exceeds max_trials.  A cell that never meets the
error target yields a record whose ``is_upper_bound`` flag is set when it
saw no bit errors at all.
"""

from __future__ import annotations

import hashlib
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Union

import numpy as np

from . import grand, modem
from .crc import CrcCode
from .multihop import DecoderKind, HopChainConfig, Scenario, run_blocks

__all__ = [
    "DEFAULT_BATCH_SIZE",
    "FixedTrials",
    "ErrorTarget",
    "StoppingRule",
    "SweepGrid",
    "BerRecord",
    "CSV_COLUMNS",
    "cell_entropy_words",
    "batch_generator",
    "run_cell",
    "run_sweep",
    "standard_metadata",
    "write_records_csv",
    "read_records_csv",
]

DEFAULT_BATCH_SIZE = 256


@dataclass(frozen=True)
class FixedTrials:
    """Run exactly this many trials per cell."""

    trials: int

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError("trials must be positive")

    def describe(self) -> str:
        return f"fixed_trials trials={self.trials}"


@dataclass(frozen=True)
class ErrorTarget:
    """Stop on enough block errors, bounded by a trial budget."""

    target_errors: int = 200
    max_trials: int = 2_000_000
    min_trials: int = 256

    def __post_init__(self) -> None:
        if self.target_errors < 1:
            raise ValueError("target_errors must be positive")
        if not 1 <= self.min_trials <= self.max_trials:
            raise ValueError("need 1 <= min_trials <= max_trials")

    def describe(self) -> str:
        return (
            f"error_target target_errors={self.target_errors}"
            f" max_trials={self.max_trials} min_trials={self.min_trials}"
        )


StoppingRule = Union[FixedTrials, ErrorTarget]


def _trial_cap(stopping: StoppingRule) -> int:
    return stopping.trials if isinstance(stopping, FixedTrials) else stopping.max_trials


def _should_stop(stopping: StoppingRule, trials: int, block_errors: int) -> bool:
    """Stopping decision on a completed-batch boundary."""
    if isinstance(stopping, FixedTrials):
        return trials >= stopping.trials
    if trials >= stopping.max_trials:
        return True
    return block_errors >= stopping.target_errors and trials >= stopping.min_trials


@dataclass(frozen=True)
class SweepGrid:
    """Axes of one sweep plus the master seed.

    Cells enumerate in a fixed nested order: scenarios, then decoders,
    then channels, then relay counts, then Eb/N0 points (innermost).  The
    undecoded baseline scenario ignores the decoder axis: it is emitted
    exactly once per (channel, relay count, Eb/N0) with decoder NONE, and
    decoding scenarios skip NONE if it appears in the decoder list.
    """

    scenarios: tuple[Scenario, ...]
    decoders: tuple[DecoderKind, ...]
    channels: tuple[str, ...]
    relay_counts: tuple[int, ...]
    eb_n0_points: tuple[float, ...]
    master_seed: int
    fading: str = modem.FADING_PER_SYMBOL

    def __post_init__(self) -> None:
        object.__setattr__(self, "scenarios", tuple(Scenario(s) for s in self.scenarios))
        object.__setattr__(self, "decoders", tuple(DecoderKind(d) for d in self.decoders))
        object.__setattr__(self, "channels", tuple(str(c) for c in self.channels))
        object.__setattr__(self, "relay_counts", tuple(int(r) for r in self.relay_counts))
        object.__setattr__(self, "eb_n0_points", tuple(float(p) for p in self.eb_n0_points))
        for name in ("scenarios", "decoders", "channels", "relay_counts", "eb_n0_points"):
            if not getattr(self, name):
                raise ValueError(f"{name} must be non-empty")
        for ch in self.channels:
            if ch not in (modem.CHANNEL_AWGN, modem.CHANNEL_RAYLEIGH):
                raise ValueError(f"unknown channel {ch!r}")
        if self.fading not in (modem.FADING_PER_SYMBOL, modem.FADING_PER_BLOCK):
            raise ValueError(f"unknown fading mode {self.fading!r}")
        if self.master_seed < 0:
            raise ValueError("master_seed must be non-negative")

    def cells(
        self,
        code: CrcCode,
        max_weight: int = grand.DEFAULT_MAX_WEIGHT,
        max_queries: int = grand.DEFAULT_MAX_QUERIES,
    ) -> list[HopChainConfig]:
        """All grid cells in the documented order."""
        out: list[HopChainConfig] = []
        for scenario in self.scenarios:
            if scenario is Scenario.NO_GRAND:
                decoders: tuple[DecoderKind, ...] = (DecoderKind.NONE,)
            else:
                decoders = tuple(d for d in self.decoders if d is not DecoderKind.NONE)
            for decoder in decoders:
                for channel in self.channels:
                    for relays in self.relay_counts:
                        for db in self.eb_n0_points:
                            out.append(
                                HopChainConfig(
                                    code=code,
                                    num_relays=relays,
                                    scenario=scenario,
                                    decoder=decoder,
                                    channel=channel,
                                    snr=modem.SnrSpec(db, code.rate),
                                    fading=self.fading,
                                    max_weight=max_weight,
                                    max_queries=max_queries,
                                )
                            )
        return out


@dataclass(frozen=True)
class BerRecord:
    """One estimated grid cell.

    ``seed`` is the sweep's master seed; together with the identity
    columns it pins down every draw behind the estimate.  ``wall_time``
    is measured locally and never serialized.
    """

    scenario: str
    decoder: str
    channel: str
    fading_mode: str
    num_relays: int
    eb_n0_db: float
    trials: int
    bit_errors: int
    block_errors: int
    ber: float
    bler: float
    mean_queries: float
    abandoned_fraction: float
    seed: int
    wall_time: float = field(default=0.0, compare=False)

    def __post_init__(self) -> None:
        if not 0.0 <= self.ber <= 1.0:
            raise ValueError("ber must lie in [0, 1]")
        if not 0.0 <= self.bler <= 1.0:
            raise ValueError("bler must lie in [0, 1]")
        if self.trials < 1:
            raise ValueError("trials must be positive")

    @property
    def is_upper_bound(self) -> bool:
        """True when no bit error was seen: ber is only bounded above."""
        return self.bit_errors == 0

    @property
    def all_abandoned(self) -> bool:
        return self.abandoned_fraction >= 1.0


CSV_COLUMNS = (
    "scenario",
    "decoder",
    "channel",
    "fading_mode",
    "num_relays",
    "eb_n0_db",
    "trials",
    "bit_errors",
    "block_errors",
    "ber",
    "bler",
    "mean_queries",
    "abandoned_fraction",
    "seed",
)


def cell_entropy_words(cfg: HopChainConfig) -> tuple[int, int, int, int]:
    """Four 32-bit words hashed from the cell's content.

    Used as the leading spawn-key words so a cell's random streams depend
    on what the cell is, not where it sits in the grid.
    """
    text = "|".join(
        (
            cfg.scenario.value,
            cfg.decoder.value,
            cfg.channel,
            cfg.fading,
            f"L={cfg.num_relays}",
            f"ebn0={cfg.snr.eb_n0_db!r}",
            f"gen={cfg.code.generator:#x}",
            f"k={cfg.code.k}",
        )
    )
    digest = hashlib.sha256(text.encode("ascii")).digest()
    return tuple(int.from_bytes(digest[4 * i : 4 * i + 4], "big") for i in range(4))


def batch_generator(
    master_seed: int, cfg: HopChainConfig, batch_index: int
) -> np.random.Generator:
    """Independent generator for one (cell, batch) pair."""
    seq = np.random.SeedSequence(
        master_seed, spawn_key=cell_entropy_words(cfg) + (batch_index,)
    )
    return np.random.Generator(np.random.Philox(seq))


def _batch_stats(
    cfg: HopChainConfig, master_seed: int, batch_index: int, batch_size: int
) -> tuple[int, int, int, int, int]:
    """Run one batch; returns (trials, bit_errors, block_errors, queries, abandoned)."""
    rng = batch_generator(master_seed, cfg, batch_index)
    messages = rng.integers(0, 2, size=(batch_size, cfg.code.k), dtype=np.uint8)
    result = run_blocks(cfg, messages, rng)
    return (
        batch_size,
        int(result.bit_errors.sum()),
        int(np.count_nonzero(result.block_errors)),
        int(result.queries.sum()),
        int(np.count_nonzero(result.abandoned)),
    )


def _record_from_totals(
    cfg: HopChainConfig,
    master_seed: int,
    trials: int,
    bit_errors: int,
    block_errors: int,
    queries: int,
    abandoned: int,
    wall_time: float,
) -> BerRecord:
    k = cfg.code.k
    return BerRecord(
        scenario=cfg.scenario.value,
        decoder=cfg.decoder.value,
        channel=cfg.channel,
        fading_mode=cfg.fading,
        num_relays=cfg.num_relays,
        eb_n0_db=cfg.snr.eb_n0_db,
        trials=trials,
        bit_errors=bit_errors,
        block_errors=block_errors,
        ber=bit_errors / (trials * k),
        bler=block_errors / trials,
        mean_queries=queries / trials,
        abandoned_fraction=abandoned / trials,
        seed=master_seed,
        wall_time=wall_time,
    )


def run_cell(
    cfg: HopChainConfig,
    stopping: StoppingRule,
    master_seed: int,
    batch_size: int = DEFAULT_BATCH_SIZE,
    executor: ProcessPoolExecutor | None = None,
    wave: int = 1,
) -> BerRecord:
    """Estimate one cell.

    Batches are sized deterministically from the batch index alone (full
    batches, with the last clamped to the trial cap), so results never
    depend on how they were scheduled.  When an executor is given, up to
    ``wave`` batches run speculatively; batches past the stopping point
    are discarded unread.
    """
    if batch_size < 1:
        raise ValueError("batch_size must be positive")
    start = time.perf_counter()
    cap = _trial_cap(stopping)

    def planned_size(index: int) -> int:
        return min(batch_size, cap - index * batch_size)

    trials = bit_errors = block_errors = queries = abandoned = 0
    index = 0
    stopped = False
    while not stopped:
        n_wave = max(1, wave) if executor is not None else 1
        sizes = []
        for j in range(n_wave):
            size = planned_size(index + j)
            if size <= 0:
                break
            sizes.append(size)
        if not sizes:
            break
        if executor is None:
            stats = [_batch_stats(cfg, master_seed, index, sizes[0])]
        else:
            futures = [
                executor.submit(_batch_stats, cfg, master_seed, index + j, size)
                for j, size in enumerate(sizes)
            ]
            stats = [f.result() for f in futures]
        for st in stats:
            trials += st[0]
            bit_errors += st[1]
            block_errors += st[2]
            queries += st[3]
            abandoned += st[4]
            index += 1
            if _should_stop(stopping, trials, block_errors):
                stopped = True
                break
    return _record_from_totals(
        cfg,
        master_seed,
        trials,
        bit_errors,
        block_errors,
        queries,
        abandoned,
        time.perf_counter() - start,
    )


def run_sweep(
    code: CrcCode,
    grid: SweepGrid,
    stopping: StoppingRule,
    workers: int = 1,
    batch_size: int = DEFAULT_BATCH_SIZE,
    max_weight: int = grand.DEFAULT_MAX_WEIGHT,
    max_queries: int = grand.DEFAULT_MAX_QUERIES,
    progress: Callable[[int, int, BerRecord], None] | None = None,
) -> list[BerRecord]:
    """Estimate every cell of the grid, in the documented cell order.

    The records are identical for any ``workers`` value; only wall time
    changes.  ``progress`` is called after each finished cell.
    """
    cells = grid.cells(code, max_weight=max_weight, max_queries=max_queries)
    if not cells:
        raise ValueError("grid has no cells")
    records: list[BerRecord] = []
    executor = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        for i, cfg in enumerate(cells):
            record = run_cell(
                cfg,
                stopping,
                grid.master_seed,
                batch_size=batch_size,
                executor=executor,
                wave=workers,
            )
            records.append(record)
            if progress is not None:
                progress(i, len(cells), record)
    finally:
        if executor is not None:
            executor.shutdown()
    return records


def standard_metadata(
    code: CrcCode,
    grid: SweepGrid,
    stopping: StoppingRule,
    batch_size: int = DEFAULT_BATCH_SIZE,
    max_weight: int = grand.DEFAULT_MAX_WEIGHT,
    max_queries: int = grand.DEFAULT_MAX_QUERIES,
) -> dict[str, str]:
    """Comment-line metadata for a results CSV.

    Deliberately excludes worker counts and timestamps so the bytes of
    the file depend only on (grid, seed, stopping, budgets).
    """
    from . import __version__

    return {
        "format": f"grandhop results v{__version__}",
        "code": (
            f"koopman_id={code.koopman_id:#x} generator={code.generator:#x}"
            f" k={code.k} n={code.n}"
        ),
        "stopping": stopping.describe(),
        "budgets": f"max_weight={max_weight} max_queries={max_queries}",
        "batch_size": str(batch_size),
        "fading": grid.fading,
        "master_seed": str(grid.master_seed),
    }


def _format_field(value: object) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_records_csv(
    path: str, records: Iterable[BerRecord], metadata: dict[str, str] | None = None
) -> None:
    """Write records with '#' metadata comments and a header row.

    Floats are written with repr so reading the file back reproduces the
    in-memory values exactly; wall_time is never written.
    """
    lines = []
    for key, value in (metadata or {}).items():
        lines.append(f"# {key}: {value}")
    lines.append(",".join(CSV_COLUMNS))
    for rec in records:
        lines.append(",".join(_format_field(getattr(rec, name)) for name in CSV_COLUMNS))
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


_INT_COLUMNS = {"num_relays", "trials", "bit_errors", "block_errors", "seed"}
_FLOAT_COLUMNS = {"eb_n0_db", "ber", "bler", "mean_queries", "abandoned_fraction"}


def read_records_csv(path: str) -> list[BerRecord]:
    """Read back a results CSV; '#' comment lines are skipped."""
    with open(path, "r", encoding="ascii") as fh:
        rows = [line.rstrip("\n") for line in fh if line.strip() and not line.startswith("#")]
    if not rows:
        return []
    header = rows[0].split(",")
    if tuple(header) != CSV_COLUMNS:
        missing = [c for c in CSV_COLUMNS if c not in header]
        raise ValueError(
            f"unexpected results CSV columns {header!r};"
            f" expected {list(CSV_COLUMNS)}; missing: {missing or 'none (wrong order)'}"
        )
    records = []
    for row in rows[1:]:
        parts = row.split(",")
        if len(parts) != len(CSV_COLUMNS):
            raise ValueError(f"malformed results row: {row!r}")
        kwargs: dict[str, object] = {}
        for name, text in zip(CSV_COLUMNS, parts):
            if name in _INT_COLUMNS:
                kwargs[name] = int(text)
            elif name in _FLOAT_COLUMNS:
                kwargs[name] = float(text)
            else:
                kwargs[name] = text
        records.append(BerRecord(**kwargs))
    return records
