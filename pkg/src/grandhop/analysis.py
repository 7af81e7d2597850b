"""BER curve post-processing and barrier location.

The decode-everywhere relay strategy beats the undecoded baseline above
some SNR and loses below it; the curves for different hop counts cross
the baseline near one SNR.  This module interpolates those crossings from
sweep records and reports whether the per-hop-count crossings agree
within a tolerance (a consensus barrier) or not (dispersed).

Interpolation runs in (dB, log10 BER) coordinates, where Monte Carlo BER
curves are close to affine, so coarse grids still locate crossings well.
Zero-error points carry no BER estimate, only an upper bound, and are
excluded from interpolation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .montecarlo import BerRecord
from .multihop import Scenario

__all__ = [
    "AnalysisError",
    "CurveKey",
    "CurvePoint",
    "BerCurve",
    "curves_from_records",
    "CrossingCandidate",
    "CrossingEstimate",
    "find_crossing",
    "BarrierEstimate",
    "barrier_consensus",
    "BarrierReportRow",
    "BARRIER_COLUMNS",
    "barrier_report",
    "write_barrier_csv",
    "read_barrier_csv",
]


class AnalysisError(ValueError):
    """Raised when records cannot support the requested analysis."""


@dataclass(frozen=True, order=True)
class CurveKey:
    """Cell identity minus the SNR axis."""

    scenario: str
    decoder: str
    channel: str
    fading_mode: str
    num_relays: int


@dataclass(frozen=True)
class CurvePoint:
    eb_n0_db: float
    ber: float
    is_upper_bound: bool


@dataclass(frozen=True)
class BerCurve:
    """One BER-vs-Eb/N0 series, sorted strictly ascending in dB."""

    key: CurveKey
    points: tuple[CurvePoint, ...]

    def __post_init__(self) -> None:
        dbs = [p.eb_n0_db for p in self.points]
        if any(b <= a for a, b in zip(dbs, dbs[1:])):
            raise ValueError(f"curve {self.key} has unsorted or duplicate SNR points")
        for p in self.points:
            if p.ber < 0 or (p.ber == 0) != p.is_upper_bound:
                raise ValueError("zero-BER points must be flagged as upper bounds")

    def positive_points(self) -> list[tuple[float, float]]:
        """(dB, BER) pairs with an actual BER estimate."""
        return [(p.eb_n0_db, p.ber) for p in self.points if not p.is_upper_bound]


def curves_from_records(records: Iterable[BerRecord]) -> dict[CurveKey, BerCurve]:
    """Group sweep records into curves keyed by everything but SNR."""
    grouped: dict[CurveKey, list[CurvePoint]] = {}
    for rec in records:
        key = CurveKey(rec.scenario, rec.decoder, rec.channel, rec.fading_mode, rec.num_relays)
        grouped.setdefault(key, []).append(
            CurvePoint(rec.eb_n0_db, rec.ber, rec.is_upper_bound)
        )
    return {
        key: BerCurve(key, tuple(sorted(points, key=lambda p: p.eb_n0_db)))
        for key, points in grouped.items()
    }


@dataclass(frozen=True)
class CrossingCandidate:
    eb_n0_db: float
    bracket: tuple[float, float]
    gap: float


@dataclass(frozen=True)
class CrossingEstimate:
    """An interpolated sign change of log10(ber_a) - log10(ber_b)."""

    eb_n0_db: float
    bracket: tuple[float, float]
    candidates: tuple[CrossingCandidate, ...]

    def __post_init__(self) -> None:
        lo, hi = self.bracket
        if not lo <= self.eb_n0_db <= hi:
            raise ValueError("crossing must lie inside its bracket")


def find_crossing(a: BerCurve, b: BerCurve) -> CrossingEstimate | None:
    """Locate where curve a crosses curve b, or None.

    Only SNR points present on both curves with nonzero BER enter the
    difference d = log10(ber_a) - log10(ber_b).  Exact zeros of d are
    skipped when tracking the sign, so identical curves give None.  With
    several sign changes (jitter near tangency) the one whose flanking
    |d| values sum largest wins; all candidates are reported.
    """
    ber_a = dict(a.positive_points())
    ber_b = dict(b.positive_points())
    shared = sorted(set(ber_a) & set(ber_b))
    if len(shared) < 2:
        return None
    diffs = [math.log10(ber_a[x]) - math.log10(ber_b[x]) for x in shared]
    candidates = []
    prev = None
    for i, d in enumerate(diffs):
        if d == 0.0:
            continue
        if prev is not None and (diffs[prev] > 0) != (d > 0):
            x0, x1 = shared[prev], shared[i]
            y0, y1 = diffs[prev], d
            cross = x0 - y0 * (x1 - x0) / (y1 - y0)
            candidates.append(CrossingCandidate(cross, (x0, x1), abs(y0) + abs(y1)))
        prev = i
    if not candidates:
        return None
    best = max(candidates, key=lambda c: c.gap)
    return CrossingEstimate(best.eb_n0_db, best.bracket, tuple(candidates))


@dataclass(frozen=True)
class BarrierEstimate:
    """Consensus over per-hop-count crossings.

    ``eb_n0_db`` is the mean crossing when the spread (max minus min) is
    within tolerance, else None with ``dispersed`` set.
    """

    eb_n0_db: float | None
    bracket: tuple[float, float]
    crossings: tuple[float, ...]
    spread_db: float
    tolerance_db: float
    dispersed: bool

    def __post_init__(self) -> None:
        if self.eb_n0_db is not None:
            lo, hi = self.bracket
            if not lo <= self.eb_n0_db <= hi:
                raise ValueError("consensus must lie inside its bracket")


def barrier_consensus(
    crossings: Sequence[float], tolerance_db: float = 1.0
) -> BarrierEstimate:
    """Mean crossing if all crossings agree within tolerance_db."""
    values = tuple(float(c) for c in crossings)
    if len(values) < 2:
        raise AnalysisError("consensus needs at least two crossings")
    lo, hi = min(values), max(values)
    spread = hi - lo
    dispersed = spread > tolerance_db
    mean = None if dispersed else sum(values) / len(values)
    return BarrierEstimate(mean, (lo, hi), values, spread, tolerance_db, dispersed)


@dataclass(frozen=True)
class BarrierReportRow:
    """One row of the barrier report CSV.

    kind "crossing" rows carry one hop-count's interpolated crossing;
    kind "consensus" rows summarize a (scenario, decoder, channel) group.
    """

    kind: str
    scenario: str
    decoder: str
    channel: str
    fading_mode: str
    num_relays: int | None
    eb_n0_db: float | None
    bracket_lo_db: float
    bracket_hi_db: float
    spread_db: float | None
    dispersed: bool | None


BARRIER_COLUMNS = (
    "kind",
    "scenario",
    "decoder",
    "channel",
    "fading_mode",
    "num_relays",
    "eb_n0_db",
    "bracket_lo_db",
    "bracket_hi_db",
    "spread_db",
    "dispersed",
)


def barrier_report(
    records: Iterable[BerRecord], tolerance_db: float = 1.0
) -> list[BarrierReportRow]:
    """Cross every decoded curve with its matching undecoded baseline.

    Baselines are matched on (channel, fading mode, hop count).  Groups
    sharing (scenario, decoder, channel, fading mode) with at least two
    crossings also get a consensus row.
    """
    curves = curves_from_records(records)
    baselines = {
        (k.channel, k.fading_mode, k.num_relays): c
        for k, c in curves.items()
        if k.scenario == Scenario.NO_GRAND.value
    }
    treatments = {k: c for k, c in curves.items() if k.scenario != Scenario.NO_GRAND.value}
    if not baselines or not treatments:
        raise AnalysisError(
            "need baseline and treatment curves: got "
            f"{len(baselines)} undecoded baseline(s) and {len(treatments)} decoded curve(s)"
        )
    rows: list[BarrierReportRow] = []
    groups: dict[tuple[str, str, str, str], list[CrossingEstimate]] = {}
    for key in sorted(treatments):
        base = baselines.get((key.channel, key.fading_mode, key.num_relays))
        if base is None:
            continue
        est = find_crossing(treatments[key], base)
        if est is None:
            continue
        rows.append(
            BarrierReportRow(
                kind="crossing",
                scenario=key.scenario,
                decoder=key.decoder,
                channel=key.channel,
                fading_mode=key.fading_mode,
                num_relays=key.num_relays,
                eb_n0_db=est.eb_n0_db,
                bracket_lo_db=est.bracket[0],
                bracket_hi_db=est.bracket[1],
                spread_db=None,
                dispersed=None,
            )
        )
        group = (key.scenario, key.decoder, key.channel, key.fading_mode)
        groups.setdefault(group, []).append(est)
    for group in sorted(groups):
        ests = groups[group]
        if len(ests) < 2:
            continue
        consensus = barrier_consensus([e.eb_n0_db for e in ests], tolerance_db)
        rows.append(
            BarrierReportRow(
                kind="consensus",
                scenario=group[0],
                decoder=group[1],
                channel=group[2],
                fading_mode=group[3],
                num_relays=None,
                eb_n0_db=consensus.eb_n0_db,
                bracket_lo_db=consensus.bracket[0],
                bracket_hi_db=consensus.bracket[1],
                spread_db=consensus.spread_db,
                dispersed=consensus.dispersed,
            )
        )
    if not rows:
        raise AnalysisError("no crossings found between decoded curves and baselines")
    return rows


def _cell_text(value: object) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_barrier_csv(
    path: str, rows: Iterable[BarrierReportRow], metadata: dict[str, str] | None = None
) -> None:
    lines = [f"# {key}: {value}" for key, value in (metadata or {}).items()]
    lines.append(",".join(BARRIER_COLUMNS))
    for row in rows:
        lines.append(",".join(_cell_text(getattr(row, name)) for name in BARRIER_COLUMNS))
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def read_barrier_csv(path: str) -> list[BarrierReportRow]:
    with open(path, "r", encoding="ascii") as fh:
        rows = [line.rstrip("\n") for line in fh if line.strip() and not line.startswith("#")]
    if not rows:
        return []
    if tuple(rows[0].split(",")) != BARRIER_COLUMNS:
        raise ValueError(f"unexpected barrier CSV columns; expected {list(BARRIER_COLUMNS)}")
    out = []
    for row in rows[1:]:
        parts = row.split(",")
        if len(parts) != len(BARRIER_COLUMNS):
            raise ValueError(f"malformed barrier row: {row!r}")
        raw = dict(zip(BARRIER_COLUMNS, parts))
        out.append(
            BarrierReportRow(
                kind=raw["kind"],
                scenario=raw["scenario"],
                decoder=raw["decoder"],
                channel=raw["channel"],
                fading_mode=raw["fading_mode"],
                num_relays=int(raw["num_relays"]) if raw["num_relays"] else None,
                eb_n0_db=float(raw["eb_n0_db"]) if raw["eb_n0_db"] else None,
                bracket_lo_db=float(raw["bracket_lo_db"]),
                bracket_hi_db=float(raw["bracket_hi_db"]),
                spread_db=float(raw["spread_db"]) if raw["spread_db"] else None,
                dispersed=raw["dispersed"] == "true" if raw["dispersed"] else None,
            )
        )
    return out
