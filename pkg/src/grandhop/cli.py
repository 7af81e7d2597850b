"""Command-line front end: sweeps, barrier reports, self tests, presets.

Exit codes: 0 on success, 1 on usage or configuration errors, 2 on
runtime failures (I/O, malformed input files, failed checks).

Configuration precedence, lowest to highest: preset values, then a JSON
config file (--config), then individual flags.  Unknown config keys are
rejected rather than ignored.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from typing import Sequence

from . import analysis, montecarlo, selftest
from .crc import CrcCode
from .grand import DEFAULT_MAX_QUERIES, DEFAULT_MAX_WEIGHT
from .modem import FADING_PER_BLOCK, FADING_PER_SYMBOL
from .montecarlo import DEFAULT_BATCH_SIZE, ErrorTarget, FixedTrials, StoppingRule, SweepGrid

__all__ = ["entry", "PRESETS", "DEFAULT_SEED"]

DEFAULT_SEED = 0xC0FFEE


class _UsageError(Exception):
    """Bad flags or bad configuration; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise _UsageError(message)


_RELAY_SWEEP = [0, 1, 2, 3, 4]
_FAST = {"kind": "error_target", "target_errors": 200, "max_trials": 2_000_000,
         "min_trials": 256}
_FULL = {"kind": "error_target", "target_errors": 2000, "max_trials": 50_000_000,
         "min_trials": 256}


@dataclass(frozen=True)
class Preset:
    description: str
    config: dict


def _preset(decoder: str, channel: str, scenario: str, points: list[float], text: str) -> Preset:
    return Preset(
        description=text,
        config={
            "scenarios": [scenario, "no_grand"],
            "decoders": [decoder],
            "channels": [channel],
            "relay_counts": list(_RELAY_SWEEP),
            "eb_n0_db": list(points),
            "fading": FADING_PER_SYMBOL,
        },
    )


PRESETS: dict[str, Preset] = {
    "grand-awgn-dest-only": _preset(
        "grand", "awgn", "dest_only", [float(x) for x in range(0, 10)],
        "hard GRAND at the destination only, AWGN, 1..5 hops plus undecoded baselines",
    ),
    "grand-awgn-all-nodes": _preset(
        "grand", "awgn", "all_nodes", [float(x) for x in range(0, 10)],
        "hard GRAND at every node, AWGN, 1..5 hops plus undecoded baselines",
    ),
    "grand-rayleigh-dest-only": _preset(
        "grand", "rayleigh", "dest_only", [float(x) for x in range(4, 26, 2)],
        "hard GRAND at the destination only, Rayleigh fading, 1..5 hops plus baselines",
    ),
    "grand-rayleigh-all-nodes": _preset(
        "grand", "rayleigh", "all_nodes", [float(x) for x in range(4, 26, 2)],
        "hard GRAND at every node, Rayleigh fading, 1..5 hops plus baselines",
    ),
    "orbgrand-awgn-dest-only": _preset(
        "orbgrand", "awgn", "dest_only", [float(x) for x in range(0, 9)],
        "soft ORBGRAND at the destination only, AWGN, 1..5 hops plus baselines",
    ),
    "orbgrand-awgn-all-nodes": _preset(
        "orbgrand", "awgn", "all_nodes", [float(x) for x in range(0, 9)],
        "soft ORBGRAND at every node, AWGN, 1..5 hops plus baselines",
    ),
    "orbgrand-rayleigh-dest-only": _preset(
        "orbgrand", "rayleigh", "dest_only", [float(x) for x in range(1, 19, 2)],
        "soft ORBGRAND at the destination only, Rayleigh fading, 1..5 hops plus baselines",
    ),
    "orbgrand-rayleigh-all-nodes": _preset(
        "orbgrand", "rayleigh", "all_nodes", [float(x) for x in range(1, 19, 2)],
        "soft ORBGRAND at every node, Rayleigh fading, 1..5 hops plus baselines",
    ),
}

_CONFIG_KEYS = {
    "scenarios", "decoders", "channels", "relay_counts", "eb_n0_db", "fading",
    "stopping", "batch_size", "max_weight", "max_queries", "code", "seed",
    "output_dir",
}
_STOPPING_KEYS = {
    "error_target": {"kind", "target_errors", "max_trials", "min_trials"},
    "fixed_trials": {"kind", "trials"},
}
_CODE_KEYS = {"koopman_id", "k"}


def _parse_int(value: object, name: str) -> int:
    """Accept plain ints or hex strings like \"0x8F3\"."""
    if isinstance(value, bool):
        raise _UsageError(f"{name} must be an integer")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            return int(value, 0)
        except ValueError:
            raise _UsageError(f"{name}: cannot parse integer from {value!r}") from None
    raise _UsageError(f"{name} must be an integer")


def _merge_config(base: dict, overlay: dict, source: str) -> dict:
    unknown = set(overlay) - _CONFIG_KEYS
    if unknown:
        raise _UsageError(f"unknown config key(s) in {source}: {', '.join(sorted(unknown))}")
    merged = dict(base)
    merged.update(overlay)
    return merged


def _resolve_stopping(raw: dict | None) -> StoppingRule:
    if raw is None:
        raw = dict(_FAST)
    if not isinstance(raw, dict) or "kind" not in raw:
        raise _UsageError('stopping must be an object with a "kind" field')
    kind = raw["kind"]
    if kind not in _STOPPING_KEYS:
        raise _UsageError(f"unknown stopping kind {kind!r}")
    unknown = set(raw) - _STOPPING_KEYS[kind]
    if unknown:
        raise _UsageError(f"unknown stopping key(s): {', '.join(sorted(unknown))}")
    try:
        if kind == "fixed_trials":
            return FixedTrials(trials=_parse_int(raw["trials"], "stopping.trials"))
        return ErrorTarget(
            target_errors=_parse_int(raw.get("target_errors", 200), "target_errors"),
            max_trials=_parse_int(raw.get("max_trials", 2_000_000), "max_trials"),
            min_trials=_parse_int(raw.get("min_trials", 256), "min_trials"),
        )
    except (KeyError, ValueError) as exc:
        raise _UsageError(f"bad stopping policy: {exc}") from None


def _resolve_code(raw: dict | None) -> CrcCode:
    if raw is None:
        return CrcCode.from_koopman(0x8F3, k=116)
    unknown = set(raw) - _CODE_KEYS
    if unknown:
        raise _UsageError(f"unknown code key(s): {', '.join(sorted(unknown))}")
    try:
        return CrcCode.from_koopman(
            _parse_int(raw["koopman_id"], "code.koopman_id"),
            k=_parse_int(raw["k"], "code.k"),
        )
    except (KeyError, ValueError) as exc:
        raise _UsageError(f"bad code parameters: {exc}") from None


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved sweep invocation."""

    code: CrcCode
    grid: SweepGrid
    stopping: StoppingRule
    batch_size: int
    max_weight: int
    max_queries: int
    workers: int
    output_dir: str
    seed_was_default: bool
    preset_name: str | None
    budget: str | None

    def echo_dict(self) -> dict:
        stopping: dict = {"kind": "fixed_trials", "trials": self.stopping.trials} \
            if isinstance(self.stopping, FixedTrials) else {
                "kind": "error_target",
                "target_errors": self.stopping.target_errors,
                "max_trials": self.stopping.max_trials,
                "min_trials": self.stopping.min_trials,
            }
        return {
            "preset": self.preset_name,
            "budget": self.budget,
            "scenarios": [s.value for s in self.grid.scenarios],
            "decoders": [d.value for d in self.grid.decoders],
            "channels": list(self.grid.channels),
            "relay_counts": list(self.grid.relay_counts),
            "eb_n0_db": list(self.grid.eb_n0_points),
            "fading": self.grid.fading,
            "code": {"koopman_id": self.code.koopman_id, "k": self.code.k},
            "stopping": stopping,
            "batch_size": self.batch_size,
            "max_weight": self.max_weight,
            "max_queries": self.max_queries,
            "seed": self.grid.master_seed,
            "workers": self.workers,
            "output_dir": self.output_dir,
        }


def _resolve_run_config(args: argparse.Namespace) -> RunConfig:
    merged: dict = {}
    preset_name = None
    if args.preset:
        if args.preset not in PRESETS:
            known = ", ".join(sorted(PRESETS))
            raise _UsageError(f"unknown preset {args.preset!r}; known presets: {known}")
        preset_name = args.preset
        merged = _merge_config({}, PRESETS[args.preset].config, f"preset {args.preset}")
        merged["stopping"] = dict(_FULL if args.budget == "full" else _FAST)
    if args.config:
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                file_cfg = json.load(fh)
        except OSError as exc:
            raise _UsageError(f"cannot read config file: {exc}") from None
        except json.JSONDecodeError as exc:
            raise _UsageError(f"config file is not valid JSON: {exc}") from None
        if not isinstance(file_cfg, dict):
            raise _UsageError("config file must hold a JSON object")
        merged = _merge_config(merged, file_cfg, args.config)
    if not merged:
        raise _UsageError("sweep needs --preset and/or --config")

    seed_was_default = False
    if args.seed is not None:
        seed = _parse_int(args.seed, "--seed")
    elif "seed" in merged:
        seed = _parse_int(merged["seed"], "seed")
    else:
        seed = DEFAULT_SEED
        seed_was_default = True

    if args.trials is not None:
        merged["stopping"] = {"kind": "fixed_trials", "trials": args.trials}

    missing = {"scenarios", "decoders", "channels", "relay_counts", "eb_n0_db"} - set(merged)
    if missing:
        raise _UsageError(f"config is missing key(s): {', '.join(sorted(missing))}")

    code = _resolve_code(merged.get("code"))
    stopping = _resolve_stopping(merged.get("stopping"))
    try:
        grid = SweepGrid(
            scenarios=tuple(merged["scenarios"]),
            decoders=tuple(merged["decoders"]),
            channels=tuple(merged["channels"]),
            relay_counts=tuple(merged["relay_counts"]),
            eb_n0_points=tuple(merged["eb_n0_db"]),
            master_seed=seed,
            fading=str(merged.get("fading", FADING_PER_SYMBOL)),
        )
        cells = grid.cells(code)
    except ValueError as exc:
        raise _UsageError(str(exc)) from None
    if not cells:
        raise _UsageError(
            "grid has no runnable cells; decoding scenarios need a decoder other than none"
        )

    output_dir = args.out if args.out is not None else merged.get("output_dir", "results")
    workers = args.workers if args.workers is not None else (os.cpu_count() or 1)
    if workers < 1:
        raise _UsageError("--workers must be at least 1")
    return RunConfig(
        code=code,
        grid=grid,
        stopping=stopping,
        batch_size=_parse_int(merged.get("batch_size", DEFAULT_BATCH_SIZE), "batch_size"),
        max_weight=_parse_int(merged.get("max_weight", DEFAULT_MAX_WEIGHT), "max_weight"),
        max_queries=_parse_int(merged.get("max_queries", DEFAULT_MAX_QUERIES), "max_queries"),
        workers=workers,
        output_dir=str(output_dir),
        seed_was_default=seed_was_default,
        preset_name=preset_name,
        budget=args.budget if preset_name else None,
    )


def _print_seed(cfg: RunConfig) -> None:
    seed = cfg.grid.master_seed
    suffix = "  [default seed, pass --seed to change]" if cfg.seed_was_default else ""
    print(f"=== master seed {seed:#x} ({seed}){suffix} ===", flush=True)


def _cmd_sweep(args: argparse.Namespace) -> int:
    cfg = _resolve_run_config(args)
    cells = cfg.grid.cells(cfg.code, cfg.max_weight, cfg.max_queries)
    cap = cfg.stopping.trials if isinstance(cfg.stopping, FixedTrials) else cfg.stopping.max_trials
    _print_seed(cfg)
    if args.dry_run:
        print(f"cells: {len(cells)}")
        print(f"trial cap per cell: {cap}")
        print(f"total trial budget (upper bound): {len(cells) * cap}")
        print("dry run, nothing executed")
        return 0
    os.makedirs(cfg.output_dir, exist_ok=True)
    config_path = os.path.join(cfg.output_dir, "config.json")
    with open(config_path, "w", encoding="utf-8") as fh:
        json.dump(cfg.echo_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")

    def progress(i: int, total: int, rec: montecarlo.BerRecord) -> None:
        print(
            f"[{i + 1}/{total}] {rec.scenario}/{rec.decoder} {rec.channel}"
            f" L={rec.num_relays} {rec.eb_n0_db:g} dB:"
            f" ber={rec.ber:.3e} trials={rec.trials}"
            f" abandoned={rec.abandoned_fraction:.3f} ({rec.wall_time:.1f}s)",
            flush=True,
        )

    records = montecarlo.run_sweep(
        cfg.code,
        cfg.grid,
        cfg.stopping,
        workers=cfg.workers,
        batch_size=cfg.batch_size,
        max_weight=cfg.max_weight,
        max_queries=cfg.max_queries,
        progress=progress,
    )
    results_path = os.path.join(cfg.output_dir, "results.csv")
    metadata = montecarlo.standard_metadata(
        cfg.code, cfg.grid, cfg.stopping, cfg.batch_size, cfg.max_weight, cfg.max_queries
    )
    montecarlo.write_records_csv(results_path, records, metadata)
    print(f"wrote {results_path} ({len(records)} records) and {config_path}")
    return 0


def _cmd_barrier(args: argparse.Namespace) -> int:
    records = montecarlo.read_records_csv(args.results)
    if not records:
        raise ValueError(f"no records in {args.results}")
    rows = analysis.barrier_report(records, tolerance_db=args.tolerance_db)
    metadata = {
        "format": "grandhop barrier report",
        "source": os.path.basename(args.results),
        "tolerance_db": repr(float(args.tolerance_db)),
    }
    if os.path.isdir(args.out):
        args.out = os.path.join(args.out, "barrier.csv")
    analysis.write_barrier_csv(args.out, rows, metadata)
    for row in rows:
        if row.kind != "consensus":
            continue
        where = f"{row.decoder}/{row.scenario} over {row.channel}"
        if row.dispersed:
            print(f"{where}: dispersed crossings, spread {row.spread_db:.2f} dB")
        else:
            print(f"{where}: barrier consensus at {row.eb_n0_db:.2f} dB")
    print(f"wrote {args.out} ({len(rows)} rows)")
    return 0


def _cmd_selftest(args: argparse.Namespace) -> int:
    results = selftest.run_selftest()
    failed = 0
    for res in results:
        tag = "PASS" if res.passed else "FAIL"
        print(f"{tag}  {res.name}: {res.detail}")
        failed += 0 if res.passed else 1
    if failed:
        print(f"{failed} of {len(results)} checks failed")
        return 2
    print(f"all {len(results)} checks passed")
    return 0


def _cmd_presets(args: argparse.Namespace) -> int:
    for name in sorted(PRESETS):
        preset = PRESETS[name]
        cfg = preset.config
        points = cfg["eb_n0_db"]
        print(name)
        print(f"  {preset.description}")
        print(
            f"  grid: {len(cfg['relay_counts'])} relay counts x {len(points)} SNR points"
            f" ({points[0]:g}..{points[-1]:g} dB), budgets: fast, full"
        )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="grandhop", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="run a BER sweep and write results.csv")
    sweep.add_argument("--preset", help="named preset (see the presets command)")
    sweep.add_argument("--budget", choices=("fast", "full"), default="fast",
                       help="preset trial budget (default fast)")
    sweep.add_argument("--config", help="JSON config file; overrides preset values")
    sweep.add_argument("--seed", help="master seed (int or hex); default 0xC0FFEE")
    sweep.add_argument("--workers", type=int, help="worker processes (default: all cores)")
    sweep.add_argument("--trials", type=int,
                       help="override stopping with a fixed trial count")
    sweep.add_argument("--out", help="output directory (default: results)")
    sweep.add_argument("--dry-run", action="store_true",
                       help="print cell count and trial budget, run nothing")
    sweep.set_defaults(func=_cmd_sweep)

    barrier = sub.add_parser("barrier", help="locate decode-vs-baseline BER crossings")
    barrier.add_argument("results", help="results.csv from a sweep")
    barrier.add_argument("--out", default="barrier.csv", help="report path (default barrier.csv)")
    barrier.add_argument("--tolerance-db", type=float, default=1.0,
                         help="consensus tolerance in dB (default 1.0)")
    barrier.set_defaults(func=_cmd_barrier)

    check = sub.add_parser("selftest", help="run built-in oracle checks")
    check.set_defaults(func=_cmd_selftest)

    presets = sub.add_parser("presets", help="list shipped sweep presets")
    presets.set_defaults(func=_cmd_presets)
    return parser


def entry(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError, analysis.AnalysisError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(entry())
