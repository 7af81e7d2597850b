import { existsSync, mkdirSync, statSync, writeFileSync } from "node:fs";
import { join } from "node:path";
import { pathToFileURL } from "node:url";
import { readBarrierCsv, readResultsCsv } from "./csv.js";
import type { PanelKey } from "./panels.js";
import { listPanels, panelId, parsePanelId } from "./panels.js";
import { renderPanel } from "./figure.js";

const USAGE = `usage: grandhop-plots <results.csv> [options]

options:
  --panel scenario/decoder/channel   panel to render (repeatable; default: all panels found)
  --out PATH                         output .svg file (single panel) or directory (default: figures)
  --barrier PATH                     barrier.csv for the consensus overlay line
  --width N                          figure width in px (default 720)
  --height N                         figure height in px (default 480)

exit codes: 0 ok, 1 bad arguments, 2 runtime failure`;

interface Args {
  results: string;
  panels: string[];
  out: string;
  barrier: string | null;
  width: number;
  height: number;
}

class UsageError extends Error {}

function takeValue(argv: string[], i: number, flag: string): string {
  const value = argv[i + 1];
  if (value === undefined) throw new UsageError(`${flag} needs a value`);
  return value;
}

function parseArgs(argv: string[]): Args {
  const args: Args = {
    results: "",
    panels: [],
    out: "figures",
    barrier: null,
    width: 720,
    height: 480,
  };
  const positional: string[] = [];
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i]!;
    switch (arg) {
      case "--panel":
        args.panels.push(takeValue(argv, i, arg));
        i++;
        break;
      case "--out":
        args.out = takeValue(argv, i, arg);
        i++;
        break;
      case "--barrier":
        args.barrier = takeValue(argv, i, arg);
        i++;
        break;
      case "--width":
      case "--height": {
        const value = Number(takeValue(argv, i, arg));
        if (!Number.isFinite(value) || value < 100) {
          throw new UsageError(`${arg} must be a number >= 100`);
        }
        if (arg === "--width") args.width = value;
        else args.height = value;
        i++;
        break;
      }
      case "--help":
      case "-h":
        throw new UsageError(USAGE);
      default:
        if (arg.startsWith("-")) throw new UsageError(`unknown flag ${arg}`);
        positional.push(arg);
    }
  }
  if (positional.length !== 1) {
    throw new UsageError("expected exactly one results.csv path");
  }
  args.results = positional[0]!;
  return args;
}

function outputPath(out: string, key: PanelKey, singlePanel: boolean): string {
  const looksLikeFile = out.endsWith(".svg");
  if (looksLikeFile && singlePanel) return out;
  if (looksLikeFile && !singlePanel) {
    throw new UsageError("--out is a single .svg path but several panels were selected; pass a directory");
  }
  return join(out, `${panelId(key).replace(/\//g, "-")}.svg`);
}

export function main(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    if (err instanceof UsageError) {
      console.error(err.message);
      return 1;
    }
    throw err;
  }

  try {
    const results = readResultsCsv(args.results);
    const barrier = args.barrier === null ? undefined : readBarrierCsv(args.barrier);

    let keys: PanelKey[];
    if (args.panels.length > 0) {
      keys = args.panels.map(parsePanelId);
    } else {
      keys = listPanels(results.rows);
      if (keys.length === 0) {
        console.error(`no decoded panels in ${args.results} (only undecoded baselines found)`);
        return 2;
      }
    }

    const single = keys.length === 1;
    if (!(single && args.out.endsWith(".svg"))) {
      if (!existsSync(args.out) || !statSync(args.out).isDirectory()) {
        mkdirSync(args.out, { recursive: true });
      }
    }
    for (const key of keys) {
      const svg = renderPanel(results, key, {
        width: args.width,
        height: args.height,
        barrier,
      });
      const path = outputPath(args.out, key, single);
      writeFileSync(path, svg, "utf8");
      console.log(`wrote ${path}`);
    }
    return 0;
  } catch (err) {
    if (err instanceof UsageError) {
      console.error(err.message);
      return 1;
    }
    console.error(`error: ${err instanceof Error ? err.message : String(err)}`);
    return 2;
  }
}

const invokedDirectly =
  typeof process.argv[1] === "string" &&
  import.meta.url === pathToFileURL(process.argv[1]).href;
if (invokedDirectly) {
  process.exit(main(process.argv.slice(2)));
}
