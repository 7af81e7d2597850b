import { readFileSync } from "node:fs";

// Column order is part of the format; both parsers reject reordered headers.

export const RESULTS_HEADER = [
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
] as const;

export const BARRIER_HEADER = [
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
] as const;

export interface BerRow {
  scenario: string;
  decoder: string;
  channel: string;
  fadingMode: string;
  numRelays: number;
  ebN0Db: number;
  trials: number;
  bitErrors: number;
  blockErrors: number;
  ber: number;
  bler: number;
  meanQueries: number;
  abandonedFraction: number;
  seed: number;
}

export interface ResultsFile {
  metadata: Record<string, string>;
  rows: BerRow[];
}

export interface BarrierRow {
  kind: string;
  scenario: string;
  decoder: string;
  channel: string;
  fadingMode: string;
  numRelays: number | null;
  ebN0Db: number | null;
  bracketLoDb: number | null;
  bracketHiDb: number | null;
  spreadDb: number | null;
  dispersed: boolean | null;
}

function splitLines(text: string): string[] {
  return text.split("\n").filter((line) => line.length > 0);
}

function parseMetadata(lines: string[]): { metadata: Record<string, string>; body: string[] } {
  const metadata: Record<string, string> = {};
  let i = 0;
  for (; i < lines.length; i++) {
    const line = lines[i]!;
    if (!line.startsWith("#")) break;
    const stripped = line.slice(1).trim();
    const colon = stripped.indexOf(":");
    if (colon > 0) {
      metadata[stripped.slice(0, colon).trim()] = stripped.slice(colon + 1).trim();
    }
  }
  return { metadata, body: lines.slice(i) };
}

function checkHeader(got: string, expected: readonly string[], what: string): void {
  const cols = got.split(",");
  const missing = expected.filter((c) => !cols.includes(c));
  if (missing.length > 0) {
    throw new Error(`${what}: header missing column(s): ${missing.join(", ")}`);
  }
  if (cols.length !== expected.length || cols.some((c, i) => c !== expected[i])) {
    throw new Error(`${what}: header columns in wrong order, expected ${expected.join(",")}`);
  }
}

function num(value: string, column: string, lineNo: number): number {
  const parsed = Number(value);
  if (value === "" || !Number.isFinite(parsed)) {
    throw new Error(`line ${lineNo}: ${column} is not a number: ${JSON.stringify(value)}`);
  }
  return parsed;
}

function numOrNull(value: string, column: string, lineNo: number): number | null {
  if (value === "") return null;
  return num(value, column, lineNo);
}

export function parseResultsCsv(text: string): ResultsFile {
  const lines = splitLines(text);
  if (lines.length === 0) throw new Error("results csv: empty file");
  const { metadata, body } = parseMetadata(lines);
  if (body.length === 0) throw new Error("results csv: no header line");
  checkHeader(body[0]!, RESULTS_HEADER, "results csv");
  const headerLine = lines.length - body.length + 1;
  const rows: BerRow[] = [];
  for (let i = 1; i < body.length; i++) {
    const parts = body[i]!.split(",");
    const lineNo = headerLine + i;
    if (parts.length !== RESULTS_HEADER.length) {
      throw new Error(`line ${lineNo}: expected ${RESULTS_HEADER.length} fields, got ${parts.length}`);
    }
    rows.push({
      scenario: parts[0]!,
      decoder: parts[1]!,
      channel: parts[2]!,
      fadingMode: parts[3]!,
      numRelays: num(parts[4]!, "num_relays", lineNo),
      ebN0Db: num(parts[5]!, "eb_n0_db", lineNo),
      trials: num(parts[6]!, "trials", lineNo),
      bitErrors: num(parts[7]!, "bit_errors", lineNo),
      blockErrors: num(parts[8]!, "block_errors", lineNo),
      ber: num(parts[9]!, "ber", lineNo),
      bler: num(parts[10]!, "bler", lineNo),
      meanQueries: num(parts[11]!, "mean_queries", lineNo),
      abandonedFraction: num(parts[12]!, "abandoned_fraction", lineNo),
      seed: num(parts[13]!, "seed", lineNo),
    });
  }
  return { metadata, rows };
}

export function readResultsCsv(path: string): ResultsFile {
  return parseResultsCsv(readFileSync(path, "utf8"));
}

export function parseBarrierCsv(text: string): BarrierRow[] {
  const lines = splitLines(text);
  if (lines.length === 0) throw new Error("barrier csv: empty file");
  const { body } = parseMetadata(lines);
  if (body.length === 0) throw new Error("barrier csv: no header line");
  checkHeader(body[0]!, BARRIER_HEADER, "barrier csv");
  const headerLine = lines.length - body.length + 1;
  const rows: BarrierRow[] = [];
  for (let i = 1; i < body.length; i++) {
    const parts = body[i]!.split(",");
    const lineNo = headerLine + i;
    if (parts.length !== BARRIER_HEADER.length) {
      throw new Error(`line ${lineNo}: expected ${BARRIER_HEADER.length} fields, got ${parts.length}`);
    }
    const dispersedText = parts[10]!;
    let dispersed: boolean | null = null;
    if (dispersedText === "true") dispersed = true;
    else if (dispersedText === "false") dispersed = false;
    else if (dispersedText !== "") {
      throw new Error(`line ${lineNo}: dispersed must be true, false or empty`);
    }
    rows.push({
      kind: parts[0]!,
      scenario: parts[1]!,
      decoder: parts[2]!,
      channel: parts[3]!,
      fadingMode: parts[4]!,
      numRelays: numOrNull(parts[5]!, "num_relays", lineNo),
      ebN0Db: numOrNull(parts[6]!, "eb_n0_db", lineNo),
      bracketLoDb: numOrNull(parts[7]!, "bracket_lo_db", lineNo),
      bracketHiDb: numOrNull(parts[8]!, "bracket_hi_db", lineNo),
      spreadDb: numOrNull(parts[9]!, "spread_db", lineNo),
      dispersed,
    });
  }
  return rows;
}

export function readBarrierCsv(path: string): BarrierRow[] {
  return parseBarrierCsv(readFileSync(path, "utf8"));
}

/** Pull the data-bit count out of the "code" metadata line, e.g. "... k=116 n=128". */
export function dataBitsFromMetadata(metadata: Record<string, string>): number | null {
  const code = metadata["code"];
  if (!code) return null;
  const match = code.match(/\bk=(\d+)\b/);
  if (!match) return null;
  return Number(match[1]);
}
