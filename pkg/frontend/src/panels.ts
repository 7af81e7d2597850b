import type { BerRow } from "./csv.js";

export interface PanelKey {
  scenario: string;
  decoder: string;
  channel: string;
}

export interface CurvePoint {
  ebN0Db: number;
  ber: number;
  // value actually drawn; equals ber except for zero-error upper bounds
  plotBer: number;
  upperBound: boolean;
  trials: number;
}

export interface Curve {
  numRelays: number;
  points: CurvePoint[];
}

export interface PanelData {
  key: PanelKey;
  fadingMode: string;
  series: Curve[];
  baselines: Curve[];
}

export function panelId(key: PanelKey): string {
  return `${key.scenario}/${key.decoder}/${key.channel}`;
}

export function parsePanelId(text: string): PanelKey {
  const parts = text.split("/");
  if (parts.length !== 3 || parts.some((p) => p.length === 0)) {
    throw new Error(`bad panel id ${JSON.stringify(text)}, expected scenario/decoder/channel`);
  }
  return { scenario: parts[0]!, decoder: parts[1]!, channel: parts[2]! };
}

/** Distinct decoded (scenario, decoder, channel) triples in first-appearance order. */
export function listPanels(rows: BerRow[]): PanelKey[] {
  const seen = new Set<string>();
  const panels: PanelKey[] = [];
  for (const row of rows) {
    if (row.scenario === "no_grand" || row.decoder === "none") continue;
    const key = { scenario: row.scenario, decoder: row.decoder, channel: row.channel };
    const id = panelId(key);
    if (!seen.has(id)) {
      seen.add(id);
      panels.push(key);
    }
  }
  return panels;
}

function toPoint(row: BerRow, dataBits: number | null): CurvePoint {
  const upperBound = row.bitErrors === 0;
  let plotBer = row.ber;
  if (upperBound) {
    // zero observed errors: draw the Monte Carlo resolution limit instead
    plotBer = 1 / (row.trials * (dataBits ?? 1));
  }
  return { ebN0Db: row.ebN0Db, ber: row.ber, plotBer, upperBound, trials: row.trials };
}

function groupByRelays(rows: BerRow[], dataBits: number | null): Curve[] {
  const order: number[] = [];
  const byRelays = new Map<number, CurvePoint[]>();
  for (const row of rows) {
    let points = byRelays.get(row.numRelays);
    if (!points) {
      points = [];
      byRelays.set(row.numRelays, points);
      order.push(row.numRelays);
    }
    // records go in verbatim, in file order; no sorting, no smoothing
    points.push(toPoint(row, dataBits));
  }
  return order.map((numRelays) => ({ numRelays, points: byRelays.get(numRelays)! }));
}

/**
 * Collect one panel's decoded curves plus the undecoded baselines for the
 * same channel and fading mode. Throws a diagnostic naming the panel and
 * listing what the file does contain when the selection is empty.
 */
export function selectPanel(rows: BerRow[], key: PanelKey, dataBits: number | null): PanelData {
  const matched = rows.filter(
    (r) => r.scenario === key.scenario && r.decoder === key.decoder && r.channel === key.channel
  );
  if (matched.length === 0) {
    const available = listPanels(rows).map(panelId);
    const hint = available.length > 0 ? available.join(", ") : "(none)";
    throw new Error(`panel ${panelId(key)} not in the results; available panels: ${hint}`);
  }
  const fadingMode = matched[0]!.fadingMode;
  const baselineRows = rows.filter(
    (r) => r.scenario === "no_grand" && r.channel === key.channel && r.fadingMode === fadingMode
  );
  return {
    key,
    fadingMode,
    series: groupByRelays(matched, dataBits),
    baselines: groupByRelays(baselineRows, dataBits),
  };
}
