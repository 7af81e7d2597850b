import type { BarrierRow, ResultsFile } from "./csv.js";
import { dataBitsFromMetadata } from "./csv.js";
import type { Curve, PanelKey } from "./panels.js";
import { panelId, selectPanel } from "./panels.js";
import {
  circleMarker,
  coord,
  decadeTicks,
  document as svgDocument,
  downTriangle,
  esc,
  label,
  line,
  linearScale,
  linearTicks,
  log10Scale,
  polyline,
  text,
} from "./svg.js";

export interface FigureOptions {
  width?: number;
  height?: number;
  title?: string;
  // overlay source; only a non-dispersed consensus row for this panel is drawn
  barrier?: BarrierRow[];
}

const SERIES_COLORS = [
  "#1f77b4",
  "#d62728",
  "#2ca02c",
  "#9467bd",
  "#ff7f0e",
  "#8c564b",
  "#17becf",
  "#e377c2",
];

const MARGIN = { top: 40, right: 20, bottom: 52, left: 70 };

function relayLabel(numRelays: number): string {
  return numRelays === 1 ? "1 relay" : `${numRelays} relays`;
}

function curveExtents(curves: Curve[]): { x: number[]; y: number[] } {
  const x: number[] = [];
  const y: number[] = [];
  for (const curve of curves) {
    for (const p of curve.points) {
      x.push(p.ebN0Db);
      y.push(p.plotBer);
    }
  }
  return { x, y };
}

function findBarrier(rows: BarrierRow[], key: PanelKey): BarrierRow | null {
  for (const row of rows) {
    if (
      row.kind === "consensus" &&
      row.scenario === key.scenario &&
      row.decoder === key.decoder &&
      row.channel === key.channel &&
      row.dispersed === false &&
      row.ebN0Db !== null
    ) {
      return row;
    }
  }
  return null;
}

export function renderPanel(results: ResultsFile, key: PanelKey, opts: FigureOptions = {}): string {
  const width = opts.width ?? 720;
  const height = opts.height ?? 480;
  const dataBits = dataBitsFromMetadata(results.metadata);
  const panel = selectPanel(results.rows, key, dataBits);

  const all = curveExtents([...panel.series, ...panel.baselines]);
  let xLo = Math.min(...all.x);
  let xHi = Math.max(...all.x);
  if (xLo === xHi) {
    xLo -= 1;
    xHi += 1;
  }
  const yMin = Math.min(...all.y);
  const yMax = Math.max(...all.y);
  let yLo = 10 ** Math.floor(Math.log10(yMin) + 1e-9);
  let yHi = 10 ** Math.ceil(Math.log10(yMax) - 1e-9);
  if (yLo === yHi) {
    yLo /= 10;
    yHi *= 10;
  }

  const plotW = width - MARGIN.left - MARGIN.right;
  const plotH = height - MARGIN.top - MARGIN.bottom;
  const sx = linearScale(xLo, xHi, MARGIN.left, MARGIN.left + plotW);
  const sy = log10Scale(yLo, yHi, MARGIN.top + plotH, MARGIN.top);

  const body: string[] = [];
  body.push(`<rect width="${width}" height="${height}" fill="white"/>`);

  // grid and axes
  for (const tick of decadeTicks(yLo, yHi)) {
    const y = sy(tick);
    body.push(line(MARGIN.left, y, MARGIN.left + plotW, y, 'stroke="#e0e0e0" stroke-width="1"'));
    body.push(text(MARGIN.left - 8, y + 4, label(tick), 'text-anchor="end" font-size="12" fill="#333"'));
  }
  for (const tick of linearTicks(xLo, xHi, 8)) {
    const x = sx(tick);
    body.push(line(x, MARGIN.top, x, MARGIN.top + plotH, 'stroke="#f0f0f0" stroke-width="1"'));
    body.push(
      text(x, MARGIN.top + plotH + 18, label(tick), 'text-anchor="middle" font-size="12" fill="#333"')
    );
  }
  body.push(
    line(MARGIN.left, MARGIN.top, MARGIN.left, MARGIN.top + plotH, 'stroke="#333" stroke-width="1"')
  );
  body.push(
    line(
      MARGIN.left,
      MARGIN.top + plotH,
      MARGIN.left + plotW,
      MARGIN.top + plotH,
      'stroke="#333" stroke-width="1"'
    )
  );
  body.push(
    text(MARGIN.left + plotW / 2, height - 12, "Eb/N0 (dB)", 'text-anchor="middle" font-size="13" fill="#111"')
  );
  body.push(
    `<text x="${coord(18)}" y="${coord(MARGIN.top + plotH / 2)}" text-anchor="middle" ` +
      `font-size="13" fill="#111" transform="rotate(-90 18 ${coord(MARGIN.top + plotH / 2)})">` +
      `${esc("bit error rate")}</text>`
  );
  body.push(
    text(MARGIN.left, 22, opts.title ?? panelId(key), 'text-anchor="start" font-size="14" fill="#111" font-weight="bold"')
  );

  // barrier overlay behind the data
  const barrier = opts.barrier ? findBarrier(opts.barrier, key) : null;
  if (barrier && barrier.ebN0Db !== null && barrier.ebN0Db >= xLo && barrier.ebN0Db <= xHi) {
    const x = sx(barrier.ebN0Db);
    body.push(
      line(x, MARGIN.top, x, MARGIN.top + plotH, 'stroke="#444" stroke-width="1.5" stroke-dasharray="2 3"')
    );
    body.push(
      text(x + 5, MARGIN.top + 14, `barrier ${label(barrier.ebN0Db)} dB`, 'text-anchor="start" font-size="12" fill="#444"')
    );
  }

  const drawCurve = (curve: Curve, stroke: string, dashed: boolean) => {
    const pts = curve.points.map((p) => [sx(p.ebN0Db), sy(p.plotBer)] as [number, number]);
    const dash = dashed ? ' stroke-dasharray="6 3"' : "";
    if (pts.length > 1) {
      body.push(polyline(pts, `fill="none" stroke="${stroke}" stroke-width="1.6"${dash}`));
    }
    curve.points.forEach((p, i) => {
      const [x, y] = pts[i]!;
      if (p.upperBound) {
        body.push(downTriangle(x, y, 4.2, stroke));
      } else {
        body.push(circleMarker(x, y, 3.2, stroke));
      }
    });
  };

  panel.baselines.forEach((curve) => drawCurve(curve, "#999999", true));
  panel.series.forEach((curve, i) => drawCurve(curve, SERIES_COLORS[i % SERIES_COLORS.length]!, false));

  // legend, top right corner of the plot area
  const legendRows: Array<{ label: string; stroke: string; dashed: boolean }> = panel.series.map(
    (curve, i) => ({
      label: relayLabel(curve.numRelays),
      stroke: SERIES_COLORS[i % SERIES_COLORS.length]!,
      dashed: false,
    })
  );
  if (panel.baselines.length > 0) {
    legendRows.push({ label: "no decoding", stroke: "#999999", dashed: true });
  }
  const legendX = MARGIN.left + plotW - 128;
  let legendY = MARGIN.top + 10;
  body.push(
    `<rect x="${coord(legendX - 8)}" y="${coord(legendY - 4)}" width="132" ` +
      `height="${coord(legendRows.length * 17 + 8)}" fill="white" fill-opacity="0.85" stroke="#ccc"/>`
  );
  for (const row of legendRows) {
    const dash = row.dashed ? ' stroke-dasharray="6 3"' : "";
    body.push(
      line(legendX, legendY + 5, legendX + 22, legendY + 5, `stroke="${row.stroke}" stroke-width="1.6"${dash}`)
    );
    body.push(text(legendX + 28, legendY + 9, row.label, 'text-anchor="start" font-size="12" fill="#111"'));
    legendY += 17;
  }

  // footnote when any upper-bound marker is present
  const hasBounds = [...panel.series, ...panel.baselines].some((c) =>
    c.points.some((p) => p.upperBound)
  );
  if (hasBounds) {
    body.push(
      text(
        MARGIN.left + plotW,
        height - 12,
        "triangles: zero errors observed, value is an upper bound",
        'text-anchor="end" font-size="11" fill="#666"'
      )
    );
  }

  return svgDocument(width, height, body);
}
