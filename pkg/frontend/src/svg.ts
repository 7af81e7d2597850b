// Small deterministic SVG helpers. No randomness, no timestamps, no ids:
// the same inputs must always serialize to the same bytes.

export function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Stable short form for coordinates: fixed 2 decimals, no negative zero. */
export function coord(v: number): string {
  const text = v.toFixed(2);
  return text === "-0.00" ? "0.00" : text;
}

/** Stable label form for data values: up to 4 significant digits. */
export function label(v: number): string {
  if (v === 0) return "0";
  const abs = Math.abs(v);
  if (abs >= 0.01 && abs < 10000) {
    return String(Number(v.toPrecision(4)));
  }
  const exp = Math.floor(Math.log10(abs));
  const mant = v / 10 ** exp;
  const m = Number(mant.toPrecision(3));
  return m === 1 ? `1e${exp}` : `${m}e${exp}`;
}

export interface Scale {
  (value: number): number;
  domain: [number, number];
}

export function linearScale(d0: number, d1: number, r0: number, r1: number): Scale {
  const span = d1 - d0;
  const fn = ((value: number) => r0 + ((value - d0) / span) * (r1 - r0)) as Scale;
  fn.domain = [d0, d1];
  return fn;
}

/** Log10 scale; the domain is given in data units and must be positive. */
export function log10Scale(d0: number, d1: number, r0: number, r1: number): Scale {
  if (d0 <= 0 || d1 <= 0) throw new Error("log scale domain must be positive");
  const l0 = Math.log10(d0);
  const span = Math.log10(d1) - l0;
  const fn = ((value: number) => r0 + ((Math.log10(value) - l0) / span) * (r1 - r0)) as Scale;
  fn.domain = [d0, d1];
  return fn;
}

/** Powers of ten covering [lo, hi]. */
export function decadeTicks(lo: number, hi: number): number[] {
  const first = Math.ceil(Math.log10(lo) - 1e-9);
  const last = Math.floor(Math.log10(hi) + 1e-9);
  const ticks: number[] = [];
  // 10 ** -5 carries float noise; parsing "1e-5" gives the canonical value
  for (let e = first; e <= last; e++) ticks.push(Number(`1e${e}`));
  return ticks;
}

/** Ticks at a 1/2/5 step sized to give roughly `want` divisions. */
export function linearTicks(lo: number, hi: number, want: number): number[] {
  const rawStep = (hi - lo) / Math.max(want, 1);
  const mag = 10 ** Math.floor(Math.log10(rawStep));
  let step = mag;
  for (const m of [1, 2, 5, 10]) {
    if (mag * m >= rawStep) {
      step = mag * m;
      break;
    }
  }
  const ticks: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + step * 1e-9; v += step) {
    ticks.push(Number(v.toPrecision(12)));
  }
  return ticks;
}

export function polyline(points: Array<[number, number]>, attrs: string): string {
  const coords = points.map(([x, y]) => `${coord(x)},${coord(y)}`).join(" ");
  return `<polyline points="${coords}" ${attrs}/>`;
}

export function circleMarker(x: number, y: number, r: number, fill: string): string {
  return `<circle cx="${coord(x)}" cy="${coord(y)}" r="${coord(r)}" fill="${fill}"/>`;
}

/** Downward-pointing triangle, used for upper-bound (zero error) points. */
export function downTriangle(x: number, y: number, size: number, fill: string): string {
  const h = size * 0.866;
  const p1 = `${coord(x - size)},${coord(y - h / 2)}`;
  const p2 = `${coord(x + size)},${coord(y - h / 2)}`;
  const p3 = `${coord(x)},${coord(y + h)}`;
  return `<polygon points="${p1} ${p2} ${p3}" fill="${fill}"/>`;
}

export function text(x: number, y: number, content: string, attrs: string): string {
  return `<text x="${coord(x)}" y="${coord(y)}" ${attrs}>${esc(content)}</text>`;
}

export function line(x1: number, y1: number, x2: number, y2: number, attrs: string): string {
  return `<line x1="${coord(x1)}" y1="${coord(y1)}" x2="${coord(x2)}" y2="${coord(y2)}" ${attrs}/>`;
}

export function document(width: number, height: number, body: string[]): string {
  const head =
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">`;
  return [head, ...body, "</svg>", ""].join("\n");
}
