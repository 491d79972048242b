// ---------------------------------------------------------------------------
// Deterministic SVG chart building: fixed styles, fixed number formatting,
// no timestamps, so re-rendering identical data yields identical bytes.
// ---------------------------------------------------------------------------

export interface Series {
  label: string;
  x: number[];
  y: number[];
  color: string;
}

export interface PanelOpts {
  title: string;
  xLabel: string;
  yLabel: string;
  logX: boolean;
  series: Series[];
}

// Energies of empty modes are exact zeros; clip them to the axis floor so
// the logarithm stays finite.
export const LOG_FLOOR = 1e-20;

export const PALETTE = [
  "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
  "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939",
  "#8c6d31", "#843c39", "#7b4173", "#3182bd", "#e6550d", "#31a354",
];

const f = (v: number): string => v.toFixed(2);

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function linTicks(lo: number, hi: number, count: number): number[] {
  const range = hi - lo || 1;
  const rough = range / count;
  const mag = Math.pow(10, Math.floor(Math.log10(rough)));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((s) => s >= rough) ?? rough;
  const ticks: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + step * 1e-9; v += step) {
    ticks.push(v);
  }
  return ticks;
}

function decadeTicks(lo: number, hi: number): number[] {
  const first = Math.ceil(lo);
  const last = Math.floor(hi);
  const span = last - first;
  const stride = Math.max(1, Math.ceil((span + 1) / 8));
  const ticks: number[] = [];
  for (let d = first; d <= last; d += stride) ticks.push(d);
  return ticks;
}

function fmtDecade(d: number): string {
  return `1e${d}`;
}

/** One panel drawn into the group coordinates [x0, x0+w] x [y0, y0+h]. */
function panel(opts: PanelOpts, x0: number, y0: number, w: number, h: number,
               withLegend: boolean): string {
  const ml = 54, mr = 10, mt = 22, mb = 34;
  const pw = w - ml - mr;
  const ph = h - mt - mb;

  const xs = opts.series.flatMap((s) => s.x).filter((v) => !opts.logX || v > 0);
  const xRaw: [number, number] = xs.length
    ? [Math.min(...xs), Math.max(...xs)] : [0, 1];
  const xLo = opts.logX ? Math.log10(xRaw[0]) : xRaw[0];
  const xHi = opts.logX ? Math.log10(xRaw[1]) : xRaw[1];

  const ys = opts.series.flatMap((s) => s.y).map((v) => Math.max(v, LOG_FLOOR));
  const yLo = Math.floor(Math.log10(Math.min(...ys)));
  const yHi = Math.ceil(Math.log10(Math.max(...ys)) + 1e-12);

  const xOf = (v: number): number => {
    const t = opts.logX ? Math.log10(Math.max(v, Number.MIN_VALUE)) : v;
    return x0 + ml + ((t - xLo) / (xHi - xLo || 1)) * pw;
  };
  const yOf = (v: number): number => {
    const t = Math.log10(Math.max(v, LOG_FLOOR));
    return y0 + mt + ph - ((t - yLo) / (yHi - yLo || 1)) * ph;
  };

  let s = "";
  s += `<text x="${f(x0 + ml)}" y="${f(y0 + mt - 8)}" font-size="10" font-weight="600" fill="#222">${esc(opts.title)}</text>\n`;

  const yTicks = decadeTicks(yLo, yHi);
  for (const d of yTicks) {
    const y = y0 + mt + ph - ((d - yLo) / (yHi - yLo || 1)) * ph;
    s += `<line x1="${f(x0 + ml)}" y1="${f(y)}" x2="${f(x0 + ml + pw)}" y2="${f(y)}" stroke="#eee" stroke-width="0.5"/>\n`;
    s += `<text x="${f(x0 + ml - 4)}" y="${f(y + 3)}" text-anchor="end" font-size="7" fill="#555">${fmtDecade(d)}</text>\n`;
  }
  const xTicks = opts.logX ? decadeTicks(xLo, xHi) : linTicks(xLo, xHi, 6);
  for (const v of xTicks) {
    const x = x0 + ml + ((v - xLo) / (xHi - xLo || 1)) * pw;
    s += `<line x1="${f(x)}" y1="${f(y0 + mt + ph)}" x2="${f(x)}" y2="${f(y0 + mt + ph + 3)}" stroke="#333" stroke-width="0.5"/>\n`;
    const label = opts.logX ? fmtDecade(v) : String(Number(v.toPrecision(6)));
    s += `<text x="${f(x)}" y="${f(y0 + mt + ph + 12)}" text-anchor="middle" font-size="7" fill="#555">${esc(label)}</text>\n`;
  }
  s += `<rect x="${f(x0 + ml)}" y="${f(y0 + mt)}" width="${f(pw)}" height="${f(ph)}" fill="none" stroke="#333" stroke-width="0.7"/>\n`;
  s += `<text x="${f(x0 + ml + pw / 2)}" y="${f(y0 + h - 6)}" text-anchor="middle" font-size="8" fill="#444">${esc(opts.xLabel)}</text>\n`;
  s += `<text x="${f(x0 + 12)}" y="${f(y0 + mt + ph / 2)}" text-anchor="middle" font-size="8" fill="#444" transform="rotate(-90,${f(x0 + 12)},${f(y0 + mt + ph / 2)})">${esc(opts.yLabel)}</text>\n`;

  for (const ser of opts.series) {
    const pts: string[] = [];
    for (let i = 0; i < ser.x.length; i++) {
      if (opts.logX && ser.x[i] <= 0) continue;
      pts.push(`${f(xOf(ser.x[i]))},${f(yOf(ser.y[i]))}`);
    }
    s += `<polyline fill="none" stroke="${ser.color}" stroke-width="1" points="${pts.join(" ")}"/>\n`;
  }

  if (withLegend) {
    const lx = x0 + ml + pw - 86;
    let ly = y0 + mt + 8;
    for (const ser of opts.series) {
      s += `<line x1="${f(lx)}" y1="${f(ly)}" x2="${f(lx + 14)}" y2="${f(ly)}" stroke="${ser.color}" stroke-width="1.5"/>\n`;
      s += `<text x="${f(lx + 18)}" y="${f(ly + 3)}" font-size="7" fill="#444">${esc(ser.label)}</text>\n`;
      ly += 10;
    }
  }
  return s;
}

export function chart(panels: PanelOpts[], width = 720, height = 300,
                      legend = true): string {
  const pw = width / panels.length;
  let s = `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">\n`;
  s += `<rect width="${width}" height="${height}" fill="#fff"/>\n`;
  panels.forEach((p, i) => {
    s += panel(p, i * pw, 0, pw, height, legend);
  });
  s += `</svg>\n`;
  return s;
}
