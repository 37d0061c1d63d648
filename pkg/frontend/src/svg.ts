import type { Series } from "./figures.js";

export interface ChartOptions {
  title: string;
  logY: boolean;
  width?: number;
  height?: number;
}

const COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"];
const MARGIN = { top: 42, right: 20, bottom: 48, left: 64 };

interface Scale {
  (v: number): number;
  ticks(): number[];
}

function linearScale(lo: number, hi: number, rLo: number, rHi: number): Scale {
  if (lo === hi) {
    lo -= 1;
    hi += 1;
  }
  const f = ((v: number) => rLo + ((v - lo) / (hi - lo)) * (rHi - rLo)) as Scale;
  f.ticks = () => {
    const span = hi - lo;
    const step = Math.pow(10, Math.floor(Math.log10(span / 5)));
    const unit = [1, 2, 5, 10].map((m) => m * step).find((u) => span / u <= 6) ?? 10 * step;
    const ticks: number[] = [];
    for (let t = Math.ceil(lo / unit) * unit; t <= hi + 1e-9 * unit; t += unit) {
      ticks.push(Number(t.toPrecision(12)));
    }
    return ticks;
  };
  return f;
}

function logScale(lo: number, hi: number, rLo: number, rHi: number): Scale {
  const llo = Math.log10(lo);
  const lhi = Math.log10(hi);
  const inner = linearScale(llo, lhi === llo ? llo + 1 : lhi, rLo, rHi);
  const f = ((v: number) => inner(Math.log10(v))) as Scale;
  f.ticks = () => {
    const ticks: number[] = [];
    for (let e = Math.ceil(llo - 1e-9); e <= Math.floor(lhi + 1e-9); e += 1) {
      ticks.push(Math.pow(10, e));
    }
    return ticks.length >= 2 ? ticks : [lo, hi];
  };
  return f;
}

function fmt(v: number): string {
  if (v !== 0 && (Math.abs(v) >= 1e5 || Math.abs(v) < 1e-3)) return v.toExponential(0);
  return Number(v.toPrecision(6)).toString();
}

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");
}

function panelSvg(
  series: Series[],
  colorOf: (s: Series) => string,
  title: string,
  logY: boolean,
  x0: number,
  width: number,
  height: number,
): string {
  const plotW = width - MARGIN.left - MARGIN.right;
  const plotH = height - MARGIN.top - MARGIN.bottom;
  const pts = series.flatMap((s) => [...s.line, ...s.markers]);
  const xs = pts.map((p) => p.n);
  const ys = pts.map((p) => p.value);
  const xScale = linearScale(Math.min(...xs), Math.max(...xs), x0 + MARGIN.left, x0 + MARGIN.left + plotW);
  const yLo = Math.min(...ys);
  const yHi = Math.max(...ys);
  const yScale = logY
    ? logScale(Math.max(yLo * 0.8, 1e-12), yHi * 1.25, MARGIN.top + plotH, MARGIN.top)
    : linearScale(Math.min(0, yLo), yHi * 1.08, MARGIN.top + plotH, MARGIN.top);

  const parts: string[] = [];
  parts.push(
    `<text x="${x0 + MARGIN.left + plotW / 2}" y="24" text-anchor="middle" font-size="15" font-weight="bold">${esc(title)}</text>`,
  );
  // axes
  const axisColor = "#444";
  parts.push(
    `<line x1="${x0 + MARGIN.left}" y1="${MARGIN.top + plotH}" x2="${x0 + MARGIN.left + plotW}" y2="${MARGIN.top + plotH}" stroke="${axisColor}"/>`,
    `<line x1="${x0 + MARGIN.left}" y1="${MARGIN.top}" x2="${x0 + MARGIN.left}" y2="${MARGIN.top + plotH}" stroke="${axisColor}"/>`,
  );
  for (const t of xScale.ticks()) {
    const px = xScale(t);
    parts.push(
      `<line x1="${px}" y1="${MARGIN.top + plotH}" x2="${px}" y2="${MARGIN.top + plotH + 5}" stroke="${axisColor}"/>`,
      `<text x="${px}" y="${MARGIN.top + plotH + 20}" text-anchor="middle" font-size="11">${fmt(t)}</text>`,
    );
  }
  for (const t of yScale.ticks()) {
    const py = yScale(t);
    parts.push(
      `<line x1="${x0 + MARGIN.left - 5}" y1="${py}" x2="${x0 + MARGIN.left}" y2="${py}" stroke="${axisColor}"/>`,
      `<line x1="${x0 + MARGIN.left}" y1="${py}" x2="${x0 + MARGIN.left + plotW}" y2="${py}" stroke="#ddd"/>`,
      `<text x="${x0 + MARGIN.left - 8}" y="${py + 4}" text-anchor="end" font-size="11">${fmt(t)}</text>`,
    );
  }
  parts.push(
    `<text x="${x0 + MARGIN.left + plotW / 2}" y="${height - 8}" text-anchor="middle" font-size="12">network size n</text>`,
    `<text transform="translate(${x0 + 16},${MARGIN.top + plotH / 2}) rotate(-90)" text-anchor="middle" font-size="12">average version age</text>`,
  );

  // legend
  let legendY = MARGIN.top + 8;
  for (const s of series) {
    const color = colorOf(s);
    const lx = x0 + MARGIN.left + 12;
    parts.push(
      `<line x1="${lx}" y1="${legendY}" x2="${lx + 22}" y2="${legendY}" stroke="${color}" stroke-width="2"${s.line.length === 0 ? ' stroke-dasharray="1 3"' : ""}/>`,
      `<text x="${lx + 28}" y="${legendY + 4}" font-size="11">${esc(s.label)}</text>`,
    );
    legendY += 16;
  }

  // data
  for (const s of series) {
    const color = colorOf(s);
    const bits: string[] = [];
    if (s.line.length > 0) {
      const d = s.line.map((p, i) => `${i === 0 ? "M" : "L"}${xScale(p.n)},${yScale(p.value)}`).join(" ");
      const dash = s.markers.length === 0 ? ' stroke-dasharray="6 4"' : "";
      bits.push(`<path d="${d}" fill="none" stroke="${color}" stroke-width="2"${dash}/>`);
    }
    for (const p of s.markers) {
      const cx = xScale(p.n);
      const cy = yScale(p.value);
      if (p.stderr !== null && p.stderr > 0 && !logY) {
        bits.push(
          `<line x1="${cx}" y1="${yScale(p.value - p.stderr)}" x2="${cx}" y2="${yScale(p.value + p.stderr)}" stroke="${color}"/>`,
        );
      }
      bits.push(`<circle cx="${cx}" cy="${cy}" r="3.5" fill="${color}" stroke="white"/>`);
    }
    parts.push(`<g data-series="${esc(s.id)}">${bits.join("")}</g>`);
  }
  return parts.join("\n");
}

/** Lay panels side by side, one per distinct Series.panel, shared styling. */
export function chartSvg(series: Series[], opts: ChartOptions): string {
  const panels = [...new Set(series.map((s) => s.panel))];
  const panelW = opts.width ?? 560;
  const height = opts.height ?? 420;
  const width = panelW * panels.length;
  const labels = [...new Set(series.map((s) => s.label))];
  const colorOf = (s: Series) => COLORS[labels.indexOf(s.label) % COLORS.length];
  const body = panels
    .map((panel, i) =>
      panelSvg(
        series.filter((s) => s.panel === panel),
        colorOf,
        panels.length > 1 ? `${opts.title}: ${panel}` : opts.title,
        opts.logY,
        i * panelW,
        panelW,
        height,
      ),
    )
    .join("\n");
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `font-family="Helvetica, Arial, sans-serif">\n<rect width="${width}" height="${height}" fill="white"/>\n${body}\n</svg>\n`
  );
}
