import type { Row } from "./records.js";

export type FigureKind = "star" | "ring-fc";

export interface Point {
  n: number;
  value: number;
  stderr: number | null;
}

/**
 * One plotted series. A series may carry a line (solver or reference values),
 * markers (simulation estimates), or both; the star figure draws solver lines
 * with simulated markers on top as a single logical series.
 */
export interface Series {
  id: string; // "<topology>/<protocol>/<methods>"
  label: string;
  topology: string;
  protocol: string;
  panel: string;
  line: Point[];
  markers: Point[];
}

export class MissingSeriesError extends Error {
  constructor(public missing: string[]) {
    super(`missing series: ${missing.join(", ")}`);
    this.name = "MissingSeriesError";
  }
}

const STAR_VARIANTS = ["star-center-fed", "star-leaf-fed"];
const PROTOCOLS = ["push", "pull", "pushpull"];

function pick(rows: Row[], topology: string, protocol: string | null, method: string): Point[] {
  return rows
    .filter(
      (r) =>
        r.topology === topology &&
        (protocol === null || r.protocol === protocol) &&
        r.method === method &&
        Number.isFinite(r.value),
    )
    .map((r) => ({ n: r.n, value: r.value, stderr: r.stderr }))
    .sort((a, b) => a.n - b.n);
}

/**
 * Star comparison: one panel per variant, one series per protocol (solver
 * line + simulated markers). 2 variants x 3 protocols = 6 series.
 */
export function starSeries(rows: Row[]): Series[] {
  const out: Series[] = [];
  const missing: string[] = [];
  for (const topology of STAR_VARIANTS) {
    for (const protocol of PROTOCOLS) {
      // either solver method is an acceptable line source
      const exact = pick(rows, topology, protocol, "exact");
      const line = exact.length > 0 ? exact : pick(rows, topology, protocol, "reduced");
      const markers = pick(rows, topology, protocol, "simulated");
      if (line.length === 0) missing.push(`(${topology}, ${protocol}, reduced|exact)`);
      if (markers.length === 0) missing.push(`(${topology}, ${protocol}, simulated)`);
      out.push({
        id: `${topology}/${protocol}`,
        label: protocol,
        topology,
        protocol,
        panel: topology,
        line,
        markers,
      });
    }
  }
  if (missing.length > 0) throw new MissingSeriesError(missing);
  return out;
}

/**
 * Ring / complete comparison: single panel, a simulated-marker series per
 * topology plus its reference curve. 2 topologies x 2 methods = 4 series.
 */
export function ringFcSeries(rows: Row[]): Series[] {
  const out: Series[] = [];
  const missing: string[] = [];
  for (const topology of ["ring", "complete"]) {
    const sim = pick(rows, topology, null, "simulated");
    const ref = pick(rows, topology, null, "reference-curve");
    if (sim.length === 0) missing.push(`(${topology}, pushpull, simulated)`);
    if (ref.length === 0) missing.push(`(${topology}, pushpull, reference-curve)`);
    out.push({
      id: `${topology}/simulated`,
      label: `${topology} (sim)`,
      topology,
      protocol: "pushpull",
      panel: "ring-fc",
      line: [],
      markers: sim,
    });
    out.push({
      id: `${topology}/reference-curve`,
      label: `${topology} reference`,
      topology,
      protocol: "pushpull",
      panel: "ring-fc",
      line: ref,
      markers: [],
    });
  }
  if (missing.length > 0) throw new MissingSeriesError(missing);
  return out;
}

export function buildSeries(kind: FigureKind, rows: Row[]): Series[] {
  return kind === "star" ? starSeries(rows) : ringFcSeries(rows);
}
