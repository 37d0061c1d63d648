import { writeFileSync } from "node:fs";
import { buildSeries, type FigureKind } from "./figures.js";
import { readRecords } from "./records.js";
import { chartSvg } from "./svg.js";

export interface RenderOptions {
  csv: string;
  kind: FigureKind;
  out: string;
  format: "png" | "svg";
  logY: boolean;
}

const TITLES: Record<FigureKind, string> = {
  star: "Star network protocol comparison",
  "ring-fc": "Ring and complete networks, half-rate push-pull",
};

export function renderSvg(csvPath: string, kind: FigureKind, logY: boolean): string {
  const series = buildSeries(kind, readRecords(csvPath));
  return chartSvg(series, { title: TITLES[kind], logY });
}

export async function render(opts: RenderOptions): Promise<void> {
  const svg = renderSvg(opts.csv, opts.kind, opts.logY);
  if (opts.format === "svg") {
    writeFileSync(opts.out, svg);
    return;
  }
  const { Resvg } = await import("@resvg/resvg-js");
  writeFileSync(opts.out, new Resvg(svg).render().asPng());
}
