import { readFileSync } from "node:fs";
import Papa from "papaparse";

export interface Row {
  topology: string;
  protocol: string;
  scale: number;
  n: number;
  target: string;
  method: string;
  value: number; // Infinity when the CSV holds the token "inf"
  stderr: number | null;
}

const REQUIRED_COLUMNS = [
  "topology",
  "protocol",
  "scale",
  "n",
  "target",
  "method",
  "value",
  "stderr",
];

function num(raw: string, column: string, line: number): number {
  if (raw === "inf") return Infinity;
  const v = Number(raw);
  if (!Number.isFinite(v)) {
    throw new Error(`row ${line}: cannot parse ${column} value ${JSON.stringify(raw)}`);
  }
  return v;
}

export function parseRecords(csvText: string): Row[] {
  const parsed = Papa.parse<Record<string, string>>(csvText.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const e = parsed.errors[0];
    throw new Error(`CSV parse error at row ${e.row}: ${e.message}`);
  }
  const columns = parsed.meta.fields ?? [];
  for (const col of REQUIRED_COLUMNS) {
    if (!columns.includes(col)) throw new Error(`CSV is missing column ${JSON.stringify(col)}`);
  }
  return parsed.data.map((raw, i) => ({
    topology: raw.topology,
    protocol: raw.protocol,
    scale: num(raw.scale, "scale", i + 2),
    n: Math.trunc(num(raw.n, "n", i + 2)),
    target: raw.target,
    method: raw.method,
    value: num(raw.value, "value", i + 2),
    stderr: raw.stderr === "" ? null : num(raw.stderr, "stderr", i + 2),
  }));
}

export function readRecords(path: string): Row[] {
  return parseRecords(readFileSync(path, "utf8"));
}
