import { readFileSync } from "node:fs";
import Papa from "papaparse";

export type Row = Record<string, string>;

/** Parse a CSV file into header-keyed string rows; empty files are an error. */
export function readCsv(path: string): Row[] {
  const text = readFileSync(path, "utf-8").trim();
  if (!text) {
    throw new Error(`${path}: no data rows`);
  }
  const parsed = Papa.parse<Row>(text, {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const first = parsed.errors[0];
    throw new Error(`${path}: CSV parse error: ${first.message} (row ${first.row})`);
  }
  if (!parsed.data.length) {
    throw new Error(`${path}: no data rows`);
  }
  return parsed.data;
}

/** Fail fast when a required column is absent. */
export function requireColumns(rows: Row[], columns: string[], path: string): void {
  const present = new Set(Object.keys(rows[0]));
  const missing = columns.filter((c) => !present.has(c));
  if (missing.length > 0) {
    throw new Error(`${path}: missing required columns: ${missing.join(", ")}`);
  }
}

export function num(row: Row, column: string): number {
  const value = Number(row[column]);
  if (!Number.isFinite(value)) {
    throw new Error(`non-numeric value ${JSON.stringify(row[column])} in column ${column}`);
  }
  return value;
}
