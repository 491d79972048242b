// ---------------------------------------------------------------------------
// CSV reading for simulation traces.
//
// Schema: first line is the header (comma separated column names), every
// following line holds decimal numbers. Quoted string cells (the witness
// column of resonance scans) are tolerated but parse as NaN.
// ---------------------------------------------------------------------------

export interface Table {
  columns: string[];
  rows: number[][];
}

export class CsvError extends Error {}

export function parseCsv(text: string): Table {
  const lines = text.split("\n").filter((line) => line.trim().length > 0);
  if (lines.length === 0) {
    throw new CsvError("empty CSV: no header line");
  }
  const columns = lines[0].split(",").map((c) => c.trim());
  const rows = lines.slice(1).map((line, i) => {
    const cells = line.split(",");
    if (cells.length !== columns.length) {
      throw new CsvError(
        `row ${i + 1} has ${cells.length} cells, header has ${columns.length}`,
      );
    }
    return cells.map((c) => Number(c.replace(/^"|"$/g, "")));
  });
  return { columns, rows };
}

/** Column values by name; throws listing the available columns when absent. */
export function column(table: Table, name: string): number[] {
  const idx = table.columns.indexOf(name);
  if (idx < 0) {
    throw new CsvError(
      `missing column '${name}'; available columns: ${table.columns.join(", ")}`,
    );
  }
  return table.rows.map((r) => r[idx]);
}

export function requireRows(table: Table): void {
  if (table.rows.length === 0) {
    throw new CsvError("CSV has a header but no data rows");
  }
}
