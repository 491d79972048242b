// ---------------------------------------------------------------------------
// Figure kinds over the simulator's CSV outputs:
//
//   strata     — log-scale mode energies E_l vs time from a trace CSV
//   resonance  — same renderer, conventionally fed a windowed-max trace
//   order      — expansion error vs time, one panel per mode (0, 1, 2) with
//                one line per eps series, log-log axes
// ---------------------------------------------------------------------------

import { readFileSync } from "fs";
import { PALETTE, PanelOpts, Series, chart } from "./chart.js";
import { CsvError, Table, column, parseCsv, requireRows } from "./csv.js";
import { parseIni } from "./ini.js";

export type FigureKind = "strata" | "resonance" | "order";

export interface FigureSpec {
  input: string;
  kind: FigureKind;
  modes: number[]; // for strata/resonance; empty means all E columns
  out: string;
  title: string;
}

export class SpecError extends Error {}

export function specFromIni(text: string): FigureSpec {
  const kv = parseIni(text);
  const kind = kv["kind"];
  if (kind !== "strata" && kind !== "resonance" && kind !== "order") {
    throw new SpecError(`kind must be strata, resonance or order, got '${kind}'`);
  }
  if (!kv["input"]) throw new SpecError("missing 'input' path");
  if (!kv["out"]) throw new SpecError("missing 'out' path");
  const modes = (kv["modes"] ?? "")
    .split(",")
    .map((m) => m.trim())
    .filter((m) => m.length > 0)
    .map((m) => {
      const v = Number(m);
      if (!Number.isInteger(v) || v < 0) throw new SpecError(`bad mode '${m}'`);
      return v;
    });
  return {
    input: kv["input"],
    kind,
    modes,
    out: kv["out"],
    title: kv["title"] ?? defaultTitle(kind),
  };
}

function defaultTitle(kind: FigureKind): string {
  if (kind === "order") return "Expansion error vs time";
  if (kind === "resonance") return "Mode energies (resonant step-size)";
  return "Mode energies";
}

function energyPanel(table: Table, spec: FigureSpec): PanelOpts {
  requireRows(table);
  const t = column(table, "t");
  let modes = spec.modes;
  if (modes.length === 0) {
    modes = table.columns
      .filter((c) => /^E\d+$/.test(c))
      .map((c) => Number(c.slice(1)));
  }
  const series: Series[] = modes.map((mode, i) => ({
    label: `E${mode}`,
    x: t,
    y: column(table, `E${mode}`),
    color: PALETTE[i % PALETTE.length],
  }));
  return {
    title: spec.title,
    xLabel: "t",
    yLabel: "mode energy",
    logX: false,
    series,
  };
}

function orderPanels(table: Table, spec: FigureSpec): PanelOpts[] {
  requireRows(table);
  const t = column(table, "t");
  const byMode: Map<number, { label: string; name: string }[]> = new Map();
  for (const name of table.columns) {
    const m = /^err(\d+)_(.+)$/.exec(name);
    if (!m) continue;
    const mode = Number(m[1]);
    const list = byMode.get(mode) ?? [];
    list.push({ label: `eps ${m[2]}`, name });
    byMode.set(mode, list);
  }
  if (byMode.size === 0) {
    throw new CsvError(
      `no 'err<j>_<eps>' columns found; available columns: ${table.columns.join(", ")}`,
    );
  }
  const modes = [...byMode.keys()].sort((a, b) => a - b);
  return modes.map((mode) => ({
    title: `${spec.title} (j = ${mode})`,
    xLabel: "t",
    yLabel: "error",
    logX: true,
    series: byMode.get(mode)!.map((entry, i) => ({
      label: entry.label,
      x: t,
      y: column(table, entry.name),
      color: PALETTE[i % PALETTE.length],
    })),
  }));
}

/** Pure function of the CSV bytes and the spec: returns the SVG document. */
export function renderToString(csvText: string, spec: FigureSpec): string {
  const table = parseCsv(csvText);
  if (spec.kind === "order") {
    return chart(orderPanels(table, spec), 960, 300, false);
  }
  return chart([energyPanel(table, spec)], 720, 320, true);
}

export function render(spec: FigureSpec): string {
  return renderToString(readFileSync(spec.input, "utf-8"), spec);
}
