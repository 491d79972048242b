import { describe, expect, it } from "vitest";
import { parseCsv, column, CsvError } from "../src/csv.js";
import { parseIni } from "../src/ini.js";
import { renderToString, specFromIni, SpecError } from "../src/render.js";

function traceCsv(nModes: number, nRows: number): string {
  const header = ["t", ...Array.from({ length: nModes }, (_, l) => `E${l}`)];
  const lines = [header.join(",")];
  for (let i = 0; i < nRows; i++) {
    const t = i * 0.5;
    const cells = [t.toExponential(16)];
    for (let l = 0; l < nModes; l++) {
      cells.push((1e-3 * Math.pow(1e-3, l) * (1 + 0.1 * Math.sin(t + l))).toExponential(16));
    }
    lines.push(cells.join(","));
  }
  return lines.join("\n") + "\n";
}

function orderCsv(epsList: string[], nRows: number): string {
  const header = ["t"];
  for (const eps of epsList) {
    for (let j = 0; j < 3; j++) header.push(`err${j}_${eps}`);
  }
  const lines = [header.join(",")];
  for (let i = 0; i < nRows; i++) {
    const cells = [(i * 0.05).toExponential(16)];
    for (let c = 1; c < header.length; c++) {
      cells.push((i === 0 ? 0 : 1e-6 * i * c).toExponential(16));
    }
    lines.push(cells.join(","));
  }
  return lines.join("\n") + "\n";
}

describe("ini parsing", () => {
  it("parses flat key = value with comments", () => {
    const kv = parseIni("# c\nkind = strata\ninput = a.csv # x\n\nout = a.svg\n");
    expect(kv).toEqual({ kind: "strata", input: "a.csv", out: "a.svg" });
  });

  it("rejects lines without assignment", () => {
    expect(() => parseIni("nonsense")).toThrow(/expected 'key = value'/);
  });
});

describe("csv parsing", () => {
  it("round-trips a small table", () => {
    const t = parseCsv("t,E0\n0.0,1.0\n1.0,2.0\n");
    expect(t.columns).toEqual(["t", "E0"]);
    expect(column(t, "E0")).toEqual([1, 2]);
  });

  it("missing column error lists available columns", () => {
    const t = parseCsv("t,E0\n0.0,1.0\n");
    expect(() => column(t, "E7")).toThrow(/available columns: t, E0/);
  });

  it("rejects ragged rows", () => {
    expect(() => parseCsv("a,b\n1\n")).toThrow(CsvError);
  });
});

describe("figure specs", () => {
  it("parses a full spec", () => {
    const spec = specFromIni("kind = strata\ninput = x.csv\nout = x.svg\nmodes = 0,1,2\n");
    expect(spec.modes).toEqual([0, 1, 2]);
    expect(spec.kind).toBe("strata");
  });

  it("rejects unknown kinds and missing paths", () => {
    expect(() => specFromIni("kind = pie\ninput = a\nout = b\n")).toThrow(SpecError);
    expect(() => specFromIni("kind = strata\nout = b\n")).toThrow(SpecError);
  });
});

describe("strata rendering", () => {
  const spec = specFromIni(
    "kind = strata\ninput = unused.csv\nout = unused.svg\nmodes = 0,1,2,3\n",
  );

  it("draws one curve per requested mode", () => {
    const svg = renderToString(traceCsv(9, 40), spec);
    expect(svg.length).toBeGreaterThan(1000);
    expect(svg.startsWith("<svg")).toBe(true);
    expect((svg.match(/<polyline/g) ?? []).length).toBe(4);
    expect(svg).toContain(">E3<");
  });

  it("defaults to every energy column", () => {
    const all = specFromIni("kind = strata\ninput = a\nout = b\n");
    const svg = renderToString(traceCsv(5, 10), all);
    expect((svg.match(/<polyline/g) ?? []).length).toBe(5);
  });

  it("re-render is byte-identical", () => {
    const csv = traceCsv(9, 120);
    expect(renderToString(csv, spec)).toBe(renderToString(csv, spec));
  });

  it("fails on a header-only CSV", () => {
    expect(() => renderToString("t,E0,E1\n", spec)).toThrow(/no data rows/);
  });

  it("fails when a requested mode is missing, listing columns", () => {
    expect(() => renderToString(traceCsv(2, 5), spec)).toThrow(/available columns/);
  });

  it("clips exact zeros onto the log floor", () => {
    const csv = "t,E0\n0.0,0.0\n1.0,0.0\n";
    const one = specFromIni("kind = strata\ninput = a\nout = b\nmodes = 0\n");
    const svg = renderToString(csv, one);
    expect((svg.match(/<polyline/g) ?? []).length).toBe(1);
    expect(svg).not.toContain("NaN");
    expect(svg).not.toContain("Infinity");
  });
});

describe("resonance rendering", () => {
  it("uses the same energy renderer with its own title", () => {
    const spec = specFromIni("kind = resonance\ninput = a\nout = b\nmodes = 1,6,7\n");
    const svg = renderToString(traceCsv(9, 30), spec);
    expect((svg.match(/<polyline/g) ?? []).length).toBe(3);
    expect(svg).toContain("resonant step-size");
  });
});

describe("order rendering", () => {
  it("draws three panels with one line per eps", () => {
    const epsList = ["1e-02", "1e-03", "1e-04", "1e-05", "1e-06", "1e-07", "1e-08"];
    const spec = specFromIni("kind = order\ninput = a\nout = b\n");
    const svg = renderToString(orderCsv(epsList, 21), spec);
    expect((svg.match(/<polyline/g) ?? []).length).toBe(21);
    expect(svg).toContain("(j = 0)");
    expect(svg).toContain("(j = 2)");
  });

  it("reports missing error columns", () => {
    const spec = specFromIni("kind = order\ninput = a\nout = b\n");
    expect(() => renderToString("t,E0\n0,1\n", spec)).toThrow(/err<j>_<eps>/);
  });
});
