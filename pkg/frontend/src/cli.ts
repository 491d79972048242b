// Usage: node dist/cli.js render --spec <figure.ini>
// Exit codes: 0 success, 2 validation error (bad spec, bad CSV, missing columns).

import { readFileSync, writeFileSync } from "fs";
import { render, specFromIni } from "./render.js";

function main(argv: string[]): number {
  const [command, ...rest] = argv;
  if (command !== "render") {
    console.error("usage: render --spec <path>");
    return 2;
  }
  const specIdx = rest.indexOf("--spec");
  if (specIdx < 0 || specIdx + 1 >= rest.length) {
    console.error("missing --spec <path>");
    return 2;
  }
  try {
    const spec = specFromIni(readFileSync(rest[specIdx + 1], "utf-8"));
    const svg = render(spec);
    writeFileSync(spec.out, svg);
    console.log(`wrote ${spec.out}`);
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : err}`);
    return 2;
  }
  return 0;
}

process.exit(main(process.argv.slice(2)));
