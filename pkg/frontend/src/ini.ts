// Flat "key = value" configuration text: one assignment per line, '#' starts
// a comment, blank lines ignored. Matches the simulator's config format.

export function parseIni(text: string): Record<string, string> {
  const out: Record<string, string> = {};
  text.split("\n").forEach((raw, i) => {
    const line = raw.split("#", 1)[0].trim();
    if (!line) return;
    const eq = line.indexOf("=");
    if (eq < 0) {
      throw new Error(`line ${i + 1}: expected 'key = value', got '${raw}'`);
    }
    out[line.slice(0, eq).trim()] = line.slice(eq + 1).trim();
  });
  return out;
}
