/** Minimal SVG string builders; no drawing library, just elements. */

export function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

const fmt = (v: number): string => (Number.isInteger(v) ? String(v) : v.toFixed(2));

export function rect(
  x: number,
  y: number,
  w: number,
  h: number,
  fill: string,
  extra = "",
): string {
  return `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" height="${fmt(h)}" fill="${fill}"${extra}/>`;
}

export function line(x1: number, y1: number, x2: number, y2: number, stroke: string, width = 1): string {
  return `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" stroke="${stroke}" stroke-width="${width}"/>`;
}

export function circle(cx: number, cy: number, r: number, fill: string, opacity = 1): string {
  const op = opacity < 1 ? ` fill-opacity="${opacity}"` : "";
  return `<circle cx="${fmt(cx)}" cy="${fmt(cy)}" r="${r}" fill="${fill}"${op}/>`;
}

export function polyline(points: Array<[number, number]>, stroke: string, width = 1.5): string {
  const path = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
  return `<polyline points="${path}" fill="none" stroke="${stroke}" stroke-width="${width}"/>`;
}

export function text(
  x: number,
  y: number,
  content: string,
  size = 11,
  anchor: "start" | "middle" | "end" = "start",
  extra = "",
): string {
  return (
    `<text x="${fmt(x)}" y="${fmt(y)}" font-size="${size}" font-family="sans-serif" ` +
    `text-anchor="${anchor}"${extra}>${esc(content)}</text>`
  );
}

export function document(width: number, height: number, body: string[]): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}">\n` +
    `<rect width="${width}" height="${height}" fill="white"/>\n` +
    body.join("\n") +
    "\n</svg>\n"
  );
}

/** Rounded tick positions: steps of 1/2/5 x 10^k covering [0, max]. */
export function niceTicks(max: number, target = 5): number[] {
  if (!(max > 0)) return [0];
  const rawStep = max / target;
  const power = Math.floor(Math.log10(rawStep));
  const base = 10 ** power;
  let step = 10 * base;
  for (const mult of [1, 2, 5]) {
    if (mult * base >= rawStep) {
      step = mult * base;
      break;
    }
  }
  const ticks: number[] = [];
  for (let v = 0; v <= max * (1 + 1e-9); v += step) {
    ticks.push(Number(v.toPrecision(12)));
  }
  return ticks;
}

export interface Scale {
  (value: number): number;
}

export function linearScale(domainMax: number, rangeStart: number, rangeEnd: number): Scale {
  const span = rangeEnd - rangeStart;
  return (v: number) => rangeStart + (domainMax === 0 ? 0 : (v / domainMax) * span);
}
