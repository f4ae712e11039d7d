/** Minimal SVG assembly: no DOM, no canvas, just strings. */

export function esc(s: string): string {
    return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;")
        .replace(/"/g, "&quot;");
}

export function fmt(x: number): string {
    if (!Number.isFinite(x)) return "0";
    const r = Math.round(x * 100) / 100;
    return Object.is(r, -0) ? "0" : String(r);
}

export class Svg {
    private parts: string[] = [];

    constructor(readonly width: number, readonly height: number) {}

    raw(s: string): void {
        this.parts.push(s);
    }

    rect(x: number, y: number, w: number, h: number, attrs: string): void {
        this.parts.push(
            `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" height="${fmt(h)}" ${attrs}/>`);
    }

    line(x1: number, y1: number, x2: number, y2: number, attrs: string): void {
        this.parts.push(
            `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" ${attrs}/>`);
    }

    path(points: Array<[number, number]>, attrs: string): void {
        if (points.length === 0) return;
        const d = points.map(([x, y], i) => `${i === 0 ? "M" : "L"}${fmt(x)} ${fmt(y)}`).join(" ");
        this.parts.push(`<path d="${d}" ${attrs}/>`);
    }

    polygon(points: Array<[number, number]>, attrs: string): void {
        const pts = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
        this.parts.push(`<polygon points="${pts}" ${attrs}/>`);
    }

    circle(cx: number, cy: number, r: number, attrs: string): void {
        this.parts.push(`<circle cx="${fmt(cx)}" cy="${fmt(cy)}" r="${fmt(r)}" ${attrs}/>`);
    }

    text(x: number, y: number, content: string, attrs = ""): void {
        this.parts.push(
            `<text x="${fmt(x)}" y="${fmt(y)}" font-family="sans-serif" ${attrs}>${esc(content)}</text>`);
    }

    toString(): string {
        return [
            `<svg xmlns="http://www.w3.org/2000/svg" width="${this.width}" ` +
            `height="${this.height}" viewBox="0 0 ${this.width} ${this.height}">`,
            ...this.parts,
            "</svg>",
        ].join("\n") + "\n";
    }
}

/** Round tick positions covering [min, max]. */
export function ticks(min: number, max: number, count = 5): number[] {
    if (!(max > min)) {
        return [min];
    }
    const span = max - min;
    const step0 = span / Math.max(count - 1, 1);
    const mag = Math.pow(10, Math.floor(Math.log10(step0)));
    const norm = step0 / mag;
    const step = (norm >= 5 ? 5 : norm >= 2 ? 2 : 1) * mag;
    const start = Math.ceil(min / step) * step;
    const out: number[] = [];
    for (let v = start; v <= max + 1e-12 * span; v += step) {
        out.push(Math.abs(v) < step * 1e-9 ? 0 : v);
    }
    return out.length > 0 ? out : [min, max];
}

export function tickLabel(v: number): string {
    if (Math.abs(v) >= 100000) {
        return `${fmt(v / 1000)}k`;
    }
    const r = Math.round(v * 1000) / 1000;
    return Object.is(r, -0) ? "0" : String(r);
}
