/** Archive heatmaps: fitness archives and reproducibility archives rendered
 * as a colored grid with empty cells visually distinct, plus a colorbar. */

import * as fs from "fs";
import * as path from "path";

import { viridis } from "./color";
import { Csv, SchemaError, numberAt, parseCsv, requireColumns } from "./csv";
import { Svg, fmt, tickLabel, ticks } from "./svg";

export interface HeatmapOptions {
    rows: number;
    cols: number;
    configHash?: string | null;
}

interface CellValue {
    row: number;
    col: number;
    value: number;
}

function readCells(csv: Csv, valueColumn: string, source: string, opts: HeatmapOptions): CellValue[] {
    const cols = requireColumns(csv, ["cell_row", "cell_col", valueColumn], source);
    const out: CellValue[] = [];
    const seen = new Set<string>();
    for (let i = 0; i < csv.rows.length; i++) {
        const row = csv.rows[i];
        const r = numberAt(row, cols.get("cell_row")!, source, i + 2);
        const c = numberAt(row, cols.get("cell_col")!, source, i + 2);
        if (!Number.isInteger(r) || !Number.isInteger(c) ||
            r < 0 || r >= opts.rows || c < 0 || c >= opts.cols) {
            throw new SchemaError(
                `${source}:${i + 2}: cell (${r}, ${c}) outside the ${opts.rows}x${opts.cols} grid`);
        }
        const key = `${r},${c}`;
        if (seen.has(key)) {
            throw new SchemaError(`${source}:${i + 2}: duplicate cell (${r}, ${c})`);
        }
        seen.add(key);
        out.push({ row: r, col: c, value: numberAt(row, cols.get(valueColumn)!, source, i + 2) });
    }
    return out;
}

function drawHeatmap(title: string, subtitle: string, valueLabel: string,
                     cells: CellValue[], opts: HeatmapOptions): string {
    const size = 480;
    const margin = { left: 56, right: 86, top: 48, bottom: 40 };
    const W = size + margin.left + margin.right;
    const H = size + margin.top + margin.bottom;
    const svg = new Svg(W, H);
    svg.rect(0, 0, W, H, 'fill="white"');

    let lo = Infinity, hi = -Infinity;
    for (const c of cells) {
        lo = Math.min(lo, c.value);
        hi = Math.max(hi, c.value);
    }
    if (cells.length === 0) {
        lo = 0;
        hi = 1;
    } else if (lo === hi) {
        lo -= 0.5;
        hi += 0.5;
    }

    // empty cells: flat light gray, distinct from every colormap value
    svg.rect(margin.left, margin.top, size, size,
        'fill="#e8e8e8" stroke="#999" stroke-width="1" class="empty-cells"');

    const cw = size / opts.cols;
    const ch = size / opts.rows;
    svg.raw(`<g class="cells" data-cells="${cells.length}">`);
    for (const c of cells) {
        const t = (c.value - lo) / (hi - lo);
        const x = margin.left + c.col * cw;
        const y = margin.top + size - (c.row + 1) * ch; // row 0 at the bottom
        svg.rect(x, y, cw + 0.25, ch + 0.25, `fill="${viridis(t)}" class="cell"`);
    }
    svg.raw("</g>");

    // colorbar
    const cbX = margin.left + size + 22;
    const cbW = 16;
    const steps = 64;
    svg.raw('<g class="colorbar">');
    for (let i = 0; i < steps; i++) {
        const y = margin.top + size - ((i + 1) / steps) * size;
        svg.rect(cbX, y, cbW, size / steps + 0.5, `fill="${viridis((i + 0.5) / steps)}"`);
    }
    svg.rect(cbX, margin.top, cbW, size, 'fill="none" stroke="#999" stroke-width="1"');
    for (const t of ticks(lo, hi, 5)) {
        const y = margin.top + size - ((t - lo) / (hi - lo)) * size;
        svg.line(cbX + cbW, y, cbX + cbW + 4, y, 'stroke="#333" stroke-width="1"');
        svg.text(cbX + cbW + 7, y + 4, tickLabel(t), 'font-size="10" fill="#333"');
    }
    svg.raw("</g>");

    svg.text(margin.left, 20, title, 'font-size="14" font-weight="bold" fill="#111"');
    if (subtitle) {
        svg.text(margin.left, 36, subtitle, 'font-size="11" fill="#666"');
    }
    svg.text(margin.left + size / 2, H - 12, "descriptor x",
        'font-size="12" text-anchor="middle" fill="#333"');
    svg.text(16, margin.top + size / 2, "descriptor y",
        `font-size="12" text-anchor="middle" fill="#333" transform="rotate(-90 16 ${fmt(margin.top + size / 2)})"`);
    svg.text(cbX + cbW / 2, margin.top - 8, valueLabel,
        'font-size="11" text-anchor="middle" fill="#333"');
    return svg.toString();
}

/** Plot one archive CSV (fitness or reproducibility, detected from the header). */
export function plotHeatmapFile(csvPath: string, outPath: string, opts: HeatmapOptions): void {
    const csv = parseCsv(fs.readFileSync(csvPath, "utf8"), csvPath);
    const isRepro = csv.header.includes("reproducibility");
    const valueColumn = isRepro ? "reproducibility" : "fitness";
    if (!isRepro) {
        requireColumns(csv, ["cell_row", "cell_col", "fitness", "desc_x", "desc_y", "n_samples"],
            csvPath);
    }
    const cells = readCells(csv, valueColumn, csvPath, opts);
    const subtitle = opts.configHash ? `config ${opts.configHash.slice(0, 12)}` : "";
    const title = path.basename(csvPath, ".csv");
    fs.mkdirSync(path.dirname(outPath), { recursive: true });
    fs.writeFileSync(outPath, drawHeatmap(title, subtitle, valueColumn, cells, opts));
}

/** Walk a harness output tree and plot every archive CSV, mirroring layout. */
export function plotHeatmapTree(inDir: string, outDir: string, opts: HeatmapOptions): string[] {
    const files: string[] = [];
    const walk = (dir: string) => {
        for (const entry of fs.readdirSync(dir, { withFileTypes: true }).sort(
            (a, b) => a.name.localeCompare(b.name))) {
            const p = path.join(dir, entry.name);
            if (entry.isDirectory()) {
                walk(p);
            } else if (/^archive_.*\.csv$/.test(entry.name)) {
                files.push(p);
            }
        }
    };
    walk(inDir);
    if (files.length === 0) {
        throw new SchemaError(`${inDir}: no archive_*.csv files found`);
    }
    const out: string[] = [];
    for (const f of files) {
        const rel = path.relative(inDir, f).replace(/\.csv$/, ".svg");
        const target = path.join(outDir, rel);
        plotHeatmapFile(f, target, opts);
        out.push(target);
    }
    return out;
}
