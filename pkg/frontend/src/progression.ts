/** Progression figures: per (task, metric family) one SVG with a median curve
 * per algorithm, quartile band, illusory dashed and corrected solid. */

import * as fs from "fs";
import * as path from "path";

import { curveColor } from "./color";
import { SchemaError } from "./csv";
import { MetricName, MetricsRow, Series, algosIn, progressionSeries, readMetrics, tasksIn } from "./metrics";
import { readConfigHash } from "./manifest";
import { Svg, fmt, tickLabel, ticks } from "./svg";

interface FamilyLine {
    metric: MetricName;
    kind: "illusory" | "corrected" | "plain";
}

const FAMILIES: Record<string, FamilyLine[]> = {
    qd_score: [
        { metric: "illusory_qd_score", kind: "illusory" },
        { metric: "corrected_qd_score", kind: "corrected" },
    ],
    coverage: [
        { metric: "illusory_coverage", kind: "illusory" },
        { metric: "corrected_coverage", kind: "corrected" },
    ],
    loss_qd_score: [{ metric: "loss_qd_score", kind: "plain" }],
    loss_coverage: [{ metric: "loss_coverage", kind: "plain" }],
    reproducibility_score: [{ metric: "reproducibility_score", kind: "plain" }],
};

const W = 640;
const H = 420;
const MARGIN = { left: 78, right: 20, top: 44, bottom: 52 };

interface Curve {
    algo: string;
    kind: FamilyLine["kind"];
    series: Series;
    color: string;
}

function drawFigure(title: string, subtitle: string, curves: Curve[]): string {
    const svg = new Svg(W, H);
    svg.rect(0, 0, W, H, 'fill="white"');

    let xMin = Infinity, xMax = -Infinity, yMin = Infinity, yMax = -Infinity;
    for (const c of curves) {
        for (const e of c.series.evaluations) {
            xMin = Math.min(xMin, e);
            xMax = Math.max(xMax, e);
        }
        for (const v of [...c.series.q25, ...c.series.q75]) {
            yMin = Math.min(yMin, v);
            yMax = Math.max(yMax, v);
        }
    }
    if (!Number.isFinite(xMin)) {
        throw new SchemaError(`no data points for figure '${title}'`);
    }
    if (xMax === xMin) {
        xMax = xMin + 1;
    }
    if (yMax === yMin) {
        yMax = yMin + (Math.abs(yMin) || 1) * 0.1;
        yMin = yMin - (Math.abs(yMin) || 1) * 0.1;
    }
    const pad = (yMax - yMin) * 0.05;
    yMin -= pad;
    yMax += pad;

    const plotW = W - MARGIN.left - MARGIN.right;
    const plotH = H - MARGIN.top - MARGIN.bottom;
    const px = (e: number) => MARGIN.left + ((e - xMin) / (xMax - xMin)) * plotW;
    const py = (v: number) => MARGIN.top + (1 - (v - yMin) / (yMax - yMin)) * plotH;

    for (const t of ticks(xMin, xMax)) {
        svg.line(px(t), MARGIN.top, px(t), MARGIN.top + plotH, 'stroke="#eee" stroke-width="1"');
        svg.text(px(t), H - MARGIN.bottom + 18, tickLabel(t),
            'font-size="11" text-anchor="middle" fill="#333"');
    }
    for (const t of ticks(yMin, yMax)) {
        svg.line(MARGIN.left, py(t), MARGIN.left + plotW, py(t), 'stroke="#eee" stroke-width="1"');
        svg.text(MARGIN.left - 6, py(t) + 4, tickLabel(t),
            'font-size="11" text-anchor="end" fill="#333"');
    }
    svg.rect(MARGIN.left, MARGIN.top, plotW, plotH, 'fill="none" stroke="#999" stroke-width="1"');

    for (const c of curves) {
        const pts = c.series.evaluations.map(
            (e, i) => [px(e), py(c.series.median[i])] as [number, number]);
        const band = [
            ...c.series.evaluations.map((e, i) => [px(e), py(c.series.q25[i])] as [number, number]),
            ...c.series.evaluations.map((e, i) => [px(e), py(c.series.q75[i])] as [number, number]).reverse(),
        ];
        if (c.series.evaluations.length > 1) {
            svg.polygon(band, `fill="${c.color}" fill-opacity="0.15" stroke="none" class="band"`);
        }
        const dash = c.kind === "illusory" ? ' stroke-dasharray="6 4"' : "";
        svg.path(pts, `fill="none" stroke="${c.color}" stroke-width="2"${dash} ` +
            `class="curve" data-algo="${c.algo}" data-kind="${c.kind}"`);
        if (pts.length === 1) {
            svg.circle(pts[0][0], pts[0][1], 3.5, `fill="${c.color}" class="curve-point"`);
        }
    }

    svg.text(MARGIN.left, 20, title, 'font-size="14" font-weight="bold" fill="#111"');
    if (subtitle) {
        svg.text(MARGIN.left, 36, subtitle, 'font-size="11" fill="#666"');
    }
    svg.text(MARGIN.left + plotW / 2, H - 14, "evaluations",
        'font-size="12" text-anchor="middle" fill="#333"');

    let ly = MARGIN.top + 12;
    for (const c of curves) {
        const x0 = MARGIN.left + plotW - 170;
        const dash = c.kind === "illusory" ? ' stroke-dasharray="6 4"' : "";
        svg.line(x0, ly - 4, x0 + 26, ly - 4, `stroke="${c.color}" stroke-width="2"${dash}`);
        const label = c.kind === "plain" ? c.algo : `${c.algo} (${c.kind})`;
        svg.text(x0 + 32, ly, label, 'font-size="11" fill="#333"');
        ly += 16;
    }
    return svg.toString();
}

export interface ProgressionOutput {
    files: string[];
}

export function plotProgression(runDir: string, outDir: string): ProgressionOutput {
    const metricsPath = path.join(runDir, "metrics.csv");
    if (!fs.existsSync(metricsPath)) {
        throw new SchemaError(`${metricsPath}: not found`);
    }
    const rows: MetricsRow[] = readMetrics(fs.readFileSync(metricsPath, "utf8"), metricsPath);
    const hash = readConfigHash(runDir);
    const subtitle = hash ? `config ${hash.slice(0, 12)}` : "";

    const files: string[] = [];
    for (const task of tasksIn(rows)) {
        const algos = algosIn(rows.filter((r) => r.task === task));
        for (const [family, lines] of Object.entries(FAMILIES)) {
            const curves: Curve[] = [];
            for (let a = 0; a < algos.length; a++) {
                for (const line of lines) {
                    const series = progressionSeries(rows, task, algos[a], line.metric);
                    if (series.evaluations.length === 0) continue;
                    curves.push({ algo: algos[a], kind: line.kind, series, color: curveColor(a) });
                }
            }
            if (curves.length === 0) continue;
            const dir = path.join(outDir, task);
            fs.mkdirSync(dir, { recursive: true });
            const file = path.join(dir, `progression_${family}.svg`);
            fs.writeFileSync(file, drawFigure(`${task}: ${family}`, subtitle, curves));
            files.push(file);
        }
    }
    if (files.length === 0) {
        throw new SchemaError(`${metricsPath}: no plottable series`);
    }
    return { files };
}
