/** The harness metrics.csv model and median/quartile series over replications. */

import { Csv, SchemaError, numberAt, parseCsv, requireColumns } from "./csv";

export const METRIC_NAMES = [
    "illusory_qd_score",
    "corrected_qd_score",
    "illusory_coverage",
    "corrected_coverage",
    "loss_qd_score",
    "loss_coverage",
    "reproducibility_score",
] as const;

export type MetricName = (typeof METRIC_NAMES)[number];

export interface MetricsRow {
    task: string;
    algo: string;
    replication: number;
    evaluations: number;
    values: Partial<Record<MetricName, number>>;
}

export function readMetrics(text: string, source: string): MetricsRow[] {
    const csv = parseCsv(text, source);
    const fixed = ["task", "algo", "replication", "evaluations"];
    const cols = requireColumns(csv, [...fixed, ...METRIC_NAMES], source);
    if (csv.rows.length === 0) {
        throw new SchemaError(`${source}: no data rows`);
    }
    return csv.rows.map((row, i) => {
        const values: Partial<Record<MetricName, number>> = {};
        for (const name of METRIC_NAMES) {
            const raw = row[cols.get(name)!];
            if (raw !== "") {
                values[name] = numberAt(row, cols.get(name)!, source, i + 2);
            }
        }
        return {
            task: row[cols.get("task")!],
            algo: row[cols.get("algo")!],
            replication: numberAt(row, cols.get("replication")!, source, i + 2),
            evaluations: numberAt(row, cols.get("evaluations")!, source, i + 2),
            values,
        };
    });
}

export function tasksIn(rows: MetricsRow[]): string[] {
    return [...new Set(rows.map((r) => r.task))];
}

export function algosIn(rows: MetricsRow[]): string[] {
    return [...new Set(rows.map((r) => r.algo))];
}

/** Linear-interpolated percentile, matching the harness summary convention. */
export function percentile(sorted: number[], q: number): number {
    if (sorted.length === 0) {
        throw new SchemaError("percentile of empty set");
    }
    const pos = (q / 100) * (sorted.length - 1);
    const lo = Math.floor(pos);
    const hi = Math.ceil(pos);
    if (lo === hi) {
        return sorted[lo];
    }
    return sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo);
}

export interface Series {
    evaluations: number[];
    median: number[];
    q25: number[];
    q75: number[];
}

/** Median and quartiles across replications at each evaluation count. */
export function progressionSeries(
    rows: MetricsRow[], task: string, algo: string, metric: MetricName): Series {
    const byEvals = new Map<number, number[]>();
    for (const row of rows) {
        if (row.task !== task || row.algo !== algo) continue;
        const v = row.values[metric];
        if (v === undefined) continue;
        const bucket = byEvals.get(row.evaluations);
        if (bucket) bucket.push(v);
        else byEvals.set(row.evaluations, [v]);
    }
    const evaluations = [...byEvals.keys()].sort((a, b) => a - b);
    const series: Series = { evaluations, median: [], q25: [], q75: [] };
    for (const e of evaluations) {
        const vals = byEvals.get(e)!.slice().sort((a, b) => a - b);
        series.median.push(percentile(vals, 50));
        series.q25.push(percentile(vals, 25));
        series.q75.push(percentile(vals, 75));
    }
    return series;
}
