import assert from "node:assert/strict";
import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";
import { test } from "node:test";

import { SchemaError } from "../src/csv";
import { plotHeatmapFile } from "../src/heatmap";
import { METRIC_NAMES } from "../src/metrics";
import { plotProgression } from "../src/progression";

const HEADER = "task,algo,replication,evaluations," + METRIC_NAMES.join(",");

function tmpdir(): string {
    return fs.mkdtempSync(path.join(os.tmpdir(), "uqdplot-"));
}

function writeRun(dir: string, lines: string[]): void {
    fs.mkdirSync(dir, { recursive: true });
    fs.writeFileSync(path.join(dir, "metrics.csv"), HEADER + "\n" + lines.join("\n") + "\n");
    fs.writeFileSync(path.join(dir, "manifest.json"),
        JSON.stringify({ config_hash: "abcdef0123456789" }));
}

function countMatches(text: string, re: RegExp): number {
    return (text.match(re) ?? []).length;
}

test("progression emits one figure per task and metric family", () => {
    const run = tmpdir();
    const rows: string[] = [];
    for (const algo of ["me", "me-sampling"]) {
        for (let rep = 0; rep < 3; rep++) {
            rows.push(`ta,${algo},${rep},100,${rep + 1},,0.1,,,,`);
            rows.push(`ta,${algo},${rep},200,${rep + 2},${rep + 1.5},0.2,0.15,10,5,${rep}`);
        }
    }
    writeRun(run, rows);
    const out = tmpdir();
    const result = plotProgression(run, out);
    const names = result.files.map((f) => path.basename(f)).sort();
    assert.deepEqual(names, [
        "progression_coverage.svg",
        "progression_loss_coverage.svg",
        "progression_loss_qd_score.svg",
        "progression_qd_score.svg",
        "progression_reproducibility_score.svg",
    ]);
    const qd = fs.readFileSync(path.join(out, "ta", "progression_qd_score.svg"), "utf8");
    // 2 algos x (illusory + corrected) = 4 curves, illusory dashed
    assert.equal(countMatches(qd, /class="curve"/g), 4);
    assert.equal(countMatches(qd, /stroke-dasharray/g), 4); // 2 curves + 2 legend swatches
    assert.equal(countMatches(qd, /data-kind="corrected"/g), 2);
    assert.ok(qd.includes("config abcdef012345"));
    const loss = fs.readFileSync(path.join(out, "ta", "progression_loss_qd_score.svg"), "utf8");
    assert.equal(countMatches(loss, /class="curve"/g), 2);
});

test("progression errors on an empty metrics file and writes nothing", () => {
    const run = tmpdir();
    fs.mkdirSync(run, { recursive: true });
    fs.writeFileSync(path.join(run, "metrics.csv"), HEADER + "\n");
    const out = path.join(tmpdir(), "plots");
    assert.throws(() => plotProgression(run, out), SchemaError);
    assert.ok(!fs.existsSync(out));
});

test("progression renders constant metrics as flat lines", () => {
    const run = tmpdir();
    writeRun(run, [0, 1].map((rep) => `tb,me,${rep},100,7,,0.5,,,,`));
    const out = tmpdir();
    plotProgression(run, out);
    const svg = fs.readFileSync(path.join(out, "tb", "progression_qd_score.svg"), "utf8");
    assert.ok(svg.includes('data-kind="illusory"'));
});

function archiveCsv(cells: Array<[number, number, number]>): string {
    const lines = ["cell_row,cell_col,fitness,desc_x,desc_y,n_samples,genotype_0"];
    for (const [r, c, f] of cells) {
        lines.push(`${r},${c},${f},${(c + 0.5) / 10},${(r + 0.5) / 10},1,0.0`);
    }
    return lines.join("\n") + "\n";
}

test("heatmap renders one rect per occupied cell plus a colorbar", () => {
    const dir = tmpdir();
    const csv = path.join(dir, "archive_illusory.csv");
    fs.writeFileSync(csv, archiveCsv([[0, 0, -1], [5, 5, -2], [9, 9, 0]]));
    const out = path.join(dir, "fig.svg");
    plotHeatmapFile(csv, out, { rows: 10, cols: 10 });
    const svg = fs.readFileSync(out, "utf8");
    assert.equal(countMatches(svg, /class="cell"/g), 3);
    assert.ok(svg.includes('data-cells="3"'));
    assert.ok(svg.includes('class="colorbar"'));
    assert.ok(svg.includes('class="empty-cells"'));
});

test("heatmap of an empty archive renders the empty grid, not an error", () => {
    const dir = tmpdir();
    const csv = path.join(dir, "archive_illusory.csv");
    fs.writeFileSync(csv, "cell_row,cell_col,fitness,desc_x,desc_y,n_samples\n");
    const out = path.join(dir, "fig.svg");
    plotHeatmapFile(csv, out, { rows: 10, cols: 10 });
    assert.equal(countMatches(fs.readFileSync(out, "utf8"), /class="cell"/g), 0);
});

test("heatmap renders uniform reproducibility values", () => {
    const dir = tmpdir();
    const csv = path.join(dir, "archive_repro.csv");
    fs.writeFileSync(csv, "cell_row,cell_col,reproducibility\n0,0,1\n3,4,1\n");
    const out = path.join(dir, "fig.svg");
    plotHeatmapFile(csv, out, { rows: 10, cols: 10 });
    assert.equal(countMatches(fs.readFileSync(out, "utf8"), /class="cell"/g), 2);
});

test("heatmap rejects cells outside the grid, naming the cell", () => {
    const dir = tmpdir();
    const csv = path.join(dir, "archive_illusory.csv");
    fs.writeFileSync(csv, archiveCsv([[12, 0, -1]]));
    assert.throws(() => plotHeatmapFile(csv, path.join(dir, "fig.svg"), { rows: 10, cols: 10 }),
        (e: Error) => e instanceof SchemaError && e.message.includes("(12, 0)"));
});

test("heatmap rejects a fitness archive missing its schema columns", () => {
    const dir = tmpdir();
    const csv = path.join(dir, "archive_illusory.csv");
    fs.writeFileSync(csv, "cell_row,cell_col,fitness\n0,0,-1\n");
    assert.throws(() => plotHeatmapFile(csv, path.join(dir, "fig.svg"), { rows: 10, cols: 10 }),
        (e: Error) => e instanceof SchemaError && e.message.includes("'desc_x'"));
});
