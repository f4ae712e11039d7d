#!/usr/bin/env node
/** uqd-plot: progression curves and archive heatmaps from uqdbench outputs.
 *
 *   uqd-plot progression --in <run-dir> --out <dir>
 *   uqd-plot heatmap --in <run-dir|archive.csv> --out <dir> [--grid RxC]
 */

import * as fs from "fs";
import * as path from "path";

import { SchemaError } from "./csv";
import { plotHeatmapFile, plotHeatmapTree } from "./heatmap";
import { readConfigHash } from "./manifest";
import { plotProgression } from "./progression";

interface Args {
    command: string;
    input: string;
    out: string;
    grid: { rows: number; cols: number };
}

function usage(): never {
    process.stderr.write(
        "usage: uqd-plot progression --in <run-dir> --out <dir>\n" +
        "       uqd-plot heatmap --in <run-dir|archive.csv> --out <dir> [--grid RxC]\n");
    process.exit(2);
}

function parseArgs(argv: string[]): Args {
    if (argv.length === 0) usage();
    const [command, ...rest] = argv;
    if (command !== "progression" && command !== "heatmap") usage();
    let input = "";
    let out = "";
    let grid = { rows: 100, cols: 100 };
    for (let i = 0; i < rest.length; i += 2) {
        const key = rest[i];
        const value = rest[i + 1];
        if (value === undefined) usage();
        if (key === "--in") input = value;
        else if (key === "--out") out = value;
        else if (key === "--grid") {
            const m = /^(\d+)x(\d+)$/i.exec(value);
            if (!m) usage();
            grid = { rows: parseInt(m[1], 10), cols: parseInt(m[2], 10) };
        } else usage();
    }
    if (!input || !out) usage();
    return { command, input, out, grid };
}

export function main(argv: string[]): number {
    let args: Args;
    try {
        args = parseArgs(argv);
    } catch {
        return 2;
    }
    try {
        if (args.command === "progression") {
            const result = plotProgression(args.input, args.out);
            process.stdout.write(`wrote ${result.files.length} figure(s) -> ${args.out}\n`);
        } else {
            const stat = fs.statSync(args.input);
            if (stat.isDirectory()) {
                const hash = readConfigHash(args.input);
                const files = plotHeatmapTree(args.input, args.out,
                    { rows: args.grid.rows, cols: args.grid.cols, configHash: hash });
                process.stdout.write(`wrote ${files.length} figure(s) -> ${args.out}\n`);
            } else {
                const hash = readConfigHash(path.dirname(args.input));
                const target = path.join(
                    args.out, path.basename(args.input).replace(/\.csv$/, ".svg"));
                plotHeatmapFile(args.input, target,
                    { rows: args.grid.rows, cols: args.grid.cols, configHash: hash });
                process.stdout.write(`wrote 1 figure -> ${target}\n`);
            }
        }
        return 0;
    } catch (err) {
        if (err instanceof SchemaError) {
            process.stderr.write(`schema error: ${err.message}\n`);
            return 2;
        }
        process.stderr.write(`error: ${(err as Error).message}\n`);
        return 1;
    }
}

if (require.main === module) {
    process.exit(main(process.argv.slice(2)));
}
