/** CSV parsing with schema validation; errors always name the offending column. */

export class SchemaError extends Error {}

export interface Csv {
    header: string[];
    rows: string[][];
}

export function parseCsv(text: string, source: string): Csv {
    const lines = text.split(/\r?\n/).filter((ln) => ln.trim().length > 0);
    if (lines.length === 0) {
        throw new SchemaError(`${source}: empty CSV`);
    }
    const header = lines[0].split(",");
    const rows: string[][] = [];
    for (let i = 1; i < lines.length; i++) {
        const parts = lines[i].split(",");
        if (parts.length !== header.length) {
            throw new SchemaError(
                `${source}:${i + 1}: expected ${header.length} fields, got ${parts.length}`);
        }
        rows.push(parts);
    }
    return { header, rows };
}

/** Column indices for the required names; throws naming the first missing one. */
export function requireColumns(csv: Csv, required: string[], source: string): Map<string, number> {
    const index = new Map<string, number>();
    for (const name of required) {
        const at = csv.header.indexOf(name);
        if (at < 0) {
            throw new SchemaError(`${source}: missing column '${name}'`);
        }
        index.set(name, at);
    }
    return index;
}

export function numberAt(row: string[], at: number, source: string, line: number): number {
    const v = Number(row[at]);
    if (!Number.isFinite(v)) {
        throw new SchemaError(`${source}:${line}: not a number: '${row[at]}'`);
    }
    return v;
}
