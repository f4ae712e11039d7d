/** Optional manifest.json lookup: figures embed the config hash when present. */

import * as fs from "fs";
import * as path from "path";

export function readConfigHash(runDir: string): string | null {
    const p = path.join(runDir, "manifest.json");
    if (!fs.existsSync(p)) {
        return null;
    }
    try {
        const manifest = JSON.parse(fs.readFileSync(p, "utf8"));
        return typeof manifest.config_hash === "string" ? manifest.config_hash : null;
    } catch {
        return null;
    }
}
