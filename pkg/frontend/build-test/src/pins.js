/**
 * Virtual 4x4 pin arrays: grid state derivation and canvas rendering.
 * Raised pins draw as filled high-contrast circles, lowered pins as outlines;
 * the visual stand-in for a tactile display is an explicit simulation
 * compromise.
 */
import { isRaisedPhase } from "./blink.js";
export function blankGrid() {
    return Array.from({ length: 4 }, () => [false, false, false, false]);
}
export function fullGrid() {
    return Array.from({ length: 4 }, () => [true, true, true, true]);
}
/** Convert the served glyph asset ({"N": [[0|1 x4] x4], ...}) to grids. */
export function parseGlyphAsset(data) {
    if (typeof data !== "object" || data === null) {
        throw new Error("glyph asset must be an object");
    }
    const table = {};
    const names = ["N", "NE", "E", "SE", "S", "SW", "W", "NW"];
    for (const name of names) {
        const rows = data[name];
        if (!Array.isArray(rows) || rows.length !== 4) {
            throw new Error(`glyph ${name} must have 4 rows`);
        }
        table[name] = rows.map((row) => {
            if (!Array.isArray(row) || row.length !== 4) {
                throw new Error(`glyph ${name} must be 4x4`);
            }
            return row.map((cell) => Boolean(cell));
        });
    }
    return table;
}
/** Index-finger array: the direction glyph during the raised phase, else blank. */
export function indexArrayGrid(tactile, glyphs, localTimeMs) {
    return isRaisedPhase(tactile.blink, localTimeMs) ? glyphs[tactile.direction] : blankGrid();
}
/** Middle-finger array: binary on-shape indicator, no blinking. */
export function middleArrayGrid(onShape) {
    return onShape ? fullGrid() : blankGrid();
}
export function drawPinArray(ctx, grid, size) {
    const cell = size / 4;
    const radius = cell * 0.32;
    ctx.clearRect(0, 0, size, size);
    ctx.fillStyle = "#10131a";
    ctx.fillRect(0, 0, size, size);
    for (let r = 0; r < 4; r++) {
        for (let c = 0; c < 4; c++) {
            const cx = c * cell + cell / 2;
            const cy = r * cell + cell / 2;
            ctx.beginPath();
            ctx.arc(cx, cy, radius, 0, Math.PI * 2);
            if (grid[r][c]) {
                ctx.fillStyle = "#ffd84d";
                ctx.fill();
            }
            else {
                ctx.strokeStyle = "#3a4254";
                ctx.lineWidth = 2;
                ctx.stroke();
            }
        }
    }
}
