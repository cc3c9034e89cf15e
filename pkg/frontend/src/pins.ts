/**
 * Virtual 4x4 pin arrays: grid state derivation and canvas rendering.
 * Raised pins draw as filled high-contrast circles, lowered pins as outlines;
 * the visual stand-in for a tactile display is an explicit simulation
 * compromise.
 */

import type { DirectionName, TactileMessage } from "./protocol.js";
import { isRaisedPhase } from "./blink.js";

export type PinGrid = boolean[][]; // 4 rows of 4 cells, row 0 on top

export type GlyphTable = Record<DirectionName, PinGrid>;

export function blankGrid(): PinGrid {
  return Array.from({ length: 4 }, () => [false, false, false, false]);
}

export function fullGrid(): PinGrid {
  return Array.from({ length: 4 }, () => [true, true, true, true]);
}

/** Convert the served glyph asset ({"N": [[0|1 x4] x4], ...}) to grids. */
export function parseGlyphAsset(data: unknown): GlyphTable {
  if (typeof data !== "object" || data === null) {
    throw new Error("glyph asset must be an object");
  }
  const table = {} as GlyphTable;
  const names: DirectionName[] = ["N", "NE", "E", "SE", "S", "SW", "W", "NW"];
  for (const name of names) {
    const rows = (data as Record<string, unknown>)[name];
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
export function indexArrayGrid(
  tactile: TactileMessage,
  glyphs: GlyphTable,
  localTimeMs: number,
): PinGrid {
  return isRaisedPhase(tactile.blink, localTimeMs) ? glyphs[tactile.direction] : blankGrid();
}

/** Middle-finger array: binary on-shape indicator, no blinking. */
export function middleArrayGrid(onShape: boolean): PinGrid {
  return onShape ? fullGrid() : blankGrid();
}

export function drawPinArray(
  ctx: CanvasRenderingContext2D,
  grid: PinGrid,
  size: number,
): void {
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
      } else {
        ctx.strokeStyle = "#3a4254";
        ctx.lineWidth = 2;
        ctx.stroke();
      }
    }
  }
}
