/**
 * Client-side blink animation. The server sends a tactile state only when it
 * changes; the on/off alternation is rendered locally as a pure function of
 * (blink level, clock), so two clients with synchronized clocks agree on the
 * phase and no per-frame traffic is needed.
 */

import type { BlinkLevel } from "./protocol.js";

/** Blink periods in milliseconds; each level shows glyph and blank for half. */
export const BLINK_PERIODS_MS: Record<BlinkLevel, number> = {
  1: 1000, // slow: far from the target
  2: 500,
  3: 250, // fast: close
};

export function isRaisedPhase(
  level: BlinkLevel,
  timeMs: number,
  periods: Record<BlinkLevel, number> = BLINK_PERIODS_MS,
): boolean {
  const period = periods[level];
  const phase = ((timeMs % period) + period) % period; // robust to negative clocks
  return phase * 2 < period;
}

/**
 * Guard against a server whose period table drifted from this build: the
 * advertised table from the hello ack must equal the embedded constant.
 */
export function assertPeriodTable(advertised: Record<string, number>): void {
  for (const level of [1, 2, 3] as const) {
    const value = advertised[String(level)];
    if (value !== BLINK_PERIODS_MS[level]) {
      throw new Error(
        `blink period mismatch for level ${level}: server says ${value}, ` +
          `client built with ${BLINK_PERIODS_MS[level]}`,
      );
    }
  }
}
