/**
 * Wire protocol shared with the session gateway: one JSON object per line
 * (or per WebSocket text frame), discriminated by a `type` field.
 */

export const PROTOCOL_VERSION = 1;

export type BlinkLevel = 1 | 2 | 3;

export type DirectionName = "N" | "NE" | "E" | "SE" | "S" | "SW" | "W" | "NW";

export const DIRECTION_NAMES: readonly DirectionName[] = [
  "N", "NE", "E", "SE", "S", "SW", "W", "NW",
];

// client -> server

export interface HelloMessage {
  type: "hello";
  v: number;
  mode: "guidance" | "pixels";
  condition: string;
}

export interface CursorMessage {
  type: "cursor";
  x: number;
  y: number;
  t: number;
}

export interface AnswerMessage {
  type: "answer";
  label: string;
  confidence: number;
  t: number;
}

export interface NextTrialMessage {
  type: "next_trial";
}

export type ClientMessage = HelloMessage | CursorMessage | AnswerMessage | NextTrialMessage;

// server -> client

export interface HelloAck {
  type: "hello";
  v: number;
  periods_ms: Record<string, number>;
}

export interface TrialMessage {
  type: "trial";
  index: number;
  count: number;
  time_limit_ms: number;
}

export interface TactileMessage {
  type: "tactile";
  direction: DirectionName;
  blink: BlinkLevel;
  on_shape: boolean;
  t: number;
}

export interface TrialEndMessage {
  type: "trial_end";
  reason: "answered" | "timeout";
  correct: boolean | null;
}

export interface TrialRecordWire {
  shape_id: string;
  mode: string;
  condition: string;
  answer: string | null;
  correct: boolean | null;
  confidence: number | null;
  response_time_ms: number;
  timed_out: boolean;
}

export interface SessionSummaryMessage {
  type: "session_summary";
  trials: TrialRecordWire[];
  stats: Record<string, unknown>;
}

export interface ErrorMessage {
  type: "error";
  message: string;
}

export type ServerMessage =
  | HelloAck
  | TrialMessage
  | TactileMessage
  | TrialEndMessage
  | SessionSummaryMessage
  | ErrorMessage;

const SERVER_TYPES = new Set([
  "hello", "trial", "tactile", "trial_end", "session_summary", "error",
]);

export function encodeClientMessage(message: ClientMessage): string {
  return JSON.stringify(message);
}

/** Parse one server line; throws on anything that is not a known message. */
export function parseServerMessage(line: string): ServerMessage {
  let data: unknown;
  try {
    data = JSON.parse(line);
  } catch {
    throw new Error(`not JSON: ${line.slice(0, 80)}`);
  }
  if (typeof data !== "object" || data === null || Array.isArray(data)) {
    throw new Error("server message must be an object");
  }
  const type = (data as { type?: unknown }).type;
  if (typeof type !== "string" || !SERVER_TYPES.has(type)) {
    throw new Error(`unknown server message type: ${String(type)}`);
  }
  if (type === "tactile") {
    const message = data as TactileMessage;
    if (!DIRECTION_NAMES.includes(message.direction)) {
      throw new Error(`bad direction: ${String(message.direction)}`);
    }
    if (![1, 2, 3].includes(message.blink)) {
      throw new Error(`bad blink level: ${String(message.blink)}`);
    }
  }
  return data as ServerMessage;
}
