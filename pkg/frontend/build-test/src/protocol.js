/**
 * Wire protocol shared with the session gateway: one JSON object per line
 * (or per WebSocket text frame), discriminated by a `type` field.
 */
export const PROTOCOL_VERSION = 1;
export const DIRECTION_NAMES = [
    "N", "NE", "E", "SE", "S", "SW", "W", "NW",
];
const SERVER_TYPES = new Set([
    "hello", "trial", "tactile", "trial_end", "session_summary", "error",
]);
export function encodeClientMessage(message) {
    return JSON.stringify(message);
}
/** Parse one server line; throws on anything that is not a known message. */
export function parseServerMessage(line) {
    let data;
    try {
        data = JSON.parse(line);
    }
    catch {
        throw new Error(`not JSON: ${line.slice(0, 80)}`);
    }
    if (typeof data !== "object" || data === null || Array.isArray(data)) {
        throw new Error("server message must be an object");
    }
    const type = data.type;
    if (typeof type !== "string" || !SERVER_TYPES.has(type)) {
        throw new Error(`unknown server message type: ${String(type)}`);
    }
    if (type === "tactile") {
        const message = data;
        if (!DIRECTION_NAMES.includes(message.direction)) {
            throw new Error(`bad direction: ${String(message.direction)}`);
        }
        if (![1, 2, 3].includes(message.blink)) {
            throw new Error(`bad blink level: ${String(message.blink)}`);
        }
    }
    return data;
}
