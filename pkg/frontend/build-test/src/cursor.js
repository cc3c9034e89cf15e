/**
 * Pointer-to-workspace mapping and cursor message throttling.
 *
 * The workspace is a square with y growing upward; screen y grows downward,
 * so the vertical axis flips. Cursor traffic is capped at 125 messages per
 * second (8 ms minimum spacing), forwarding the newest position.
 */
export const WORKSPACE_SIZE = 1000;
export const MIN_CURSOR_INTERVAL_MS = 8; // 125 messages/s
/**
 * Map a pointer event position to workspace coordinates (y flipped).
 * Returns null when the pointer is outside the canvas box: no messages
 * until re-entry.
 */
export function pointerToWorkspace(box, clientX, clientY, workspaceSize = WORKSPACE_SIZE) {
    const fx = (clientX - box.left) / box.width;
    const fy = (clientY - box.top) / box.height;
    if (fx < 0 || fx > 1 || fy < 0 || fy > 1) {
        return null;
    }
    return { x: fx * workspaceSize, y: (1 - fy) * workspaceSize };
}
/** Inverse mapping, for drawing the cursor marker on the canvas. */
export function workspaceToCanvas(point, box, workspaceSize = WORKSPACE_SIZE) {
    return {
        x: (point.x / workspaceSize) * box.width,
        y: (1 - point.y / workspaceSize) * box.height,
    };
}
/**
 * Rate limiter over an injectable clock: allow() answers whether a message
 * may go out now. At most one message per interval, so one second of
 * continuous movement emits at most 1000 / interval messages.
 */
export class MessageThrottle {
    constructor(intervalMs = MIN_CURSOR_INTERVAL_MS, now = () => performance.now()) {
        this.intervalMs = intervalMs;
        this.now = now;
        this.lastSent = -Infinity;
    }
    allow(at) {
        const t = at ?? this.now();
        if (t - this.lastSent < this.intervalMs) {
            return false;
        }
        this.lastSent = t;
        return true;
    }
    reset() {
        this.lastSent = -Infinity;
    }
}
