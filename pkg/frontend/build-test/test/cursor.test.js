import assert from "node:assert/strict";
import { test } from "node:test";
import { MessageThrottle, MIN_CURSOR_INTERVAL_MS, pointerToWorkspace, workspaceToCanvas, } from "../src/cursor.js";
const BOX = { left: 100, top: 50, width: 500, height: 500 };
test("canvas center maps to the workspace center", () => {
    const point = pointerToWorkspace(BOX, 350, 300, 1000);
    assert.ok(point);
    assert.equal(point.x, 500);
    assert.equal(point.y, 500);
});
test("screen y flips to workspace y", () => {
    const top = pointerToWorkspace(BOX, 350, 50, 1000);
    const bottom = pointerToWorkspace(BOX, 350, 550, 1000);
    assert.ok(top && bottom);
    assert.equal(top.y, 1000); // top of the canvas is the top of the workspace
    assert.equal(bottom.y, 0);
});
test("points outside the canvas produce no message", () => {
    assert.equal(pointerToWorkspace(BOX, 99, 300, 1000), null);
    assert.equal(pointerToWorkspace(BOX, 350, 551, 1000), null);
});
test("workspace-to-canvas is the inverse mapping", () => {
    const box = { width: 500, height: 500 };
    for (const [x, y] of [[0, 0], [500, 500], [1000, 1000], [120, 840]]) {
        const dot = workspaceToCanvas({ x, y }, box, 1000);
        const back = pointerToWorkspace({ left: 0, top: 0, ...box }, dot.x, dot.y, 1000);
        assert.ok(back);
        assert.ok(Math.abs(back.x - x) < 1e-9);
        assert.ok(Math.abs(back.y - y) < 1e-9);
    }
});
test("one second of continuous movement sends at most 125 messages", () => {
    let clock = 0;
    const throttle = new MessageThrottle(MIN_CURSOR_INTERVAL_MS, () => clock);
    let sent = 0;
    // Pointer events every millisecond for one second.
    for (clock = 0; clock < 1000; clock++) {
        if (throttle.allow())
            sent++;
    }
    assert.ok(sent <= 125, `sent ${sent}`);
    assert.ok(sent >= 100, `suspiciously few: ${sent}`);
});
test("throttle forwards immediately after a quiet spell", () => {
    let clock = 0;
    const throttle = new MessageThrottle(8, () => clock);
    assert.equal(throttle.allow(), true);
    clock = 4;
    assert.equal(throttle.allow(), false);
    clock = 500;
    assert.equal(throttle.allow(), true);
});
test("reset clears the rate limiter", () => {
    let clock = 0;
    const throttle = new MessageThrottle(8, () => clock);
    assert.equal(throttle.allow(), true);
    throttle.reset();
    assert.equal(throttle.allow(), true);
});
