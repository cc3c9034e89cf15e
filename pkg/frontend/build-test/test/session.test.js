import assert from "node:assert/strict";
import { test } from "node:test";
import { MessageThrottle } from "../src/cursor.js";
import { SessionController } from "../src/session.js";
function makeHarness(options = {}) {
    const sent = [];
    let clock = 0;
    const controller = new SessionController((line) => sent.push(JSON.parse(line)), {
        mode: "guidance",
        condition: "unimanual",
        now: () => clock,
        throttle: new MessageThrottle(8, () => clock),
        ...options,
    });
    return {
        controller,
        sent,
        setClock: (ms) => {
            clock = ms;
        },
    };
}
const TRIAL = '{"type":"trial","index":0,"count":2,"time_limit_ms":180000}';
const HELLO_ACK = '{"type":"hello","v":1,"periods_ms":{"1":1000,"2":500,"3":250}}';
test("start sends a hello with protocol version and condition", () => {
    const h = makeHarness();
    h.controller.start();
    assert.deepEqual(h.sent, [
        { type: "hello", v: 1, mode: "guidance", condition: "unimanual" },
    ]);
});
test("hello ack with a drifted period table fails loudly", () => {
    const h = makeHarness();
    assert.throws(() => h.controller.handleLine('{"type":"hello","v":1,"periods_ms":{"1":1,"2":2,"3":3}}'), /mismatch/);
    assert.doesNotThrow(() => h.controller.handleLine(HELLO_ACK));
});
test("trial message starts the logical clock and countdown", () => {
    const h = makeHarness();
    h.controller.handleLine(HELLO_ACK);
    h.setClock(5000);
    h.controller.handleLine(TRIAL);
    assert.equal(h.controller.phase, "in_trial");
    assert.equal(h.controller.remainingMs(), 180000);
    h.setClock(65000);
    assert.equal(h.controller.trialTime(), 60000);
    assert.equal(h.controller.remainingMs(), 120000);
});
test("pointer samples stream as cursor messages with trial time", () => {
    const h = makeHarness();
    h.controller.handleLine(TRIAL);
    h.setClock(100);
    assert.equal(h.controller.pointerSample(500, 500), true);
    const cursor = h.sent.at(-1);
    assert.deepEqual(cursor, { type: "cursor", x: 500, y: 500, t: 100 });
});
test("pointer samples are throttled", () => {
    const h = makeHarness();
    h.controller.handleLine(TRIAL);
    let emitted = 0;
    for (let t = 0; t < 1000; t++) {
        h.setClock(t);
        if (h.controller.pointerSample(t, t))
            emitted++;
    }
    assert.ok(emitted <= 125, `sent ${emitted}`);
});
test("pointer samples outside a trial are dropped", () => {
    const h = makeHarness();
    assert.equal(h.controller.pointerSample(1, 2), false);
    assert.equal(h.sent.length, 0);
});
test("answer validation: empty label and out-of-range confidence stay local", () => {
    const h = makeHarness();
    h.controller.handleLine(TRIAL);
    assert.match(h.controller.submitAnswer("   ", 4), /shape name/);
    assert.match(h.controller.submitAnswer("square", 0), /1\.\.7/);
    assert.match(h.controller.submitAnswer("square", 8), /1\.\.7/);
    assert.match(h.controller.submitAnswer("square", 3.5), /1\.\.7/);
    assert.equal(h.sent.length, 0, "nothing was sent for invalid input");
});
test("a valid answer locks the form until the trial ends", () => {
    const h = makeHarness();
    h.controller.handleLine(TRIAL);
    h.setClock(30000);
    assert.equal(h.controller.submitAnswer(" square ", 6), null);
    assert.deepEqual(h.sent.at(-1), { type: "answer", label: "square", confidence: 6, t: 30000 });
    assert.match(h.controller.submitAnswer("square", 6), /already submitted/);
    assert.equal(h.controller.pointerSample(1, 1), false, "input disabled while locked");
    h.controller.handleLine('{"type":"trial_end","reason":"answered","correct":true}');
    assert.equal(h.controller.phase, "between_trials");
});
test("a server-rejected answer unlocks the form", () => {
    const h = makeHarness();
    h.controller.handleLine(TRIAL);
    assert.equal(h.controller.submitAnswer("square", 6), null);
    h.controller.handleLine('{"type":"error","message":"confidence must be an integer in 1..7"}');
    assert.equal(h.controller.answerLocked, false);
    assert.equal(h.controller.submitAnswer("square", 5), null);
});
test("countdown expiry reports one cursor past the deadline", () => {
    const h = makeHarness();
    h.controller.handleLine(TRIAL);
    h.setClock(1000);
    h.controller.pointerSample(123, 456);
    h.setClock(180001);
    h.controller.tick();
    h.controller.tick(); // only one expiry report
    const expiries = h.sent.filter((m) => m.type === "cursor" && m.t > 180000);
    assert.equal(expiries.length, 1);
    assert.equal(expiries[0].x, 123);
    assert.equal(expiries[0].t, 180001);
    assert.equal(h.controller.remainingMs(), 0);
});
test("next_trial goes out only between trials", () => {
    const h = makeHarness();
    h.controller.handleLine(TRIAL);
    h.controller.requestNextTrial();
    assert.equal(h.sent.length, 0);
    h.controller.handleLine('{"type":"trial_end","reason":"timeout","correct":null}');
    h.controller.requestNextTrial();
    assert.deepEqual(h.sent.at(-1), { type: "next_trial" });
});
test("summary closes the session", () => {
    const h = makeHarness();
    h.controller.handleLine(TRIAL);
    h.controller.handleLine('{"type":"trial_end","reason":"answered","correct":true}');
    h.controller.handleLine('{"type":"session_summary","trials":[],"stats":{}}');
    assert.equal(h.controller.phase, "done");
    assert.ok(h.controller.summary);
});
test("tactile updates replace the displayed state", () => {
    const h = makeHarness();
    h.controller.handleLine(TRIAL);
    h.controller.handleLine('{"type":"tactile","direction":"E","blink":1,"on_shape":true,"t":50}');
    h.controller.handleLine('{"type":"tactile","direction":"N","blink":3,"on_shape":false,"t":90}');
    assert.equal(h.controller.lastTactile?.direction, "N");
    assert.equal(h.controller.lastTactile?.blink, 3);
});
