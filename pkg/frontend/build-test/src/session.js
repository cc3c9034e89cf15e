/**
 * Client session state machine, independent of DOM and transport so it can
 * run under tests with a fake socket and clock.
 *
 * Time discipline: every trial gets its own logical clock starting at 0 when
 * the trial message arrives; cursor and answer messages carry that logical
 * time. When the countdown passes the limit, the client reports expiry by
 * sending one final cursor sample past the deadline, which makes the server
 * close the trial as a timeout.
 */
import { assertPeriodTable } from "./blink.js";
import { MessageThrottle } from "./cursor.js";
import { PROTOCOL_VERSION, encodeClientMessage, parseServerMessage, } from "./protocol.js";
export class SessionController {
    constructor(send, options = {}) {
        this.phase = "connecting";
        this.trial = null;
        this.lastTactile = null;
        this.summary = null;
        this.answerLocked = false;
        this.trialStartedAt = 0;
        this.lastPosition = null;
        this.expiryReported = false;
        this.send = send;
        this.callbacks = options.callbacks ?? {};
        this.now = options.now ?? (() => performance.now());
        this.throttle = options.throttle ?? new MessageThrottle();
        this.mode = options.mode ?? "guidance";
        this.condition = options.condition ?? "unimanual";
    }
    start() {
        this.sendMessage({
            type: "hello",
            v: PROTOCOL_VERSION,
            mode: this.mode,
            condition: this.condition,
        });
    }
    /** Milliseconds since the current trial started (its logical clock). */
    trialTime() {
        return Math.max(0, Math.round(this.now() - this.trialStartedAt));
    }
    /** Remaining countdown; never negative. */
    remainingMs() {
        if (this.phase !== "in_trial" || this.trial === null) {
            return 0;
        }
        return Math.max(0, this.trial.time_limit_ms - this.trialTime());
    }
    handleLine(line) {
        let message;
        try {
            message = parseServerMessage(line);
        }
        catch (error) {
            this.callbacks.onError?.(String(error));
            return;
        }
        switch (message.type) {
            case "hello":
                assertPeriodTable(message.periods_ms); // throws loudly on drift
                break;
            case "trial":
                this.trial = message;
                this.phase = "in_trial";
                this.trialStartedAt = this.now();
                this.lastTactile = null;
                this.lastPosition = null;
                this.answerLocked = false;
                this.expiryReported = false;
                this.throttle.reset();
                this.callbacks.onTrial?.(message);
                break;
            case "tactile":
                this.lastTactile = message;
                this.callbacks.onTactile?.(message);
                break;
            case "trial_end":
                this.phase = "between_trials";
                this.callbacks.onTrialEnd?.(message);
                break;
            case "session_summary":
                this.summary = message;
                this.phase = "done";
                this.callbacks.onSummary?.(message);
                break;
            case "error":
                // A rejected answer (for example a bad confidence) unlocks the form.
                this.answerLocked = false;
                this.callbacks.onError?.(message.message);
                break;
        }
    }
    /** Stream a pointer position; throttled, ignored outside an active trial. */
    pointerSample(x, y) {
        if (this.phase !== "in_trial" || this.answerLocked) {
            return false;
        }
        this.lastPosition = { x, y };
        if (!this.throttle.allow(this.now())) {
            return false;
        }
        this.sendMessage({ type: "cursor", x, y, t: this.trialTime() });
        return true;
    }
    /**
     * Validate and submit an answer. Returns an error text for inline display,
     * or null when the message went out (form locks until the trial ends).
     */
    submitAnswer(label, confidence) {
        if (this.phase !== "in_trial") {
            return "no active trial";
        }
        if (this.answerLocked) {
            return "answer already submitted";
        }
        const trimmed = label.trim();
        if (trimmed === "") {
            return "enter a shape name";
        }
        if (!Number.isInteger(confidence) || confidence < 1 || confidence > 7) {
            return "confidence must be 1..7";
        }
        this.answerLocked = true;
        this.sendMessage({
            type: "answer",
            label: trimmed,
            confidence,
            t: this.trialTime(),
        });
        return null;
    }
    /** Ask for the next trial after a timeout-ended one. */
    requestNextTrial() {
        if (this.phase === "between_trials") {
            this.sendMessage({ type: "next_trial" });
        }
    }
    /**
     * Countdown housekeeping; call regularly (e.g. each animation frame).
     * At expiry the client reports it with one cursor sample past the limit.
     */
    tick() {
        if (this.phase !== "in_trial" || this.trial === null || this.expiryReported) {
            return;
        }
        if (this.trialTime() > this.trial.time_limit_ms) {
            this.expiryReported = true;
            const position = this.lastPosition ?? { x: 0, y: 0 };
            this.sendMessage({
                type: "cursor",
                x: position.x,
                y: position.y,
                t: this.trial.time_limit_ms + 1,
            });
        }
    }
    sendMessage(message) {
        this.send(encodeClientMessage(message));
    }
}
