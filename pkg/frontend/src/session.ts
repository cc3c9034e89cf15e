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
import {
  PROTOCOL_VERSION,
  encodeClientMessage,
  parseServerMessage,
  type ClientMessage,
  type ServerMessage,
  type SessionSummaryMessage,
  type TactileMessage,
  type TrialEndMessage,
  type TrialMessage,
} from "./protocol.js";

export type SessionPhase =
  | "connecting"
  | "in_trial"
  | "between_trials"
  | "done"
  | "failed";

export interface SessionCallbacks {
  onTrial?(trial: TrialMessage): void;
  onTactile?(tactile: TactileMessage): void;
  onTrialEnd?(end: TrialEndMessage): void;
  onSummary?(summary: SessionSummaryMessage): void;
  onError?(message: string): void;
}

export interface SessionOptions {
  mode?: "guidance" | "pixels";
  condition?: string;
  callbacks?: SessionCallbacks;
  now?: () => number;
  throttle?: MessageThrottle;
}

export class SessionController {
  phase: SessionPhase = "connecting";
  trial: TrialMessage | null = null;
  lastTactile: TactileMessage | null = null;
  summary: SessionSummaryMessage | null = null;
  answerLocked = false;

  private readonly send: (line: string) => void;
  private readonly callbacks: SessionCallbacks;
  private readonly now: () => number;
  private readonly throttle: MessageThrottle;
  private readonly mode: "guidance" | "pixels";
  private readonly condition: string;
  private trialStartedAt = 0;
  private lastPosition: { x: number; y: number } | null = null;
  private expiryReported = false;

  constructor(send: (line: string) => void, options: SessionOptions = {}) {
    this.send = send;
    this.callbacks = options.callbacks ?? {};
    this.now = options.now ?? (() => performance.now());
    this.throttle = options.throttle ?? new MessageThrottle();
    this.mode = options.mode ?? "guidance";
    this.condition = options.condition ?? "unimanual";
  }

  start(): void {
    this.sendMessage({
      type: "hello",
      v: PROTOCOL_VERSION,
      mode: this.mode,
      condition: this.condition,
    });
  }

  /** Milliseconds since the current trial started (its logical clock). */
  trialTime(): number {
    return Math.max(0, Math.round(this.now() - this.trialStartedAt));
  }

  /** Remaining countdown; never negative. */
  remainingMs(): number {
    if (this.phase !== "in_trial" || this.trial === null) {
      return 0;
    }
    return Math.max(0, this.trial.time_limit_ms - this.trialTime());
  }

  handleLine(line: string): void {
    let message: ServerMessage;
    try {
      message = parseServerMessage(line);
    } catch (error) {
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
  pointerSample(x: number, y: number): boolean {
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
  submitAnswer(label: string, confidence: number): string | null {
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
  requestNextTrial(): void {
    if (this.phase === "between_trials") {
      this.sendMessage({ type: "next_trial" });
    }
  }

  /**
   * Countdown housekeeping; call regularly (e.g. each animation frame).
   * At expiry the client reports it with one cursor sample past the limit.
   */
  tick(): void {
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

  private sendMessage(message: ClientMessage): void {
    this.send(encodeClientMessage(message));
  }
}
