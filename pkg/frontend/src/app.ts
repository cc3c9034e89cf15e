/**
 * Browser entry point: wires the session controller to a WebSocket, the
 * exploration canvas, the two virtual pin arrays and the answer form.
 *
 * The exploration canvas shows only the cursor, never the shape: the task
 * stays non-visual. All blinking is animated locally from the shared period
 * table; the server only sends state changes.
 */

import { workspaceToCanvas, pointerToWorkspace, WORKSPACE_SIZE } from "./cursor.js";
import {
  blankGrid,
  drawPinArray,
  indexArrayGrid,
  middleArrayGrid,
  parseGlyphAsset,
  type GlyphTable,
} from "./pins.js";
import type { SessionSummaryMessage, TrialEndMessage, TrialMessage } from "./protocol.js";
import { SessionController } from "./session.js";

function byId<T extends HTMLElement>(id: string): T {
  const element = document.getElementById(id);
  if (!element) {
    throw new Error(`missing element #${id}`);
  }
  return element as T;
}

function formatClock(ms: number): string {
  const total = Math.ceil(ms / 1000);
  const minutes = Math.floor(total / 60);
  const seconds = total % 60;
  return `${minutes}:${String(seconds).padStart(2, "0")}`;
}

async function main(): Promise<void> {
  const statusLine = byId<HTMLElement>("status");
  const trialLabel = byId<HTMLElement>("trial-label");
  const clockLabel = byId<HTMLElement>("clock");
  const resultLine = byId<HTMLElement>("result");
  const canvas = byId<HTMLCanvasElement>("workspace");
  const indexArray = byId<HTMLCanvasElement>("index-array");
  const middleArray = byId<HTMLCanvasElement>("middle-array");
  const answerForm = byId<HTMLFormElement>("answer-form");
  const answerInput = byId<HTMLInputElement>("answer-label");
  const confidenceInput = byId<HTMLInputElement>("confidence");
  const confidenceValue = byId<HTMLElement>("confidence-value");
  const nextButton = byId<HTMLButtonElement>("next-trial");
  const summaryBlock = byId<HTMLElement>("summary");

  const canvasCtx = canvas.getContext("2d")!;
  const indexCtx = indexArray.getContext("2d")!;
  const middleCtx = middleArray.getContext("2d")!;

  let glyphs: GlyphTable;
  try {
    const response = await fetch("/glyphs.json");
    glyphs = parseGlyphAsset(await response.json());
  } catch (error) {
    statusLine.textContent = `cannot load glyphs: ${String(error)}`;
    return;
  }

  const params = new URLSearchParams(location.search);
  const mode = params.get("mode") === "pixels" ? "pixels" : "guidance";
  const condition = params.get("condition") ?? "unimanual";

  const socket = new WebSocket(`ws://${location.host}/ws`);
  let pointer: { x: number; y: number } | null = null;

  const controller = new SessionController((line) => socket.send(line), {
    mode,
    condition,
    callbacks: {
      onTrial(trial: TrialMessage) {
        trialLabel.textContent = `shape ${trial.index + 1} of ${trial.count}`;
        resultLine.textContent = "";
        answerInput.value = "";
        answerInput.disabled = false;
        confidenceInput.disabled = false;
        nextButton.hidden = true;
        statusLine.textContent = `exploring (${mode}, ${condition})`;
      },
      onTrialEnd(end: TrialEndMessage) {
        if (end.reason === "timeout") {
          resultLine.textContent = "time is up";
          nextButton.hidden = false;
        } else {
          resultLine.textContent = end.correct ? "recorded: correct" : "recorded: incorrect";
        }
        answerInput.disabled = true;
        confidenceInput.disabled = true;
      },
      onSummary(summary: SessionSummaryMessage) {
        statusLine.textContent = "session complete";
        trialLabel.textContent = "";
        const rows = summary.trials
          .map(
            (t) =>
              `<tr><td>${t.shape_id}</td><td>${t.answer ?? "(none)"}</td>` +
              `<td>${t.timed_out ? "timeout" : t.correct ? "correct" : "wrong"}</td>` +
              `<td>${(t.response_time_ms / 1000).toFixed(1)}s</td>` +
              `<td>${t.confidence ?? "-"}</td></tr>`,
          )
          .join("");
        summaryBlock.innerHTML =
          "<table><tr><th>shape</th><th>answer</th><th>outcome</th>" +
          `<th>time</th><th>confidence</th></tr>${rows}</table>`;
        summaryBlock.hidden = false;
      },
      onError(message: string) {
        resultLine.textContent = message;
      },
    },
  });

  socket.addEventListener("open", () => {
    statusLine.textContent = "connected";
    controller.start();
  });
  socket.addEventListener("message", (event) => {
    controller.handleLine(String(event.data));
  });
  socket.addEventListener("close", () => {
    if (controller.phase !== "done") {
      statusLine.textContent = "connection closed";
    }
  });
  socket.addEventListener("error", () => {
    statusLine.textContent = "connection error";
  });

  canvas.addEventListener("pointermove", (event) => {
    const box = canvas.getBoundingClientRect();
    const point = pointerToWorkspace(box, event.clientX, event.clientY);
    pointer = point;
    if (point) {
      controller.pointerSample(point.x, point.y);
    }
  });
  canvas.addEventListener("pointerleave", () => {
    pointer = null;
  });

  confidenceInput.addEventListener("input", () => {
    confidenceValue.textContent = confidenceInput.value;
  });

  answerForm.addEventListener("submit", (event) => {
    event.preventDefault();
    const error = controller.submitAnswer(answerInput.value, Number(confidenceInput.value));
    if (error) {
      resultLine.textContent = error;
    }
  });

  nextButton.addEventListener("click", () => {
    controller.requestNextTrial();
    nextButton.hidden = true;
  });

  function render(): void {
    controller.tick();
    if (controller.phase === "in_trial") {
      clockLabel.textContent = formatClock(controller.remainingMs());
    }

    canvasCtx.fillStyle = "#0c0e13";
    canvasCtx.fillRect(0, 0, canvas.width, canvas.height);
    canvasCtx.strokeStyle = "#2a3142";
    canvasCtx.strokeRect(0.5, 0.5, canvas.width - 1, canvas.height - 1);
    if (pointer) {
      const dot = workspaceToCanvas(pointer, canvas, WORKSPACE_SIZE);
      canvasCtx.beginPath();
      canvasCtx.arc(dot.x, dot.y, 6, 0, Math.PI * 2);
      canvasCtx.fillStyle = "#6ea8ff";
      canvasCtx.fill();
    }

    const tactile = controller.lastTactile;
    if (tactile && controller.phase === "in_trial") {
      drawPinArray(indexCtx, indexArrayGrid(tactile, glyphs, performance.now()), indexArray.width);
      drawPinArray(middleCtx, middleArrayGrid(tactile.on_shape), middleArray.width);
    } else {
      drawPinArray(indexCtx, blankGrid(), indexArray.width);
      drawPinArray(middleCtx, blankGrid(), middleArray.width);
    }
    requestAnimationFrame(render);
  }
  requestAnimationFrame(render);
}

main().catch((error) => {
  document.body.textContent = String(error);
});
