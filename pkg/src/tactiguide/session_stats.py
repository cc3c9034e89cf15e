"""Experiment harness and statistics.

Trials replay a participant (real or scripted) over one shape under a time
limit, recording the answer, correctness, response time and a 1-7 confidence
rating. The statistics side provides mean/sd summaries, error fractions and
a two-sample rank-sum test reported in the Mann-Whitney U convention, with
an exact two-sided p for small tie-free samples and a tie-corrected normal
approximation otherwise.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .geometry import Point, Shape
from .guidance import GuidanceState, reset, step
from .raster import RasterImage, rasterize_outline, sample_window
from .tactons import PinFrame, TactileState

MODE_GUIDANCE = "guidance"
MODE_PIXELS = "pixels"
DEFAULT_TIME_LIMIT_MS = 180_000

EXACT_MAX_N = 10  # exact rank-sum enumeration cutoff per sample


@dataclass(frozen=True)
class TrialRecord:
    shape_id: str
    mode: str
    condition: str
    response_time_ms: int
    timed_out: bool
    answer: str | None = None
    correct: bool | None = None
    confidence: int | None = None

    def __post_init__(self) -> None:
        if self.mode not in (MODE_GUIDANCE, MODE_PIXELS):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.timed_out and self.answer is not None:
            raise ValueError("a timed-out trial cannot carry an answer")
        if (self.answer is None) != (self.confidence is None):
            raise ValueError("confidence must be present exactly when an answer is")
        if (self.answer is None) != (self.correct is None):
            raise ValueError("correctness must be present exactly when an answer is")
        if self.confidence is not None and not 1 <= self.confidence <= 7:
            raise ValueError(f"confidence must be in 1..7, got {self.confidence}")
        if self.response_time_ms < 0:
            raise ValueError("response time cannot be negative")


def record_to_dict(record: TrialRecord) -> dict:
    """Stable-key-order dict form used for JSONL logs and wire summaries."""
    return {
        "shape_id": record.shape_id,
        "mode": record.mode,
        "condition": record.condition,
        "answer": record.answer,
        "correct": record.correct,
        "confidence": record.confidence,
        "response_time_ms": record.response_time_ms,
        "timed_out": record.timed_out,
    }


def record_from_dict(data: dict) -> TrialRecord:
    return TrialRecord(
        shape_id=data["shape_id"],
        mode=data["mode"],
        condition=data["condition"],
        answer=data.get("answer"),
        correct=data.get("correct"),
        confidence=data.get("confidence"),
        response_time_ms=data["response_time_ms"],
        timed_out=data["timed_out"],
    )


def write_trials(path: str, trials: Iterable[TrialRecord]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for record in trials:
            fh.write(json.dumps(record_to_dict(record), separators=(",", ":")))
            fh.write("\n")


def read_trials(path: str) -> list[TrialRecord]:
    trials = []
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                trials.append(record_from_dict(json.loads(line)))
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise ValueError(f"{path}:{line_no}: bad trial record: {exc}") from exc
    return trials


# ---------------------------------------------------------------------------
# Trial execution

@dataclass(frozen=True)
class CursorSample:
    x: float
    y: float
    t_ms: int


@dataclass(frozen=True)
class Answer:
    label: str
    confidence: int
    t_ms: int


class TrialRunner:
    """Incremental trial execution shared by the headless harness and the gateway.

    Feed cursor samples and at most one answer; the runner drives the chosen
    presentation engine and settles into a TrialRecord. Event times are
    client-logical milliseconds from trial start.
    """

    def __init__(
        self,
        shape: Shape,
        mode: str,
        condition: str,
        time_limit_ms: int = DEFAULT_TIME_LIMIT_MS,
    ) -> None:
        if time_limit_ms <= 0:
            raise ValueError("time limit must be positive")
        if mode not in (MODE_GUIDANCE, MODE_PIXELS):
            raise ValueError(f"unknown mode {mode!r}")
        self.shape = shape
        self.mode = mode
        self.condition = condition
        self.time_limit_ms = time_limit_ms
        self.record: TrialRecord | None = None
        self.last_tactile: TactileState | None = None
        self.last_frame: PinFrame | None = None
        self._guidance: GuidanceState | None = None
        self._image: RasterImage | None = None
        if mode == MODE_GUIDANCE:
            self._guidance = reset(shape)
        else:
            self._image = rasterize_outline(shape, cell_size=shape.thickness)

    @property
    def finished(self) -> bool:
        return self.record is not None

    def _expire(self) -> None:
        self.record = TrialRecord(
            shape_id=self.shape.name,
            mode=self.mode,
            condition=self.condition,
            response_time_ms=self.time_limit_ms,
            timed_out=True,
        )

    def feed_cursor(self, sample: CursorSample) -> TactileState | None:
        """Advance the engine one sample; returns the tactile state in
        guidance mode, None once finished or in pixels mode."""
        if self.finished:
            return None
        if sample.t_ms > self.time_limit_ms:
            self._expire()
            return None
        if self._guidance is not None:
            self._guidance, tactile, _ = step(
                self._guidance, Point(sample.x, sample.y), sample.t_ms
            )
            self.last_tactile = tactile
            return tactile
        assert self._image is not None
        self.last_frame = sample_window(self._image, Point(sample.x, sample.y))
        return None

    def feed_answer(self, answer: Answer) -> None:
        if self.finished:
            raise ValueError("trial already finished")
        if not isinstance(answer.confidence, int) or not 1 <= answer.confidence <= 7:
            raise ValueError(f"confidence must be an integer in 1..7, got {answer.confidence!r}")
        if answer.t_ms > self.time_limit_ms:
            self._expire()
            return
        label = answer.label.strip()
        self.record = TrialRecord(
            shape_id=self.shape.name,
            mode=self.mode,
            condition=self.condition,
            answer=label,
            correct=label.casefold() == self.shape.name.casefold(),
            confidence=answer.confidence,
            response_time_ms=answer.t_ms,
            timed_out=False,
        )

    def finish(self) -> TrialRecord:
        """Close the trial; no answer by now means a timeout."""
        if not self.finished:
            self._expire()
        assert self.record is not None
        return self.record


def run_trial(
    shape: Shape,
    mode: str,
    condition: str,
    trial_input: Iterable[CursorSample | Answer],
    time_limit_ms: int = DEFAULT_TIME_LIMIT_MS,
) -> TrialRecord:
    """Replay a stream of cursor samples and (optionally) one answer."""
    runner = TrialRunner(shape, mode, condition, time_limit_ms)
    for event in trial_input:
        if runner.finished:
            break
        if isinstance(event, CursorSample):
            runner.feed_cursor(event)
        elif isinstance(event, Answer):
            runner.feed_answer(event)
        else:
            raise TypeError(f"unexpected trial input {event!r}")
    return runner.finish()


# ---------------------------------------------------------------------------
# Statistics

@dataclass(frozen=True)
class SummaryStats:
    n: int
    mean: float
    sd: float | None  # sample sd (n-1); undefined for n = 1


def summarize(values: Sequence[float]) -> SummaryStats:
    """Mean and sample standard deviation via Welford's online update.

    Values are folded in sorted order, so the result is bit-identical under
    any permutation of the input and reports stay byte-stable.
    """
    n = 0
    mean = 0.0
    m2 = 0.0
    for value in sorted(values):
        n += 1
        delta = value - mean
        mean += delta / n
        m2 += delta * (value - mean)
    if n == 0:
        raise ValueError("cannot summarize an empty list")
    sd = math.sqrt(m2 / (n - 1)) if n >= 2 else None
    return SummaryStats(n=n, mean=mean, sd=sd)


@dataclass(frozen=True)
class WilcoxonResult:
    W: float  # Mann-Whitney U of the first sample
    p_value: float
    method: str  # "exact" | "normal_approx"


def _midranks(values: Sequence[float]) -> list[float]:
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        rank = (i + j + 2) / 2.0  # average of 1-based positions i+1 .. j+1
        for k in range(i, j + 1):
            ranks[order[k]] = rank
        i = j + 1
    return ranks


@lru_cache(maxsize=None)
def _u_count(n: int, m: int, u: int) -> int:
    """Number of rank arrangements of (n, m) samples with U statistic u."""
    if u < 0 or u > n * m:
        return 0
    if n == 0 or m == 0:
        return 1 if u == 0 else 0
    return _u_count(n - 1, m, u - m) + _u_count(n, m - 1, u)


def _exact_two_sided_p(u: float, n: int, m: int) -> float:
    total = math.comb(n + m, n)
    low = sum(_u_count(n, m, k) for k in range(0, int(math.floor(u)) + 1))
    high = sum(_u_count(n, m, k) for k in range(int(math.ceil(u)), n * m + 1))
    p = 2 * Fraction(min(low, high), total)
    return float(min(p, Fraction(1)))


def _norm_sf(z: float) -> float:
    return 0.5 * math.erfc(z / math.sqrt(2.0))


def wilcoxon_rank_sum(x: Sequence[float], y: Sequence[float]) -> WilcoxonResult:
    """Two-sample rank-sum test; W is the Mann-Whitney U of x.

    Small tie-free samples (each side at most 10) get an exact two-sided p
    by enumerating the null distribution of U; anything larger, or any tie,
    falls back to the tie-corrected normal approximation with continuity
    correction. Two-sided p is twice the smaller tail, capped at 1.
    """
    n, m = len(x), len(y)
    if n == 0 or m == 0:
        raise ValueError("both samples must be non-empty")
    combined = list(x) + list(y)
    ranks = _midranks(combined)
    rank_sum_x = sum(ranks[:n])
    u = rank_sum_x - n * (n + 1) / 2.0
    has_ties = len(set(combined)) != len(combined)

    if not has_ties and n <= EXACT_MAX_N and m <= EXACT_MAX_N:
        return WilcoxonResult(W=u, p_value=_exact_two_sided_p(u, n, m), method="exact")

    big_n = n + m
    tie_term = 0
    for value in set(combined):
        t = combined.count(value)
        tie_term += t * t * t - t
    variance = (n * m / 12.0) * ((big_n + 1) - tie_term / (big_n * (big_n - 1)))
    if variance <= 0:
        return WilcoxonResult(W=u, p_value=1.0, method="normal_approx")
    big_u = max(u, n * m - u)
    z = (big_u - n * m / 2.0 - 0.5) / math.sqrt(variance)
    p = min(1.0, 2.0 * _norm_sf(z))
    return WilcoxonResult(W=u, p_value=p, method="normal_approx")


def error_fraction(trials: Sequence[TrialRecord]) -> tuple[int, int]:
    """(errors, total): a trial is an error if it timed out or was answered wrong."""
    if not trials:
        raise ValueError("cannot compute an error fraction of zero trials")
    errors = sum(1 for t in trials if t.timed_out or not t.correct)
    return errors, len(trials)


def render_fraction(errors: int, total: int) -> str:
    return f"{errors}/{total}"


# ---------------------------------------------------------------------------
# Report rendering

def _fmt_seconds(stats: SummaryStats) -> str:
    if stats.sd is None:
        return f"{stats.mean:.2f}s"
    return f"{stats.mean:.2f}s (sd={stats.sd:.2f}s)"


def _fmt_confidence(stats: SummaryStats) -> str:
    if stats.sd is None:
        return f"{stats.mean:.2f}/7"
    return f"{stats.mean:.2f}/7 (sd={stats.sd:.2f})"


def _fmt_wilcoxon(result: WilcoxonResult) -> str:
    w = result.W
    w_text = str(int(w)) if w == int(w) else f"{w:g}"
    return f"W={w_text}, p={result.p_value:.2f} [{result.method}]"


def times_seconds(trials: Sequence[TrialRecord]) -> list[float]:
    """Response times in seconds, timeouts included at the limit they hit."""
    return [t.response_time_ms / 1000.0 for t in trials]


def confidences(trials: Sequence[TrialRecord]) -> list[float]:
    """Confidence ratings of the answered trials only."""
    return [float(t.confidence) for t in trials if t.confidence is not None]


def render_report(
    label_a: str,
    trials_a: Sequence[TrialRecord],
    label_b: str,
    trials_b: Sequence[TrialRecord],
) -> str:
    """Plain-text comparison of two trial sets, one line per measure."""
    if not trials_a or not trials_b:
        raise ValueError("both trial sets must be non-empty")
    lines = [f"conditions: {label_a} vs {label_b}"]
    ea, ta = error_fraction(trials_a)
    eb, tb = error_fraction(trials_b)
    lines.append(f"errors: {render_fraction(ea, ta)} vs {render_fraction(eb, tb)}")

    times_a, times_b = times_seconds(trials_a), times_seconds(trials_b)
    lines.append(f"time: {_fmt_seconds(summarize(times_a))} vs {_fmt_seconds(summarize(times_b))}")
    lines.append(f"time rank-sum: {_fmt_wilcoxon(wilcoxon_rank_sum(times_a, times_b))}")

    conf_a, conf_b = confidences(trials_a), confidences(trials_b)
    if conf_a and conf_b:
        lines.append(
            f"confidence: {_fmt_confidence(summarize(conf_a))} vs {_fmt_confidence(summarize(conf_b))}"
        )
        lines.append(f"confidence rank-sum: {_fmt_wilcoxon(wilcoxon_rank_sum(conf_a, conf_b))}")
    else:
        lines.append("confidence: no answered trials to compare")
    return "\n".join(lines)


def summary_stats_dict(trials: Sequence[TrialRecord]) -> dict:
    """Machine-readable per-condition stats used in session summaries."""
    errors, total = error_fraction(trials)
    times = summarize(times_seconds(trials))
    result: dict = {
        "errors": errors,
        "total": total,
        "time_mean_s": times.mean,
        "time_sd_s": times.sd,
    }
    conf = confidences(trials)
    if conf:
        conf_stats = summarize(conf)
        result["confidence_mean"] = conf_stats.mean
        result["confidence_sd"] = conf_stats.sd
    else:
        result["confidence_mean"] = None
        result["confidence_sd"] = None
    return result
