import itertools
import math
import random

import pytest

from tactiguide.geometry import Point, Shape
from tactiguide.session_stats import (
    Answer,
    CursorSample,
    TrialRecord,
    TrialRunner,
    error_fraction,
    read_trials,
    record_from_dict,
    record_to_dict,
    render_fraction,
    render_report,
    run_trial,
    summarize,
    wilcoxon_rank_sum,
    write_trials,
)


def two_pass_stats(values):
    """Independent reference: classic two-pass mean and sample sd."""
    n = len(values)
    mean = sum(values) / n
    if n < 2:
        return mean, None
    return mean, math.sqrt(sum((v - mean) ** 2 for v in values) / (n - 1))


def enumeration_p(x_ranks, n, m):
    """Brute-force oracle: exact two-sided p over all C(n+m, n) rank subsets."""
    u_observed = sum(x_ranks) - n * (n + 1) / 2
    all_u = [
        sum(combo) - n * (n + 1) / 2
        for combo in itertools.combinations(range(1, n + m + 1), n)
    ]
    low = sum(1 for u in all_u if u <= u_observed)
    high = sum(1 for u in all_u if u >= u_observed)
    return min(1.0, 2 * min(low, high) / len(all_u))


def make_record(**overrides):
    base = dict(
        shape_id="square",
        mode="guidance",
        condition="unimanual",
        response_time_ms=30_000,
        timed_out=False,
        answer="square",
        correct=True,
        confidence=6,
    )
    base.update(overrides)
    return TrialRecord(**base)


class TestTrialRecord:
    def test_timed_out_cannot_answer(self):
        with pytest.raises(ValueError, match="timed-out"):
            make_record(timed_out=True, response_time_ms=180_000)

    def test_confidence_requires_answer(self):
        with pytest.raises(ValueError, match="confidence"):
            make_record(answer=None, correct=None)

    def test_confidence_range(self):
        with pytest.raises(ValueError, match="1..7"):
            make_record(confidence=8)
        with pytest.raises(ValueError, match="1..7"):
            make_record(confidence=0)

    def test_unknown_mode(self):
        with pytest.raises(ValueError, match="mode"):
            make_record(mode="telepathy")

    def test_dict_round_trip(self):
        record = make_record()
        assert record_from_dict(record_to_dict(record)) == record

    def test_jsonl_round_trip(self, tmp_path):
        records = [
            make_record(),
            make_record(answer=None, correct=None, confidence=None,
                        timed_out=True, response_time_ms=180_000),
        ]
        path = tmp_path / "trials.jsonl"
        write_trials(str(path), records)
        assert read_trials(str(path)) == records

    def test_read_rejects_garbage(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text('{"shape_id": "x"}\n')
        with pytest.raises(ValueError, match="bad trial record"):
            read_trials(str(path))


class TestSummarize:
    def test_two_values(self):
        stats = summarize([2, 4])
        assert stats.mean == 3
        assert stats.sd == pytest.approx(math.sqrt(2), rel=1e-15)

    def test_constant_values(self):
        stats = summarize([5, 5, 5])
        assert stats.mean == 5
        assert stats.sd == 0

    def test_against_two_pass_oracle(self):
        rng = random.Random(41)
        values = [rng.uniform(10, 200) for _ in range(40)]
        stats = summarize(values)
        mean, sd = two_pass_stats(values)
        assert stats.mean == pytest.approx(mean, rel=1e-12)
        assert stats.sd == pytest.approx(sd, rel=1e-12)

    def test_single_value_has_no_sd(self):
        stats = summarize([7.5])
        assert stats.n == 1 and stats.mean == 7.5 and stats.sd is None

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            summarize([])

    def test_permutation_invariant_bitwise(self):
        rng = random.Random(42)
        values = [rng.uniform(0, 100) for _ in range(25)]
        shuffled = values[:]
        rng.shuffle(shuffled)
        assert summarize(values) == summarize(shuffled)


class TestWilcoxon:
    def test_separated_samples(self):
        result = wilcoxon_rank_sum([1, 2], [3, 4])
        assert result.W == 0
        assert result.p_value == 1 / 3
        assert result.method == "exact"

    def test_swapped_samples(self):
        result = wilcoxon_rank_sum([3, 4], [1, 2])
        assert result.W == 4
        assert result.p_value == 1 / 3

    def test_single_values(self):
        result = wilcoxon_rank_sum([1], [2])
        assert result.W == 0
        assert result.p_value == 1.0

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            wilcoxon_rank_sum([], [1])
        with pytest.raises(ValueError):
            wilcoxon_rank_sum([1], [])

    def test_exact_matches_enumeration_for_all_small_rank_patterns(self):
        # Exhaustive over tie-free rank patterns with both sides at most 6.
        for n in range(1, 7):
            for m in range(1, 7):
                for x_ranks in itertools.combinations(range(1, n + m + 1), n):
                    y_ranks = [r for r in range(1, n + m + 1) if r not in x_ranks]
                    result = wilcoxon_rank_sum([float(r) for r in x_ranks],
                                               [float(r) for r in y_ranks])
                    assert result.method == "exact"
                    expected = enumeration_p(x_ranks, n, m)
                    assert result.p_value == pytest.approx(expected, abs=1e-15), (
                        n, m, x_ranks
                    )

    def test_sample_swap_identity(self):
        rng = random.Random(43)
        for _ in range(100):
            n, m = rng.randint(1, 10), rng.randint(1, 10)
            pool = rng.sample(range(1000), n + m)
            x = [float(v) for v in pool[:n]]
            y = [float(v) for v in pool[n:]]
            forward = wilcoxon_rank_sum(x, y)
            backward = wilcoxon_rank_sum(y, x)
            assert forward.W + backward.W == n * m
            assert forward.p_value == pytest.approx(backward.p_value, abs=1e-15)

    def test_shift_invariance(self):
        x = [3.0, 9.0, 14.0]
        y = [1.0, 5.5, 20.0, 22.0]
        base = wilcoxon_rank_sum(x, y)
        shifted = wilcoxon_rank_sum([v + 1000 for v in x], [v + 1000 for v in y])
        assert base.W == shifted.W
        assert base.p_value == shifted.p_value

    def test_ties_fall_back_to_approximation(self):
        result = wilcoxon_rank_sum([1, 2, 2], [2, 3, 4])
        assert result.method == "normal_approx"
        assert 0 <= result.p_value <= 1

    def test_identical_samples_p_one(self):
        result = wilcoxon_rank_sum([5.0, 5.0, 5.0], [5.0, 5.0])
        assert result.method == "normal_approx"
        assert result.p_value == 1.0
        assert result.W == 3.0  # nm/2 under midranks

    def test_large_samples_use_approximation(self):
        x = [float(i) for i in range(11)]
        y = [float(i) + 0.5 for i in range(11)]
        result = wilcoxon_rank_sum(x, y)
        assert result.method == "normal_approx"

    def test_midrank_w_for_identical_lists(self):
        values = [10.0, 20.0, 30.0, 40.0]
        result = wilcoxon_rank_sum(values, list(values))
        assert result.W == len(values) * len(values) / 2
        assert result.p_value == 1.0


class TestErrorFraction:
    def test_counts_wrong_and_timeouts(self):
        trials = (
            [make_record() for _ in range(32)]
            + [make_record(answer="circle", correct=False) for _ in range(4)]
            + [make_record(answer=None, correct=None, confidence=None,
                           timed_out=True, response_time_ms=180_000) for _ in range(4)]
        )
        assert error_fraction(trials) == (8, 40)
        assert render_fraction(8, 40) == "8/40"

    def test_all_correct(self):
        assert error_fraction([make_record()] * 10) == (0, 10)

    def test_all_timed_out(self):
        timeout = make_record(answer=None, correct=None, confidence=None,
                              timed_out=True, response_time_ms=180_000)
        assert error_fraction([timeout] * 5) == (5, 5)

    def test_additive_over_disjoint_lists(self):
        a = [make_record(), make_record(answer="blob", correct=False)]
        b = [make_record(answer=None, correct=None, confidence=None,
                         timed_out=True, response_time_ms=180_000)]
        ea, ta = error_fraction(a)
        eb, tb = error_fraction(b)
        combined = error_fraction(a + b)
        assert combined == (ea + eb, ta + tb)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            error_fraction([])


@pytest.fixture
def spec_square():
    return Shape("square", (Point(0, 0), Point(100, 0), Point(100, 100), Point(0, 100)), 20)


class TestRunTrial:
    def test_correct_answer(self, spec_square):
        record = run_trial(
            spec_square,
            "guidance",
            "unimanual",
            [CursorSample(50, 5, 1000), Answer("square", 6, 30_000)],
        )
        assert record.correct is True
        assert record.timed_out is False
        assert record.response_time_ms == 30_000
        assert record.confidence == 6

    def test_case_insensitive_match(self, spec_square):
        record = run_trial(spec_square, "guidance", "c", [Answer("  SQUARE ", 3, 10)])
        assert record.correct is True
        assert record.answer == "SQUARE"

    def test_wrong_answer(self, spec_square):
        record = run_trial(spec_square, "guidance", "c", [Answer("triangle", 2, 10)])
        assert record.correct is False

    def test_no_answer_times_out(self, spec_square):
        record = run_trial(
            spec_square, "guidance", "c", [CursorSample(1, 1, t) for t in range(0, 5000, 100)]
        )
        assert record.timed_out is True
        assert record.answer is None
        assert record.response_time_ms == 180_000

    def test_cursor_past_limit_times_out(self, spec_square):
        record = run_trial(
            spec_square,
            "guidance",
            "c",
            [CursorSample(1, 1, 200_000), Answer("square", 6, 200_001)],
        )
        assert record.timed_out is True

    def test_answer_past_limit_times_out(self, spec_square):
        record = run_trial(spec_square, "guidance", "c", [Answer("square", 6, 180_001)])
        assert record.timed_out is True

    def test_answer_at_exact_limit_counts(self, spec_square):
        record = run_trial(spec_square, "guidance", "c", [Answer("square", 6, 180_000)])
        assert record.timed_out is False
        assert record.response_time_ms == 180_000

    def test_bad_confidence_is_hard_error(self, spec_square):
        with pytest.raises(ValueError, match="1..7"):
            run_trial(spec_square, "guidance", "c", [Answer("square", 8, 10)])

    def test_pixels_mode_drives_the_raster(self, spec_square):
        runner = TrialRunner(spec_square, "pixels", "c", 180_000)
        runner.feed_cursor(CursorSample(50, 0, 100))
        assert runner.last_frame is not None
        assert any(runner.last_frame.pins)
        runner.feed_answer(Answer("square", 5, 200))
        assert runner.finish().correct is True

    def test_guidance_mode_exposes_tactile(self, spec_square):
        runner = TrialRunner(spec_square, "guidance", "c", 180_000)
        tactile = runner.feed_cursor(CursorSample(50, 5, 100))
        assert tactile is not None
        assert tactile.on_shape is True

    def test_custom_time_limit(self, spec_square):
        record = run_trial(spec_square, "guidance", "c", [], time_limit_ms=5000)
        assert record.timed_out and record.response_time_ms == 5000


class TestRenderReport:
    def _mixed_trials(self, errors, total, rng):
        trials = []
        for i in range(total):
            if i < errors:
                trials.append(make_record(answer="blob", correct=False,
                                          response_time_ms=rng.randint(20_000, 170_000),
                                          confidence=rng.randint(1, 7)))
            else:
                trials.append(make_record(response_time_ms=rng.randint(20_000, 170_000),
                                          confidence=rng.randint(1, 7)))
        return trials

    def test_report_contains_fractions_and_means(self):
        rng = random.Random(44)
        a = self._mixed_trials(4, 40, rng)
        b = self._mixed_trials(8, 40, rng)
        report = render_report("unimanual", a, "bimanual", b)
        assert "errors: 4/40 vs 8/40" in report
        assert "unimanual" in report and "bimanual" in report
        import re

        assert re.search(r"\d+\.\d\ds \(sd=\d+\.\d\ds\)", report)
        assert re.search(r"\d\.\d\d/7 \(sd=\d\.\d\d\)", report)
        assert "W=" in report and "p=" in report

    def test_report_stable_under_trial_permutation(self):
        rng = random.Random(45)
        a = self._mixed_trials(3, 20, rng)
        b = self._mixed_trials(5, 20, rng)
        shuffled_a, shuffled_b = a[:], b[:]
        rng.shuffle(shuffled_a)
        rng.shuffle(shuffled_b)
        assert render_report("A", a, "B", b) == render_report("A", shuffled_a, "B", shuffled_b)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            render_report("A", [], "B", [make_record()])
