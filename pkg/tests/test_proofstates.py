from __future__ import annotations

import json

import pytest
from hypothesis import given, strategies as st

from leanpairs.errors import EmptyInformalError, SchemaError
from leanpairs.proofstates import (
    align_tactics_to_lines,
    is_goal_closed,
    load_states,
    normalize_goal_state,
    split_sentences,
)
from leanpairs.records import ProofStateTuple


def _step(theorem_id: str, index: int, before: str, tactic: str, after: str) -> dict:
    return {
        "theorem_id": theorem_id,
        "index": index,
        "state_before": before,
        "tactic": tactic,
        "state_after": after,
    }


def _chain(theorem_id: str, n: int) -> list[dict]:
    rows = []
    for i in range(n):
        rows.append(
            _step(theorem_id, i, f"state {i}", f"tac {i}",
                  f"state {i + 1}" if i + 1 < n else "goals accomplished")
        )
    return rows


def _write(tmp_path, rows) -> str:
    path = tmp_path / "states.jsonl"
    path.write_text("".join(json.dumps(r) + "\n" for r in rows), encoding="utf-8")
    return str(path)


def _tuples(n: int, theorem_id: str = "thm") -> list[ProofStateTuple]:
    return [
        ProofStateTuple(theorem_id, i, f"s{i}", f"t{i}", f"s{i + 1}") for i in range(n)
    ]


class TestLoadStates:
    def test_two_theorems_three_tactics_each(self, tmp_path):
        path = _write(tmp_path, _chain("a", 3) + _chain("b", 3))
        loaded = load_states(path)
        assert len(loaded.tuples) == 6
        assert loaded.warnings == []
        assert set(loaded.by_theorem()) == {"a", "b"}

    def test_chain_break_warned(self, tmp_path):
        rows = _chain("a", 3)
        rows[0]["state_after"] = "mutated"
        loaded = load_states(_write(tmp_path, rows))
        assert len(loaded.warnings) == 1
        assert "chain break" in loaded.warnings[0]

    def test_warnings_do_not_alter_data(self, tmp_path):
        rows = _chain("a", 3)
        rows[0]["state_after"] = "mutated"
        loaded = load_states(_write(tmp_path, rows))
        assert loaded.tuples[0].state_after == "mutated"

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.jsonl"
        path.write_text("", encoding="utf-8")
        assert load_states(path).tuples == []

    def test_missing_field_reports_line_number(self, tmp_path):
        rows = _chain("a", 2)
        del rows[1]["tactic"]
        with pytest.raises(SchemaError) as err:
            load_states(_write(tmp_path, rows))
        assert err.value.line == 2
        assert "tactic" in str(err.value)

    def test_wrong_type_reports_line_number(self, tmp_path):
        rows = _chain("a", 1)
        rows[0]["index"] = "zero"
        with pytest.raises(SchemaError) as err:
            load_states(_write(tmp_path, rows))
        assert err.value.line == 1

    def test_noncontiguous_indices_warned(self, tmp_path):
        rows = [_step("a", 0, "s0", "t0", "s1"), _step("a", 2, "s1", "t2", "s2")]
        loaded = load_states(_write(tmp_path, rows))
        assert any("contiguous" in w for w in loaded.warnings)


class TestGoalClosedMarker:
    def test_normalization(self):
        assert normalize_goal_state("goals accomplished") == "goals accomplished"
        assert normalize_goal_state("") == "goals accomplished"
        assert normalize_goal_state("  Goals Accomplished ") == "goals accomplished"
        assert normalize_goal_state("⊢ x = x") == "⊢ x = x"

    def test_predicate(self):
        assert is_goal_closed("")
        assert is_goal_closed("goals accomplished")
        assert not is_goal_closed("⊢ x")


class TestSentenceSplitting:
    def test_basic(self):
        assert split_sentences("One. Two! Three?") == ["One.", "Two!", "Three?"]

    def test_math_mode_periods_ignored(self):
        text = "We use $f(x) = 2. 5x$ here. Then done."
        assert split_sentences(text) == ["We use $f(x) = 2. 5x$ here.", "Then done."]

    def test_trailing_fragment_kept(self):
        assert split_sentences("Done. trailing words") == ["Done.", "trailing words"]

    def test_empty(self):
        assert split_sentences("   ") == []


class TestAlignment:
    def test_numbered_preferred(self):
        aligned = align_tactics_to_lines(_tuples(3), "1. intro x. 2. simplify. 3. done.")
        assert [a.alignment_method for a in aligned] == ["numbered"] * 3
        assert [a.informal_line for a in aligned] == ["intro x.", "simplify.", "done."]

    def test_numbered_on_separate_lines(self):
        aligned = align_tactics_to_lines(_tuples(2), "1. First step.\n2. Second step.")
        assert [a.informal_line for a in aligned] == ["First step.", "Second step."]

    def test_proportional_two_tactics_four_sentences(self):
        aligned = align_tactics_to_lines(_tuples(2), "s0. s1. s2. s3.")
        assert [a.alignment_method for a in aligned] == ["proportional"] * 2
        assert [a.informal_line for a in aligned] == ["s0.", "s2."]

    def test_single_pair(self):
        aligned = align_tactics_to_lines(_tuples(1), "Only sentence.")
        assert aligned[0].informal_line == "Only sentence."

    def test_mismatched_numbering_falls_back(self):
        # numbers 1 and 3 with two tactics: not a 1..2 sequence
        aligned = align_tactics_to_lines(_tuples(2), "1. one. 3. three.")
        assert all(a.alignment_method == "proportional" for a in aligned)

    def test_empty_informal_raises(self):
        with pytest.raises(EmptyInformalError):
            align_tactics_to_lines(_tuples(2), "   ")

    def test_no_tuples_empty_result(self):
        assert align_tactics_to_lines([], "whatever.") == []

    @given(st.integers(1, 30), st.integers(1, 30))
    def test_totality_and_monotonicity(self, n_tactics, n_sentences):
        informal = " ".join(f"Sentence number {i}." for i in range(n_sentences))
        aligned = align_tactics_to_lines(_tuples(n_tactics), informal)
        assert len(aligned) == n_tactics
        sentences = split_sentences(informal)
        indices = [sentences.index(a.informal_line) for a in aligned]
        assert indices == sorted(indices)

    def test_output_json_shape(self):
        aligned = align_tactics_to_lines(_tuples(1), "One.")
        row = aligned[0].to_json_dict()
        assert set(row) == {
            "theorem_id",
            "index",
            "state_before",
            "tactic",
            "state_after",
            "informal_line",
            "alignment_method",
        }
