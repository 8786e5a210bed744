from __future__ import annotations

import json

import pytest
from hypothesis import given, strategies as st

from leanpairs.errors import UnbalancedDeclaration

from leanpairs.leanparse import (
    PatternRule,
    PatternTable,
    ascii_fold,
    classify_proof,
    classify_tactic,
    default_table,
    extract_theorems,
    split_tactic_fragments,
)
from leanpairs.records import TacticKind, TheoremRecord

VSUB = (
    "theorem vsub_eq_sub {G : Type*} [AddGroup G] (g₁ g₂ : G) : "
    "g₁ -ᵥ g₂ = g₁ - g₂ := rfl"
)

POSITIVE_LINES = {
    TacticKind.INDUCTION: "induction n with k ih",
    TacticKind.APPLY: "apply mul_comm",
    TacticKind.REWRITE: "rw [mul_comm] at h",
    TacticKind.REFLEXIVITY: "refl",
    TacticKind.CASES: "cases h with h1 h2",
    TacticKind.INTRODUCE: "intro x",
    TacticKind.SIMPLIFICATION: "simp [Nat.add_zero]",
    TacticKind.CONTRADICTION: "contradiction",
    TacticKind.EXACT: "exact h",
    TacticKind.DEFINITION: "def double (n : Nat) := n + n",
}

NEGATIVE_LINES = [
    "reflexivity_lemma",
    "nlinarith",
    "nlinarith [sq_nonneg x]",
    "contradiction_of h",
    "applying the lemma",
    "inductions n with k",
    "rwx [h]",
    "reflexive",
    "rfl_trans h",
    "introspect h",
    "simple [h]",
    "simp",  # needs arguments per the pattern
    "intro",  # needs at least one name
    "cases",
    "exactly h",
    "definition of foo",
    "def missing_assign",
    "theorem foo : a = b",
    "-- induction n with k ih",
    "",
]


class TestClassifyTactic:
    def test_induction_example(self):
        match = classify_tactic("induction n with k ih")
        assert match is not None
        assert match.kind == TacticKind.INDUCTION
        assert match.slots == (("variable", "n"),)

    def test_refl_literal_full_line(self):
        match = classify_tactic("refl")
        assert match is not None
        assert match.kind == TacticKind.REFLEXIVITY
        assert match.slots == ()

    def test_rfl_spelling_also_reflexivity(self):
        match = classify_tactic("rfl")
        assert match is not None
        assert match.kind == TacticKind.REFLEXIVITY

    def test_no_pattern_matches_nlinarith(self):
        assert classify_tactic("nlinarith [sq_nonneg x]") is None

    @pytest.mark.parametrize("kind,line", sorted(POSITIVE_LINES.items()))
    def test_all_ten_positives(self, kind, line):
        match = classify_tactic(line)
        assert match is not None and match.kind == kind

    @pytest.mark.parametrize("line", NEGATIVE_LINES)
    def test_curated_negatives(self, line):
        assert classify_tactic(line) is None

    def test_matching_is_on_trimmed_line(self):
        match = classify_tactic("   exact h  ")
        assert match is not None
        assert match.raw_line == "exact h"

    def test_newline_rejected(self):
        with pytest.raises(ValueError):
            classify_tactic("intro h\nexact h")

    def test_match_rerun_property(self):
        # a returned match must re-match its kind's pattern under the same rules
        table = default_table()
        rules = {r.kind: r for r in table.rules}
        for line in POSITIVE_LINES.values():
            match = classify_tactic(line)
            assert rules[match.kind].matches(match.raw_line)

    def test_first_match_priority_on_custom_overlapping_table(self):
        # same line matches both rules; table order decides the winner
        overlapping = [
            PatternRule(TacticKind.APPLY, r"apply .+", False),
            PatternRule(TacticKind.EXACT, r"apply .+ exact .+", False),
        ]
        table = PatternTable(overlapping)
        assert table.classify("apply foo exact bar").kind == TacticKind.APPLY
        flipped = PatternTable(list(reversed(overlapping)))
        assert flipped.classify("apply foo exact bar").kind == TacticKind.EXACT

    def test_intros_resolves_in_declared_order(self):
        match = classify_tactic("intros h")
        assert match.kind == TacticKind.INTRODUCE
        assert match.slots == (("variable_names", "h"),)

    @given(st.text(alphabet=st.characters(blacklist_characters="\n"), max_size=60))
    def test_first_match_agrees_with_exhaustive_scan(self, line):
        table = default_table()
        kinds = table.matching_kinds(line)
        match = table.classify(line)
        if kinds:
            assert match is not None and match.kind == kinds[0]
        else:
            assert match is None

    def test_definition_slots(self):
        match = classify_tactic("def double (n : Nat) := n + n")
        assert match.kind == TacticKind.DEFINITION
        assert match.slot("function_name") == "double"
        assert match.slot("parameters") == "(n : Nat)"


class TestExtractTheorems:
    def test_vsub_example(self):
        result = extract_theorems(VSUB, "vsub.lean")
        assert len(result.records) == 1
        record = result.records[0]
        assert record.name == "vsub_eq_sub"
        assert record.proof_body == "rfl"
        assert record.statement.startswith("theorem vsub_eq_sub")
        assert ":=" not in record.statement

    def test_empty_input(self):
        assert extract_theorems("", "empty.lean").records == []

    def test_unterminated_header_warned_not_dropped(self):
        source = "\n".join(
            [
                "theorem one : a = a := rfl",
                "theorem broken : this - header : never - terminates",
                "lemma two : b = b := rfl",
                "def three := 3",
            ]
        )
        result = extract_theorems(source, "mix.lean")
        assert [r.name for r in result.records] == ["one", "two", "three"]
        assert len(result.warnings) == 1
        assert isinstance(result.warnings[0], UnbalancedDeclaration)
        assert "mix.lean:2" in str(result.warnings[0])

    def test_keyword_counts(self, sample_lean_source):
        result = extract_theorems(sample_lean_source, "sample.lean")
        assert result.keyword_counts == {"theorem": 2, "lemma": 1, "def": 1}

    def test_records_ordered_by_line(self, sample_lean_source):
        result = extract_theorems(sample_lean_source, "sample.lean")
        starts = [r.line_start for r in result.records]
        assert starts == sorted(starts)

    def test_round_trip_locality(self, sample_lean_source):
        lines = sample_lean_source.split("\n")
        for record in extract_theorems(sample_lean_source, "sample.lean").records:
            window = "\n".join(lines[record.line_start - 1 : record.line_end])
            assert record.statement in window
            if record.proof_body:
                assert record.proof_body in window

    def test_multiline_statement_split_at_toplevel_assign(self):
        source = (
            "theorem nested (h : (a := b) = c) :\n"
            "    foo := by\n"
            "  simp\n"
        )
        result = extract_theorems(source, "nested.lean")
        assert len(result.records) == 1
        record = result.records[0]
        # the := inside parens must not split the header
        assert record.statement.endswith("foo")
        assert record.proof_body == "by\n  simp"

    def test_keyword_inside_brackets_not_a_declaration(self):
        source = "theorem outer : (\n  def x := 1\n) = y := rfl\n"
        result = extract_theorems(source, "inner.lean")
        assert [r.name for r in result.records] == ["outer"]

    def test_determinism_byte_identical(self, sample_lean_source):
        first = [
            json.dumps(r.to_json_dict(), sort_keys=True)
            for r in extract_theorems(sample_lean_source, "s.lean").records
        ]
        second = [
            json.dumps(r.to_json_dict(), sort_keys=True)
            for r in extract_theorems(sample_lean_source, "s.lean").records
        ]
        assert first == second

    def test_statement_contains_declaring_token(self, sample_lean_source):
        for record in extract_theorems(sample_lean_source, "s.lean").records:
            tokens = record.statement.split()
            if record.keyword == "def":
                assert tokens[0] == "def"
            else:
                assert tokens[0] in ("theorem", "lemma")


class TestClassifyProof:
    def _record(self, proof_body: str) -> TheoremRecord:
        return TheoremRecord(
            id="t", name="t", statement="theorem t : a = a",
            proof_body=proof_body, source_file="t.lean", line_start=1, line_end=1,
        )

    def test_two_line_proof(self):
        result = classify_proof(self._record("intro h\nexact h"))
        assert [m.kind for m in result.matches] == [
            TacticKind.INTRODUCE,
            TacticKind.EXACT,
        ]
        assert result.coverage == 1.0

    def test_single_rfl(self):
        result = classify_proof(self._record("rfl"))
        assert [m.kind for m in result.matches] == [TacticKind.REFLEXIVITY]
        assert result.coverage == 1.0

    def test_unmatched_counts_in_coverage(self):
        result = classify_proof(self._record("nlinarith"))
        assert result.matches == []
        assert result.fragments == ["nlinarith"]
        assert result.coverage == 0.0

    def test_semicolon_split_at_depth_zero_only(self):
        assert split_tactic_fragments("intro h; exact h") == ["intro h", "exact h"]
        assert split_tactic_fragments("simp [a; b]") == ["simp [a; b]"]

    def test_leading_by_token_dropped(self):
        assert split_tactic_fragments("by\n  intro h\n  exact h") == [
            "intro h",
            "exact h",
        ]
        assert split_tactic_fragments("by simp [h]") == ["simp [h]"]
        # only the block opener is dropped, not identifiers starting with "by"
        assert split_tactic_fragments("bycase h") == ["bycase h"]


class TestAsciiFold:
    def test_symbol_table(self):
        assert ascii_fold("∀ x, ∃ y") == "for all x, there exists y"
        assert ascii_fold("a ≤ b → b ≠ c") == "a <= b to b != c"

    def test_subscripts_decompose(self):
        assert ascii_fold("g₁ -ᵥ g₂") == "g1 -v g2"

    def test_ascii_passthrough(self):
        assert ascii_fold("plain ascii 123") == "plain ascii 123"
