from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from leanpairs.tokenizer import BpeTokenizer

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def reference_tokenizer() -> BpeTokenizer:
    return BpeTokenizer.reference()


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


SAMPLE_LEAN = """\
-- a tiny slice of mined source
theorem vsub_eq_sub {G : Type*} [AddGroup G] (g₁ g₂ : G) : g₁ -ᵥ g₂ = g₁ - g₂ := rfl

lemma zero_add_cancel (n : Nat) : 0 + n = n := by
  induction n with k ih
  simp [Nat.zero_add]

theorem le_of_eq_imp (a b : Nat) (h : a = b) : a <= b := by
  rw [h]

def double (n : Nat) := n + n
"""


@pytest.fixture()
def sample_lean_source() -> str:
    return SAMPLE_LEAN
