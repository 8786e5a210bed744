"""Teacher prompt construction and response parsing."""

from .builder import (
    FORMAT_REMINDER,
    FULL_PROOF_INSTRUCTION,
    FULL_PROOF_SHOT_COUNT,
    GOAL_CLOSED_MARKER,
    PromptSpec,
    TacticPrompt,
    build_full_proof_prompt,
    build_tactic_prompt,
    load_default_shots,
    load_shots_file,
    render_shot_list,
)
from .tuples import (
    TeacherResponse,
    parse_teacher_response,
    render_pair,
    render_tuple_element,
)

__all__ = [
    "FORMAT_REMINDER",
    "FULL_PROOF_INSTRUCTION",
    "FULL_PROOF_SHOT_COUNT",
    "GOAL_CLOSED_MARKER",
    "PromptSpec",
    "TacticPrompt",
    "build_full_proof_prompt",
    "build_tactic_prompt",
    "load_default_shots",
    "load_shots_file",
    "render_shot_list",
    "TeacherResponse",
    "parse_teacher_response",
    "render_pair",
    "render_tuple_element",
]
