"""Backend contract shared by the local model and the wire client."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Protocol, runtime_checkable


@dataclass(frozen=True)
class GenerationRequest:
    prompt_text: str
    max_new_tokens: int = 8
    greedy: bool = True

    def __post_init__(self):
        if self.max_new_tokens < 1:
            raise ValueError("max_new_tokens must be >= 1")


@runtime_checkable
class GenerationBackend(Protocol):
    """Anything that can turn a prompt into generated text."""

    backend_id: str

    def generate(self, request: GenerationRequest) -> str:
        ...
