"""Pydantic request/response models for the HTTP service."""

from __future__ import annotations

from pydantic import BaseModel, Field


class GenerateRequest(BaseModel):
    prompt: str
    max_new_tokens: int = Field(default=8, ge=1)
    greedy: bool = True


class GenerateResponse(BaseModel):
    text: str


class PredictRequest(BaseModel):
    sentence: str = Field(..., description="Sentence; may carry in-band U+2582 markers.")
    target_index: int | None = Field(
        default=None, description="Character offset of the polyphone; omit when markers are in-band."
    )
    style: str = Field(default="choice", pattern="^(completion|choice)$")
    knowledge: bool = True
    max_definitions: int = Field(default=3, ge=0)
    max_phrases: int = Field(default=3, ge=0)
    max_new_tokens: int = Field(default=8, ge=1)


class PredictResponse(BaseModel):
    character: str
    pinyin: str
    provenance: str = Field(..., description="valid | corrected | uncorrected")
    distance: int | None = None
    tie_broken: bool | None = None
    candidates: list[str]
    raw_text: str


class CandidatesResponse(BaseModel):
    character: str
    candidates: list[str]


class HealthResponse(BaseModel):
    status: str
    backend: str
    dictionary_entries: int
