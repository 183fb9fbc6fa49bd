"""FastAPI service wrapping the core package.

The service exposes the raw generation endpoint (the same wire protocol
the remote client speaks, so one service can back another's pipeline) and
the full disambiguation pipeline, plus dictionary lookups.
"""

from __future__ import annotations

from dataclasses import dataclass

from fastapi import FastAPI, HTTPException

from ..dictionary import KnowledgeLimits, PolyphoneDictionary
from ..errors import (
    BackendUnavailable,
    FormatError,
    IndexOutOfRange,
    MalformedPinyin,
    SequenceTooLong,
    UnknownCharacter,
)
from ..dataset import parse_marked_sentence
from ..generation.base import GenerationBackend, GenerationRequest
from ..pipeline import PolyphonePipeline
from ..prompting import Sample, PromptStyle, Style, TemplateCatalog, TARGET_MARK, default_catalog
from .schemas import (
    CandidatesResponse,
    GenerateRequest,
    GenerateResponse,
    HealthResponse,
    PredictRequest,
    PredictResponse,
)


@dataclass
class ServiceContext:
    dictionary: PolyphoneDictionary
    backend: GenerationBackend
    catalog: TemplateCatalog | None = None


def create_app(ctx: ServiceContext) -> FastAPI:
    app = FastAPI(title="polyg2p", description="Mandarin polyphone disambiguation service")
    catalog = ctx.catalog or default_catalog()

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(
            status="ok",
            backend=ctx.backend.backend_id,
            dictionary_entries=ctx.dictionary.entry_count,
        )

    @app.post("/generate", response_model=GenerateResponse)
    def generate(request: GenerateRequest) -> GenerateResponse:
        try:
            text = ctx.backend.generate(
                GenerationRequest(
                    prompt_text=request.prompt,
                    max_new_tokens=request.max_new_tokens,
                    greedy=request.greedy,
                )
            )
        except SequenceTooLong as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        except BackendUnavailable as exc:
            raise HTTPException(status_code=502, detail=str(exc))
        return GenerateResponse(text=text)

    @app.post("/predict", response_model=PredictResponse)
    def predict(request: PredictRequest) -> PredictResponse:
        sentence = request.sentence
        index = request.target_index
        if TARGET_MARK in sentence:
            try:
                sentence, index = parse_marked_sentence(sentence)
            except FormatError as exc:
                raise HTTPException(status_code=400, detail=str(exc))
        elif index is None:
            raise HTTPException(status_code=400, detail="no target markers and no target_index")
        try:
            sample = Sample.at(sentence, index)
        except IndexOutOfRange as exc:
            raise HTTPException(status_code=400, detail=str(exc))

        pipeline = PolyphonePipeline(
            dictionary=ctx.dictionary,
            backend=ctx.backend,
            style=PromptStyle(style=Style(request.style), include_knowledge=request.knowledge),
            limits=KnowledgeLimits(request.max_definitions, request.max_phrases),
            catalog=catalog,
            max_new_tokens=request.max_new_tokens,
        )
        try:
            result = pipeline.predict(sample)
        except UnknownCharacter as exc:
            raise HTTPException(status_code=404, detail=f"character not in dictionary: {exc}")
        except MalformedPinyin as exc:
            raise HTTPException(status_code=502, detail=f"uncorrectable output: {exc}")
        except SequenceTooLong as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        except BackendUnavailable as exc:
            raise HTTPException(status_code=502, detail=str(exc))
        return PredictResponse(
            character=sample.target_char,
            pinyin=result.final_pinyin.text,
            provenance=result.provenance,
            distance=result.outcome.distance if result.outcome else None,
            tie_broken=result.outcome.tie_broken if result.outcome else None,
            candidates=[c.text for c in ctx.dictionary.candidates(sample.target_char)],
            raw_text=result.raw_text,
        )

    @app.get("/candidates/{character}", response_model=CandidatesResponse)
    def candidates(character: str) -> CandidatesResponse:
        if character not in ctx.dictionary:
            raise HTTPException(status_code=404, detail=f"character not in dictionary: {character!r}")
        return CandidatesResponse(
            character=character,
            candidates=[c.text for c in ctx.dictionary.candidates(character)],
        )

    return app
