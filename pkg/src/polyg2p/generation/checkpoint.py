"""Versioned checkpoint container: config + tokenizer + tensors."""

from __future__ import annotations

from pathlib import Path

import torch

from .model import ToyGlm, ToyGlmConfig
from .tokenizer import CharTokenizer

FORMAT_VERSION = 1


def save_checkpoint(path: str | Path, model: ToyGlm, tokenizer: CharTokenizer) -> None:
    payload = {
        "format_version": FORMAT_VERSION,
        "config": model.config.to_json(),
        "tokenizer": tokenizer.to_json(),
        "state_dict": model.state_dict(),
    }
    torch.save(payload, str(path))


def load_checkpoint(path: str | Path) -> tuple[ToyGlm, CharTokenizer]:
    payload = torch.load(str(path), map_location="cpu", weights_only=True)
    version = payload.get("format_version")
    if version != FORMAT_VERSION:
        raise ValueError(f"checkpoint format {version!r} not supported (expected {FORMAT_VERSION})")
    config = ToyGlmConfig.from_json(payload["config"])
    model = ToyGlm(config)
    model.load_state_dict(payload["state_dict"])
    model.eval()
    tokenizer = CharTokenizer.from_json(payload["tokenizer"])
    return model, tokenizer
