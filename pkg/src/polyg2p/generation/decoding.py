"""Autoregressive span decoding for the local model."""

from __future__ import annotations

import torch

from ..errors import SequenceTooLong
from .base import GenerationBackend, GenerationRequest
from .model import SpanExample, ToyGlm, collate
from .tokenizer import CharTokenizer


def generate_ids(
    model: ToyGlm,
    tokenizer: CharTokenizer,
    prompt_ids: list[int],
    max_new_tokens: int,
    greedy: bool = True,
    rng: torch.Generator | None = None,
) -> list[int]:
    """Append the mask slot to the prompt and fill the span token by token.

    Stops at EOS or after ``max_new_tokens`` tokens. Greedy decoding takes
    the argmax and is fully deterministic; otherwise tokens are sampled
    from the softmax using ``rng``.
    """
    context = tuple(prompt_ids) + (tokenizer.mask_id,)
    c = len(context)
    if c + 1 + max_new_tokens > model.config.max_seq_len:
        raise SequenceTooLong(
            f"prompt of {len(prompt_ids)} tokens + {max_new_tokens} new tokens "
            f"does not fit max_seq_len {model.config.max_seq_len}"
        )
    span: list[int] = [tokenizer.bos_id]
    generated: list[int] = []
    model.eval()
    with torch.no_grad():
        for _ in range(max_new_tokens):
            example = SpanExample(
                context_ids=context,
                span_input_ids=tuple(span),
                span_target_ids=tuple([0] * len(span)),  # unused at decode time
                mask_index=c - 1,
            )
            batch = collate([example], tokenizer.pad_id)
            logits = model(batch)[0, c + len(span) - 1]
            if greedy:
                next_id = int(torch.argmax(logits))
            else:
                probs = torch.softmax(logits.to(torch.float32), dim=-1)
                next_id = int(torch.multinomial(probs, 1, generator=rng))
            if next_id == tokenizer.eos_id:
                break
            generated.append(next_id)
            span.append(next_id)
    return generated


class ToyBackend:
    """Local model behind the shared backend contract."""

    def __init__(self, model: ToyGlm, tokenizer: CharTokenizer, backend_id: str = "toy"):
        self.model = model
        self.tokenizer = tokenizer
        self.backend_id = backend_id
        self._sample_rng = torch.Generator().manual_seed(model.config.seed)

    def generate(self, request: GenerationRequest) -> str:
        prompt_ids = self.tokenizer.tokenize(request.prompt_text)
        ids = generate_ids(
            self.model,
            self.tokenizer,
            prompt_ids,
            max_new_tokens=request.max_new_tokens,
            greedy=request.greedy,
            rng=None if request.greedy else self._sample_rng,
        )
        return self.tokenizer.detokenize(ids)


def generate(backend: GenerationBackend, request: GenerationRequest) -> str:
    """Run one generation request against any backend."""
    return backend.generate(request)
