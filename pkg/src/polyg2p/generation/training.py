"""Training loop for the span-infilling model.

Batches are right-padded to the batch maximum, the loss is cross-entropy
over answer-span tokens only, and the optimizer is AdamW (decoupled weight
decay). With the backbone frozen, only the per-layer prefix key/value
matrices receive updates; everything else stays bit-identical.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

import torch

from ..errors import AnswerTooLong, EmptyDataset
from .model import Batch, SpanExample, ToyGlm, collate, span_cross_entropy
from .tokenizer import CharTokenizer


@dataclass
class TrainOptions:
    lr: float = 1e-2
    batch_size: int = 32
    epochs: int = 10
    backbone_frozen: bool = True
    weight_decay: float = 0.01
    shuffle: bool = True
    seed: int = 0


@dataclass
class TrainResult:
    loss_curve: list[float] = field(default_factory=list)

    @property
    def final_loss(self) -> float:
        return self.loss_curve[-1] if self.loss_curve else float("nan")


def make_span_example(
    prompt_ids: Sequence[int], answer_ids: Sequence[int], tokenizer: CharTokenizer
) -> SpanExample:
    """Context is the prompt plus the mask slot; the span starts with BOS."""
    context = tuple(prompt_ids) + (tokenizer.mask_id,)
    return SpanExample(
        context_ids=context,
        span_input_ids=(tokenizer.bos_id, *answer_ids),
        span_target_ids=(*answer_ids, tokenizer.eos_id),
        mask_index=len(context) - 1,
    )


def train(
    model: ToyGlm,
    tokenizer: CharTokenizer,
    dataset: Sequence[tuple[Sequence[int], Sequence[int]]],
    options: TrainOptions | None = None,
) -> TrainResult:
    """Fit the model on (prompt ids, answer ids) pairs; mutates in place.

    Deterministic for a fixed seed: example order, batching and parameter
    updates are all driven by ``options.seed``.
    """
    options = options or TrainOptions()
    if not dataset:
        raise EmptyDataset("training needs at least one example")
    if options.batch_size < 1:
        raise ValueError("batch_size must be >= 1")

    examples = []
    for prompt_ids, answer_ids in dataset:
        total = len(prompt_ids) + 2 + len(answer_ids)
        if total > model.config.max_seq_len:
            raise AnswerTooLong(
                f"prompt+answer of {total} tokens exceeds max_seq_len {model.config.max_seq_len}"
            )
        examples.append(make_span_example(prompt_ids, answer_ids, tokenizer))

    for p in model.parameters():
        p.requires_grad_(True)
    if options.backbone_frozen:
        for p in model.backbone_parameters():
            p.requires_grad_(False)
    trainable = [p for p in model.parameters() if p.requires_grad]
    optimizer = torch.optim.AdamW(trainable, lr=options.lr, weight_decay=options.weight_decay)

    order_rng = random.Random(options.seed)
    result = TrainResult()
    model.train()
    for _ in range(options.epochs):
        order = list(range(len(examples)))
        if options.shuffle:
            order_rng.shuffle(order)
        epoch_losses = []
        for start in range(0, len(order), options.batch_size):
            chunk = [examples[i] for i in order[start : start + options.batch_size]]
            batch = collate(chunk, tokenizer.pad_id)
            logits = model(batch)
            loss = span_cross_entropy(logits, batch.targets)
            optimizer.zero_grad()
            loss.backward()
            optimizer.step()
            epoch_losses.append(float(loss.detach()))
        result.loss_curve.append(sum(epoch_losses) / len(epoch_losses))
    model.eval()
    return result
