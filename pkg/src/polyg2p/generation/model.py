"""A desk-scale decoder-only span-infilling model.

The architecture follows the blank-infilling family of decoder models:
normalization is applied to each block's input with the residual kept on
the raw stream (pre-norm; a config switch restores post-norm for A/B
runs), feed-forward activations are ReLU, a single linear layer produces
output-token logits, and every token carries the two position ids from
``encode_positions``. Per-layer prefix key/value matrices are prepended to
the attention keys and values of every layer: all positions may attend to
them, they never attend to anything.

Attention is bidirectional inside the context and causal inside the
answer span, which may only look back at the context and earlier span
tokens.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import torch
from torch import nn

from ..errors import SequenceTooLong
from .positions import encode_positions


@dataclass
class ToyGlmConfig:
    vocab_size: int
    n_layers: int = 2
    d_model: int = 64
    n_heads: int = 4
    d_ff: int = 128
    max_seq_len: int = 256
    prefix_len: int = 64
    seed: int = 0
    pre_norm: bool = True  # False re-orders to post-norm for comparison runs

    def __post_init__(self):
        if min(self.vocab_size, self.n_layers, self.d_model, self.n_heads, self.d_ff, self.max_seq_len) < 1:
            raise ValueError("all model dimensions must be positive")
        if self.prefix_len < 0:
            raise ValueError("prefix_len must be >= 0")
        if self.d_model % self.n_heads != 0:
            raise ValueError(f"d_model {self.d_model} not divisible by n_heads {self.n_heads}")

    def to_json(self) -> dict:
        return {
            "vocab_size": self.vocab_size,
            "n_layers": self.n_layers,
            "d_model": self.d_model,
            "n_heads": self.n_heads,
            "d_ff": self.d_ff,
            "max_seq_len": self.max_seq_len,
            "prefix_len": self.prefix_len,
            "seed": self.seed,
            "pre_norm": self.pre_norm,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ToyGlmConfig":
        return cls(**obj)


@dataclass(frozen=True)
class SpanExample:
    """One training/decode item: context (with the mask slot) plus span.

    ``span_input_ids`` are the teacher-forcing inputs (span-start token
    followed by the answer so far); ``span_target_ids`` are the answer
    tokens followed by the end token. Both have equal length.
    """

    context_ids: tuple[int, ...]
    span_input_ids: tuple[int, ...]
    span_target_ids: tuple[int, ...]
    mask_index: int

    def __post_init__(self):
        if len(self.span_input_ids) != len(self.span_target_ids):
            raise ValueError("span inputs and targets must align")
        if not 0 <= self.mask_index < len(self.context_ids):
            raise ValueError("mask_index outside context")


@dataclass
class Batch:
    ids: torch.Tensor        # (B, L) long
    pos1: torch.Tensor       # (B, L) long
    pos2: torch.Tensor       # (B, L) long
    allowed: torch.Tensor    # (B, L, L) bool, attention rule over non-prefix keys
    targets: torch.Tensor    # (B, L) long, -100 outside the loss span
    n_span_tokens: int


def collate(examples: Sequence[SpanExample], pad_id: int) -> Batch:
    """Right-pad a batch to its longest sequence and build masks."""
    lengths = [len(e.context_ids) + len(e.span_input_ids) for e in examples]
    max_len = max(lengths)
    bsz = len(examples)

    ids = torch.full((bsz, max_len), pad_id, dtype=torch.long)
    pos1 = torch.zeros((bsz, max_len), dtype=torch.long)
    pos2 = torch.zeros((bsz, max_len), dtype=torch.long)
    targets = torch.full((bsz, max_len), -100, dtype=torch.long)
    allowed = torch.zeros((bsz, max_len, max_len), dtype=torch.bool)

    for b, ex in enumerate(examples):
        c, s = len(ex.context_ids), len(ex.span_input_ids)
        seq = list(ex.context_ids) + list(ex.span_input_ids)
        ids[b, : c + s] = torch.tensor(seq, dtype=torch.long)
        pairs = encode_positions(c, ex.mask_index, s)
        pos1[b, : c + s] = torch.tensor([p.pos1 for p in pairs], dtype=torch.long)
        pos2[b, : c + s] = torch.tensor([p.pos2 for p in pairs], dtype=torch.long)
        targets[b, c : c + s] = torch.tensor(ex.span_target_ids, dtype=torch.long)

        idx = torch.arange(max_len)
        is_ctx = idx < c
        is_span = (idx >= c) & (idx < c + s)
        span_pos = torch.clamp(idx - c + 1, min=0)
        ctx_q = is_ctx[:, None] & is_ctx[None, :]
        span_q = is_span[:, None] & (
            is_ctx[None, :] | (is_span[None, :] & (span_pos[None, :] <= span_pos[:, None]))
        )
        allowed[b] = ctx_q | span_q
        # padded queries attend to themselves so their softmax stays finite
        pad_rows = idx >= c + s
        allowed[b, pad_rows, pad_rows] = True

    n_span = int((targets != -100).sum())
    return Batch(ids=ids, pos1=pos1, pos2=pos2, allowed=allowed, targets=targets, n_span_tokens=n_span)


class _Block(nn.Module):
    def __init__(self, cfg: ToyGlmConfig):
        super().__init__()
        self.n_heads = cfg.n_heads
        self.head_dim = cfg.d_model // cfg.n_heads
        self.ln_attn = nn.LayerNorm(cfg.d_model)
        self.ln_ffn = nn.LayerNorm(cfg.d_model)
        self.qkv = nn.Linear(cfg.d_model, 3 * cfg.d_model)
        self.attn_out = nn.Linear(cfg.d_model, cfg.d_model)
        self.ffn_in = nn.Linear(cfg.d_model, cfg.d_ff)
        self.ffn_out = nn.Linear(cfg.d_ff, cfg.d_model)
        self.prefix_k = nn.Parameter(torch.empty(cfg.prefix_len, cfg.d_model))
        self.prefix_v = nn.Parameter(torch.empty(cfg.prefix_len, cfg.d_model))
        self.pre_norm = cfg.pre_norm

    def _attend(self, x: torch.Tensor, allowed: torch.Tensor) -> torch.Tensor:
        bsz, seq, d = x.shape
        q, k, v = self.qkv(x).chunk(3, dim=-1)

        def to_heads(t: torch.Tensor) -> torch.Tensor:
            return t.view(bsz, -1, self.n_heads, self.head_dim).transpose(1, 2)

        q = to_heads(q)
        pk = self.prefix_k.to(x.dtype).view(1, -1, self.n_heads, self.head_dim)
        pv = self.prefix_v.to(x.dtype).view(1, -1, self.n_heads, self.head_dim)
        k = torch.cat([pk.expand(bsz, -1, -1, -1).transpose(1, 2), to_heads(k)], dim=2)
        v = torch.cat([pv.expand(bsz, -1, -1, -1).transpose(1, 2), to_heads(v)], dim=2)

        scores = q @ k.transpose(-1, -2) / math.sqrt(self.head_dim)
        n_prefix = self.prefix_k.shape[0]
        full_allowed = torch.cat(
            [torch.ones(bsz, seq, n_prefix, dtype=torch.bool, device=x.device), allowed], dim=-1
        )
        scores = scores.masked_fill(~full_allowed[:, None, :, :], float("-inf"))
        weights = torch.softmax(scores, dim=-1)
        out = (weights @ v).transpose(1, 2).reshape(bsz, seq, d)
        return self.attn_out(out)

    def forward(self, x: torch.Tensor, allowed: torch.Tensor) -> torch.Tensor:
        if self.pre_norm:
            x = x + self._attend(self.ln_attn(x), allowed)
            x = x + self.ffn_out(torch.relu(self.ffn_in(self.ln_ffn(x))))
        else:
            x = self.ln_attn(x + self._attend(x, allowed))
            x = self.ln_ffn(x + self.ffn_out(torch.relu(self.ffn_in(x))))
        return x


class ToyGlm(nn.Module):
    def __init__(self, config: ToyGlmConfig):
        super().__init__()
        torch.manual_seed(config.seed)
        self.config = config
        self.token_embedding = nn.Embedding(config.vocab_size, config.d_model)
        self.pos1_embedding = nn.Embedding(config.max_seq_len, config.d_model)
        self.pos2_embedding = nn.Embedding(config.max_seq_len + 1, config.d_model)
        self.blocks = nn.ModuleList(_Block(config) for _ in range(config.n_layers))
        self.output_head = nn.Linear(config.d_model, config.vocab_size)
        self._init_weights()

    def _init_weights(self):
        for module in self.modules():
            if isinstance(module, (nn.Linear, nn.Embedding)):
                nn.init.normal_(module.weight, mean=0.0, std=0.02)
                if isinstance(module, nn.Linear) and module.bias is not None:
                    nn.init.zeros_(module.bias)
        for block in self.blocks:
            nn.init.normal_(block.prefix_k, mean=0.0, std=0.02)
            nn.init.normal_(block.prefix_v, mean=0.0, std=0.02)

    def prefix_parameters(self) -> list[nn.Parameter]:
        return [p for name, p in self.named_parameters() if "prefix_" in name]

    def backbone_parameters(self) -> list[nn.Parameter]:
        return [p for name, p in self.named_parameters() if "prefix_" not in name]

    def forward(self, batch: Batch) -> torch.Tensor:
        """Logits of shape (B, L, vocab_size)."""
        seq_len = batch.ids.shape[1]
        if seq_len > self.config.max_seq_len:
            raise SequenceTooLong(f"sequence of {seq_len} exceeds max_seq_len {self.config.max_seq_len}")
        x = (
            self.token_embedding(batch.ids)
            + self.pos1_embedding(batch.pos1)
            + self.pos2_embedding(batch.pos2)
        )
        for block in self.blocks:
            x = block(x, batch.allowed)
        return self.output_head(x)


def span_cross_entropy(logits: torch.Tensor, targets: torch.Tensor) -> torch.Tensor:
    """Mean cross-entropy over answer-span positions only.

    ``targets`` uses -100 everywhere outside the span, so context and
    padding never contribute to the loss.
    """
    return nn.functional.cross_entropy(
        logits.reshape(-1, logits.shape[-1]), targets.reshape(-1), ignore_index=-100
    )
