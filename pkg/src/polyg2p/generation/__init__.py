"""Generation backends: a small trainable span-infilling model and a
remote HTTP client, behind one request/response contract."""

from .base import GenerationBackend, GenerationRequest
from .tokenizer import CharTokenizer
from .positions import PositionPair, encode_positions
from .model import ToyGlm, ToyGlmConfig, span_cross_entropy
from .training import TrainOptions, train
from .decoding import ToyBackend, generate
from .checkpoint import load_checkpoint, save_checkpoint
from .remote import RemoteBackend

__all__ = [
    "GenerationBackend",
    "GenerationRequest",
    "CharTokenizer",
    "PositionPair",
    "encode_positions",
    "ToyGlm",
    "ToyGlmConfig",
    "span_cross_entropy",
    "TrainOptions",
    "train",
    "ToyBackend",
    "generate",
    "save_checkpoint",
    "load_checkpoint",
    "RemoteBackend",
]
