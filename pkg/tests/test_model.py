import pytest
import torch

from polyg2p.errors import SequenceTooLong
from polyg2p.generation import ToyGlm, ToyGlmConfig, span_cross_entropy
from polyg2p.generation.model import SpanExample, collate

from .gradcheck import finite_difference_report

VOCAB = 12
PAD = 0


def tiny_config(**kw):
    defaults = dict(
        vocab_size=VOCAB, n_layers=2, d_model=16, n_heads=2, d_ff=24,
        max_seq_len=24, prefix_len=4, seed=3,
    )
    defaults.update(kw)
    return ToyGlmConfig(**defaults)


def example(context=(5, 6, 7, 8, 4), span_in=(2, 9, 10), span_out=(9, 10, 3)):
    return SpanExample(
        context_ids=tuple(context),
        span_input_ids=tuple(span_in),
        span_target_ids=tuple(span_out),
        mask_index=len(context) - 1,
    )


def test_config_validation():
    with pytest.raises(ValueError):
        tiny_config(d_model=15)
    with pytest.raises(ValueError):
        tiny_config(n_layers=0)
    with pytest.raises(ValueError):
        tiny_config(prefix_len=-1)


def test_logits_shape():
    model = ToyGlm(tiny_config())
    batch = collate([example()], PAD)
    logits = model(batch)
    assert logits.shape == (1, 8, VOCAB)


def test_zeroed_weights_give_identical_rows():
    model = ToyGlm(tiny_config())
    with torch.no_grad():
        for p in model.parameters():
            p.zero_()
        model.output_head.bias.normal_(generator=torch.Generator().manual_seed(0))
    logits = model(collate([example()], PAD))[0]
    for row in logits:
        assert torch.equal(row, model.output_head.bias.detach())


def test_sequence_too_long():
    model = ToyGlm(tiny_config(max_seq_len=6))
    with pytest.raises(SequenceTooLong):
        model(collate([example()], PAD))


def test_seeded_init_is_deterministic():
    a, b = ToyGlm(tiny_config()), ToyGlm(tiny_config())
    for (name, pa), (_, pb) in zip(a.state_dict().items(), b.state_dict().items()):
        assert torch.equal(pa, pb), name


def test_loss_ignores_context_logits():
    model = ToyGlm(tiny_config())
    batch = collate([example()], PAD)
    logits = model(batch)
    loss = span_cross_entropy(logits, batch.targets)
    noise = torch.randn_like(logits) * (batch.targets == -100).unsqueeze(-1)
    assert torch.equal(span_cross_entropy(logits + noise, batch.targets), loss)


def test_span_is_causal():
    model = ToyGlm(tiny_config())
    ex1 = example(span_in=(2, 9, 10))
    ex2 = example(span_in=(2, 9, 11))  # differs at span position 2
    with torch.no_grad():
        l1 = model(collate([ex1], PAD))[0]
        l2 = model(collate([ex2], PAD))[0]
    c = len(ex1.context_ids)
    assert torch.allclose(l1[: c + 2], l2[: c + 2], atol=1e-6)
    assert not torch.allclose(l1[c + 2], l2[c + 2], atol=1e-6)


def test_context_is_bidirectional():
    model = ToyGlm(tiny_config())
    ex1 = example(context=(5, 6, 7, 8, 4))
    ex2 = example(context=(5, 6, 7, 9, 4))  # later context token differs
    with torch.no_grad():
        l1 = model(collate([ex1], PAD))[0]
        l2 = model(collate([ex2], PAD))[0]
    assert not torch.allclose(l1[0], l2[0], atol=1e-6)


def test_context_cannot_see_span():
    model = ToyGlm(tiny_config())
    ex1 = example(span_in=(2, 9, 10))
    ex2 = example(span_in=(2, 11, 6))
    c = len(ex1.context_ids)
    with torch.no_grad():
        l1 = model(collate([ex1], PAD))[0]
        l2 = model(collate([ex2], PAD))[0]
    assert torch.allclose(l1[:c], l2[:c], atol=1e-6)


def test_prefix_visible_to_all_positions():
    model = ToyGlm(tiny_config())
    batch = collate([example()], PAD)
    with torch.no_grad():
        before = model(batch).clone()
        model.blocks[0].prefix_v.add_(1.0)
        after = model(batch)
    assert not torch.allclose(before[0, 0], after[0, 0], atol=1e-6)
    assert not torch.allclose(before[0, -1], after[0, -1], atol=1e-6)


def test_padding_does_not_leak():
    model = ToyGlm(tiny_config())
    short = example()
    long = example(context=(1, 2, 3, 4, 5, 6, 7, 4), span_in=(2, 9, 10, 9), span_out=(9, 10, 9, 3))
    with torch.no_grad():
        alone = model(collate([short], PAD))[0]
        padded = model(collate([short, long], PAD))[0]
    assert torch.allclose(alone, padded[:8], atol=1e-5)


def test_post_norm_variant_runs():
    model = ToyGlm(tiny_config(pre_norm=False))
    logits = model(collate([example()], PAD))
    assert logits.shape == (1, 8, VOCAB)
    assert torch.isfinite(logits).all()


@pytest.mark.slow
def test_gradients_match_finite_differences_small():
    model = ToyGlm(tiny_config(n_layers=1, d_model=8, n_heads=2, d_ff=12, prefix_len=2, max_seq_len=12))
    batch = collate([example()], PAD)
    report = finite_difference_report(model, batch)
    for name, rel in report.items():
        assert rel < 1e-4, f"{name}: rel error {rel}"
