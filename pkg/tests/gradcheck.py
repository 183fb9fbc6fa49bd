"""Central finite-difference gradient verification at float64."""

import torch

from polyg2p.generation import span_cross_entropy


def finite_difference_report(model, batch, h=1e-5, atol=1e-8):
    """Max relative error between autograd and central differences,
    per parameter tensor. Elements where both sides are ~0 pass."""
    model.double()
    model.zero_grad()
    loss = span_cross_entropy(model(batch), batch.targets)
    loss.backward()

    def loss_value() -> float:
        with torch.no_grad():
            return float(span_cross_entropy(model(batch), batch.targets))

    report = {}
    for name, param in model.named_parameters():
        analytic = param.grad.detach().clone().view(-1)
        flat = param.data.view(-1)
        worst = 0.0
        for i in range(flat.numel()):
            original = float(flat[i])
            flat[i] = original + h
            plus = loss_value()
            flat[i] = original - h
            minus = loss_value()
            flat[i] = original
            fd = (plus - minus) / (2 * h)
            a = float(analytic[i])
            diff = abs(a - fd)
            if diff <= atol:
                continue
            worst = max(worst, diff / max(abs(a), abs(fd)))
        report[name] = worst
    return report
