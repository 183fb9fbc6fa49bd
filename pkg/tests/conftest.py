from pathlib import Path

import pytest

from polyg2p import PromptStyle, Sample, Style, load_dictionary, parse_pinyin

DATA = Path(__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden"

ALL_STYLES = [
    PromptStyle(style=Style.MULTIPLE_CHOICE, include_knowledge=True),
    PromptStyle(style=Style.MULTIPLE_CHOICE, include_knowledge=False),
    PromptStyle(style=Style.COMPLETION, include_knowledge=True),
    PromptStyle(style=Style.COMPLETION, include_knowledge=False),
]

STYLE_GOLDEN_NAMES = {
    (Style.MULTIPLE_CHOICE, True): "choice_knowledge",
    (Style.MULTIPLE_CHOICE, False): "choice_plain",
    (Style.COMPLETION, True): "completion_knowledge",
    (Style.COMPLETION, False): "completion_plain",
}


@pytest.fixture(scope="session")
def fixture_dict():
    return load_dictionary(str(DATA / "fixture_dict.jsonl"))


@pytest.fixture(scope="session")
def hong_sample():
    """The unseen-character showcase sentence with 红 marked."""
    return Sample.at("农夫释耒，红女下机", 5, gold_pinyin=parse_pinyin("gong1"))


class EchoBackend:
    """Backend stub that replies with canned text."""

    def __init__(self, text="gong1", backend_id="stub"):
        self.text = text
        self.backend_id = backend_id
        self.requests = []

    def generate(self, request):
        self.requests.append(request)
        return self.text


@pytest.fixture
def echo_backend():
    return EchoBackend()
