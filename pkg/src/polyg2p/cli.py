"""Command-line entry point.

Subcommands: build-dict, predict, train-toy, evaluate, ablate, serve.
Exit codes: 0 success, 1 usage error, 2 data/schema error, 3 backend
error. All randomness flows from --seed so every run is reproducible.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .dataset import DatasetSplit, load_cpp, load_split_dir, parse_marked_sentence, split_dataset
from .dictionary import (
    KnowledgeLimits,
    build_dictionary,
    candidate_count_histogram,
    load_dictionary,
    load_raw_records,
    save_dictionary,
)
from .errors import (
    AnswerTooLong,
    BackendUnavailable,
    EmptyCandidateList,
    EmptyDataset,
    FormatError,
    IndexOutOfRange,
    InvalidIndex,
    MalformedPinyin,
    PolyG2PError,
    SchemaError,
    SequenceTooLong,
    UnknownCharacter,
)
from .evaluation import (
    AblationCondition,
    evaluate,
    format_report_table,
    run_ablation,
    train_majority,
    write_report_records,
)
from .generation import RemoteBackend, ToyBackend, load_checkpoint, save_checkpoint
from .generation.remote import ENV_BACKEND_URL
from .pipeline import PolyphonePipeline
from .prompting import PromptStyle, Sample, Style, TARGET_MARK, default_catalog, load_catalog
from .workflows import ToyTrainSettings, make_pipeline_factory, make_toy_backend

_DATA_ERRORS = (
    SchemaError,
    FormatError,
    MalformedPinyin,
    UnknownCharacter,
    EmptyDataset,
    EmptyCandidateList,
    IndexOutOfRange,
    InvalidIndex,
    SequenceTooLong,
    AnswerTooLong,
)


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; our convention is 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _style_from_args(args) -> PromptStyle:
    return PromptStyle(
        style=Style.MULTIPLE_CHOICE if args.style == "choice" else Style.COMPLETION,
        include_knowledge=args.knowledge == "on",
    )


def _limits_from_args(args) -> KnowledgeLimits:
    return KnowledgeLimits(max_definitions=args.max_definitions, max_phrases=args.max_phrases)


def _catalog_from_args(args):
    return load_catalog(args.templates) if args.templates else default_catalog()


def _settings_from_args(args) -> ToyTrainSettings:
    return ToyTrainSettings(
        n_layers=args.layers,
        d_model=args.d_model,
        n_heads=args.heads,
        d_ff=args.d_ff,
        prefix_len=args.prefix_len,
        max_seq_len=args.max_seq_len,
        seed=args.seed,
        epochs=args.epochs,
        batch_size=args.batch_size,
        lr=args.lr,
        backbone_frozen=args.freeze_backbone,
        max_new_tokens=args.max_new_tokens,
    )


def resolve_backend(selector: str | None, timeout: float = 30.0):
    """Parse ``toy:<ckpt>`` / ``remote:<url>`` / ``remote`` (env URL)."""
    if selector is None:
        if os.environ.get(ENV_BACKEND_URL):
            selector = "remote"
        else:
            raise ValueError(f"no --backend given and {ENV_BACKEND_URL} is unset")
    if selector.startswith("toy:"):
        ckpt = selector[len("toy:") :]
        model, tokenizer = load_checkpoint(ckpt)
        return ToyBackend(model, tokenizer, backend_id=f"toy:{ckpt}")
    if selector == "remote":
        return RemoteBackend(timeout=timeout)
    if selector.startswith("remote:"):
        return RemoteBackend(selector[len("remote:") :], timeout=timeout)
    raise ValueError(f"unknown backend selector {selector!r} (want toy:<ckpt> or remote:<url>)")


def _load_data(data: str, seed: int) -> DatasetSplit:
    path = Path(data)
    if not path.exists():
        raise FormatError(0, f"dataset path does not exist: {data}")
    if path.is_dir():
        return load_split_dir(path)
    return split_dataset(load_cpp(path), seed=seed)


def _require(path: str | None, what: str) -> str:
    if path is None:
        raise ValueError(f"--{what} is required for this command")
    if not Path(path).exists():
        raise FormatError(0, f"{what} path does not exist: {path}")
    return path


def cmd_build_dict(args) -> int:
    records = load_raw_records(_require(args.raw, "raw records"))
    dictionary = build_dictionary(records, provenance=args.raw)
    save_dictionary(dictionary, args.out)
    histogram = candidate_count_histogram(dictionary)
    print(f"wrote {dictionary.entry_count} entries to {args.out}")
    if dictionary.entry_count == 0:
        print("warning: no polyphonic characters found", file=sys.stderr)
    for n, count in histogram.items():
        print(f"  {n} candidates: {count}")
    return 0


def cmd_predict(args) -> int:
    dictionary = load_dictionary(_require(args.dict, "dict"))
    sentence = args.sentence
    index = args.index
    if TARGET_MARK in sentence:
        sentence, index = parse_marked_sentence(sentence)
    elif index is None:
        raise ValueError("sentence has no markers; pass --index")
    sample = Sample.at(sentence, index)
    backend = resolve_backend(args.backend, timeout=args.timeout)
    pipeline = PolyphonePipeline(
        dictionary,
        backend,
        style=_style_from_args(args),
        limits=_limits_from_args(args),
        catalog=_catalog_from_args(args),
        max_new_tokens=args.max_new_tokens,
    )
    result = pipeline.predict(sample)
    print(f"{result.final_pinyin.text}\t{result.provenance}")
    return 0


def cmd_train_toy(args) -> int:
    dictionary = load_dictionary(_require(args.dict, "dict"))
    data_path = Path(_require(args.data, "data"))
    train_samples = load_split_dir(data_path).train if data_path.is_dir() else load_cpp(data_path)
    backend, result = make_toy_backend(
        train_samples,
        dictionary,
        _style_from_args(args),
        settings=_settings_from_args(args),
        limits=_limits_from_args(args),
        catalog=_catalog_from_args(args),
    )
    save_checkpoint(args.out, backend.model, backend.tokenizer)
    print(f"trained on {len(train_samples)} samples, final loss {result.final_loss:.6f}")
    print(f"checkpoint written to {args.out}")
    return 0


def cmd_evaluate(args) -> int:
    dictionary = load_dictionary(_require(args.dict, "dict"))
    split = _load_data(_require(args.data, "data"), args.seed)
    if not split.test:
        raise EmptyDataset("no test samples")
    if args.predictor == "majority":
        if not split.train:
            raise EmptyDataset("majority baseline needs a train split")
        predictor = train_majority(split.train)
        config = {"predictor": "majority", "split_source": split.source, "seed": args.seed}
        condition = "majority"
    else:
        backend = resolve_backend(args.backend, timeout=args.timeout)
        style = _style_from_args(args)
        predictor = PolyphonePipeline(
            dictionary,
            backend,
            style=style,
            limits=_limits_from_args(args),
            catalog=_catalog_from_args(args),
            max_new_tokens=args.max_new_tokens,
        )
        config = {
            "predictor": "pipeline",
            "style": style.style.value,
            "knowledge": style.include_knowledge,
            "backend": backend.backend_id,
            "split_source": split.source,
            "seed": args.seed,
        }
        condition = predictor.predictor_id
    report = evaluate(predictor, split.test, condition=condition, config=config)
    _emit_reports([report], args.out)
    return 0


def cmd_ablate(args) -> int:
    dictionary = load_dictionary(_require(args.dict, "dict"))
    split = _load_data(_require(args.data, "data"), args.seed)
    if not split.train or not split.test:
        raise EmptyDataset("ablation needs train and test splits")
    styles = [s.strip() for s in args.styles.split(",") if s.strip()]
    knowledge_flags = [k.strip() for k in args.knowledge.split(",") if k.strip()]
    ratios = [float(r) for r in args.ratio.split(",") if r.strip()]
    grid = [
        AblationCondition(
            style=PromptStyle(
                style=Style.MULTIPLE_CHOICE if s == "choice" else Style.COMPLETION,
                include_knowledge=k == "on",
            ),
            train_ratio=r,
        )
        for r in ratios
        for s in styles
        for k in knowledge_flags
    ]
    factory = make_pipeline_factory(
        dictionary,
        _settings_from_args(args),
        limits=_limits_from_args(args),
        catalog=_catalog_from_args(args),
    )
    reports = run_ablation(grid, factory, split.train, split.test, seed=args.seed)
    for report in reports:
        report.config["split_source"] = split.source
    _emit_reports(reports, args.out)
    return 0


def _emit_reports(reports, out_dir: str | None) -> None:
    print(format_report_table(reports))
    if out_dir:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        write_report_records(reports, out / "reports.jsonl")
        (out / "reports.txt").write_text(format_report_table(reports) + "\n", encoding="utf-8")
        print(f"reports written to {out}")


def cmd_serve(args) -> int:
    import uvicorn

    from .service import ServiceContext, create_app

    dictionary = load_dictionary(_require(args.dict, "dict"))
    backend = resolve_backend(args.backend, timeout=args.timeout)
    app = create_app(ServiceContext(dictionary=dictionary, backend=backend, catalog=_catalog_from_args(args)))
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def _add_prompt_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--style", choices=("completion", "choice"), default="choice", help="prompt style")
    p.add_argument("--knowledge", choices=("on", "off"), default="on", help="append dictionary knowledge")
    p.add_argument("--templates", help="template catalog path (default: builtin)")
    p.add_argument("--max-definitions", type=int, default=3, help="definitions per candidate in prompts")
    p.add_argument("--max-phrases", type=int, default=3, help="phrases per candidate in prompts")


def _add_backend_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--backend",
        help=f"toy:<checkpoint> or remote:<url>; default remote ${ENV_BACKEND_URL} when set",
    )
    p.add_argument("--timeout", type=float, default=30.0, help="remote backend timeout in seconds")
    p.add_argument("--max-new-tokens", type=int, default=8, help="generation budget per prediction")


def _add_train_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--layers", type=int, default=2)
    p.add_argument("--d-model", type=int, default=64)
    p.add_argument("--heads", type=int, default=4)
    p.add_argument("--d-ff", type=int, default=128)
    p.add_argument("--prefix-len", type=int, default=64)
    p.add_argument("--max-seq-len", type=int, default=None, help="default: sized to the data")
    p.add_argument("--epochs", type=int, default=30)
    p.add_argument("--batch-size", type=int, default=32)
    p.add_argument("--lr", type=float, default=1e-2)
    p.add_argument(
        "--freeze-backbone",
        action="store_true",
        help="train only the per-layer prefix parameters",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="polyg2p", description="Mandarin polyphone disambiguation toolkit")
    sub = parser.add_subparsers(dest="command", metavar="command")

    p = sub.add_parser("build-dict", parents=[], help="aggregate raw records into a dictionary file")
    p.add_argument("raw", help="raw records TSV (char, pinyin, count, pos, defs, phrases)")
    p.add_argument("--out", required=True, help="output dictionary path")
    p.set_defaults(func=cmd_build_dict)

    p = sub.add_parser("predict", help="predict the pinyin of one marked character")
    p.add_argument("sentence", help=f"sentence, optionally with in-band {TARGET_MARK} markers")
    p.add_argument("--index", type=int, help="target character offset (when no markers)")
    p.add_argument("--dict", required=True, help="dictionary file")
    _add_prompt_flags(p)
    _add_backend_flags(p)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("train-toy", help="train the local model on a labeled corpus")
    p.add_argument("--data", required=True, help="corpus file or split directory (train split used)")
    p.add_argument("--dict", required=True)
    p.add_argument("--out", required=True, help="checkpoint output path")
    p.add_argument("--seed", type=int, default=0)
    _add_prompt_flags(p)
    _add_train_flags(p)
    p.add_argument("--max-new-tokens", type=int, default=8)
    p.set_defaults(func=cmd_train_toy)

    p = sub.add_parser("evaluate", help="accuracy of a predictor on the test split")
    p.add_argument("--data", required=True, help="corpus file (seeded 8:1:1 split) or split directory")
    p.add_argument("--dict", required=True)
    p.add_argument("--predictor", choices=("pipeline", "majority"), default="pipeline")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="directory for reports.jsonl / reports.txt")
    _add_prompt_flags(p)
    _add_backend_flags(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("ablate", help="grid of style x knowledge x train-ratio conditions")
    p.add_argument("--data", required=True)
    p.add_argument("--dict", required=True)
    p.add_argument("--ratio", default="1.0", help="comma-separated train ratios, e.g. 0.6,0.8,1.0")
    p.add_argument("--styles", default="completion,choice")
    p.add_argument("--knowledge", default="on,off", help="comma-separated flags, e.g. on,off")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="directory for reports.jsonl / reports.txt")
    p.add_argument("--templates")
    p.add_argument("--max-definitions", type=int, default=3)
    p.add_argument("--max-phrases", type=int, default=3)
    p.add_argument("--max-new-tokens", type=int, default=8)
    _add_train_flags(p)
    p.set_defaults(func=cmd_ablate)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--dict", required=True)
    p.add_argument("--templates")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    _add_backend_flags(p)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "func"):
        parser.print_help()
        return 1
    try:
        return args.func(args)
    except BackendUnavailable as exc:
        print(f"backend error: {exc}", file=sys.stderr)
        return 3
    except _DATA_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
