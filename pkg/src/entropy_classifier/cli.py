"""Command-line entry point.

Commands: train, calibrate, score, evaluate, exp1, exp2, verify-tables.
Results go to --output (default stdout) as line-oriented records with floats
at 17 significant digits; diagnostics and human-readable tables go to stderr.
Exit codes: 0 success, 1 validation error, 2 I/O error.

An optional --config file (same key-value line format as model files) can
supply defaults for scalar options; explicit flags always win. The
environment variable ENTROPY_CLASSIFIER_THREADS (0 = auto) caps worker
parallelism; the current pipelines are sequential, so any cap is honored.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from .background import train
from .calibration import calibrate_fpr, measure_fpr
from .errors import InputOutputError, ToolError, ValidationError
from .experiments import (
    CategorySpec,
    ExperimentConfig,
    bundled_golden_paths,
    render_records,
    render_table,
    render_table_report,
    run_experiment1,
    run_experiment2,
    verify_table,
)
from .glossary import load_glossary
from .logreg import LrParams
from .model import format_float, load_model, rewrite_bias_line, save_model, set_bias_direct
from .scoring import score_document
from .stats import recall
from .text import load_corpus

_CONFIG_KEYS = {
    "k": int,
    "target_fpr": float,
    "format": str,
    "l2": float,
    "epochs": int,
    "learning_rate": float,
}


@dataclass(frozen=True)
class RunConfig:
    """One fully resolved invocation."""

    command: str
    threads: int
    k: int = 100
    target_fpr: float = 0.0005
    bias: float | None = None
    explain: bool = False
    format: str = "auto"
    output: str | None = None
    glossary: str | None = None
    model: str | None = None
    background: str | None = None
    input: str | None = None
    positives: str | None = None
    negatives: str | None = None
    out: str | None = None
    category: str | None = None
    categories: tuple[tuple[str, ...], ...] = ()
    tables: tuple[str, ...] = ()
    l2: float = 1e-4
    epochs: int = 500
    learning_rate: float = 0.5


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad usage; route through the package's
    # validation path instead so missing flags map to exit code 1.
    def error(self, message):
        raise ValidationError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="entropy-classifier", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, output=True):
        p.add_argument("--config", help="key-value file supplying option defaults")
        p.add_argument("--format", choices=["auto", "directory", "line-delimited"],
                       default=None, help="corpus layout (default: auto-detect)")
        if output:
            p.add_argument("--output", "-o", default=None,
                           help="write results here instead of stdout")

    p = sub.add_parser("train", help="fit a background model for one glossary")
    p.add_argument("--glossary", required=True)
    p.add_argument("--background", required=True, help="background corpus path")
    p.add_argument("--out", required=True, help="model file to write")
    p.add_argument("--k", type=int, default=None, help="length regularizer (default 100)")
    p.add_argument("--category", default=None,
                   help="category name (default: glossary file stem)")
    common(p, output=False)

    p = sub.add_parser("calibrate", help="set the model bias (FPR target or direct)")
    p.add_argument("--model", required=True)
    p.add_argument("--glossary", default=None)
    p.add_argument("--negatives", default=None, help="negative corpus path")
    p.add_argument("--target-fpr", type=float, default=None, dest="target_fpr")
    p.add_argument("--bias", type=float, default=None,
                   help="set the bias directly instead of calibrating")
    common(p)

    p = sub.add_parser("score", help="score every document in a corpus")
    p.add_argument("--model", required=True)
    p.add_argument("--glossary", required=True)
    p.add_argument("--input", required=True, help="corpus to score")
    p.add_argument("--explain", action="store_true",
                   help="append per-keyword contributions to each record")
    common(p)

    p = sub.add_parser("evaluate", help="measure recall (and FPR) of a model")
    p.add_argument("--model", required=True)
    p.add_argument("--glossary", required=True)
    p.add_argument("--positives", required=True)
    p.add_argument("--negatives", default=None)
    common(p)

    p = sub.add_parser("exp1", help="entropy ablation across categories")
    p.add_argument("--background", required=True)
    p.add_argument("--negatives", required=True)
    p.add_argument("--category", required=True, action="append", nargs=3,
                   metavar=("NAME", "GLOSSARY", "POSITIVES"), dest="categories")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--target-fpr", type=float, default=None, dest="target_fpr")
    common(p)

    p = sub.add_parser("exp2", help="LR baseline vs keyword model under shift")
    p.add_argument("--background", required=True)
    p.add_argument("--negatives", required=True)
    p.add_argument("--category", required=True, action="append", nargs=4,
                   metavar=("NAME", "GLOSSARY", "POSITIVES_A", "POSITIVES_B"),
                   dest="categories")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--target-fpr", type=float, default=None, dest="target_fpr")
    p.add_argument("--l2", type=float, default=None)
    p.add_argument("--epochs", type=int, default=None)
    p.add_argument("--learning-rate", type=float, default=None, dest="learning_rate")
    common(p)

    p = sub.add_parser("verify-tables", help="recheck bundled golden recall tables")
    p.add_argument("--golden-tables", action="append", default=None, dest="tables",
                   help="table file (repeatable; default: the bundled tables)")
    p.add_argument("--output", "-o", default=None)

    return parser


def _parse_threads(raw: str | None) -> int:
    if raw is None or raw == "":
        return 0
    try:
        value = int(raw)
    except ValueError:
        raise ValidationError(
            f"ENTROPY_CLASSIFIER_THREADS must be an integer >= 0, got {raw!r}"
        ) from None
    if value < 0:
        raise ValidationError(
            f"ENTROPY_CLASSIFIER_THREADS must be an integer >= 0, got {raw!r}"
        )
    return value


def _load_config_defaults(path: str) -> dict[str, str]:
    p = Path(path)
    try:
        content = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputOutputError(f"cannot read {p}: {exc.strerror or exc}") from exc
    except UnicodeDecodeError as exc:
        raise ValidationError(f"config file {p}: not valid UTF-8 ({exc})") from exc
    out: dict[str, str] = {}
    for lineno, line in enumerate(content.split("\n"), start=1):
        if line.startswith("#") or line.strip() == "":
            continue
        parts = line.split(None, 1)
        if len(parts) != 2 or parts[0] not in _CONFIG_KEYS:
            raise ValidationError(
                f"config file {p}: line {lineno}: unknown or malformed record {line!r}"
            )
        out[parts[0]] = parts[1].strip()
    return out


def _resolve(args: argparse.Namespace) -> RunConfig:
    defaults = _load_config_defaults(args.config) if getattr(args, "config", None) else {}

    def pick(name: str, fallback):
        value = getattr(args, name, None)
        if value is not None:
            return value
        if name in defaults:
            conv = _CONFIG_KEYS[name]
            try:
                return conv(defaults[name])
            except ValueError:
                raise ValidationError(
                    f"config value for {name} is not a valid {conv.__name__}: "
                    f"{defaults[name]!r}"
                ) from None
        return fallback

    categories = getattr(args, "categories", None) or ()
    tables = getattr(args, "tables", None) or ()
    return RunConfig(
        command=args.command,
        threads=_parse_threads(os.environ.get("ENTROPY_CLASSIFIER_THREADS")),
        k=pick("k", 100),
        target_fpr=pick("target_fpr", 0.0005),
        bias=getattr(args, "bias", None),
        explain=bool(getattr(args, "explain", False)),
        format=pick("format", "auto"),
        output=getattr(args, "output", None),
        glossary=getattr(args, "glossary", None),
        model=getattr(args, "model", None),
        background=getattr(args, "background", None),
        input=getattr(args, "input", None),
        positives=getattr(args, "positives", None),
        negatives=getattr(args, "negatives", None),
        out=getattr(args, "out", None),
        category=getattr(args, "category", None) if args.command == "train" else None,
        categories=tuple(tuple(c) for c in categories),
        tables=tuple(tables),
        l2=pick("l2", 1e-4),
        epochs=pick("epochs", 500),
        learning_rate=pick("learning_rate", 0.5),
    )


def _emit(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
        return
    try:
        Path(output).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise InputOutputError(f"cannot write {output}: {exc.strerror or exc}") from exc


def _check_model_glossary(model, glossary) -> None:
    if glossary.digest() != model.glossary_digest:
        raise ValidationError("model was trained for a different glossary")


def _cmd_train(cfg: RunConfig) -> int:
    glossary = load_glossary(cfg.glossary, category=cfg.category)
    corpus = load_corpus(cfg.background, cfg.format)
    model = train(glossary, corpus, cfg.k)
    save_model(model, cfg.out)
    print(
        f"trained category={model.category} n_docs={model.n_docs} "
        f"keywords={len(model.phrases)} mu={model.mu:.6g} sigma={model.sigma:.6g} "
        f"-> {cfg.out}",
        file=sys.stderr,
    )
    return 0


def _cmd_calibrate(cfg: RunConfig) -> int:
    model = load_model(cfg.model)
    if (cfg.bias is None) == (cfg.negatives is None):
        raise ValidationError("calibrate needs exactly one of --bias or --negatives")
    if cfg.bias is not None:
        updated = set_bias_direct(model, cfg.bias)
        rewrite_bias_line(cfg.model, updated.bias)
        _emit(f"bias {format_float(updated.bias)}\n", cfg.output)
        return 0
    if cfg.glossary is None:
        raise ValidationError("calibrate --negatives needs --glossary")
    glossary = load_glossary(cfg.glossary)
    _check_model_glossary(model, glossary)
    negatives = load_corpus(cfg.negatives, cfg.format)
    result = calibrate_fpr(model, glossary, negatives, cfg.target_fpr)
    rewrite_bias_line(cfg.model, result.bias)
    _emit(
        f"bias {format_float(result.bias)}\n"
        f"achieved_fpr {format_float(result.achieved_fpr)}\n"
        f"target_fpr {format_float(result.target_fpr)}\n"
        f"n_negatives {result.n_negatives}\n",
        cfg.output,
    )
    return 0


_SCORE_COLUMNS = ("doc_id", "word_count", "L", "tfidf_over_L", "entropy",
                  "raw_score", "standardized", "probability", "decision")


def _cmd_score(cfg: RunConfig) -> int:
    model = load_model(cfg.model)
    glossary = load_glossary(cfg.glossary)
    _check_model_glossary(model, glossary)
    corpus = load_corpus(cfg.input, cfg.format)
    columns = _SCORE_COLUMNS + (("contributions",) if cfg.explain else ())
    lines = ["# " + "\t".join(columns)]
    for doc in corpus:
        b = score_document(doc, glossary, model)
        fields = [
            b.doc_id,
            str(b.word_count),
            str(b.effective_length),
            format_float(b.tfidf_over_L),
            format_float(b.entropy),
            format_float(b.raw_score),
            format_float(b.standardized),
            format_float(b.probability),
            "positive" if b.positive else "negative",
        ]
        if cfg.explain:
            fields.append("; ".join(
                f"{glossary.phrase_text(kid)}={format_float(v)}"
                for kid, v in b.per_keyword.items()
            ))
        lines.append("\t".join(fields))
    _emit("\n".join(lines) + "\n", cfg.output)
    return 0


def _cmd_evaluate(cfg: RunConfig) -> int:
    model = load_model(cfg.model)
    glossary = load_glossary(cfg.glossary)
    _check_model_glossary(model, glossary)
    positives = load_corpus(cfg.positives, cfg.format)
    r = recall(lambda d: score_document(d, glossary, model).positive, positives)
    lines = [f"recall {format_float(r)}", f"n_positives {len(positives)}"]
    if cfg.negatives is not None:
        negatives = load_corpus(cfg.negatives, cfg.format)
        fpr = measure_fpr(model, glossary, negatives)
        lines.append(f"fpr {format_float(fpr)}")
        lines.append(f"n_negatives {len(negatives)}")
    _emit("\n".join(lines) + "\n", cfg.output)
    return 0


def _experiment_config(cfg: RunConfig, with_b: bool) -> ExperimentConfig:
    background = load_corpus(cfg.background, cfg.format)
    negatives = load_corpus(cfg.negatives, cfg.format)
    specs = []
    for group in cfg.categories:
        name, glossary_path = group[0], group[1]
        glossary = load_glossary(glossary_path, category=name)
        positives = load_corpus(group[2], cfg.format)
        positives_b = load_corpus(group[3], cfg.format) if with_b else None
        specs.append(CategorySpec(
            name=name, glossary=glossary,
            positives=positives, positives_b=positives_b,
        ))
    return ExperimentConfig(
        categories=tuple(specs),
        background=background,
        negatives=negatives,
        k=cfg.k,
        target_fpr=cfg.target_fpr,
        lr=LrParams(l2=cfg.l2, epochs=cfg.epochs, learning_rate=cfg.learning_rate),
    )


def _cmd_exp1(cfg: RunConfig) -> int:
    report = run_experiment1(_experiment_config(cfg, with_b=False))
    _emit(render_records(report), cfg.output)
    print(render_table(report), file=sys.stderr, end="")
    return 0


def _cmd_exp2(cfg: RunConfig) -> int:
    report = run_experiment2(_experiment_config(cfg, with_b=True))
    _emit(render_records(report), cfg.output)
    print(render_table(report), file=sys.stderr, end="")
    return 0


def _cmd_verify_tables(cfg: RunConfig) -> int:
    paths = list(cfg.tables) if cfg.tables else bundled_golden_paths()
    parts = []
    all_ok = True
    for path in paths:
        report = verify_table(path)
        parts.append(render_table_report(report))
        all_ok = all_ok and report.all_passed
    _emit("".join(parts), cfg.output)
    if not all_ok:
        print("error: one or more table checks failed", file=sys.stderr)
        return 1
    return 0


_HANDLERS = {
    "train": _cmd_train,
    "calibrate": _cmd_calibrate,
    "score": _cmd_score,
    "evaluate": _cmd_evaluate,
    "exp1": _cmd_exp1,
    "exp2": _cmd_exp2,
    "verify-tables": _cmd_verify_tables,
}


def dispatch(config: RunConfig) -> int:
    return _HANDLERS[config.command](config)


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
        return dispatch(_resolve(args))
    except ToolError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        # contract violations from the numeric layers
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
