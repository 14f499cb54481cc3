"""Experiment harnesses and aggregate verification.

Experiment 1 isolates the entropy factor: per category, an entropy-weighted
model and an abundance-only ablation are trained on the same background
corpus, calibrated to the same FPR target, and compared on recall, with a
one-way ANOVA across categories.

Experiment 2 contrasts robustness under distribution shift: a logistic
regression trained on half of each category's A corpus (background corpus as
the negative class) against the knowledge-based model, both calibrated to the
same FPR target, evaluated on A's held-out half and on the disjoint B corpus.
The comparison metric is the fractional change of recall from A to B.

verify_tables recomputes aggregates from bundled golden recall tables and
checks them against the expectations recorded in the files themselves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .background import train
from .calibration import calibrate_fpr, measure_fpr, set_bias_direct
from .errors import InputOutputError, ValidationError
from .glossary import Glossary
from .logreg import (
    LrParams,
    calibrate_lr_threshold,
    lr_decision,
    lr_measure_fpr,
    train_lr,
)
from .model import format_float
from .scoring import score_document
from .stats import AnovaResult, fractional_change, one_way_anova, recall
from .text import Corpus


@dataclass(frozen=True)
class CategorySpec:
    """One category's inputs: glossary plus positive corpora (B only for exp2)."""

    name: str
    glossary: Glossary
    positives: Corpus
    positives_b: Corpus | None = None


@dataclass(frozen=True)
class ExperimentConfig:
    categories: tuple[CategorySpec, ...]
    background: Corpus
    negatives: Corpus
    k: int = 100
    target_fpr: float = 0.0005
    lr: LrParams = LrParams()


@dataclass(frozen=True)
class CategoryEval:
    """One report row. recall_a/recall_b are the two compared conditions:
    ablation/entropy for exp1, corpus A/corpus B for exp2."""

    recall_a: float
    recall_b: float | None
    fpr_a: float
    fpr_b: float | None
    n_pos_a: int
    n_pos_b: int | None
    n_neg: int
    fractional_change: float | None


@dataclass(frozen=True)
class EvalReport:
    experiment: str
    k: int
    target_fpr: float
    per_category: dict[str, CategoryEval]
    aggregate: dict[str, float]
    anova: AnovaResult | None
    warnings: tuple[str, ...]


def _validate_config(config: ExperimentConfig, need_b: bool) -> None:
    if not config.categories:
        raise ValidationError("experiment needs at least one category")
    seen = set()
    for spec in config.categories:
        if not spec.name or any(ch.isspace() for ch in spec.name):
            raise ValidationError(
                f"category name must be non-empty without whitespace: {spec.name!r}"
            )
        if spec.name in seen:
            raise ValidationError(f"duplicate category name: {spec.name}")
        seen.add(spec.name)
        if need_b and spec.positives_b is None:
            raise ValidationError(f"category {spec.name}: experiment 2 needs a B corpus")


def _maybe_fractional_change(recall_a: float, recall_b: float,
                             label: str, warnings: list[str]) -> float | None:
    if recall_a == 0:
        warnings.append(
            f"{label}: recall_a is zero, fractional change undefined; excluded from averages"
        )
        return None
    return fractional_change(recall_a, recall_b)


def _kb_decision(glossary: Glossary, model):
    return lambda doc: score_document(doc, glossary, model).positive


def run_experiment1(config: ExperimentConfig) -> EvalReport:
    """Entropy ablation at matched FPR; recall_a = ablation, recall_b = entropy."""
    _validate_config(config, need_b=False)
    warnings: list[str] = []
    rows: dict[str, CategoryEval] = {}
    recalls_plain: list[float] = []
    recalls_entropy: list[float] = []
    for spec in config.categories:
        plain = train(spec.glossary, config.background, config.k, entropy_weighted=False)
        entropy = train(spec.glossary, config.background, config.k, entropy_weighted=True)
        cal_plain = calibrate_fpr(plain, spec.glossary, config.negatives, config.target_fpr)
        cal_entropy = calibrate_fpr(entropy, spec.glossary, config.negatives, config.target_fpr)
        plain = set_bias_direct(plain, cal_plain.bias)
        entropy = set_bias_direct(entropy, cal_entropy.bias)
        r_plain = recall(_kb_decision(spec.glossary, plain), spec.positives)
        r_entropy = recall(_kb_decision(spec.glossary, entropy), spec.positives)
        rows[spec.name] = CategoryEval(
            recall_a=r_plain,
            recall_b=r_entropy,
            fpr_a=cal_plain.achieved_fpr,
            fpr_b=cal_entropy.achieved_fpr,
            n_pos_a=len(spec.positives),
            n_pos_b=len(spec.positives),
            n_neg=len(config.negatives),
            fractional_change=(
                fractional_change(r_plain, r_entropy) if r_plain > 0 else None
            ),
        )
        recalls_plain.append(r_plain)
        recalls_entropy.append(r_entropy)

    aggregate = {
        "mean_recall_a": math.fsum(recalls_plain) / len(recalls_plain),
        "mean_recall_b": math.fsum(recalls_entropy) / len(recalls_entropy),
    }
    anova = None
    if len(config.categories) < 2:
        warnings.append("single category: ANOVA omitted")
    else:
        try:
            anova = one_way_anova([recalls_plain, recalls_entropy])
        except ValidationError as exc:
            warnings.append(f"ANOVA omitted: {exc}")
    return EvalReport(
        experiment="exp1",
        k=config.k,
        target_fpr=config.target_fpr,
        per_category=rows,
        aggregate=aggregate,
        anova=anova,
        warnings=tuple(warnings),
    )


def split_alternating(corpus: Corpus) -> tuple[Corpus, Corpus]:
    """Deterministic half split of an id-sorted corpus: even positions train,
    odd positions held out."""
    if len(corpus) < 2:
        raise ValidationError("cannot split a corpus with fewer than 2 documents")
    train_docs = corpus.documents[0::2]
    eval_docs = corpus.documents[1::2]
    return (
        Corpus(documents=train_docs, source=f"{corpus.source}#train"),
        Corpus(documents=eval_docs, source=f"{corpus.source}#heldout"),
    )


def evaluate_pair(is_positive, corpus_a: Corpus, corpus_b: Corpus) -> tuple[float, float]:
    """Recall of one fixed classifier on two corpora; swapping the corpora
    swaps the result components exactly."""
    return recall(is_positive, corpus_a), recall(is_positive, corpus_b)


def run_experiment2(config: ExperimentConfig) -> EvalReport:
    """LR-vs-knowledge-based robustness; rows keyed '<category>/lr' and
    '<category>/kb'."""
    _validate_config(config, need_b=True)
    warnings: list[str] = []
    rows: dict[str, CategoryEval] = {}
    fc_lr: list[float] = []
    fc_kb: list[float] = []
    for spec in config.categories:
        a_train, a_eval = split_alternating(spec.positives)
        corpus_b = spec.positives_b

        kb = train(spec.glossary, config.background, config.k)
        kb = set_bias_direct(
            kb, calibrate_fpr(kb, spec.glossary, config.negatives, config.target_fpr).bias
        )
        lr = train_lr(a_train, config.background, config.lr)
        lr = calibrate_lr_threshold(lr, config.negatives, config.target_fpr)

        lr_ra, lr_rb = evaluate_pair(lambda d: lr_decision(lr, d), a_eval, corpus_b)
        kb_ra, kb_rb = evaluate_pair(_kb_decision(spec.glossary, kb), a_eval, corpus_b)

        lr_fc = _maybe_fractional_change(lr_ra, lr_rb, f"{spec.name}/lr", warnings)
        kb_fc = _maybe_fractional_change(kb_ra, kb_rb, f"{spec.name}/kb", warnings)
        if lr_fc is not None:
            fc_lr.append(lr_fc)
        if kb_fc is not None:
            fc_kb.append(kb_fc)

        rows[f"{spec.name}/lr"] = CategoryEval(
            recall_a=lr_ra, recall_b=lr_rb,
            fpr_a=lr_measure_fpr(lr, config.negatives), fpr_b=None,
            n_pos_a=len(a_eval), n_pos_b=len(corpus_b), n_neg=len(config.negatives),
            fractional_change=lr_fc,
        )
        rows[f"{spec.name}/kb"] = CategoryEval(
            recall_a=kb_ra, recall_b=kb_rb,
            fpr_a=measure_fpr(kb, spec.glossary, config.negatives), fpr_b=None,
            n_pos_a=len(a_eval), n_pos_b=len(corpus_b), n_neg=len(config.negatives),
            fractional_change=kb_fc,
        )

    aggregate: dict[str, float] = {}
    if fc_lr:
        aggregate["mean_fractional_change_lr"] = math.fsum(fc_lr) / len(fc_lr)
    if fc_kb:
        aggregate["mean_fractional_change_kb"] = math.fsum(fc_kb) / len(fc_kb)
    anova = None
    if len(fc_lr) >= 2 and len(fc_kb) >= 2:
        try:
            anova = one_way_anova([fc_lr, fc_kb])
        except ValidationError as exc:
            warnings.append(f"ANOVA omitted: {exc}")
    else:
        warnings.append("fewer than 2 fractional changes per classifier: ANOVA omitted")
    return EvalReport(
        experiment="exp2",
        k=config.k,
        target_fpr=config.target_fpr,
        per_category=rows,
        aggregate=aggregate,
        anova=anova,
        warnings=tuple(warnings),
    )


def _fmt_opt(value, digits: int | None = None) -> str:
    if value is None:
        return "na"
    if digits is None:
        return format_float(value)
    return f"{value:.{digits}f}"


def render_records(report: EvalReport) -> str:
    """Machine-readable line records, floats at 17 significant digits."""
    lines = [
        f"report {report.experiment}",
        f"k {report.k}",
        f"target_fpr {format_float(report.target_fpr)}",
    ]
    for name, row in report.per_category.items():
        lines.append(
            f"category {name} "
            f"recall_a {format_float(row.recall_a)} recall_b {_fmt_opt(row.recall_b)} "
            f"fpr_a {format_float(row.fpr_a)} fpr_b {_fmt_opt(row.fpr_b)} "
            f"n_pos_a {row.n_pos_a} n_pos_b {row.n_pos_b if row.n_pos_b is not None else 'na'} "
            f"n_neg {row.n_neg} fractional_change {_fmt_opt(row.fractional_change)}"
        )
    for key in report.aggregate:
        lines.append(f"aggregate {key} {format_float(report.aggregate[key])}")
    if report.anova is not None:
        a = report.anova
        lines.append(
            f"anova f_stat {format_float(a.f_stat)} df_between {a.df_between} "
            f"df_within {a.df_within} p_value {format_float(a.p_value)}"
        )
    for w in report.warnings:
        lines.append(f"warning {w}")
    return "\n".join(lines) + "\n"


def render_table(report: EvalReport) -> str:
    """Human-readable aligned table, 4 digits."""
    name_w = max([len("category")] + [len(n) for n in report.per_category])
    header = (
        f"{'category':<{name_w}}  {'recall_a':>8}  {'recall_b':>8}  "
        f"{'fpr_a':>8}  {'fpr_b':>8}  {'n_pos_a':>7}  {'n_pos_b':>7}  "
        f"{'n_neg':>6}  {'frac_chg':>9}"
    )
    lines = [f"experiment {report.experiment} (k={report.k}, target_fpr={report.target_fpr:g})",
             header, "-" * len(header)]
    for name, row in report.per_category.items():
        lines.append(
            f"{name:<{name_w}}  {row.recall_a:>8.4f}  {_fmt_opt(row.recall_b, 4):>8}  "
            f"{row.fpr_a:>8.4f}  {_fmt_opt(row.fpr_b, 4):>8}  {row.n_pos_a:>7}  "
            f"{row.n_pos_b if row.n_pos_b is not None else 'na':>7}  "
            f"{row.n_neg:>6}  {_fmt_opt(row.fractional_change, 4):>9}"
        )
    for key, value in report.aggregate.items():
        lines.append(f"{key} = {value:.6f}")
    if report.anova is not None:
        a = report.anova
        lines.append(
            f"anova: F = {a.f_stat:.4f}, df = ({a.df_between}, {a.df_within}), "
            f"p = {a.p_value:.6g}"
        )
    for w in report.warnings:
        lines.append(f"warning: {w}")
    return "\n".join(lines) + "\n"


# --- golden table verification -------------------------------------------

@dataclass(frozen=True)
class TableCheck:
    key: str
    computed: float
    expected: float
    tol_kind: str
    tol: float
    passed: bool


@dataclass(frozen=True)
class TableReport:
    path: str
    kind: str
    n_rows: int
    computed: dict[str, float]
    checks: tuple[TableCheck, ...]
    warnings: tuple[str, ...]

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)


def bundled_golden_paths() -> list[Path]:
    """The two recall tables shipped with the package, in a fixed order."""
    root = resources.files("entropy_classifier") / "golden"
    return [
        Path(str(root / "recall_entropy_ablation.txt")),
        Path(str(root / "recall_distribution_shift.txt")),
    ]


def _parse_golden(path: Path):
    try:
        content = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputOutputError(f"cannot read {path}: {exc.strerror or exc}") from exc
    except UnicodeDecodeError as exc:
        raise ValidationError(f"table file {path}: not valid UTF-8 ({exc})") from exc

    def bad(what: str) -> ValidationError:
        return ValidationError(f"table file {path}: {what}")

    kind = None
    labels: tuple[str, str] = ("a", "b")
    rows: list[tuple[str, tuple[float, ...]]] = []
    expects: list[tuple[str, float, str, float]] = []
    saw_version = False
    for lineno, line in enumerate(content.split("\n"), start=1):
        if line.startswith("#") or line.strip() == "":
            continue
        parts = line.split()
        key = parts[0]
        if key == "format_version":
            if parts[1:] != ["1"]:
                raise bad(f"unsupported format_version on line {lineno}")
            saw_version = True
        elif key == "kind":
            if parts[1:] not in (["recall_pair"], ["recall_shift"]):
                raise bad(f"unknown kind on line {lineno}: {line!r}")
            kind = parts[1]
        elif key == "labels":
            if len(parts) != 3:
                raise bad(f"labels needs exactly two names (line {lineno})")
            labels = (parts[1], parts[2])
        elif key == "row":
            want = 3 if kind == "recall_pair" else 5
            if kind is None:
                raise bad(f"row before kind (line {lineno})")
            if len(parts) != want + 1:
                raise bad(f"row needs {want} fields (line {lineno}): {line!r}")
            try:
                values = tuple(float(v) for v in parts[2:])
            except ValueError:
                raise bad(f"non-numeric recall on line {lineno}: {line!r}") from None
            if any(not (0.0 <= v <= 1.0) for v in values):
                raise bad(f"recall outside [0, 1] on line {lineno}: {line!r}")
            rows.append((parts[1], values))
        elif key == "expect":
            if len(parts) != 5 or parts[3] not in ("abs", "rel"):
                raise bad(f"malformed expect on line {lineno}: {line!r}")
            try:
                expects.append((parts[1], float(parts[2]), parts[3], float(parts[4])))
            except ValueError:
                raise bad(f"non-numeric expect on line {lineno}: {line!r}") from None
        else:
            raise bad(f"unknown record {key!r} on line {lineno}")
    if not saw_version:
        raise bad("missing format_version record")
    if kind is None:
        raise bad("missing kind record")
    if not rows:
        raise bad("no data rows")
    return kind, labels, rows, expects


def verify_table(path) -> TableReport:
    """Recompute a golden table's aggregates and check its expectations."""
    p = Path(path)
    kind, labels, rows, expects = _parse_golden(p)
    warnings: list[str] = []
    computed: dict[str, float] = {}

    if kind == "recall_pair":
        col_a = [v[0] for _, v in rows]
        col_b = [v[1] for _, v in rows]
        computed["mean_a"] = math.fsum(col_a) / len(col_a)
        computed["mean_b"] = math.fsum(col_b) / len(col_b)
        groups = [col_a, col_b]
    else:
        fc_by_label: dict[str, list[float]] = {labels[0]: [], labels[1]: []}
        for name, v in rows:
            for label, (ra, rb) in zip(labels, ((v[0], v[1]), (v[2], v[3]))):
                if ra == 0:
                    warnings.append(
                        f"{name}/{label}: recall_a is zero, fractional change skipped"
                    )
                else:
                    fc_by_label[label].append(fractional_change(ra, rb))
        for label in labels:
            values = fc_by_label[label]
            if values:
                computed[f"mean_change_{label}"] = math.fsum(values) / len(values)
        groups = [fc_by_label[labels[0]], fc_by_label[labels[1]]]

    if all(len(g) >= 2 for g in groups):
        try:
            anova = one_way_anova(groups)
            computed["anova_f"] = anova.f_stat
            computed["anova_p"] = anova.p_value
        except ValidationError as exc:
            warnings.append(f"ANOVA skipped: {exc}")
    else:
        warnings.append("fewer than 2 values per group: ANOVA skipped")

    checks = []
    for key, expected, tol_kind, tol in expects:
        got = computed.get(key, math.nan)
        if tol_kind == "abs":
            ok = abs(got - expected) <= tol
        else:
            ok = abs(got - expected) <= tol * abs(expected)
        checks.append(TableCheck(key=key, computed=got, expected=expected,
                                 tol_kind=tol_kind, tol=tol, passed=bool(ok)))
    return TableReport(
        path=str(p), kind=kind, n_rows=len(rows), computed=computed,
        checks=tuple(checks), warnings=tuple(warnings),
    )


def render_table_report(report: TableReport) -> str:
    lines = [f"table {Path(report.path).name} kind {report.kind} rows {report.n_rows}"]
    for key, value in report.computed.items():
        lines.append(f"computed {key} {format_float(value)}")
    for c in report.checks:
        verdict = "PASS" if c.passed else "FAIL"
        lines.append(
            f"check {c.key} expected {c.expected:g} tol {c.tol_kind} {c.tol:g} -> {verdict}"
        )
    for w in report.warnings:
        lines.append(f"warning {w}")
    return "\n".join(lines) + "\n"
