"""
Code, Sub-code and Span level precision / recall / F1.

Code and Sub-code are scored as micro-averaged multi-label classification.
Spans use relaxed token matching: containment in either direction, or token
Jaccard similarity of at least the threshold.
"""

import string
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass
from enum import Enum
from typing import Any

from star_dro.exceptions import InvalidInputError, SchemaError
from star_dro.grouping.models import ExampleRecord
from star_dro.logging.logger import get_logger

logger = get_logger(__name__)

JACCARD_THRESHOLD = 0.6

_PUNCTUATION = str.maketrans("", "", string.punctuation)

Tokenizer = Callable[[str], frozenset[str]]


class MatchingMode(str, Enum):
    """How predicted spans claim gold spans.

    LITERAL lets one gold span be matched by any number of predictions.
    ONE_TO_ONE assigns each gold span to at most one prediction, greedily in
    prediction order.
    """

    LITERAL = "literal"
    ONE_TO_ONE = "one_to_one"


@dataclass(frozen=True)
class LevelScores:
    """Scores and raw counts for one evaluation level."""

    precision: float
    recall: float
    f1: float
    tp: int
    fp: int
    fn: int
    empty_prediction: bool = False
    empty_gold: bool = False

    def to_json_dict(self) -> dict[str, Any]:
        """Percentages rounded to two decimals, plus the raw counts."""
        return {
            "precision": round(100.0 * self.precision, 2),
            "recall": round(100.0 * self.recall, 2),
            "f1": round(100.0 * self.f1, 2),
            "tp": self.tp,
            "fp": self.fp,
            "fn": self.fn,
        }


def prf(tp: int, fp: int, fn: int) -> LevelScores:
    """Precision, recall and F1 from counts; empty denominators give 0 and a flag."""
    if min(tp, fp, fn) < 0:
        raise InvalidInputError(f"counts must be non-negative, got tp={tp} fp={fp} fn={fn}")
    precision = tp / (tp + fp) if tp + fp > 0 else 0.0
    recall = tp / (tp + fn) if tp + fn > 0 else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    return LevelScores(
        precision=precision,
        recall=recall,
        f1=f1,
        tp=tp,
        fp=fp,
        fn=fn,
        empty_prediction=tp + fp == 0,
        empty_gold=tp + fn == 0,
    )


def _check_aligned(pred: Sequence[Any], gold: Sequence[Any]) -> None:
    if len(pred) != len(gold):
        raise InvalidInputError(
            f"prediction and gold lists differ in length ({len(pred)} != {len(gold)})"
        )


def multilabel_f1(
    pred: Sequence[Iterable[str]], gold: Sequence[Iterable[str]]
) -> LevelScores:
    """Micro-averaged multi-label scores over aligned instances.

    Each instance contributes |pred & gold| true positives, the rest of its
    predicted labels as false positives and the rest of its gold labels as
    false negatives. Labels are deduplicated per instance.

    Raises:
        InvalidInputError: If the lists are not the same length
    """
    _check_aligned(pred, gold)
    tp = fp = fn = 0
    for predicted, expected in zip(pred, gold, strict=True):
        p, g = set(predicted), set(expected)
        hit = len(p & g)
        tp += hit
        fp += len(p) - hit
        fn += len(g) - hit
    return prf(tp, fp, fn)


def tokenize(text: str) -> frozenset[str]:
    """Lowercase, strip ASCII punctuation, split on whitespace."""
    return frozenset(text.lower().translate(_PUNCTUATION).split())


def span_match(
    pred_span: str,
    gold_span: str,
    threshold: float = JACCARD_THRESHOLD,
    tokenizer: Tokenizer = tokenize,
) -> bool:
    """Relaxed match between a predicted and a gold evidence span.

    True when either token set contains the other, or when their Jaccard
    similarity is at least ``threshold``. A span that is empty after
    normalization matches nothing.
    """
    p, g = tokenizer(pred_span), tokenizer(gold_span)
    if not p or not g:
        return False
    if p <= g or g <= p:
        return True
    return len(p & g) / len(p | g) >= threshold


def _dedupe(spans: Iterable[str], tokenizer: Tokenizer) -> list[str]:
    """First span of each normalized token set."""
    kept: dict[frozenset[str], str] = {}
    for span in spans:
        kept.setdefault(tokenizer(span), span)
    return list(kept.values())


def _count_instance(
    pred: list[str],
    gold: list[str],
    mode: MatchingMode,
    threshold: float,
    tokenizer: Tokenizer,
) -> tuple[int, int, int]:
    if mode is MatchingMode.LITERAL:
        matched_gold: set[int] = set()
        tp = 0
        for p in pred:
            hits = {j for j, g in enumerate(gold) if span_match(p, g, threshold, tokenizer)}
            if hits:
                tp += 1
                matched_gold |= hits
        return tp, len(pred) - tp, len(gold) - len(matched_gold)

    claimed: set[int] = set()
    for p in pred:
        for j, g in enumerate(gold):
            if j not in claimed and span_match(p, g, threshold, tokenizer):
                claimed.add(j)
                break
    tp = len(claimed)
    return tp, len(pred) - tp, len(gold) - tp


def span_f1(
    pred: Sequence[Iterable[str]],
    gold: Sequence[Iterable[str]],
    mode: MatchingMode = MatchingMode.LITERAL,
    threshold: float = JACCARD_THRESHOLD,
    tokenizer: Tokenizer = tokenize,
) -> LevelScores:
    """Relaxed span scores over aligned instances.

    Under LITERAL matching a prediction is a true positive if it matches any
    gold span of its instance, unmatched predictions are false positives and
    gold spans matched by no prediction are false negatives. Spans of one
    instance that normalize to the same token set are counted once.

    Raises:
        InvalidInputError: If the lists are not the same length
    """
    _check_aligned(pred, gold)
    tp = fp = fn = 0
    for predicted, expected in zip(pred, gold, strict=True):
        t, f, n = _count_instance(
            _dedupe(predicted, tokenizer), _dedupe(expected, tokenizer), mode, threshold, tokenizer
        )
        tp, fp, fn = tp + t, fp + f, fn + n
    return prf(tp, fp, fn)


@dataclass(frozen=True)
class MetricsReport:
    """Scores at the Code, Sub-code and Span levels."""

    code: LevelScores
    subcode: LevelScores
    span: LevelScores

    def to_json_dict(self) -> dict[str, dict[str, Any]]:
        return {
            "code": self.code.to_json_dict(),
            "subcode": self.subcode.to_json_dict(),
            "span": self.span.to_json_dict(),
        }


def _codes(example: ExampleRecord) -> set[str]:
    return {a.code for a in example.annotations}


def _subcodes(example: ExampleRecord) -> set[str]:
    return {a.subcode for a in example.annotations}


def _spans(example: ExampleRecord) -> list[str]:
    return [a.span for a in example.annotations if a.span]


def align_records(
    pred: Sequence[ExampleRecord], gold: Sequence[ExampleRecord]
) -> list[tuple[ExampleRecord, ExampleRecord]]:
    """Pair predictions with gold records by id, in gold order.

    Raises:
        SchemaError: If the two id sets differ (message lists the ids)
    """
    by_id = {record.id: record for record in pred}
    gold_ids = [record.id for record in gold]
    missing = sorted(set(gold_ids) - by_id.keys())
    unexpected = sorted(by_id.keys() - set(gold_ids))
    if missing or unexpected:
        parts = []
        if missing:
            parts.append(f"missing from predictions: {', '.join(missing)}")
        if unexpected:
            parts.append(f"not in gold: {', '.join(unexpected)}")
        raise SchemaError("instance id mismatch; " + "; ".join(parts))
    return [(by_id[record.id], record) for record in gold]


def evaluate_records(
    pred: Sequence[ExampleRecord],
    gold: Sequence[ExampleRecord],
    mode: MatchingMode = MatchingMode.LITERAL,
) -> MetricsReport:
    """Score predicted annotation sets against gold at all three levels."""
    pairs = align_records(pred, gold)
    report = MetricsReport(
        code=multilabel_f1([_codes(p) for p, _ in pairs], [_codes(g) for _, g in pairs]),
        subcode=multilabel_f1(
            [_subcodes(p) for p, _ in pairs], [_subcodes(g) for _, g in pairs]
        ),
        span=span_f1([_spans(p) for p, _ in pairs], [_spans(g) for _, g in pairs], mode),
    )
    logger.info(
        "evaluation_finished",
        instances=len(pairs),
        mode=mode.value,
        code_f1=report.code.f1,
        subcode_f1=report.subcode.f1,
        span_f1=report.span.f1,
    )
    return report
