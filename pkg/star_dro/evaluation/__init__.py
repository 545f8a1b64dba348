"""Evaluation metrics at the Code, Sub-code and Span levels."""

from star_dro.evaluation.metrics import (
    JACCARD_THRESHOLD,
    LevelScores,
    MatchingMode,
    MetricsReport,
    align_records,
    evaluate_records,
    multilabel_f1,
    prf,
    span_f1,
    span_match,
    tokenize,
)

__all__ = [
    "JACCARD_THRESHOLD",
    "LevelScores",
    "MatchingMode",
    "MetricsReport",
    "align_records",
    "evaluate_records",
    "multilabel_f1",
    "prf",
    "span_f1",
    "span_match",
    "tokenize",
]
