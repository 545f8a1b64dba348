"""
Diagnostics and I/O.

Provides:
- Run records and epoch summaries
- Regime classification of the adversarial weights
- Hyperparameter recommendations by group count
- Trace/summary export and dataset/config loaders
"""

from star_dro.diagnostics.export import build_summary, export_trace
from star_dro.diagnostics.loaders import load_examples, load_run_config, write_examples
from star_dro.diagnostics.recommend import Recommendation, recommend_hyperparams
from star_dro.diagnostics.records import EpochSummary, RunRecord
from star_dro.diagnostics.regime import Regime, RegimeLabel, RegimeThresholds, classify_regime

__all__ = [
    "EpochSummary",
    "Recommendation",
    "Regime",
    "RegimeLabel",
    "RegimeThresholds",
    "RunRecord",
    "build_summary",
    "classify_regime",
    "export_trace",
    "load_examples",
    "load_run_config",
    "recommend_hyperparams",
    "write_examples",
]
