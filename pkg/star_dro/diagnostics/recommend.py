"""Hyperparameter recommendations by group count."""

from dataclasses import dataclass
from typing import Any

from star_dro.exceptions import InvalidInputError

# Effective dual step of the nine-group baseline (alpha 1.08, eta 0.003).
BASELINE_ETA_EFF = 0.08 * 0.003
BASELINE_GROUPS = 9

Range = tuple[float, float]


@dataclass(frozen=True)
class RecommendationRow:
    """One group-count bucket of the recommendation table."""

    max_groups: int | None
    label: str
    eta: Range
    rho: Range
    alpha: Range
    eta_eff_nominal: float
    weight_decay: Range
    activation_epoch: int


TABLE: tuple[RecommendationRow, ...] = (
    RecommendationRow(10, "<=10", (0.003, 0.005), (0.02, 0.05), (1.05, 1.15), 2e-4, (0.05, 0.10), 1),
    RecommendationRow(30, "11-30", (0.001, 0.003), (0.03, 0.08), (1.03, 1.10), 1e-4, (0.05, 0.10), 1),
    RecommendationRow(100, "31-100", (5e-4, 1e-3), (0.05, 0.10), (1.02, 1.05), 5e-5, (0.05, 0.15), 1),
    RecommendationRow(None, ">100", (1e-4, 1e-3), (0.08, 0.15), (1.01, 1.03), 2e-5, (0.10, 0.20), 2),
)


@dataclass(frozen=True)
class Recommendation:
    """Suggested ranges for a given number of groups."""

    groups: int
    row: RecommendationRow
    eta_eff_target: float
    degenerate: bool = False

    @property
    def eta_eff_band(self) -> Range:
        """Effective-step band spanned by the row's eta and alpha ranges."""
        return (
            self.row.eta[0] * (self.row.alpha[0] - 1.0),
            self.row.eta[1] * (self.row.alpha[1] - 1.0),
        )

    @property
    def midpoint(self) -> dict[str, float]:
        eta = sum(self.row.eta) / 2.0
        alpha = sum(self.row.alpha) / 2.0
        return {
            "eta": eta,
            "rho": sum(self.row.rho) / 2.0,
            "alpha": alpha,
            "eta_eff": (alpha - 1.0) * eta,
        }

    def to_dict(self) -> dict[str, Any]:
        return {
            "groups": self.groups,
            "bucket": self.row.label,
            "degenerate": self.degenerate,
            "eta": list(self.row.eta),
            "rho": list(self.row.rho),
            "alpha": list(self.row.alpha),
            "weight_decay": list(self.row.weight_decay),
            "activation_epoch": self.row.activation_epoch,
            "eta_eff_nominal": self.row.eta_eff_nominal,
            "eta_eff_band": list(self.eta_eff_band),
            "eta_eff_target": self.eta_eff_target,
            "midpoint": self.midpoint,
        }


def recommend_hyperparams(groups: int) -> Recommendation:
    """Table row for ``groups`` plus the 1/G-scaled effective-step target.

    With a single group the robust objective equals ERM; the recommendation
    is still returned but flagged degenerate.
    """
    if groups < 1:
        raise InvalidInputError(f"group count must be >= 1, got {groups}")
    row = next(r for r in TABLE if r.max_groups is None or groups <= r.max_groups)
    target = BASELINE_ETA_EFF * BASELINE_GROUPS / groups
    return Recommendation(groups=groups, row=row, eta_eff_target=target, degenerate=groups == 1)
