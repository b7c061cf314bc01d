"""Run configuration shared by the library harness and the CLI."""

from __future__ import annotations

from dataclasses import asdict, dataclass

from .classifier import PRIOR_MODES, SMOOTHING_SPACES
from .errors import UsageError
from .selection import CLASS_AGGREGATIONS, SELECTION_METHODS

SELECTOR_CHOICES = SELECTION_METHODS + ("none",)
ZWNJ_POLICIES = ("join", "space")


@dataclass(frozen=True)
class PipelineConfig:
    """Everything one cross-validation run depends on, seed included."""

    zwnj_policy: str = "join"
    use_stemming: bool = True
    use_bigrams: bool = True
    selector: str = "mmi"
    class_aggregation: str = "max"
    top_k: int | None = None
    prior_mode: str = "paper"
    smoothing_space: str = "selected"
    folds: int = 5
    seed: int = 0

    def __post_init__(self) -> None:
        if self.zwnj_policy not in ZWNJ_POLICIES:
            raise UsageError(f"zwnj_policy must be one of {ZWNJ_POLICIES}")
        if self.selector not in SELECTOR_CHOICES:
            raise UsageError(f"selector must be one of {SELECTOR_CHOICES}")
        if self.class_aggregation not in CLASS_AGGREGATIONS:
            raise UsageError(f"class_aggregation must be one of {CLASS_AGGREGATIONS}")
        if self.prior_mode not in PRIOR_MODES:
            raise UsageError(f"prior_mode must be one of {PRIOR_MODES}")
        if self.smoothing_space not in SMOOTHING_SPACES:
            raise UsageError(f"smoothing_space must be one of {SMOOTHING_SPACES}")
        if self.top_k is not None and self.top_k < 1:
            raise UsageError("top_k must be positive")
        if self.folds < 2:
            raise UsageError("folds must be >= 2")

    def as_dict(self) -> dict:
        return asdict(self)
