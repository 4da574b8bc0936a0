"""Server configuration."""

from dataclasses import dataclass, field

from .mock import STAGES


@dataclass(frozen=True)
class AdapterConfig:
    """mode selects mock or real backends; models maps stage name to a
    Hugging Face model id (real mode only, unset stages answer 501)."""

    mode: str = "mock"
    models: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.mode not in ("mock", "real"):
            raise ValueError(f"unknown mode {self.mode!r}")
        for stage in self.models:
            if stage not in STAGES:
                raise ValueError(f"unknown stage {stage!r}")

    def model_for(self, stage: str) -> str:
        if self.mode == "mock":
            return "mock"
        return self.models.get(stage, "unset")
