"""Configuration models for ergolab experiments."""

from typing import Any, Literal

from pydantic import BaseModel, Field, model_validator

from ..properties import PropertyGrid

ExperimentKind = Literal[
    "entropy",
    "trace",
    "trace-verify",
    "app",
    "sapp",
    "spec",
    "unique-ergodicity",
    "cluster",
    "interval-classify",
    "family",
    "dichotomy",
]


def _default_grid() -> PropertyGrid:
    return PropertyGrid(delta1=[0.25], delta2=[0.1], epsilon=[0.25], n=[16, 32, 64], blocks=32)


class OutputConfig(BaseModel):
    """Where reports are written."""

    dir: str = "results"
    name: str | None = Field(
        default=None,
        description="Report file stem; defaults to '<experiment>-<system>'",
    )
    csv: bool = True


class EntropyParams(BaseModel):
    epsilons: list[float] = Field(default_factory=lambda: [0.5, 0.25], min_length=1)
    n_values: list[int] = Field(default_factory=lambda: list(range(4, 15)), min_length=3)
    method: Literal["auto", "brute", "greedy"] = "auto"
    set_budget: int = Field(default=4096, ge=1, description="Candidates scanned by greedy separated sets")
    lap_resolution: int = Field(default=2**21, ge=16, description="Grid cells scanned for turning points of the map")


class TraceParams(BaseModel):
    """One tracing search, optionally under a power of the map followed by the lift to the map."""

    targets: list[Any] | None = Field(default=None, description="Encoded points; landmarks when omitted")
    n: int = Field(default=16, ge=1, description="Block length (of the lifted certificate when power > 1)")
    delta1: float = Field(default=0.25, ge=0)
    delta2: float = Field(default=0.1, ge=0, le=1)
    epsilon: float = Field(default=0.25, gt=0)
    blocks: int = Field(default=32, ge=1)
    strategy: Literal["auto", "exact", "fixed_point", "pool"] = "auto"
    gap_mode: Literal["joint", "unit"] = "joint"
    grid_resolution: int = Field(default=256, ge=2)
    power: int = Field(default=1, ge=1)
    gamma: float | None = Field(default=None, gt=0, description="Continuity modulus; searched when omitted")


class AppParams(BaseModel):
    grid: PropertyGrid = Field(default_factory=_default_grid)
    gap_mode: Literal["joint", "unit"] = "joint"
    grid_resolution: int = Field(default=256, ge=2)


class SpecParams(BaseModel):
    profiles: list[list[int]] = Field(default_factory=lambda: [[4, 4], [3, 5, 2], [8, 1, 6]], min_length=1)
    epsilons: list[float] = Field(default_factory=lambda: [0.5, 0.25], min_length=1)
    max_spacing: int = Field(default=16, ge=0)
    period_bound: int = Field(default=8, ge=1)


class FamilyParams(BaseModel):
    """Test functions used by the measure experiments."""

    bumps: int = Field(default=8, ge=0)
    radius: float = Field(default=0.2, gt=0)
    harmonics: int = Field(default=4, ge=0)


class UniqueErgodicityParams(BaseModel):
    starts: list[Any] | None = None
    start_count: int = Field(default=8, ge=8)
    n_values: list[int] = Field(default_factory=lambda: [100, 1000, 10000], min_length=1)
    threshold: float = Field(default=0.05, gt=0)
    factor: float = Field(default=2.0, ge=1)
    functions: FamilyParams = Field(default_factory=FamilyParams)


class ClusterParams(BaseModel):
    starts: list[Any] | None = None
    start_count: int = Field(default=8, ge=2)
    length: int = Field(default=10000, ge=1)
    eta: float = Field(default=0.05, gt=0)
    functions: FamilyParams = Field(default_factory=FamilyParams)


class ClassifierParams(BaseModel):
    period_bound: int = Field(default=8, ge=1)
    resolution: int = Field(default=2**12, ge=2)
    samples: int = Field(default=64, ge=1)
    horizon: int = Field(default=1000, ge=2)
    lap_n: int = Field(default=16, ge=3)
    lap_resolution: int = Field(default=2**21, ge=16, description="Grid cells scanned for turning points of the map")
    app_delta: float = Field(default=0.1, gt=0, le=1)
    app_epsilon: float = Field(default=0.1, gt=0)
    app_n: int = Field(default=512, ge=4)
    cluster_eta: float = Field(default=0.05, gt=0)
    cluster_orbits: int = Field(default=8, ge=2)
    cluster_length: int = Field(default=2000, ge=1)
    fnxgex_samples: int = Field(default=128, ge=1)
    fnxgex_n: int = Field(default=64, ge=1)


class SeparatedFamilyParams(BaseModel):
    base_points: list[Any] | None = Field(default=None, description="Four encoded points; selected when omitted")
    m: int = Field(default=8, ge=1)
    delta: float = Field(default=0.05, gt=0, lt=0.1)
    depth: int = Field(default=6, ge=1)
    gamma: float = Field(default=0.25, gt=0)
    gap_policy: Literal["minimal", "staggered"] = "minimal"
    candidates: int = Field(default=16, ge=4, description="Samples added to landmarks when selecting base points")


class DichotomyParams(BaseModel):
    app: AppParams = Field(
        default_factory=lambda: AppParams(
            grid=PropertyGrid(delta1=[0.5], delta2=[0.25], epsilon=[0.25], n=[64, 128], blocks=8),
        ),
    )
    entropy: EntropyParams = Field(
        default_factory=lambda: EntropyParams(epsilons=[0.25], n_values=[32, 64, 128, 256]),
        description="Horizons of the entropy fit",
    )
    unique_ergodicity: UniqueErgodicityParams = Field(default_factory=UniqueErgodicityParams)
    cluster_eta: float = Field(default=0.05, gt=0)
    zero_entropy: float = Field(default=0.05, ge=0, description="Slopes at or below this count as zero entropy")


class ExperimentConfig(BaseModel):
    """Main configuration model."""

    experiment: ExperimentKind
    system: str | dict[str, Any] | None = Field(
        default=None,
        description="Zoo name such as 'golden_mean_sft' or 'logistic(2.5)', or a full system specification",
    )
    seed: int = 0
    budget: int = Field(default=256, ge=1, description="Candidate tracers examined per search")
    certificate: str | None = Field(default=None, description="Certificate or family JSON for verify runs")
    output: OutputConfig = Field(default_factory=OutputConfig)
    entropy: EntropyParams = Field(default_factory=EntropyParams)
    trace: TraceParams = Field(default_factory=TraceParams)
    app: AppParams = Field(default_factory=AppParams)
    spec: SpecParams = Field(default_factory=SpecParams)
    unique_ergodicity: UniqueErgodicityParams = Field(default_factory=UniqueErgodicityParams)
    cluster: ClusterParams = Field(default_factory=ClusterParams)
    interval: ClassifierParams = Field(default_factory=ClassifierParams)
    family: SeparatedFamilyParams = Field(default_factory=SeparatedFamilyParams)
    dichotomy: DichotomyParams = Field(default_factory=DichotomyParams)

    @model_validator(mode="after")
    def _system_required(self) -> "ExperimentConfig":
        if self.experiment == "trace-verify":
            if self.certificate is None:
                raise ValueError("'trace-verify' needs a certificate path")
        elif self.system is None:
            raise ValueError(f"'{self.experiment}' needs a system")
        return self
