"""Serializable system specifications.

Every system is described as ``{"kind": "...", "params": {...}}``; the runtime objects that
evaluate orbits and distances are built from these models by
:func:`ergolab.systems.dynamics.build_system`.
"""

from fractions import Fraction
from typing import Annotated, Any, Literal

from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, field_validator, model_validator

ROTATION_DENOMINATOR = 10**12


class MetricParams(BaseModel):
    """Parameters of the symbolic metric ``base ** -j`` (j = first disagreement index)."""

    model_config = ConfigDict(frozen=True)

    base: int | None = Field(
        default=None,
        ge=2,
        description="Scale base of the symbolic metric; defaults to the alphabet size",
    )
    horizon: int = Field(
        default=48,
        ge=4,
        description="Number of symbols compared; points agreeing this far are at distance 0",
    )


class FullShiftParams(BaseModel):
    """Full shift on ``alphabet_size`` symbols."""

    model_config = ConfigDict(frozen=True)

    alphabet_size: int = Field(ge=2)


class SftParams(BaseModel):
    """Subshift of finite type given by forbidden words or a 0/1 transition matrix."""

    model_config = ConfigDict(frozen=True)

    alphabet_size: int = Field(default=2, ge=2, le=10)
    forbidden: tuple[str, ...] = ()
    transition: tuple[tuple[int, ...], ...] | None = None

    @field_validator("forbidden")
    @classmethod
    def _words_are_digits(cls, words: tuple[str, ...]) -> tuple[str, ...]:
        for word in words:
            if not word or not word.isdigit():
                raise ValueError(f"Forbidden word {word!r} must be a nonempty string of digits")
        return words

    @model_validator(mode="after")
    def _check_constraints(self) -> "SftParams":
        if self.transition is not None and self.forbidden:
            raise ValueError("Give either forbidden words or a transition matrix, not both")
        for word in self.forbidden:
            if any(int(ch) >= self.alphabet_size for ch in word):
                raise ValueError(f"Forbidden word {word!r} uses symbols outside the alphabet")
        if self.transition is not None:
            size = len(self.transition)
            if size != self.alphabet_size or any(len(row) != size for row in self.transition):
                raise ValueError("Transition matrix must be square of size alphabet_size")
            if any(entry not in (0, 1) for row in self.transition for entry in row):
                raise ValueError("Transition matrix entries must be 0 or 1")
            if any(not any(row) for row in self.transition):
                raise ValueError("Transition matrix has an all-zero row")
            if any(not any(row[j] for row in self.transition) for j in range(size)):
                raise ValueError("Transition matrix has an all-zero column")
        return self


class OrbitClosureParams(BaseModel):
    """Orbit closure of a sequence produced by a named generator rule."""

    model_config = ConfigDict(frozen=True)

    generator: Literal["density_zero"] = "density_zero"
    alphabet_size: int = Field(default=2, ge=2)


class RotationParams(BaseModel):
    """Circle rotation by ``alpha``; stored as an exact reduced fraction string."""

    model_config = ConfigDict(frozen=True)

    alpha: str

    @field_validator("alpha", mode="before")
    @classmethod
    def _normalize_alpha(cls, value: Any) -> str:
        if isinstance(value, Fraction):
            angle = value
        elif isinstance(value, int):
            angle = Fraction(value)
        elif isinstance(value, float):
            angle = Fraction(value).limit_denominator(ROTATION_DENOMINATOR)
        elif isinstance(value, str):
            try:
                angle = Fraction(value.strip())
            except (ValueError, ZeroDivisionError) as e:
                raise ValueError(f"Cannot read rotation angle {value!r}") from e
        else:
            raise ValueError(f"Unsupported rotation angle {value!r}")
        angle %= 1
        return f"{angle.numerator}/{angle.denominator}"

    @property
    def angle(self) -> Fraction:
        """Rotation angle reduced mod 1."""
        return Fraction(self.alpha)


class IntervalPiece(BaseModel):
    """One analytic branch, valid from the previous breakpoint up to ``upper``."""

    model_config = ConfigDict(frozen=True)

    upper: float
    formula: str


class IntervalParams(BaseModel):
    """Piecewise formula table on the closed interval ``[lower, upper]`` in the variable x."""

    model_config = ConfigDict(frozen=True)

    lower: float = 0.0
    upper: float = 1.0
    pieces: tuple[IntervalPiece, ...]
    tolerance: float = Field(default=1e-9, gt=0)

    @model_validator(mode="after")
    def _check_pieces(self) -> "IntervalParams":
        if self.upper <= self.lower:
            raise ValueError("Interval must have lower < upper")
        if not self.pieces:
            raise ValueError("Interval map needs at least one piece")
        previous = self.lower
        for piece in self.pieces:
            if piece.upper <= previous:
                raise ValueError("Piece breakpoints must be strictly increasing inside the interval")
            previous = piece.upper
        if abs(previous - self.upper) > self.tolerance:
            raise ValueError("Last piece must end at the interval's upper endpoint")
        return self


class _SpecBase(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str | None = Field(default=None, description="Display name, e.g. the zoo entry")
    metric: MetricParams = MetricParams()


class FullShiftSpec(_SpecBase):
    """Full shift."""

    kind: Literal["full_shift"] = "full_shift"
    params: FullShiftParams


class SftSpec(_SpecBase):
    """Subshift of finite type."""

    kind: Literal["sft"] = "sft"
    params: SftParams


class OrbitClosureSpec(_SpecBase):
    """Orbit-closure subshift."""

    kind: Literal["orbit_closure"] = "orbit_closure"
    params: OrbitClosureParams = OrbitClosureParams()


class RotationSpec(_SpecBase):
    """Circle rotation."""

    kind: Literal["rotation"] = "rotation"
    params: RotationParams


class IntervalMapSpec(_SpecBase):
    """Continuous interval map."""

    kind: Literal["interval_map"] = "interval_map"
    params: IntervalParams


class ProductParams(BaseModel):
    """Pair of factor systems."""

    model_config = ConfigDict(frozen=True)

    factors: tuple["SystemSpec", "SystemSpec"]


class ProductSpec(_SpecBase):
    """Product system with the max metric."""

    kind: Literal["product"] = "product"
    params: ProductParams


SystemSpec = Annotated[
    FullShiftSpec | SftSpec | OrbitClosureSpec | RotationSpec | IntervalMapSpec | ProductSpec,
    Field(discriminator="kind"),
]

ProductParams.model_rebuild()

SYSTEM_SPEC_ADAPTER: TypeAdapter[SystemSpec] = TypeAdapter(SystemSpec)


def parse_system_spec(data: dict[str, Any]) -> SystemSpec:
    """
    Validate a ``{"kind": ..., "params": ...}`` mapping into a system specification.

    Raises:
        pydantic.ValidationError: If the mapping does not describe a valid system.
    """
    return SYSTEM_SPEC_ADAPTER.validate_python(data)


def dump_system_spec(spec: SystemSpec) -> dict[str, Any]:
    """Serialize a system specification to a JSON-compatible mapping."""
    return SYSTEM_SPEC_ADAPTER.dump_python(spec, mode="json")
