"""Exception hierarchy for ergolab."""


class ErgolabError(Exception):
    """Base class for every error raised by ergolab."""


class ConfigError(ErgolabError, ValueError):
    """Invalid experiment configuration; the message names the offending field path."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class UnknownSystem(ErgolabError, ValueError):
    """Zoo lookup for a name that is not registered."""


class InvalidSystem(ErgolabError, ValueError):
    """A system specification violates its invariants."""


class IllegalPoint(ErgolabError, ValueError):
    """A point does not lie in the phase space of the system."""


class NonPositiveRadius(ErgolabError, ValueError):
    """A radius or scale that must be positive is not."""


class UnsupportedSystem(ErgolabError, ValueError):
    """The operation is not available for this class of system."""


class EmptySchedule(ErgolabError, ValueError):
    """A gap schedule without blocks."""


class NonPositiveEntry(ErgolabError, ValueError):
    """A block length or gap below 1."""


class IndexOutOfRange(ErgolabError, IndexError):
    """A block index outside 1..K."""


class InvalidParams(ErgolabError, ValueError):
    """Search or construction parameters outside their admissible range."""


class InvalidEpsilon(InvalidParams):
    """Scale outside the interval required by a construction."""


class NotFixedPoint(ErgolabError, ValueError):
    """A point passed as fixed point is moved by the map."""


class ModulusTooLarge(ErgolabError, ValueError):
    """The continuity modulus fails on the verification grid."""


class HorizonTooShort(ErgolabError, ValueError):
    """Block length too small for the power-lift bounds."""


class FamilyMismatch(ErgolabError, ValueError):
    """Measures or test functions do not belong to the same system."""


class SearchFailed(ErgolabError):
    """No tracing witness at budget for some members of a separated family."""

    def __init__(self, indices: list[tuple[int, ...]]):
        self.indices = indices
        shown = ", ".join("".join(str(s) for s in xi) for xi in indices[:8])
        more = "" if len(indices) <= 8 else f" (+{len(indices) - 8} more)"
        super().__init__(f"No tracing point found at budget for xi = {shown}{more}")


class SeparationFailure(ErgolabError):
    """Two family members are not separated within the lemma's horizon."""

    def __init__(self, xi: tuple[int, ...], other: tuple[int, ...], achieved: float, horizon: int):
        self.xi = xi
        self.other = other
        self.achieved = achieved
        self.horizon = horizon
        super().__init__(
            f"Members {''.join(map(str, xi))} and {''.join(map(str, other))} reach only "
            f"distance {achieved:.6g} within {horizon} steps",
        )
