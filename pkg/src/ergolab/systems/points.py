"""Point representations and the generator rules of orbit-closure subshifts."""

from collections.abc import Callable
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..errors import IllegalPoint


def density_zero_word(start: int, length: int) -> np.ndarray:
    """
    Symbols ``start .. start+length-1`` of the sequence with ones exactly at indices 2^j.

    Examples:
        density_zero_word(0, 9) -> [0, 1, 1, 0, 1, 0, 0, 0, 1]
    """
    out = np.zeros(length, dtype=np.int64)
    power = 1
    while power < start + length:
        if power >= start:
            out[power - start] = 1
        power *= 2
    return out


GENERATORS: dict[str, Callable[[int, int], np.ndarray]] = {
    "density_zero": density_zero_word,
}


@dataclass(frozen=True)
class SymbolicPoint:
    """
    A one-sided sequence given lazily as a finite prefix plus an extension rule.

    The extension is either a periodic ``tail`` repeated forever or a named ``generator``
    read from index ``offset`` on. Exactly one of the two must be set.
    """

    prefix: tuple[int, ...] = ()
    tail: tuple[int, ...] = ()
    generator: str | None = None
    offset: int = 0

    def __post_init__(self) -> None:
        if bool(self.tail) == (self.generator is not None):
            raise IllegalPoint("A symbolic point needs exactly one of a periodic tail or a generator")
        if self.generator is not None and self.generator not in GENERATORS:
            raise IllegalPoint(f"Unknown generator rule '{self.generator}'")
        if self.offset < 0:
            raise IllegalPoint("Generator offset must be nonnegative")

    @classmethod
    def periodic(cls, word: tuple[int, ...] | list[int] | str) -> "SymbolicPoint":
        """The point ``word word word ...``."""
        return cls(tail=_as_symbols(word))

    @classmethod
    def from_generator(cls, name: str, offset: int = 0) -> "SymbolicPoint":
        """The generator sequence read from index ``offset``."""
        return cls(generator=name, offset=offset)

    @classmethod
    def eventually_periodic(
            cls,
            prefix: tuple[int, ...] | list[int] | str,
            tail: tuple[int, ...] | list[int] | str,
        ) -> "SymbolicPoint":
        """The point ``prefix tail tail ...``."""
        return cls(prefix=_as_symbols(prefix), tail=_as_symbols(tail))

    def word(self, length: int) -> np.ndarray:
        """Materialize the first ``length`` symbols."""
        out = np.empty(length, dtype=np.int64)
        head = min(len(self.prefix), length)
        out[:head] = self.prefix[:head]
        rest = length - head
        if rest > 0:
            if self.tail:
                repeats = -(-rest // len(self.tail))
                out[head:] = np.tile(np.asarray(self.tail, dtype=np.int64), repeats)[:rest]
            else:
                out[head:] = GENERATORS[self.generator](self.offset, rest)
        return out

    def symbol(self, index: int) -> int:
        """Symbol at position ``index``."""
        return int(self.word(index + 1)[index])

    def shifted(self, steps: int = 1) -> "SymbolicPoint":
        """The point with its first ``steps`` symbols dropped."""
        if steps <= len(self.prefix):
            return SymbolicPoint(self.prefix[steps:], self.tail, self.generator, self.offset)
        remaining = steps - len(self.prefix)
        if self.tail:
            cut = remaining % len(self.tail)
            return SymbolicPoint((), self.tail[cut:] + self.tail[:cut])
        return SymbolicPoint((), (), self.generator, self.offset + remaining)

    def label(self, length: int = 16) -> str:
        """Short human-readable form, e.g. ``0110100010...``."""
        return "".join(str(s) for s in self.word(length)) + "..."


def _as_symbols(word: tuple[int, ...] | list[int] | str) -> tuple[int, ...]:
    if isinstance(word, str):
        return tuple(int(ch) for ch in word)
    return tuple(int(s) for s in word)


Point = SymbolicPoint | float | Fraction | tuple


@dataclass(frozen=True)
class OrbitSegment:
    """The states ``x, f(x), ..., f^{n-1}(x)``."""

    base: Point
    states: tuple = field(default_factory=tuple)

    @property
    def length(self) -> int:
        """Number of materialized states."""
        return len(self.states)

    def __getitem__(self, index: int) -> Point:
        return self.states[index]
