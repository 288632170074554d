"""
Runtime dynamical systems built from :mod:`ergolab.systems.models` specifications.

A system evaluates one continuous map ``f`` on a compact metric space ``(X, d)``. Besides
single steps and distances, every system produces *trajectories*: array encodings of an
orbit segment from which distances ``d(f^{i+t}(x), f^{j+t}(y))`` are computed in bulk. For
symbolic systems a trajectory is the materialized word (with ``horizon`` extra symbols so
the metric can look ahead); for real systems it is the array of coordinates.
"""

import functools
import itertools
import logging
import math
from abc import ABC, abstractmethod
from collections.abc import Callable, Sequence
from fractions import Fraction
from typing import Any

import mpmath
import networkx as nx
import numpy as np
import sympy
from numpy.lib.stride_tricks import sliding_window_view

from ..errors import IllegalPoint, InvalidParams, InvalidSystem, UnsupportedSystem
from .models import (
    ROTATION_DENOMINATOR,
    FullShiftSpec,
    IntervalMapSpec,
    IntervalParams,
    OrbitClosureSpec,
    ProductSpec,
    RotationSpec,
    SftSpec,
    SystemSpec,
)
from .points import GENERATORS, OrbitSegment, Point, SymbolicPoint

logger = logging.getLogger(__name__)


class DynamicalSystem(ABC):
    """A continuous map on a compact metric space."""

    symbolic: bool = False

    def __init__(self, spec: SystemSpec | None, name: str):
        self.spec = spec
        self.name = name

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name!r})"

    @abstractmethod
    def coerce(self, x: Any) -> Point:
        """
        Normalize ``x`` into this system's point type.

        Raises:
            IllegalPoint: If ``x`` is not in the phase space.
        """

    @abstractmethod
    def step(self, x: Point) -> Point:
        """Apply f once to an already coerced point."""

    def iterate(self, x: Point, k: int) -> Point:
        """Apply f ``k`` times."""
        for _ in range(k):
            x = self.step(x)
        return x

    @abstractmethod
    def distance(self, x: Point, y: Point) -> float:
        """Metric d on the phase space."""

    @property
    @abstractmethod
    def diameter(self) -> float:
        """Largest attainable distance."""

    @abstractmethod
    def trajectory(self, x: Point, n: int) -> Any:
        """Encoding of ``x, f(x), ..., f^{n-1}(x)`` usable by the distance kernels."""

    @abstractmethod
    def trajectory_distances(self, a: Any, i: int, b: Any, j: int, n: int) -> np.ndarray:
        """Array of ``d(f^{i+t}(x), f^{j+t}(y))`` for ``t < n``, with a, b trajectories of x, y."""

    @abstractmethod
    def distances_to(self, a: Any, n: int, center: Point) -> np.ndarray:
        """Array of ``d(f^t(x), center)`` for ``t < n``, with ``a`` a trajectory of x."""

    @abstractmethod
    def sample_points(self, rng: np.random.Generator, count: int) -> list[Point]:
        """Draw ``count`` points of the phase space from ``rng``."""

    def fixed_points(self) -> list[Point]:
        """Known fixed points (possibly empty)."""
        return []

    def landmarks(self) -> list[Point]:
        """Distinguished points: fixed points, short periodic orbits, generators."""
        return self.fixed_points()

    def sort_key(self, x: Point) -> tuple:
        """Key ordering points lexicographically for deterministic witness selection."""
        return (float(x),)

    def coordinates(self, a: Any) -> np.ndarray:
        """Real coordinates of a trajectory (real systems only)."""
        raise UnsupportedSystem(f"System '{self.name}' has no real coordinates")

    def trajectories(self, points: Sequence[Point], n: int) -> list[Any]:
        """Trajectories of several points."""
        return [self.trajectory(x, n) for x in points]

    def orbit_segment(self, x: Point, n: int) -> OrbitSegment:
        """Materialized states ``x, f(x), ..., f^{n-1}(x)``."""
        states = [x]
        for _ in range(n - 1):
            states.append(self.step(states[-1]))
        return OrbitSegment(base=x, states=tuple(states))

    def is_fixed(self, x: Point, tol: float = 0.0) -> bool:
        """Whether ``f(x) = x`` up to ``tol``."""
        return self.distance(self.step(x), x) <= tol


class SymbolicSystem(DynamicalSystem):
    """One-sided subshift with the metric ``base ** -(first disagreement index)``."""

    symbolic = True

    def __init__(self, spec: SystemSpec, name: str, alphabet_size: int):
        super().__init__(spec, name)
        self.alphabet_size = alphabet_size
        self.base = spec.metric.base or alphabet_size
        self.horizon = spec.metric.horizon

    @abstractmethod
    def is_legal_word(self, word: Sequence[int]) -> bool:
        """Whether ``word`` occurs in some point of the subshift."""

    @abstractmethod
    def count_words(self, n: int) -> int:
        """Exact number of legal words of length ``n``."""

    def coerce(self, x: Any) -> SymbolicPoint:
        if not isinstance(x, SymbolicPoint):
            raise IllegalPoint(f"System '{self.name}' expects a symbolic point, got {type(x).__name__}")
        length = len(x.prefix) + 2 * max(len(x.tail), 1) + self.horizon
        word = x.word(length)
        if word.min() < 0 or word.max() >= self.alphabet_size:
            raise IllegalPoint(f"Point {x.label()} uses symbols outside the alphabet")
        if not self.is_legal_word(word):
            raise IllegalPoint(f"Point {x.label()} contains a word not allowed in '{self.name}'")
        return x

    def step(self, x: SymbolicPoint) -> SymbolicPoint:
        return x.shifted()

    def iterate(self, x: SymbolicPoint, k: int) -> SymbolicPoint:
        return x.shifted(k)

    def distance(self, x: SymbolicPoint, y: SymbolicPoint) -> float:
        mismatch = np.flatnonzero(x.word(self.horizon) != y.word(self.horizon))
        if mismatch.size == 0:
            return 0.0
        return float(self.base) ** -int(mismatch[0])

    @property
    def diameter(self) -> float:
        return 1.0

    def agreement_length(self, epsilon: float) -> int:
        """Smallest J with ``base ** -J <= epsilon``: d <= epsilon iff the first J symbols agree."""
        j = 0
        while j < self.horizon and float(self.base) ** -j > epsilon:
            j += 1
        return j

    def trajectory(self, x: SymbolicPoint, n: int) -> np.ndarray:
        return x.word(n + self.horizon)

    def trajectory_distances(self, a: np.ndarray, i: int, b: np.ndarray, j: int, n: int) -> np.ndarray:
        span = n + self.horizon - 1
        wa, wb = a[i:i + span], b[j:j + span]
        if wa.size < span or wb.size < span:
            raise ValueError("Trajectory too short for the requested window")
        mismatch = np.flatnonzero(wa != wb)
        if mismatch.size == 0:
            return np.zeros(n)
        times = np.arange(n)
        idx = np.searchsorted(mismatch, times)
        first = np.where(idx < mismatch.size, mismatch[np.minimum(idx, mismatch.size - 1)], span)
        lag = first - times
        return np.where(lag >= self.horizon, 0.0, float(self.base) ** -lag.astype(float))

    def distances_to(self, a: np.ndarray, n: int, center: SymbolicPoint) -> np.ndarray:
        windows = sliding_window_view(a[:n + self.horizon - 1], self.horizon)[:n]
        mismatch = windows != center.word(self.horizon)
        first = mismatch.argmax(axis=1)
        return np.where(mismatch.any(axis=1), float(self.base) ** -first.astype(float), 0.0)

    def orbit_segment(self, x: SymbolicPoint, n: int) -> OrbitSegment:
        return OrbitSegment(base=x, states=tuple(x.shifted(k) for k in range(n)))

    def sort_key(self, x: SymbolicPoint) -> tuple:
        return tuple(int(s) for s in x.word(self.horizon))


class SubshiftOfFiniteType(SymbolicSystem):
    """
    Subshift of finite type presented by its higher-block transition graph.

    Graph nodes are the legal words of length ``memory``; an edge ``u -> v`` labeled ``s``
    means ``u + (s,)`` is allowed and ``v`` is its last ``memory`` symbols. The graph is
    pruned to its essential part, so every node extends both ways.
    """

    def __init__(
            self,
            spec: SystemSpec,
            name: str,
            alphabet_size: int,
            forbidden: Sequence[tuple[int, ...]] = (),
            transition: Sequence[Sequence[int]] | None = None,
        ):
        super().__init__(spec, name, alphabet_size)
        symbols = range(alphabet_size)
        if transition is not None:
            self.memory = 1
            allowed = [(a, b) for a in symbols for b in symbols if transition[a][b]]
        else:
            longest = max((len(w) for w in forbidden), default=1)
            self.memory = max(1, longest - 1)
            allowed = [
                word for word in itertools.product(symbols, repeat=self.memory + 1)
                if not _contains_any(word, forbidden)
            ]
        graph = nx.DiGraph()
        for word in allowed:
            graph.add_edge(word[:-1], word[1:], symbol=word[-1])
        graph = _essential_part(graph)
        if graph.number_of_nodes() == 0:
            raise InvalidSystem(f"Subshift '{name}' is empty")
        self.graph = graph
        self.states = sorted(graph.nodes)
        self._edge_words = frozenset(u + (data["symbol"],) for u, _, data in graph.edges(data=True))

    @functools.cache  # noqa: B019
    def _short_words(self, length: int) -> frozenset[tuple[int, ...]]:
        return frozenset(
            node[i:i + length] for node in self.states for i in range(self.memory - length + 1)
        )

    def is_legal_word(self, word: Sequence[int]) -> bool:
        word = tuple(int(s) for s in word)
        if len(word) <= self.memory:
            return word in self._short_words(len(word))
        span = self.memory + 1
        return all(word[i:i + span] in self._edge_words for i in range(len(word) - span + 1))

    def transfer_matrix(self) -> np.ndarray:
        """0/1 adjacency matrix of the transition graph over ``self.states``, exact integers."""
        matrix = nx.to_numpy_array(self.graph, nodelist=self.states, dtype=int, weight=None)
        return matrix.astype(object)

    def count_words(self, n: int) -> int:
        if n <= self.memory:
            return len(self._short_words(n))
        matrix = self.transfer_matrix()
        counts = np.ones(len(self.states), dtype=object)
        for _ in range(n - self.memory):
            counts = matrix @ counts
        return int(counts.sum())

    def fixed_points(self) -> list[SymbolicPoint]:
        points = []
        for symbol in range(self.alphabet_size):
            node = (symbol,) * self.memory
            if self.graph.has_edge(node, node):
                points.append(SymbolicPoint.periodic((symbol,)))
        return points

    def periodic_points(self, max_period: int = 4, limit: int = 8) -> list[SymbolicPoint]:
        """Points on short cycles of the transition graph, shortest first."""
        cycles = sorted(
            nx.simple_cycles(self.graph, length_bound=max_period),
            key=lambda cycle: (len(cycle), min(cycle)),
        )
        points: list[SymbolicPoint] = []
        for cycle in cycles[:limit]:
            start = cycle.index(min(cycle))
            cycle = cycle[start:] + cycle[:start]
            labels = tuple(node[-1] for node in cycle[1:] + cycle[:1])
            points.append(SymbolicPoint(prefix=cycle[0], tail=labels))
        return points

    def landmarks(self) -> list[SymbolicPoint]:
        seen: set[tuple] = set()
        points = []
        for point in self.fixed_points() + self.periodic_points():
            key = self.sort_key(point)
            if key not in seen:
                seen.add(key)
                points.append(point)
        return points

    def sample_points(self, rng: np.random.Generator, count: int, length: int = 24) -> list[SymbolicPoint]:
        points = []
        for _ in range(count):
            node = self.states[int(rng.integers(len(self.states)))]
            word = list(node)
            for _ in range(max(0, length - self.memory)):
                successors = sorted(self.graph.successors(node))
                node = successors[int(rng.integers(len(successors)))]
                word.append(node[-1])
            path, cycle = self._closing(node)
            points.append(SymbolicPoint(prefix=tuple(word) + path, tail=cycle))
        return points

    def point_with_prefix(self, word: Sequence[int]) -> SymbolicPoint:
        """A legal point starting with the legal ``word`` (at least ``memory`` long)."""
        word = tuple(int(s) for s in word)
        path, cycle = self._closing(word[-self.memory:])
        return SymbolicPoint(prefix=word + path, tail=cycle)

    @functools.cache  # noqa: B019
    def _closing(self, node: tuple[int, ...]) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Labels of a path from ``node`` to a cycle, and the cycle's labels."""
        cycle_edges = nx.find_cycle(self.graph, source=node)
        entry = cycle_edges[0][0]
        path = nx.shortest_path(self.graph, node, entry)
        return tuple(v[-1] for v in path[1:]), tuple(v[-1] for _, v in cycle_edges)

    def connecting_symbols(
            self,
            left: Sequence[int],
            right: Sequence[int],
            min_insert: int = 0,
            max_insert: int | None = None,
            accept: Callable[[int], bool] | None = None,
        ) -> tuple[int, ...] | None:
        """
        Shortest symbols ``c`` such that ``left + c + right`` is legal.

        Both words must be legal and at least ``memory`` long. Among the admissible lengths
        ``min_insert <= |c| <= max_insert`` (filtered by ``accept``) the smallest is used;
        ties go to the walk found first in sorted breadth-first order.
        """
        r = self.memory
        source, target = tuple(int(s) for s in left[-r:]), tuple(int(s) for s in right[:r])
        if source not in self.graph or target not in self.graph:
            return None
        if max_insert is None:
            max_insert = min_insert + 2 * len(self.states)
        layers: list[dict[tuple, tuple | None]] = [{source: None}]
        for edges in range(1, max_insert + r + 1):
            frontier: dict[tuple, tuple | None] = {}
            for node in sorted(layers[-1]):
                for successor in sorted(self.graph.successors(node)):
                    frontier.setdefault(successor, node)
            layers.append(frontier)
            inserted = edges - r
            if inserted < min_insert or target not in frontier:
                continue
            if accept is not None and not accept(inserted):
                continue
            node, walk = target, [target]
            for layer in range(edges, 0, -1):
                node = layers[layer][node]
                walk.append(node)
            labels = [n[-1] for n in reversed(walk[:-1])]
            return tuple(labels[:inserted])
        return None


class OrbitClosureShift(SymbolicSystem):
    """Orbit closure of a generator sequence; its language is the generator's factor set."""

    max_word_length = 512

    def __init__(self, spec: SystemSpec, name: str, generator: str, alphabet_size: int = 2):
        super().__init__(spec, name, alphabet_size)
        self.generator = generator

    def factors(self, n: int) -> frozenset[tuple[int, ...]]:
        """Distinct factors of length ``n`` of the generator."""
        return _generator_factors(self.generator, n)

    def is_legal_word(self, word: Sequence[int]) -> bool:
        return tuple(int(s) for s in word) in self.factors(len(word))

    def count_words(self, n: int) -> int:
        if n > self.max_word_length:
            raise UnsupportedSystem(
                f"Word enumeration for '{self.name}' is capped at n <= {self.max_word_length}",
            )
        return len(self.factors(n))

    def generator_point(self, offset: int = 0) -> SymbolicPoint:
        """The generator sequence shifted by ``offset``."""
        return SymbolicPoint.from_generator(self.generator, offset)

    def fixed_points(self) -> list[SymbolicPoint]:
        return [SymbolicPoint.periodic((0,))]

    def landmarks(self) -> list[SymbolicPoint]:
        return [
            SymbolicPoint.periodic((0,)),
            self.generator_point(0),
            SymbolicPoint.eventually_periodic((1,), (0,)),
            SymbolicPoint.eventually_periodic((0, 1), (0,)),
        ]

    def cylinder_points(self, length: int) -> list[SymbolicPoint]:
        """One point in every cylinder of the given length (generator shifts cover all factors)."""
        return [SymbolicPoint.periodic((0,))] + [
            self.generator_point(offset) for offset in range(5 * length + 8)
        ]

    def sample_points(self, rng: np.random.Generator, count: int) -> list[SymbolicPoint]:
        points = []
        for k in range(count):
            if k % 4 == 3:
                points.append(SymbolicPoint.eventually_periodic((0,) * int(rng.integers(0, 32)) + (1,), (0,)))
            else:
                points.append(self.generator_point(int(rng.integers(0, 1 << 16))))
        return points


@functools.lru_cache(maxsize=128)
def _generator_factors(generator: str, n: int) -> frozenset[tuple[int, ...]]:
    # Every factor of length n of the density-zero sequence starts before index 4n.
    sequence = GENERATORS[generator](0, 5 * n + 8)
    return frozenset(map(tuple, sliding_window_view(sequence, n).tolist()))


class Rotation(DynamicalSystem):
    """Circle rotation ``x -> x + alpha mod 1`` in exact rational arithmetic."""

    def __init__(self, spec: SystemSpec, name: str, angle: Fraction):
        super().__init__(spec, name)
        self.angle = angle % 1

    def coerce(self, x: Any) -> Fraction:
        if isinstance(x, bool) or not isinstance(x, (Fraction, int, float)):
            raise IllegalPoint(f"Rotation expects a real point, got {type(x).__name__}")
        value = Fraction(x).limit_denominator(ROTATION_DENOMINATOR) if isinstance(x, float) else Fraction(x)
        if not 0 <= value < 1:
            raise IllegalPoint(f"Point {x} is outside [0, 1)")
        return value

    def step(self, x: Fraction) -> Fraction:
        return (x + self.angle) % 1

    def iterate(self, x: Fraction, k: int) -> Fraction:
        return (x + k * self.angle) % 1

    def distance(self, x: Fraction, y: Fraction) -> float:
        gap = abs(Fraction(x) - Fraction(y))
        return float(min(gap, 1 - gap))

    @property
    def diameter(self) -> float:
        return 0.5

    def trajectory(self, x: Fraction, n: int) -> np.ndarray:
        x = Fraction(x)
        p, q = self.angle.numerator, self.angle.denominator
        start, stride, denominator = x.numerator * q, p * x.denominator, x.denominator * q
        return np.array([((start + t * stride) % denominator) / denominator for t in range(n)])

    def trajectory_distances(self, a: np.ndarray, i: int, b: np.ndarray, j: int, n: int) -> np.ndarray:
        gap = np.abs(a[i:i + n] - b[j:j + n])
        return np.minimum(gap, 1.0 - gap)

    def distances_to(self, a: np.ndarray, n: int, center: Fraction) -> np.ndarray:
        gap = np.abs(a[:n] - float(center))
        return np.minimum(gap, 1.0 - gap)

    def fixed_points(self) -> list[Fraction]:
        return [Fraction(0)] if self.angle == 0 else []

    def landmarks(self) -> list[Fraction]:
        return [Fraction(0), Fraction(1, 2), Fraction(1, 4), Fraction(3, 4)]

    def sample_points(self, rng: np.random.Generator, count: int) -> list[Fraction]:
        return [Fraction(int(rng.integers(0, ROTATION_DENOMINATOR)), ROTATION_DENOMINATOR) for _ in range(count)]

    def coordinates(self, a: np.ndarray) -> np.ndarray:
        return a


class IntervalSystem(DynamicalSystem):
    """
    Continuous map of a closed interval given by a piecewise formula table.

    Single steps and grid scans use floats. Orbit segments of expanding maps are iterated
    in mpmath with ``bits_per_step`` extra bits per step, so rounding never outgrows the
    comparison tolerance.
    """

    def __init__(self, spec: SystemSpec, name: str, params: IntervalParams):
        super().__init__(spec, name)
        self.lower, self.upper = params.lower, params.upper
        self.tolerance = params.tolerance
        symbol = sympy.Symbol("x", real=True)
        branches = []
        for index, piece in enumerate(params.pieces):
            try:
                expr = sympy.parse_expr(piece.formula, local_dict={"x": symbol})
            except (SyntaxError, TypeError, sympy.SympifyError) as e:
                raise InvalidSystem(f"Cannot parse formula {piece.formula!r}: {e}") from e
            if not expr.free_symbols <= {symbol}:
                raise InvalidSystem(f"Formula {piece.formula!r} may only use the variable x")
            last = index == len(params.pieces) - 1
            branches.append((expr, True if last else symbol <= piece.upper))
        self.expression = sympy.Piecewise(*branches)
        self._vector = sympy.lambdify(symbol, self.expression, modules="numpy")
        self._scalar = sympy.lambdify(symbol, self.expression, modules="math")
        self._precise = sympy.lambdify(symbol, self.expression, modules="mpmath")

        grid = np.linspace(self.lower, self.upper, 1025)
        values = self._raw(grid)
        if not np.all(np.isfinite(values)):
            raise InvalidSystem(f"Map '{name}' is not finite on its interval")
        if values.min() < self.lower - self.tolerance or values.max() > self.upper + self.tolerance:
            raise InvalidSystem(f"Map '{name}' does not map [{self.lower}, {self.upper}] into itself")
        slopes = np.abs(np.diff(values) / np.diff(grid))
        self.lipschitz = float(slopes.max())
        self.bits_per_step = math.ceil(math.log2(self.lipschitz)) if self.lipschitz > 1 else 0

    def _raw(self, xs: np.ndarray) -> np.ndarray:
        return np.broadcast_to(np.asarray(self._vector(xs), dtype=float), xs.shape)

    def evaluate(self, xs: np.ndarray) -> np.ndarray:
        """Vectorized f on an array of points, clipped into the interval."""
        return np.clip(self._raw(np.asarray(xs, dtype=float)), self.lower, self.upper)

    def evaluate_power(self, xs: np.ndarray, q: int) -> np.ndarray:
        """Vectorized f^q."""
        values = np.asarray(xs, dtype=float)
        for _ in range(q):
            values = self.evaluate(values)
        return values

    def turning_points(self, resolution: int = 2**16) -> list[float]:
        """
        Interior points where ``f`` switches between increasing and decreasing.

        Each switch is bracketed on a midpoint grid of ``resolution`` cells, refined by ternary
        search and snapped to a nearby fraction with denominator ``<= 10**6`` when that point is
        at least as extreme.
        """
        width = (self.upper - self.lower) / resolution
        xs = self.lower + width * (np.arange(resolution) + 0.5)
        steps = np.sign(np.diff(self._raw(xs)))
        moving = np.flatnonzero(steps)
        switches = np.flatnonzero(steps[moving][1:] != steps[moving][:-1])
        return [
            self._refine_turn(float(xs[moving[k]]), float(xs[moving[k + 1] + 1]), steps[moving[k]] > 0)
            for k in switches
        ]

    def _refine_turn(self, a: float, b: float, peak: bool) -> float:
        sign = 1.0 if peak else -1.0
        for _ in range(200):
            if b - a <= 4 * np.spacing(b):
                break
            m1, m2 = a + (b - a) / 3, b - (b - a) / 3
            if sign * self._scalar(m1) < sign * self._scalar(m2):
                a = m1
            else:
                b = m2
        c = (a + b) / 2
        snapped = float(Fraction(c).limit_denominator(10**6))
        close = abs(snapped - c) <= 1e-9 * (self.upper - self.lower)
        if close and sign * self._scalar(snapped) >= sign * self._scalar(c):
            return snapped
        return c

    def coerce(self, x: Any) -> float:
        if isinstance(x, bool) or not isinstance(x, (int, float, Fraction, np.floating)):
            raise IllegalPoint(f"Interval map expects a real point, got {type(x).__name__}")
        value = float(x)
        if not self.lower - self.tolerance <= value <= self.upper + self.tolerance:
            raise IllegalPoint(f"Point {value} is outside [{self.lower}, {self.upper}]")
        return min(max(value, self.lower), self.upper)

    def step(self, x: float) -> float:
        return min(max(float(self._scalar(x)), self.lower), self.upper)

    def distance(self, x: float, y: float) -> float:
        return abs(float(x) - float(y))

    @property
    def diameter(self) -> float:
        return self.upper - self.lower

    def _float_orbit_is_accurate(self, n: int) -> bool:
        # Rounding grows by at most 2^bits_per_step per step; stay below the tolerance.
        return self.bits_per_step * n <= 52 + math.log2(self.tolerance)

    def trajectory(self, x: float, n: int) -> np.ndarray:
        out = np.empty(n)
        if self._float_orbit_is_accurate(n):
            value = float(x)
            for t in range(n):
                out[t] = value
                value = self.step(value)
            return out
        with mpmath.workprec(53 + self.bits_per_step * n + 64):
            # Read the start as its shortest decimal; the float itself is dyadic and
            # collapses onto endpoints under doubling maps.
            value = mpmath.mpf(repr(float(x)))
            lower, upper = mpmath.mpf(self.lower), mpmath.mpf(self.upper)
            for t in range(n):
                out[t] = float(value)
                value = min(max(self._precise(value), lower), upper)
        return out

    def trajectories(self, points: Sequence[float], n: int) -> list[np.ndarray]:
        if not self._float_orbit_is_accurate(n):
            return super().trajectories(points, n)
        out = np.empty((n, len(points)))
        values = np.asarray(points, dtype=float)
        for t in range(n):
            out[t] = values
            values = self.evaluate(values)
        return list(out.T)

    def orbit_segment(self, x: float, n: int) -> OrbitSegment:
        return OrbitSegment(base=x, states=tuple(self.trajectory(x, n).tolist()))

    def trajectory_distances(self, a: np.ndarray, i: int, b: np.ndarray, j: int, n: int) -> np.ndarray:
        return np.abs(a[i:i + n] - b[j:j + n])

    def distances_to(self, a: np.ndarray, n: int, center: float) -> np.ndarray:
        return np.abs(a[:n] - float(center))

    def fixed_points(self) -> list[float]:
        from ..interval.analysis import find_fixed_points  # noqa: PLC0415

        return [r.location for r in find_fixed_points(self) if r.status != "degenerate"]

    def landmarks(self) -> list[float]:
        points = self.fixed_points()
        for extra in (self.lower, (self.lower + self.upper) / 2, self.upper):
            if all(abs(extra - p) > self.tolerance for p in points):
                points.append(extra)
        return points

    def sample_points(self, rng: np.random.Generator, count: int) -> list[float]:
        return [float(v) for v in rng.uniform(self.lower, self.upper, size=count)]

    def coordinates(self, a: np.ndarray) -> np.ndarray:
        return a


class ProductSystem(DynamicalSystem):
    """Product of two systems with the max metric."""

    def __init__(self, spec: SystemSpec, name: str, factors: tuple[DynamicalSystem, DynamicalSystem]):
        super().__init__(spec, name)
        self.factors = factors

    def coerce(self, x: Any) -> tuple:
        if not isinstance(x, tuple) or len(x) != 2:
            raise IllegalPoint("Product points are pairs")
        return tuple(f.coerce(c) for f, c in zip(self.factors, x, strict=True))

    def step(self, x: tuple) -> tuple:
        return tuple(f.step(c) for f, c in zip(self.factors, x, strict=True))

    def iterate(self, x: tuple, k: int) -> tuple:
        return tuple(f.iterate(c, k) for f, c in zip(self.factors, x, strict=True))

    def distance(self, x: tuple, y: tuple) -> float:
        return max(f.distance(a, b) for f, a, b in zip(self.factors, x, y, strict=True))

    @property
    def diameter(self) -> float:
        return max(f.diameter for f in self.factors)

    def trajectory(self, x: tuple, n: int) -> tuple:
        return tuple(f.trajectory(c, n) for f, c in zip(self.factors, x, strict=True))

    def trajectory_distances(self, a: tuple, i: int, b: tuple, j: int, n: int) -> np.ndarray:
        first, second = self.factors
        return np.maximum(
            first.trajectory_distances(a[0], i, b[0], j, n),
            second.trajectory_distances(a[1], i, b[1], j, n),
        )

    def distances_to(self, a: tuple, n: int, center: tuple) -> np.ndarray:
        first, second = self.factors
        return np.maximum(first.distances_to(a[0], n, center[0]), second.distances_to(a[1], n, center[1]))

    def fixed_points(self) -> list[tuple]:
        return list(itertools.product(*(f.fixed_points() for f in self.factors)))

    def landmarks(self) -> list[tuple]:
        return list(itertools.product(*(f.landmarks()[:3] for f in self.factors)))

    def sample_points(self, rng: np.random.Generator, count: int) -> list[tuple]:
        first, second = self.factors
        return list(zip(first.sample_points(rng, count), second.sample_points(rng, count), strict=True))

    def sort_key(self, x: tuple) -> tuple:
        return tuple(itertools.chain.from_iterable(f.sort_key(c) for f, c in zip(self.factors, x, strict=True)))


class PowerSystem(DynamicalSystem):
    """The system ``(X, f^N)`` on the phase space and metric of ``base``."""

    def __init__(self, base: DynamicalSystem, power: int):
        if power < 1:
            raise InvalidParams("Power must be a positive integer")
        super().__init__(base.spec, f"{base.name}^{power}")
        self.base = base
        self.power = power

    def coerce(self, x: Any) -> Point:
        return self.base.coerce(x)

    def step(self, x: Point) -> Point:
        return self.base.iterate(x, self.power)

    def distance(self, x: Point, y: Point) -> float:
        return self.base.distance(x, y)

    @property
    def diameter(self) -> float:
        return self.base.diameter

    def trajectory(self, x: Point, n: int) -> Any:
        return self.base.trajectory(x, self.power * n)

    def trajectory_distances(self, a: Any, i: int, b: Any, j: int, n: int) -> np.ndarray:
        N = self.power  # noqa: N806
        return self.base.trajectory_distances(a, N * i, b, N * j, N * (n - 1) + 1)[::N]

    def distances_to(self, a: Any, n: int, center: Point) -> np.ndarray:
        return self.base.distances_to(a, self.power * (n - 1) + 1, center)[::self.power]

    def fixed_points(self) -> list[Point]:
        return self.base.fixed_points()

    def landmarks(self) -> list[Point]:
        return self.base.landmarks()

    def sample_points(self, rng: np.random.Generator, count: int) -> list[Point]:
        return self.base.sample_points(rng, count)

    def sort_key(self, x: Point) -> tuple:
        return self.base.sort_key(x)


def _contains_any(word: tuple[int, ...], forbidden: Sequence[tuple[int, ...]]) -> bool:
    for bad in forbidden:
        span = len(bad)
        if any(word[i:i + span] == bad for i in range(len(word) - span + 1)):
            return True
    return False


def _essential_part(graph: nx.DiGraph) -> nx.DiGraph:
    graph = graph.copy()
    while True:
        dead = [n for n in graph.nodes if graph.in_degree(n) == 0 or graph.out_degree(n) == 0]
        if not dead:
            return graph
        graph.remove_nodes_from(dead)


@functools.lru_cache(maxsize=64)
def build_system(spec: SystemSpec) -> DynamicalSystem:
    """
    Build the runtime system for a specification.

    Raises:
        InvalidSystem: If the specification violates a system invariant.
    """
    name = spec.name or spec.kind
    if isinstance(spec, FullShiftSpec):
        return SubshiftOfFiniteType(spec, name, spec.params.alphabet_size)
    if isinstance(spec, SftSpec):
        forbidden = [tuple(int(ch) for ch in word) for word in spec.params.forbidden]
        return SubshiftOfFiniteType(
            spec, name, spec.params.alphabet_size, forbidden=forbidden, transition=spec.params.transition,
        )
    if isinstance(spec, OrbitClosureSpec):
        return OrbitClosureShift(spec, name, spec.params.generator, spec.params.alphabet_size)
    if isinstance(spec, RotationSpec):
        return Rotation(spec, name, spec.params.angle)
    if isinstance(spec, IntervalMapSpec):
        return IntervalSystem(spec, name, spec.params)
    if isinstance(spec, ProductSpec):
        first, second = (build_system(f) for f in spec.params.factors)
        return ProductSystem(spec, name, (first, second))
    raise InvalidSystem(f"Unsupported system kind '{spec.kind}'")


def power_system(sys: DynamicalSystem, power: int) -> PowerSystem:
    """View ``sys`` iterated ``power`` times as a system in its own right."""
    return PowerSystem(sys, power)


def step(sys: DynamicalSystem, x: Any) -> Point:
    """
    Evaluate f once.

    Raises:
        IllegalPoint: If ``x`` violates the system's constraints.
    """
    return sys.step(sys.coerce(x))


def orbit_segment(sys: DynamicalSystem, x: Any, n: int) -> OrbitSegment:
    """
    Return ``[x, f(x), ..., f^{n-1}(x)]``.

    Raises:
        InvalidParams: If ``n < 1``.
        IllegalPoint: If ``x`` violates the system's constraints.
    """
    if n < 1:
        raise InvalidParams("Orbit length must be at least 1")
    return sys.orbit_segment(sys.coerce(x), n)


def dist(sys: DynamicalSystem, x: Any, y: Any) -> float:
    """
    Distance between two points of the phase space.

    Examples:
        symbolic 0110..., 0100... -> 0.25
        circle 0.05, 0.95 -> 0.1
    """
    return sys.distance(sys.coerce(x), sys.coerce(y))
