"""Configurations, member-typed graphs, frameworks and stresses.

Everything here is immutable after construction.  Unordered vertex pairs are
stored canonically as ``(min, max)`` so a stress can never disagree with
itself on ``{i, j}`` versus ``{j, i}``.
"""

from __future__ import annotations

import enum
import hashlib
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np


class RigidityError(Exception):
    """Base class for errors raised by this package."""


class InputError(RigidityError, ValueError):
    """Malformed or inconsistent input data."""


class PreconditionError(RigidityError):
    """Input is well formed but violates an operation's precondition."""


class UnsupportedRegimeError(PreconditionError):
    """The requested computation is outside the supported regime."""


class DegenerateKernelError(PreconditionError):
    """A kernel is too small to build the requested object."""


Pair = tuple[int, int]


def pair(i: int, j: int) -> Pair:
    """Canonical unordered pair."""
    i, j = int(i), int(j)
    return (i, j) if i < j else (j, i)


class MemberKind(str, enum.Enum):
    CABLE = "cable"
    STRUT = "strut"
    BAR = "bar"


@dataclass(frozen=True)
class Member:
    i: int
    j: int
    kind: MemberKind = MemberKind.BAR

    def __post_init__(self) -> None:
        if self.i == self.j:
            raise InputError(f"member ({self.i}, {self.j}) is a loop")
        if self.i > self.j:
            i, j = self.j, self.i
            object.__setattr__(self, "i", i)
            object.__setattr__(self, "j", j)
        object.__setattr__(self, "kind", MemberKind(self.kind))

    @property
    def pair(self) -> Pair:
        return (self.i, self.j)


class Configuration:
    """``n`` labeled points in ``d``-dimensional space.

    Coordinates are held as a read-only ``(n, d)`` float array.
    """

    __slots__ = ("_points",)

    def __init__(self, points: Sequence[Sequence[float]] | np.ndarray, dimension: int | None = None):
        arr = np.array(points, dtype=float)
        if arr.ndim == 1 and dimension is not None and dimension > 0:
            arr = arr.reshape(-1, dimension)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise InputError("configuration must be a non-empty (n, d) array of coordinates")
        if dimension is not None and arr.shape[1] != dimension:
            raise InputError(f"points have {arr.shape[1]} coordinates, expected {dimension}")
        if not np.all(np.isfinite(arr)):
            raise InputError("configuration has non-finite coordinates")
        arr.setflags(write=False)
        self._points = arr

    @property
    def points(self) -> np.ndarray:
        return self._points

    @property
    def n(self) -> int:
        return self._points.shape[0]

    @property
    def d(self) -> int:
        return self._points.shape[1]

    def __getitem__(self, i: int) -> np.ndarray:
        return self._points[i]

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Configuration):
            return NotImplemented
        return self._points.shape == other._points.shape and bool(np.array_equal(self._points, other._points))

    def __hash__(self) -> int:
        return hash((self._points.shape, self._points.tobytes()))

    def __repr__(self) -> str:
        return f"Configuration(n={self.n}, d={self.d})"

    def affine_dimension(self, rtol: float = 1e-10) -> int:
        """Dimension of the affine span of the points."""
        if self.n == 1:
            return 0
        centered = self._points - self._points.mean(axis=0)
        s = np.linalg.svd(centered, compute_uv=False)
        if s.size == 0 or s[0] == 0.0:
            return 0
        return int(np.sum(s > rtol * max(centered.shape) * s[0]))


class TensegrityGraph:
    """A vertex count plus members tagged cable, strut or bar."""

    __slots__ = ("_n", "_members", "_index")

    def __init__(self, vertex_count: int, members: Iterable[Member | tuple] = ()):
        if int(vertex_count) < 1:
            raise InputError("vertex_count must be positive")
        n = int(vertex_count)
        ms: list[Member] = []
        index: dict[Pair, int] = {}
        for m in members:
            if not isinstance(m, Member):
                m = Member(*m)
            if not (0 <= m.i < n and 0 <= m.j < n):
                raise InputError(f"member {m.pair} out of range for {n} vertices")
            if m.pair in index:
                raise InputError(f"duplicate member {m.pair}")
            index[m.pair] = len(ms)
            ms.append(m)
        self._n = n
        self._members = tuple(ms)
        self._index = index

    @classmethod
    def bars(cls, vertex_count: int, pairs: Iterable[tuple[int, int]]) -> "TensegrityGraph":
        return cls(vertex_count, (Member(i, j, MemberKind.BAR) for i, j in pairs))

    @property
    def vertex_count(self) -> int:
        return self._n

    @property
    def members(self) -> tuple[Member, ...]:
        return self._members

    @property
    def pairs(self) -> list[Pair]:
        return [m.pair for m in self._members]

    def __len__(self) -> int:
        return len(self._members)

    def __iter__(self) -> Iterator[Member]:
        return iter(self._members)

    def __contains__(self, p: object) -> bool:
        if isinstance(p, Member):
            p = p.pair
        if isinstance(p, tuple) and len(p) == 2:
            return pair(*p) in self._index
        return False

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TensegrityGraph):
            return NotImplemented
        return self._n == other._n and set(self._members) == set(other._members)

    def __hash__(self) -> int:
        return hash((self._n, frozenset(self._members)))

    def __repr__(self) -> str:
        return f"TensegrityGraph(n={self._n}, members={len(self._members)})"

    def member(self, i: int, j: int) -> Member:
        try:
            return self._members[self._index[pair(i, j)]]
        except KeyError:
            raise InputError(f"{pair(i, j)} is not a member") from None

    def row_of(self, i: int, j: int) -> int:
        try:
            return self._index[pair(i, j)]
        except KeyError:
            raise InputError(f"{pair(i, j)} is not a member") from None

    def is_bar_framework(self) -> bool:
        return all(m.kind is MemberKind.BAR for m in self._members)

    def is_complete(self) -> bool:
        return len(self._members) == self._n * (self._n - 1) // 2

    def adjacency(self) -> list[set[int]]:
        adj: list[set[int]] = [set() for _ in range(self._n)]
        for m in self._members:
            adj[m.i].add(m.j)
            adj[m.j].add(m.i)
        return adj

    def is_connected(self) -> bool:
        adj = self.adjacency()
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for w in adj[v] - seen:
                seen.add(w)
                stack.append(w)
        return len(seen) == self._n

    def without(self, i: int, j: int) -> "TensegrityGraph":
        p = pair(i, j)
        if p not in self._index:
            raise InputError(f"{p} is not a member")
        return TensegrityGraph(self._n, (m for m in self._members if m.pair != p))

    def with_kinds(self, kind: MemberKind) -> "TensegrityGraph":
        return TensegrityGraph(self._n, (Member(m.i, m.j, kind) for m in self._members))

    def fingerprint(self) -> str:
        """Stable hash of the vertex count and the sorted typed member list."""
        body = f"{self._n};" + ";".join(
            f"{m.i},{m.j},{m.kind.value}" for m in sorted(self._members, key=lambda m: m.pair)
        )
        return hashlib.sha256(body.encode()).hexdigest()[:16]


@dataclass(frozen=True)
class Framework:
    """A graph placed on a configuration: ``G(p)``."""

    graph: TensegrityGraph
    configuration: Configuration

    def __post_init__(self) -> None:
        if self.graph.vertex_count != self.configuration.n:
            raise InputError(
                f"graph has {self.graph.vertex_count} vertices but configuration has {self.configuration.n} points"
            )

    @property
    def n(self) -> int:
        return self.configuration.n

    @property
    def d(self) -> int:
        return self.configuration.d

    def with_configuration(self, q: Configuration) -> "Framework":
        return Framework(self.graph, q)


@dataclass(frozen=True)
class Stress:
    """Scalar per member, keyed by canonical pair.  Absent pairs are zero."""

    values: Mapping[Pair, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        canon: dict[Pair, float] = {}
        for (i, j), w in dict(self.values).items():
            p = pair(i, j)
            if i == j:
                raise InputError(f"stress on loop ({i}, {j})")
            if p in canon:
                raise InputError(f"stress given twice for {p}")
            canon[p] = float(w)
        object.__setattr__(self, "values", canon)

    @classmethod
    def zero(cls, graph: TensegrityGraph) -> "Stress":
        return cls({m.pair: 0.0 for m in graph})

    @classmethod
    def from_vector(cls, graph: TensegrityGraph, vector: Sequence[float] | np.ndarray) -> "Stress":
        vec = np.asarray(vector, dtype=float).ravel()
        if vec.size != len(graph):
            raise InputError(f"stress vector has {vec.size} entries, graph has {len(graph)} members")
        return cls({m.pair: float(w) for m, w in zip(graph, vec)})

    def __getitem__(self, p: tuple[int, int]) -> float:
        return self.values.get(pair(*p), 0.0)

    def get(self, i: int, j: int) -> float:
        return self.values.get(pair(i, j), 0.0)

    def vector(self, graph: TensegrityGraph) -> np.ndarray:
        check_stress_keys(graph, self)
        return np.array([self.values.get(m.pair, 0.0) for m in graph], dtype=float)

    def scaled(self, factor: float) -> "Stress":
        return Stress({p: factor * w for p, w in self.values.items()})

    def divided(self, divisor: float) -> "Stress":
        """Divide every entry; unlike ``scaled(1 / x)`` this maps the entry ``x`` to exactly 1."""
        return Stress({p: w / divisor for p, w in self.values.items()})

    def is_zero(self, atol: float = 0.0) -> bool:
        return all(abs(w) <= atol for w in self.values.values())

    def max_abs(self) -> float:
        return max((abs(w) for w in self.values.values()), default=0.0)


def check_stress_keys(graph: TensegrityGraph, w: Stress) -> None:
    """Stress keys must be members of the graph (missing members read as 0)."""
    extra = [p for p in w.values if p not in graph]
    if extra:
        raise InputError(f"stress keyed on non-members {sorted(extra)[:5]}")


def default_tolerance(*configs: Configuration) -> float:
    scale = max((float(np.max(np.abs(c.points))) for c in configs), default=0.0)
    return 1e-9 * (1.0 + scale)


def _check_same_shape(p: Configuration, q: Configuration) -> None:
    if p.n != q.n or p.d != q.d:
        raise InputError(f"configurations differ in shape: ({p.n}, {p.d}) vs ({q.n}, {q.d})")


def member_length(f: Framework, m: Member | tuple[int, int]) -> float:
    """Euclidean length of a member of ``f``."""
    i, j = (m.i, m.j) if isinstance(m, Member) else pair(*m)
    if (i, j) not in f.graph:
        raise InputError(f"{(i, j)} is not a member")
    pts = f.configuration.points
    return float(np.linalg.norm(pts[i] - pts[j]))


def _lengths(points: np.ndarray, graph: TensegrityGraph) -> np.ndarray:
    if len(graph) == 0:
        return np.zeros(0)
    idx = np.array(graph.pairs)
    return np.linalg.norm(points[idx[:, 0]] - points[idx[:, 1]], axis=1)


def dominates(strong: Framework, weak: Configuration, tol: float | None = None) -> bool:
    """True when ``G(weak) <= G(strong)``.

    Going from the strong configuration to the weak one, cables may not
    lengthen, struts may not shorten, and bars keep their length.
    """
    _check_same_shape(strong.configuration, weak)
    if tol is None:
        tol = default_tolerance(strong.configuration, weak)
    lp = _lengths(strong.configuration.points, strong.graph)
    lq = _lengths(weak.points, strong.graph)
    for m, a, b in zip(strong.graph, lp, lq):
        if m.kind is MemberKind.CABLE and b > a + tol:
            return False
        if m.kind is MemberKind.STRUT and b < a - tol:
            return False
        if m.kind is MemberKind.BAR and abs(b - a) > tol:
            return False
    return True


def equivalent(f: Framework, q: Configuration, tol: float | None = None) -> bool:
    """Domination in both directions: every member length agrees within ``tol``."""
    _check_same_shape(f.configuration, q)
    if tol is None:
        tol = default_tolerance(f.configuration, q)
    lp = _lengths(f.configuration.points, f.graph)
    lq = _lengths(q.points, f.graph)
    return bool(np.all(np.abs(lp - lq) <= tol))


def congruent(p: Configuration, q: Configuration, tol: float | None = None) -> bool:
    """All pairwise distances agree within ``tol``."""
    _check_same_shape(p, q)
    if tol is None:
        tol = default_tolerance(p, q)
    if p.n == 1:
        return True
    iu = np.array(list(combinations(range(p.n), 2)))
    dp = np.linalg.norm(p.points[iu[:, 0]] - p.points[iu[:, 1]], axis=1)
    dq = np.linalg.norm(q.points[iu[:, 0]] - q.points[iu[:, 1]], axis=1)
    return bool(np.all(np.abs(dp - dq) <= tol))
