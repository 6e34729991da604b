"""Reproducible graphs, configurations and the named examples used by the tests.

Randomness always comes from ``numpy.random.Generator`` with the PCG64 bit
generator (``numpy.random.default_rng(seed)``).  Uniform floats are not
generic in the algebraic sense; rank attained at a sampled configuration is
used as the stand-in, which is sound for lower-bounding generic rank.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Callable

import numpy as np

from .linalg import DEFAULT_TOL, NumericTolerance, equilibrium_stress_basis, verify_equilibrium
from .model import (
    Configuration,
    Framework,
    InputError,
    Member,
    MemberKind,
    Stress,
    TensegrityGraph,
)

RNG_ALGORITHM = "numpy.PCG64"


def make_rng(seed: int | np.random.Generator) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(int(seed)))


def complete_graph(n: int, kind: MemberKind = MemberKind.BAR) -> TensegrityGraph:
    return TensegrityGraph(n, (Member(i, j, kind) for i, j in combinations(range(n), 2)))


def complete_bipartite(a: int, b: int) -> TensegrityGraph:
    """Parts ``0..a-1`` and ``a..a+b-1``."""
    if a < 1 or b < 1:
        raise InputError("both parts must be non-empty")
    return TensegrityGraph.bars(a + b, ((i, a + j) for i in range(a) for j in range(b)))


def cycle_graph(n: int) -> TensegrityGraph:
    return TensegrityGraph.bars(n, ((i, (i + 1) % n) for i in range(n)))


def random_graph(n: int, p: float, rng: np.random.Generator) -> TensegrityGraph:
    pairs = [(i, j) for i, j in combinations(range(n), 2) if rng.random() < p]
    return TensegrityGraph.bars(n, pairs)


def random_configuration(n: int, d: int, rng: int | np.random.Generator) -> Configuration:
    if n < 1 or d < 1:
        raise InputError("n and d must be positive")
    return Configuration(make_rng(rng).uniform(0.0, 1.0, size=(n, d)))


def _convex_cyclic_order(pts: np.ndarray) -> list[int]:
    c = pts.mean(axis=0)
    ang = np.arctan2(pts[:, 1] - c[1], pts[:, 0] - c[0])
    order = [int(k) for k in np.argsort(ang, kind="stable")]
    for k in range(len(order)):
        a, b, e = pts[order[k]], pts[order[(k + 1) % 4]], pts[order[(k + 2) % 4]]
        u, v = b - a, e - b
        cross = u[0] * v[1] - u[1] * v[0]
        scale = np.linalg.norm(u) * np.linalg.norm(v)
        if not cross > 1e-12 * max(scale, 1e-300):
            raise InputError("points are not in strictly convex position")
    return order


def convex_quadrilateral_tensegrity(points) -> tuple[Framework, Stress]:
    """Four planar points in convex position: sides as cables, diagonals as struts.

    Vertex labels follow the input order; sides are read off the cyclic
    order around the centroid.  The stress is the unique (up to scale)
    equilibrium stress, signed +1 on the first side.  It is built from the
    affine dependence ``lam`` of the four points (``sum lam_i p_i = 0``,
    ``sum lam_i = 0``) as ``w_ij = -lam_i lam_j``, so its stress matrix is
    ``lam lam^T`` and small integer inputs give exact values.
    """
    pts = np.asarray(points, dtype=float)
    if pts.shape != (4, 2):
        raise InputError("need exactly 4 points in the plane")
    order = _convex_cyclic_order(pts)
    sides = {tuple(sorted((order[k], order[(k + 1) % 4]))) for k in range(4)}
    members = [
        Member(i, j, MemberKind.CABLE if (i, j) in sides else MemberKind.STRUT)
        for i, j in combinations(range(4), 2)
    ]
    f = Framework(TensegrityGraph(4, members), Configuration(pts))
    lam = []
    for k in range(4):
        a, b, c = (pts[m] for m in range(4) if m != k)
        u, v = b - a, c - a
        lam.append((-1) ** k * (u[0] * v[1] - u[1] * v[0]))
    w = Stress({(i, j): -lam[i] * lam[j] for i, j in combinations(range(4), 2)})
    w = w.divided(w.get(*min(sides)))
    if not verify_equilibrium(f, w):
        raise InputError("quadrilateral stress failed the equilibrium check")
    return f, w


@dataclass(frozen=True)
class NamedExample:
    framework: Framework
    stress: Stress | None = None
    partner: Framework | None = None
    partner_stress: Stress | None = None
    shared: tuple[tuple[int, int], ...] = ()
    common_member: tuple[int, int] | None = None
    note: str = ""


def _square() -> NamedExample:
    f, w = convex_quadrilateral_tensegrity([(0, 0), (1, 0), (1, 1), (0, 1)])
    return NamedExample(f, w, note="unit square, sides cables, diagonals struts")


def _k4() -> NamedExample:
    return NamedExample(Framework(complete_graph(4), random_configuration(4, 2, 4)), note="K4 in the plane")


def _c4() -> NamedExample:
    return NamedExample(Framework(cycle_graph(4), random_configuration(4, 2, 4)), note="4-cycle in the plane")


def _two_k4_glue() -> NamedExample:
    # two K4s glued along the triangle {0,1,2}; common bar (1,2)
    pts = random_configuration(5, 2, 20_240_601).points
    left = Framework(complete_graph(4), Configuration(pts[:4]))
    right = Framework(complete_graph(4), Configuration(pts[[0, 1, 2, 4]]))
    return NamedExample(
        left,
        partner=right,
        shared=((0, 0), (1, 1), (2, 2)),
        common_member=(1, 2),
        note="two K4 frameworks sharing three vertices",
    )


def _k55_d3() -> NamedExample:
    return NamedExample(
        Framework(complete_bipartite(5, 5), random_configuration(10, 3, 55)),
        note="K(5,5) at a random configuration in 3-space",
    )


def spoke_triangle_tensegrity(points, t: NumericTolerance = DEFAULT_TOL) -> tuple[Framework, Stress]:
    """Triangle ``0,1,2`` of struts with cables from each corner to an interior point ``3``."""
    pts = np.asarray(points, dtype=float)
    members = [Member(i, j, MemberKind.STRUT) for i, j in ((0, 1), (1, 2), (0, 2))]
    members += [Member(i, 3, MemberKind.CABLE) for i in range(3)]
    f = Framework(TensegrityGraph(4, members), Configuration(pts))
    basis = equilibrium_stress_basis(f, t)
    if len(basis) != 1:
        raise InputError("expected a 1-dimensional stress space")
    w = basis[0]
    return f, w.divided(w.get(0, 3))


def _spoke_glue() -> NamedExample:
    # a strut of one super-stable tensegrity laid on a cable of another: 2 shared vertices
    a, wa = spoke_triangle_tensegrity([(0, 0), (2, 0), (1, 2), (1, 0.7)])
    # in b, cable (0,3) runs from (2,0) to (1,2): the same segment as strut (1,2) of a
    b, wb = spoke_triangle_tensegrity([(2, 0), (-0.5, 3), (2.5, 3.5), (1, 2)])
    return NamedExample(
        a,
        wa,
        partner=b,
        partner_stress=wb,
        shared=((1, 0), (2, 3)),
        common_member=(1, 2),
        note="two super-stable tensegrities overlapping in only 2 vertices",
    )


PENTAGON = ((0.0, 0.0), (2.0, -0.3), (3.1, 1.4), (1.6, 2.9), (-0.4, 1.8))


def _pentagon() -> NamedExample:
    # quads (0,1,2,3) and (0,1,3,4) of a convex pentagon, sharing 0,1,3
    P = np.array(PENTAGON)
    a, wa = convex_quadrilateral_tensegrity(P[[0, 1, 2, 3]])
    b, wb = convex_quadrilateral_tensegrity(P[[0, 1, 3, 4]])
    # in a, (1,3) is a diagonal (strut); in b, vertex 1 -> 3 (local 1 -> 2) is a side (cable)
    return NamedExample(
        a,
        wa,
        partner=b,
        partner_stress=wb,
        shared=((0, 0), (1, 1), (3, 2)),
        common_member=(1, 3),
        note="two convex quadrilateral tensegrities on five convex points",
    )


EXAMPLES: dict[str, Callable[[], NamedExample]] = {
    "square": _square,
    "k4": _k4,
    "c4": _c4,
    "two-k4-glue": _two_k4_glue,
    "k55-d3": _k55_d3,
    "spoke-glue": _spoke_glue,
    "pentagon": _pentagon,
}


def named_examples() -> dict[str, NamedExample]:
    return {name: build() for name, build in EXAMPLES.items()}
