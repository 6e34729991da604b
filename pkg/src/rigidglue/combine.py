"""Gluing frameworks along shared vertices.

Combined vertex numbering puts the shared vertices first (in the order the
pairs were given), then the vertices only in the first framework, then those
only in the second, each group in ascending original order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .certify import Verdict, check_super_stability
from .linalg import (
    DEFAULT_TOL,
    NumericTolerance,
    max_rank_stress,
    numeric_rank,
    stress_matrix,
)
from .model import (
    Configuration,
    Framework,
    InputError,
    Member,
    MemberKind,
    Pair,
    PreconditionError,
    Stress,
    TensegrityGraph,
    default_tolerance,
    pair,
)


@dataclass(frozen=True)
class SharedVertexMap:
    pairs: tuple[tuple[int, int], ...]
    n1: int
    n2: int

    def __post_init__(self) -> None:
        ps = tuple((int(a), int(b)) for a, b in self.pairs)
        object.__setattr__(self, "pairs", ps)
        left = [a for a, _ in ps]
        right = [b for _, b in ps]
        if len(set(left)) != len(left) or len(set(right)) != len(right):
            raise InputError("shared vertex map must be injective on both sides")
        if any(not 0 <= a < self.n1 for a in left) or any(not 0 <= b < self.n2 for b in right):
            raise InputError("shared vertex index out of range")

    @classmethod
    def parse(cls, text: str, n1: int, n2: int) -> "SharedVertexMap":
        """From ``"a:b,a:b,..."``."""
        try:
            pairs = [tuple(int(x) for x in item.split(":")) for item in text.split(",") if item.strip()]
        except ValueError:
            raise InputError(f"cannot parse shared vertex map {text!r}; expected 'a:b,a:b,...'") from None
        if any(len(p) != 2 for p in pairs):
            raise InputError(f"cannot parse shared vertex map {text!r}; expected 'a:b,a:b,...'")
        return cls(tuple(pairs), n1, n2)  # type: ignore[arg-type]

    def __len__(self) -> int:
        return len(self.pairs)

    @property
    def total(self) -> int:
        return self.n1 + self.n2 - len(self.pairs)

    @property
    def embed1(self) -> list[int]:
        """Combined index of every vertex of the first framework."""
        out = [-1] * self.n1
        for k, (a, _) in enumerate(self.pairs):
            out[a] = k
        nxt = len(self.pairs)
        for v in range(self.n1):
            if out[v] < 0:
                out[v] = nxt
                nxt += 1
        return out

    @property
    def embed2(self) -> list[int]:
        out = [-1] * self.n2
        for k, (_, b) in enumerate(self.pairs):
            out[b] = k
        nxt = self.n1
        for v in range(self.n2):
            if out[v] < 0:
                out[v] = nxt
                nxt += 1
        return out

    def shared_in_first(self) -> set[int]:
        return {a for a, _ in self.pairs}

    def to_second(self, v: int) -> int:
        for a, b in self.pairs:
            if a == v:
                return b
        raise InputError(f"vertex {v} of the first framework is not shared")


def extend_stress_matrix(S: np.ndarray, embed: Sequence[int], total_n: int) -> np.ndarray:
    """Zero-pad ``S`` into a ``total_n`` square matrix, row ``k`` going to ``embed[k]``."""
    S = np.asarray(S, dtype=float)
    idx = np.asarray(embed, dtype=int)
    if idx.shape != (S.shape[0],):
        raise InputError("embedding must list one target index per row")
    if len(set(idx.tolist())) != len(idx) or np.any(idx < 0) or np.any(idx >= total_n):
        raise InputError("embedding must be injective into range(total_n)")
    out = np.zeros((total_n, total_n))
    out[np.ix_(idx, idx)] = S
    return out


def blend_stress_matrices(
    S1: np.ndarray, S2: np.ndarray, t: float, tol: NumericTolerance = DEFAULT_TOL
) -> tuple[np.ndarray, int]:
    """``t S1 + (1 - t) S2`` and its numeric rank."""
    S1, S2 = np.asarray(S1, dtype=float), np.asarray(S2, dtype=float)
    if S1.shape != S2.shape or S1.ndim != 2 or S1.shape[0] != S1.shape[1]:
        raise InputError("blend needs two square matrices of the same size")
    if t == 0 or t == 1:
        raise InputError("blend parameter must differ from 0 and 1")
    B = t * S1 + (1.0 - t) * S2
    return B, numeric_rank(B, tol)


def _check_shared(f1: Framework, f2: Framework, shared: SharedVertexMap, tol: float | None) -> None:
    if f1.d != f2.d:
        raise InputError(f"dimension mismatch: {f1.d} vs {f2.d}")
    if shared.n1 != f1.n or shared.n2 != f2.n:
        raise InputError("shared vertex map sized for different frameworks")
    if tol is None:
        tol = default_tolerance(f1.configuration, f2.configuration)
    p, q = f1.configuration.points, f2.configuration.points
    for a, b in shared.pairs:
        if np.max(np.abs(p[a] - q[b])) > tol:
            raise InputError(f"shared vertex {a}:{b} has different coordinates in the two frameworks")


def _shared_span_ok(f1: Framework, shared: SharedVertexMap, t: NumericTolerance) -> bool:
    pts = f1.configuration.points[[a for a, _ in shared.pairs]]
    return Configuration(pts).affine_dimension(t.rank_threshold_factor) == f1.d


def combined_configuration(f1: Framework, f2: Framework, shared: SharedVertexMap) -> Configuration:
    out = np.zeros((shared.total, f1.d))
    out[shared.embed2] = f2.configuration.points
    out[shared.embed1] = f1.configuration.points
    return Configuration(out)


def pad_stress(w: Stress, embed: Sequence[int]) -> dict[Pair, float]:
    return {pair(embed[i], embed[j]): v for (i, j), v in w.values.items()}


def superpose_stresses(w1: Stress, w2: Stress, shared: SharedVertexMap,
                       c1: float = 1.0, c2: float = 1.0) -> dict[Pair, float]:
    """``c1 w1 + c2 w2`` after zero-padding both into combined numbering."""
    out: dict[Pair, float] = {}
    for c, w, embed in ((c1, w1, shared.embed1), (c2, w2, shared.embed2)):
        for p, v in pad_stress(w, embed).items():
            out[p] = out.get(p, 0.0) + c * v
    return out


def glue_union(f1: Framework, f2: Framework, shared: SharedVertexMap, tol: float | None = None) -> Framework:
    """Union of two frameworks, keeping only the first's members among shared vertices.

    A member of the second framework is dropped when both of its endpoints are
    shared and the first framework does not contain it.
    """
    _check_shared(f1, f2, shared, tol)
    if len(shared) < f1.d + 1:
        raise PreconditionError(f"need at least d+1 = {f1.d + 1} shared vertices, got {len(shared)}")
    e1, e2 = shared.embed1, shared.embed2
    n_shared = len(shared)
    members: dict[Pair, Member] = {}
    for m in f1.graph:
        p = pair(e1[m.i], e1[m.j])
        members[p] = Member(*p, m.kind)
    for m in f2.graph:
        p = pair(e2[m.i], e2[m.j])
        if p in members:
            continue
        if p[1] < n_shared:  # both endpoints shared, absent from the first framework
            continue
        members[p] = Member(*p, m.kind)
    graph = TensegrityGraph(shared.total, sorted(members.values(), key=lambda m: m.pair))
    return Framework(graph, combined_configuration(f1, f2, shared))


def superimpose_graphs(f1: Framework, f2: Framework, shared: SharedVertexMap) -> dict[Pair, list[MemberKind]]:
    """Combined pair -> kinds of the members landing on it (one entry per input framework)."""
    out: dict[Pair, list[MemberKind]] = {}
    for f, embed in ((f1, shared.embed1), (f2, shared.embed2)):
        for m in f.graph:
            out.setdefault(pair(embed[m.i], embed[m.j]), []).append(m.kind)
    return out


@dataclass(frozen=True)
class CombineResult:
    framework: Framework
    witness: Stress
    witness_rank: int
    expected_rank: int
    erased: Pair
    fallback: bool
    inconclusive: bool
    reason: str
    ranks: tuple[int, int]
    erased_value: float

    @property
    def verdict(self) -> Verdict:
        return Verdict.INCONCLUSIVE if self.inconclusive else Verdict.CERTIFIED_YES


def combine_erase_bar(
    f1: Framework,
    f2: Framework,
    shared: SharedVertexMap,
    bar: tuple[int, int],
    seed: int = 0,
    tol: NumericTolerance = DEFAULT_TOL,
    trials: int = 8,
    coord_tol: float | None = None,
) -> CombineResult:
    """Superimpose two globally rigid bar frameworks sharing ``d+1`` vertices and erase a common bar.

    ``bar`` is given in the first framework's vertex labels; both endpoints
    must be shared.  The witness stress is built from maximum-rank stresses
    of the two inputs: rescaled to ``+1`` and ``-1`` on the bar, zero-padded,
    and averaged, so it vanishes on the erased bar.
    """
    d = f1.d
    _check_shared(f1, f2, shared, coord_tol)
    if not (f1.graph.is_bar_framework() and f2.graph.is_bar_framework()):
        raise InputError("combine_erase_bar works on bar frameworks")
    if len(shared) != d + 1:
        raise PreconditionError(f"need exactly d+1 = {d + 1} shared vertices, got {len(shared)}")
    if f1.n < d + 2 or f2.n < d + 2:
        raise PreconditionError("each framework needs at least d+2 vertices")
    i1, j1 = pair(*bar)
    if (i1, j1) not in f1.graph:
        raise InputError(f"{(i1, j1)} is not a bar of the first framework")
    i2, j2 = pair(shared.to_second(i1), shared.to_second(j1))
    if (i2, j2) not in f2.graph:
        raise InputError(f"{(i1, j1)} maps to {(i2, j2)}, which is not a bar of the second framework")
    if not _shared_span_ok(f1, shared, tol):
        raise PreconditionError("shared vertices lie in a (d-1)-dimensional hyperplane")

    rng = np.random.default_rng(seed)
    w1, r1 = max_rank_stress(f1, trials, int(rng.integers(2**63)), tol)
    w2, r2 = max_rank_stress(f2, trials, int(rng.integers(2**63)), tol)
    n = shared.total
    e1, e2 = shared.embed1, shared.embed2
    erased = pair(e1[i1], e1[j1])

    kinds = superimpose_graphs(f1, f2, shared)
    kinds.pop(erased)
    graph = TensegrityGraph(n, (Member(*p, MemberKind.BAR) for p in sorted(kinds)))
    framework = Framework(graph, combined_configuration(f1, f2, shared))

    a, b = w1.get(i1, j1), w2.get(i2, j2)
    small = 1e-12
    notes = []
    if r1 != f1.n - d - 1 or r2 != f2.n - d - 1:
        notes.append(f"input stress ranks {r1}, {r2} short of {f1.n - d - 1}, {f2.n - d - 1}")
    if abs(a) <= small * max(w1.max_abs(), 1e-300) or abs(b) <= small * max(w2.max_abs(), 1e-300):
        # one input already carries no stress on the bar; pad it alone
        fallback = True
        w, e = (w1, e1) if abs(a) <= small * max(w1.max_abs(), 1e-300) else (w2, e2)
        values = pad_stress(w, e)
        erased_value = values.pop(erased, 0.0)
        expected = (f1.n if w is w1 else f2.n) - d - 1
    else:
        fallback = False
        # rescale first so the bar carries exactly +1 and -1, then average
        values = superpose_stresses(w1.divided(a), w2.divided(-b), shared, 0.5, 0.5)
        erased_value = values.pop(erased)
        expected = n - d - 1
    witness = Stress({p: values.get(p, 0.0) for p in graph.pairs})
    rank = numeric_rank(stress_matrix(graph, witness), tol)
    inconclusive = bool(notes) or rank != expected
    if rank != expected:
        notes.append(f"witness stress rank {rank} != {expected}")
    reason = "; ".join(notes) if notes else (
        f"witness stress of rank {rank} = n - d - 1 vanishes on erased bar {erased}"
        if not fallback else f"input stress vanishes on {erased}; padded single stress of rank {rank}")
    return CombineResult(framework, witness, rank, expected, erased, fallback, inconclusive, reason, (r1, r2), erased_value)


def superimpose_tensegrities(
    t1: Framework,
    w1: Stress,
    t2: Framework,
    w2: Stress,
    shared: SharedVertexMap,
    cancel: tuple[int, int],
    tol: NumericTolerance = DEFAULT_TOL,
    coord_tol: float | None = None,
) -> tuple[Framework, Stress]:
    """Superimpose two super-stable tensegrities, cancelling a cable of one against a strut of the other.

    ``cancel`` is given in the first tensegrity's labels.  Both stresses are
    rescaled by positive factors so they sum to zero on ``cancel``.  Other
    doubly covered pairs become a cable or strut by the sign of the summed
    stress, or vanish when it is zero; bars stay bars.
    """
    d = t1.d
    _check_shared(t1, t2, shared, coord_tol)
    if len(shared) < d + 1:
        raise PreconditionError(f"need at least d+1 = {d + 1} shared vertices, got {len(shared)}")
    if not _shared_span_ok(t1, shared, tol):
        raise PreconditionError("shared vertices lie in a (d-1)-dimensional hyperplane")
    i1, j1 = pair(*cancel)
    m1 = t1.graph.member(i1, j1)
    try:
        i2, j2 = shared.to_second(i1), shared.to_second(j1)
    except InputError:
        raise InputError(f"cancel member {(i1, j1)} must join two shared vertices") from None
    m2 = t2.graph.member(i2, j2)
    if {m1.kind, m2.kind} != {MemberKind.CABLE, MemberKind.STRUT}:
        raise InputError(f"cancel member must be a cable in one and a strut in the other, "
                         f"got {m1.kind.value} and {m2.kind.value}")
    for name, f, w in (("first", t1, w1), ("second", t2, w2)):
        cert = check_super_stability(f, w, tol)
        if cert.verdict is not Verdict.CERTIFIED_YES:
            raise PreconditionError(f"{name} tensegrity is not super stable: {cert.reason}")
    a, b = w1.get(i1, j1), w2.get(i2, j2)
    if a == 0 or b == 0:
        raise PreconditionError("cancel member carries no stress")

    values = superpose_stresses(w1.divided(abs(a)), w2.divided(abs(b)), shared)
    kinds = superimpose_graphs(t1, t2, shared)
    erased = pair(shared.embed1[i1], shared.embed1[j1])
    values.pop(erased)
    kinds.pop(erased)
    scale = max((abs(v) for v in values.values()), default=0.0)
    members, stress = [], {}
    for p in sorted(kinds):
        ks, v = kinds[p], values.get(p, 0.0)
        if len(ks) == 1:
            kind = ks[0]
        elif MemberKind.BAR in ks:
            kind = MemberKind.BAR
        elif abs(v) <= 1e-12 * scale:
            continue
        else:
            kind = MemberKind.CABLE if v > 0 else MemberKind.STRUT
        members.append(Member(*p, kind))
        stress[p] = v
    graph = TensegrityGraph(shared.total, members)
    return Framework(graph, combined_configuration(t1, t2, shared)), Stress(stress)


def align_onto(f2: Framework, source: Sequence[int], target_points: np.ndarray) -> Framework:
    """Rigidly move ``f2`` so its vertices ``source`` land as close as possible on ``target_points``.

    Orthogonal Procrustes (Kabsch) fit; reflections are allowed, since they
    preserve every member length.
    """
    P = f2.configuration.points[list(source)]
    Q = np.asarray(target_points, dtype=float)
    pc, qc = P.mean(axis=0), Q.mean(axis=0)
    U, _, Vt = np.linalg.svd((P - pc).T @ (Q - qc))
    A = U @ Vt
    moved = (f2.configuration.points - pc) @ A + qc
    return Framework(f2.graph, Configuration(moved))
