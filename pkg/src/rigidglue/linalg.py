"""Rigidity matrices, equilibrium stresses and stress matrices.

Ranks are numeric: singular values are compared against a cutoff relative to
the largest one (see :func:`numeric_rank`).  Stress matrices are returned as
plain symmetric ``numpy`` arrays with zero row sums.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .model import (
    Configuration,
    DegenerateKernelError,
    Framework,
    InputError,
    MemberKind,
    Pair,
    Stress,
    TensegrityGraph,
    UnsupportedRegimeError,
    check_stress_keys,
    default_tolerance,
)


@dataclass(frozen=True)
class NumericTolerance:
    rank_threshold_factor: float = 1e-10
    psd_slack: float = 1e-9

    def __post_init__(self) -> None:
        if not (self.rank_threshold_factor > 0 and self.psd_slack > 0):
            raise InputError("tolerances must be positive")


DEFAULT_TOL = NumericTolerance()


@dataclass(frozen=True)
class RigidityMatrixForm:
    """``e x dn`` rigidity matrix; row ``row_index[(i, j)]`` belongs to member ``{i, j}``.

    Row convention: block ``i`` holds ``p_i - p_j`` and block ``j`` holds
    ``p_j - p_i`` (no factor 2).
    """

    matrix: np.ndarray
    row_index: dict[Pair, int]
    d: int

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape


def generic_rigidity_rank(n: int, d: int) -> int:
    """Rank of the rigidity matrix of the complete graph at a generic configuration."""
    if n >= d + 1:
        return d * n - d * (d + 1) // 2
    return n * (n - 1) // 2


def numeric_rank(M: np.ndarray, t: NumericTolerance = DEFAULT_TOL) -> int:
    M = np.asarray(M, dtype=float)
    if not np.all(np.isfinite(M)):
        raise InputError("matrix has non-finite entries")
    if M.size == 0:
        return 0
    s = np.linalg.svd(M, compute_uv=False)
    if s[0] == 0.0:
        return 0
    return int(np.sum(s > t.rank_threshold_factor * max(M.shape) * s[0]))


def _rank_split(M: np.ndarray, t: NumericTolerance) -> tuple[int, np.ndarray, np.ndarray, np.ndarray]:
    """Full SVD plus the numeric rank computed with the same cutoff as :func:`numeric_rank`."""
    U, s, Vt = np.linalg.svd(M, full_matrices=True)
    if s.size == 0 or s[0] == 0.0:
        return 0, U, s, Vt
    r = int(np.sum(s > t.rank_threshold_factor * max(M.shape) * s[0]))
    return r, U, s, Vt


def null_space(M: np.ndarray, t: NumericTolerance = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis (as columns) of the numeric right null space of ``M``."""
    M = np.atleast_2d(np.asarray(M, dtype=float))
    r, _, _, Vt = _rank_split(M, t)
    return Vt[r:].T.copy()


def rigidity_matrix(f: Framework) -> RigidityMatrixForm:
    g, p = f.graph, f.configuration.points
    if len(g) == 0:
        raise InputError("rigidity matrix needs at least one member")
    n, d = f.n, f.d
    R = np.zeros((len(g), d * n))
    for row, m in enumerate(g):
        diff = p[m.i] - p[m.j]
        R[row, d * m.i : d * m.i + d] = diff
        R[row, d * m.j : d * m.j + d] = -diff
    return RigidityMatrixForm(R, {m.pair: row for row, m in enumerate(g)}, d)


def rigidity_rank(f: Framework, t: NumericTolerance = DEFAULT_TOL) -> int:
    if len(f.graph) == 0:
        return 0
    return numeric_rank(rigidity_matrix(f).matrix, t)


def is_locally_rigid_at(f: Framework, t: NumericTolerance = DEFAULT_TOL) -> bool:
    if f.n < f.d:
        raise UnsupportedRegimeError(f"local rigidity test needs n >= d (n={f.n}, d={f.d})")
    return rigidity_rank(f, t) == f.d * f.n - f.d * (f.d + 1) // 2


def equilibrium_stress_basis(f: Framework, t: NumericTolerance = DEFAULT_TOL) -> list[Stress]:
    """Basis of the left null space of ``R(p)``, one :class:`Stress` per vector."""
    R = rigidity_matrix(f).matrix
    basis = null_space(R.T, t)
    return [Stress.from_vector(f.graph, basis[:, k]) for k in range(basis.shape[1])]


def equilibrium_residual(f: Framework, w: Stress) -> np.ndarray:
    """``(n, d)`` array whose row ``j`` is ``sum_i w_ij (p_i - p_j)``."""
    check_stress_keys(f.graph, w)
    p = f.configuration.points
    res = np.zeros_like(p)
    for (i, j), wij in w.values.items():
        diff = p[i] - p[j]
        res[j] += wij * diff
        res[i] -= wij * diff
    return res


def verify_equilibrium(f: Framework, w: Stress, tol: float | None = None) -> bool:
    if tol is None:
        tol = default_tolerance(f.configuration) * (1.0 + w.max_abs())
    return bool(np.all(np.abs(equilibrium_residual(f, w)) <= tol))


def stress_matrix(g: TensegrityGraph, w: Stress) -> np.ndarray:
    check_stress_keys(g, w)
    n = g.vertex_count
    S = np.zeros((n, n))
    for (i, j), wij in w.values.items():
        S[i, j] -= wij
        S[j, i] -= wij
        S[i, i] += wij
        S[j, j] += wij
    return S


def is_proper(g: TensegrityGraph, w: Stress, atol: float = 0.0) -> bool:
    """Nonnegative on cables, nonpositive on struts."""
    for m in g:
        wij = w.get(m.i, m.j)
        if m.kind is MemberKind.CABLE and wij < -atol:
            return False
        if m.kind is MemberKind.STRUT and wij > atol:
            return False
    return True


def is_positive_semidefinite(S: np.ndarray, t: NumericTolerance = DEFAULT_TOL) -> bool:
    S = np.asarray(S, dtype=float)
    if S.size == 0:
        return True
    ev = np.linalg.eigvalsh((S + S.T) / 2)
    return bool(ev[0] >= -t.psd_slack * (1.0 + np.max(np.abs(ev))))


def max_rank_stress(
    f: Framework, trials: int = 8, seed: int = 0, t: NumericTolerance = DEFAULT_TOL
) -> tuple[Stress, int]:
    """Random combinations of the equilibrium stress basis; keep the highest stress-matrix rank.

    The maximum rank over a linear stress space is attained on a dense open
    set, so a handful of Gaussian combinations almost surely finds it.
    """
    basis = equilibrium_stress_basis(f, t)
    if not basis:
        return Stress.zero(f.graph), 0
    B = np.column_stack([w.vector(f.graph) for w in basis])
    rng = np.random.default_rng(seed)
    best: tuple[Stress, int] | None = None
    for _ in range(max(1, int(trials))):
        coeffs = rng.standard_normal(B.shape[1])
        w = Stress.from_vector(f.graph, B @ coeffs)
        r = numeric_rank(stress_matrix(f.graph, w), t)
        if best is None or r > best[1]:
            best = (w, r)
    assert best is not None
    return best


def kernel_basis(S: np.ndarray, t: NumericTolerance = DEFAULT_TOL) -> np.ndarray:
    return null_space(np.asarray(S, dtype=float), t)


def universal_configuration(S: np.ndarray, t: NumericTolerance = DEFAULT_TOL) -> Configuration:
    """Configuration in dimension ``k - 1`` read off a kernel basis of ``S``.

    The returned coordinate columns are orthogonal to the all-ones vector and,
    together with it, span ``ker S``.
    """
    S = np.asarray(S, dtype=float)
    n = S.shape[0]
    K = kernel_basis(S, t)
    k = K.shape[1]
    if k < 2:
        raise DegenerateKernelError(f"kernel dimension {k} < 2")
    ones = np.ones(n) / np.sqrt(n)
    if np.linalg.norm(K.T @ ones) < 1 - 1e-8:
        raise InputError("all-ones vector is not in the kernel; not a stress matrix")
    K = K - np.outer(ones, ones @ K)
    U, s, _ = np.linalg.svd(K, full_matrices=False)
    return Configuration(U[:, : k - 1])


def _require_full_span(p: Configuration, t: NumericTolerance) -> None:
    if p.affine_dimension(t.rank_threshold_factor) < p.d:
        raise InputError(f"affine span of the configuration is not {p.d}-dimensional")


def is_universal_for(f: Framework, w: Stress, t: NumericTolerance = DEFAULT_TOL) -> bool:
    """Nonzero stress whose stress matrix has rank ``n - d - 1``."""
    _require_full_span(f.configuration, t)
    if w.is_zero():
        return False
    return numeric_rank(stress_matrix(f.graph, w), t) == f.n - f.d - 1


def lies_on_conic_at_infinity(
    directions: Sequence[Sequence[float]] | np.ndarray, d: int, t: NumericTolerance = DEFAULT_TOL
) -> bool:
    """Whether a nonzero symmetric ``Q`` has ``v^T Q v = 0`` for every direction ``v``."""
    V = np.asarray(directions, dtype=float).reshape(-1, d) if len(directions) else np.zeros((0, d))
    norms = np.linalg.norm(V, axis=1)
    if np.any(norms == 0) or not np.all(np.isfinite(V)):
        raise InputError("directions must be finite and nonzero")
    V = V / norms[:, None]
    iu = np.triu_indices(d)
    unknowns = len(iu[0])
    if V.shape[0] < unknowns:
        return True
    # one column per independent entry Q_ab (a <= b); off-diagonals appear twice
    A = V[:, iu[0]] * V[:, iu[1]] * np.where(iu[0] == iu[1], 1.0, 2.0)
    return numeric_rank(A, t) < unknowns


def stressed_directions(f: Framework, w: Stress, atol: float = 0.0) -> np.ndarray:
    p = f.configuration.points
    dirs = [p[i] - p[j] for (i, j), wij in w.values.items() if abs(wij) > atol]
    return np.array(dirs).reshape(-1, f.d)


def combined_kernel_dimension(matrices: Sequence[np.ndarray], t: NumericTolerance = DEFAULT_TOL) -> int:
    """``dim(ker M_1 ∩ ... ∩ ker M_k)`` via the null space of the stacked matrices."""
    stacked = np.vstack([np.asarray(M, dtype=float) for M in matrices])
    return stacked.shape[1] - numeric_rank(stacked, t)


__all__ = [
    "DEFAULT_TOL",
    "NumericTolerance",
    "RigidityMatrixForm",
    "combined_kernel_dimension",
    "equilibrium_residual",
    "equilibrium_stress_basis",
    "generic_rigidity_rank",
    "is_locally_rigid_at",
    "is_positive_semidefinite",
    "is_proper",
    "is_universal_for",
    "kernel_basis",
    "lies_on_conic_at_infinity",
    "max_rank_stress",
    "null_space",
    "numeric_rank",
    "rigidity_matrix",
    "rigidity_rank",
    "stress_matrix",
    "stressed_directions",
    "universal_configuration",
    "verify_equilibrium",
]
