"""Rigidity verdicts with replayable numerical evidence.

Randomized checks are one-sided.  Reaching the target ranks at one sampled
configuration certifies the generic property (generic rank is the maximum
over configurations); failing at every sample only gives ``PROBABLY_NO``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any


from .connectivity import vertex_connectivity_at_least
from .generators import make_rng, random_configuration
from .linalg import (
    DEFAULT_TOL,
    NumericTolerance,
    generic_rigidity_rank,
    is_positive_semidefinite,
    is_proper,
    lies_on_conic_at_infinity,
    max_rank_stress,
    numeric_rank,
    rigidity_rank,
    stress_matrix,
    stressed_directions,
    verify_equilibrium,
)
from .model import (
    Configuration,
    Framework,
    InputError,
    Stress,
    TensegrityGraph,
    check_stress_keys,
    default_tolerance,
)
from .pebble import pebble_game_rigid_2d


class Verdict(str, enum.Enum):
    CERTIFIED_YES = "CertifiedYes"
    CERTIFIED_NO = "CertifiedNo"
    PROBABLY_NO = "ProbablyNo"
    INCONCLUSIVE = "Inconclusive"

    @property
    def exit_code(self) -> int:
        return {"CertifiedYes": 0, "CertifiedNo": 1, "ProbablyNo": 1, "Inconclusive": 2}[self.value]


class Check(str, enum.Enum):
    GENERIC_GLOBAL = "generic-global-rigidity"
    COMBINATORIAL_2D = "global-rigidity-2d-combinatorial"
    SUPER_STABILITY = "super-stability"


@dataclass(frozen=True)
class Witness:
    configuration: Configuration
    stress: Stress
    rigidity_rank: int | None = None
    stress_rank: int | None = None


@dataclass(frozen=True)
class Certificate:
    check: Check
    verdict: Verdict
    dimension: int
    graph: TensegrityGraph
    reason: str
    witness: Witness | None = None
    tolerance: NumericTolerance = DEFAULT_TOL
    seed: int | None = None
    trials: int | None = None
    stress_trials: int | None = None
    details: dict[str, Any] = field(default_factory=dict)

    @property
    def fingerprint(self) -> str:
        return self.graph.fingerprint()

    @property
    def ok(self) -> bool:
        return self.verdict is Verdict.CERTIFIED_YES


def _require_bars(g: TensegrityGraph) -> None:
    if not g.is_bar_framework():
        raise InputError("generic global rigidity is defined here for bar frameworks only")


def certify_generic_global_rigidity(
    g: TensegrityGraph,
    d: int,
    trials: int = 8,
    seed: int = 0,
    t: NumericTolerance = DEFAULT_TOL,
    stress_trials: int = 8,
) -> Certificate:
    """Stress-rank certificate for generic global rigidity in dimension ``d``."""
    _require_bars(g)
    n = g.vertex_count
    common = dict(check=Check.GENERIC_GLOBAL, dimension=d, graph=g, tolerance=t, seed=seed,
                  trials=trials, stress_trials=stress_trials)
    if n <= d + 1:
        if g.is_complete():
            return Certificate(verdict=Verdict.CERTIFIED_YES, reason=f"complete graph on {n} <= d+1 vertices",
                               **common)
        return Certificate(verdict=Verdict.CERTIFIED_NO, reason=f"incomplete graph on {n} <= d+1 vertices",
                           **common)
    if not g.is_connected():
        return Certificate(verdict=Verdict.CERTIFIED_NO, reason="graph is disconnected", **common)

    target_r = generic_rigidity_rank(n, d)
    target_s = n - d - 1
    rng = make_rng(seed)
    best_r, best_s = -1, -1
    for trial in range(trials):
        p = random_configuration(n, d, rng)
        stress_seed = int(rng.integers(2**63))
        f = Framework(g, p)
        r = rigidity_rank(f, t)
        best_r = max(best_r, r)
        if r != target_r:
            continue
        w, s = max_rank_stress(f, stress_trials, stress_seed, t)
        best_s = max(best_s, s)
        if s == target_s:
            return Certificate(
                verdict=Verdict.CERTIFIED_YES,
                reason=f"trial {trial}: rank R = {r} = dn - d(d+1)/2 and stress rank {s} = n - d - 1",
                witness=Witness(p, w, r, s),
                details={"trial": trial, "target_rigidity_rank": target_r, "target_stress_rank": target_s},
                **common,
            )
    if best_r < target_r:
        reason = f"rigidity rank at most {best_r} < {target_r} over {trials} configurations (not rigid)"
    else:
        reason = f"stress rank at most {best_s} < {target_s} over {trials} configurations"
    return Certificate(
        verdict=Verdict.PROBABLY_NO,
        reason=reason,
        details={"max_rigidity_rank": best_r, "max_stress_rank": best_s,
                 "target_rigidity_rank": target_r, "target_stress_rank": target_s},
        **common,
    )


def check_super_stability(f: Framework, w: Stress, t: NumericTolerance = DEFAULT_TOL,
                          tol: float | None = None) -> Certificate:
    """All three super-stability conditions for a supplied stress, plus equilibrium and properness."""
    check_stress_keys(f.graph, w)
    if f.configuration.affine_dimension(t.rank_threshold_factor) < f.d:
        raise InputError(f"affine span of the configuration is not {f.d}-dimensional")
    n, d = f.n, f.d
    S = stress_matrix(f.graph, w)
    rank = numeric_rank(S, t)
    common = dict(check=Check.SUPER_STABILITY, dimension=d, graph=f.graph, tolerance=t,
                  witness=Witness(f.configuration, w, None, rank))
    small = 1e-12 * w.max_abs()

    def no(reason: str) -> Certificate:
        return Certificate(verdict=Verdict.CERTIFIED_NO, reason=reason, **common)

    if tol is None:
        tol = default_tolerance(f.configuration) * (1.0 + w.max_abs())
    if not verify_equilibrium(f, w, tol):
        return no("stress is not in equilibrium")
    if not is_proper(f.graph, w, small):
        return no("stress is not proper (cable with negative or strut with positive stress)")
    if not is_positive_semidefinite(S, t):
        return no("stress matrix is not positive semidefinite")
    if rank != n - d - 1:
        return no(f"stress matrix rank {rank} != n - d - 1 = {n - d - 1}")
    if lies_on_conic_at_infinity(stressed_directions(f, w, small), d, t):
        return no("stressed member directions lie on a conic at infinity")
    return Certificate(verdict=Verdict.CERTIFIED_YES,
                       reason=f"proper PSD equilibrium stress of rank {rank}; directions avoid conics at infinity",
                       **common)


def generically_rigid(g: TensegrityGraph, d: int, seed: int = 0, t: NumericTolerance = DEFAULT_TOL) -> bool:
    if d == 2:
        return pebble_game_rigid_2d(g)
    rng = make_rng(seed)
    target = generic_rigidity_rank(g.vertex_count, d)
    for _ in range(2):
        if rigidity_rank(Framework(g, random_configuration(g.vertex_count, d, rng)), t) == target:
            return True
    return False


def is_redundantly_rigid(g: TensegrityGraph, d: int, seed: int = 0, t: NumericTolerance = DEFAULT_TOL) -> bool:
    """Generically rigid, and still so after deleting any single member."""
    n = g.vertex_count
    if d == 2:
        if not pebble_game_rigid_2d(g):
            return False
        return all(pebble_game_rigid_2d(g.without(i, j)) for i, j in g.pairs)

    target = generic_rigidity_rank(n, d)
    rng = make_rng(seed)
    first = Framework(g, random_configuration(n, d, rng))
    backup: Framework | None = None

    def rigid(graph: TensegrityGraph) -> bool:
        nonlocal backup
        if rigidity_rank(Framework(graph, first.configuration), t) == target:
            return True
        # borderline: resample once before declaring flexible
        if backup is None:
            backup = Framework(g, random_configuration(n, d, rng))
        return rigidity_rank(Framework(graph, backup.configuration), t) == target

    if not rigid(g):
        return False
    return all(rigid(g.without(i, j)) for i, j in g.pairs)


def hendrickson_property(g: TensegrityGraph, d: int, seed: int = 0, t: NumericTolerance = DEFAULT_TOL) -> bool:
    return vertex_connectivity_at_least(g, d + 1) and is_redundantly_rigid(g, d, seed, t)


def certify_global_rigidity_2d_combinatorial(g: TensegrityGraph) -> Certificate:
    """Redundant rigidity (pebble game) plus 3-connectivity; no randomness."""
    n = g.vertex_count
    common = dict(check=Check.COMBINATORIAL_2D, dimension=2, graph=g)
    if n <= 3:
        verdict = Verdict.CERTIFIED_YES if g.is_complete() else Verdict.CERTIFIED_NO
        return Certificate(verdict=verdict, reason=f"{'complete' if g.is_complete() else 'incomplete'} graph on "
                           f"{n} <= 3 vertices", **common)
    redundant = is_redundantly_rigid(g, 2)
    three = vertex_connectivity_at_least(g, 3)
    details = {"redundantly_rigid": redundant, "three_connected": three}
    if redundant and three:
        return Certificate(verdict=Verdict.CERTIFIED_YES, reason="redundantly rigid and 3-connected",
                           details=details, **common)
    missing = [name for name, ok in (("redundantly rigid", redundant), ("3-connected", three)) if not ok]
    return Certificate(verdict=Verdict.CERTIFIED_NO, reason="not " + " and not ".join(missing),
                       details=details, **common)


def recheck_witness(cert: Certificate) -> tuple[int, int]:
    """Recompute (rigidity rank, stress rank) from a certificate's stored witness."""
    if cert.witness is None:
        raise InputError("certificate has no witness")
    f = Framework(cert.graph, cert.witness.configuration)
    return rigidity_rank(f, cert.tolerance), numeric_rank(stress_matrix(cert.graph, cert.witness.stress), cert.tolerance)


def replay(cert: Certificate) -> Certificate:
    """Re-run the check that produced ``cert`` from its embedded inputs, seed and tolerances."""
    if cert.check is Check.GENERIC_GLOBAL:
        return certify_generic_global_rigidity(cert.graph, cert.dimension, cert.trials or 8, cert.seed or 0,
                                               cert.tolerance, cert.stress_trials or 8)
    if cert.check is Check.COMBINATORIAL_2D:
        return certify_global_rigidity_2d_combinatorial(cert.graph)
    if cert.witness is None:
        raise InputError("super-stability certificate lacks its framework and stress")
    return check_super_stability(Framework(cert.graph, cert.witness.configuration), cert.witness.stress,
                                 cert.tolerance)
