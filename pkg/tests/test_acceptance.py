"""Acceptance criteria, one test each.

Run with ``pytest tests/test_acceptance.py`` (a PASS/FAIL line per criterion is
printed in the terminal summary) or directly with ``python3 tests/test_acceptance.py``.
"""

import sys
import time
from contextlib import contextmanager
from itertools import combinations
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent))

from conftest import SQUARE_MATRIX  # noqa: E402
from rigidglue import serialize  # noqa: E402
from rigidglue.certify import (  # noqa: E402
    Verdict,
    certify_generic_global_rigidity,
    certify_global_rigidity_2d_combinatorial,
    check_super_stability,
    hendrickson_property,
    replay,
)
from rigidglue.combine import (  # noqa: E402
    SharedVertexMap,
    blend_stress_matrices,
    combine_erase_bar,
    combined_configuration,
    superimpose_graphs,
    superimpose_tensegrities,
    superpose_stresses,
)
from rigidglue.generators import (  # noqa: E402
    complete_bipartite,
    complete_graph,
    make_rng,
    named_examples,
    random_configuration,
    random_graph,
)
from rigidglue.linalg import (  # noqa: E402
    combined_kernel_dimension,
    generic_rigidity_rank,
    is_positive_semidefinite,
    max_rank_stress,
    numeric_rank,
    rigidity_rank,
    stress_matrix,
    verify_equilibrium,
)
from rigidglue.model import Framework, Member, MemberKind, Stress, TensegrityGraph  # noqa: E402
from rigidglue.pebble import pebble_game_rigid_2d  # noqa: E402

RESULTS: dict[int, tuple[str, bool, str]] = {}


@contextmanager
def criterion(number: int, title: str):
    start = time.perf_counter()
    try:
        yield
    except BaseException as e:
        RESULTS[number] = (title, False, f"{type(e).__name__}: {e}".splitlines()[0][:160])
        raise
    RESULTS[number] = (title, True, f"{time.perf_counter() - start:.2f}s")


def report_lines() -> list[str]:
    return [f"{'PASS' if ok else 'FAIL'} criterion {k}: {title} ({info})"
            for k, (title, ok, info) in sorted(RESULTS.items())]


def test_1_square_stress_matrix():
    with criterion(1, "unit-square tensegrity stress matrix, rank, PSD, super stability"):
        ex = named_examples()["square"]
        f, w = ex.framework, ex.stress
        S = stress_matrix(f.graph, w)
        assert np.array_equal(S, SQUARE_MATRIX), S
        assert numeric_rank(S) == 1 == 4 - 2 - 1
        np.testing.assert_allclose(np.linalg.eigvalsh(S), [0, 0, 0, 4], atol=1e-9)
        assert is_positive_semidefinite(S)
        assert check_super_stability(f, w).verdict is Verdict.CERTIFIED_YES


def test_2_erase_bar_pipeline():
    with criterion(2, "two K4s on 3 shared vertices, common bar erased"):
        ex = named_examples()["two-k4-glue"]
        sh = SharedVertexMap(ex.shared, ex.framework.n, ex.partner.n)
        res = combine_erase_bar(ex.framework, ex.partner, sh, ex.common_member)
        f, w = res.framework, res.witness
        assert (f.n, len(f.graph)) == (5, 8)
        assert res.erased not in f.graph and res.erased_value == 0.0
        assert w.get(*res.erased) == 0.0
        assert verify_equilibrium(f, w, 1e-9)
        # rank recomputed independently from the eigenvalues
        ev = np.abs(np.linalg.eigvalsh(stress_matrix(f.graph, w)))
        assert int(np.sum(ev > 1e-9 * ev.max())) == 2 == res.witness_rank
        assert certify_generic_global_rigidity(f.graph, 2).verdict is Verdict.CERTIFIED_YES


def _controlled_pair(rng, n, k):
    Q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    r1 = int(rng.integers(0, n - k + 1))
    r2 = n - k - r1
    U1 = Q[:, :r1]
    U2 = Q[:, r1 : n - k]
    if r1 and r2:
        U2 = U2 + U1 @ rng.standard_normal((r1, r2))
    S1 = U1 @ np.diag(rng.uniform(0.5, 2.0, r1) * rng.choice([-1.0, 1.0], r1)) @ U1.T
    S2 = U2 @ np.diag(rng.uniform(0.5, 2.0, r2) * rng.choice([-1.0, 1.0], r2)) @ U2.T
    return S1, S2


def test_3_blend_rank():
    with criterion(3, "blended rank n - k over 50 pairs x 20 values of t"):
        rng = make_rng(2024)
        failures = 0
        for _ in range(50):
            n = int(rng.integers(2, 13))
            k = int(rng.integers(0, n))
            S1, S2 = _controlled_pair(rng, n, k)
            assert combined_kernel_dimension([S1, S2]) == k
            for t in rng.uniform(0.0, 1.0, 20):
                if t in (0.0, 1.0):
                    continue
                # rank via eigenvalues of the symmetric blend
                ev = np.abs(np.linalg.eigvalsh(t * S1 + (1 - t) * S2))
                rank_eig = int(np.sum(ev > 1e-9 * max(ev.max(), 1e-300)))
                failures += rank_eig != n - k or blend_stress_matrices(S1, S2, t)[1] != n - k
        assert failures == 0, failures


def test_4_k55_counterexample():
    with criterion(4, "K(5,5) in 3-space: Hendrickson property holds, stress rank stays below 6"):
        g = complete_bipartite(5, 5)
        assert hendrickson_property(g, 3)
        rng = make_rng(55)
        ranks = []
        for _ in range(20):
            f = Framework(g, random_configuration(10, 3, rng))
            assert rigidity_rank(f) == generic_rigidity_rank(10, 3)
            ranks.append(max_rank_stress(f, seed=rng)[1])
        assert max(ranks) < 6, ranks
        assert certify_generic_global_rigidity(g, 3, trials=20).verdict is Verdict.PROBABLY_NO


def _all_graphs(n):
    pairs = list(combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield TensegrityGraph.bars(n, [p for b, p in enumerate(pairs) if mask >> b & 1])


def _rank_rigid(g, p):
    if g.vertex_count == 1:
        return True
    return rigidity_rank(Framework(g, p)) == 2 * g.vertex_count - 3


def test_5_pebble_game_matches_rank():
    with criterion(5, "pebble game agrees with the rigidity rank test"):
        rng = make_rng(5)
        disagreements = []
        for n in range(1, 7):
            p = random_configuration(n, 2, rng)
            for g in _all_graphs(n):
                if pebble_game_rigid_2d(g) != _rank_rigid(g, p):
                    disagreements.append(g.pairs)
        for _ in range(100):
            n = int(rng.integers(2, 11))
            g = random_graph(n, float(rng.uniform(0.2, 0.9)), rng)
            if pebble_game_rigid_2d(g) != _rank_rigid(g, random_configuration(n, 2, rng)):
                disagreements.append(g.pairs)
        assert not disagreements, disagreements[:5]


def test_6_planar_combinatorial_check():
    with criterion(6, "planar combinatorial verdicts match the stress-rank route"):
        bowtie = TensegrityGraph.bars(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)])
        cases = [(complete_graph(4), Verdict.CERTIFIED_YES),
                 (complete_graph(4).without(0, 1), Verdict.CERTIFIED_NO),
                 (bowtie, Verdict.CERTIFIED_NO)]
        for g, expected in cases:
            comb = certify_global_rigidity_2d_combinatorial(g).verdict
            rand = certify_generic_global_rigidity(g, 2).verdict
            assert comb is expected
            assert (comb is Verdict.CERTIFIED_YES) == (rand is Verdict.CERTIFIED_YES)


def test_7_two_vertex_overlap_is_deficient():
    with criterion(7, "gluing on 2 shared vertices loses stress rank"):
        ex = named_examples()["spoke-glue"]
        for f, w in ((ex.framework, ex.stress), (ex.partner, ex.partner_stress)):
            assert check_super_stability(f, w).verdict is Verdict.CERTIFIED_YES
        sh = SharedVertexMap(ex.shared, ex.framework.n, ex.partner.n)
        i, j = ex.common_member
        a = ex.stress.get(i, j)
        b = ex.partner_stress.get(sh.to_second(i), sh.to_second(j))
        assert a * b < 0
        values = superpose_stresses(ex.stress.divided(abs(a)), ex.partner_stress.divided(abs(b)), sh)
        e = sh.embed1
        assert values.pop(tuple(sorted((e[i], e[j])))) == 0.0
        kinds = superimpose_graphs(ex.framework, ex.partner, sh)
        members = [Member(*p, ks[0]) for p, ks in kinds.items() if p in values]
        g = TensegrityGraph(sh.total, members)
        f = Framework(g, combined_configuration(ex.framework, ex.partner, sh))
        w = Stress({m.pair: values[m.pair] for m in members})
        assert verify_equilibrium(f, w, 1e-9)
        n, d = f.n, f.d
        assert numeric_rank(stress_matrix(g, w)) < n - d - 1
        cert = check_super_stability(f, w)
        assert cert.verdict is Verdict.CERTIFIED_NO and "rank" in cert.reason


def test_8_superposition():
    with criterion(8, "superposed convex quadrilaterals are super stable, overlap becomes a strut"):
        ex = named_examples()["pentagon"]
        sh = SharedVertexMap(ex.shared, ex.framework.n, ex.partner.n)
        f, w = superimpose_tensegrities(ex.framework, ex.stress, ex.partner, ex.partner_stress, sh, ex.common_member)
        assert check_super_stability(f, w).verdict is Verdict.CERTIFIED_YES
        e = sh.embed1
        erased = tuple(sorted(e[v] for v in ex.common_member))
        assert erased not in f.graph
        # the member covered by a cable from one side and a strut from the other
        kinds = superimpose_graphs(ex.framework, ex.partner, sh)
        mixed = [p for p, ks in kinds.items() if set(ks) == {MemberKind.CABLE, MemberKind.STRUT} and p != erased]
        assert len(mixed) == 1
        (p,) = mixed
        assert w.get(*p) < 0 and f.graph.member(*p).kind is MemberKind.STRUT


def test_9_round_trip_and_replay():
    with criterion(9, "file round-trips are exact and certificates self-replay"):
        for name, ex in named_examples().items():
            for f, w in ((ex.framework, ex.stress), (ex.partner, ex.partner_stress)):
                if f is None:
                    continue
                g, v = serialize.parse_framework(serialize.write_framework(f, w))
                assert np.array_equal(g.configuration.points, f.configuration.points), name
                assert g.graph.fingerprint() == f.graph.fingerprint() and v == w, name
        ex = named_examples()
        certs = [
            certify_generic_global_rigidity(ex["k4"].framework.graph, 2, seed=1),
            certify_generic_global_rigidity(ex["c4"].framework.graph, 2, seed=1),
            certify_generic_global_rigidity(ex["k55-d3"].framework.graph, 3, seed=1),
            certify_global_rigidity_2d_combinatorial(complete_graph(5)),
            check_super_stability(ex["square"].framework, ex["square"].stress),
        ]
        for cert in certs:
            back = serialize.parse_certificate(serialize.write_certificate(cert))
            assert serialize.write_certificate(back) == serialize.write_certificate(cert)
            again = replay(back)
            assert again.verdict is cert.verdict
            if cert.witness is not None:
                assert again.witness.stress == cert.witness.stress


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    for fn in tests:
        try:
            fn()
        except BaseException:
            pass
    print("\n".join(report_lines()))
    sys.exit(0 if all(ok for _, ok, _ in RESULTS.values()) and len(RESULTS) == len(tests) else 1)
