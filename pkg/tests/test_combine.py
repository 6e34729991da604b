import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import SQUARE_MATRIX
from rigidglue.certify import Verdict, certify_generic_global_rigidity, check_super_stability
from rigidglue.combine import (
    SharedVertexMap,
    align_onto,
    blend_stress_matrices,
    combine_erase_bar,
    extend_stress_matrix,
    glue_union,
    superimpose_tensegrities,
)
from rigidglue.generators import (
    PENTAGON,
    complete_graph,
    convex_quadrilateral_tensegrity,
    named_examples,
    random_configuration,
)
from rigidglue.linalg import (
    combined_kernel_dimension,
    is_proper,
    max_rank_stress,
    numeric_rank,
    stress_matrix,
    verify_equilibrium,
)
from rigidglue.model import (
    Configuration,
    Framework,
    InputError,
    MemberKind,
    PreconditionError,
    congruent,
)


def two_k4(seed=20_240_601):
    """K4 on {0,1,2,3} and K4 on {0,1,2,4} of one random 5-point configuration."""
    pts = random_configuration(5, 2, seed).points
    f1 = Framework(complete_graph(4), Configuration(pts[:4]))
    f2 = Framework(complete_graph(4), Configuration(pts[[0, 1, 2, 4]]))
    return f1, f2, SharedVertexMap(((0, 0), (1, 1), (2, 2)), 4, 4)


def controlled_pair(rng, n, k):
    """Symmetric S1, S2 with rank(S1) + rank(S2) = n - k and a k-dimensional common kernel."""
    Q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    r1 = int(rng.integers(0, n - k + 1))
    # columns 0..r1-1 span im S1, r1..n-k-1 span im S2, the last k span the common kernel
    U1 = Q[:, :r1]
    # S2's image: the complementary block, mixed with S1's image so the images are not orthogonal
    U2 = Q[:, r1 : n - k] + (U1 @ rng.standard_normal((r1, n - k - r1)) if r1 else 0)
    # S2 must still kill the common kernel: image orthogonal to the last k columns holds already
    S1 = U1 @ np.diag(rng.uniform(0.5, 2.0, r1) * rng.choice([-1, 1], r1)) @ U1.T
    S2 = U2 @ np.diag(rng.uniform(0.5, 2.0, n - k - r1) * rng.choice([-1, 1], n - k - r1)) @ U2.T
    return S1, S2, r1, n - k - r1


class TestSharedVertexMap:
    def test_relabeling(self):
        sh = SharedVertexMap(((3, 1), (0, 0)), 4, 3)
        assert sh.total == 5
        assert sh.embed1 == [1, 2, 3, 0]
        assert sh.embed2 == [1, 0, 4]

    def test_injective(self):
        with pytest.raises(InputError):
            SharedVertexMap(((0, 0), (0, 1)), 3, 3)
        with pytest.raises(InputError):
            SharedVertexMap(((0, 5),), 3, 3)

    def test_parse(self):
        assert SharedVertexMap.parse("0:1, 2:0", 3, 3).pairs == ((0, 1), (2, 0))
        with pytest.raises(InputError):
            SharedVertexMap.parse("0-1", 3, 3)


class TestExtendBlend:
    def test_extend_identity(self):
        np.testing.assert_array_equal(extend_stress_matrix(SQUARE_MATRIX, [0, 1, 2, 3], 4), SQUARE_MATRIX)

    def test_extend_padding(self):
        E = extend_stress_matrix(SQUARE_MATRIX, [5, 0, 2, 3], 6)
        assert numeric_rank(E) == 1
        assert E.shape[0] - numeric_rank(E) == (4 - 1) + 2
        np.testing.assert_allclose(E.sum(axis=1), 0)

    def test_extend_non_injective(self):
        with pytest.raises(InputError):
            extend_stress_matrix(SQUARE_MATRIX, [0, 0, 1, 2], 4)

    def test_blend_same(self):
        B, r = blend_stress_matrices(SQUARE_MATRIX, SQUARE_MATRIX, 0.5)
        np.testing.assert_array_equal(B, SQUARE_MATRIX)
        assert r == 1

    def test_blend_degenerate_t(self):
        for t in (0, 1):
            with pytest.raises(InputError):
                blend_stress_matrices(SQUARE_MATRIX, SQUARE_MATRIX, t)

    def test_blend_negative_t_allowed(self):
        # t = -1 is a legitimate blend; only 0 and 1 are excluded
        S1, S2, r1, r2 = controlled_pair(np.random.default_rng(0), 6, 2)
        assert blend_stress_matrices(S1, S2, -1.0)[1] == r1 + r2

    def test_rank_one_psd_complementary(self):
        rng = np.random.default_rng(1)
        u, v = rng.standard_normal(2), rng.standard_normal(2)
        for t in rng.uniform(0.01, 0.99, 10):
            assert blend_stress_matrices(np.outer(u, u), np.outer(v, v), t)[1] == 2

    def test_overlap_kernel_and_blend_rank(self):
        f1, f2, sh = two_k4()
        w1, r1 = max_rank_stress(f1)
        w2, r2 = max_rank_stress(f2)
        assert (r1, r2) == (1, 1)
        E1 = extend_stress_matrix(stress_matrix(f1.graph, w1), sh.embed1, sh.total)
        E2 = extend_stress_matrix(stress_matrix(f2.graph, w2), sh.embed2, sh.total)
        assert combined_kernel_dimension([E1, E2]) == 3
        assert blend_stress_matrices(E1, E2, 0.5)[1] == 4 + 4 - 2 * 3


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 12), data=st.data())
def test_blend_rank_property(seed, n, data):
    k = data.draw(st.integers(0, n - 1))
    rng = np.random.default_rng(seed)
    S1, S2, r1, r2 = controlled_pair(rng, n, k)
    assert numeric_rank(S1) == r1 and numeric_rank(S2) == r2
    assert combined_kernel_dimension([S1, S2]) == k
    for t in rng.uniform(0.01, 0.99, 5):
        assert blend_stress_matrices(S1, S2, t)[1] == n - k


class TestGlueUnion:
    def test_two_k4(self):
        f1, f2, sh = two_k4()
        g = glue_union(f1, f2, sh)
        assert g.n == 5 and len(g.graph) == 9
        assert certify_generic_global_rigidity(g.graph, 2).verdict is Verdict.CERTIFIED_YES

    def test_drops_second_only_shared_members(self):
        f1, f2, sh = two_k4()
        g1 = complete_graph(4).without(1, 2)
        out = glue_union(Framework(g1, f1.configuration), f2, sh)
        assert (1, 2) not in out.graph
        assert len(out.graph) == 5 + 3

    def test_preconditions(self):
        f1, f2, _ = two_k4()
        with pytest.raises(PreconditionError):
            glue_union(f1, f2, SharedVertexMap(((0, 0), (1, 1)), 4, 4))
        moved = Framework(f2.graph, Configuration(f2.configuration.points + 0.1))
        with pytest.raises(InputError):
            glue_union(f1, moved, SharedVertexMap(((0, 0), (1, 1), (2, 2)), 4, 4))


class TestCombineEraseBar:
    @pytest.mark.parametrize("bar", [(1, 2), (0, 1), (0, 2)])
    def test_two_k4(self, bar):
        f1, f2, sh = two_k4()
        res = combine_erase_bar(f1, f2, sh, bar)
        assert not res.inconclusive and not res.fallback
        assert res.framework.n == 5 and len(res.framework.graph) == 8
        assert res.erased not in res.framework.graph
        assert res.erased_value == 0.0
        assert verify_equilibrium(res.framework, res.witness, 1e-9)
        assert res.witness_rank == 2 == numeric_rank(stress_matrix(res.framework.graph, res.witness))
        assert certify_generic_global_rigidity(res.framework.graph, 2, seed=3).verdict is Verdict.CERTIFIED_YES

    def test_3d(self):
        pts = random_configuration(7, 3, 42).points
        f1 = Framework(complete_graph(5), Configuration(pts[:5]))
        f2 = Framework(complete_graph(5), Configuration(pts[[0, 1, 2, 3, 5]]))
        sh = SharedVertexMap(tuple((i, i) for i in range(4)), 5, 5)
        res = combine_erase_bar(f1, f2, sh, (0, 3))
        assert res.framework.n == 6 and res.witness_rank == 6 - 4
        assert verify_equilibrium(res.framework, res.witness, 1e-9)
        assert certify_generic_global_rigidity(res.framework.graph, 3).verdict is Verdict.CERTIFIED_YES

    def test_deterministic(self):
        f1, f2, sh = two_k4()
        assert combine_erase_bar(f1, f2, sh, (1, 2), seed=5).witness == combine_erase_bar(f1, f2, sh, (1, 2), seed=5).witness

    def test_errors(self):
        f1, f2, sh = two_k4()
        with pytest.raises(InputError):
            combine_erase_bar(f1, f2, sh, (0, 3))  # vertex 3 not shared
        with pytest.raises(PreconditionError):
            combine_erase_bar(f1, f2, SharedVertexMap(((0, 0), (1, 1)), 4, 4), (0, 1))
        g1 = complete_graph(4).without(1, 2)
        with pytest.raises(InputError):
            combine_erase_bar(Framework(g1, f1.configuration), f2, sh, (1, 2))
        pts = np.array([(0, 0), (1, 0), (2, 0), (0.3, 1.1)], dtype=float)
        q = np.array([(0, 0), (1, 0), (2, 0), (0.7, -0.9)], dtype=float)
        flat1, flat2 = Framework(complete_graph(4), Configuration(pts)), Framework(complete_graph(4), Configuration(q))
        with pytest.raises(PreconditionError):
            combine_erase_bar(flat1, flat2, sh, (0, 1))

    def test_shortfall_is_flagged(self):
        # C4 + diagonal has no stress: ranks short, result is Inconclusive, never silent
        f1, f2, sh = two_k4()
        g = complete_graph(4).without(0, 3)
        res = combine_erase_bar(Framework(g, f1.configuration), f2, sh, (1, 2))
        assert res.inconclusive and res.verdict is Verdict.INCONCLUSIVE


class TestSuperimpose:
    def pentagon(self):
        ex = named_examples()["pentagon"]
        return ex, SharedVertexMap(ex.shared, 4, 4)

    def test_pentagon(self):
        ex, sh = self.pentagon()
        f, w = superimpose_tensegrities(ex.framework, ex.stress, ex.partner, ex.partner_stress, sh, ex.common_member)
        assert check_super_stability(f, w).verdict is Verdict.CERTIFIED_YES
        assert is_proper(f.graph, w)
        # pentagon vertex 3 of the first quad lands at combined index 2
        assert f.graph.member(0, 2).kind is MemberKind.STRUT and w.get(0, 2) < 0
        assert f.graph.member(0, 1).kind is MemberKind.CABLE
        assert (1, 2) not in f.graph
        assert f.n == 5 and congruent(
            Configuration(f.configuration.points[[0, 1, 3, 2, 4]]), Configuration(np.array(PENTAGON)), 1e-12
        )

    def test_same_kinds_rejected(self, square_tensegrity):
        f, w = square_tensegrity
        sh = SharedVertexMap(((0, 0), (1, 1), (2, 2), (3, 3)), 4, 4)
        with pytest.raises(InputError):
            superimpose_tensegrities(f, w, f, w, sh, (0, 1))

    def test_not_super_stable_rejected(self):
        ex, sh = self.pentagon()
        with pytest.raises(PreconditionError):
            superimpose_tensegrities(ex.framework, ex.stress.scaled(-1), ex.partner, ex.partner_stress, sh,
                                     ex.common_member)

    def test_too_few_shared(self):
        ex = named_examples()["spoke-glue"]
        with pytest.raises(PreconditionError):
            superimpose_tensegrities(ex.framework, ex.stress, ex.partner, ex.partner_stress,
                                     SharedVertexMap(ex.shared, 4, 4), ex.common_member)


def test_align_onto():
    f, _ = convex_quadrilateral_tensegrity([(0, 0), (2, 0), (2, 1), (0, 1)])
    theta = 0.7
    R = np.array([[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]])
    moved = Framework(f.graph, Configuration(f.configuration.points @ R.T + [3.0, -1.0]))
    back = align_onto(moved, [0, 1, 2], f.configuration.points[:3])
    np.testing.assert_allclose(back.configuration.points, f.configuration.points, atol=1e-12)
