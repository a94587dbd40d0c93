"""Unit tests for K-groups of ideals, induced maps and positive cones."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphinv.errors import NotHereditarySaturated, NotNested, NotSupportedInW
from graphinv.services.abelian import FGAbelianGroup
from graphinv.services.ideal_lattice import enumerate_lattice
from graphinv.services.intlinalg import IntMatrix
from graphinv.services.ktheory import (
    Answer,
    ConeSearch,
    induced_k_maps,
    is_order_unit,
    k_groups,
    positive_cone_member,
    subquotient_k,
)
from tests.conftest import make_graph

TOP = {"1", "2", "3"}


def cuntz(n: int):
    return make_graph(["v"], [(f"e{i}", "v", "v") for i in range(n)])


class TestKGroups:
    @pytest.mark.parametrize("n", [2, 3, 4, 7])
    def test_cuntz_k0_is_cyclic(self, n):
        data = k_groups(cuntz(n), {"v"})
        assert data.k0.invariants() == (0, (n - 1,) if n > 2 else ())
        assert data.k1.is_trivial()

    def test_single_loop(self, single_loop):
        data = k_groups(single_loop, {"v"})
        assert data.k0.describe() == "Z"
        assert data.k1.describe() == "Z"
        assert data.kappa((3,)) == (3,)
        assert data.k1_coordinates((3,)) == (3,)

    def test_two_circles_top(self, two_circles):
        data = k_groups(two_circles, TOP)
        assert data.k0.describe() == "Z^2"
        assert data.k1.describe() == "Z^2"
        assert data.k1_basis == ((1, 0, 0), (0, 1, 0))
        # [3] = [1] + [2]
        assert data.pi({"3": 1}) == data.pi({"1": 1, "2": 1})

    def test_empty_set(self, two_circles):
        data = k_groups(two_circles, set())
        assert data.k0.is_trivial()
        assert data.k1.is_trivial()

    def test_singular_vertex_has_free_class(self, chain2):
        data = k_groups(chain2, {"a", "b"})
        assert data.regular == ("a",)
        assert data.k0.describe() == "Z"
        assert data.k1.is_trivial()

    def test_not_hereditary_saturated(self, two_circles):
        with pytest.raises(NotHereditarySaturated):
            k_groups(two_circles, {"3"})

    def test_vector_outside_w(self, two_circles):
        data = k_groups(two_circles, {"1"})
        with pytest.raises(NotSupportedInW):
            data.vector({"2": 1})


class TestInducedMaps:
    def test_k1_inclusion_of_first_loop(self, two_circles):
        _, k1 = induced_k_maps(two_circles, {"1"}, TOP)
        assert k1.matrix.to_lists() == [[1], [0]]
        assert k1.coordinate_matrix() == [[1], [0]]

    def test_k0_inclusion_sends_generator_to_class(self, two_circles):
        k0, _ = induced_k_maps(two_circles, {"2"}, TOP)
        top = k_groups(two_circles, TOP)
        assert top.k0.reduce(k0((1,))) == top.generator_class("2")

    def test_not_nested(self, two_circles):
        with pytest.raises(NotNested):
            induced_k_maps(two_circles, {"1"}, {"2"})

    def test_functoriality(self, two_circles):
        lattice = enumerate_lattice(two_circles)
        bottom, one, top = lattice.bottom, lattice.elements[1], lattice.top
        direct = induced_k_maps(two_circles, bottom, top)[0]
        composed = induced_k_maps(two_circles, one, top)[0].compose(induced_k_maps(two_circles, bottom, one)[0])
        assert direct.equals(composed)


class TestPositiveCone:
    def test_zero_is_member(self, two_circles):
        answer = positive_cone_member(two_circles, TOP, {})
        assert answer.status is Answer.YES
        assert answer.witness == {}

    def test_free_rank_one_separation(self, single_loop):
        answer = positive_cone_member(single_loop, {"v"}, {"v": -1})
        assert answer.status is Answer.NO
        assert answer.reason

    def test_free_rank_one_witness(self, single_loop):
        answer = positive_cone_member(single_loop, {"v"}, {"v": 2})
        assert answer.status is Answer.YES
        assert answer.witness == {"v": 2}

    def test_torsion_group_cone_is_everything(self, o3):
        answer = positive_cone_member(o3, {"v"}, {"v": -1})
        assert answer.is_member
        data = k_groups(o3, {"v"})
        assert data.pi(answer.witness) == data.pi({"v": -1})

    def test_witness_has_requested_class(self, two_circles):
        answer = positive_cone_member(two_circles, TOP, {"3": 1, "1": -1})
        assert answer.status is Answer.YES
        data = k_groups(two_circles, TOP)
        assert all(n > 0 for n in answer.witness.values())
        assert data.pi(answer.witness) == data.pi({"2": 1})

    def test_negative_class_not_confirmed(self, two_circles):
        answer = positive_cone_member(two_circles, TOP, {"1": -1})
        assert answer.status is not Answer.YES

    def test_outside_w(self, two_circles):
        with pytest.raises(NotSupportedInW):
            positive_cone_member(two_circles, {"1"}, {"2": 1})

    @given(st.integers(min_value=-20, max_value=20))
    @settings(max_examples=30, deadline=None)
    def test_cyclic_cone_search(self, target):
        group = FGAbelianGroup(1, IntMatrix.from_rows([[5]]))
        answer = ConeSearch(group, {"g": (2,)}, (target,), bound=4, cap=1000).run()
        assert answer.status is Answer.YES
        assert (2 * sum(answer.witness.values()) - target) % 5 == 0

    def test_mixed_signs_reach_everything(self):
        answer = ConeSearch(FGAbelianGroup.free(1), {"p": (2,), "q": (-3,)}, (1,), bound=4, cap=1000).run()
        assert answer.status is Answer.YES
        assert 2 * answer.witness.get("p", 0) - 3 * answer.witness.get("q", 0) == 1

    @pytest.mark.parametrize(
        ("cap", "reason"),
        [(4, "search cap reached"), (6, "no witness within the search bound")],
    )
    def test_cap_counts_vectors_over_the_bound(self, cap, reason):
        # totals up to 2 give six vectors; (2, 0) and (0, 2) exceed the bound
        generators = {"g": (1, -1), "h": (-1, 1)}
        answer = ConeSearch(FGAbelianGroup.free(2), generators, (1, 0), bound=1, cap=cap).run()
        assert answer.status is Answer.UNKNOWN
        assert answer.reason == reason


class TestOrderUnits:
    def test_sink_generates_top(self, two_circles):
        assert is_order_unit(two_circles, TOP, {"3": 1})
        assert not is_order_unit(two_circles, TOP, {"1": 1})

    def test_support_outside_w(self, two_circles):
        with pytest.raises(NotSupportedInW):
            is_order_unit(two_circles, {"1"}, {"3": 1})


class TestSubquotient:
    def test_circle_layer(self, two_circles):
        sub = subquotient_k(two_circles, {"2"}, TOP)
        assert sub.layer == ("1", "3")
        assert sub.k0.describe() == "Z"
        assert sub.k1_rank == 1
        assert sub.circle_pattern
        assert not sub.af_pattern

    def test_purely_infinite_layer(self, o3):
        sub = subquotient_k(o3, set(), {"v"})
        assert sub.k0.describe() == "Z/2"
        assert sub.af_pattern

    def test_af_layer(self, chain2):
        sub = subquotient_k(chain2, set(), {"a", "b"})
        assert sub.k0.describe() == "Z"
        assert sub.af_pattern
        assert not sub.circle_pattern
