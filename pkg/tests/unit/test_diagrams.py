"""Unit tests for group diagrams, Hom groups and the Ext complex."""

import pytest

from graphinv.errors import IndexMismatch, NotACocycle, NotMonotone, NotNatural
from graphinv.services.abelian import GroupHom
from graphinv.services.diagrams import (
    DiagramMorphism,
    build_k_diagram,
    cochain_complex,
    ext1_class,
    ext_groups,
    free_vertex_diagram,
    hom_diagram,
    hom_free_diagram,
    index_elements,
    k0_morphisms,
    pullback_diagram,
    represents_zero_ext2,
)
from graphinv.services.ideal_lattice import HSSet


def hs(*members: str) -> HSSet:
    return HSSet(frozenset(members))


def identity_morphism(diagram):
    return DiagramMorphism(
        diagram,
        diagram,
        {w: GroupHom.identity(diagram.nodes[w]) for w in diagram.index},
    )


class TestBuildDiagram:
    def test_two_circles_k1_nodes(self, two_circles):
        k1 = build_k_diagram(two_circles, 1)
        assert [k1.node(w).describe() for w in k1.index] == ["0", "Z", "Z", "Z^2"]
        assert k1.hom(hs("1"), hs("1", "2", "3")).matrix.to_lists() == [[1], [0]]

    def test_k0_diagram_is_coherent(self, two_circles):
        k0 = build_k_diagram(two_circles, 0)
        k0.check_coherence()
        assert len(k0.covers) == 4

    def test_join_irreducible_index(self, two_circles):
        assert index_elements(two_circles, "s") == (hs("1"), hs("2"))
        k1 = build_k_diagram(two_circles, 1, "s")
        assert k1.covers == ()

    def test_free_vertex_diagram(self, two_circles):
        free = free_vertex_diagram(two_circles, frozenset({"1", "2"}))
        assert free.node(hs("1", "2", "3")).describe() == "Z^2"
        assert free.node(hs()).is_trivial()

    def test_zero_diagram(self, o2):
        assert build_k_diagram(o2, 1).is_zero()


class TestPullback:
    def test_identity_pullback(self, two_circles):
        k1 = build_k_diagram(two_circles, 1)
        back = pullback_diagram({w: w for w in k1.index}, k1)
        assert [back.node(w) for w in back.index] == [k1.node(w) for w in k1.index]

    def test_swap_pullback(self, two_circles):
        k1 = build_k_diagram(two_circles, 1)
        psi = {w: w for w in k1.index}
        psi[hs("1")], psi[hs("2")] = hs("2"), hs("1")
        back = pullback_diagram(psi, k1)
        assert back.hom(hs("1"), hs("1", "2", "3")).matrix.to_lists() == [[0], [1]]

    def test_non_monotone(self, two_circles):
        k1 = build_k_diagram(two_circles, 1)
        psi = {w: w for w in k1.index}
        psi[hs()], psi[hs("1")] = hs("1"), hs()
        with pytest.raises(NotMonotone):
            pullback_diagram(psi, k1)

    def test_image_outside_index(self, two_circles):
        small = build_k_diagram(two_circles, 1, "s")
        with pytest.raises(IndexMismatch):
            pullback_diagram({hs(): hs()}, small)


class TestHomGroups:
    def test_endomorphisms_of_two_circles_k1(self, two_circles):
        k1 = build_k_diagram(two_circles, 1)
        hom = hom_diagram(k1, k1)
        assert hom.group.describe() == "Z^2"
        assert all(m.is_natural() for m in hom.generating_morphisms())

    def test_lift_round_trip(self, two_circles):
        k1 = build_k_diagram(two_circles, 1)
        hom = hom_diagram(k1, k1)
        ident = identity_morphism(k1)
        coordinates = hom.from_lift(hom.lift_of(ident))
        assert coordinates is not None
        assert hom.to_morphism(coordinates).is_isomorphism()

    def test_index_mismatch(self, two_circles, single_loop):
        with pytest.raises(IndexMismatch):
            hom_diagram(build_k_diagram(two_circles, 1), build_k_diagram(single_loop, 1))

    def test_product_realisation(self, two_circles):
        k1 = build_k_diagram(two_circles, 1)
        product = hom_free_diagram(two_circles, None, k1)
        # Z at <1>, Z at <2>, Z^2 at <3>
        assert product.group.describe() == "Z^4"
        family = {"1": (1,), "2": (0,), "3": (0, 0)}
        morphism = product.family_to_morphism(family)
        assert morphism.is_natural()
        assert product.morphism_to_family(morphism) == family

    def test_k0_morphisms(self, single_loop):
        k1 = build_k_diagram(single_loop, 1)
        k0 = k0_morphisms(single_loop, k1)
        assert k0.group.describe() == "Z"
        morphism = k0.morphism(k0.family((1,)))
        assert morphism.is_natural()
        assert morphism.is_isomorphism()


class TestExt:
    def test_single_loop(self, single_loop):
        ext = ext_groups(single_loop, build_k_diagram(single_loop, 1))
        assert ext.describe() == ("Z", "0", "0")

    def test_two_circles_graph(self, two_circles):
        ext = ext_groups(two_circles, build_k_diagram(two_circles, 1))
        assert ext.describe() == ("Z^2", "0", "0")

    def test_join_irreducible_index(self, two_circles):
        ext = ext_groups(two_circles, build_k_diagram(two_circles, 1, "s"), "s")
        assert ext.ext0.describe() == "Z^2"
        assert ext.ext2.is_trivial()

    def test_torsion_ext1(self, o3):
        ext = ext_groups(o3, build_k_diagram(o3, 0))
        assert ext.describe() == ("Z/2", "Z/2", "0")

    def test_cuntz_vanishes(self, o2):
        assert ext_groups(o2, build_k_diagram(o2, 1)).describe() == ("0", "0", "0")

    def test_complex_is_a_complex(self, two_circles):
        complex_ = cochain_complex(two_circles, build_k_diagram(two_circles, 1))
        assert complex_.d1.compose(complex_.d0).is_zero()

    def test_wrong_index(self, two_circles, single_loop):
        with pytest.raises(IndexMismatch):
            ext_groups(two_circles, build_k_diagram(single_loop, 1))


class TestObstruction:
    def test_identity_factors(self, single_loop):
        k1 = build_k_diagram(single_loop, 1)
        result = represents_zero_ext2(single_loop, k1, identity_morphism(k1))
        assert result.is_zero
        assert result.witness == {"v": (1,)}

    def test_non_natural_rejected(self, two_circles):
        k1 = build_k_diagram(two_circles, 1)
        components = {w: GroupHom.zero(k1.nodes[w], k1.nodes[w]) for w in k1.index}
        components[hs("1")] = GroupHom.identity(k1.nodes[hs("1")])
        with pytest.raises(NotNatural):
            represents_zero_ext2(two_circles, k1, DiagramMorphism(k1, k1, components))


class TestExt1Class:
    def test_nonzero_class(self, o3):
        result = ext1_class(o3, build_k_diagram(o3, 0), {"v": (1,)})
        assert not result.is_zero
        assert result.coordinates == (1,)

    def test_zero_class(self, o3):
        result = ext1_class(o3, build_k_diagram(o3, 0), {"v": (0,)})
        assert result.is_zero
        assert set(result.witness) == {"v"}

    def test_not_a_cocycle(self, single_loop):
        with pytest.raises(NotACocycle):
            ext1_class(single_loop, build_k_diagram(single_loop, 1), {"v": (1,)})
