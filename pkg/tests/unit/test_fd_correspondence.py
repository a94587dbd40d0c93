"""Unit tests for finite-dimensional correspondences."""

import numpy as np
import pytest

from graphinv.errors import (
    DimensionEquationViolated,
    DimsMismatch,
    HasCycle,
    InternalAssertion,
    ParseError,
)
from graphinv.services.fd_correspondence import (
    FDTarget,
    align_af,
    check_dimension_equation,
    conjugate_family,
    dimension_hom,
    haar_unitary,
    lift_monoid_hom_fd,
    unitary_difference,
    verify_ck,
)
from tests.conftest import make_graph

ONE_BLOCK = FDTarget((1,))


@pytest.fixture
def double_edge():
    """Two parallel edges from p into q: d_q = 2 d_p."""
    return make_graph(["p", "q"], [("x", "p", "q"), ("y", "p", "q")])


class TestDimensionEquation:
    def test_cuntz_needs_zero(self, o2):
        with pytest.raises(DimensionEquationViolated) as exc_info:
            check_dimension_equation(o2, ONE_BLOCK, {"v": 1})
        assert exc_info.value.detail["vertex"] == "v"
        assert exc_info.value.detail["expected"] == 2

    def test_zero_dims(self, o2):
        assert check_dimension_equation(o2, ONE_BLOCK, {"v": 0}) == {"v": (0,)}

    def test_missing_vertices_default_to_zero(self, chain2):
        assert check_dimension_equation(chain2, FDTarget((2, 3)), {}) == {"a": (0, 0), "b": (0, 0)}

    def test_multi_block(self, double_edge):
        dims = check_dimension_equation(double_edge, FDTarget((4, 4)), {"p": [1, 2], "q": [2, 4]})
        assert dims["q"] == (2, 4)

    def test_wrong_length(self, chain2):
        with pytest.raises(ParseError):
            check_dimension_equation(chain2, FDTarget((2, 2)), {"a": [1], "b": [1]})

    def test_scalar_needs_one_block(self, chain2):
        with pytest.raises(ParseError):
            check_dimension_equation(chain2, FDTarget((2, 2)), {"a": 1, "b": 1})

    def test_negative_entry(self, chain2):
        with pytest.raises(ParseError):
            check_dimension_equation(chain2, ONE_BLOCK, {"a": -1, "b": -1})

    def test_dimension_hom(self, double_edge):
        hom = dimension_hom(double_edge, ONE_BLOCK, {"p": 1, "q": 2})
        assert hom.verified
        assert hom.images["q"].as_dict() == {"block0": 2}


class TestHaarUnitary:
    def test_unitary(self):
        u = haar_unitary(4, np.random.default_rng(7))
        assert np.allclose(u.conj().T @ u, np.eye(4))

    def test_seeded(self):
        a = haar_unitary(3, np.random.default_rng(11))
        b = haar_unitary(3, np.random.default_rng(11))
        assert np.array_equal(a, b)

    def test_empty(self):
        assert haar_unitary(0, np.random.default_rng(0)).shape == (0, 0)


class TestLift:
    def test_permutation_family(self, double_edge):
        family = lift_monoid_hom_fd(double_edge, ONE_BLOCK, {"p": 1, "q": 2})
        assert np.array_equal(family.unitaries["q"][0], np.eye(2))
        assert "p" not in family.unitaries
        assert verify_ck(family, double_edge).holds()

    def test_haar_family(self, double_edge):
        family = lift_monoid_hom_fd(double_edge, ONE_BLOCK, {"p": 2, "q": 4}, method="haar", seed=5)
        report = verify_ck(family, double_edge)
        assert report.holds()
        assert set(report.edges) == {"x", "y"}
        assert family.seed == 5

    def test_haar_is_deterministic(self, double_edge):
        f1 = lift_monoid_hom_fd(double_edge, ONE_BLOCK, {"p": 1, "q": 2}, method="haar", seed=3)
        f2 = lift_monoid_hom_fd(double_edge, ONE_BLOCK, {"p": 1, "q": 2}, method="haar", seed=3)
        assert np.array_equal(f1.unitaries["q"][0], f2.unitaries["q"][0])

    def test_haar_default_seed(self, double_edge, settings_env):
        settings_env(fd_seed=9)
        family = lift_monoid_hom_fd(double_edge, ONE_BLOCK, {"p": 1, "q": 2}, method="haar")
        assert family.seed == 9

    def test_cuntz_rejected(self, o2):
        with pytest.raises(DimensionEquationViolated):
            lift_monoid_hom_fd(o2, ONE_BLOCK, {"v": 1})

    def test_unknown_method(self, chain2):
        with pytest.raises(InternalAssertion):
            lift_monoid_hom_fd(chain2, ONE_BLOCK, {"a": 1, "b": 1}, method="random")

    def test_broken_family_detected(self, double_edge):
        family = lift_monoid_hom_fd(double_edge, ONE_BLOCK, {"p": 1, "q": 2})
        family.unitaries["q"] = (2 * np.eye(2, dtype=complex),)
        assert not verify_ck(family, double_edge).holds()


class TestDifferenceAndConjugation:
    def test_difference_reconstructs(self, double_edge):
        f1 = lift_monoid_hom_fd(double_edge, ONE_BLOCK, {"p": 1, "q": 2}, method="haar", seed=1)
        f2 = lift_monoid_hom_fd(double_edge, ONE_BLOCK, {"p": 1, "q": 2}, method="haar", seed=2)
        upsilon = unitary_difference(f1, f2)
        assert np.allclose(upsilon["q"][0] @ f1.unitaries["q"][0], f2.unitaries["q"][0])

    def test_dims_mismatch(self, double_edge):
        f1 = lift_monoid_hom_fd(double_edge, ONE_BLOCK, {"p": 1, "q": 2})
        f2 = lift_monoid_hom_fd(double_edge, ONE_BLOCK, {"p": 2, "q": 4})
        with pytest.raises(DimsMismatch) as exc_info:
            unitary_difference(f1, f2)
        assert exc_info.value.detail["vertex"] == "p"

    def test_conjugation_preserves_relations(self, double_edge):
        family = lift_monoid_hom_fd(double_edge, ONE_BLOCK, {"p": 1, "q": 2}, method="haar", seed=4)
        rng = np.random.default_rng(8)
        w = {"p": (haar_unitary(1, rng),), "q": (haar_unitary(2, rng),)}
        assert verify_ck(conjugate_family(family, double_edge, w), double_edge).holds()


class TestAlignAF:
    def test_chain_alignment(self, chain2):
        f1 = lift_monoid_hom_fd(chain2, ONE_BLOCK, {"a": 2, "b": 2}, method="haar", seed=1)
        f2 = lift_monoid_hom_fd(chain2, ONE_BLOCK, {"a": 2, "b": 2}, method="haar", seed=2)
        w = align_af(chain2, f1, f2, ["a", "b"])
        aligned = conjugate_family(f2, chain2, w)
        assert np.allclose(aligned.unitaries["a"][0], f1.unitaries["a"][0])
        assert set(w) == {"a", "b"}

    def test_double_edge_alignment(self, double_edge):
        f1 = lift_monoid_hom_fd(double_edge, ONE_BLOCK, {"p": 1, "q": 2}, method="haar", seed=6)
        f2 = lift_monoid_hom_fd(double_edge, ONE_BLOCK, {"p": 1, "q": 2})
        w = align_af(double_edge, f1, f2, ["p", "q"])
        aligned = conjugate_family(f2, double_edge, w)
        assert np.allclose(aligned.unitaries["q"][0], f1.unitaries["q"][0])

    def test_cycle_rejected(self, toeplitz):
        f = lift_monoid_hom_fd(toeplitz, ONE_BLOCK, {"u": 0, "w": 0})
        with pytest.raises(HasCycle):
            align_af(toeplitz, f, f, ["w"])
