"""End-to-end CLI runs against graph files and catalog graphs."""

import io
import json

import pytest

from graphinv import __version__
from graphinv.cli import main, parse_dims, parse_psi
from graphinv.errors import NotMonotone, ParseError
from graphinv.services.ideal_lattice import HSSet

TWO_CIRCLES_TEXT = """\
# two circles feeding a third vertex
vertex 1
vertex 2
vertex 3
edge a 1 1
edge b 2 2
edge c 1 3
edge d 2 3
"""


def run(*argv):
    out = io.StringIO()
    status = main(list(argv), stdout=out)
    return status, json.loads(out.getvalue())


@pytest.fixture
def two_circles_file(tmp_path):
    path = tmp_path / "two_circles.graph"
    path.write_text(TWO_CIRCLES_TEXT, encoding="utf-8")
    return str(path)


class TestCommands:
    def test_ideals_from_file(self, two_circles_file):
        status, data = run("ideals", two_circles_file)
        assert status == 0
        assert [e["members"] for e in data["lattice"]["elements"]] == [[], ["1"], ["2"], ["1", "2", "3"]]
        assert data["tool_version"] == __version__

    def test_ktheory_single_set(self, two_circles_file):
        status, data = run("ktheory", two_circles_file, "--set", "1,2,3")
        assert status == 0
        (kdata,) = data["kdata"]
        assert kdata["k0"]["description"] == "Z^2"
        assert kdata["k1"]["description"] == "Z^2"

    def test_monoid_eq(self):
        status, data = run("monoid", "eq", "catalog:o2", "v:1", "v:5")
        assert status == 0
        assert data["monoid"]["answer"] == "equal"
        assert data["monoid"]["oracle"] == "equal"

    def test_monoid_leq(self):
        _, data = run("monoid", "leq", "catalog:single_loop", "v:2", "v:1")
        assert data["monoid"]["answer"] == "no"

    def test_tails(self):
        status, data = run("tails", "catalog:two_circles")
        assert status == 0
        assert {t["kind"] for t in data["tails"]} == {"circle"}
        assert all(t["subquotient"]["pattern"] == "circle" for t in data["tails"])

    def test_ext_self(self):
        _, data = run("ext", "catalog:single_loop")
        ext = data["ext"]
        assert [ext[k]["description"] for k in ("ext0", "ext1", "ext2")] == ["Z", "0", "0"]

    def test_ext_with_target_and_psi(self, two_circles_file):
        status, data = run("ext", two_circles_file, "--target", "catalog:two_circles", "--psi", "=;1=2;2=1;1,2,3=1,2,3")
        assert status == 0
        assert data["other"]["vertices"] == ["1", "2", "3"]

    def test_compare_self(self, two_circles_file):
        status, data = run("compare", two_circles_file, two_circles_file)
        assert status == 0
        assert data["verdict"]["conclusion"] == "homotopy_equivalent"
        assert data["verdict"]["lattice_isomorphisms"] == "2"

    def test_compare_differ(self):
        _, data = run("compare", "catalog:o2", "catalog:o3")
        assert data["verdict"]["conclusion"] == "invariants_differ"

    def test_fd_haar(self):
        status, data = run("fd", "catalog:chain2", "--blocks", "3", "--dims", "a:3;b:3", "--haar", "--seed", "4")
        assert status == 0
        assert data["fd"]["seed"] == "4"
        assert data["fd"]["residual"] <= 1e-12
        assert data["fd"]["monoid_hom_verified"] is True

    def test_catalog_listing(self):
        _, data = run("catalog")
        assert "two_circles" in {e["id"] for e in data["catalog"]}

    def test_catalog_entry(self):
        _, data = run("catalog", "o3")
        assert data["graph"]["vertices"] == ["v"]


class TestExitStatus:
    def test_parse_error(self, tmp_path):
        path = tmp_path / "bad.graph"
        path.write_text("vertex v\nloop v\n", encoding="utf-8")
        status, data = run("ideals", str(path))
        assert status == 1
        assert data["error"]["code"] == "parse_error"
        assert data["error"]["detail"]["line"] == 2

    def test_unknown_vertex(self, tmp_path):
        path = tmp_path / "bad.graph"
        path.write_text("vertex v\nedge e v w\n", encoding="utf-8")
        status, data = run("ideals", str(path))
        assert status == 1
        assert data["error"]["code"] == "unknown_vertex"

    def test_dimension_equation(self):
        status, data = run("fd", "catalog:o2", "--blocks", "1", "--dims", "v:1")
        assert status == 1
        assert data["error"]["code"] == "dimension_equation_violated"

    def test_not_hereditary_saturated(self):
        status, data = run("ktheory", "catalog:two_circles", "--set", "3")
        assert status == 1
        assert data["error"]["code"] == "not_hereditary_saturated"

    def test_too_large(self):
        status, data = run("ideals", "catalog:two_circles", "--max-vertices", "2")
        assert status == 2
        assert data["error"]["code"] == "too_large"

    def test_cap_exceeded(self, settings_env):
        settings_env(lattice_iso_cap=1)
        status, data = run("ext", "catalog:two_circles", "--target", "catalog:two_circles")
        assert status == 2
        assert data["error"]["code"] == "cap_exceeded"

    def test_corpus_bound(self):
        status, data = run("corpus", "--max-vertices", "99", "--count", "1")
        assert status == 2

    @pytest.mark.parametrize(
        "argv",
        [
            ("corpus", "--count", "abc"),
            ("fd", "catalog:o2"),
            ("nonsense",),
            (),
        ],
    )
    def test_usage_errors_are_parse_errors(self, argv):
        status, data = run(*argv)
        assert status == 1
        assert data["error"]["code"] == "parse_error"
        assert data["error"]["detail"]["usage"].startswith("usage:")

    def test_missing_file(self, tmp_path):
        status, data = run("ideals", str(tmp_path / "absent.graph"))
        assert status == 1


class TestParsers:
    def test_parse_psi_swap(self, two_circles):
        psi = parse_psi("=;1=2;2=1;1,2,3=1,2,3", two_circles, two_circles)
        assert psi[HSSet(frozenset({"2"}))] == HSSet(frozenset({"1"}))
        assert len(psi) == 4

    def test_parse_psi_partial(self, two_circles):
        with pytest.raises(NotMonotone):
            parse_psi("1=2;2=1", two_circles, two_circles)

    def test_parse_psi_malformed(self, two_circles):
        with pytest.raises(ParseError):
            parse_psi("1", two_circles, two_circles)

    def test_parse_dims(self):
        assert parse_dims("v:3;w:1,2") == {"v": (3,), "w": (1, 2)}

    def test_parse_dims_malformed(self):
        with pytest.raises(ParseError):
            parse_dims("v=3")
