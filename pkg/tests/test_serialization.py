import json
import pathlib
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from paratile.construction import RecursionConfig, construct
from paratile.lattices import Lattice, lattices_equal
from paratile.linalg import IntMatrix, QMatrix
from paratile.polytopes import HPolytope, voronoi_cell
from paratile.radicals import SqrtSum
from paratile.sampler import LdpcParams, sample_ldpc
from paratile.serialization import (SerializationError,
                                    construction_report_to_json, dec_str,
                                    dump_json, fixture_from_json, format_hrep,
                                    frac_str, lattice_from_json,
                                    lattice_to_json, load_schema,
                                    matrix_from_json, matrix_to_json,
                                    parse_frac, parse_hrep,
                                    polytope_from_json, polytope_to_json,
                                    sampler_stats_to_json, sqrtsum_from_json,
                                    sqrtsum_to_json, tiling_report_to_json,
                                    validate_document)
from paratile.verify import verify_tiling

FIXTURE_DIR = pathlib.Path(__file__).resolve().parent.parent / "fixtures"

FCC = Lattice(3, QMatrix.from_rows([[1, 1, 0], [1, 0, 1], [0, 1, 1]]))


# --- scalar codecs ----------------------------------------------------------


@given(st.integers(-10 ** 12, 10 ** 12), st.integers(1, 10 ** 9))
def test_frac_str_round_trip(num, den):
    x = Fraction(num, den)
    assert parse_frac(frac_str(x)) == x


def test_parse_frac_rejects_garbage():
    for bad in ("abc", "1/0", "1.5", ""):
        with pytest.raises(SerializationError):
            parse_frac(bad)


def test_dec_str_renderings():
    assert dec_str(Fraction(1, 8)) == "0.125"
    assert dec_str(Fraction(-3, 2)) == "-1.5"
    assert dec_str(Fraction(0)) == "0"
    assert dec_str(Fraction(7)) == "7"
    assert dec_str(Fraction(2, 3)) == "0.666666666666666"


# --- matrices and lattices ----------------------------------------------------


def test_matrix_round_trip_integer():
    m = IntMatrix.from_rows([[1, -2, 3], [0, 5, -7]])
    doc = matrix_to_json(m)
    validate_document("matrix", doc)
    back = matrix_from_json(doc)
    assert isinstance(back, IntMatrix)
    assert back.entries == m.entries


def test_matrix_round_trip_rational():
    m = QMatrix.from_rows([[Fraction(1, 2), Fraction(3)],
                           [Fraction(-5, 7), Fraction(0)]])
    back = matrix_from_json(matrix_to_json(m))
    assert isinstance(back, QMatrix)
    assert back.entries == m.entries


def test_matrix_from_json_checks_grid():
    doc = {"rows": 2, "cols": 2, "entries": [["1", "2", "3"], ["4", "5"]]}
    with pytest.raises(SerializationError):
        matrix_from_json(doc)


def test_lattice_round_trip():
    doc = lattice_to_json(FCC)
    validate_document("lattice", doc)
    assert lattices_equal(lattice_from_json(doc), FCC)


def test_lattice_from_json_checks_column_length():
    doc = {"ambient_dim": 3, "basis_cols": [["1", "0"]], "integer": True}
    with pytest.raises(SerializationError):
        lattice_from_json(doc)


# --- radicals -----------------------------------------------------------------


def test_sqrtsum_round_trip():
    vals = [SqrtSum.from_rational(6) * SqrtSum.sqrt(2),
            (SqrtSum.sqrt(2) + SqrtSum.sqrt(3)) * (SqrtSum.sqrt(2)
                                                   + SqrtSum.sqrt(3)),
            SqrtSum.zero(),
            SqrtSum.from_rational(Fraction(-7, 3))]
    for v in vals:
        assert sqrtsum_from_json(sqrtsum_to_json(v)) == v


# --- polytopes ----------------------------------------------------------------


def test_polytope_round_trip_identity_frame():
    cube = HPolytope.cube(3)
    doc = polytope_to_json(cube)
    validate_document("polytope", doc)
    assert doc["subspace_basis"] is None
    back = polytope_from_json(doc)
    assert set(back.ambient_halfspaces()) == set(cube.ambient_halfspaces())
    assert back.volume() == cube.volume()


def test_polytope_round_trip_framed():
    cell = voronoi_cell(FCC)
    doc = polytope_to_json(cell)
    validate_document("polytope", doc)
    assert doc["subspace_basis"] is not None
    back = polytope_from_json(doc)
    assert back.volume() == cell.volume()
    assert back.surface_area() == cell.surface_area()
    assert set(back.vertices()) == set(cell.vertices())


def test_hrep_round_trip():
    for body in (HPolytope.cube(2), voronoi_cell(FCC)):
        back = parse_hrep(format_hrep(body))
        assert back.volume() == body.volume()
        assert back.ratio() == body.ratio()


def test_hrep_parse_errors():
    with pytest.raises(SerializationError):
        parse_hrep("# dim 2 ambient 2\n")
    with pytest.raises(SerializationError):
        parse_hrep("1 0 1\n")


# --- report documents -----------------------------------------------------------


def test_tiling_report_document():
    rep = verify_tiling(HPolytope.cube(2), Lattice.standard(2), samples=500)
    doc = tiling_report_to_json(rep)
    validate_document("tiling_report", doc)
    assert doc["passed"] is True
    assert doc["witnesses"] == []


def test_sampler_stats_document():
    mat, stats = sample_ldpc(LdpcParams(m=16, n=64, d=4, seed=1))
    doc = sampler_stats_to_json(16, 64, 4, 1, stats, s=0,
                                c=Fraction(1, 3000), e_d=Fraction(0),
                                verified_s=1)
    validate_document("sampler_stats", doc)
    assert doc["accepted"] is True
    assert doc["verified_s"] == 1


def test_construction_report_documents():
    base = construction_report_to_json(construct(3), "1.2.3", timing=0.5)
    validate_document("construction_report", base)
    assert base["final"]["ratio_exact"] is not None

    B = IntMatrix.from_rows([[1, 1, 0, 0], [0, 0, 1, 1]])
    cfg = RecursionConfig(matrix_override=((B, 1),))
    worked = construction_report_to_json(construct(4, cfg), "1.2.3")
    validate_document("construction_report", worked)
    assert worked["levels"][0]["mode"] == "step"

    down = construction_report_to_json(
        construct(4, RecursionConfig(matrix_override=((B, 1),), dim_cap=1)),
        "1.2.3")
    validate_document("construction_report", down)
    assert down["bound_only"] is True
    assert "dim cap" in down["downgrade_reason"]


def test_fixture_files_validate_and_reconstruct():
    names = ("cube3", "worked_n4", "scaled_cube3", "dup_column_matrix")
    for name in names:
        path = FIXTURE_DIR / f"{name}.json"
        if not path.exists():
            continue
        obj = json.loads(path.read_text())
        if "body" not in obj:
            continue  # matrix fixtures are validated by the CLI tests
        validate_document("fixture", obj)
        fx = fixture_from_json(obj)
        if fx["expected_ratio"] is not None:
            assert fx["body"].ratio() == fx["expected_ratio"]
        if fx["ratio_parts"]:
            total = SqrtSum.zero()
            for part in fx["ratio_parts"]:
                total = total + part
            assert total == fx["expected_ratio"]


# --- schema plumbing -------------------------------------------------------------


def test_unknown_schema_kind_rejected():
    with pytest.raises(SerializationError):
        load_schema("nonsense")


def test_validate_document_reports_kind():
    with pytest.raises(SerializationError, match="matrix"):
        validate_document("matrix", {"rows": "two"})


def test_dump_json_is_canonical():
    a = dump_json({"b": 1, "a": [2, 3]})
    b = dump_json({"a": [2, 3], "b": 1})
    assert a == b
    assert a.endswith("\n")
