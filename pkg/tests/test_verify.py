from fractions import Fraction

import pytest

from paratile.lattices import Lattice
from paratile.linalg import QMatrix, det_q
from paratile.polytopes import HPolytope, scaled, voronoi_cell
from paratile.verify import (brute_force_volume, monte_carlo_volume,
                             verify_tiling)

FCC = Lattice(3, QMatrix.from_rows([[1, 1, 0], [1, 0, 1], [0, 1, 1]]))


# --- tiling audits ----------------------------------------------------------


def test_cube_tiles_standard_lattice():
    rep = verify_tiling(HPolytope.cube(2), Lattice.standard(2), samples=2000)
    assert rep.passed
    assert rep.volume_equal
    assert rep.overlap_violations == 0 and rep.gap_violations == 0
    assert rep.engine == "int64"
    assert rep.samples == 2000
    assert rep.translates >= 4
    assert rep.witnesses == ()


def test_fcc_cell_tiles_its_lattice():
    cell = voronoi_cell(FCC)
    rep = verify_tiling(cell, FCC, samples=1500)
    assert rep.passed
    assert rep.volume_equal


def test_inflated_cube_overlaps():
    body = scaled(HPolytope.cube(3), Fraction(101, 100))
    rep = verify_tiling(body, Lattice.standard(3), samples=3000)
    assert not rep.passed
    assert not rep.volume_equal
    assert rep.overlap_violations > 0
    assert rep.gap_violations == 0
    assert len(rep.witnesses) > 0


def test_shrunk_cube_leaves_gaps():
    body = scaled(HPolytope.cube(3), Fraction(99, 100))
    rep = verify_tiling(body, Lattice.standard(3), samples=3000)
    assert not rep.passed
    assert rep.gap_violations > 0
    assert rep.overlap_violations == 0
    assert len(rep.witnesses) > 0


def test_tiling_audit_is_deterministic():
    a = verify_tiling(HPolytope.cube(2), Lattice.standard(2), samples=800)
    b = verify_tiling(HPolytope.cube(2), Lattice.standard(2), samples=800)
    assert a == b


def test_bigint_engine_reaches_same_verdicts():
    # bits = 62 pushes the integer scores past the int64 audit
    ok = verify_tiling(HPolytope.cube(2), Lattice.standard(2),
                       samples=400, bits=62)
    assert ok.engine == "bigint"
    assert ok.passed
    bad = verify_tiling(scaled(HPolytope.cube(2), Fraction(101, 100)),
                        Lattice.standard(2), samples=400, bits=62)
    assert bad.engine == "bigint"
    assert not bad.passed and bad.overlap_violations > 0


def test_tiling_rejects_rank_mismatch():
    with pytest.raises(ValueError):
        verify_tiling(HPolytope.cube(2), Lattice.standard(3))


# --- volume oracles ---------------------------------------------------------


def test_brute_force_volume_cube_is_exact():
    iv = brute_force_volume(HPolytope.cube(2), 8)
    assert iv.lo == iv.hi == 1


def test_brute_force_volume_brackets_chart_volume():
    # framed bodies are measured in chart coordinates: ambient volume
    # divided by |det frame|
    cell = voronoi_cell(FCC)
    chart = Fraction(2) / abs(det_q(cell.frame))
    assert chart == 1
    coarse = brute_force_volume(cell, 4)
    fine = brute_force_volume(cell, 8)
    for iv in (coarse, fine):
        assert iv.lo <= chart <= iv.hi
    assert fine.width < coarse.width


def test_monte_carlo_volume_cube_fills_its_box():
    est = monte_carlo_volume(HPolytope.cube(3), samples=2000)
    assert est["estimate"] == 1.0
    assert est["certified"] is False
    assert est["samples"] == 2000


def test_monte_carlo_volume_brackets_chart_volume():
    cell = voronoi_cell(FCC)
    est = monte_carlo_volume(cell, samples=4000)
    assert est["low_2sigma"] <= 1 <= est["high_2sigma"]
    assert est["certified"] is False
    again = monte_carlo_volume(cell, samples=4000)
    assert est == again
