from fractions import Fraction

import pytest

from paratile.construction import (ConstructionError, RecursionConfig,
                                   RegimeError, ball_volume_interval,
                                   bound_value, choose_m, construct,
                                   construct_bound_only,
                                   isoperimetric_ratio_lower,
                                   predicted_bound_interval, scan_induction,
                                   schedule_parameters)
from paratile.linalg import IntMatrix
from paratile.radicals import SqrtSum
from paratile.serialization import construction_report_to_json, dump_json

WORKED_B = IntMatrix.from_rows([[1, 1, 0, 0], [0, 0, 1, 1]])


def worked_config(**kw):
    return RecursionConfig(matrix_override=((WORKED_B, 1),), **kw)


# --- parameter schedule -----------------------------------------------------


def test_choose_m_at_a_million():
    assert choose_m(10 ** 6, 4) == 510


def test_choose_m_rejects_base_regime():
    # n <= 4 kappa^2 belongs to the base case, not the schedule
    with pytest.raises(RegimeError):
        choose_m(64, 4)
    with pytest.raises(RegimeError):
        choose_m(10, 4)


def test_choose_m_shrinks():
    for n in (10 ** 3, 10 ** 4, 10 ** 5):
        m = choose_m(n, 4)
        assert 0 <= m < n


def test_predicted_bound_n1_is_sixteen():
    iv = predicted_bound_interval(1, 4)
    # ln 1 = 0 kills the growth factor, leaving 4 kappa exactly
    assert iv.lo == iv.hi == 16


def test_predicted_bound_rejects_bad_args():
    with pytest.raises(ValueError):
        predicted_bound_interval(0, 4)
    with pytest.raises(ValueError):
        predicted_bound_interval(5, 0)


def test_predicted_bound_dominates_trivial_at_small_n():
    for n in range(1, 8):
        iv = predicted_bound_interval(n, 4)
        assert iv.lo > 2 * n


def test_schedule_parameters_at_a_million():
    m, d = schedule_parameters(10 ** 6, RecursionConfig())
    assert (m, d) == (510, 4)


def test_schedule_rejects_tiny_m():
    # just above the base regime the schedule collapses to m < 4
    with pytest.raises(RegimeError):
        schedule_parameters(70, RecursionConfig())


# --- geometric construction -------------------------------------------------


def test_construct_cube_dimensions():
    for n in range(1, 5):
        rep = construct(n)
        assert not rep.bound_only
        assert [lv.mode for lv in rep.levels] == ["cube"]
        assert rep.ratio_exact == SqrtSum.from_rational(2 * n)
        assert rep.trivial_bound == 2 * n
        assert rep.within_predicted is True
        assert rep.parallelotope.measures().volume \
            == SqrtSum.from_rational(1)


def test_construct_rejects_nonpositive_dimension():
    with pytest.raises(ValueError):
        construct(0)


def test_construct_falls_back_when_schedule_fails():
    # n = 70 passes the regime gate but yields m = 1; fall back to the cube
    rep = construct(70)
    assert [lv.mode for lv in rep.levels] == ["cube"]
    assert rep.ratio_exact == SqrtSum.from_rational(140)


def test_worked_example_exact_ratio():
    rep = construct(4, worked_config())
    assert [lv.mode for lv in rep.levels] == ["step", "cube"]
    assert rep.ratio_exact == SqrtSum.from_rational(6) * SqrtSum.sqrt(2)
    step = rep.levels[0]
    assert step.s == 1
    assert step.norm_usq == 2
    assert step.ratio_kernel == SqrtSum.from_rational(2) * SqrtSum.sqrt(2)
    assert step.ratio_image == SqrtSum.from_rational(4) * SqrtSum.sqrt(2)
    assert step.ratio == step.ratio_kernel + step.ratio_image
    assert all(ok for _, ok in step.checks)
    assert rep.parallelotope.measures().volume == SqrtSum.from_rational(1)


def test_worked_example_deterministic_bytes():
    doc_a = dump_json(construction_report_to_json(
        construct(4, worked_config()), "0"))
    doc_b = dump_json(construction_report_to_json(
        construct(4, worked_config()), "0"))
    assert doc_a == doc_b


def test_override_with_zero_column_errors():
    # a zero column kills even single-column independence
    bad = IntMatrix.from_rows([[1, 1, 0, 0], [0, 0, 1, 0]])
    with pytest.raises(ConstructionError):
        construct(4, RecursionConfig(matrix_override=((bad, None),)))


def test_dim_cap_downgrades_to_bound_only():
    rep = construct(4, worked_config(dim_cap=1))
    assert rep.bound_only
    assert rep.parallelotope is None
    assert "dim cap" in rep.downgrade_reason
    assert rep.ratio_upper == 8          # trivial chain at n = 4
    assert rep.within_predicted is True


def test_geometric_reports_have_no_downgrade_reason():
    assert construct(3).downgrade_reason is None


# --- bound-only mode --------------------------------------------------------


def test_bound_only_at_a_million():
    rep = construct_bound_only(10 ** 6)
    assert rep.bound_only
    assert rep.ratio_exact is None
    assert rep.parallelotope is None
    assert rep.ratio_upper <= 2 * 10 ** 6
    assert rep.within_predicted is True


def test_bound_value_trivial_chain():
    # desk-scale schedule gives s = 0, so the chain settles on 2n
    value, traces = bound_value(100, RecursionConfig())
    assert value == 200
    assert [t.mode for t in traces] == ["cube"]


# --- schedule consistency scan ----------------------------------------------


def test_scan_induction_grid():
    recs = scan_induction(4, 10 ** 6, 1000)
    assert len(recs) == 1000
    assert recs[0]["n"] == 65
    assert recs[-1]["n"] == 10 ** 6
    assert all(r["covered"] for r in recs)


def test_scan_induction_rejects_empty_range():
    with pytest.raises(ValueError):
        scan_induction(4, 65, 10)


# --- isoperimetric context --------------------------------------------------


def test_ball_volumes_known_values():
    assert ball_volume_interval(0).lo == 1
    assert ball_volume_interval(1).lo == 2
    b2 = ball_volume_interval(2)
    assert b2.lo < Fraction(31415927, 10 ** 7) < b2.hi \
        or (b2.lo > Fraction(31415926, 10 ** 7) and b2.hi
            < Fraction(31415927, 10 ** 7))
    b3 = ball_volume_interval(3)
    assert Fraction(41887902, 10 ** 7) < b3.hi
    assert b3.lo < Fraction(41887903, 10 ** 7)
    with pytest.raises(ValueError):
        ball_volume_interval(-1)


def test_isoperimetric_lower_bound_unit_lattice():
    iso = isoperimetric_ratio_lower(3, Fraction(1))
    assert Fraction(48, 10) < iso.lo
    assert iso.hi < Fraction(49, 10)
    # the cube attains 6, comfortably above the bound
    assert iso.hi < 6


def test_isoperimetric_lower_bound_scales_with_covolume():
    dense = isoperimetric_ratio_lower(3, Fraction(1))
    sparse = isoperimetric_ratio_lower(3, Fraction(4))
    assert sparse.hi < dense.lo
