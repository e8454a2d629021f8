import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from helpers import indicator_1d, random_function
from verifylab.errors import DataInvariantError, ParseError
from verifylab.mesh import (
    GAUSSIAN,
    LEBESGUE,
    SampledFunction,
    build_grid,
    cell_weights,
    integrate,
    lp_norm,
    make_domain,
    read_csv,
    support_measure,
    unit_ball_volume,
    write_csv,
    zero_function,
)


def test_grid_geometry():
    g = build_grid(2, 2.0, 41)
    assert g.spacing == pytest.approx(0.1)
    assert g.shape == (41, 41)
    x = g.coordinates()[0]
    assert x.min() == pytest.approx(-2.0) and x.max() == pytest.approx(2.0)


def test_lebesgue_weights_total():
    g = build_grid(2, 2.0, 41)
    assert cell_weights(g, LEBESGUE).sum() == pytest.approx((41 * g.spacing) ** 2)


def test_gaussian_weights_are_a_probability():
    g = build_grid(1, 8.0, 2001)
    assert cell_weights(g, GAUSSIAN).sum() == pytest.approx(1.0, abs=1e-12)


def test_boundary_invariant_names_the_cell():
    g = build_grid(1, 1.0, 11)
    v = np.zeros(11)
    v[-1] = 2.0
    with pytest.raises(DataInvariantError, match="cell 10"):
        SampledFunction(g, LEBESGUE, v)


def test_non_finite_rejected():
    g = build_grid(1, 1.0, 11)
    v = np.zeros(11)
    v[3] = np.nan
    with pytest.raises(DataInvariantError, match="non-finite"):
        SampledFunction(g, LEBESGUE, v)


def test_indicator_integrals():
    f = indicator_1d(1.0)
    h = f.grid.spacing
    assert support_measure(f) == pytest.approx(1.0, abs=2 * h)
    assert integrate(f) == pytest.approx(support_measure(f))
    assert lp_norm(f, 2) == pytest.approx(math.sqrt(support_measure(f)))
    assert lp_norm(f, math.inf) == 1.0


def test_zero_function():
    z = zero_function(build_grid(2, 1.0, 11))
    assert integrate(z) == 0 and support_measure(z) == 0


def test_ball_domain_measure():
    d = make_domain(build_grid(2, 2.0, 201), "ball", 1.0)
    assert d.measure == pytest.approx(math.pi)
    assert d.cell_measure == pytest.approx(math.pi, rel=0.01)
    assert unit_ball_volume(3) == pytest.approx(4 * math.pi / 3)


@settings(max_examples=30, deadline=None)
@given(arrays(np.float64, 19, elements=st.floats(-1e6, 1e6)))
def test_csv_round_trip(tmp_path_factory, vals):
    g = build_grid(1, 1.0, 21)
    full = np.zeros(21)
    full[1:-1] = vals
    f = SampledFunction(g, LEBESGUE, full)
    path = tmp_path_factory.mktemp("csv") / "f.csv"
    write_csv(f, path, comment="round trip")
    back = read_csv(path)
    np.testing.assert_array_equal(back.values, f.values)
    assert back.grid == g


def test_csv_parse_errors_carry_line_numbers(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("# note\ndim,half_width,points_per_axis,measure\n1,1.0,11,lebesgue\nindex,value\n3,abc\n")
    with pytest.raises(ParseError, match="line 5"):
        read_csv(p)
    p.write_text("dim,half_width,points_per_axis,measure\n1,1.0,11,lebesgue\n99,1.0\n")
    with pytest.raises(ParseError, match="out of range"):
        read_csv(p)


def test_csv_boundary_value_is_data_error(tmp_path):
    p = tmp_path / "edge.csv"
    p.write_text("dim,half_width,points_per_axis,measure\n1,1.0,11,lebesgue\n0,1.0\n")
    with pytest.raises(DataInvariantError):
        read_csv(p)


def test_scaling_helpers():
    f = random_function(build_grid(2, 1.0, 15), np.random.default_rng(0))
    assert integrate(f.scaled(-3.0)) == pytest.approx(3 * integrate(f))
    assert np.all(f.abs().values >= 0)
