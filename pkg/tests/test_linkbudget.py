import math

import numpy as np
import pytest

from isacplan.exceptions import OutOfRange, SingularElevation
from isacplan.geometry import Circle, Point2D
from isacplan.linkbudget import (
    CENTER,
    G0_DEFAULT,
    WORST_CORNER,
    GroundPoint,
    LinkParams,
    antenna_gain,
    corner_distance,
    db_to_linear,
    linear_to_db,
    loss_metric,
    path_gain,
    penetration_loss,
    snr,
    spectral_efficiency,
    worst_point_loss_metric,
)

import oracles

P = LinkParams()
AREA = Circle((0.0, 0.0), 1000.0)

# standalone scalar evaluation with exact c, default link values, outdoor point at 500 m
SE_AT_500 = 9.924071432334815


def test_antenna_gain_example():
    assert G0_DEFAULT == pytest.approx(2.2846, abs=1e-4)
    assert antenna_gain(math.pi / 4, 0.0, P) == pytest.approx(5.555555555555556, rel=1e-12)


def test_antenna_gain_outside_beam_and_symmetry():
    assert antenna_gain(0.5, P.phi_a + 0.01, P) == 0.0
    assert antenna_gain(0.6, 0.0, P) == antenna_gain(-0.6, 0.0, P)


def test_antenna_gain_singular():
    with pytest.raises(SingularElevation):
        antenna_gain(0.0, 0.0, P)


def test_penetration_loss_examples():
    assert penetration_loss(3.0) == pytest.approx(50.11872336272722, rel=1e-12)
    assert penetration_loss(6.0) == pytest.approx(794.3282347242813, rel=1e-12)
    assert penetration_loss(4.5) / penetration_loss(2.0) == pytest.approx(10.0, rel=1e-12)


def test_path_gain_examples():
    # exact c; a value quoted with c = 3e8 would be 0.14% higher
    assert path_gain(0.0, P) == pytest.approx(6.323815174603835e-09, rel=1e-12)
    assert linear_to_db(path_gain(0.0, P)) == pytest.approx(-81.99, abs=0.01)
    assert path_gain(10.0, P) > path_gain(20.0, P)
    p2 = P.replace(altitude=200.0)
    assert path_gain(0.0, p2) == pytest.approx(path_gain(0.0, P) / 4.0, rel=1e-12)


def test_spectral_efficiency_pinned_value():
    x = GroundPoint(Point2D(500.0, 0.0))
    assert spectral_efficiency(x, (0.0, 0.0), True, P) == pytest.approx(SE_AT_500, rel=1e-12)
    assert float(oracles.se(500.0)) == pytest.approx(SE_AT_500, rel=1e-12)


def test_spectral_efficiency_out_of_beam():
    assert spectral_efficiency(GroundPoint(Point2D(1.0, 1.0)), (0.0, 0.0), False, P) == 0.0


def test_indoor_snr_ratio():
    indoor = snr(500.0, P, P.loss_factor(True))
    outdoor = snr(500.0, P.with_outdoor_delta_db(0.0), 1.0)
    assert outdoor / indoor == pytest.approx(10 ** 1.7, rel=1e-12)


def test_spectral_efficiency_at_nadir_uses_clamp():
    v = spectral_efficiency(GroundPoint(Point2D(0.0, 0.0)), (0.0, 0.0), True, P)
    assert math.isfinite(v) and v > 0


def test_worst_point_metric_ordering_at_half_radius():
    r = AREA.radius / 2
    assert worst_point_loss_metric(r, WORST_CORNER, AREA, P) > worst_point_loss_metric(r, CENTER, AREA, P)


def test_corner_metric_small_beam_limit():
    tiny = P.replace(phi_a=1e-9)
    assert corner_distance(AREA.radius, AREA.radius, tiny.phi_a) < 1e-6
    m = worst_point_loss_metric(AREA.radius, WORST_CORNER, AREA, tiny)
    # the corner sits under the UAV, so only the clamped nadir floor remains, itself proportional to phi_a
    assert m == pytest.approx(loss_metric(0.0, tiny), rel=1e-9)
    half = worst_point_loss_metric(AREA.radius, WORST_CORNER, AREA, P.replace(phi_a=5e-10))
    assert half == pytest.approx(m / 2, rel=1e-6)


def test_metric_gap_single_sign_change():
    r = np.linspace(500, 1000, 10_000)
    gap = np.array([worst_point_loss_metric(x, WORST_CORNER, AREA, P) - worst_point_loss_metric(x, CENTER, AREA, P) for x in r])
    assert int(np.sum(np.sign(gap[:-1]) != np.sign(gap[1:]))) == 1


def test_worst_point_out_of_range():
    with pytest.raises(OutOfRange):
        worst_point_loss_metric(400.0, CENTER, AREA, P)


def test_loss_metric_matches_oracle():
    d = np.linspace(0, 2000, 101)
    assert np.allclose(loss_metric(d, P), oracles.metric(d), rtol=1e-12)


def test_db_roundtrip():
    for f in (0.5, 3.0, 6.0, 28.0):
        lp = penetration_loss(f)
        assert db_to_linear(linear_to_db(lp)) == pytest.approx(lp, rel=1e-12)
    g = path_gain(321.0, P)
    assert db_to_linear(linear_to_db(g)) == pytest.approx(g, rel=1e-12)


def test_outdoor_delta():
    p = P.with_outdoor_delta_db(30.0)
    assert p.outdoor_loss == pytest.approx(10 ** (1.7 - 3.0), rel=1e-12)
    assert p.loss_factor(True) == pytest.approx(10 ** 1.7)


@pytest.mark.parametrize("field,value", [("f_c", 0.0), ("phi_a", math.pi / 2), ("altitude", -1.0), ("bandwidth", 0.0)])
def test_link_params_validation(field, value):
    with pytest.raises(ValueError):
        P.replace(**{field: value})
