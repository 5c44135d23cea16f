import math

import numpy as np
import pytest

from polydisc import (
    PointConfig,
    SingularConfigError,
    active_set,
    recover_multipliers,
    regular_ngon,
    verify,
)
from polydisc.constructions import hexagon6, kite4, triwave
from polydisc.geometry import normalize_to_diameter

SQRT7 = math.sqrt(7.0)

# stationary path-graph configuration of four points on diameter 2
P4_CONFIG = PointConfig.from_complex(np.array(
    [1.25 + SQRT7 / 4 * 1j, 0.0 + 0j, 1.5 - SQRT7 / 2 * 1j, 2.0 + 0j]))
P4_ACTIVE = [(0, 2), (1, 2), (1, 3)]


class TestActiveSet:
    def test_kite(self):
        assert set(active_set(kite4())) == {(0, 1), (0, 2), (0, 3), (2, 3)}

    def test_regular_hexagon_main_diagonals(self):
        assert set(active_set(regular_ngon(6))) == {(0, 3), (1, 4), (2, 5)}

    def test_triwave_antipodal(self):
        n = 12
        tw = triwave(n)
        assert set(active_set(tw.config)) == {(k, k + n // 2) for k in range(n // 2)}


class TestRecoverMultipliers:
    def test_path_graph_multipliers(self):
        lam, residual = recover_multipliers(P4_CONFIG, P4_ACTIVE)
        assert lam[(0, 2)] == pytest.approx(0.75, abs=1e-10)
        assert lam[(1, 3)] == pytest.approx(0.75, abs=1e-10)
        assert lam[(1, 2)] == pytest.approx(0.0, abs=1e-10)
        assert residual < 1e-10

    def test_kite(self):
        lam, residual = recover_multipliers(kite4(), active_set(kite4()))
        assert residual < 1e-10
        assert min(lam.values()) >= -1e-12

    def test_pentagon_symmetric_multipliers(self):
        cfg = regular_ngon(5)
        lam, residual = recover_multipliers(cfg, active_set(cfg))
        assert residual < 1e-10
        values = list(lam.values())
        assert np.ptp(values) < 1e-10

    def test_empty_active_reports_gradient_size(self):
        rng = np.random.default_rng(1)
        cfg = PointConfig(rng.uniform(-1, 1, (5, 2)))
        lam, residual = recover_multipliers(cfg, [])
        assert lam == {}
        assert residual > 1e-2


class TestVerify:
    def test_kite_passes(self):
        report = verify(kite4())
        assert report.stationarity_residual < 1e-8
        assert report.min_multiplier >= -1e-10
        assert report.complementarity_violation < 1e-8
        assert not report.structural_failure

    def test_square_report_is_computed(self):
        # the square is stationary; rejecting it is the structure module's
        # job (its diameter graph is disconnected), not this report's
        square = PointConfig([[1, 0], [0, 1], [-1, 0], [0, -1]])
        report = verify(square)
        assert report.stationarity_residual < 1e-10
        from polydisc import maximizer_structure_report
        assert not maximizer_structure_report(square).connected

    def test_random_points_not_stationary(self):
        rng = np.random.default_rng(9)
        z = rng.uniform(-1, 1, (6, 2))
        cfg = normalize_to_diameter(PointConfig(z), 2.0)
        report = verify(cfg)
        assert report.stationarity_residual > 1e-2

    def test_zero_degree_point_flagged(self):
        # an interior point with no incident active pair cannot be stationary
        cfg = PointConfig([[1, 0], [-1, 0], [0.1, 0.33]])
        report = verify(cfg)
        assert report.structural_failure
        assert 2 in report.zero_degree_points

    def test_coincident_invalid(self):
        with pytest.raises(SingularConfigError):
            verify(PointConfig([[0, 0], [0, 0], [1, 0]]))


class TestInvariants:
    def test_rotation_equivariance(self):
        base = hexagon6()
        r0 = verify(base)
        rot = PointConfig.from_complex(base.as_complex * np.exp(0.61j))
        r1 = verify(rot)
        assert r1.stationarity_residual == pytest.approx(
            r0.stationarity_residual, abs=1e-10)
        for pair, lam in r0.multipliers.items():
            assert r1.multipliers[pair] == pytest.approx(lam, abs=1e-10)

    def test_complementary_slackness(self):
        for cfg in (kite4(), hexagon6(), regular_ngon(5)):
            assert verify(cfg).complementarity_violation < 1e-8

    def test_scale_invariance_of_verdict(self):
        base = kite4()
        r0 = verify(base)
        scaled = normalize_to_diameter(PointConfig(base.points * 3.7), 2.0)
        r1 = verify(scaled)
        assert r1.stationarity_residual == pytest.approx(
            r0.stationarity_residual, abs=1e-10)

    def test_path_graph_value_is_one(self):
        from polydisc import normalized_discriminant
        assert normalized_discriminant(P4_CONFIG) == pytest.approx(1.0, abs=1e-12)
