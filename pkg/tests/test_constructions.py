import cmath
import math

import numpy as np
import pytest

from polydisc import (
    DihedralParams,
    InfeasibleError,
    InvalidConfigError,
    GraphKind,
    arc_polygon,
    classify,
    dihedral_delta,
    diameter,
    discriminant,
    dodecagon12,
    extract,
    hexagon6,
    kite4,
    normalized_discriminant,
    regular_ngon,
    sparse_arc,
    triwave,
)
from polydisc.constructions import (
    arc_edge_directions,
    default_triwave_amplitude,
    dihedral_params_for_angle,
    tri,
    zonogon_support_max,
    zonogon_support_peak,
)
from polydisc.geometry import log_delta_bar, pairwise_distances

SQRT3 = math.sqrt(3.0)
KITE_VALUE = 16.0 * (7.0 - 4.0 * SQRT3)
HEXAGON_VALUE = (2.0 * SQRT3 - 2.0) ** 18 / 3.0 ** 6
PENTAGON_VALUE = (4.0 / 5.0) ** 5 * (math.sqrt(5.0) - 1.0) ** 10


class TestRegularNgon:
    def test_even_value_is_one(self):
        assert normalized_discriminant(regular_ngon(4)) == pytest.approx(1.0, rel=1e-13)

    def test_pentagon_value(self):
        assert normalized_discriminant(regular_ngon(5)) == pytest.approx(
            PENTAGON_VALUE, rel=1e-13)

    def test_odd_closed_form(self):
        n = 7
        _, ld = discriminant(regular_ngon(n))
        expected = -n * (n - 1) * math.log(math.cos(math.pi / (2 * n))) \
            + n * math.log(n)
        assert ld == pytest.approx(expected, rel=1e-12)

    def test_diameter_two(self):
        for n in (2, 3, 6, 9):
            assert diameter(regular_ngon(n)) == pytest.approx(2.0, abs=1e-14)

    def test_invalid(self):
        with pytest.raises(InvalidConfigError):
            regular_ngon(1)


class TestKite:
    def test_value(self):
        assert normalized_discriminant(kite4()) == pytest.approx(KITE_VALUE, rel=1e-13)

    def test_diameter(self):
        assert diameter(kite4()) == pytest.approx(2.0, abs=1e-15)

    def test_short_diagonal_squared(self):
        z = kite4().as_complex
        assert abs(z[1] - z[3]) ** 2 == pytest.approx(8.0 - 4.0 * SQRT3, rel=1e-14)


class TestHexagon:
    def test_value(self):
        assert normalized_discriminant(hexagon6()) == pytest.approx(
            HEXAGON_VALUE, rel=1e-13)

    def test_graph_class(self):
        c = classify(extract(hexagon6()))
        assert c.kind == GraphKind.ODD_CYCLE_WITH_PENDANTS and c.detail == 3

    def test_diameter(self):
        assert diameter(hexagon6()) == pytest.approx(2.0, abs=1e-14)


class TestDihedral:
    def test_m1_forced_point_reproduces_hexagon(self):
        params = DihedralParams(m=1, z=np.array([2.0 / SQRT3 + 0j]))
        assert params.residuals().max() < 1e-14
        ld = dihedral_delta(1, params)
        assert ld - 6 * math.log(6) == pytest.approx(
            math.log(HEXAGON_VALUE), abs=1e-12)
        # the generated set is congruent to the explicit six-point optimum
        from polydisc.optimize import congruent
        assert congruent(params.generate(), hexagon6(), tol=1e-9)

    def test_m2_value_at_best_angle(self):
        alpha, _cfg = dodecagon12()
        params = dihedral_params_for_angle(alpha)
        ld = dihedral_delta(2, params)
        dbar = math.exp(ld - 12 * math.log(12))
        assert dbar == pytest.approx(1.2901383629057280854, abs=1e-10)

    def test_closed_product_matches_direct(self):
        rng = np.random.default_rng(2)
        for m in (1, 2, 3):
            for _ in range(4):
                params = _random_feasible_params(m, rng)
                ld = dihedral_delta(m, params)
                _, direct = discriminant(params.generate())
                assert ld == pytest.approx(direct, rel=1e-9)

    def test_infeasible_params_raise(self):
        params = DihedralParams(m=2, z=np.array([1.0 + 0j, 0.3 + 0.4j]))
        with pytest.raises(InfeasibleError):
            dihedral_delta(2, params)


def _random_feasible_params(m, rng):
    """Chain angles drawn at random; z_1 solved from the closure constraint."""
    if m == 1:
        return DihedralParams(m=1, z=np.array([2.0 / SQRT3 + 0j]))
    angles = rng.uniform(0.05, math.pi / 6 - 0.05, m - 1)
    steps = np.exp(1j * angles)
    # Im(e^{-2 pi i/3} z_m) = -1 with z_m = z_1 - 2 sum(steps) fixes z_1
    w = cmath.exp(-2j * math.pi / 3)
    shift = -2.0 * steps.sum()
    z1 = (-1.0 - (w * shift).imag) / w.imag
    chain = [z1 + 0j]
    for s in steps:
        chain.append(chain[-1] - 2.0 * s)
    return DihedralParams(m=m, z=np.array(chain))


class TestDodecagon:
    def test_angle(self):
        alpha, _ = dodecagon12()
        assert alpha == pytest.approx(0.26175825, abs=1e-7)

    def test_cosine_high_precision(self):
        alpha, _ = dodecagon12()
        assert math.cos(alpha) == pytest.approx(0.9659364725201318915, abs=1e-12)

    def test_value(self):
        _, cfg = dodecagon12()
        assert normalized_discriminant(cfg) == pytest.approx(
            1.2901383629057280854, abs=1e-10)

    def test_graph_shape(self):
        _, cfg = dodecagon12()
        c = classify(extract(cfg, 1e-9))
        assert c.kind == GraphKind.ODD_CYCLE_WITH_PENDANTS and c.detail == 9


class TestArcPolygon:
    def test_equilateral_sides(self):
        for k in (1, 3, 7):
            poly = arc_polygon(k)
            z = poly.Y.as_complex
            sides = np.abs(np.roll(z, -1) - z)
            assert np.abs(sides - math.sin(poly.delta_angle)).max() < 1e-12

    def test_closure(self):
        z = arc_polygon(5).Y.as_complex
        edges = np.roll(z, -1) - z
        assert abs(edges.sum()) < 1e-12

    def test_diameter_value(self):
        for k in (1, 2, 10):
            n = 6 * k
            assert diameter(arc_polygon(k).Y) == pytest.approx(
                math.cos(math.pi / (2 * n)), abs=1e-13)

    def test_far_vertex_pair_attains_diameter(self):
        k = 4
        z = arc_polygon(k).Y.as_complex
        # indices are stored with vertex B_i at position i (B_0 = B_{6k})
        assert abs(z[k] - z[4 * k]) == pytest.approx(
            math.cos(math.pi / (12 * k)), abs=1e-13)

    def test_edge_direction_multiset(self):
        for k in (2, 5):
            poly = arc_polygon(k)
            n = 6 * k
            dirs = arc_edge_directions(poly)
            expected = np.sort(np.arange(n) * math.pi / n)
            assert np.abs(np.sort(dirs) - expected).max() < 1e-10

    def test_table_values(self):
        table = {1: 1.310854, 2: 1.290138, 3: 1.283184}
        for k, expected in table.items():
            assert normalized_discriminant(arc_polygon(k).P) == pytest.approx(
                expected, abs=1e-6)

    def test_scaled_copy_has_diameter_two(self):
        assert diameter(arc_polygon(6).P) == pytest.approx(2.0, abs=1e-12)


class TestSparseArc:
    def test_diameter_two(self):
        cfg = sparse_arc(20)
        assert diameter(cfg) == pytest.approx(2.0, abs=1e-12)

    def test_disconnected_diameter_graph(self):
        cfg = sparse_arc(12)
        assert classify(extract(cfg, 1e-9)).kind == GraphKind.DISCONNECTED

    def test_limit_value(self):
        cstar = 3.0 ** 2.25 / 8.0 * math.exp((math.pi ** 2 - 2 * SQRT3 * math.pi) / 8.0)
        value = normalized_discriminant(sparse_arc(600))
        assert value == pytest.approx(cstar ** (1.0 / 9.0), abs=2e-3)

    def test_odd_invalid(self):
        with pytest.raises(InvalidConfigError):
            sparse_arc(9)


class TestTriwave:
    def test_antipodal_distances_exact(self):
        tw = triwave(100)
        z = tw.config.as_complex
        for k in range(50):
            assert abs(z[k] - z[k + 50]) == pytest.approx(2.0, abs=1e-14)

    def test_all_other_distances_below_two(self):
        tw = triwave(100)
        d = pairwise_distances(tw.config.as_complex)
        np.fill_diagonal(d, 0.0)
        for k in range(50):
            d[k, k + 50] = d[k + 50, k] = 0.0
        assert d.max() < 2.0

    def test_fourier_coefficients_by_quadrature(self):
        # cosine coefficients of the wave: 8 / (pi k)^2 for odd k, 0 for even
        xg, wg = np.polynomial.legendre.leggauss(120)
        x = 0.5 * math.pi * (xg + 1.0)  # [0, pi], wave is even
        w = 0.5 * math.pi * wg
        for k in range(1, 10):
            coeff = (2.0 / math.pi) * float(np.sum(w * tri(x) * np.cos(k * x)))
            expected = 8.0 / (math.pi ** 2 * k ** 2) if k % 2 == 1 else 0.0
            assert coeff == pytest.approx(expected, abs=1e-8)

    def test_small_or_odd_n_invalid(self):
        with pytest.raises(InvalidConfigError):
            triwave(7)
        with pytest.raises(InvalidConfigError):
            triwave(6)
        with pytest.raises(InvalidConfigError):
            triwave(12, m_frequency=2)

    def test_infeasible_amplitude_names_pair(self):
        with pytest.raises(InfeasibleError) as err:
            triwave(16, amplitude=0.3)
        assert err.value.worst_pair is not None

    def test_other_frequency_default_feasible(self):
        for m in (1, 5):
            tw = triwave(24, m_frequency=m)
            d = pairwise_distances(tw.config.as_complex)
            assert d.max() <= 2.0 + 1e-12
            assert tw.amplitude > 0

    def test_default_amplitude_formula(self):
        n = 40
        assert default_triwave_amplitude(n) == pytest.approx(
            math.pi ** 2 / (12 * n) * (1 - 1 / n), rel=1e-15)

    def test_limit_at_moderate_order(self):
        from polydisc import zeta3
        tw = triwave(512)
        limit = 7 * zeta3() / 24 - math.pi ** 4 / 864
        assert log_delta_bar(tw.config) == pytest.approx(limit, abs=4e-3)


class TestZonogonSupport:
    def test_peak_matches_grid(self):
        for n in (12, 24):
            grid = zonogon_support_max(n, grid_points=10 ** 5)
            assert grid == pytest.approx(zonogon_support_peak(n), abs=1e-6)

    def test_peak_formula(self):
        assert zonogon_support_peak(12) == pytest.approx(
            1.0 / math.sin(math.pi / 24.0), rel=1e-15)
