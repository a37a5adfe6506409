import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.optimize import minimize_scalar

from magic_pareto.errors import ConvergenceFailure, DomainError
from magic_pareto.frontiers import (DELTA_CROSSING, DELTA_E, DELTA_G, FrontierPoint, bisect, delta_g_quartic,
                                    f_abc, f_ed, f_gfe, f_ihg, gamma_shift, m2_max, m2_max_values, m2_min,
                                    m2_of_gamma, optimal_cos2_gamma, slope, solve_delta_crossing, solve_delta_g,
                                    special_points)
from magic_pareto.measures import m2_direct
from magic_pareto.parametrization import WhartonAngles, angles_to_state

PI = math.pi
R2 = 1 / math.sqrt(2)
GRID = np.linspace(0, 1, 10_001)


def d_ratio(num, den, d):
    # derivative of ln(num / den(d)) for a polynomial den, via numpy's polynomial calculus
    return -np.polyval(np.polyder(den), d) / np.polyval(den, d)


class TestBranchValues:
    def test_abc(self):
        assert f_abc(0.0) == 0.0
        assert f_abc(R2) == pytest.approx(0.28768207245, abs=1e-11)
        assert f_abc(R2) == pytest.approx(math.log(4 / 3), abs=1e-14)
        assert f_abc(0.5) == pytest.approx(math.log(16 / 13), abs=1e-14)
        assert f_abc(0.5) == pytest.approx(0.20763936, abs=1e-8)

    def test_ihg(self):
        assert f_ihg(0.0) == pytest.approx(math.log(9 / 4), abs=1e-14)
        assert f_ihg(0.5) == pytest.approx(math.log(16 / 7), abs=1e-14)
        assert f_ihg(0.5) == pytest.approx(0.82667857318, abs=1e-11)
        assert f_ihg(1.0) == pytest.approx(math.log(9 / 5), abs=1e-14)

    def test_gfe(self):
        assert f_gfe(R2) == pytest.approx(math.log(16 / 7), abs=1e-14)
        assert f_gfe(DELTA_E) == pytest.approx(math.log(32 / 15), abs=1e-14)
        assert f_gfe(0.0) == pytest.approx(math.log(16 / 9), abs=1e-14)
        assert f_gfe(0.0) < f_ihg(0.0)

    def test_ed(self):
        assert f_ed(1.0) == pytest.approx(math.log(9 / 5), abs=1e-14)
        assert f_ed(DELTA_E) == pytest.approx(math.log(32 / 15), abs=1e-14)

    @pytest.mark.parametrize("f", [f_abc, f_ihg, f_gfe, f_ed])
    def test_domain(self, f):
        for bad in (-0.1, 1.1, float("nan")):
            with pytest.raises(DomainError):
                f(bad)

    def test_vectorized(self):
        assert f_abc(np.array([0.0, R2])) == pytest.approx([0.0, math.log(4 / 3)])


class TestUpperBoundary:
    def test_points(self):
        assert m2_max(0.5) == FrontierPoint(0.5, f_ihg(0.5), "IHG")
        assert m2_max(R2).branch == "GFE" and m2_max(R2).m2 == pytest.approx(math.log(16 / 7))
        assert m2_max(1.0).branch == "ED" and m2_max(1.0).m2 == pytest.approx(math.log(9 / 5))

    def test_left_label_at_joints(self):
        assert m2_max(DELTA_G).branch == "IHG"
        assert m2_max(DELTA_E).branch == "GFE"

    def test_lower(self):
        assert m2_min(0.3) == FrontierPoint(0.3, f_abc(0.3), "ABC")

    def test_vectorized_matches_scalar(self):
        xs = np.linspace(0, 1, 101)
        assert m2_max_values(xs) == pytest.approx([m2_max(x).m2 for x in xs], abs=1e-15)

    def test_band_is_open_inside(self):
        inner = GRID[(GRID > 0.001) & (GRID < 0.999)]
        assert np.all(m2_max_values(inner) - f_abc(inner) > 0)

    def test_upper_is_the_max_of_branches(self):
        upper = m2_max_values(GRID)
        mid = (GRID > DELTA_G) & (GRID < DELTA_E)
        assert np.all(f_gfe(GRID[mid]) > f_ihg(GRID[mid]))
        right = GRID > DELTA_E
        assert np.all(f_ed(GRID[right]) >= f_gfe(GRID[right]))
        assert np.all(upper >= f_gfe(GRID) - 1e-15)

    def test_ed_curve_touches_gfe_only_at_e(self):
        # f_ed - f_gfe = ln(1 + (4d^2 - 3)^2 / (8 (7d^4 - 6d^2 + 9))) >= 0
        gap = f_ed(GRID) - f_gfe(GRID)
        closed = np.log1p((4 * GRID**2 - 3) ** 2 / (8 * (7 * GRID**4 - 6 * GRID**2 + 9)))
        assert gap == pytest.approx(closed, abs=1e-14)
        assert np.all(gap[np.abs(GRID - DELTA_E) > 1e-3] > 0)

    def test_ed_curve_unreachable_left_of_e(self):
        # the optimal cos^2(gamma) would be negative there
        d = np.linspace(0.01, DELTA_E - 1e-3, 50)
        assert np.all((4 * d**2 - 3) / (9 * d**2) < 0)

    def test_maximizers(self):
        for f, expected in ((f_abc, R2), (f_ihg, 0.5), (f_gfe, R2)):
            res = minimize_scalar(lambda d: -f(d), bounds=(0, 1), method="bounded", options={"xatol": 1e-10})
            assert res.x == pytest.approx(expected, abs=1e-6)


class TestJoints:
    def test_roots_against_numpy(self):
        roots = np.roots([24, 32, -72, 0, 17])
        real = sorted(r.real for r in roots if abs(r.imag) < 1e-12 and 0 < r.real < 1)
        assert solve_delta_g() == pytest.approx(real[0], abs=1e-12)
        assert solve_delta_crossing() == pytest.approx(real[1], abs=1e-12)

    def test_published_values(self):
        assert solve_delta_g() == pytest.approx(0.63726445, abs=1e-7)
        assert solve_delta_crossing() == pytest.approx(0.977411, abs=1e-5)

    def test_residuals(self):
        assert abs(delta_g_quartic(DELTA_G)) < 1e-10
        assert abs(delta_g_quartic(DELTA_CROSSING)) < 1e-10

    def test_kink_at_g(self):
        assert abs(f_ihg(DELTA_G) - f_gfe(DELTA_G)) < 1e-10
        assert abs(slope(f_ihg, DELTA_G) - slope(f_gfe, DELTA_G)) > 0.1

    def test_tangency_at_e(self):
        target = -(16 / 15) * math.sqrt(3 / 4)
        assert abs(f_gfe(DELTA_E) - f_ed(DELTA_E)) < 1e-12
        assert slope(f_gfe, DELTA_E) == pytest.approx(target, abs=1e-6)
        assert slope(f_ed, DELTA_E) == pytest.approx(target, abs=1e-6)

    def test_tangent_slope_from_polynomials(self):
        target = -(16 / 15) * math.sqrt(3 / 4)
        assert d_ratio(16, [8, 0, -8, 0, 9], DELTA_E) == pytest.approx(target, abs=1e-13)
        assert d_ratio(18, [7, 0, -6, 0, 9], DELTA_E) == pytest.approx(target, abs=1e-13)

    def test_bisect_needs_bracket(self):
        with pytest.raises(ConvergenceFailure):
            bisect(lambda x: x * x + 1, -1, 1)

    def test_special_points(self):
        sp = special_points()
        assert sp.m2_H == pytest.approx(sp.m2_F)
        assert sp.m2_I == pytest.approx(math.log(9 / 4))
        assert sp.m2_D == pytest.approx(math.log(9 / 5))
        assert sp.m2_G == pytest.approx(f_gfe(DELTA_G))


class TestGammaShift:
    def test_endpoints(self):
        assert gamma_shift(DELTA_E) == pytest.approx(0.0, abs=1e-12)
        assert gamma_shift(1.0) == pytest.approx(PI / 2 - math.acos(1 / 3), abs=1e-14)
        assert gamma_shift(1.0) == pytest.approx(0.33984, abs=1e-5)

    def test_monotone(self):
        xs = np.linspace(DELTA_E, 1, 200)
        assert np.all(np.diff(gamma_shift(xs)) > 0)
        assert 0 < gamma_shift(0.9) < 0.34

    def test_outside_segment(self):
        with pytest.raises(DomainError):
            gamma_shift(0.5)

    def test_family_at_gfe_value(self):
        for x in (0.2, 0.7, 1.3):
            assert m2_of_gamma(x, PI / 2) == pytest.approx(f_gfe(math.sin(x)), abs=1e-13)

    def test_maximal_entanglement(self):
        g = math.acos(1 / 3)
        assert math.cos(g) ** 2 == pytest.approx(1 / 9)
        assert m2_of_gamma(PI / 2, g) == pytest.approx(math.log(9 / 5), abs=1e-13)

    def test_tangent_point(self):
        x = math.asin(DELTA_E)
        assert optimal_cos2_gamma(DELTA_E) == pytest.approx(0.0, abs=1e-15)
        assert m2_of_gamma(x, PI / 2) == pytest.approx(math.log(32 / 15), abs=1e-13)

    @pytest.mark.parametrize("d", np.linspace(DELTA_E + 1e-3, 1.0, 7))
    def test_numerical_optimum(self, d):
        x = math.asin(d)
        res = minimize_scalar(lambda g: -m2_of_gamma(x, g), bounds=(0, PI / 2), method="bounded",
                              options={"xatol": 1e-12})
        assert math.cos(res.x) ** 2 == pytest.approx(optimal_cos2_gamma(d), abs=1e-6)
        assert -res.fun == pytest.approx(f_ed(d), abs=1e-10)
        assert PI / 2 - res.x == pytest.approx(gamma_shift(d), abs=1e-6)

    @given(st.floats(0, PI / 2), st.floats(0, 2 * PI))
    def test_family_matches_states(self, x, g):
        s = angles_to_state(WhartonAngles(PI / 4, PI / 2, PI / 4, PI / 2, x, g))
        assert m2_direct(s) == pytest.approx(m2_of_gamma(x, g), abs=1e-10)
