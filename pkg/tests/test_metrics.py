import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polconv.fock import TruncationError, TwoModeDensityMatrix, basis, partial_trace_y
from polconv.metrics import (
    DegeneratePolarizationError,
    compute_metrics,
    extrema_cell,
    field_amplitudes,
    field_amplitudes_numeric,
    field_expectation,
    mandel_q,
    mandel_q_quad_superposition,
    negativity_4x4,
    negativity_closed_form,
    negativity_numeric,
    partial_transpose_4x4,
    schmidt_from_amplitudes,
    schmidt_number,
    wigner_coherent,
    wigner_numeric,
    wigner_quad_superposition,
    wigner_reduced_x,
    wigner_values,
    window,
)
from polconv.optics import ClosedFormPsi3, PipelineInput, bell_like_state, run_pipeline
from polconv.states import coherent, displaced_fock, quad_superposition

SQ2 = math.sqrt(2)
components = st.floats(min_value=-2, max_value=2, allow_nan=False)


def beam(xi, eta):
    return ClosedFormPsi3.from_input(PipelineInput(xi, eta))


def cf_with(xi_r, mu_x, mu_y=0.0):
    return ClosedFormPsi3(complex(mu_x), complex(mu_y), xi_r)


class TestNegativity:
    def test_closed_form_values(self):
        assert negativity_closed_form(0) == 0.5
        assert negativity_closed_form(0.5) == 0.25
        vals = [negativity_closed_form(x) for x in np.linspace(0, 50, 200)]
        assert np.all(np.diff(vals) < 0) and vals[-1] < 1e-4

    def test_bell_limit_numeric(self):
        res = run_pipeline(PipelineInput(1j, 0))
        assert abs(negativity_numeric(res.psi3.density_matrix()) - 0.5) < 1e-6

    def test_product_state_has_none(self):
        from polconv.fock import product_state

        rho = product_state(coherent(0.5, 15), coherent(-1j, 15)).density_matrix()
        assert negativity_numeric(rho) == 0

    def test_xi_one_numeric(self):
        res = run_pipeline(PipelineInput(1, 0))
        assert abs(negativity_numeric(res.psi3.density_matrix()) - 0.1) < 1e-6

    def test_unique_negative_eigenvalue_in_bell_limit(self):
        from polconv.fock import hermitian_eigenvalues, partial_transpose_x

        res = run_pipeline(PipelineInput(1j, 0))
        ev = hermitian_eigenvalues(partial_transpose_x(res.psi3.density_matrix()))
        neg = ev[ev < -1e-10]
        assert len(neg) == 1 and neg[0] == pytest.approx(-0.5, abs=1e-8)

    @pytest.mark.parametrize("xi_r", [0.0, 1.0])
    def test_4x4_spectrum(self, xi_r):
        ev = negativity_4x4(xi_r)
        n = 1 + 4 * xi_r ** 2
        root = math.sqrt(1 - n ** -2)
        expected = sorted([-1 / (2 * n), 1 / (2 * n), 0.5 - 0.5 * root, 0.5 + 0.5 * root])
        np.testing.assert_allclose(ev, expected, atol=1e-12)

    def test_4x4_xi_one_decimals(self):
        np.testing.assert_allclose(negativity_4x4(1.0), [-0.1, 0.0101020514, 0.1, 0.9898979486], atol=1e-9)

    @settings(max_examples=40, deadline=None)
    @given(st.floats(min_value=-20, max_value=20, allow_nan=False))
    def test_4x4_unit_trace(self, xi_r):
        assert abs(negativity_4x4(xi_r).sum() - 1) < 1e-12
        assert np.trace(partial_transpose_4x4(xi_r)) == pytest.approx(1)


class TestSchmidt:
    def test_circular_polarization_maximal(self):
        rep = schmidt_number(cf_with(0, 1, 1j))
        assert rep.k == pytest.approx(2, abs=1e-9)

    def test_proportional_linear_is_separable(self):
        for k in (-2.0, 0.5, 3.0):
            assert schmidt_number(cf_with(0, 1 + 0.5j, k * (1 + 0.5j))).k == pytest.approx(1, abs=1e-9)

    @pytest.mark.parametrize("xi", [0.3, 1.0, 2.0])
    def test_conjugate_family_with_offset(self, xi):
        # eta = i eta_I gives mu_y = -mu_x^*; eta_I fixed so Re <a_x> = Im <a_x>
        eta_i = xi + 2 * xi / (1 + 4 * xi ** 2)
        cf = beam(xi, 1j * eta_i)
        assert cf.r != 0
        assert cf.mu_y == pytest.approx(-cf.mu_x.conjugate())
        assert schmidt_number(cf).k == pytest.approx(2, abs=1e-9)

    def test_zero_intensity(self):
        with pytest.raises(DegeneratePolarizationError):
            schmidt_number(beam(0, 0))

    @settings(max_examples=200, deadline=None)
    @given(components, components, components, components)
    def test_routes_agree_and_bounded(self, a, b, c, d):
        try:
            rep = schmidt_number(beam(complex(a, b), complex(c, d)))
        except DegeneratePolarizationError:
            return
        assert abs(rep.k_closed - rep.k_eigen) < 1e-9
        assert 1 - 1e-12 <= rep.k <= 2 + 1e-12

    def test_polarization_matrix_normalised(self):
        rep = schmidt_from_amplitudes(1 + 2j, -0.5 + 0.1j)
        assert np.trace(rep.polarization_matrix) == pytest.approx(1)


class TestField:
    def test_carrier_peak(self):
        cf = cf_with(0, 0.8 * np.exp(0.4j), 0.3)
        ex, _ = field_expectation(cf, 0.4)
        assert ex == pytest.approx(1.6)

    def test_large_equal_beams_leave_x_only(self):
        cf = beam(1e4, 1e4)
        assert cf.mu_y == 0
        assert cf.r < 1e-4
        assert all(abs(field_expectation(cf, p)[1]) < 1e-3 for p in np.linspace(0, 2 * np.pi, 9))

    def test_rows_of_coefficient_matrix(self):
        cf = beam(0.7 - 0.4j, 1.2 + 0.9j)
        c = schmidt_number(cf).coefficients
        for p in np.linspace(0, 2 * np.pi, 13):
            ex, ey = field_expectation(cf, p)
            assert ex == pytest.approx(2 * (c[0, 0] * math.cos(p) + c[0, 1] * math.sin(p)), abs=1e-12)
            assert ey == pytest.approx(2 * (c[1, 0] * math.cos(p) + c[1, 1] * math.sin(p)), abs=1e-12)

    @pytest.mark.parametrize("xi,eta", [(1, 1 + 1j), (-0.5, 0.2j), (0.3 + 1j, -1)])
    def test_numeric_amplitudes(self, xi, eta):
        res = run_pipeline(PipelineInput(xi, eta))
        num = field_amplitudes_numeric(res.psi3)
        ref = field_amplitudes(res.closed_form)
        assert max(abs(a - b) for a, b in zip(num, ref)) < 1e-9


class TestMandelQ:
    def test_fock_one(self):
        s, _ = quad_superposition(0)
        assert abs(mandel_q(s)) < 1e-10

    @pytest.mark.parametrize("alpha", [0.5, 1j, 2 - 1j])
    def test_coherent(self, alpha):
        assert mandel_q(coherent(alpha)) == pytest.approx(1, abs=1e-8)

    def test_phase_dependence(self):
        assert mandel_q(quad_superposition(2, 60)[0]) < 1
        assert mandel_q(quad_superposition(1.5j, 60)[0]) > 1

    @pytest.mark.parametrize("alpha,expected", [(1, 0.7), (1j, 1.5)])
    def test_closed_values(self, alpha, expected):
        assert mandel_q_quad_superposition(alpha) == pytest.approx(expected, abs=1e-12)

    def test_vacuum_undefined(self):
        with pytest.raises(ValueError):
            mandel_q(coherent(0))

    def test_density_matrix_input(self):
        s = coherent(1.2)
        assert mandel_q(s.density_matrix()) == pytest.approx(mandel_q(s))


class TestWigner:
    def test_vacuum_and_photon_at_origin(self):
        assert wigner_values(basis(10, 0), 0) == pytest.approx(2 / math.pi, abs=1e-12)
        assert wigner_values(basis(10, 1), 0) == pytest.approx(-2 / math.pi, abs=1e-12)

    def test_coherent_gaussian(self):
        s = coherent(1)
        xs, ys = window(1, 2.5, 21)
        grid = wigner_numeric(s, xs, ys)
        assert np.abs(grid.values - wigner_coherent(1, grid.points)).max() < 1e-6
        assert grid.within_bound()

    def test_closed_form_pointwise(self):
        assert wigner_quad_superposition(1j, 1j) == pytest.approx(-2 / math.pi)
        assert abs(wigner_quad_superposition(1, 12 + 3j)) < 1e-100

    def test_quad_superposition_against_numeric(self):
        alpha = 0.6 - 0.8j
        s, _ = quad_superposition(alpha)
        xs, ys = window(alpha, 2.5, 15)
        grid = wigner_numeric(s, xs, ys)
        assert np.abs(grid.values - wigner_quad_superposition(alpha, grid.points)).max() < 1e-6

    def test_dfs_minimum(self):
        s = displaced_fock(1j, 1)
        assert wigner_values(s, 1j) == pytest.approx(-2 / math.pi, abs=1e-9)

    def test_integral(self):
        xs, ys = window(1, 4, 81)
        z = xs[None, :] + 1j * ys[:, None]
        w = wigner_quad_superposition(1, z)
        assert w.sum() * (xs[1] - xs[0]) * (ys[1] - ys[0]) == pytest.approx(1, abs=1e-3)

    def test_reduced_x_volcano_centre(self):
        cf = cf_with(0, 0.1, -0.4j)
        assert wigner_reduced_x(cf, 0.1) == pytest.approx(0, abs=1e-15)

    def test_reduced_x_asymmetric_crest(self):
        cf = cf_with(0.1 / SQ2, 0.1)
        xs, ys = window(0.1, 1.5, 121)
        z = xs[None, :] + 1j * ys[:, None]
        w = wigner_reduced_x(cf, z)
        j, i = np.unravel_index(np.argmax(w), w.shape)
        assert abs(z[j, i] - 0.1) > 0.05
        # the crest on the +x side is higher than on the -x side
        assert wigner_reduced_x(cf, 0.1 + 0.5) > wigner_reduced_x(cf, 0.1 - 0.5)

    @pytest.mark.parametrize("xi,eta", [(0.5, 1j), (-1 + 0.3j, 0.2), (1j, 1)])
    def test_reduced_x_against_numeric(self, xi, eta):
        res = run_pipeline(PipelineInput(xi, eta))
        rho_x = partial_trace_y(res.psi3.density_matrix())
        xs, ys = window(res.closed_form.mu_x, 2.5, 13)
        grid = wigner_numeric(rho_x, xs, ys)
        assert np.abs(grid.values - wigner_reduced_x(res.closed_form, grid.points)).max() < 1e-6

    def test_partial_trace_of_bell_limit(self):
        cf = beam(1j, 0.4)
        dim = 20
        rho_x = partial_trace_y(TwoModeDensityMatrix(bell_like_state(cf, dim).density_matrix().matrix, dim, dim))
        d = displaced_fock(cf.mu_x, 1, dim).coeffs
        c = coherent(cf.mu_x, dim).coeffs
        expected = (np.outer(d, d.conj()) + np.outer(c, c.conj())) / 2
        assert np.linalg.norm(rho_x - expected) < 1e-8

    def test_unsafe_state(self):
        with pytest.raises(TruncationError):
            wigner_values(np.ones(6) / math.sqrt(6), 0)


class TestExtrema:
    def test_bell_circular(self):
        assert extrema_cell(PipelineInput(1j, 1)).cell == ("max", "max")

    def test_bell_linear(self):
        assert extrema_cell(PipelineInput(2j, 4j)).cell == ("max", "min")

    def test_asymptotic_circular(self):
        rec = extrema_cell(PipelineInput(10, 10j))
        assert rec.cell == ("min", "max")
        assert "xi_R -> inf, eta = +i xi" in rec.conditions

    def test_generic_point_has_no_cell(self):
        assert extrema_cell(PipelineInput(0.7, 0.3 + 0.2j)).cell == (None, None)


class TestReport:
    def test_report_deltas(self):
        rep = compute_metrics(PipelineInput(1, 1 + 1j))
        assert rep.negativity_closed == pytest.approx(0.1)
        assert rep.negativity_delta < 1e-6
        assert rep.mandel_q_delta < 1e-8
        assert rep.field_delta < 1e-9
        assert rep.psi3_fidelity > 1 - 1e-10
        assert rep.schmidt.k_delta < 1e-9

    def test_zero_intensity_warning(self):
        rep = compute_metrics(PipelineInput(0, 0))
        assert rep.schmidt is None
        assert any("zero-intensity" in w for w in rep.warnings)
        assert rep.negativity_numeric == pytest.approx(0.5, abs=1e-12)

    def test_closed_only(self):
        rep = compute_metrics(PipelineInput(0.5, 0), numeric=False)
        assert rep.negativity_numeric is None and rep.negativity_delta is None


class TestDiagonalSymmetry:
    """Reflection in xi_R = eta_I on the eta_R = 1, xi_I = -1 slice.

    Without the horizontal offset r the Schmidt number is exactly symmetric;
    the offset breaks it, and the residual fades as the amplitudes grow.
    """

    @staticmethod
    def k(xr, ei, with_offset=True):
        cf = beam(complex(xr, -1), complex(1, ei))
        if not with_offset:
            return schmidt_from_amplitudes(cf.mu_x, cf.mu_y).k
        return schmidt_number(cf).k

    def test_exact_without_offset(self):
        g = np.linspace(-2, 2, 9)
        res = max(abs(self.k(a, b, False) - self.k(b, a, False)) for a in g for b in g)
        assert res < 1e-12

    def test_residual_decays_with_scale(self):
        res = [abs(self.k(s, 0.5 * s) - self.k(0.5 * s, s)) for s in (1, 2, 5, 10, 20)]
        assert all(a > b for a, b in zip(res, res[1:]))
        assert res[-1] < 1e-2
