import math

import numpy as np
import pytest

from polconv.fock import TruncationError, basis, partial_trace_y
from polconv.homodyne import (
    analytic_moments,
    hermite_functions,
    quadrature_marginal,
    radon_projection,
    sample,
    validate_moments,
)
from polconv.optics import PipelineInput, run_pipeline
from polconv.states import coherent, quad_superposition


def gaussian(x, mean, var):
    return np.exp(-((x - mean) ** 2) / (2 * var)) / math.sqrt(2 * math.pi * var)


def reduced_x(xi, eta):
    res = run_pipeline(PipelineInput(xi, eta))
    return partial_trace_y(res.psi3.density_matrix()), res.closed_form


class TestMarginal:
    @pytest.mark.parametrize("theta", [0.0, 0.9, 2.5])
    def test_vacuum(self, theta):
        m = quadrature_marginal(basis(12, 0), theta)
        np.testing.assert_allclose(m.density, gaussian(m.x, 0, 0.25), atol=1e-12)

    def test_coherent_shift(self):
        m = quadrature_marginal(coherent(1.3 - 0.4j), 0.0)
        np.testing.assert_allclose(m.density, gaussian(m.x, 1.3, 0.25), rtol=0, atol=1e-7)
        assert m.normalization_defect < 1e-9

    def test_single_photon_double_hump(self):
        x = np.linspace(-3, 3, 601)
        m = quadrature_marginal(basis(10, 1), 0.3, x)
        assert m.density[300] == pytest.approx(0, abs=1e-15)
        assert m.density.max() > 0.5
        assert np.argmax(m.density[:300]) < 300

    def test_hermite_normalisation(self):
        x = np.linspace(-8, 8, 8001)
        psi = hermite_functions(6, x)
        gram = psi @ psi.T * (x[1] - x[0])
        np.testing.assert_allclose(gram, np.eye(6), atol=1e-9)

    @pytest.mark.parametrize("state", ["one", "quad"])
    def test_radon_cross_check(self, state):
        rho = basis(10, 1) if state == "one" else quad_superposition(0.6 + 0.5j)[0]
        x = np.linspace(-2, 2, 21)
        m = quadrature_marginal(rho, 0.6, x)
        assert np.abs(radon_projection(rho, 0.6, x) - m.density).max() < 1e-4

    def test_unsafe(self):
        with pytest.raises(TruncationError):
            quadrature_marginal(np.ones(5) / math.sqrt(5), 0)

    def test_reduced_x_mean_depends_on_sign(self):
        rho_p, cf_p = reduced_x(0.5, 1)
        rho_m, cf_m = reduced_x(-0.5, 1)
        mp = quadrature_marginal(rho_p, 0).mean
        mm = quadrature_marginal(rho_m, 0).mean
        assert abs(mp - mm) > 1e-3
        assert mp == pytest.approx(cf_p.mu_x.real + cf_p.r, abs=1e-8)


class TestSampling:
    def test_vacuum_mean(self):
        b = sample(quadrature_marginal(basis(10, 0), 0), seed=11, count=100_000)
        assert abs(b.samples.mean()) < 4 * 0.5 / math.sqrt(b.count)

    def test_deterministic(self):
        m = quadrature_marginal(coherent(1), 0)
        np.testing.assert_array_equal(sample(m, 5, 1000).samples, sample(m, 5, 1000).samples)
        assert not np.array_equal(sample(m, 5, 1000).samples, sample(m, 6, 1000).samples)

    def test_count_must_be_positive(self):
        with pytest.raises(ValueError):
            sample(quadrature_marginal(basis(10, 0), 0), 1, 0)


class TestValidation:
    def test_coherent_analytic(self):
        mom = analytic_moments(coherent(2).density_matrix(), 0)
        assert mom[1] == pytest.approx(2, abs=1e-9)
        assert mom[2] - mom[1] ** 2 == pytest.approx(0.25, abs=1e-9)

    def test_coherent_pass(self):
        rho = coherent(1).density_matrix()
        rep = validate_moments(sample(quadrature_marginal(rho, 0), 1234, 100_000), rho)
        assert rep.passed
        assert abs(rep.mean - 1) < 4 * 0.5 / math.sqrt(rep.count)

    def test_quad_superposition_rotated(self):
        s, _ = quad_superposition(1j)
        rho = s.density_matrix()
        rep = validate_moments(sample(quadrature_marginal(rho, math.pi / 2), 3, 100_000), rho)
        assert rep.passed

    def test_mismatched_state_fails(self):
        rho = coherent(1).density_matrix()
        wrong = coherent(1.2, rho.shape[0]).density_matrix()
        rep = validate_moments(sample(quadrature_marginal(rho, 0), 9, 100_000), wrong)
        assert not rep.passed

    def test_reduced_x_mean_shift(self):
        rho, cf = reduced_x(1, 0)
        rep = validate_moments(sample(quadrature_marginal(rho, 0), 42, 100_000), rho)
        assert rep.passed
        assert rep.analytic_mean - cf.mu_x.real == pytest.approx(cf.r, abs=1e-9)
        assert cf.r > 0
