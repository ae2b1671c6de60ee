import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.integrate import simpson

from avgdyn import AveragingFilter, FourierOperator, lowpass_average, sandwich, windowed_average
from util import random_complex


def single(coeff, nu, p=0):
    coeff = np.asarray(coeff, dtype=complex)
    return FourierOperator(coeff.shape[0], [(coeff, nu, p)])


class TestTermAlgebra:
    def test_duplicate_terms_merge(self):
        a = np.eye(2, dtype=complex)
        f = FourierOperator(2, [(a, 1.5, 0), (2 * a, 1.5, 0), (a, 1.5, 1)])
        assert len(f.terms) == 2
        assert_allclose(f.terms[0].coeff, 3 * a, atol=0)

    def test_near_equal_frequencies_merge(self):
        a = np.eye(2, dtype=complex)
        f = single(a, 2.0) + single(-a, 2.0 + 1e-13)
        assert f.terms == ()

    def test_tiny_frequencies_snap_to_zero(self):
        f = single(np.eye(2), 1e-13)
        assert f.terms[0].nu == 0.0

    def test_exact_zero_coefficients_pruned(self):
        a = np.eye(2, dtype=complex)
        f = single(a, 1.0) - single(a, 1.0)
        assert f.terms == () and f.max_abs() == 0.0

    def test_product_adds_frequencies_and_powers(self):
        rng = np.random.default_rng(0)
        a, b = random_complex(rng, 2), random_complex(rng, 2)
        f = single(a, 1.2, 1) @ single(b, -0.5, 2)
        assert len(f.terms) == 1
        coeff, nu, p = f.terms[0]
        assert nu == 0.7 and p == 3
        assert_allclose(coeff, a @ b, atol=0)

    def test_evaluate_matches_direct_sum(self):
        rng = np.random.default_rng(1)
        terms = [(random_complex(rng, 3), nu, p)
                 for nu in (-2.0, 0.0, 1.3) for p in (0, 1, 2)]
        f = FourierOperator(3, terms)
        for t in (-1.7, 0.0, 0.4, 2.9):
            direct = sum(c * t**p * np.exp(1j * nu * t) for c, nu, p in terms)
            assert_allclose(f.evaluate(t), direct, atol=1e-14)

    def test_dagger(self):
        rng = np.random.default_rng(2)
        f = single(random_complex(rng, 2), 1.1, 1) + single(random_complex(rng, 2), -0.3)
        for t in (0.2, 1.9):
            assert_allclose(f.dagger().evaluate(t), f.evaluate(t).conj().T, atol=1e-15)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="mismatch"):
            single(np.eye(2), 0.0) + single(np.eye(3), 0.0)


class TestCalculus:
    def test_derivative_of_antiderivative_is_identity(self):
        rng = np.random.default_rng(3)
        f = (single(random_complex(rng, 2), 1.7, 2)
             + single(random_complex(rng, 2), 0.0, 1)
             + single(random_complex(rng, 2), -0.9, 0))
        g = f.antiderivative().differentiate()
        for t in (-0.8, 0.3, 2.2):
            assert_allclose(g.evaluate(t), f.evaluate(t), atol=1e-13)

    def test_antiderivative_against_quadrature(self):
        rng = np.random.default_rng(4)
        f = single(random_complex(rng, 2), 1.3, 1) + single(random_complex(rng, 2), -2.1, 2)
        g = f.antiderivative()
        t0, t1 = 0.25, 1.85
        ts = np.linspace(t0, t1, 4001)
        vals = np.stack([f.evaluate(t) for t in ts])
        quad = simpson(vals, x=ts, axis=0)
        assert_allclose(g.evaluate(t1) - g.evaluate(t0), quad, atol=1e-10)

    def test_derivative_against_finite_difference(self):
        rng = np.random.default_rng(5)
        f = single(random_complex(rng, 2), 0.7, 2)
        h = 1e-6
        t = 1.4
        fd = (f.evaluate(t + h) - f.evaluate(t - h)) / (2 * h)
        assert_allclose(f.differentiate().evaluate(t), fd, atol=1e-7)


class TestLowpass:
    def test_fast_term_deleted(self):
        f = single(np.eye(2), 3.0)
        assert lowpass_average(f, AveragingFilter(1.0)).terms == ()

    def test_boundary_frequency_deleted(self):
        f = single(np.eye(2), 1.0)
        assert lowpass_average(f, AveragingFilter(1.0)).terms == ()

    def test_slow_term_unchanged(self):
        rng = np.random.default_rng(6)
        c = random_complex(rng, 2)
        f = single(c, 0.05) + single(c, 5.0)
        out = lowpass_average(f, AveragingFilter(1.0))
        assert len(out.terms) == 1
        assert out.terms[0].nu == 0.05
        assert_allclose(out.terms[0].coeff, c, atol=0)

    def test_constant_passes(self):
        f = single(np.eye(2), 0.0)
        out = lowpass_average(f, AveragingFilter(0.5))
        assert_allclose(out.evaluate(3.0), np.eye(2), atol=0)

    def test_secular_term_passes(self):
        f = single(np.eye(2), 0.0, 3)
        out = lowpass_average(f, AveragingFilter(0.5))
        assert len(out.terms) == 1 and out.terms[0].p == 3

    def test_invalid_cutoff(self):
        with pytest.raises(ValueError, match="positive"):
            AveragingFilter(0.0)


class TestWindowedAverage:
    def test_constant_exact(self):
        f = single(np.diag([1.0, 2.0]), 0.0)
        assert_allclose(windowed_average(f, 1.3, 4.0), np.diag([1.0, 2.0]), atol=1e-14)

    def test_approximates_ideal_filter_on_band_limited_input(self):
        rng = np.random.default_rng(7)
        slow, fast = random_complex(rng, 2), random_complex(rng, 2)
        nu_fast, width = 12.0, 25.0
        f = single(slow, 0.0) + single(fast, nu_fast)
        ideal = lowpass_average(f, AveragingFilter(1.0)).evaluate(2.0)
        windowed = windowed_average(f, 2.0, width)
        bound = 2 * np.abs(fast).max() / (nu_fast * width)
        assert np.abs(windowed - ideal).max() <= bound + 1e-12


class TestSandwich:
    def test_phases_add(self):
        rng = np.random.default_rng(8)
        a, b = random_complex(rng, 2), random_complex(rng, 2)
        s = sandwich(single(a, 1.0, 1), single(b, -0.4, 2))
        assert len(s.terms) == 1
        assert s.terms[0].nu == 0.6 and s.terms[0].p == 3

    def test_apply_matches_direct(self):
        from avgdyn import unvectorize, vectorize
        rng = np.random.default_rng(9)
        left = single(random_complex(rng, 3), 0.8) + single(random_complex(rng, 3), 0.0, 1)
        right = single(random_complex(rng, 3), -1.1)
        rho = random_complex(rng, 3)
        s = sandwich(left, right)
        for t in (0.0, 0.9, 4.2):
            got = unvectorize(s.evaluate(t) @ vectorize(rho))
            want = left.evaluate(t) @ rho @ right.evaluate(t)
            assert_allclose(got, want, atol=1e-13)
