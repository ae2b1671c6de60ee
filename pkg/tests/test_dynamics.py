import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.linalg import expm

from avgdyn import (
    EffectiveGenerator,
    FourierOperator,
    HarmonicHamiltonian,
    TimeGrid,
    propagate_effective,
    propagate_exact,
)
from util import random_density, random_harmonic, random_hermitian


def ac_stark_fourier(omega_rabi=0.3, delta=1.0):
    h = np.zeros((2, 2), dtype=complex)
    h[1, 0] = omega_rabi / 2
    return HarmonicHamiltonian(np.zeros((2, 2)), ((h, delta),)).as_fourier()


PLUS = np.array([[0.5, 0.5], [0.5, 0.5]], dtype=complex)


class TestTimeGrid:
    def test_validation(self):
        with pytest.raises(ValueError, match="t_max"):
            TimeGrid(1.0, 1.0, 0.1)
        with pytest.raises(ValueError, match="dt"):
            TimeGrid(0.0, 1.0, 0.0)
        with pytest.raises(ValueError, match="steps"):
            TimeGrid(0.0, 1e9, 1e-2)

    def test_times_span_grid(self):
        grid = TimeGrid(0.5, 2.5, 0.25)
        ts = grid.times()
        assert ts[0] == 0.5 and ts[-1] == pytest.approx(2.5)
        assert len(ts) == grid.n_steps + 1


class TestPropagateExact:
    def test_zero_hamiltonian_is_constant(self):
        rng = np.random.default_rng(0)
        rho0 = random_density(rng, 2)
        traj = propagate_exact(FourierOperator.zero(2), rho0, TimeGrid(0, 5, 0.1))
        assert_allclose(traj.states[-1], rho0, atol=1e-15)

    def test_diagonal_hamiltonian_phase(self):
        e1, e2 = 0.7, -0.4
        h = FourierOperator.constant(np.diag([e1, e2]))
        rng = np.random.default_rng(1)
        rho0 = random_density(rng, 2)
        grid = TimeGrid(0, 20, 0.01)
        traj = propagate_exact(h, rho0, grid)
        want = rho0[0, 1] * np.exp(-1j * (e1 - e2) * traj.times)
        assert_allclose(traj.entry(0, 1), want, atol=1e-9)

    def test_ac_stark_against_rotating_frame_exponential(self):
        omega_rabi, delta = 0.3, 1.0
        grid = TimeGrid(0.0, 50.0, 0.01)
        traj = propagate_exact(ac_stark_fourier(omega_rabi, delta), PLUS, grid)
        number_op = np.diag([0.0, 1.0])
        x_block = np.array([[0.0, 1.0], [1.0, 0.0]])
        h_rot = omega_rabi / 2 * x_block - delta * number_op
        for idx in (1000, 3333, 5000):
            t = traj.times[idx]
            v = expm(1j * delta * t * number_op)
            u = expm(-1j * h_rot * t)
            want = v.conj().T @ (u @ PLUS @ u.conj().T) @ v
            assert_allclose(traj.states[idx], want, atol=1e-8)

    def test_purity_conserved(self):
        rng = np.random.default_rng(2)
        ham = random_harmonic(rng, 2, 2, strength=0.1)
        w_max = max(ham.frequencies())
        rho0 = random_density(rng, 2)
        traj = propagate_exact(ham.as_fourier(), rho0, TimeGrid(0, 100, 0.025 / w_max))
        purity = traj.purity()
        assert np.abs(purity - purity[0]).max() < 1e-8

    def test_trace_stays_normalized(self):
        rng = np.random.default_rng(3)
        ham = random_harmonic(rng, 3, 2, strength=0.2)
        rho0 = random_density(rng, 3)
        traj = propagate_exact(ham.as_fourier(), rho0, TimeGrid(0, 50, 0.02))
        traces = np.einsum("tii->t", traj.states)
        assert np.abs(traces - 1.0).max() < 1e-12

    def test_invalid_initial_state_rejected(self):
        with pytest.raises(ValueError, match="density"):
            propagate_exact(FourierOperator.zero(2),
                            np.array([[0.5, 0.6], [0.6, 0.5]]),
                            TimeGrid(0, 1, 0.1))

    def test_non_hermitian_hamiltonian_rejected(self):
        h = FourierOperator.constant(np.array([[0.0, 1.0], [0.0, 0.0]]))
        with pytest.raises(ValueError, match="Hermitian"):
            propagate_exact(h, np.eye(2, dtype=complex) / 2, TimeGrid(0, 1, 0.1))

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="dim"):
            propagate_exact(FourierOperator.zero(3), PLUS, TimeGrid(0, 1, 0.1))


class TestPropagateEffective:
    def test_zero_generator_is_constant(self):
        rng = np.random.default_rng(4)
        rho0 = random_density(rng, 2)
        gen = EffectiveGenerator(HarmonicHamiltonian(np.zeros((2, 2))))
        traj = propagate_effective(gen, rho0, TimeGrid(0, 5, 0.05))
        assert_allclose(traj.states[-1], rho0, atol=1e-15)

    def test_ac_stark_coherence_frequency(self):
        from avgdyn import dominant_frequency
        h = np.zeros((2, 2), dtype=complex)
        h[1, 0] = 0.15
        gen = EffectiveGenerator(HarmonicHamiltonian(np.zeros((2, 2)), ((h, 1.0),)))
        traj = propagate_effective(gen, PLUS, TimeGrid(0, 2000, 0.05))
        freq = dominant_frequency(traj.entry(0, 1).real, 0.05)
        assert abs(freq - 0.045) < 2 * np.pi / 2000

    def test_trajectory_diagnostics_shapes(self):
        rng = np.random.default_rng(5)
        ham = random_harmonic(rng, 3, 2, strength=0.2)
        rho0 = random_density(rng, 3)
        grid = TimeGrid(0, 10, 0.05)
        traj = propagate_effective(EffectiveGenerator(ham), rho0, grid)
        n = grid.n_steps + 1
        assert traj.states.shape == (n, 3, 3)
        assert traj.purity().shape == (n,)
        assert traj.min_eigenvalues().shape == (n,)
        assert traj.min_eigenvalues().min() > -1e-9

    def test_matches_exact_for_commuting_static_hamiltonian(self):
        # with no drive the averaged equation is the exact one
        rng = np.random.default_rng(6)
        h0 = random_hermitian(rng, 2, 0.3)
        rho0 = random_density(rng, 2)
        grid = TimeGrid(0, 20, 0.01)
        exact = propagate_exact(FourierOperator.constant(h0), rho0, grid)
        eff = propagate_effective(
            EffectiveGenerator(HarmonicHamiltonian(h0)), rho0, grid
        )
        assert_allclose(eff.states[-1], exact.states[-1], atol=1e-12)
