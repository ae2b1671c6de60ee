"""Fixed-step propagation of exact and averaged density-matrix dynamics.

Classical 4th-order Runge-Kutta with a fixed step: deterministic,
reproducible trajectories suitable for golden-file comparisons.  Exact
evolution integrates i d(rho)/dt = [H(t), rho]; averaged evolution uses
an :class:`~avgdyn.harmonic.EffectiveGenerator` right-hand side.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .fourier import FourierOperator
from .harmonic import EffectiveGenerator
from .linalg import require_density

__all__ = ["TimeGrid", "Trajectory", "propagate_exact", "propagate_effective"]

logger = logging.getLogger(__name__)

MAX_STEPS = 10_000_000
TRACE_RENORM_TOL = 1e-12


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid from t0 to t_max with step dt (at most 10^7 steps)."""

    t0: float
    t_max: float
    dt: float

    def __post_init__(self):
        if not self.t_max > self.t0:
            raise ValueError("t_max must exceed t0")
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if (self.t_max - self.t0) / self.dt > MAX_STEPS:
            raise ValueError(f"grid exceeds {MAX_STEPS} steps")

    @property
    def n_steps(self) -> int:
        n = int(np.floor((self.t_max - self.t0) / self.dt + 1e-9))
        return max(n, 1)

    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.n_steps + 1)


@dataclass(frozen=True)
class Trajectory:
    """Sampled density-matrix trajectory on a uniform grid."""

    times: np.ndarray
    states: np.ndarray  # shape (n_samples, d, d)

    @property
    def dim(self) -> int:
        return self.states.shape[1]

    def entry(self, i, j) -> np.ndarray:
        return self.states[:, i, j]

    def purity(self) -> np.ndarray:
        return np.einsum("tij,tji->t", self.states, self.states).real

    def min_eigenvalues(self) -> np.ndarray:
        sym = (self.states + self.states.conj().transpose(0, 2, 1)) / 2.0
        return np.linalg.eigvalsh(sym)[:, 0]


def _renormalize_trace(rho, t):
    tr = rho.trace()
    drift = abs(tr - 1.0)
    if drift > TRACE_RENORM_TOL:
        logger.warning("trace drifted by %.3e at t=%.6g; renormalizing", drift, t)
        rho = rho / tr
    return rho


def propagate_exact(hamiltonian: FourierOperator, rho0, grid: TimeGrid,
                    herm_tol: float = 1e-10) -> Trajectory:
    """Integrate i d(rho)/dt = [H(t), rho] with fixed-step RK4.

    H(t) is checked for Hermiticity at every grid point; the trace is
    renormalized (and logged) only if it drifts beyond 1e-12.
    """
    rho = require_density(rho0)
    d = rho.shape[0]
    if hamiltonian.dim != d:
        raise ValueError(f"Hamiltonian dim {hamiltonian.dim} != state dim {d}")
    n = grid.n_steps
    dt = grid.dt
    out = np.empty((n + 1, d, d), dtype=complex)
    out[0] = rho
    h_curr = hamiltonian.evaluate(grid.t0)
    for k in range(n):
        t = grid.t0 + k * dt
        if np.abs(h_curr - h_curr.conj().T).max() > herm_tol:
            raise ValueError(f"Hamiltonian is not Hermitian at t={t:.6g}")
        h_mid = hamiltonian.evaluate(t + 0.5 * dt)
        h_next = hamiltonian.evaluate(t + dt)
        k1 = -1j * (h_curr @ rho - rho @ h_curr)
        y = rho + (0.5 * dt) * k1
        k2 = -1j * (h_mid @ y - y @ h_mid)
        y = rho + (0.5 * dt) * k2
        k3 = -1j * (h_mid @ y - y @ h_mid)
        y = rho + dt * k3
        k4 = -1j * (h_next @ y - y @ h_next)
        rho = rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        rho = _renormalize_trace(rho, t + dt)
        out[k + 1] = rho
        h_curr = h_next
    return Trajectory(grid.times(), out)


def propagate_effective(generator: EffectiveGenerator, rho0, grid: TimeGrid,
                        positivity_tol: float = 1e-9) -> Trajectory:
    """Integrate the averaged master equation with fixed-step RK4.

    The averaged equation is not guaranteed completely positive, so the
    minimum eigenvalue is monitored along the trajectory and excursions
    below -positivity_tol are logged as warnings, never clamped.
    """
    rho = require_density(rho0)
    d = rho.shape[0]
    if generator.dim != d:
        raise ValueError(f"generator dim {generator.dim} != state dim {d}")
    rhs = generator.master_rhs
    n = grid.n_steps
    dt = grid.dt
    out = np.empty((n + 1, d, d), dtype=complex)
    out[0] = rho
    for k in range(n):
        t = grid.t0 + k * dt
        k1 = rhs(rho, t)
        k2 = rhs(rho + (0.5 * dt) * k1, t + 0.5 * dt)
        k3 = rhs(rho + (0.5 * dt) * k2, t + 0.5 * dt)
        k4 = rhs(rho + dt * k3, t + dt)
        rho = rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        rho = _renormalize_trace(rho, t + dt)
        out[k + 1] = rho
    traj = Trajectory(grid.times(), out)
    min_eig = traj.min_eigenvalues().min()
    if min_eig < -positivity_tol:
        logger.warning("averaged evolution dipped to min eigenvalue %.3e", min_eig)
    return traj
