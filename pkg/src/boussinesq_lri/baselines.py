"""Classical trigonometric integrators applied to z_tt + z_xxxx - z_xx = (z^2)_xx.

Per Fourier mode the equation is the forced oscillator

    zhat'' + omega^2 zhat = g(z)hat,   omega^2 = kappa^4 + kappa^2,
    g(z)hat = -kappa^2 (z^2)hat,

and both integrators below reproduce the linear flow exactly (no filters).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import BlowUpError
from .spectral import Grid, SpectralField, product
from .state import GBState

__all__ = ["OscillatorSystem", "gautschi_step", "deuflhard_step", "linear_flow"]


def _sinc(x):
    return np.sinc(x / np.pi)


@dataclass(frozen=True)
class OscillatorSystem:
    grid: Grid
    dealias: bool = False
    _coeffs: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    @cached_property
    def omega(self) -> np.ndarray:
        k2 = self.grid.kappa2
        return np.sqrt(k2 * k2 + k2)

    def nonlinearity(self, z: SpectralField) -> np.ndarray:
        """Coefficients of (z^2)_xx for a real field z."""
        sq = product(z, z, self.dealias).coeffs
        # restore exact Hermitian symmetry lost to FFT rounding
        sq = 0.5 * (sq + np.conj(sq[self.grid.reflect]))
        return -self.grid.kappa2 * sq

    def coefficients(self, tau: float):
        """cos, sin, sinc(tau omega), sinc^2(tau omega / 2) for step ``tau``."""
        try:
            return self._coeffs[tau]
        except KeyError:
            x = tau * self.omega
            out = (np.cos(x), np.sin(x), _sinc(x), _sinc(0.5 * x) ** 2)
            self._coeffs[tau] = out
            return out


def _rotate(z, zt, omega, cos, sin, sinc, tau):
    return cos * z + tau * sinc * zt, -omega * sin * z + cos * zt


def _finish(z, zt, s: GBState, name: str) -> GBState:
    if not (np.all(np.isfinite(z)) and np.all(np.isfinite(zt))):
        raise BlowUpError(f"{name}: non-finite coefficients")
    g = s.grid
    return GBState(SpectralField(z, g), SpectralField(zt, g), s.c)


def linear_flow(s: GBState, tau: float) -> GBState:
    """Exact flow of the linearised equation (nonlinearity dropped)."""
    osc = OscillatorSystem(s.grid)
    cos, sin, sinc, _ = osc.coefficients(tau)
    z, zt = _rotate(s.z.coeffs, s.zt.coeffs, osc.omega, cos, sin, sinc, tau)
    return _finish(z, zt, s, "linear_flow")


def gautschi_step(
    s: GBState, tau: float, system: OscillatorSystem | None = None
) -> GBState:
    """Exponential (Gautschi-type) Euler step with the forcing frozen at t_n."""
    osc = system or OscillatorSystem(s.grid)
    cos, sin, sinc, sinc2h = osc.coefficients(tau)
    g = osc.nonlinearity(s.z)
    z, zt = _rotate(s.z.coeffs, s.zt.coeffs, osc.omega, cos, sin, sinc, tau)
    z = z + 0.5 * tau * tau * sinc2h * g
    zt = zt + tau * sinc * g
    return _finish(z, zt, s, "gautschi_step")


def deuflhard_step(
    s: GBState, tau: float, system: OscillatorSystem | None = None
) -> GBState:
    """Symmetric Deuflhard-type step (trapezoidal weighting of the forcing)."""
    osc = system or OscillatorSystem(s.grid)
    cos, sin, sinc, _ = osc.coefficients(tau)
    g = osc.nonlinearity(s.z)
    z, zt = _rotate(s.z.coeffs, s.zt.coeffs, osc.omega, cos, sin, sinc, tau)
    z = z + 0.5 * tau * tau * sinc * g
    z_new = SpectralField(z, s.grid)
    zt = zt + 0.5 * tau * (cos * g + osc.nonlinearity(z_new))
    return _finish(z, zt, s, "deuflhard_step")
