"""First-order low-regularity exponential-type integrator.

The nonlinear Duhamel integrals I1 and I2 are integrated exactly (closed
forms below); the remaining integral is approximated by I3.  All three are
functions of a single field f = u(t_n).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import BlowUpError, ParameterError
from .spectral import (
    SpectralField,
    a_op,
    bracket,
    bracket_inv,
    dx2,
    exp_bracket,
    free_flow,
    inv_dx,
    inv_dx2,
    product,
    psi1_op,
    psi2_op,
    sobolev_norm,
)

__all__ = ["SchemeParams", "I1", "I2", "I3", "step_phi"]

INV_DX = inv_dx()
INV_DX2 = inv_dx2()
DX2 = dx2()


@dataclass(frozen=True)
class SchemeParams:
    c: float = 1.0
    tau: float = 1e-2
    dealias: bool = False

    def __post_init__(self):
        if not self.c > 0:
            raise ParameterError(f"c must be positive, got {self.c!r}")
        if not self.tau > 0 or not np.isfinite(self.tau):
            raise ParameterError(f"tau must be positive, got {self.tau!r}")


# Multipliers depending on tau (and c) are built once per value and then
# cache their symbol per grid.
@lru_cache(maxsize=256)
def flow(t: float):
    return free_flow(t)


@lru_cache(maxsize=256)
def psi1_flow(t: float):
    return psi1_op(t)


@lru_cache(maxsize=256)
def psi2_flow(t: float):
    return psi2_op(t)


@lru_cache(maxsize=64)
def bracket_ops(c: float):
    return bracket(c), bracket_inv(c), a_op(c)


@lru_cache(maxsize=256)
def exp_bracket_op(c: float, t: float):
    return exp_bracket(c, t)


def I1(f: SpectralField, tau: float, dealias: bool = False) -> SpectralField:
    """Exact value of int_0^tau e^{is dx2} (e^{-is dx2} f)^2 ds."""
    g = f.grid
    back, fwd = flow(-tau)(g), flow(tau)(g)
    h = f * INV_DX(g)
    hb = h * back
    out = (product(h, h, dealias) - product(hb, hb, dealias) * fwd) * 0.5j
    f0 = f.zero_mode
    return (out + f * (2 * tau * f0)).add_constant(-tau * f0 * f0)


def I2(f: SpectralField, tau: float, dealias: bool = False) -> SpectralField:
    """Exact value of int_0^tau e^{is dx2} |e^{-is dx2} f|^2 ds."""
    g = f.grid
    back, fwd = flow(-tau)(g), flow(tau)(g)
    inv = INV_DX(g)
    h = f.conj() * inv
    twisted = product(f * back, h * fwd, dealias) * (fwd * inv)
    plain = product(f, h, dealias) * inv
    f0 = f.zero_mode
    out = (plain - twisted) * 0.5j + f * (tau * np.conj(f0))
    return out.add_constant(tau * sobolev_norm(f) ** 2 - tau * abs(f0) ** 2)


def I3(f: SpectralField, tau: float, dealias: bool = False) -> SpectralField:
    """tau * psi_1(2 i tau dx2) (conj f)^2."""
    fb = f.conj()
    return product(fb, fb, dealias) * (tau * psi1_flow(2 * tau)(f.grid))


def _check_finite(out: SpectralField, name: str) -> SpectralField:
    if not out.is_finite():
        raise BlowUpError(f"{name}: non-finite coefficients")
    return out


def step_phi(u: SpectralField, p: SchemeParams) -> SpectralField:
    """One step u^n -> u^{n+1} of the first-order scheme."""
    g = u.grid
    c, tau = p.c, p.tau
    _, binv, _ = bracket_ops(c)
    prop = exp_bracket_op(c, tau)(g)
    damp = prop * binv(g) * (-0.5j * c * tau)
    # (i dx2 / 4) <dx2>_c^{-1} e^{i tau <dx2>_c} as one bounded multiplier
    fused = prop * (0.25j * DX2(g) * binv(g))
    nonlin = I1(u, tau, p.dealias) + I2(u, tau, p.dealias) * 2 + I3(u, tau, p.dealias)
    out = (
        u * prop
        + u * damp
        + u.conj() * (damp * psi1_flow(2 * tau)(g))
        - nonlin * fused
    )
    return _check_finite(out, "step_phi")
