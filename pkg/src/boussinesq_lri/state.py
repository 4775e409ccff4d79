"""Physical state (z, z_t) and the complex variable u = z - i <d_x^2>_c^{-1} z_t."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import GridMismatchError, ParameterError, ValidationError
from .spectral import SpectralField, bracket_c

__all__ = ["GBState", "ComplexState", "to_u", "from_u"]

REAL_TOL = 1e-10


@dataclass(frozen=True)
class GBState:
    """Real displacement ``z`` and velocity ``zt`` on a common grid."""

    z: SpectralField
    zt: SpectralField
    c: float = 1.0

    def __post_init__(self):
        if not self.c > 0:
            raise ParameterError(f"c must be positive, got {self.c!r}")
        if self.z.grid != self.zt.grid:
            raise GridMismatchError("z and zt live on different grids")
        for name in ("z", "zt"):
            if not getattr(self, name).is_real(REAL_TOL):
                raise ValidationError(f"{name} is not real-valued")

    @property
    def grid(self):
        return self.z.grid

    @classmethod
    def from_values(cls, z, zt, grid, c: float = 1.0) -> "GBState":
        return cls(
            SpectralField.from_values(z, grid), SpectralField.from_values(zt, grid), c
        )

    def with_c(self, c: float) -> "GBState":
        return GBState(self.z, self.zt, c)

    def is_real(self, tol: float = 1e-8) -> bool:
        return self.z.is_real(tol) and self.zt.is_real(tol)


@dataclass(frozen=True)
class ComplexState:
    u: SpectralField
    c: float = 1.0
    t: float = 0.0


def to_u(s: GBState) -> ComplexState:
    """u = z - i <d_x^2>_c^{-1} z_t."""
    b = bracket_c(s.grid.kappa, s.c)
    return ComplexState(s.z - s.zt * (1j / b), s.c)


def from_u(cs: ComplexState) -> GBState:
    """z = (u + conj u)/2,  z_t = (i/2) <d_x^2>_c (u - conj u)."""
    u, ubar = cs.u, cs.u.conj()
    b = bracket_c(u.grid.kappa, cs.c)
    return GBState((u + ubar) * 0.5, (u - ubar) * (0.5j * b), cs.c)
