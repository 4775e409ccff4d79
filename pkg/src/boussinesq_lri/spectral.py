"""Fourier pseudospectral substrate on a periodic interval (-L, L).

Coefficients are stored in FFT order (k = 0, 1, ..., M/2-1, -M/2, ..., -1)
and normalised as

    coeff_k = (1/M) * sum_j f(x_j) exp(-i kappa_k x_j),   kappa_k = pi k / L,

with collocation points x_j = -L + 2 L j / M.  On (-pi, pi) this is the
discrete analogue of fhat_k = (1/2pi) int f(x) exp(-ikx) dx, so norms and
inner products are plain sums over coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable

import numpy as np

from .errors import GridMismatchError, ParameterError

__all__ = [
    "Grid",
    "SpectralField",
    "Multiplier",
    "bracket_c",
    "a_multiplier",
    "psi1",
    "psi2",
    "apply_multiplier",
    "product",
    "sobolev_norm",
    "inner_product",
    "identity",
    "dx2",
    "inv_dx",
    "inv_dx2",
    "bracket",
    "bracket_inv",
    "a_op",
    "free_flow",
    "exp_bracket",
    "exp_a",
    "psi1_op",
    "psi2_op",
]


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid with ``M`` points on ``(-L, L)``."""

    M: int
    L: float = np.pi

    def __post_init__(self):
        if int(self.M) != self.M or self.M < 4 or self.M % 2:
            raise ParameterError(f"M must be an even integer >= 4, got {self.M!r}")
        if not self.L > 0 or not np.isfinite(self.L):
            raise ParameterError(f"L must be positive and finite, got {self.L!r}")
        object.__setattr__(self, "M", int(self.M))
        object.__setattr__(self, "L", float(self.L))

    @cached_property
    def k(self) -> np.ndarray:
        """Integer wavenumbers in FFT order."""
        return np.fft.fftfreq(self.M, 1.0 / self.M).astype(np.int64)

    @cached_property
    def kappa(self) -> np.ndarray:
        return np.pi * self.k / self.L

    @cached_property
    def kappa2(self) -> np.ndarray:
        return self.kappa**2

    @cached_property
    def x(self) -> np.ndarray:
        return -self.L + 2.0 * self.L * np.arange(self.M) / self.M

    @cached_property
    def nyquist(self) -> int:
        """FFT-order index of the unpaired mode k = -M/2."""
        return self.M // 2

    @cached_property
    def reflect(self) -> np.ndarray:
        """Index map k -> -k in FFT order."""
        return (-np.arange(self.M)) % self.M

    @cached_property
    def _sign(self) -> np.ndarray:
        # exp(-i kappa_k x_0) with x_0 = -L
        return np.where(self.k % 2 == 0, 1.0, -1.0)

    @cached_property
    def dealias_mask(self) -> np.ndarray:
        return (np.abs(self.k) <= self.M // 3).astype(float)

    def index(self, k: int) -> int:
        """FFT-order position of integer wavenumber ``k``."""
        if not -self.M // 2 <= k < self.M // 2:
            raise ParameterError(f"wavenumber {k} not representable on M={self.M}")
        return k % self.M


class SpectralField:
    """Complex Fourier coefficient vector on a :class:`Grid`.

    Treated as an immutable value: every operation returns a new field.
    Multiplying by a numpy array of length ``M`` applies it as a Fourier
    multiplier; multiplying by a scalar scales the field.
    """

    __slots__ = ("coeffs", "grid")

    def __init__(self, coeffs, grid: Grid):
        coeffs = np.asarray(coeffs, dtype=np.complex128)
        if coeffs.shape != (grid.M,):
            raise GridMismatchError(
                f"expected {grid.M} coefficients, got shape {coeffs.shape}"
            )
        self.coeffs = coeffs
        self.grid = grid

    @classmethod
    def from_values(cls, values, grid: Grid) -> "SpectralField":
        values = np.asarray(values)
        return cls(grid._sign * np.fft.fft(values) / grid.M, grid)

    @classmethod
    def zeros(cls, grid: Grid) -> "SpectralField":
        return cls(np.zeros(grid.M, dtype=np.complex128), grid)

    @classmethod
    def constant(cls, a: complex, grid: Grid) -> "SpectralField":
        c = np.zeros(grid.M, dtype=np.complex128)
        c[0] = a
        return cls(c, grid)

    @classmethod
    def mode(cls, k: int, grid: Grid, amplitude: complex = 1.0) -> "SpectralField":
        """The plane wave ``amplitude * exp(i kappa_k x)``."""
        c = np.zeros(grid.M, dtype=np.complex128)
        c[grid.index(k)] = amplitude
        return cls(c, grid)

    def values(self) -> np.ndarray:
        """Complex point values on the collocation grid."""
        g = self.grid
        return g.M * np.fft.ifft(g._sign * self.coeffs)

    def coeff(self, k: int) -> complex:
        return complex(self.coeffs[self.grid.index(k)])

    @property
    def zero_mode(self) -> complex:
        return complex(self.coeffs[0])

    def conj(self) -> "SpectralField":
        """Complex conjugate of the underlying function: c_k -> conj(c_{-k})."""
        return SpectralField(np.conj(self.coeffs[self.grid.reflect]), self.grid)

    def is_real(self, tol: float = 1e-12) -> bool:
        """True if the field is real-valued up to ``tol`` (relative to its size)."""
        c = self.coeffs
        scale = max(1.0, float(np.max(np.abs(c))) if c.size else 0.0)
        defect = np.max(np.abs(c - np.conj(c[self.grid.reflect])))
        return bool(defect <= tol * scale)

    def add_constant(self, a: complex) -> "SpectralField":
        c = self.coeffs.copy()
        c[0] += a
        return SpectralField(c, self.grid)

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.coeffs)))

    def _check(self, other: "SpectralField") -> None:
        if other.grid is not self.grid and other.grid != self.grid:
            raise GridMismatchError(f"grid mismatch: {self.grid} vs {other.grid}")

    def __add__(self, other):
        if isinstance(other, SpectralField):
            self._check(other)
            return SpectralField(self.coeffs + other.coeffs, self.grid)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, SpectralField):
            self._check(other)
            return SpectralField(self.coeffs - other.coeffs, self.grid)
        return NotImplemented

    def __neg__(self):
        return SpectralField(-self.coeffs, self.grid)

    def __mul__(self, other):
        if isinstance(other, SpectralField):
            return NotImplemented
        return SpectralField(self.coeffs * other, self.grid)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return SpectralField(self.coeffs / other, self.grid)

    def __repr__(self):
        return f"SpectralField(M={self.grid.M}, L={self.grid.L:g})"


def _check_c(c: float) -> None:
    if not c > 0:
        raise ParameterError(f"shift constant c must be positive, got {c!r}")


def bracket_c(kappa, c: float):
    """Symbol of <d_x^2>_c = sqrt(d_x^4 - d_x^2 + c), i.e. sqrt(c + kappa^2 + kappa^4)."""
    _check_c(c)
    kappa2 = np.square(kappa)
    return np.sqrt(c + kappa2 + kappa2**2)


def a_multiplier(kappa, c: float):
    """Symbol of A = d_x^2 + <d_x^2>_c, i.e. sqrt(c + kappa^2 + kappa^4) - kappa^2."""
    _check_c(c)
    kappa2 = np.square(kappa)
    # rationalised to avoid cancellation at large |kappa|
    return (c + kappa2) / (np.sqrt(c + kappa2 + kappa2**2) + kappa2)


_SERIES_RADIUS = 1.0
_SERIES_TERMS = 22


def _series(z, shift):
    # sum_{n>=0} z^n / (n! (n + shift))
    out = np.zeros_like(z)
    term = np.ones_like(z)
    for n in range(_SERIES_TERMS):
        out = out + term / (n + shift)
        term = term * z / (n + 1)
    return out


def psi1(z):
    """psi_1(z) = int_0^1 exp(z s) ds = (e^z - 1)/z."""
    z = np.asarray(z, dtype=np.complex128)
    small = np.abs(z) < _SERIES_RADIUS
    zs = np.where(small, 1.0, z)
    out = np.where(small, _series(np.where(small, z, 0.0), 1), np.expm1(zs) / zs)
    return out[()] if out.ndim == 0 else out


def psi2(z):
    """psi_2(z) = int_0^1 s exp(z s) ds = (e^z (z - 1) + 1)/z^2."""
    z = np.asarray(z, dtype=np.complex128)
    small = np.abs(z) < _SERIES_RADIUS
    zs = np.where(small, 1.0, z)
    out = np.where(
        small, _series(np.where(small, z, 0.0), 2), (np.exp(zs) * (zs - 1) + 1) / zs**2
    )
    return out[()] if out.ndim == 0 else out


class Multiplier:
    """A named Fourier multiplier ``k -> m(k)``.

    ``symbol`` maps a :class:`Grid` to an array of factors in FFT order.
    Multipliers compose with ``*``; evaluated symbols are cached per grid.
    """

    def __init__(self, name: str, symbol: Callable[[Grid], np.ndarray]):
        self.name = name
        self._symbol = symbol
        self._cache: dict[Grid, np.ndarray] = {}

    def __call__(self, grid: Grid) -> np.ndarray:
        try:
            return self._cache[grid]
        except KeyError:
            arr = np.asarray(self._symbol(grid), dtype=np.complex128)
            arr = np.broadcast_to(arr, (grid.M,)).copy()
            arr.flags.writeable = False
            self._cache[grid] = arr
            return arr

    def __mul__(self, other: "Multiplier") -> "Multiplier":
        if not isinstance(other, Multiplier):
            return NotImplemented
        return Multiplier(f"{self.name}*{other.name}", lambda g: self(g) * other(g))

    def __repr__(self):
        return f"Multiplier({self.name})"


def identity() -> Multiplier:
    return Multiplier("1", lambda g: np.ones(g.M))


def dx2() -> Multiplier:
    return Multiplier("dx^2", lambda g: -g.kappa2)


def _inv_dx(g: Grid) -> np.ndarray:
    out = np.zeros(g.M, dtype=np.complex128)
    nz = g.k != 0
    out[nz] = 1.0 / (1j * g.kappa[nz])
    # odd symbol: the unpaired Nyquist mode would break realness
    out[g.nyquist] = 0.0
    return out


def _inv_dx2(g: Grid) -> np.ndarray:
    out = np.zeros(g.M)
    nz = g.k != 0
    out[nz] = -1.0 / g.kappa2[nz]
    return out


def inv_dx() -> Multiplier:
    """Regularised d_x^{-1}: (i kappa)^{-1}, zero on k = 0 and on the Nyquist mode."""
    return Multiplier("dx^-1", _inv_dx)


def inv_dx2() -> Multiplier:
    """Regularised d_x^{-2}: -kappa^{-2}, zero on k = 0."""
    return Multiplier("dx^-2", _inv_dx2)


def bracket(c: float) -> Multiplier:
    _check_c(c)
    return Multiplier(f"<dx2>_{c:g}", lambda g: bracket_c(g.kappa, c))


def bracket_inv(c: float) -> Multiplier:
    _check_c(c)
    return Multiplier(f"<dx2>_{c:g}^-1", lambda g: 1.0 / bracket_c(g.kappa, c))


def a_op(c: float) -> Multiplier:
    _check_c(c)
    return Multiplier(f"A_{c:g}", lambda g: a_multiplier(g.kappa, c))


def free_flow(t: float) -> Multiplier:
    """exp(i t d_x^2)."""
    return Multiplier(f"exp({t:g}i dx2)", lambda g: np.exp(-1j * t * g.kappa2))


def exp_bracket(c: float, t: float) -> Multiplier:
    """exp(i t <d_x^2>_c)."""
    _check_c(c)
    return Multiplier(
        f"exp({t:g}i <dx2>_{c:g})", lambda g: np.exp(1j * t * bracket_c(g.kappa, c))
    )


def exp_a(c: float, t: float) -> Multiplier:
    """exp(i t A)."""
    _check_c(c)
    return Multiplier(
        f"exp({t:g}i A_{c:g})", lambda g: np.exp(1j * t * a_multiplier(g.kappa, c))
    )


def psi1_op(t: float) -> Multiplier:
    """psi_1(i t d_x^2)."""
    return Multiplier(f"psi1({t:g}i dx2)", lambda g: psi1(-1j * t * g.kappa2))


def psi2_op(t: float) -> Multiplier:
    """psi_2(i t d_x^2)."""
    return Multiplier(f"psi2({t:g}i dx2)", lambda g: psi2(-1j * t * g.kappa2))


def apply_multiplier(f: SpectralField, m: Multiplier) -> SpectralField:
    if not f.is_finite():
        raise FloatingPointError("apply_multiplier: non-finite input coefficients")
    return SpectralField(m(f.grid) * f.coeffs, f.grid)


def product(f: SpectralField, g: SpectralField, dealias: bool = False) -> SpectralField:
    """Pointwise product, computed in value space.

    With ``dealias`` the modes ``|k| > M/3`` of both factors are dropped first.
    """
    f._check(g)
    grid = f.grid
    a, b = f.coeffs, g.coeffs
    if dealias:
        a = a * grid.dealias_mask
        b = b * grid.dealias_mask
    # the (-1)^k phase of x_0 = -L cancels in a convolution (M even)
    return SpectralField(grid.M * np.fft.fft(np.fft.ifft(a) * np.fft.ifft(b)), grid)


def sobolev_norm(f: SpectralField, m: float = 0.0) -> float:
    """(sum_k (1 + kappa_k^2)^m |coeff_k|^2)^(1/2)."""
    w = (1.0 + f.grid.kappa2) ** m
    return float(np.sqrt(np.sum(w * (f.coeffs.real**2 + f.coeffs.imag**2))))


def inner_product(f: SpectralField, g: SpectralField) -> complex:
    """(f, g) = (1/|Omega|) int f conj(g) dx, in Parseval form."""
    f._check(g)
    return complex(np.vdot(g.coeffs, f.coeffs))
