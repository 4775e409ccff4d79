"""Initial data, time loops and temporal convergence studies."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from .baselines import OscillatorSystem, deuflhard_step, gautschi_step
from .errors import BlowUpError, ConfigError, GridMismatchError, ParameterError
from .lri1 import SchemeParams, step_phi
from .lri2 import PsiStepper
from .spectral import Grid, SpectralField, sobolev_norm
from .state import ComplexState, GBState, from_u, to_u

__all__ = [
    "SCHEMES",
    "REFERENCES",
    "solitary_wave",
    "rough_initial",
    "run",
    "ErrorNorm",
    "error_norm",
    "fit_slope",
    "ConvergenceRecord",
    "convergence_study",
    "reference_solution",
    "wave_speed",
    "n_steps",
]

SCHEMES = ("lri1", "lri2", "gautschi", "deuflhard")
REFERENCES = ("analytic", "fine-lri2", "fine-deuflhard")


def solitary_wave(
    grid: Grid,
    t: float = 0.0,
    lam: float = 0.5,
    x0: float = 0.0,
    sign: int = 1,
    c: float = 1.0,
) -> GBState:
    """Travelling solitary wave z = -(3/2) lam^2 sech^2(lam/2 (x - v t - x0)).

    The speed is v = sign * sqrt(1 - lam^2).
    """
    if not 0 < lam <= 1:
        raise ParameterError(f"lambda must lie in (0, 1], got {lam!r}")
    if sign not in (1, -1):
        raise ParameterError(f"sign must be +1 or -1, got {sign!r}")
    v = sign * math.sqrt(1.0 - lam * lam)
    xi = 0.5 * lam * (grid.x - v * t - x0)
    sech2 = 1.0 / np.cosh(xi) ** 2
    z = -1.5 * lam**2 * sech2
    zt = -1.5 * lam**3 * v * sech2 * np.tanh(xi)  # -v * z_x
    return GBState.from_values(z, zt, grid, c)


def wave_speed(lam: float, sign: int = 1) -> float:
    return sign * math.sqrt(1.0 - lam * lam)


def _power_filter(grid: Grid, exponent: float) -> np.ndarray:
    k = np.abs(grid.k).astype(float)
    out = np.zeros(grid.M)
    nz = k > 0
    out[nz] = k[nz] ** (-exponent)
    return out


def rough_initial(
    grid: Grid,
    theta: float,
    seed: int = 0,
    c: float = 0.01,
    zt_random: bool = False,
) -> GBState:
    """Random initial data of spatial regularity about ``theta``.

    Uniform samples on [0, 1) are filtered with |k|^-theta (integer k, zero
    mean) and scaled to unit L2 norm.  ``z_t`` is zero unless ``zt_random``,
    in which case an independent draw filtered with |k|^-(theta-2) and scaled
    to unit H^-2 norm is used.
    """
    if not theta >= 0:
        raise ParameterError(f"theta must be nonnegative, got {theta!r}")
    rng = np.random.default_rng(seed)

    def draw(exponent):
        noise = SpectralField.from_values(rng.random(grid.M), grid)
        f = SpectralField.from_values(
            (noise * _power_filter(grid, exponent)).values().real, grid
        )
        return f

    z = draw(theta)
    z = z / sobolev_norm(z)
    if zt_random:
        zt = draw(theta - 2.0)
        zt = zt / sobolev_norm(zt, -2.0)
    else:
        zt = SpectralField.zeros(grid)
    return GBState(z, zt, c)


def n_steps(T: float, tau: float) -> int:
    if not T >= 0:
        raise ConfigError(f"final time must be nonnegative, got {T!r}")
    ratio = T / tau
    n = round(ratio)
    if abs(ratio - n) > 4 * np.spacing(max(ratio, 1.0)):
        raise ConfigError(f"T={T!r} is not an integer multiple of tau={tau!r}")
    return int(n)


def _stepper(scheme: str, grid: Grid, p: SchemeParams) -> Callable:
    if scheme == "lri1":
        return lambda u: step_phi(u, p)
    if scheme == "lri2":
        return PsiStepper(grid, p)
    osc = OscillatorSystem(grid, p.dealias)
    if scheme == "gautschi":
        return lambda s: gautschi_step(s, p.tau, osc)
    if scheme == "deuflhard":
        return lambda s: deuflhard_step(s, p.tau, osc)
    raise ConfigError(f"unknown scheme {scheme!r}; expected one of {SCHEMES}")


def run(
    scheme: str,
    state0: GBState,
    p: SchemeParams,
    T: float,
    checkpoint: Callable[[int, GBState], None] | None = None,
    every: int = 0,
) -> GBState:
    """Integrate ``state0`` to time ``T`` with ``T / p.tau`` steps of ``scheme``.

    LRI schemes evolve u = to_u(state0) with shift ``p.c`` and reconstruct
    (z, z_t) at the end; baselines step (z, z_t) directly.  ``checkpoint``
    is called with (step, state) every ``every`` steps and at the end.
    """
    n = n_steps(T, p.tau)
    step = _stepper(scheme, state0.grid, p)
    lri = scheme in ("lri1", "lri2")
    y = to_u(state0.with_c(p.c)).u if lri else state0.with_c(p.c)

    def observe(y, j):
        return from_u(ComplexState(y, p.c, j * p.tau)) if lri else y

    # overflow on the way to a blow-up is reported by BlowUpError instead
    with np.errstate(over="ignore", invalid="ignore"):
        for j in range(1, n + 1):
            try:
                y = step(y)
            except BlowUpError as exc:
                raise BlowUpError(f"{scheme} blew up", step=j) from exc
            if checkpoint is not None and every and j % every == 0 and j != n:
                checkpoint(j, observe(y, j))
    final = observe(y, n) if n else state0.with_c(p.c)
    if checkpoint is not None:
        checkpoint(n, final)
    return final


class ErrorNorm(NamedTuple):
    z: float
    zt: float

    @property
    def combined(self) -> float:
        return self.z + self.zt


def error_norm(a: GBState, b: GBState, r: float = 1.0) -> ErrorNorm:
    """(||z_a - z_b||_r, ||zt_a - zt_b||_{r-2})."""
    if a.grid != b.grid:
        raise GridMismatchError("states live on different grids")
    return ErrorNorm(sobolev_norm(a.z - b.z, r), sobolev_norm(a.zt - b.zt, r - 2))


def fit_slope(taus, errors) -> tuple[float, float, float]:
    """Least-squares fit of log(error) against log(tau): (slope, intercept, R^2)."""
    x, y = np.log(np.asarray(taus, float)), np.log(np.asarray(errors, float))
    if x.size < 2:
        return math.nan, math.nan, math.nan
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return float(slope), float(intercept), r2


COMPONENTS = ("z", "zt", "combined")


@dataclass
class ConvergenceRecord:
    """Errors of one scheme over a sequence of step sizes.

    Rows whose run blew up are kept with ``diverged`` set and NaN errors;
    ``used`` marks the rows entering the slope fit.
    """

    scheme: str
    tau_values: np.ndarray
    errors_z: np.ndarray
    errors_zt: np.ndarray
    diverged: np.ndarray
    used: np.ndarray
    fitted_slope: float
    r_squared: float
    r: float
    component: str = "z"
    reference: str = "analytic"
    reference_error: float | None = None
    real_ok: bool = True
    blowup_steps: list = field(default_factory=list)

    @property
    def norm_spec(self) -> tuple[float, float]:
        return (self.r, self.r - 2)

    @property
    def combined(self) -> np.ndarray:
        return self.errors_z + self.errors_zt

    @property
    def errors(self) -> np.ndarray:
        return {"z": self.errors_z, "zt": self.errors_zt, "combined": self.combined}[
            self.component
        ]


def _realness_probe(flag: list, tol: float = 1e-8):
    def probe(_, state):
        if not state.is_real(tol):
            flag[0] = False

    return probe


def reference_solution(
    reference: str,
    state0: GBState,
    p: SchemeParams,
    T: float,
    tau_ref: float,
    r: float = 1.0,
    estimate: bool = True,
) -> tuple[GBState, float | None]:
    """Fine-step reference and, if ``estimate``, the size of its error.

    The estimate is the distance to the same integrator run with twice the
    step, in the norm of the study.  It overstates the error of a scheme of
    order one or more, which keeps the saturation cut conservative.
    """
    scheme = {"fine-lri2": "lri2", "fine-deuflhard": "deuflhard"}[reference]
    ref = run(scheme, state0, SchemeParams(p.c, tau_ref, p.dealias), T)
    if not estimate:
        return ref, None
    coarse = run(scheme, state0, SchemeParams(p.c, 2 * tau_ref, p.dealias), T)
    return ref, error_norm(coarse, ref, r)


def convergence_study(
    scheme: str,
    state0: GBState,
    p: SchemeParams,
    T: float,
    tau_list,
    reference: str = "analytic",
    exact: GBState | None = None,
    r: float = 1.0,
    component: str = "z",
    ref_factor: float = 100.0,
    estimate_reference_error: bool = True,
    reference_state: tuple[GBState, ErrorNorm | None] | None = None,
    checkpoints: int = 4,
) -> ConvergenceRecord:
    """Run ``scheme`` for every step size in ``tau_list`` and fit the order.

    ``reference`` is ``"analytic"`` (``exact`` must be the solution at T) or
    a fine-step run of LRI2 / Deuflhard at ``min(tau_list) / ref_factor``.
    A precomputed ``reference_state`` (state, error estimate) may be passed
    to share one reference between several schemes.  Rows with error below
    ten times the reference error estimate are left out of the fit.
    """
    taus = np.asarray(list(tau_list), dtype=float)
    if taus.size < 3:
        raise ConfigError("tau_list needs at least 3 entries")
    if np.any(np.diff(taus) >= 0):
        raise ConfigError("tau_list must be strictly decreasing")
    if component not in COMPONENTS:
        raise ConfigError(f"component must be one of {COMPONENTS}, got {component!r}")
    if reference not in REFERENCES:
        raise ConfigError(f"reference must be one of {REFERENCES}, got {reference!r}")

    floor = None
    if reference_state is not None:
        ref, est = reference_state
    elif reference == "analytic":
        if exact is None:
            raise ConfigError("analytic reference requires the exact final state")
        ref, est = exact, None
    else:
        ref, est = reference_solution(
            reference, state0, p, T, taus.min() / ref_factor, r, estimate_reference_error
        )
    if est is not None:
        floor = {"z": est.z, "zt": est.zt, "combined": est.combined}[component]

    ez = np.full(taus.size, np.nan)
    ezt = np.full(taus.size, np.nan)
    diverged = np.zeros(taus.size, dtype=bool)
    blowups = []
    real_ok = [True]
    for i, tau in enumerate(taus):
        n = n_steps(T, tau)
        every = max(1, n // checkpoints) if checkpoints else 0
        try:
            out = run(
                scheme,
                state0,
                SchemeParams(p.c, float(tau), p.dealias),
                T,
                checkpoint=_realness_probe(real_ok),
                every=every,
            )
        except BlowUpError as exc:
            diverged[i] = True
            blowups.append((float(tau), exc.step))
            continue
        e = error_norm(out, ref, r)
        ez[i], ezt[i] = e.z, e.zt

    record = ConvergenceRecord(
        scheme=scheme,
        tau_values=taus,
        errors_z=ez,
        errors_zt=ezt,
        diverged=diverged,
        used=np.zeros(taus.size, dtype=bool),
        fitted_slope=math.nan,
        r_squared=math.nan,
        r=r,
        component=component,
        reference=reference,
        reference_error=floor,
        real_ok=real_ok[0],
        blowup_steps=blowups,
    )
    err = record.errors
    used = ~diverged & np.isfinite(err) & (err > 0)
    if floor is not None:
        used &= err >= 10.0 * floor
    record.used = used
    if used.sum() >= 2:
        record.fitted_slope, _, record.r_squared = fit_slope(taus[used], err[used])
    return record
