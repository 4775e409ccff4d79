"""Command-line front end for temporal convergence studies.

Example::

    boussinesq-lri --scheme lri1 --experiment solitary --out lri1.csv

writes ``lri1.csv`` (one row per step size and a trailing ``# slope=``
comment) and ``lri1.json`` (the resolved configuration and the fit).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from .errors import BlowUpError, ConfigError, ParameterError
from .experiments import (
    COMPONENTS,
    REFERENCES,
    SCHEMES,
    ConvergenceRecord,
    convergence_study,
    n_steps,
    rough_initial,
    solitary_wave,
)
from .lri1 import SchemeParams
from .spectral import Grid

__all__ = ["StudyConfig", "load_config", "run_study", "format_csv", "main"]

EXPERIMENTS = ("solitary", "rough")
EXIT_OK, EXIT_USAGE, EXIT_BLOWUP = 0, 1, 2

DEFAULT_TAUS = tuple(0.1 * 2.0**-j for j in range(7))
# experiment-dependent defaults; everything else is shared
EXPERIMENT_DEFAULTS = {
    "solitary": {"L": 40.0, "c": 1.0, "reference": "analytic"},
    "rough": {"L": math.pi, "c": 0.01, "reference": "fine-lri2"},
}


@dataclass
class StudyConfig:
    """One convergence study.  ``None`` fields take experiment defaults."""

    scheme: str = "lri1"
    experiment: str = "solitary"
    M: int = 512
    L: float | None = None
    T: float = 2.0
    c: float | None = None
    tau: list = field(default_factory=lambda: list(DEFAULT_TAUS))
    lam: float = 0.5
    x0: float = 0.0
    theta: float = 2.0
    seed: int = 0
    r: float = 1.0
    dealias: bool = False
    reference: str | None = None
    out: str | None = None
    component: str = "z"
    zt_random: bool = False
    ref_factor: float = 100.0

    # JSON and CLI spell ``lam`` as ``lambda``
    @staticmethod
    def _external(name: str) -> str:
        return "lambda" if name == "lam" else name

    def to_dict(self) -> dict:
        return {self._external(k): v for k, v in asdict(self).items()}

    @classmethod
    def from_dict(cls, data: dict) -> "StudyConfig":
        names = {cls._external(f.name): f.name for f in fields(cls)}
        unknown = sorted(set(data) - set(names))
        if unknown:
            raise ConfigError(f"unknown config field(s): {', '.join(unknown)}")
        return cls(**{names[k]: v for k, v in data.items()})

    def resolved(self) -> "StudyConfig":
        """Copy with experiment defaults filled in and every field validated."""
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(
                f"experiment: expected one of {EXPERIMENTS}, got {self.experiment!r}"
            )
        data = asdict(self)
        for key, value in EXPERIMENT_DEFAULTS[self.experiment].items():
            if data[key] is None:
                data[key] = value
        cfg = StudyConfig(**data)
        cfg._validate()
        return cfg

    def _validate(self):
        def number(name, cast=float):
            value = getattr(self, name)
            if isinstance(value, bool):
                raise ConfigError(f"{self._external(name)}: expected a number, got {value!r}")
            try:
                out = cast(value)
            except (TypeError, ValueError):
                raise ConfigError(
                    f"{self._external(name)}: expected a number, got {value!r}"
                ) from None
            if cast is int and out != value:
                raise ConfigError(f"{name}: expected an integer, got {value!r}")
            if cast is float and not math.isfinite(out):
                raise ConfigError(f"{self._external(name)}: must be finite, got {value!r}")
            setattr(self, name, out)
            return out

        if self.scheme not in SCHEMES:
            raise ConfigError(f"scheme: expected one of {SCHEMES}, got {self.scheme!r}")
        if self.reference not in REFERENCES:
            raise ConfigError(
                f"reference: expected one of {REFERENCES}, got {self.reference!r}"
            )
        if self.reference == "analytic" and self.experiment != "solitary":
            raise ConfigError("reference: 'analytic' is only available for solitary")
        if self.component not in COMPONENTS:
            raise ConfigError(
                f"component: expected one of {COMPONENTS}, got {self.component!r}"
            )
        if number("M", int) < 4 or self.M % 2:
            raise ConfigError(f"M: expected an even integer >= 4, got {self.M!r}")
        if number("L") <= 0:
            raise ConfigError(f"L: must be positive, got {self.L!r}")
        if number("T") < 0:
            raise ConfigError(f"T: must be nonnegative, got {self.T!r}")
        if number("c") <= 0:
            raise ConfigError(f"c: must be positive, got {self.c!r}")
        if not 0 < number("lam") <= 1:
            raise ConfigError(f"lambda: must lie in (0, 1], got {self.lam!r}")
        number("x0")
        if number("theta") < 0:
            raise ConfigError(f"theta: must be nonnegative, got {self.theta!r}")
        if number("seed", int) < 0:
            raise ConfigError(f"seed: must be nonnegative, got {self.seed!r}")
        number("r")
        if number("ref_factor") < 1:
            raise ConfigError(f"ref_factor: must be >= 1, got {self.ref_factor!r}")
        for flag in ("dealias", "zt_random"):
            if not isinstance(getattr(self, flag), bool):
                raise ConfigError(f"{flag}: expected true or false")

        if not isinstance(self.tau, (list, tuple)):
            raise ConfigError("tau: expected a list of step sizes")
        try:
            taus = [float(t) for t in self.tau]
        except (TypeError, ValueError):
            raise ConfigError(f"tau: expected numbers, got {self.tau!r}") from None
        if len(taus) < 3:
            raise ConfigError("tau: at least 3 step sizes are required")
        if any(not (t > 0 and math.isfinite(t)) for t in taus):
            raise ConfigError("tau: step sizes must be positive and finite")
        if any(b >= a for a, b in zip(taus, taus[1:])):
            raise ConfigError("tau: step sizes must be strictly decreasing")
        for t in taus:
            try:
                n_steps(self.T, t)
            except ConfigError as exc:
                raise ConfigError(f"tau: {exc}") from None
        self.tau = taus


def load_config(path) -> StudyConfig:
    """Read a JSON config; a sidecar written by :func:`run_study` also works."""
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"config: cannot read {path}: {exc}") from None
    if isinstance(data, dict) and isinstance(data.get("config"), dict):
        data = data["config"]
    if not isinstance(data, dict):
        raise ConfigError("config: expected a JSON object")
    return StudyConfig.from_dict(data)


def _initial(cfg: StudyConfig):
    grid = Grid(cfg.M, cfg.L)
    if cfg.experiment == "solitary":
        s0 = solitary_wave(grid, 0.0, cfg.lam, cfg.x0, c=cfg.c)
        exact = solitary_wave(grid, cfg.T, cfg.lam, cfg.x0, c=cfg.c)
        return s0, exact
    return rough_initial(grid, cfg.theta, cfg.seed, cfg.c, cfg.zt_random), None


def study(cfg: StudyConfig) -> ConvergenceRecord:
    """Run the (resolved) study and return its record."""
    s0, exact = _initial(cfg)
    return convergence_study(
        cfg.scheme,
        s0,
        SchemeParams(cfg.c, cfg.tau[0], cfg.dealias),
        cfg.T,
        cfg.tau,
        reference=cfg.reference,
        exact=exact,
        r=cfg.r,
        component=cfg.component,
        ref_factor=cfg.ref_factor,
    )


def _num(x) -> str:
    return repr(float(x))


def _json_num(x):
    x = float(x)
    return x if math.isfinite(x) else None


def format_csv(rec: ConvergenceRecord) -> str:
    lines = ["tau,error_z,error_zt,combined"]
    for tau, ez, ezt, comb in zip(rec.tau_values, rec.errors_z, rec.errors_zt, rec.combined):
        lines.append(",".join(_num(v) for v in (tau, ez, ezt, comb)))
    for tau, div in zip(rec.tau_values, rec.diverged):
        if div:
            lines.append(f"# diverged tau={_num(tau)}")
    lines.append(f"# slope={_num(rec.fitted_slope)}")
    return "\n".join(lines) + "\n"


def sidecar(cfg: StudyConfig, rec: ConvergenceRecord) -> dict:
    return {
        "config": cfg.to_dict(),
        "fitted_slope": _json_num(rec.fitted_slope),
        "r_squared": _json_num(rec.r_squared),
        "norm": list(rec.norm_spec),
        "reference_error": None if rec.reference_error is None else _json_num(rec.reference_error),
        "used_in_fit": [bool(u) for u in rec.used],
        "diverged": [bool(d) for d in rec.diverged],
        "blowup_steps": [[_json_num(t), s] for t, s in rec.blowup_steps],
        "real_ok": bool(rec.real_ok),
    }


def run_study(cfg: StudyConfig, stdout=None) -> int:
    """Resolve, run and write the study; return the exit status.

    With ``cfg.out`` set the CSV goes there and the JSON sidecar next to it
    (same stem, ``.json``); otherwise the CSV is printed.
    """
    cfg = cfg.resolved()
    rec = study(cfg)
    text = format_csv(rec)
    if cfg.out:
        out = Path(cfg.out)
        out.write_text(text)
        meta = json.dumps(sidecar(cfg, rec), indent=2, sort_keys=True, allow_nan=False)
        out.with_suffix(".json").write_text(meta + "\n")
    else:
        (stdout or sys.stdout).write(text)
    return EXIT_BLOWUP if rec.diverged.all() else EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(
        prog="boussinesq-lri",
        description="Temporal convergence study for the good Boussinesq equation.",
        argument_default=argparse.SUPPRESS,
    )
    p.add_argument("--config", help="JSON config (or sidecar); flags override it")
    p.add_argument("--scheme", choices=SCHEMES)
    p.add_argument("--experiment", choices=EXPERIMENTS)
    p.add_argument("--M", type=int, help="number of grid points (even)")
    p.add_argument("--L", type=float, help="half length of the domain [-L, L)")
    p.add_argument("--T", type=float, help="final time")
    p.add_argument("--c", type=float, help="shift in <dx2>_c, positive")
    p.add_argument("--tau", type=float, action="append", help="step size (repeat)")
    p.add_argument("--lambda", dest="lam", type=float, help="solitary wave parameter")
    p.add_argument("--x0", type=float, help="solitary wave centre")
    p.add_argument("--theta", type=float, help="regularity of rough data")
    p.add_argument("--seed", type=int, help="seed of rough data")
    p.add_argument("--r", type=float, help="error norm H^r x H^(r-2)")
    p.add_argument("--dealias", action=argparse.BooleanOptionalAction)
    p.add_argument("--reference", choices=REFERENCES)
    p.add_argument("--component", choices=COMPONENTS, help="error fitted for the slope")
    p.add_argument("--zt-random", dest="zt_random", action=argparse.BooleanOptionalAction)
    p.add_argument("--ref-factor", dest="ref_factor", type=float)
    p.add_argument("--out", help="CSV path; the JSON sidecar uses the same stem")
    return p


def main(argv=None) -> int:
    args = vars(build_parser().parse_args(argv))
    try:
        path = args.pop("config", None)
        cfg = load_config(path) if path else StudyConfig()
        cfg = StudyConfig(**{**asdict(cfg), **args})
        return run_study(cfg)
    except (ConfigError, ParameterError) as exc:
        print(f"boussinesq-lri: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BlowUpError as exc:  # the reference run itself blew up
        print(f"boussinesq-lri: {exc}", file=sys.stderr)
        return EXIT_BLOWUP


if __name__ == "__main__":
    sys.exit(main())
