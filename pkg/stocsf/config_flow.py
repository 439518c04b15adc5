"""Configuration for command-line runs: flags, JSON config files and initial conditions."""
import argparse
import json
import logging
import os
from dataclasses import dataclass

import numpy as np
import voluptuous as vol

from .classes.curvature_state import CurvatureState, constant_state
from .classes.curve import read_curve_csv
from .classes.flow_config import FlowConfig
from .const import (
    DOMAIN,
    CONF_BLOWUP_F_MAX,
    CONF_BLOWUP_L_MAX,
    CONF_BLOWUP_L_MIN,
    CONF_DT,
    CONF_ENSEMBLE,
    CONF_GRID,
    CONF_INITIAL,
    CONF_OUTPUT_DIR,
    CONF_REFINEMENTS,
    CONF_SCHEME,
    CONF_SEED,
    CONF_SEEDS,
    CONF_SIGMA,
    CONF_SNAPSHOT_EVERY,
    CONF_STUDY,
    CONF_T_END,
    CONF_TRANSPORT,
    CONF_TRUNC_N,
    CONF_WORKERS,
    CONF_WRITE_CURVES,
    DEFAULT_DT,
    DEFAULT_GRID,
    DEFAULT_OUTPUT_DIR,
    DEFAULT_REFINEMENTS,
    DEFAULT_SCHEME,
    DEFAULT_SEED,
    DEFAULT_SEEDS,
    DEFAULT_SIGMA,
    DEFAULT_T_END,
    DEFAULT_TRANSPORT,
    ELLIPSE_SAMPLE_POINTS,
    FLAT_BLOWUP_L_MAX,
    FLAT_BLOWUP_L_MIN,
    INTEGRATION_TITLE,
    MIN_GRID,
    OUTPUT_DIR_ENV,
    SCHEME_ALIASES,
    SCHEMES,
    TRANSPORTS,
)
from .exceptions import ConfigError, StocsfError
from .geometry import curvature_from_curve, ellipse_curve, ensure_counterclockwise, turning_number
from .utils import grid_coordinates, package_version

_LOGGER = logging.getLogger(__name__)

INITIAL_CIRCLE = "circle"
INITIAL_ELLIPSE = "ellipse"
INITIAL_FOURIER = "fourier"
INITIAL_FILE = "file"
INITIAL_FLAT = "flat"

STUDY_ORDER = "order"
STUDY_CIRCLE = "circle"
STUDIES = [STUDY_ORDER, STUDY_CIRCLE]

TURNING_TOLERANCE = 1e-6


@dataclass(frozen=True)
class InitialSpec:
    """Parsed --initial value: circle:R0, ellipse:a,b, fourier:R0,k:a,..., file:path or flat:L0."""

    kind: str
    params: tuple
    text: str

    @property
    def is_flat(self) -> bool:
        return self.kind == INITIAL_FLAT


def _positive(value: str, what: str) -> float:
    try:
        number = float(value)
    except ValueError as err:
        raise vol.Invalid(f"{what} must be a number, got {value!r}") from err
    if not number > 0:
        raise vol.Invalid(f"{what} must be positive, got {value}")
    return number


def parse_initial(value) -> InitialSpec:
    """Validate an initial-condition string."""
    if isinstance(value, InitialSpec):
        return value
    text = str(value).strip()
    kind, _, rest = text.partition(":")
    if not rest:
        raise vol.Invalid(f"expected kind:parameters, got {text!r}")
    if kind == INITIAL_CIRCLE:
        return InitialSpec(kind, (_positive(rest, "circle radius"),), text)
    if kind == INITIAL_FLAT:
        return InitialSpec(kind, (_positive(rest, "flat length"),), text)
    if kind == INITIAL_ELLIPSE:
        parts = rest.split(",")
        if len(parts) != 2:
            raise vol.Invalid(f"ellipse needs two semi-axes a,b, got {rest!r}")
        return InitialSpec(kind, tuple(_positive(part, "ellipse semi-axis") for part in parts), text)
    if kind == INITIAL_FOURIER:
        radius, *modes = rest.split(",")
        parsed = []
        for mode in modes:
            frequency, sep, amplitude = mode.partition(":")
            if not sep:
                raise vol.Invalid(f"fourier mode must be frequency:amplitude, got {mode!r}")
            try:
                parsed.append((float(frequency), float(amplitude)))
            except ValueError as err:
                raise vol.Invalid(f"fourier mode must be numeric, got {mode!r}") from err
        return InitialSpec(kind, (_positive(radius, "fourier base radius"), tuple(parsed)), text)
    if kind == INITIAL_FILE:
        return InitialSpec(kind, (rest,), text)
    raise vol.Invalid(f"unknown initial condition kind {kind!r}")


def validate_sigma(value):
    """Validate that sigma is a finite nonnegative number."""
    value = float(value)
    if not (np.isfinite(value) and value >= 0):
        raise vol.Invalid("must be nonnegative")
    return value


def validate_scheme(value):
    """Validate a scheme name, resolving the short aliases."""
    value = SCHEME_ALIASES.get(str(value), str(value))
    if value not in SCHEMES:
        raise vol.Invalid(f"must be one of {SCHEMES + list(SCHEME_ALIASES)}")
    return value


def _optional_positive(value):
    if value is None:
        return None
    value = float(value)
    if not value > 0:
        raise vol.Invalid("must be positive")
    return value


def _optional_nonnegative(value):
    if value is None:
        return None
    value = float(value)
    if not value >= 0:
        raise vol.Invalid("must be nonnegative")
    return value


def _positive_float(value):
    value = float(value)
    if not (np.isfinite(value) and value > 0):
        raise vol.Invalid("must be positive")
    return value


SETTINGS_SCHEMA = vol.Schema(
    {
        vol.Required(CONF_INITIAL): parse_initial,
        vol.Optional(CONF_SIGMA, default=DEFAULT_SIGMA): validate_sigma,
        vol.Optional(CONF_GRID, default=DEFAULT_GRID): vol.All(vol.Coerce(int), vol.Range(min=MIN_GRID)),
        vol.Optional(CONF_DT, default=DEFAULT_DT): _positive_float,
        vol.Optional(CONF_T_END, default=DEFAULT_T_END): _positive_float,
        vol.Optional(CONF_SCHEME, default=DEFAULT_SCHEME): validate_scheme,
        vol.Optional(CONF_SEED, default=DEFAULT_SEED): vol.Coerce(int),
        vol.Optional(CONF_TRUNC_N, default=None): vol.Any(None, vol.All(vol.Coerce(int), vol.Range(min=1))),
        vol.Optional(CONF_BLOWUP_F_MAX, default=None): _optional_positive,
        vol.Optional(CONF_BLOWUP_L_MIN, default=None): _optional_nonnegative,
        vol.Optional(CONF_BLOWUP_L_MAX, default=None): _optional_positive,
        vol.Optional(CONF_SNAPSHOT_EVERY, default=None): vol.Any(None, vol.All(vol.Coerce(int), vol.Range(min=1))),
        vol.Optional(CONF_OUTPUT_DIR, default=DEFAULT_OUTPUT_DIR): str,
        vol.Optional(CONF_ENSEMBLE, default=None): vol.Any(None, vol.All(vol.Coerce(int), vol.Range(min=1))),
        vol.Optional(CONF_TRANSPORT, default=DEFAULT_TRANSPORT): vol.In(TRANSPORTS),
        vol.Optional(CONF_WRITE_CURVES, default=False): bool,
        vol.Optional(CONF_WORKERS, default=None): vol.Any(None, vol.All(vol.Coerce(int), vol.Range(min=1))),
        vol.Optional(CONF_STUDY, default=None): vol.Any(None, vol.In(STUDIES)),
        vol.Optional(CONF_SEEDS, default=DEFAULT_SEEDS): vol.All(vol.Coerce(int), vol.Range(min=1)),
        vol.Optional(CONF_REFINEMENTS, default=DEFAULT_REFINEMENTS): vol.All(vol.Coerce(int), vol.Range(min=3)),
    },
    extra=vol.PREVENT_EXTRA,
)


@dataclass(frozen=True)
class RunSettings:
    """Everything a command needs: the flow config, the initial condition and run options."""

    config: FlowConfig
    initial: InitialSpec
    output_dir: str = DEFAULT_OUTPUT_DIR
    snapshot_every: int | None = None
    ensemble: int | None = None
    write_curves: bool = False
    workers: int | None = None
    study: str | None = None
    seeds: int = DEFAULT_SEEDS
    refinements: int = DEFAULT_REFINEMENTS

    @property
    def seed_list(self) -> list:
        return [self.config.seed + offset for offset in range(self.seeds)]


def _field_of(err: vol.Invalid) -> str:
    return str(err.path[0]) if err.path else ""


def settings_from_mapping(data: dict) -> RunSettings:
    """Validate merged settings and build the FlowConfig; errors name the offending field."""
    try:
        values = SETTINGS_SCHEMA(data)
    except vol.MultipleInvalid as err:
        first = err.errors[0]
        raise ConfigError(_field_of(first), first.error_message) from err
    except vol.Invalid as err:
        raise ConfigError(_field_of(err), err.error_message) from err

    l_min, l_max = values[CONF_BLOWUP_L_MIN], values[CONF_BLOWUP_L_MAX]
    if values[CONF_INITIAL].is_flat and values[CONF_TRUNC_N] is None:
        l_min = FLAT_BLOWUP_L_MIN if l_min is None else l_min
        l_max = FLAT_BLOWUP_L_MAX if l_max is None else l_max

    config = FlowConfig(
        sigma=values[CONF_SIGMA],
        N=values[CONF_GRID],
        dt=values[CONF_DT],
        t_end=values[CONF_T_END],
        scheme=values[CONF_SCHEME],
        trunc_n=values[CONF_TRUNC_N],
        blowup_f_max=values[CONF_BLOWUP_F_MAX],
        blowup_L_bounds=(l_min, l_max),
        seed=values[CONF_SEED],
        transport=values[CONF_TRANSPORT],
    )
    return RunSettings(
        config=config,
        initial=values[CONF_INITIAL],
        output_dir=values[CONF_OUTPUT_DIR],
        snapshot_every=values[CONF_SNAPSHOT_EVERY],
        ensemble=values[CONF_ENSEMBLE],
        write_curves=values[CONF_WRITE_CURVES],
        workers=values[CONF_WORKERS],
        study=values[CONF_STUDY],
        seeds=values[CONF_SEEDS],
        refinements=values[CONF_REFINEMENTS],
    )


def build_parser() -> argparse.ArgumentParser:
    """Command-line flags; every flag defaults to 'not given' so lower-precedence sources show through."""
    parser = argparse.ArgumentParser(
        prog=DOMAIN,
        description=f"{INTEGRATION_TITLE}: curvature/length simulator with length-proportional noise",
        argument_default=argparse.SUPPRESS,
    )
    parser.add_argument("--config", help="JSON config file whose keys mirror the flags")
    parser.add_argument("--initial", help="circle:R0 | ellipse:a,b | fourier:R0,k:a,... | file:path.csv | flat:L0")
    parser.add_argument("--sigma", help="noise intensity (>= 0)")
    parser.add_argument("--grid", help="number of curvature samples N")
    parser.add_argument("--dt", help="time step")
    parser.add_argument("--t-end", help="final time")
    parser.add_argument("--scheme", help=f"one of {', '.join(SCHEMES)} (aliases: em, heun)")
    parser.add_argument("--seed", help="Brownian path seed")
    parser.add_argument("--trunc-n", help="truncation level n")
    parser.add_argument("--blowup-f-max", help="stop when sup|f| exceeds this")
    parser.add_argument("--blowup-l-min", help="stop when L falls to this")
    parser.add_argument("--blowup-l-max", help="stop when L reaches this")
    parser.add_argument("--snapshot-every", help="steps between snapshots")
    parser.add_argument("--output-dir", help=f"output directory (default ${OUTPUT_DIR_ENV} or {DEFAULT_OUTPUT_DIR})")
    parser.add_argument("--ensemble", help="run this many paths with seeds seed+0..count-1")
    parser.add_argument("--transport", help=f"one of {', '.join(TRANSPORTS)}")
    parser.add_argument("--write-curves", action="store_true", help="write reconstructed curves per snapshot")
    parser.add_argument("--workers", help="worker processes for ensembles and order studies")
    parser.add_argument("--study", help=f"one of {', '.join(STUDIES)}")
    parser.add_argument("--seeds", help="number of seeds for the order study")
    parser.add_argument("--refinements", help="step halvings for the order study")
    parser.add_argument("--verbose", action="store_true", help="debug logging")
    parser.add_argument("--version", action="version", version=f"%(prog)s {package_version()}")
    return parser


def load_config_file(path) -> dict:
    try:
        with open(path, encoding="utf-8") as handle:
            data = json.load(handle)
    except (OSError, json.JSONDecodeError) as err:
        raise ConfigError("config", f"cannot be read from {path}: {err}") from err
    if not isinstance(data, dict):
        raise ConfigError("config", f"{path} must hold a JSON object")
    return data


def parse_config(argv=None, environ=None) -> RunSettings:
    """
    Merge defaults, the output-dir environment variable, an optional JSON config file and
    command-line flags (in increasing precedence) into validated RunSettings.
    """
    environ = os.environ if environ is None else environ
    flags = vars(build_parser().parse_args(argv))
    flags.pop("verbose", None)
    config_file = flags.pop("config", None)

    merged = {}
    if environ.get(OUTPUT_DIR_ENV):
        merged[CONF_OUTPUT_DIR] = environ[OUTPUT_DIR_ENV]
    if config_file is not None:
        merged.update(load_config_file(config_file))
    merged.update(flags)
    if CONF_INITIAL not in merged:
        raise ConfigError(CONF_INITIAL, "is required")
    return settings_from_mapping(merged)


def build_initial_state(spec: InitialSpec, N: int) -> CurvatureState:
    """Curvature state for an initial-condition spec on a grid of N samples."""
    if spec.kind == INITIAL_CIRCLE:
        (radius,) = spec.params
        return constant_state(1.0 / radius, 2.0 * np.pi * radius, N)
    if spec.kind == INITIAL_FLAT:
        (length,) = spec.params
        return constant_state(0.0, length, N)
    if spec.kind == INITIAL_ELLIPSE:
        a, b = spec.params
        return curvature_from_curve(ellipse_curve(a, b, ELLIPSE_SAMPLE_POINTS), N)
    if spec.kind == INITIAL_FOURIER:
        radius, modes = spec.params
        r = grid_coordinates(N)
        f = np.full(N, 1.0 / radius)
        for frequency, amplitude in modes:
            f += amplitude * np.cos(2.0 * np.pi * frequency * r)
        state = CurvatureState(f, 2.0 * np.pi * radius)
        turning = turning_number(state)
        if abs(turning - 1.0) > TURNING_TOLERANCE:
            raise ConfigError(CONF_INITIAL, f"fourier data has turning number {turning:.6g}, expected 1")
        return state
    if spec.kind == INITIAL_FILE:
        (path,) = spec.params
        try:
            curve = read_curve_csv(path)
        except OSError as err:
            raise ConfigError(CONF_INITIAL, f"cannot read curve file {path}: {err}") from err
        except (StocsfError, ValueError, KeyError) as err:
            raise ConfigError(CONF_INITIAL, f"invalid curve file {path}: {err}") from err
        return curvature_from_curve(ensure_counterclockwise(curve), N)
    raise ConfigError(CONF_INITIAL, f"unknown initial condition kind {spec.kind!r}")
