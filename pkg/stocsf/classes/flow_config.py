"""Numerical settings for one flow run."""
import math
from dataclasses import asdict, dataclass

from ..const import (
    C_EMBED,
    CONF_BLOWUP_F_MAX,
    CONF_BLOWUP_L_MAX,
    CONF_BLOWUP_L_MIN,
    CONF_DT,
    CONF_GRID,
    CONF_SCHEME,
    CONF_SIGMA,
    CONF_T_END,
    CONF_TRANSPORT,
    CONF_TRUNC_N,
    DEFAULT_BLOWUP_F_MAX,
    DEFAULT_BLOWUP_L_MAX,
    DEFAULT_BLOWUP_L_MIN,
    DEFAULT_DT,
    DEFAULT_GRID,
    DEFAULT_SCHEME,
    DEFAULT_SEED,
    DEFAULT_SIGMA,
    DEFAULT_T_END,
    DEFAULT_TRANSPORT,
    MIN_GRID,
    SCHEME_ALIASES,
    SCHEMES,
    TRANSPORT_ARCLENGTH,
    TRANSPORTS,
)
from ..constants.scheme_types import scheme_form
from ..exceptions import ConfigError


def resolve_scheme(name: str) -> str:
    """Map a scheme name or alias to its canonical name."""
    scheme = SCHEME_ALIASES.get(name, name)
    if scheme not in SCHEMES:
        raise ConfigError(CONF_SCHEME, f"must be one of {SCHEMES + list(SCHEME_ALIASES)}, got {name!r}")
    return scheme


@dataclass(frozen=True)
class FlowConfig:
    """
    Grid, step, scheme, noise intensity, truncation and stopping thresholds.

    Thresholds left as None are filled in from trunc_n when it is set (f_max = n * C_EMBED,
    L in (1/n, n)) and from the package defaults otherwise. Any sigma >= 0 is accepted; the
    well-posedness theory only covers sufficiently small sigma.
    """

    sigma: float = DEFAULT_SIGMA
    N: int = DEFAULT_GRID
    dt: float = DEFAULT_DT
    t_end: float = DEFAULT_T_END
    scheme: str = DEFAULT_SCHEME
    trunc_n: int | None = None
    blowup_f_max: float | None = None
    blowup_L_bounds: tuple = (None, None)
    seed: int = DEFAULT_SEED
    transport: str = DEFAULT_TRANSPORT

    def __post_init__(self):
        if not (math.isfinite(self.sigma) and self.sigma >= 0):
            raise ConfigError(CONF_SIGMA, "must be nonnegative")
        if int(self.N) != self.N or self.N < MIN_GRID:
            raise ConfigError(CONF_GRID, f"must be an integer >= {MIN_GRID}, got {self.N}")
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise ConfigError(CONF_DT, "must be positive")
        if not (math.isfinite(self.t_end) and self.t_end > 0):
            raise ConfigError(CONF_T_END, "must be positive")
        if self.trunc_n is not None and (int(self.trunc_n) != self.trunc_n or self.trunc_n < 1):
            raise ConfigError(CONF_TRUNC_N, f"must be a positive integer, got {self.trunc_n}")
        if self.transport not in TRANSPORTS:
            raise ConfigError(CONF_TRANSPORT, f"must be one of {TRANSPORTS}, got {self.transport!r}")

        scheme = resolve_scheme(self.scheme)
        if self.transport == TRANSPORT_ARCLENGTH and self.sigma > 0 and scheme_form(scheme) != "stratonovich":
            raise ConfigError(
                CONF_TRANSPORT, f"arclength transport with sigma > 0 needs a Stratonovich-form scheme, got {scheme}"
            )

        n = self.trunc_n
        f_max = self.blowup_f_max
        if f_max is None:
            f_max = n * C_EMBED if n is not None else DEFAULT_BLOWUP_F_MAX
        l_min, l_max = tuple(self.blowup_L_bounds)
        if l_min is None:
            l_min = 1.0 / n if n is not None else DEFAULT_BLOWUP_L_MIN
        if l_max is None:
            l_max = float(n) if n is not None else DEFAULT_BLOWUP_L_MAX
        if not f_max > 0:
            raise ConfigError(CONF_BLOWUP_F_MAX, "must be positive")
        if not l_min >= 0:
            raise ConfigError(CONF_BLOWUP_L_MIN, "must be nonnegative")
        if not l_max > l_min:
            raise ConfigError(CONF_BLOWUP_L_MAX, f"must exceed blowup_l_min ({l_min})")

        object.__setattr__(self, "scheme", scheme)
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "sigma", float(self.sigma))
        object.__setattr__(self, "trunc_n", None if n is None else int(n))
        object.__setattr__(self, "blowup_f_max", float(f_max))
        object.__setattr__(self, "blowup_L_bounds", (float(l_min), float(l_max)))

    @property
    def n_steps(self) -> int:
        """Whole steps that fit in t_end; a fractional remainder is dropped."""
        return int(math.floor(self.t_end / self.dt * (1.0 + 1e-12)))

    @property
    def L_min(self) -> float:
        return self.blowup_L_bounds[0]

    @property
    def L_max(self) -> float:
        return self.blowup_L_bounds[1]

    def to_dict(self) -> dict:
        data = asdict(self)
        data["blowup_L_bounds"] = list(self.blowup_L_bounds)
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "FlowConfig":
        values = dict(data)
        values["blowup_L_bounds"] = tuple(values.get("blowup_L_bounds", (None, None)))
        return cls(**values)
