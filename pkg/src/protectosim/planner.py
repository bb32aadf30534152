"""
SI-unit planner for a Stern-Gerlach realization.

An atom with magnetic moment ``mu`` crosses a region of length ``d`` in which
the measurement-field gradient ``grad_B`` acts. Its transverse displacement at
the exit is

    Delta_s = mu grad_B (cos(gamma) + s sin(gamma)) d^2 / (4 k_B T_oven)

with ``s`` the added random field in units of ``B0`` (``s = 0`` without the
simulated environment). Spreads are obtained by converting to the
dimensionless pointer variable and using :mod:`protectosim.continuum`.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from .constants import K_B, MASSES
from .continuum import pointer_moments
from .core import MeasurementGeometry, max_disturbance_bound, disturbance_bound
from .errors import ConfigError

#: xi at or below this is reported as the weak-measurement regime.
WEAK_XI = 0.1


@dataclass(frozen=True)
class ApparatusParams:
    mu: float  # J/T
    grad_B: float  # T/m
    d: float  # m
    T_oven: float  # K
    B0: float  # T
    mass: float  # kg
    gamma: float  # rad

    def __post_init__(self):
        for name in ("mu", "grad_B", "d", "T_oven", "B0", "mass"):
            v = getattr(self, name)
            if not (v > 0.0 and math.isfinite(v)):
                raise ValueError(f"{name} must be positive and finite, got {v}")
        if not 0.0 <= self.gamma <= math.pi:
            raise ValueError(f"gamma must lie in [0, pi], got {self.gamma}")

    @classmethod
    def from_speed(cls, speed: float, **kw) -> "ApparatusParams":
        """Build from a beam speed instead of an oven temperature."""
        mass = kw["mass"]
        return cls(T_oven=mass * speed**2 / (2.0 * K_B), **kw)


@dataclass(frozen=True)
class PlanReport:
    speed: float  # m/s
    transit_time: float  # s
    displacement_0: float  # m
    displacement_env: float  # m
    xi: float
    disturbance_bound: float
    disturbance_at_gamma: float
    spread: float  # m
    relative_change: float
    relative_change_nonlinear: float
    weak_measurement: bool

    def as_dict(self) -> dict:
        return asdict(self)


def most_probable_speed(T_oven: float, mass: float) -> float:
    if not (T_oven > 0.0 and mass > 0.0):
        raise ValueError("T_oven and mass must be positive")
    return math.sqrt(2.0 * K_B * T_oven / mass)


def _kick_factor(gamma: float, s: float) -> float:
    return math.cos(gamma) + s * math.sin(gamma)


def displacement(params: ApparatusParams, extra_field_ratio: float = 0.0) -> float:
    """Exit displacement along the gradient, metres (signed)."""
    f = _kick_factor(params.gamma, extra_field_ratio)
    return params.mu * params.grad_B * f * params.d**2 / (4.0 * K_B * params.T_oven)


def displacement_kinematic(params: ApparatusParams, extra_field_ratio: float = 0.0) -> float:
    """Same displacement from force, mass and transit time ``d / v``."""
    v = most_probable_speed(params.T_oven, params.mass)
    t = params.d / v
    force = params.mu * params.grad_B * _kick_factor(params.gamma, extra_field_ratio)
    return force / (2.0 * params.mass) * t**2


def displacement_nonlinear(params: ApparatusParams, extra_field_ratio: float = 0.0) -> float:
    """Displacement using the unexpanded shift ``(cos + s sin) / sqrt(1 + s^2)``."""
    s = extra_field_ratio
    return displacement(params, s) / math.sqrt(1.0 + s * s)


def field_parameter_xi(params: ApparatusParams) -> float:
    return params.grad_B * params.d / params.B0


def plan(params: ApparatusParams, s_d: float = 0.0) -> PlanReport:
    """Expected displacements, measurement strength and spread for one setup."""
    if s_d < 0.0:
        raise ValueError("s_d must be non-negative")
    v = most_probable_speed(params.T_oven, params.mass)
    ds0 = displacement(params, 0.0)
    ds1 = displacement(params, s_d)
    # Displacement per unit of the dimensionless pointer momentum.
    unit = params.mu * params.grad_B * params.d**2 / (4.0 * K_B * params.T_oven)
    moments = pointer_moments(s_d, MeasurementGeometry(params.gamma, 0.0), 0.0)
    xi = field_parameter_xi(params)
    bound, _ = max_disturbance_bound(xi)
    rel = (ds1 - ds0) / ds0 if ds0 != 0.0 else math.inf
    rel_nl = (displacement_nonlinear(params, s_d) - ds0) / ds0 if ds0 != 0.0 else math.inf
    return PlanReport(
        speed=v,
        transit_time=params.d / v,
        displacement_0=abs(ds0),
        displacement_env=abs(ds1),
        xi=xi,
        disturbance_bound=bound,
        disturbance_at_gamma=float(disturbance_bound(xi, params.gamma)),
        spread=unit * moments.sd,
        relative_change=rel,
        relative_change_nonlinear=rel_nl,
        weak_measurement=xi <= WEAK_XI + 1e-12,
    )


PARAM_KEYS = ("mu", "grad_B", "d", "T_oven", "speed", "B0", "mass_or_species", "gamma_deg", "s_d")


def params_from_mapping(values: dict) -> tuple[ApparatusParams, float]:
    """Parse a flat key=value mapping into apparatus parameters and ``s_d``.

    ``mass_or_species`` is either a mass in kg or a key of
    :data:`protectosim.constants.MASSES`. Either ``T_oven`` or ``speed`` must
    be given.
    """
    unknown = sorted(set(values) - set(PARAM_KEYS))
    if unknown:
        raise ConfigError("unknown parameter", key=unknown[0])

    def num(key, default=None):
        if key not in values:
            if default is None:
                raise ConfigError("missing required parameter", key=key)
            return default
        try:
            return float(values[key])
        except (TypeError, ValueError):
            raise ConfigError(f"not a number: {values[key]!r}", key=key) from None

    if "mass_or_species" not in values:
        raise ConfigError("missing required parameter", key="mass_or_species")
    m = str(values["mass_or_species"]).strip()
    if m in MASSES:
        mass = MASSES[m]
    else:
        try:
            mass = float(m)
        except ValueError:
            raise ConfigError(f"unknown species {m!r}", key="mass_or_species") from None

    common = dict(
        mu=num("mu"),
        grad_B=num("grad_B"),
        d=num("d"),
        B0=num("B0"),
        mass=mass,
        gamma=math.radians(num("gamma_deg")),
    )
    s_d = num("s_d", 0.0)
    if s_d < 0.0:
        raise ConfigError("must be non-negative", key="s_d")
    if ("T_oven" in values) == ("speed" in values):
        raise ConfigError("give exactly one of T_oven or speed", key="T_oven")
    try:
        if "speed" in values:
            p = ApparatusParams.from_speed(num("speed"), **common)
        else:
            p = ApparatusParams(T_oven=num("T_oven"), **common)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return p, s_d
