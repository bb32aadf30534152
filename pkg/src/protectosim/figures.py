"""Curve data for the four standard figures.

* ``fig1``: flip probability against decoherence strength, plus a
  small-``s_d`` inset.
* ``fig2``: the pointer packet before and after an environment-free shift.
* ``fig3``: broadened pointer densities for weak decoherence.
* ``fig4``: bimodal pointer densities for an environment along ``z``.

The ``s_d`` sets used in figs. 3 and 4 are our own choices.
"""

from __future__ import annotations

import math

import numpy as np

from . import continuum
from .core import MeasurementGeometry, gaussian_pdf
from .errors import InvalidOverride, UnknownFigure
from .fileio import CurveSet, format_number
from .scans import parse_axis, parse_number

POINTS = 400

DEFAULTS = {
    "fig1": {"xi": 0.1, "gamma": math.pi / 2, "eta": 0.0, "sd_max": 3.0, "inset_max": 0.35,
             "points": POINTS},
    "fig2": {"sigma_p": 0.03, "shift": 0.1, "points": POINTS},
    "fig3": {"gamma": math.pi / 4, "eta": 0.0, "sigma_p": 0.03, "sd_list": (0.05, 0.1, 0.2),
             "points": POINTS},
    "fig4": {"gamma": math.pi / 4, "sigma_p": 0.03, "sd_list": (0.5, 1.0, 2.0), "points": POINTS},
}


def _label(s_d):
    return f"s_d={format_number(s_d)}"


def _check_width(sigma_p):
    if not sigma_p > 0.0:
        raise ValueError("sigma_p must be positive")


def fig1(xi=0.1, gamma=math.pi / 2, eta=0.0, sd_max=3.0, inset_max=0.35, points=POINTS):
    geom = MeasurementGeometry(gamma, eta, xi)
    out = []
    for name, top in (("fig1", sd_max), ("fig1_inset", inset_max)):
        s = np.linspace(0.0, top, points)
        p1 = np.array([continuum.p1_weak(v, geom) for v in s])
        out.append(CurveSet(name, s, {"P1": p1}, x_label="s_d", y_label="P1",
                            title="Flip probability against decoherence strength"))
    return out


def fig2(sigma_p=0.03, shift=0.1, points=POINTS):
    _check_width(sigma_p)
    x = np.linspace(-5.0 * sigma_p, shift + 5.0 * sigma_p, points)
    series = {"initial": gaussian_pdf(x, 0.0, sigma_p), "shifted": gaussian_pdf(x, shift, sigma_p)}
    return [CurveSet("fig2", x, series, x_label="p", y_label="density",
                     title="Pointer packet before and after the shift")]


def fig3(gamma=math.pi / 4, eta=0.0, sigma_p=0.03, sd_list=(0.05, 0.1, 0.2), points=POINTS):
    _check_width(sigma_p)
    geom = MeasurementGeometry(gamma, eta)
    widest = max(continuum.pointer_moments(s, geom, sigma_p).sd for s in sd_list)
    center = math.cos(gamma)
    x = np.linspace(min(-5.0 * sigma_p, center - 5.0 * widest), center + 5.0 * widest, points)
    series = {"initial": gaussian_pdf(x, 0.0, sigma_p)}
    for s in sd_list:
        series[_label(s)] = continuum.pointer_density(s, geom, sigma_p, x)
    return [CurveSet("fig3", x, series, x_label="p", y_label="density",
                     title="Environment-induced pointer broadening")]


def fig4(gamma=math.pi / 4, sigma_p=0.03, sd_list=(0.5, 1.0, 2.0), points=POINTS):
    _check_width(sigma_p)
    c = abs(math.cos(gamma))
    x = np.linspace(-c - 5.0 * sigma_p, c + 5.0 * sigma_p, points)
    series = {_label(s): continuum.zaxis_pointer_density(s, gamma, sigma_p, x) for s in sd_list}
    return [CurveSet("fig4", x, series, x_label="p", y_label="density",
                     title="Pointer density, environment along z")]


BUILDERS = {"fig1": fig1, "fig2": fig2, "fig3": fig3, "fig4": fig4}


def parse_overrides(fig_id: str, pairs) -> dict:
    """Turn ``key=value`` strings into keyword arguments for a figure builder."""
    if fig_id not in BUILDERS:
        raise UnknownFigure(f"unknown figure {fig_id!r}; choose from {sorted(BUILDERS)}")
    allowed = DEFAULTS[fig_id]
    out = {}
    for pair in pairs or ():
        if "=" not in pair:
            raise InvalidOverride(f"expected key=value, got {pair!r}")
        key, value = (s.strip() for s in pair.split("=", 1))
        if key not in allowed:
            raise InvalidOverride(f"not a parameter of {fig_id}", key=key)
        try:
            if key == "sd_list":
                v = tuple(float(s) for s in parse_axis(value))
                if not v or min(v) < 0.0:
                    raise ValueError("sd_list needs non-negative values")
            elif key == "points":
                v = int(parse_number(value))
                if v < 2:
                    raise ValueError("points must be at least 2")
            else:
                v = parse_number(value)
                if not math.isfinite(v):
                    raise ValueError("value must be finite")
        except ValueError as exc:
            raise InvalidOverride(str(exc), key=key) from None
        out[key] = v
    return out


def build(fig_id: str, overrides=None) -> list[CurveSet]:
    kwargs = parse_overrides(fig_id, overrides)
    try:
        return BUILDERS[fig_id](**kwargs)
    except ValueError as exc:
        raise InvalidOverride(str(exc)) from None
