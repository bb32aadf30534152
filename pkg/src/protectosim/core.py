"""
Dimensionless field geometry shared by every engine.

All quantities here are dimensionless: fields are measured in units of the
protection field ``B0``, pointer momenta in units of ``mu * beta`` and
precession phases as products with the duration ``T``.

The qubit sees, for an environment field ``b`` along ``x``, the net field

    B / B0 = (xi cos(eta) sin(gamma) + b,  xi sin(eta) sin(gamma),  1 + xi cos(gamma))

whose magnitude is ``chi`` and whose direction is the unit vector ``r``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .errors import DegenerateField, WeakMeasurementWarning

#: Net-field magnitudes below this are treated as a vanishing field.
DEGENERATE_CHI = 1e-12


@dataclass(frozen=True)
class MeasurementGeometry:
    """Orientation ``(gamma, eta)`` and strength ``xi`` of the measurement field."""

    gamma: float
    eta: float = 0.0
    xi: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.gamma <= math.pi:
            raise ValueError(f"gamma must lie in [0, pi], got {self.gamma}")
        if not 0.0 <= self.eta < 2.0 * math.pi:
            raise ValueError(f"eta must lie in [0, 2pi), got {self.eta}")
        if not self.xi >= 0.0:
            raise ValueError(f"xi must be non-negative, got {self.xi}")
        if self.xi >= 1.0:
            warnings.warn(
                f"xi={self.xi} >= 1 is outside the weak-measurement regime",
                WeakMeasurementWarning,
                stacklevel=3,
            )

    @property
    def transverse(self) -> float:
        """``cos(eta) sin(gamma)``, the x-component of the measurement axis."""
        return math.cos(self.eta) * math.sin(self.gamma)

    def replace(self, **changes) -> "MeasurementGeometry":
        return MeasurementGeometry(**{**self.__dict__, **changes})


@dataclass(frozen=True)
class EffectiveField:
    """Net field on one branch: magnitude factor and direction."""

    chi: float
    theta: float
    phi: float
    r: tuple[float, float, float]


@dataclass(frozen=True)
class GaussianPointer:
    """Gaussian pointer momentum distribution ``|Phi(p)|^2``."""

    center: float
    width: float

    def __post_init__(self):
        if not self.width > 0.0:
            raise ValueError(f"pointer width must be positive, got {self.width}")

    def density(self, p):
        return gaussian_pdf(p, self.center, self.width)

    def amplitude(self, p):
        """Momentum wave function, real and positive."""
        p = np.asarray(p, dtype=float)
        return (2.0 * np.pi * self.width**2) ** -0.25 * np.exp(
            -((p - self.center) ** 2) / (4.0 * self.width**2)
        )


@dataclass(frozen=True)
class PointerMixture:
    """Incoherent mixture of Gaussian pointer packets.

    Components are stored as parallel arrays; ``weights`` are non-negative
    and sum to one.
    """

    weights: np.ndarray
    centers: np.ndarray
    widths: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        c = np.asarray(self.centers, dtype=float)
        s = np.broadcast_to(np.asarray(self.widths, dtype=float), w.shape)
        if w.shape != c.shape:
            raise ValueError("weights and centers must have the same shape")
        if np.any(w < 0.0):
            raise ValueError("mixture weights must be non-negative")
        if abs(w.sum() - 1.0) > 1e-10:
            raise ValueError(f"mixture weights sum to {w.sum()!r}, not 1")
        if np.any(s <= 0.0):
            raise ValueError("component widths must be positive")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "centers", c)
        object.__setattr__(self, "widths", np.array(s))

    def __len__(self):
        return self.weights.size

    def density(self, grid) -> np.ndarray:
        grid = np.asarray(grid, dtype=float)
        out = np.zeros_like(grid)
        for w, c, s in zip(self.weights, self.centers, self.widths):
            out += w * gaussian_pdf(grid, c, s)
        return out

    @property
    def mean(self) -> float:
        return float(np.dot(self.weights, self.centers))

    @property
    def variance(self) -> float:
        second = np.dot(self.weights, self.widths**2 + self.centers**2)
        return float(second - self.mean**2)


def gaussian_pdf(x, mean, sd):
    x = np.asarray(x, dtype=float)
    return np.exp(-0.5 * ((x - mean) / sd) ** 2) / (math.sqrt(2.0 * math.pi) * sd)


def measurement_axis(geometry: MeasurementGeometry) -> np.ndarray:
    g, e = geometry.gamma, geometry.eta
    return np.array([math.cos(e) * math.sin(g), math.sin(e) * math.sin(g), math.cos(g)])


def net_field_components(geometry: MeasurementGeometry, b_tilde):
    """Cartesian components of the net field in units of ``B0``.

    Vectorized over ``b_tilde``. Returns ``(bx, by, bz)`` arrays broadcast to
    the shape of ``b_tilde``.
    """
    b = np.asarray(b_tilde, dtype=float)
    m = measurement_axis(geometry)
    xi = geometry.xi
    bx = xi * m[0] + b
    by = np.full_like(b, xi * m[1])
    bz = np.full_like(b, 1.0 + xi * m[2])
    return bx, by, bz


def chi_factor(geometry: MeasurementGeometry, b_tilde):
    """Net-field magnitude factor ``chi`` (closed form), vectorized."""
    b = np.asarray(b_tilde, dtype=float)
    xi, g, e = geometry.xi, geometry.gamma, geometry.eta
    chi2 = (
        1.0
        + b**2
        + xi**2
        + 2.0 * b * xi * math.cos(e) * math.sin(g)
        + 2.0 * xi * math.cos(g)
    )
    return np.sqrt(np.maximum(chi2, 0.0))


def _checked_chi(geometry, b_tilde):
    chi = chi_factor(geometry, b_tilde)
    if np.any(chi < DEGENERATE_CHI):
        raise DegenerateField(
            f"net field vanishes for xi={geometry.xi}, gamma={geometry.gamma}, "
            f"eta={geometry.eta}"
        )
    return chi


def field_direction(geometry: MeasurementGeometry, b_tilde):
    """Unit vectors of the net field, shape ``b_tilde.shape + (3,)``."""
    chi = _checked_chi(geometry, b_tilde)
    bx, by, bz = net_field_components(geometry, b_tilde)
    return np.stack([bx / chi, by / chi, bz / chi], axis=-1)


def effective_field(geometry: MeasurementGeometry, b_tilde: float) -> EffectiveField:
    """Net field for a single environment field ``b_tilde``.

    Raises
    ------
    DegenerateField
        If ``chi`` is below ``1e-12``.
    """
    chi = float(_checked_chi(geometry, b_tilde))
    r = field_direction(geometry, float(b_tilde))
    rx, ry, rz = (float(v) for v in r)
    theta = math.acos(min(1.0, max(-1.0, rz)))
    phi = math.atan2(ry, rx) if (rx != 0.0 or ry != 0.0) else 0.0
    return EffectiveField(chi=chi, theta=theta, phi=phi, r=(rx, ry, rz))


def pointer_shift(geometry: MeasurementGeometry, b_tilde):
    """First-order pointer momentum shift in units of ``mu * beta``.

    This is the expectation value of ``sigma . m`` in the ground state of
    the environment-modified qubit Hamiltonian.
    """
    b = np.asarray(b_tilde, dtype=float)
    g, e = geometry.gamma, geometry.eta
    out = (math.cos(g) + b * math.cos(e) * math.sin(g)) / np.sqrt(1.0 + b**2)
    return out if out.ndim else float(out)


def sin2_theta(geometry: MeasurementGeometry, b_tilde):
    """``sin^2`` of the polar angle of the net field, vectorized."""
    b = np.asarray(b_tilde, dtype=float)
    chi = _checked_chi(geometry, b)
    xi, g, e = geometry.xi, geometry.gamma, geometry.eta
    num = xi**2 * math.sin(g) ** 2 + b**2 + 2.0 * b * xi * math.cos(e) * math.sin(g)
    out = np.clip(num / chi**2, 0.0, 1.0)
    return out if out.ndim else float(out)


def wavepacket_overlap(delta_p, width):
    """Inner product of Gaussian packets centered at ``+delta_p`` and ``-delta_p``.

    Both packets have momentum spread ``width``; the result is real and lies
    in ``(0, 1]``. Square it for the fidelity.
    """
    if not np.all(np.asarray(width) > 0.0):
        raise ValueError("pointer width must be positive")
    d = np.asarray(delta_p, dtype=float)
    out = np.exp(-(d**2) / (2.0 * np.asarray(width, dtype=float) ** 2))
    return out if out.ndim else float(out)


def disturbance_bound(xi, gamma):
    """Upper bound on the flip probability from the measurement field alone.

    Obtained with the pointer overlap set to one and the precession phase
    at its worst value; equals ``sin^2(theta)`` at zero environment field.
    """
    xi = np.asarray(xi, dtype=float)
    if np.any(xi < 0.0):
        raise ValueError("xi must be non-negative")
    g = np.asarray(gamma, dtype=float)
    den = 1.0 + xi**2 + 2.0 * xi * np.cos(g)
    num = xi**2 * np.sin(g) ** 2
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.where(den > 0.0, num / np.where(den > 0.0, den, 1.0), 1.0)
    return out if out.ndim else float(out)


def max_disturbance_bound(xi: float, gamma_range=(0.0, math.pi)) -> tuple[float, float]:
    """Maximize :func:`disturbance_bound` over the measurement polar angle.

    Returns ``(bound, gamma_at_max)``. A coarse scan locates the basin and a
    bounded scalar search refines it.
    """
    lo, hi = gamma_range
    grid = np.linspace(lo, hi, 721)
    vals = disturbance_bound(xi, grid)
    k = int(np.argmax(vals))
    a, b = grid[max(k - 1, 0)], grid[min(k + 1, grid.size - 1)]
    if b <= a:
        return float(vals[k]), float(grid[k])
    res = optimize.minimize_scalar(
        lambda g: -disturbance_bound(xi, g),
        bounds=(a, b),
        method="bounded",
        options={"xatol": 1e-12},
    )
    if -res.fun >= vals[k]:
        return float(-res.fun), float(res.x)
    return float(vals[k]), float(grid[k])
