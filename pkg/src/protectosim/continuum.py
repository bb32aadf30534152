"""
Gaussian-continuum analytics.

Environment fields ``b`` are distributed as ``N(0, s_d^2)``. Integrals over
that distribution use Gauss-Hermite quadrature when the integrand is smooth
and composite Gauss-Legendre with panel doubling when it oscillates.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import special

from . import core
from .constants import HBAR
from .core import MeasurementGeometry, PointerMixture, gaussian_pdf
from .errors import RegimeWarning, SingularPoint, ZeroWidth
from .quadrature import RTOL, converged_legendre, normal_expectation

#: Half-width of the integration window in units of ``s_d``.
TAIL = 12.0

#: Upper edges of the weak regime used to attach warnings.
WEAK_SD = 0.35
WEAK_XI = 0.1

OSCILLATION_MODES = ("full", "average", "drop")


@dataclass(frozen=True)
class SpectralDensity:
    """Gaussian distribution of environment fields with width ``s_d``."""

    s_d: float

    def __post_init__(self):
        if not self.s_d >= 0.0:
            raise ValueError(f"s_d must be non-negative, got {self.s_d}")

    def __call__(self, b_tilde):
        return spectral_density(b_tilde, self.s_d)

    def expectation(self, f, rtol: float = RTOL) -> float:
        return normal_expectation(f, self.s_d, rtol=rtol)


@dataclass(frozen=True)
class PointerMoments:
    mean: float
    variance: float

    @property
    def sd(self) -> float:
        return math.sqrt(self.variance)


@dataclass(frozen=True)
class GeneralQubitConfig:
    """Generic protective qubit measurement in SI units.

    ``zeta`` is the coupling constant of ``kappa(t) = zeta / T``, ``k`` the
    value of the pointer variable, ``sigma_ell`` the width of the packet in
    the conjugate variable. ``epsilon`` is an optional typical environment
    eigenvalue (J) used to report the scale of ``b_tilde``.
    """

    zeta: float
    omega0: float
    T: float
    k: float
    sigma_ell: float
    s_d: float
    gamma: float
    eta: float = 0.0
    epsilon: float | None = None

    def __post_init__(self):
        for name in ("omega0", "T", "sigma_ell"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be positive")
        if self.s_d < 0.0:
            raise ValueError("s_d must be non-negative")
        if not self.xi >= 0.0:
            raise ValueError(f"derived xi must be non-negative, got {self.xi}")

    @property
    def xi(self) -> float:
        return 2.0 * self.zeta * self.k / (HBAR * self.omega0 * self.T)

    @property
    def omega0_T(self) -> float:
        return self.omega0 * self.T


@dataclass(frozen=True)
class GeneralQubitMap:
    xi: float
    b_tilde_scale: float | None
    shift: float
    variance: float
    regime_violation: bool


def spectral_density(b_tilde, s_d: float):
    if s_d == 0.0:
        raise ZeroWidth("spectral density with s_d = 0 is a delta function")
    if s_d < 0.0:
        raise ValueError("s_d must be non-negative")
    return gaussian_pdf(b_tilde, 0.0, s_d)


def p1_weak(s_d: float, geometry: MeasurementGeometry, rtol: float = RTOL) -> float:
    """Flip probability with the precession term averaged away."""
    if s_d < 0.0:
        raise ValueError("s_d must be non-negative")
    if s_d == 0.0:
        return 0.5 * core.sin2_theta(geometry, 0.0)
    return 0.5 * normal_expectation(lambda b: core.sin2_theta(geometry, b), s_d, rtol=rtol)


def window_average_cos(omega0_T: float, k):
    """Mean of ``cos(x k)`` for ``x`` uniform on ``[omega0_T, omega0_T + 2 pi]``."""
    k = np.asarray(k, dtype=float)
    a = omega0_T
    return (np.sin(k * (a + 2.0 * np.pi)) - np.sin(k * a)) / (2.0 * np.pi * k)


def precession_cos(omega0_T: float, b_tilde, mode: str = "full"):
    """``cos(2 Omega T)`` as a function of the environment field.

    ``mode`` selects the literal value (``"full"``), its average over one
    period of ``omega0_T`` (``"average"``) or zero (``"drop"``).
    """
    k = np.sqrt(1.0 + np.asarray(b_tilde, dtype=float) ** 2)
    if mode == "full":
        return np.cos(omega0_T * k)
    if mode == "average":
        return window_average_cos(omega0_T, k)
    if mode == "drop":
        return np.zeros_like(k)
    raise ValueError(f"unknown oscillation mode {mode!r}; choose from {OSCILLATION_MODES}")


def _p1_integrand(geometry, omega0_T, sigma_p, mode):
    def f(b):
        s2 = core.sin2_theta(geometry, b)
        overlap = core.wavepacket_overlap(core.pointer_shift(geometry, b), sigma_p)
        return 0.5 * s2 * (1.0 - overlap * precession_cos(omega0_T, b, mode))

    return f


def p1_full(
    s_d: float,
    geometry: MeasurementGeometry,
    omega0_T: float,
    sigma_p: float,
    oscillation: str = "full",
    rtol: float = RTOL,
) -> float:
    """Flip probability including the precession and pointer-overlap term."""
    if not omega0_T > 0.0:
        raise ValueError("omega0_T must be positive")
    if oscillation not in OSCILLATION_MODES:
        raise ValueError(f"unknown oscillation mode {oscillation!r}")
    f = _p1_integrand(geometry, omega0_T, sigma_p, oscillation)
    if s_d == 0.0:
        return float(f(np.zeros(1))[0])
    if oscillation == "drop":
        return p1_weak(s_d, geometry, rtol=rtol)
    half = TAIL * s_d
    # Oscillation count of cos(omega0_T sqrt(1 + b^2)) across the window.
    cycles = omega0_T * (math.sqrt(1.0 + half**2) - 1.0) / (2.0 * math.pi)
    panels = int(max(64, 2 ** math.ceil(math.log2(4 * cycles + 1))))

    def weighted(b):
        return gaussian_pdf(b, 0.0, s_d) * f(b)

    # Split at 0: the phase is stationary there.
    return float(
        converged_legendre(weighted, -half, 0.0, panels, rtol=rtol)
        + converged_legendre(weighted, 0.0, half, panels, rtol=rtol)
    )


def _check_weak(s_d, geometry):
    if s_d > WEAK_SD or geometry.xi > WEAK_XI:
        warnings.warn(
            f"s_d={s_d}, xi={geometry.xi} is outside the weak regime "
            f"(s_d <= {WEAK_SD}, xi <= {WEAK_XI}); linearized pointer shift may be inaccurate",
            RegimeWarning,
            stacklevel=3,
        )


def broadened_variance(width: float, scale: float, s_d: float, gamma: float, eta: float) -> float:
    """``width^2 + (scale s_d cos(eta) sin(gamma))^2``."""
    return width**2 + (scale * s_d * math.cos(eta) * math.sin(gamma)) ** 2


def pointer_moments(s_d: float, geometry: MeasurementGeometry, sigma_p: float) -> PointerMoments:
    """Mean and variance of the pointer distribution in the weak regime."""
    if s_d < 0.0 or sigma_p < 0.0:
        raise ValueError("s_d and sigma_p must be non-negative")
    return PointerMoments(
        mean=math.cos(geometry.gamma),
        variance=broadened_variance(sigma_p, 1.0, s_d, geometry.gamma, geometry.eta),
    )


def pointer_density(
    s_d: float,
    geometry: MeasurementGeometry,
    sigma_p: float,
    grid,
    method: str = "quadrature",
    rtol: float = 1e-12,
) -> np.ndarray:
    """Pointer momentum density after the measurement.

    Packets shifted by the linearized amount ``cos(gamma) + b cos(eta) sin(gamma)``
    are averaged over the field distribution. ``method="quadrature"`` does
    the average numerically; ``method="closed"`` uses the resulting Gaussian.
    """
    if not sigma_p > 0.0:
        raise ValueError("sigma_p must be positive")
    _check_weak(s_d, geometry)
    grid = np.asarray(grid, dtype=float)
    if method == "closed":
        m = pointer_moments(s_d, geometry, sigma_p)
        return gaussian_pdf(grid, m.mean, m.sd)
    if method != "quadrature":
        raise ValueError(f"unknown method {method!r}")

    center = math.cos(geometry.gamma)
    slope = geometry.transverse
    if s_d == 0.0 or slope == 0.0:
        return gaussian_pdf(grid, center, sigma_p)

    def integrand(b):
        shifted = center + b * slope
        return gaussian_pdf(grid[:, None], shifted[None, :], sigma_p) * gaussian_pdf(b, 0.0, s_d)

    half = TAIL * s_d
    return converged_legendre(integrand, -half, half, panels=32, rtol=rtol)


def pointer_density_exact_weights(
    s_d: float,
    geometry: MeasurementGeometry,
    sigma_p: float,
    grid,
    rtol: float = 1e-10,
) -> np.ndarray:
    """Pointer density keeping both shifted packets and the full shift.

    Unlike :func:`pointer_density`, the reversed packet at ``-shift`` is kept
    with weight ``sin^2(theta/2)`` and the shift is not linearized in ``b``.
    """
    if not sigma_p > 0.0:
        raise ValueError("sigma_p must be positive")
    grid = np.asarray(grid, dtype=float)

    def branch_density(b):
        rz = core.field_direction(geometry, b)[..., 2]
        up = 0.5 * (1.0 + rz)
        shift = np.asarray(core.pointer_shift(geometry, b))
        g = grid[:, None]
        return up * gaussian_pdf(g, shift, sigma_p) + (1.0 - up) * gaussian_pdf(g, -shift, sigma_p)

    if s_d == 0.0:
        return branch_density(np.zeros(1))[:, 0]
    half = TAIL * s_d
    return converged_legendre(
        lambda b: branch_density(b) * gaussian_pdf(b, 0.0, s_d), -half, half, panels=32, rtol=rtol
    )


def zaxis_success_probability(s_d: float) -> float:
    """Probability that the environment field does not reverse the protection field.

    ``P(b > -1)`` for ``b ~ N(0, s_d^2)``; ``s_d = 0`` gives exactly one.
    """
    if s_d < 0.0:
        raise ValueError("s_d must be non-negative")
    if s_d == 0.0:
        return 1.0
    return float(special.ndtr(1.0 / s_d))


def zaxis_pointer_mixture(s_d: float, gamma: float, sigma_p: float) -> PointerMixture:
    p_plus = zaxis_success_probability(s_d)
    c = math.cos(gamma)
    return PointerMixture(
        weights=np.array([p_plus, 1.0 - p_plus]),
        centers=np.array([c, -c]),
        widths=np.array([sigma_p, sigma_p]),
    )


def zaxis_pointer_density(s_d: float, gamma: float, sigma_p: float, grid) -> np.ndarray:
    """Bimodal pointer density when the environment couples along ``z``."""
    return zaxis_pointer_mixture(s_d, gamma, sigma_p).density(grid)


def zaxis_chi(xi: float, gamma: float, b_tilde):
    """Exact net-field factor when the environment field is along ``z``."""
    b = np.asarray(b_tilde, dtype=float)
    c = math.cos(gamma)
    return np.sqrt(1.0 + b**2 + xi**2 + 2.0 * b + 2.0 * b * xi * c + 2.0 * xi * c)


def zaxis_chi_expansion(xi: float, gamma: float, b_tilde: float) -> tuple[float, int]:
    """First-order expansion of :func:`zaxis_chi` in ``xi``.

    Returns ``(chi_approx, shift_sign)``; the sign is ``-1`` when the
    environment field reverses the protection field (``b < -1``).
    """
    s = 1.0 + b_tilde
    if s == 0.0:
        raise SingularPoint("b_tilde = -1 cancels the protection field")
    sign = 1 if s > 0.0 else -1
    return abs(s) + xi * math.cos(gamma) * sign, sign


def general_qubit_map(config: GeneralQubitConfig) -> GeneralQubitMap:
    """Translate a generic qubit measurement into the dimensionless model.

    The pointer shift and variance are expressed in the conjugate pointer
    variable (same units as ``zeta``).
    """
    violation = config.omega0_T <= 10.0
    if violation:
        warnings.warn(
            f"omega0*T = {config.omega0_T:g} <= 10; weak-measurement premise broken",
            RegimeWarning,
            stacklevel=2,
        )
    scale = None if config.epsilon is None else config.epsilon / (HBAR * config.omega0)
    return GeneralQubitMap(
        xi=config.xi,
        b_tilde_scale=scale,
        shift=config.zeta * math.cos(config.gamma),
        variance=broadened_variance(config.sigma_ell, config.zeta, config.s_d, config.gamma, config.eta),
        regime_violation=violation,
    )
