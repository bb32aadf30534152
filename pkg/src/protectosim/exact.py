"""
Exact branch decomposition for a qubit coupled to N environment spins.

The environment couples through ``sigma_x (x) sum_i g_i sigma_x^(i)`` and has
no self-Hamiltonian, so each product eigenstate ``|E_n>`` of the environment
operator contributes an independent branch: the qubit precesses about a net
field that includes a static environment field ``b_n`` along ``x``. Branches
are labelled by the bit pattern ``n = sum_i k_i 2^i`` of the ``sigma_x``
eigenvalues ``(-1)^k_i``.

Dimensionless couplings are ``g_i / (2 mu B0)``; the branch field is
``b_n = -sum_i (-1)^k_i g_i`` in units of ``B0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from collections.abc import Iterator, Sequence

import numpy as np

from . import core
from .continuum import OSCILLATION_MODES
from .core import EffectiveField, MeasurementGeometry, PointerMixture
from .errors import CapExceeded

DEFAULT_CAP = 16
DEFAULT_OMEGA0_T = 200.0 * math.pi


def _check_cap(n: int, cap: int):
    if n > cap:
        raise CapExceeded(f"{n} environment spins exceeds the cap of {cap} ({2**n} branches)")
    if n < 0:
        raise ValueError("number of spins must be non-negative")


def environment_eigenvalues(couplings, cap: int = DEFAULT_CAP) -> np.ndarray:
    """Environment fields ``b_n`` for every bit pattern, length ``2**N``.

    ``b_n = -sum_i (-1)^k_i g_i`` with ``k_i`` bit ``i`` of ``n``.
    """
    g = np.asarray(couplings, dtype=float).ravel()
    _check_cap(g.size, cap)
    eps = np.zeros(1)
    for gi in g:
        # Appending the k_i = 1 block after the k_i = 0 block sets bit i.
        eps = np.concatenate([eps + gi, eps - gi])
    return -eps


def uniform_superposition_amplitudes(n: int, cap: int = DEFAULT_CAP) -> np.ndarray:
    """Amplitudes of the product state with every spin balanced in ``sigma_x``."""
    _check_cap(n, cap)
    return np.full(2**n, 2.0 ** (-n / 2.0), dtype=complex)


def draw_couplings(n: int, s_d: float, rng: np.random.Generator, rescale: bool = True) -> np.ndarray:
    """Random couplings whose branch-field spread matches ``s_d``.

    Couplings are i.i.d. uniform on ``[-a, a]`` with ``a = s_d sqrt(3/n)``,
    so the branch fields have variance ``s_d^2`` on average. With
    ``rescale=True`` each draw is scaled so that ``sum g_i^2 = s_d^2``
    exactly, which removes draw-to-draw fluctuation of the spread.
    """
    if n < 1:
        raise ValueError("need at least one spin")
    a = s_d * math.sqrt(3.0 / n)
    g = rng.uniform(-a, a, size=n)
    if rescale and s_d > 0.0:
        norm = math.sqrt(float(np.sum(g**2)))
        if norm > 0.0:
            g *= s_d / norm
    return g


@dataclass(frozen=True)
class DiscreteEnvironment:
    """N-spin bath: dimensionless couplings and branch amplitudes."""

    couplings: np.ndarray
    amplitudes: np.ndarray
    cap: int = DEFAULT_CAP

    def __post_init__(self):
        g = np.asarray(self.couplings, dtype=float).ravel()
        _check_cap(g.size, self.cap)
        c = np.asarray(self.amplitudes, dtype=complex).ravel()
        if c.size != 2**g.size:
            raise ValueError(f"expected {2**g.size} amplitudes, got {c.size}")
        norm = float(np.sum(np.abs(c) ** 2))
        if abs(norm - 1.0) > 1e-10:
            raise ValueError(f"amplitudes are not normalized (sum |c|^2 = {norm!r})")
        object.__setattr__(self, "couplings", g)
        object.__setattr__(self, "amplitudes", c)

    @classmethod
    def uniform(cls, couplings, cap: int = DEFAULT_CAP) -> "DiscreteEnvironment":
        g = np.asarray(couplings, dtype=float).ravel()
        return cls(g, uniform_superposition_amplitudes(g.size, cap), cap)

    @property
    def n_spins(self) -> int:
        return self.couplings.size

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def fields(self) -> np.ndarray:
        return environment_eigenvalues(self.couplings, self.cap)


@dataclass(frozen=True)
class Branch:
    index: int
    b_tilde: float
    field: EffectiveField
    omega_T: float
    delta_p: float
    gamma_overlap: float

    @property
    def weights(self) -> tuple[float, float]:
        """``(cos^2(theta/2), sin^2(theta/2))``."""
        rz = self.field.r[2]
        return 0.5 * (1.0 + rz), 0.5 * (1.0 - rz)


@dataclass(frozen=True, eq=False)
class BranchTable(Sequence):
    """All branches of an environment, stored column-wise.

    Indexing or iterating yields :class:`Branch` records.
    """

    b_tilde: np.ndarray
    chi: np.ndarray
    r: np.ndarray  # (n, 3)
    omega_T: np.ndarray
    delta_p: np.ndarray
    overlap: np.ndarray
    omega0_T: float
    sigma_p: float

    def __len__(self):
        return self.b_tilde.size

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self[j] for j in range(*i.indices(len(self)))]
        rx, ry, rz = (float(v) for v in self.r[i])
        phi = math.atan2(ry, rx) if (rx != 0.0 or ry != 0.0) else 0.0
        f = EffectiveField(
            chi=float(self.chi[i]), theta=float(self.theta[i]), phi=phi, r=(rx, ry, rz)
        )
        return Branch(
            index=int(i) % len(self),
            b_tilde=float(self.b_tilde[i]),
            field=f,
            omega_T=float(self.omega_T[i]),
            delta_p=float(self.delta_p[i]),
            gamma_overlap=float(self.overlap[i]),
        )

    def __iter__(self) -> Iterator[Branch]:
        return (self[i] for i in range(len(self)))

    @property
    def theta(self) -> np.ndarray:
        return np.arccos(np.clip(self.r[:, 2], -1.0, 1.0))

    @property
    def phi(self) -> np.ndarray:
        return np.arctan2(self.r[:, 1], self.r[:, 0])

    @property
    def sin2_theta(self) -> np.ndarray:
        # 1 - rz^2 loses precision near the poles; use the transverse part.
        return self.r[:, 0] ** 2 + self.r[:, 1] ** 2

    def phase_factor(self, mode: str = "full") -> np.ndarray:
        """``exp(2 i Omega_n T)``, or its average over one period of ``omega0 T``."""
        k = np.sqrt(1.0 + self.b_tilde**2)
        if mode == "full":
            return np.exp(2j * self.omega_T)
        if mode == "average":
            a = self.omega0_T
            return (np.exp(1j * k * (a + 2.0 * np.pi)) - np.exp(1j * k * a)) / (2j * np.pi * k)
        if mode == "drop":
            return np.zeros_like(k, dtype=complex)
        raise ValueError(f"unknown oscillation mode {mode!r}; choose from {OSCILLATION_MODES}")


def branches(
    env: DiscreteEnvironment,
    geometry: MeasurementGeometry,
    omega0_T: float = DEFAULT_OMEGA0_T,
    sigma_p: float = 0.03,
) -> BranchTable:
    """Per-branch net field, precession phase, pointer shift and packet overlap."""
    if not sigma_p > 0.0:
        raise ValueError("sigma_p must be positive")
    b = env.fields()
    r = core.field_direction(geometry, b)
    shift = np.asarray(core.pointer_shift(geometry, b), dtype=float)
    return BranchTable(
        b_tilde=b,
        chi=core.chi_factor(geometry, b),
        r=r,
        omega_T=0.5 * omega0_T * np.sqrt(1.0 + b**2),
        delta_p=shift,
        overlap=np.asarray(core.wavepacket_overlap(shift, sigma_p), dtype=float),
        omega0_T=float(omega0_T),
        sigma_p=float(sigma_p),
    )


def _weights(amplitudes, n):
    p = np.abs(np.asarray(amplitudes, dtype=complex).ravel()) ** 2
    if p.size != n:
        raise ValueError(f"{p.size} amplitudes for {n} branches")
    return p


@dataclass(frozen=True)
class SpinDensity:
    """2x2 qubit density matrix in the ``{|0>, |1>}`` basis."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError("spin density must be 2x2")
        object.__setattr__(self, "matrix", m)

    @property
    def p1(self) -> float:
        return float(self.matrix[1, 1].real)

    @property
    def bloch(self) -> np.ndarray:
        m = self.matrix
        return np.array([2.0 * m[1, 0].real, 2.0 * m[1, 0].imag, (m[0, 0] - m[1, 1]).real])

    def is_valid(self, tol: float = 1e-10) -> bool:
        m = self.matrix
        if np.max(np.abs(m - m.conj().T)) > tol or abs(np.trace(m) - 1.0) > tol:
            return False
        ev = np.linalg.eigvalsh(0.5 * (m + m.conj().T))
        return bool(ev.min() >= -tol and ev.max() <= 1.0 + tol)


def spin_density(table: BranchTable, amplitudes, oscillation: str = "full") -> SpinDensity:
    """Reduced qubit state after tracing out pointer and environment."""
    p = _weights(amplitudes, len(table))
    rz = table.r[:, 2]
    c = np.sqrt(0.5 * (1.0 + rz))
    s = np.sqrt(0.5 * (1.0 - rz))
    e = np.exp(1j * table.phi)
    # Columns: components of |r+> and |r-> on |0>, |1>.
    plus = np.stack([c, s * e], axis=-1)
    minus = np.stack([s, -c * e], axis=-1)
    coh = table.overlap * c * s * table.phase_factor(oscillation)

    def outer(a, b):
        return a[:, :, None] * b[:, None, :].conj()

    rho_n = (
        (c**2)[:, None, None] * outer(plus, plus)
        + (s**2)[:, None, None] * outer(minus, minus)
        + coh[:, None, None] * outer(plus, minus)
        + coh.conj()[:, None, None] * outer(minus, plus)
    )
    return SpinDensity(np.einsum("n,nij->ij", p, rho_n))


def disturbance_probability(table: BranchTable, amplitudes, oscillation: str = "full") -> float:
    """Probability of finding the qubit in ``|1>`` after the measurement."""
    p = _weights(amplitudes, len(table))
    cos2 = table.phase_factor(oscillation).real
    terms = table.sin2_theta * (1.0 - table.overlap * cos2)
    return float(0.5 * math.fsum(p * terms))


def pointer_mixture(table: BranchTable, amplitudes) -> PointerMixture:
    """Pointer state as ``2 * 2**N`` Gaussian packets at ``+-delta_p``."""
    p = _weights(amplitudes, len(table))
    rz = table.r[:, 2]
    up = p * 0.5 * (1.0 + rz)
    down = p * 0.5 * (1.0 - rz)
    return PointerMixture(
        weights=np.concatenate([up, down]),
        centers=np.concatenate([table.delta_p, -table.delta_p]),
        widths=np.full(2 * len(table), table.sigma_p),
    )


def phase_averaged_p1(
    env: DiscreteEnvironment,
    geometry: MeasurementGeometry,
    omega0_T: float = DEFAULT_OMEGA0_T,
    sigma_p: float = 0.03,
) -> float:
    """Disturbance probability averaged over one period of ``omega0 T``."""
    table = branches(env, geometry, omega0_T, sigma_p)
    return disturbance_probability(table, env.amplitudes, oscillation="average")
