"""Cross-engine validation runs and parameter sweeps."""

from __future__ import annotations

import ast
import itertools
import math
import operator
from dataclasses import dataclass

import numpy as np

from . import continuum, exact
from .core import MeasurementGeometry, disturbance_bound
from .errors import ConfigError, EmptyGrid, GridTooLarge

MAX_GRID = 10**6
CROSS_CHECK_TOL = 0.01

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}


def parse_number(text: str) -> float:
    """Evaluate a numeric literal or simple arithmetic in ``pi`` (e.g. ``pi/4``)."""

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        raise ValueError(f"unsupported expression {text!r}")

    try:
        return ev(ast.parse(text.strip(), mode="eval"))
    except (SyntaxError, ZeroDivisionError, TypeError):
        raise ValueError(f"not a number: {text!r}") from None


def parse_axis(text: str) -> np.ndarray:
    """``a`` , ``a,b,c`` (explicit list) or ``start:stop:num`` (inclusive linspace)."""
    text = text.strip()
    if not text:
        return np.array([])
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"range must be start:stop:num, got {text!r}")
        num = int(parse_number(parts[2]))
        if num < 0:
            raise ValueError("range count must be non-negative")
        return np.linspace(parse_number(parts[0]), parse_number(parts[1]), num)
    return np.array([parse_number(p) for p in text.split(",") if p.strip()])


@dataclass(frozen=True)
class CrossCheckRow:
    s_d: float
    exact: float
    exact_sem: float
    continuum: float

    @property
    def difference(self) -> float:
        return abs(self.exact - self.continuum)

    def passes(self, tol: float = CROSS_CHECK_TOL) -> bool:
        return self.difference <= tol


def cross_check(
    n_spins: int,
    s_d_values,
    seed: int = 0,
    draws: int = 20,
    geometry: MeasurementGeometry | None = None,
    omega0_T: float = exact.DEFAULT_OMEGA0_T,
    sigma_p: float = 0.03,
    rescale: bool = True,
    cap: int = exact.DEFAULT_CAP,
) -> list[CrossCheckRow]:
    """Phase-averaged exact flip probability versus the continuum result.

    For each ``s_d``, ``draws`` coupling sets are drawn with matched spread and
    the exact result is averaged over them.
    """
    if geometry is None:
        geometry = MeasurementGeometry(math.pi / 2, 0.0, 0.1)
    if n_spins > cap:
        exact._check_cap(n_spins, cap)
    if draws < 1:
        raise ValueError("draws must be at least 1")
    s_d_values = [float(s) for s in s_d_values]
    streams = np.random.SeedSequence(seed).spawn(len(s_d_values))
    rows = []
    for s_d, seq in zip(s_d_values, streams):
        rng = np.random.default_rng(seq)
        vals = []
        for _ in range(draws):
            g = exact.draw_couplings(n_spins, s_d, rng, rescale=rescale)
            env = exact.DiscreteEnvironment.uniform(g, cap)
            vals.append(exact.phase_averaged_p1(env, geometry, omega0_T, sigma_p))
        vals = np.asarray(vals)
        sem = float(vals.std(ddof=1) / math.sqrt(draws)) if draws > 1 else 0.0
        rows.append(
            CrossCheckRow(
                s_d=s_d,
                exact=math.fsum(vals) / draws,
                exact_sem=sem,
                continuum=continuum.p1_weak(s_d, geometry),
            )
        )
    return rows


SWEEP_AXES = ("s_d", "gamma", "eta", "xi", "sigma_p")
SWEEP_DEFAULTS = {"s_d": 0.0, "gamma": math.pi / 2, "eta": 0.0, "xi": 0.1, "sigma_p": 0.03}


def _p1(s_d, gamma, eta, xi, sigma_p):
    return continuum.p1_weak(s_d, MeasurementGeometry(gamma, eta, xi))


def _variance(s_d, gamma, eta, xi, sigma_p):
    return continuum.pointer_moments(s_d, MeasurementGeometry(gamma, eta, xi), sigma_p).variance


def _p_plus(s_d, gamma, eta, xi, sigma_p):
    return continuum.zaxis_success_probability(s_d)


def _bound(s_d, gamma, eta, xi, sigma_p):
    return float(disturbance_bound(xi, gamma))


SWEEP_QUANTITIES = {"p1": _p1, "variance": _variance, "p_plus": _p_plus, "bound": _bound}


def sweep_from_mapping(values: dict[str, str]) -> tuple[str, dict[str, np.ndarray]]:
    """Validate a sweep spec. Returns ``(quantity, axes)``."""
    unknown = sorted(set(values) - {"quantity", *SWEEP_AXES})
    if unknown:
        raise ConfigError("unknown sweep key", key=unknown[0])
    quantity = values.get("quantity")
    if quantity is None:
        raise ConfigError("missing required parameter", key="quantity")
    if quantity not in SWEEP_QUANTITIES:
        raise ConfigError(
            f"unknown quantity {quantity!r}; choose from {sorted(SWEEP_QUANTITIES)}", key="quantity"
        )
    axes = {}
    for name in SWEEP_AXES:
        if name in values:
            try:
                axes[name] = parse_axis(values[name])
            except ValueError as exc:
                raise ConfigError(str(exc), key=name) from None
        else:
            axes[name] = np.array([SWEEP_DEFAULTS[name]])
    return quantity, axes


def sweep(quantity: str, axes: dict[str, np.ndarray]):
    """Evaluate ``quantity`` over the product grid, first axis slowest.

    Returns ``(header, rows)``.
    """
    if quantity not in SWEEP_QUANTITIES:
        raise ValueError(f"unknown quantity {quantity!r}")
    full = {k: np.asarray(axes.get(k, [SWEEP_DEFAULTS[k]]), dtype=float) for k in SWEEP_AXES}
    sizes = [v.size for v in full.values()]
    if any(s == 0 for s in sizes):
        empty = [k for k, v in full.items() if v.size == 0]
        raise EmptyGrid(f"axis {empty[0]!r} is empty")
    total = math.prod(sizes)
    if total > MAX_GRID:
        raise GridTooLarge(f"{total} grid points exceeds the limit of {MAX_GRID}")
    fn = SWEEP_QUANTITIES[quantity]
    rows = []
    for point in itertools.product(*full.values()):
        rows.append((*point, fn(*point)))
    return [*SWEEP_AXES, quantity], rows
