"""CSV, key=value config and SVG plumbing for the command-line front end."""

from __future__ import annotations

import csv
import io
import math
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigError


def format_number(x) -> str:
    """Locale-free, round-trippable text for a number."""
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def _default_mode() -> int:
    # mkstemp creates 0600 files; give outputs the usual umask-derived mode.
    mask = os.umask(0)
    os.umask(mask)
    return 0o666 & ~mask


def atomic_write_text(path, text: str):
    """Write ``text`` to a temporary file next to ``path``, then rename it into place."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.chmod(tmp, _default_mode())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([v if isinstance(v, str) else format_number(v) for v in row])
    return buf.getvalue()


def write_csv(path, header, rows):
    atomic_write_text(path, csv_text(header, rows))


def read_csv(path) -> tuple[list[str], list[list[str]]]:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        return header, [row for row in reader]


def read_numeric_csv(path) -> tuple[list[str], np.ndarray]:
    header, rows = read_csv(path)
    return header, np.array([[float(v) for v in row] for row in rows], dtype=float).reshape(
        len(rows), len(header)
    )


def parse_key_values(text: str, source: str = "<config>") -> dict[str, str]:
    """Parse flat ``key = value`` lines; ``#`` starts a comment.

    Raises :class:`ConfigError` naming the line for malformed or duplicate
    entries.
    """
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected key=value in {source}", line=lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigError(f"empty key in {source}", line=lineno)
        if key in out:
            raise ConfigError(f"duplicate key in {source}", key=key, line=lineno)
        if not value:
            raise ConfigError(f"empty value in {source}", key=key, line=lineno)
        out[key] = value
    return out


def read_key_values(path) -> dict[str, str]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    return parse_key_values(text, str(path))


@dataclass
class CurveSet:
    """Named series sampled on a shared, strictly increasing x grid."""

    name: str
    x: np.ndarray
    series: dict[str, np.ndarray]
    x_label: str = "x"
    y_label: str = "y"
    title: str = ""
    meta: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        if self.x.ndim != 1 or self.x.size < 2:
            raise ValueError("x must be a 1-D grid with at least two points")
        if np.any(np.diff(self.x) <= 0.0):
            raise ValueError(f"{self.name}: x must be strictly increasing")
        clean = {}
        for label, y in self.series.items():
            y = np.asarray(y, dtype=float)
            if y.shape != self.x.shape:
                raise ValueError(f"{self.name}: series {label!r} has shape {y.shape}")
            if not np.all(np.isfinite(y)):
                raise ValueError(f"{self.name}: series {label!r} has non-finite values")
            clean[label] = y
        if not np.all(np.isfinite(self.x)):
            raise ValueError(f"{self.name}: x has non-finite values")
        self.series = clean

    @property
    def header(self) -> list[str]:
        return ["x", *self.series]

    def rows(self):
        cols = [self.x, *self.series.values()]
        return zip(*cols)

    def to_csv(self) -> str:
        return csv_text(self.header, self.rows())

    @classmethod
    def from_csv(cls, path, name: str | None = None) -> "CurveSet":
        header, data = read_numeric_csv(path)
        if not header or header[0] != "x":
            raise ValueError(f"{path}: first column must be x")
        return cls(
            name=name or Path(path).stem,
            x=data[:, 0],
            series={h: data[:, i] for i, h in enumerate(header[1:], start=1)},
        )

    def to_svg(self, width: int = 640, height: int = 400) -> str:
        return render_svg(self, width, height)


_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf")


def _ticks(lo, hi, n=5):
    return [lo + (hi - lo) * i / (n - 1) for i in range(n)]


def _esc(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def render_svg(curves: CurveSet, width: int = 640, height: int = 400) -> str:
    """Minimal line plot: frame, ticks, polylines and a legend."""
    left, right, top, bottom = 70, 20, 30, 50
    pw, ph = width - left - right, height - top - bottom
    x0, x1 = float(curves.x[0]), float(curves.x[-1])
    ys = np.concatenate(list(curves.series.values())) if curves.series else np.zeros(1)
    y0, y1 = float(ys.min()), float(ys.max())
    if y1 - y0 < 1e-300:
        y0, y1 = y0 - 0.5, y1 + 0.5
    pad = 0.05 * (y1 - y0)
    y0, y1 = y0 - pad, y1 + pad

    def sx(x):
        return left + (x - x0) / (x1 - x0) * pw

    def sy(y):
        return top + (1.0 - (y - y0) / (y1 - y0)) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">',
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    if curves.title:
        out.append(f'<text x="{width / 2:.1f}" y="18" text-anchor="middle">{_esc(curves.title)}</text>')
    for t in _ticks(x0, x1):
        out.append(f'<line x1="{sx(t):.2f}" y1="{top + ph}" x2="{sx(t):.2f}" y2="{top + ph + 4}" stroke="black"/>')
        out.append(f'<text x="{sx(t):.2f}" y="{top + ph + 16}" text-anchor="middle">{t:.3g}</text>')
    for t in _ticks(y0, y1):
        out.append(f'<line x1="{left - 4}" y1="{sy(t):.2f}" x2="{left}" y2="{sy(t):.2f}" stroke="black"/>')
        out.append(f'<text x="{left - 6}" y="{sy(t) + 4:.2f}" text-anchor="end">{t:.3g}</text>')
    out.append(
        f'<text x="{left + pw / 2:.1f}" y="{height - 10}" text-anchor="middle">{_esc(curves.x_label)}</text>'
    )
    out.append(
        f'<text x="16" y="{top + ph / 2:.1f}" text-anchor="middle" '
        f'transform="rotate(-90 16 {top + ph / 2:.1f})">{_esc(curves.y_label)}</text>'
    )
    for i, (label, y) in enumerate(curves.series.items()):
        color = _PALETTE[i % len(_PALETTE)]
        pts = " ".join(f"{sx(a):.2f},{sy(b):.2f}" for a, b in zip(curves.x, y))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        ly = top + 14 + 14 * i
        out.append(f'<line x1="{left + pw - 120}" y1="{ly - 4}" x2="{left + pw - 100}" y2="{ly - 4}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{left + pw - 96}" y="{ly}">{_esc(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_curve_set(curves: CurveSet, out_dir, fmt: str = "csv") -> list[Path]:
    out_dir = Path(out_dir)
    written = []
    if fmt in ("csv", "both"):
        p = out_dir / f"{curves.name}.csv"
        atomic_write_text(p, curves.to_csv())
        written.append(p)
    if fmt in ("svg", "both"):
        p = out_dir / f"{curves.name}.svg"
        atomic_write_text(p, curves.to_svg())
        written.append(p)
    if fmt not in ("csv", "svg", "both"):
        raise ValueError(f"unknown format {fmt!r}")
    return written


def finite_or_blank(x) -> str:
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return ""
    return format_number(x)
