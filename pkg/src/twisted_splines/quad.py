"""Deterministic Gauss-Legendre quadrature on intervals and rectangles.

The error estimate of a cell is the difference between the order-``m`` and
order-``m/2`` tensor rules. Cells whose estimate exceeds their share of the
tolerance are bisected along the longer side. Breakpoint lines split the
domain before any adaptivity, so piecewise-analytic integrands keep spectral
convergence.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np


class QuadratureError(RuntimeError):
    """Tolerance could not be reached or the integrand produced non-finite values."""


@dataclass(frozen=True)
class Rectangle:
    x_lo: float
    x_hi: float
    y_lo: float
    y_hi: float

    def __post_init__(self):
        if not (self.x_lo <= self.x_hi and self.y_lo <= self.y_hi):
            raise ValueError(f"degenerate rectangle {self}")

    @property
    def area(self) -> float:
        return (self.x_hi - self.x_lo) * (self.y_hi - self.y_lo)

    @property
    def empty(self) -> bool:
        return self.x_hi <= self.x_lo or self.y_hi <= self.y_lo

    def shifted(self, dx: float, dy: float) -> "Rectangle":
        return Rectangle(self.x_lo + dx, self.x_hi + dx, self.y_lo + dy, self.y_hi + dy)

    def scaled(self, s: float) -> "Rectangle":
        return Rectangle(self.x_lo * s, self.x_hi * s, self.y_lo * s, self.y_hi * s)

    def intersect(self, other: "Rectangle") -> "Rectangle":
        x_lo, x_hi = max(self.x_lo, other.x_lo), min(self.x_hi, other.x_hi)
        y_lo, y_hi = max(self.y_lo, other.y_lo), min(self.y_hi, other.y_hi)
        x_hi, y_hi = max(x_lo, x_hi), max(y_lo, y_hi)
        return Rectangle(x_lo, x_hi, y_lo, y_hi)

    def minkowski(self, other: "Rectangle") -> "Rectangle":
        return Rectangle(self.x_lo + other.x_lo, self.x_hi + other.x_hi,
                         self.y_lo + other.y_lo, self.y_hi + other.y_hi)

    def contains(self, x, y):
        return (x >= self.x_lo) & (x <= self.x_hi) & (y >= self.y_lo) & (y <= self.y_hi)


UNIT_SQUARE = Rectangle(0.0, 1.0, 0.0, 1.0)


@dataclass(frozen=True)
class QuadConfig:
    node_count: int = 16
    tolerance: float = 1e-10
    max_subdivisions: int = 12

    def __post_init__(self):
        if self.node_count < 2:
            raise ValueError("node_count must be >= 2")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.max_subdivisions < 0:
            raise ValueError("max_subdivisions must be >= 0")


DEFAULT_CONFIG = QuadConfig()


@dataclass
class QuadResult:
    value: complex
    error_estimate: float
    subdivisions_used: int
    converged: bool = True
    cells: int = field(default=1)


@lru_cache(maxsize=64)
def gauss_legendre(m: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the m-point rule on [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(m)
    return (x + 1.0) / 2.0, w / 2.0


def _coarse(m: int) -> int:
    return max(1, m // 2)


def _split_points(lo: float, hi: float, breaks: Sequence[float] | None) -> list[float]:
    pts = [lo]
    if breaks is not None:
        pts += sorted(b for b in set(float(b) for b in breaks) if lo < b < hi)
    pts.append(hi)
    return pts


def _finite_check(vals):
    if not np.all(np.isfinite(vals)):
        raise QuadratureError("non-finite integrand sample")


# -- 1D ---------------------------------------------------------------------

def _rule_1d(f, a, b, m):
    t, w = gauss_legendre(m)
    x = a + (b - a) * t
    v = np.broadcast_to(np.asarray(f(x), dtype=complex), x.shape)
    _finite_check(v)
    return (b - a) * np.dot(w, v)


def integrate_1d(f: Callable, interval: tuple[float, float], cfg: QuadConfig = DEFAULT_CONFIG,
                 breakpoints: Sequence[float] | None = None) -> QuadResult:
    """Adaptive Gauss-Legendre integral of a vectorized ``f`` over ``interval``."""
    a, b = float(interval[0]), float(interval[1])
    if b < a:
        r = integrate_1d(f, (b, a), cfg, breakpoints)
        return QuadResult(-r.value, r.error_estimate, r.subdivisions_used, r.converged, r.cells)
    if b == a:
        return QuadResult(0j, 0.0, 0)
    pts = _split_points(a, b, breakpoints)
    total_len = b - a
    m, mc = cfg.node_count, _coarse(cfg.node_count)
    stack = [(pts[i], pts[i + 1], 0) for i in range(len(pts) - 1)]
    value, err, depth_max, ok, ncell = 0j, 0.0, 0, True, 0
    while stack:
        lo, hi, depth = stack.pop(0)
        fine = _rule_1d(f, lo, hi, m)
        e = abs(fine - _rule_1d(f, lo, hi, mc))
        share = cfg.tolerance * (hi - lo) / total_len
        if e <= share or depth >= cfg.max_subdivisions:
            if e > share:
                ok = False
            value += fine
            err += e
            ncell += 1
            depth_max = max(depth_max, depth)
        else:
            mid = 0.5 * (lo + hi)
            stack[0:0] = [(lo, mid, depth + 1), (mid, hi, depth + 1)]
    return QuadResult(complex(value), float(err), depth_max, ok, ncell)


# -- 2D ---------------------------------------------------------------------

def _rule_2d(f, r: Rectangle, m):
    t, w = gauss_legendre(m)
    x = r.x_lo + (r.x_hi - r.x_lo) * t
    y = r.y_lo + (r.y_hi - r.y_lo) * t
    X, Y = np.meshgrid(x, y, indexing="ij")
    v = np.broadcast_to(np.asarray(f(X, Y), dtype=complex), X.shape)
    _finite_check(v)
    return r.area * np.einsum("i,j,ij->", w, w, v)


def integrate_2d(f: Callable, rect: Rectangle, cfg: QuadConfig = DEFAULT_CONFIG,
                 breaks_x: Sequence[float] | None = None,
                 breaks_y: Sequence[float] | None = None) -> QuadResult:
    """Adaptive tensor Gauss-Legendre integral of ``f(x, y)`` over ``rect``.

    ``f`` must accept broadcast numpy arrays. If ``f`` carries ``breaks_x`` /
    ``breaks_y`` attributes (as :class:`PlanarFunction` does) they are used
    unless explicit breakpoints are given.

    Returns
    -------
    QuadResult
        ``converged`` is False when a cell hit ``max_subdivisions`` with its
        estimate still above its tolerance share.
    """
    if rect.empty:
        return QuadResult(0j, 0.0, 0)
    if breaks_x is None:
        breaks_x = getattr(f, "breaks_x", None)
    if breaks_y is None:
        breaks_y = getattr(f, "breaks_y", None)
    px = _split_points(rect.x_lo, rect.x_hi, breaks_x)
    py = _split_points(rect.y_lo, rect.y_hi, breaks_y)
    total = rect.area
    m, mc = cfg.node_count, _coarse(cfg.node_count)
    stack = [(Rectangle(px[i], px[i + 1], py[j], py[j + 1]), 0)
             for i in range(len(px) - 1) for j in range(len(py) - 1)]
    value, err, depth_max, ok, ncell = 0j, 0.0, 0, True, 0
    while stack:
        r, depth = stack.pop(0)
        fine = _rule_2d(f, r, m)
        e = abs(fine - _rule_2d(f, r, mc))
        share = cfg.tolerance * r.area / total
        if e <= share or depth >= cfg.max_subdivisions:
            if e > share:
                ok = False
            value += fine
            err += e
            ncell += 1
            depth_max = max(depth_max, depth)
        else:
            if r.x_hi - r.x_lo >= r.y_hi - r.y_lo:
                mid = 0.5 * (r.x_lo + r.x_hi)
                kids = [Rectangle(r.x_lo, mid, r.y_lo, r.y_hi), Rectangle(mid, r.x_hi, r.y_lo, r.y_hi)]
            else:
                mid = 0.5 * (r.y_lo + r.y_hi)
                kids = [Rectangle(r.x_lo, r.x_hi, r.y_lo, mid), Rectangle(r.x_lo, r.x_hi, mid, r.y_hi)]
            stack[0:0] = [(k, depth + 1) for k in kids]
    return QuadResult(complex(value), float(err), depth_max, ok, ncell)


def require(result: QuadResult) -> complex:
    """Value of a result, raising :class:`QuadratureError` if not converged."""
    if not result.converged:
        raise QuadratureError(f"tolerance not reached (estimate {result.error_estimate:.3e})")
    return result.value


def product_rule_cells(f: Callable, x_lo, x_hi, y_lo, y_hi, m: int):
    """Fixed-order tensor rule over many rectangles at once.

    Bounds are arrays of shape ``(N,)``. ``f`` receives arrays of shape
    ``(N, m, m)`` and the node coordinates of each cell. Returns the order-``m``
    values and the order-``m``/order-``m/2`` discrepancy, both of shape ``(N,)``.
    """
    x_lo, x_hi = np.asarray(x_lo, float), np.asarray(x_hi, float)
    y_lo, y_hi = np.asarray(y_lo, float), np.asarray(y_hi, float)
    area = (x_hi - x_lo) * (y_hi - y_lo)

    def run(order):
        t, w = gauss_legendre(order)
        X = x_lo[:, None, None] + (x_hi - x_lo)[:, None, None] * t[None, :, None]
        Y = y_lo[:, None, None] + (y_hi - y_lo)[:, None, None] * t[None, None, :]
        v = np.broadcast_to(np.asarray(f(X, Y), dtype=complex), (area.size, order, order))
        _finite_check(v)
        return area * np.einsum("i,j,nij->n", w, w, v)

    fine = run(m)
    return fine, np.abs(fine - run(_coarse(m)))
