"""Twisted translations, dilations and twisted convolution of planar functions."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from .quad import DEFAULT_CONFIG, QuadConfig, Rectangle, integrate_2d, require

PI = np.pi


class LatticePoint(NamedTuple):
    k: int
    l: int

    def __neg__(self):
        return LatticePoint(-self.k, -self.l)

    def __add__(self, other):
        return LatticePoint(self.k + other[0], self.l + other[1])

    def __sub__(self, other):
        return LatticePoint(self.k - other[0], self.l - other[1])


def _as_point(p) -> LatticePoint:
    return p if isinstance(p, LatticePoint) else LatticePoint(*p)


@dataclass(frozen=True)
class PlanarFunction:
    """Complex function of two real variables with a declared support.

    ``evaluator`` receives broadcast float arrays and returns complex values.
    Calls are zeroed outside ``support`` so the invariant holds even for
    sloppy evaluators. ``breaks_x``/``breaks_y`` list lines across which the
    function may fail to be analytic; quadrature splits along them.
    """
    evaluator: Callable
    support: Rectangle
    breaks_x: tuple = field(default=())
    breaks_y: tuple = field(default=())
    name: str = ""

    def __call__(self, x, y):
        xa = np.asarray(x, dtype=float)
        ya = np.asarray(y, dtype=float)
        xa, ya = np.broadcast_arrays(xa, ya)
        out = np.zeros(xa.shape, dtype=complex)
        inside = self.support.contains(xa, ya)
        if inside.any():
            out[inside] = self.evaluator(xa[inside], ya[inside])
        if np.ndim(x) == 0 and np.ndim(y) == 0:
            return complex(out)
        return out


def _unit_breaks(rect: Rectangle):
    bx = tuple(float(t) for t in range(int(np.floor(rect.x_lo)), int(np.ceil(rect.x_hi)) + 1))
    by = tuple(float(t) for t in range(int(np.floor(rect.y_lo)), int(np.ceil(rect.y_hi)) + 1))
    return bx, by


def twisted_translate(f: PlanarFunction, p) -> PlanarFunction:
    """(x, y) -> exp(pi i (l x - k y)) f(x - k, y - l)."""
    k, l = _as_point(p)
    if k == 0 and l == 0:
        return f

    def ev(x, y):
        return np.exp(1j * PI * (l * x - k * y)) * f(x - k, y - l)

    return PlanarFunction(ev, f.support.shifted(k, l),
                          tuple(b + k for b in f.breaks_x), tuple(b + l for b in f.breaks_y),
                          name=f"T{(k, l)}{f.name}")


def compose_translations(p1, p2) -> tuple[complex, LatticePoint]:
    """Phase and point with T_{p1} T_{p2} = phase * T_{p1 + p2}."""
    p1, p2 = _as_point(p1), _as_point(p2)
    det = p1.k * p2.l - p1.l * p2.k
    phase = complex(-1.0 if det % 2 else 1.0)
    return phase, p1 + p2


def lambda_twisted_translate(f: PlanarFunction, lam: float, p) -> PlanarFunction:
    """(x, y) -> exp(pi i lam (l x - k y)) f(x - k, y - l).

    The shift may be real-valued; integer shifts are the lattice case.
    """
    if lam == 0:
        raise ValueError("lambda must be nonzero")
    k, l = float(p[0]), float(p[1])

    def ev(x, y):
        return np.exp(1j * PI * lam * (l * x - k * y)) * f(x - k, y - l)

    return PlanarFunction(ev, f.support.shifted(k, l),
                          tuple(b + k for b in f.breaks_x), tuple(b + l for b in f.breaks_y),
                          name=f"T[{lam}]{(k, l)}{f.name}")


def dilate(f: PlanarFunction, a: float) -> PlanarFunction:
    """D_a f(x, y) = a f(a x, a y), unitary on L2 of the plane."""
    if not a > 0:
        raise ValueError("dilation factor must be positive")

    def ev(x, y):
        return a * f(a * x, a * y)

    return PlanarFunction(ev, f.support.scaled(1.0 / a),
                          tuple(b / a for b in f.breaks_x), tuple(b / a for b in f.breaks_y),
                          name=f"D{a}{f.name}")


def scale(f: PlanarFunction, c: complex) -> PlanarFunction:
    return PlanarFunction(lambda x, y: c * f(x, y), f.support, f.breaks_x, f.breaks_y, f.name)


def linear_combination(terms) -> PlanarFunction:
    """Sum of ``c * f`` over ``(c, f)`` pairs; support is the bounding box."""
    terms = [(complex(c), f) for c, f in terms]
    if not terms:
        raise ValueError("empty combination")
    sup = terms[0][1].support
    bx, by = set(), set()
    for _, f in terms:
        s = f.support
        sup = Rectangle(min(sup.x_lo, s.x_lo), max(sup.x_hi, s.x_hi),
                        min(sup.y_lo, s.y_lo), max(sup.y_hi, s.y_hi))
        bx |= set(f.breaks_x) | {s.x_lo, s.x_hi}
        by |= set(f.breaks_y) | {s.y_lo, s.y_hi}

    def ev(x, y):
        out = np.zeros(np.shape(x), dtype=complex)
        for c, f in terms:
            out = out + c * f(x, y)
        return out

    return PlanarFunction(ev, sup, tuple(sorted(bx)), tuple(sorted(by)))


def inner(f: PlanarFunction, g: PlanarFunction, cfg: QuadConfig = DEFAULT_CONFIG) -> complex:
    """<f, g> = integral of f conj(g) over the common support."""
    rect = f.support.intersect(g.support)
    if rect.empty:
        return 0j
    bx = set(f.breaks_x) | set(g.breaks_x) | {f.support.x_lo, f.support.x_hi, g.support.x_lo, g.support.x_hi}
    by = set(f.breaks_y) | set(g.breaks_y) | {f.support.y_lo, f.support.y_hi, g.support.y_lo, g.support.y_hi}
    res = integrate_2d(lambda x, y: f(x, y) * np.conj(g(x, y)), rect, cfg, sorted(bx), sorted(by))
    return require(res)


def norm(f: PlanarFunction, cfg: QuadConfig = DEFAULT_CONFIG) -> float:
    return float(np.sqrt(max(inner(f, f, cfg).real, 0.0)))


def twisted_convolve(f: PlanarFunction, g: PlanarFunction, cfg: QuadConfig = DEFAULT_CONFIG,
                     memoize: bool = False) -> PlanarFunction:
    """Lazy twisted convolution (f x g)(x, y).

    The integral of f(x-u, y-v) g(u, v) exp(pi i (u y - v x)) over u, v is
    evaluated per point on supp g intersected with (x, y) - supp f, split
    along the breakpoints of both factors.
    """
    cache: dict = {}
    fs, gs = f.support, g.support
    fbx = set(f.breaks_x) | {fs.x_lo, fs.x_hi}
    fby = set(f.breaks_y) | {fs.y_lo, fs.y_hi}
    gbx = set(g.breaks_x) | {gs.x_lo, gs.x_hi}
    gby = set(g.breaks_y) | {gs.y_lo, gs.y_hi}

    def point(x, y):
        key = (x, y)
        if memoize and key in cache:
            return cache[key]
        rect = gs.intersect(Rectangle(x - fs.x_hi, x - fs.x_lo, y - fs.y_hi, y - fs.y_lo))
        if rect.empty:
            val = 0j
        else:
            bu = sorted(gbx | {x - b for b in fbx})
            bv = sorted(gby | {y - b for b in fby})

            def integrand(u, v):
                return f(x - u, y - v) * g(u, v) * np.exp(1j * PI * (u * y - v * x))

            val = require(integrate_2d(integrand, rect, cfg, bu, bv))
        if memoize:
            cache[key] = val
        return val

    def ev(x, y):
        out = np.empty(np.shape(x), dtype=complex)
        for idx in np.ndindex(out.shape):
            out[idx] = point(float(x[idx]), float(y[idx]))
        return out

    sup = fs.minkowski(gs)
    bx = tuple(sorted({a + b for a in fbx for b in gbx}))
    by = tuple(sorted({a + b for a in fby for b in gby}))
    return PlanarFunction(ev, sup, bx, by, name=f"({f.name}x{g.name})")
