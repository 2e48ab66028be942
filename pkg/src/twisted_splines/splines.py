"""Twisted B-splines phi_n on the plane and classical cardinal B-splines.

phi_1 is the indicator of [0,1)^2 and phi_{n+1} = phi_n x phi_1 (twisted
convolution), i.e.

    phi_{n+1}(x, y) = int_0^1 int_0^1 phi_n(x-u, y-v) exp(pi i (u y - v x)) dv du.

phi_2 has a real closed form. Writing it through the hat function
B2(t) = min(t, 2 - t) on [0, 2] gives

    phi_2(x, y) = B2(x) B2(y) sinc(x B2(y) / 2) sinc(y B2(x) / 2),

with the normalized sinc. This is the four-region cosine formula rewritten
through cos a - cos b = 2 sin((a+b)/2) sin((b-a)/2) and has no removable
singularities.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb, factorial
import threading

import numpy as np

from . import specfun
from .quad import (DEFAULT_CONFIG, QuadConfig, QuadratureError, Rectangle,
                   gauss_legendre, product_rule_cells)
from .twistops import PlanarFunction

PI = np.pi
_CHUNK = 2048


def _ret(out, x, y):
    if np.ndim(x) == 0 and np.ndim(y) == 0:
        return complex(out.reshape(()))
    return out


def phi1(x, y):
    """Indicator of [0,1)^2 as a complex value."""
    xa, ya = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
    out = ((xa >= 0) & (xa < 1) & (ya >= 0) & (ya < 1)).astype(complex)
    return _ret(out, x, y)


def hat(t):
    """Hat function B2(t) = max(0, 1 - |t - 1|)."""
    return np.maximum(0.0, 1.0 - np.abs(np.asarray(t, float) - 1.0))


def phi2_closed(x, y):
    """Closed form of phi_2 (real-valued, returned as complex)."""
    xa, ya = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
    bx, by = hat(xa), hat(ya)
    val = bx * by * np.sinc(xa * by / 2) * np.sinc(ya * bx / 2)
    return _ret(val.astype(complex), x, y)


def _phi_rec(n: int, x: np.ndarray, y: np.ndarray, m: int):
    """phi_n on flat arrays; returns (values, error estimates)."""
    if n == 1:
        return phi1(x, y), np.zeros(x.shape)
    if n == 2:
        return phi2_closed(x, y), np.zeros(x.shape)
    vals = np.zeros(x.shape, dtype=complex)
    errs = np.zeros(x.shape)
    inside = (x > 0) & (x < n) & (y > 0) & (y < n)
    idx = np.nonzero(inside)[0]
    for start in range(0, idx.size, _CHUNK):
        sel = idx[start:start + _CHUNK]
        xs, ys = x[sel], y[sel]
        fx, fy = xs - np.floor(xs), ys - np.floor(ys)
        # four cells per point, split where x - u or y - v crosses an integer
        zeros, ones = np.zeros_like(fx), np.ones_like(fx)
        ul = np.concatenate([zeros, zeros, fx, fx])
        uh = np.concatenate([fx, fx, ones, ones])
        vl = np.concatenate([zeros, fy, zeros, fy])
        vh = np.concatenate([fy, ones, fy, ones])
        px = np.tile(xs, 4)
        py = np.tile(ys, 4)

        def integrand(U, V):
            U, V = np.broadcast_arrays(U, V)
            X = px[:, None, None]
            Y = py[:, None, None]
            inner_vals, _ = _phi_rec(n - 1, (X - U).ravel(), (Y - V).ravel(), m)
            return inner_vals.reshape(U.shape) * np.exp(1j * PI * (U * Y - V * X))

        cell_val, cell_err = product_rule_cells(integrand, ul, uh, vl, vh, m)
        k = sel.size
        vals[sel] = cell_val.reshape(4, k).sum(axis=0)
        errs[sel] = cell_err.reshape(4, k).sum(axis=0)
    return vals, errs


def phi_n_with_error(n: int, x, y, cfg: QuadConfig = DEFAULT_CONFIG):
    """phi_n and a per-point error estimate (zero for the closed forms)."""
    if n < 1:
        raise ValueError("order must be >= 1")
    xa, ya = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
    shape = xa.shape
    v, e = _phi_rec(n, xa.ravel(), ya.ravel(), cfg.node_count)
    return v.reshape(shape), e.reshape(shape)


def phi_n(n: int, x, y, cfg: QuadConfig = DEFAULT_CONFIG):
    """Twisted B-spline of order n.

    Orders 1 and 2 use the closed forms. Higher orders run the twisted
    convolution recursion down to phi_2, with each unit-square integral split
    into the (at most four) cells on which the integrand is analytic.

    Raises
    ------
    QuadratureError
        If some point's estimate stays above ``cfg.tolerance`` after one
        retry with doubled node count.
    """
    v, e = phi_n_with_error(n, x, y, cfg)
    bad = e > cfg.tolerance
    if bad.any():
        xa, ya = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
        v2, e2 = _phi_rec(n, xa[bad], ya[bad], 2 * cfg.node_count)
        v[bad] = v2
        if np.any(e2 > cfg.tolerance):
            raise QuadratureError(f"phi_{n}: estimate {e2.max():.3e} above tolerance")
    return _ret(v, x, y)


def spline_support(n: int) -> Rectangle:
    return Rectangle(0.0, float(n), 0.0, float(n))


def _is_dyadic(v: float, bits: int = 20) -> bool:
    s = v * (1 << bits)
    return np.isfinite(s) and float(s).is_integer()


class TwistedSpline:
    """phi_n with memoization of dyadic grid points.

    Parameters
    ----------
    order : int
        n >= 1.
    cfg : QuadConfig
        Quadrature settings for the recursion (n >= 3).
    """

    def __init__(self, order: int, cfg: QuadConfig = DEFAULT_CONFIG):
        if order < 1:
            raise ValueError("order must be >= 1")
        self.order = order
        self.cfg = cfg
        self.strategy = "closed_form" if order <= 2 else "recursion"
        self._cache: dict = {}
        self._lock = threading.Lock()

    def __call__(self, x, y):
        xa, ya = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
        fx, fy = xa.ravel(), ya.ravel()
        out = np.empty(fx.shape, dtype=complex)
        miss = []
        with self._lock:
            for i, (a, b) in enumerate(zip(fx, fy)):
                key = (self.order, float(a), float(b))
                if key in self._cache:
                    out[i] = self._cache[key]
                else:
                    miss.append(i)
        if miss:
            miss = np.array(miss)
            vals = np.atleast_1d(phi_n(self.order, fx[miss], fy[miss], self.cfg))
            out[miss] = vals
            with self._lock:
                for i, v in zip(miss, vals):
                    a, b = float(fx[i]), float(fy[i])
                    if _is_dyadic(a) and _is_dyadic(b):
                        self._cache[(self.order, a, b)] = complex(v)
        return _ret(out.reshape(xa.shape), x, y)

    @property
    def cache_size(self) -> int:
        return len(self._cache)

    def as_planar(self) -> PlanarFunction:
        n = self.order
        grid = tuple(float(t) for t in range(n + 1))
        return PlanarFunction(lambda x, y: self(x, y), spline_support(n), grid, grid, name=f"phi{n}")


def spline_function(n: int, cfg: QuadConfig = DEFAULT_CONFIG) -> PlanarFunction:
    """phi_n as a :class:`PlanarFunction` with unit-grid breakpoints."""
    grid = tuple(float(t) for t in range(n + 1))
    if n == 1:
        ev = phi1
    elif n == 2:
        ev = phi2_closed
    else:
        def ev(x, y):
            return phi_n(n, x, y, cfg)
    return PlanarFunction(ev, spline_support(n), grid, grid, name=f"phi{n}")


# -- moments ------------------------------------------------------------------

def l1(u, v):
    """L_1(u, v) = (e^{pi i u} - 1)(e^{-pi i v} - 1)/(pi^2 u v).

    Evaluated as exp(pi i (u - v)/2) sinc(u/2) sinc(v/2).
    """
    u = np.asarray(u, float)
    v = np.asarray(v, float)
    return np.exp(0.5j * PI * (u - v)) * np.sinc(u / 2) * np.sinc(v / 2)


def _l_rec(k: int, u: np.ndarray, v: np.ndarray, m: int) -> np.ndarray:
    if k == 1:
        return l1(u, v)
    t, w = gauss_legendre(m)
    P, Q = np.meshgrid(t, t, indexing="ij")
    W = np.outer(w, w)
    out = np.empty(u.shape, dtype=complex)
    step = max(1, 200000 // (m * m))
    for s in range(0, u.size, step):
        uu = u[s:s + step, None, None]
        vv = v[s:s + step, None, None]
        inner_vals = _l_rec(k - 1, (uu + P).ravel(), (vv + Q).ravel(), m).reshape(-1, m, m)
        out[s:s + step] = np.einsum("ij,nij->n", W, inner_vals * np.exp(1j * PI * (uu * Q - vv * P)))
    return out


def l_function(k: int, u, v, cfg: QuadConfig = DEFAULT_CONFIG):
    """L_k(u, v) by the recursion L_{k+1}(u,v) = int_Q L_k(p+u, q+v) e^{pi i (u q - v p)}."""
    if k < 1:
        raise ValueError("k must be >= 1")
    ua, va = np.broadcast_arrays(np.asarray(u, float), np.asarray(v, float))
    out = _l_rec(k, ua.ravel(), va.ravel(), cfg.node_count).reshape(ua.shape)
    return _ret(out, u, v)


def l2_closed(u, v):
    """L_2(u, v) in closed form through F(x) = int_0^x (e^{is} - 1)/s ds.

    L_2 = A B / pi^2 with
    A = F(pi(1-v)(u+1)) - F(pi(1-v)u) - F(-pi v(u+1)) + F(-pi v u) and
    B = F(pi(u-1)(v+1)) - F(pi(u-1)v) - F(pi u(v+1)) + F(pi u v);
    the unimodular prefactors exp(+-pi i u v) of A and B cancel.
    """
    F = specfun.ein_imag
    u = np.asarray(u, float)
    v = np.asarray(v, float)
    a = F(PI * (1 - v) * (u + 1)) - F(PI * (1 - v) * u) - F(-PI * v * (u + 1)) + F(-PI * v * u)
    b = F(PI * (u - 1) * (v + 1)) - F(PI * (u - 1) * v) - F(PI * u * (v + 1)) + F(PI * u * v)
    return a * b / PI ** 2


def l2_ei(u: float, v: float) -> complex:
    """L_2(u, v) through Ei(ix), valid when every Ei argument is nonzero."""
    E = specfun.ei_imag
    a = E(-PI * u * v) - E(-PI * u * (v - 1)) - E(-PI * (u + 1) * v) + E(-PI * (u + 1) * (v - 1))
    b = E(PI * u * v) - E(PI * u * (v + 1)) - E(PI * (u - 1) * v) + E(PI * (u - 1) * (v + 1))
    return complex(a * b / PI ** 2)


@dataclass
class MomentFunctional:
    """Total integral of phi_n together with the sampled L_{n-1} table."""
    order: int
    value: complex
    error_estimate: float
    l_table: np.ndarray | None = None


def moment_closed_phi2() -> complex:
    c = specfun.trig_integrals(PI)
    z = -specfun.EULER_GAMMA - np.log(PI) + c.ci + 1j * c.si
    return complex(z * np.conj(z) / PI ** 2)


def moment_functional(n: int, cfg: QuadConfig = DEFAULT_CONFIG) -> MomentFunctional:
    """Integral of phi_n over the plane via the L-recursion."""
    if n < 1:
        raise ValueError("order must be >= 1")
    if n == 1:
        return MomentFunctional(1, 1.0 + 0j, 0.0)
    if n == 2:
        return MomentFunctional(2, moment_closed_phi2(), 0.0)

    def run(m):
        t, w = gauss_legendre(m)
        U, V = np.meshgrid(t, t, indexing="ij")
        tab = _l_rec(n - 1, U.ravel(), V.ravel(), m).reshape(m, m)
        return np.einsum("i,j,ij->", w, w, tab), tab

    val, tab = run(cfg.node_count)
    coarse, _ = run(max(2, cfg.node_count // 2))
    err = abs(val - coarse)
    if err > max(cfg.tolerance, 1e-8):
        raise QuadratureError(f"moment({n}) estimate {err:.3e} above tolerance")
    return MomentFunctional(n, complex(val), float(err), tab)


def moment(n: int, cfg: QuadConfig = DEFAULT_CONFIG) -> complex:
    return moment_functional(n, cfg).value


# -- classical B-splines ----------------------------------------------------------

def classical_bspline(n: int, x):
    """Cardinal B-spline of order n from its truncated-power form."""
    if n < 1:
        raise ValueError("order must be >= 1")
    xa = np.asarray(x, float)
    out = np.zeros(xa.shape)
    for k in range(n + 1):
        t = xa - k
        if n == 1:
            tp = (t >= 0).astype(float)
        else:
            tp = np.where(t > 0, t, 0.0) ** (n - 1)
        out += (-1) ** k * comb(n, k) * tp
    out /= factorial(n - 1)
    out = np.where((xa < 0) | (xa >= n), 0.0, out)
    # truncated powers cancel to rounding noise outside the support interior
    out = np.maximum(out, 0.0)
    return out.item() if np.ndim(x) == 0 else out


def tensor_bspline(n: int, x, y):
    """Tensor-product B-spline B_n(x) B_n(y)."""
    return np.asarray(classical_bspline(n, x)) * np.asarray(classical_bspline(n, y)) \
        if np.ndim(x) or np.ndim(y) else classical_bspline(n, x) * classical_bspline(n, y)


def bspline_fourier(n: int, omega):
    """((1 - e^{-i w})/(i w))^n, equal to 1 at w = 0."""
    w = np.asarray(omega, float)
    val = (np.exp(-0.5j * w) * np.sinc(w / (2 * PI))) ** n
    return complex(val) if np.ndim(omega) == 0 else val


def two_scale_check(n: int, x) -> float:
    """|B_n(x) - sum_k 2^{1-n} C(n,k) B_n(2x - k)|."""
    rhs = sum(comb(n, k) * classical_bspline(n, 2 * np.asarray(x, float) - k) for k in range(n + 1))
    val = np.abs(classical_bspline(n, x) - rhs / 2 ** (n - 1))
    return float(val) if np.ndim(x) == 0 else val
