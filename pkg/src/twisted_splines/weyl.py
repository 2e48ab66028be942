"""Kernels of Weyl transforms of planar functions.

The Weyl transform W(f) is the integral operator with kernel

    K_f(xi, eta) = int f(x, eta - xi) exp(pi i x (xi + eta)) dx,

so K_f vanishes outside a band of eta - xi determined by the y-support of f.
Norms are taken in the rotated coordinates s = xi + eta, d = eta - xi
(Jacobian 1/2). Each kernel carries an envelope |K|^2 <= C / |s + shift|^r
that bounds what truncation at |s| <= 2R discards.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .quad import DEFAULT_CONFIG, QuadConfig, QuadratureError, gauss_legendre, integrate_1d, require
from .splines import phi_n
from .twistops import PlanarFunction, _as_point

PI = np.pi


@dataclass(frozen=True)
class KernelFunction:
    """Kernel K(xi, eta) vanishing unless eta - xi lies in [band[0], band[1]).

    ``band_breaks`` lists values of eta - xi across which K may be
    non-analytic. ``envelope_constant`` C and ``decay_rate`` r give
    |K|^2 <= C / |xi + eta + s_shift|^r away from the origin.
    """
    evaluator: Callable
    band: tuple
    band_breaks: tuple = field(default=())
    decay_rate: float = 2.0
    envelope_constant: float = float("inf")
    s_shift: float = 0.0
    name: str = ""

    def __call__(self, xi, eta):
        xa, ea = np.broadcast_arrays(np.asarray(xi, float), np.asarray(eta, float))
        d = ea - xa
        out = np.zeros(xa.shape, dtype=complex)
        inside = (d >= self.band[0]) & (d < self.band[1])
        if inside.any():
            out[inside] = self.evaluator(xa[inside], ea[inside])
        if np.ndim(xi) == 0 and np.ndim(eta) == 0:
            return complex(out)
        return out

    @staticmethod
    def zero() -> "KernelFunction":
        return KernelFunction(lambda x, e: np.zeros(np.shape(x), complex), (0.0, 0.0),
                              (), 2.0, 0.0, 0.0, "0")


def kernel_phi1(xi, eta):
    """exp(pi i (xi+eta)/2) sinc((xi+eta)/2) chi_[0,1)(eta - xi)."""
    xa, ea = np.broadcast_arrays(np.asarray(xi, float), np.asarray(eta, float))
    s = xa + ea
    d = ea - xa
    out = np.exp(0.5j * PI * s) * np.sinc(s / 2) * ((d >= 0) & (d < 1))
    if np.ndim(xi) == 0 and np.ndim(eta) == 0:
        return complex(out)
    return out


def _kernel_rec(n: int, xi: np.ndarray, eta: np.ndarray, m: int):
    """K_{phi_n} on flat arrays, with the order m / m/2 discrepancy."""
    if n == 1:
        return kernel_phi1(xi, eta), np.zeros(xi.shape)
    out = np.zeros(xi.shape, dtype=complex)
    err = np.zeros(xi.shape)
    d = eta - xi
    inside = (d >= 0) & (d < n)
    if not inside.any():
        return out, err
    xs, es, ds = xi[inside], eta[inside], d[inside]
    fd = ds - np.floor(ds)
    lo = np.concatenate([np.zeros_like(fd), fd])
    hi = np.concatenate([fd, np.ones_like(fd)])
    X = np.tile(xs, 2)
    E = np.tile(es, 2)

    def run(order):
        t, w = gauss_legendre(order)
        Y = lo[:, None] + (hi - lo)[:, None] * t[None, :]
        inner_vals, _ = _kernel_rec(n - 1, np.repeat(X, order), (E[:, None] - Y).ravel(), order)
        g = np.exp(-0.5j * PI * Y) * np.sinc((2 * E[:, None] - Y) / 2) * inner_vals.reshape(Y.shape)
        cell = (hi - lo) * (g @ w)
        k = xs.size
        return np.exp(1j * PI * es) * cell.reshape(2, k).sum(axis=0)

    fine = run(m)
    out[inside] = fine
    err[inside] = np.abs(fine - run(max(2, m // 2)))
    return out, err


def _tv_derivative_envelope(n: int, samples: int = 801) -> float:
    """sup over d of (total variation of d/dx phi_n(., d))^2 / pi^4, padded by 5%.

    Two integrations by parts in x give |K_{phi_n}| <= TV(f_x)/(pi s)^2 for
    continuous phi_n (n >= 2).
    """
    if n > 2:
        samples = min(samples, 241)
    x = np.linspace(0, n, samples)
    dvals = np.linspace(0, n, 161 if n == 2 else 61)
    X, D = np.meshgrid(x, dvals, indexing="ij")
    vals = np.asarray(phi_n(n, X, D))
    h = x[1] - x[0]
    deriv = np.diff(vals, axis=0) / h
    tv = np.sum(np.abs(np.diff(deriv, axis=0)), axis=0)
    # jumps of f_x at the support ends
    tv = tv + np.abs(deriv[0]) + np.abs(deriv[-1])
    return float(1.05 * tv.max() ** 2 / PI ** 4)


_ENVELOPES: dict = {}


def kernel_phi_n_function(n: int, cfg: QuadConfig = DEFAULT_CONFIG) -> KernelFunction:
    """K_{phi_n} as a :class:`KernelFunction` with band [0, n)."""
    if n < 1:
        raise ValueError("order must be >= 1")
    if n == 1:
        return KernelFunction(kernel_phi1, (0.0, 1.0), (0.0, 1.0), 2.0, 4.0 / PI ** 2, 0.0, "K_phi1")
    if n not in _ENVELOPES:
        _ENVELOPES[n] = _tv_derivative_envelope(n)

    def ev(xi, eta):
        return kernel_phi_n(n, xi, eta, cfg)

    return KernelFunction(ev, (0.0, float(n)), tuple(float(j) for j in range(n + 1)),
                          4.0, _ENVELOPES[n], 0.0, f"K_phi{n}")


def kernel_phi_n(n: int, xi, eta, cfg: QuadConfig = DEFAULT_CONFIG):
    """K_{phi_n} by the recursion over K_{phi_{n-1}}.

    K_n(xi, eta) = exp(pi i eta) int_0^1 exp(-pi i y/2) sinc((2 eta - y)/2) K_{n-1}(xi, eta - y) dy,
    each integral split at the point where eta - xi - y crosses an integer.
    """
    if n < 1:
        raise ValueError("order must be >= 1")
    xa, ea = np.broadcast_arrays(np.asarray(xi, float), np.asarray(eta, float))
    v, e = _kernel_rec(n, xa.ravel(), ea.ravel(), cfg.node_count)
    if np.any(e > cfg.tolerance):
        raise QuadratureError(f"K_phi{n}: estimate {e.max():.3e} above tolerance")
    v = v.reshape(xa.shape)
    if np.ndim(xi) == 0 and np.ndim(eta) == 0:
        return complex(v)
    return v


def kernel_of(f: PlanarFunction, xi: float, eta: float, cfg: QuadConfig = DEFAULT_CONFIG) -> complex:
    """K_f(xi, eta) straight from the defining integral over x."""
    d = eta - xi
    s = xi + eta
    sup = f.support
    if not (sup.y_lo <= d <= sup.y_hi):
        return 0j
    res = integrate_1d(lambda x: f(x, np.full_like(x, d)) * np.exp(1j * PI * x * s),
                       (sup.x_lo, sup.x_hi), cfg, breakpoints=f.breaks_x)
    return require(res)


def kernel_from_function(f: PlanarFunction, cfg: QuadConfig = DEFAULT_CONFIG,
                         envelope_constant: float = float("inf"), decay_rate: float = 2.0) -> KernelFunction:
    """Wrap :func:`kernel_of` as a kernel with band taken from the y-support."""
    def ev(xi, eta):
        return np.array([kernel_of(f, a, b, cfg) for a, b in zip(np.ravel(xi), np.ravel(eta))],
                        dtype=complex).reshape(np.shape(xi))

    sup = f.support
    return KernelFunction(ev, (sup.y_lo, sup.y_hi), tuple(f.breaks_y), decay_rate,
                          envelope_constant, 0.0, f"K[{f.name}]")


def kernel_compose(k1: KernelFunction, k2: KernelFunction, cfg: QuadConfig = DEFAULT_CONFIG) -> KernelFunction:
    """Kernel of the operator product: (xi, eta) -> int K1(xi, y) K2(y, eta) dy."""
    a1, b1 = k1.band
    a2, b2 = k2.band
    if b1 <= a1 or b2 <= a2:
        return KernelFunction.zero()

    def point(xi, eta):
        lo = max(xi + a1, eta - b2)
        hi = min(xi + b1, eta - a2)
        if hi <= lo:
            return 0j
        br = [xi + t for t in k1.band_breaks] + [eta - t for t in k2.band_breaks]

        def g(y):
            return k1(np.full_like(y, xi), y) * k2(y, np.full_like(y, eta))

        return require(integrate_1d(g, (lo, hi), cfg, breakpoints=br))

    def ev(xi, eta):
        return np.array([point(float(a), float(b)) for a, b in zip(np.ravel(xi), np.ravel(eta))],
                        dtype=complex).reshape(np.shape(xi))

    breaks = tuple(sorted({p + q for p in k1.band_breaks for q in k2.band_breaks}))
    c = np.inf
    return KernelFunction(ev, (a1 + a2, b1 + b2), breaks, 2.0, c, 0.0, f"({k1.name}.{k2.name})")


def pi_action(k: KernelFunction, p) -> KernelFunction:
    """Kernel of pi(k, l) W: (xi, eta) -> exp(2 pi i (k xi + k l / 2)) K(xi + l, eta).

    The band moves to [a + l, b + l).
    """
    kk, ll = _as_point(p)
    if kk == 0 and ll == 0:
        return k

    def ev(xi, eta):
        return np.exp(2j * PI * (kk * xi + kk * ll / 2)) * k.evaluator(xi + ll, eta)

    return KernelFunction(ev, (k.band[0] + ll, k.band[1] + ll),
                          tuple(b + ll for b in k.band_breaks), k.decay_rate,
                          k.envelope_constant, k.s_shift + ll, f"pi{(kk, ll)}{k.name}")


def _band_cells(k: KernelFunction):
    a, b = k.band
    pts = sorted({a, b} | {t for t in k.band_breaks if a < t < b})
    return pts


def _tail(k: KernelFunction, R: float) -> float:
    if k.band[1] <= k.band[0]:
        return 0.0
    r = k.decay_rate
    if r <= 1:
        raise ValueError("decay_rate must exceed 1 for a finite tail")
    edge = 2 * R - abs(k.s_shift)
    if edge <= 0:
        return float("inf")
    return float((k.band[1] - k.band[0]) * k.envelope_constant * edge ** (1 - r) / (r - 1))


def hs_inner(k1: KernelFunction, k2: KernelFunction, R: float = 200.0,
             cfg: QuadConfig = DEFAULT_CONFIG) -> tuple[complex, float]:
    """Truncated <K1, K2> over |xi + eta| <= 2R and a Cauchy-Schwarz tail bound."""
    a = max(k1.band[0], k2.band[0])
    b = min(k1.band[1], k2.band[1])
    if b <= a:
        return 0j, 0.0
    dpts = sorted({a, b} | {t for t in k1.band_breaks + k2.band_breaks if a < t < b})
    # s-panels of width 2 match the zero spacing of the sinc envelope
    s_edges = np.arange(-2 * R, 2 * R + 1.0, 2.0)

    def run(order):
        t, w = gauss_legendre(order)
        total = 0j
        for i in range(len(dpts) - 1):
            d0, d1 = dpts[i], dpts[i + 1]
            dn = d0 + (d1 - d0) * t
            sn = (s_edges[:-1, None] + 2.0 * t[None, :]).ravel()
            S, D = np.meshgrid(sn, dn, indexing="ij")
            xi, eta = (S - D) / 2, (S + D) / 2
            v1 = k1(xi, eta)
            v = np.abs(v1) ** 2 if k2 is k1 else v1 * np.conj(k2(xi, eta))
            ws = 2.0 * np.tile(w, len(s_edges) - 1)
            total += 0.5 * (d1 - d0) * np.einsum("i,j,ij->", ws, w, v)
        return total

    fine = run(cfg.node_count)
    err = abs(fine - run(max(2, cfg.node_count // 2)))
    if err > 1e-8 * max(1.0, abs(fine)):
        raise QuadratureError(f"HS inner product estimate {err:.3e}")
    tail = np.sqrt(_tail(k1, R) * _tail(k2, R))
    return complex(fine), float(tail)


def hs_norm(k: KernelFunction, R: float = 200.0, cfg: QuadConfig = DEFAULT_CONFIG) -> tuple[float, float]:
    """Truncated Hilbert-Schmidt norm and the tail bound on the squared norm.

    Returns
    -------
    value : float
        sqrt of the integral of |K|^2 over |xi + eta| <= 2R.
    tail_bound : float
        Bound on the discarded part of the squared norm from the envelope.
    """
    if k.decay_rate <= 1:
        raise ValueError("decay_rate must exceed 1")
    if k.band[1] <= k.band[0]:
        return 0.0, 0.0
    val, _ = hs_inner(k, k, R, cfg)
    return float(np.sqrt(max(val.real, 0.0))), _tail(k, R)
