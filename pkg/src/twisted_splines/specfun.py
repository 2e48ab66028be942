"""Sine, cosine and exponential integrals on the real and imaginary axes.

Three evaluation regimes are used for Si and Ci:

* ``x <= 4``: power series (no significant cancellation in double precision),
* ``4 < x < 40``: continued fraction for ``E1(ix)``,
* ``x >= 40``: asymptotic auxiliary functions ``P`` and ``Q`` truncated at
  their smallest term.

All public functions accept scalars or numpy arrays.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import math

import numpy as np

EULER_GAMMA = 0.57721566490153286061
PI = math.pi

SERIES_LIMIT = 4.0
ASYMPTOTIC_LIMIT = 40.0

_EPS = 1e-17
_CF_MAXIT = 400


@dataclass(frozen=True)
class Constants:
    euler_gamma: float = EULER_GAMMA
    pi: float = PI


CONSTANTS = Constants()


@dataclass(frozen=True)
class TrigIntegralPair:
    """Values of Ci and Si at a positive argument."""
    ci: float
    si: float
    argument: float


@dataclass(frozen=True)
class AsymptoticPQ:
    """Partial sums of the auxiliary functions P and Q.

    ``p_value = sum_{k<=n} (-1)^k (2k)!/x^{2k}`` and
    ``q_value = sum_{k<=n} (-1)^k (2k+1)!/x^{2k+1}``.
    """
    p_value: float
    q_value: float
    order_n: int
    argument: float


def _check_domain(x, strict):
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("argument must be finite")
    if strict and np.any(x <= 0):
        raise ValueError("argument must be positive")
    if not strict and np.any(x < 0):
        raise ValueError("argument must be non-negative")
    return x


def _out(value, like):
    if np.ndim(like) == 0:
        return value.item() if isinstance(value, np.ndarray) else value
    return value


# -- regime kernels (inputs are non-negative float arrays) -----------------

def _si_series(x):
    x2 = x * x
    term = x.copy()
    total = x.copy()
    k = 0
    while True:
        k += 1
        term = -term * x2 / ((2 * k) * (2 * k + 1))
        inc = term / (2 * k + 1)
        total += inc
        if np.all(np.abs(inc) <= _EPS * np.maximum(np.abs(total), 1e-300)):
            break
    return total


def _cin_series(x):
    """Cin(x) = int_0^x (1 - cos t)/t dt by its power series."""
    x2 = x * x
    term = np.ones_like(x)
    total = np.zeros_like(x)
    k = 0
    while True:
        k += 1
        term = -term * x2 / ((2 * k - 1) * (2 * k))
        inc = -term / (2 * k)
        total += inc
        if np.all(np.abs(inc) <= _EPS * np.maximum(np.abs(total), 1e-300)):
            break
    return total


def _e1_cf(x):
    """h(x) = exp(ix) E1(ix) by the modified Lentz continued fraction."""
    tiny = 1e-300
    b = 1.0 + 1j * x
    c = np.full(x.shape, 1.0 / tiny, dtype=complex)
    d = 1.0 / b
    h = d.copy()
    done = np.zeros(x.shape, dtype=bool)
    for i in range(2, _CF_MAXIT):
        a = -float((i - 1) ** 2)
        b = b + 2.0
        d_new = 1.0 / (a * d + b)
        c_new = b + a / c
        delta = c_new * d_new
        d = np.where(done, d, d_new)
        c = np.where(done, c, c_new)
        h = np.where(done, h, h * delta)
        done |= (np.abs(delta.real - 1.0) + np.abs(delta.imag)) < 1e-16
        if done.all():
            break
    return h


def _pq_asymptotic(x):
    """Auxiliary P, Q summed up to the smallest term."""
    p = np.ones_like(x)
    q = 1.0 / x
    tp = np.ones_like(x)
    tq = 1.0 / x
    active = np.ones(x.shape, dtype=bool)
    k = 0
    while active.any() and k < 60:
        k += 1
        np_ = -tp * (2 * k - 1) * (2 * k) / (x * x)
        nq = -tq * (2 * k) * (2 * k + 1) / (x * x)
        # stop once terms begin to grow or are negligible
        active &= (np.abs(np_) < np.abs(tp)) & (np.abs(tp) > _EPS)
        p = np.where(active, p + np_, p)
        q = np.where(active, q + nq, q)
        tp = np.where(active, np_, tp)
        tq = np.where(active, nq, tq)
    return p, q


def _ci_si_positive(x):
    """Ci and Si for a strictly positive array, dispatching on regime."""
    ci = np.empty_like(x)
    si = np.empty_like(x)
    lo = x <= SERIES_LIMIT
    hi = x >= ASYMPTOTIC_LIMIT
    mid = ~(lo | hi)
    if lo.any():
        xs = x[lo]
        si[lo] = _si_series(xs)
        ci[lo] = EULER_GAMMA + np.log(xs) - _cin_series(xs)
    if mid.any():
        xm = x[mid]
        e1 = _e1_cf(xm) * np.exp(-1j * xm)
        ci[mid] = -e1.real
        si[mid] = PI / 2 + e1.imag
    if hi.any():
        xh = x[hi]
        p, q = _pq_asymptotic(xh)
        s, c = np.sin(xh), np.cos(xh)
        ci[hi] = (s * p - c * q) / xh
        si[hi] = PI / 2 - (c * p + s * q) / xh
    return ci, si


# -- public API -------------------------------------------------------------

def si(x):
    """Sine integral Si(x) = int_0^x sin(t)/t dt for x >= 0."""
    xa = _check_domain(x, strict=False)
    flat = np.atleast_1d(xa).ravel()
    out = np.zeros_like(flat)
    pos = flat > 0
    if pos.any():
        out[pos] = _ci_si_positive(flat[pos])[1]
    return _out(out.reshape(np.shape(xa)), x)


def ci(x):
    """Cosine integral Ci(x) = gamma + ln x + int_0^x (cos t - 1)/t dt, x > 0."""
    xa = _check_domain(x, strict=True)
    flat = np.atleast_1d(xa).ravel()
    out = _ci_si_positive(flat)[0]
    return _out(out.reshape(np.shape(xa)), x)


def trig_integrals(x: float) -> TrigIntegralPair:
    c, s = _ci_si_positive(np.atleast_1d(_check_domain(x, strict=True)))
    return TrigIntegralPair(ci=float(c[0]), si=float(s[0]), argument=float(x))


def ei_imag(x):
    """Exponential integral on the imaginary axis.

    Returns ``Ci(x) + i (Si(x) - pi/2)`` for ``x > 0`` and the complex
    conjugate of ``ei_imag(-x)`` for ``x < 0``.

    Raises
    ------
    ValueError
        At ``x = 0`` (logarithmic singularity) or non-finite input.
    """
    xa = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(xa)):
        raise ValueError("argument must be finite")
    if np.any(xa == 0):
        raise ValueError("Ei(ix) is singular at x = 0")
    flat = np.atleast_1d(xa).ravel()
    c, s = _ci_si_positive(np.abs(flat))
    im = s - PI / 2
    im = np.where(flat < 0, -im, im)
    out = (c + 1j * im).reshape(np.shape(xa))
    return _out(out, x)


def ein_imag(x):
    """Entire function F(x) = int_0^x (exp(is) - 1)/s ds for real x.

    ``F(x) = -Cin(|x|) + i Si(x)``; ``F(0) = 0`` and ``F(-x) = conj F(x)``.
    Equivalently ``F(x) = Ei(ix) + i sgn(x) pi/2 - gamma - ln|x|``.
    """
    xa = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(xa)):
        raise ValueError("argument must be finite")
    flat = np.atleast_1d(xa).ravel()
    ax = np.abs(flat)
    cin = np.zeros_like(ax)
    s = np.zeros_like(ax)
    small = (ax > 0) & (ax <= SERIES_LIMIT)
    big = ax > SERIES_LIMIT
    if small.any():
        cin[small] = _cin_series(ax[small])
        s[small] = _si_series(ax[small])
    if big.any():
        c, sb = _ci_si_positive(ax[big])
        cin[big] = EULER_GAMMA + np.log(ax[big]) - c
        s[big] = sb
    out = (-cin + 1j * np.sign(flat) * s).reshape(np.shape(xa))
    return _out(out, x)


def sinc_half(t):
    """Normalized sinc, sin(pi t)/(pi t), equal to 1 at t = 0."""
    return _out(np.sinc(np.asarray(t, dtype=float)), t)


def sinc_unnormalized(u):
    """Unnormalized sinc, sin(u)/u, equal to 1 at u = 0."""
    return _out(np.sinc(np.asarray(u, dtype=float) / PI), u)


def asymptotic_pq(x: float, order_n: int) -> AsymptoticPQ:
    """Partial sums of the asymptotic series for P and Q up to ``order_n``."""
    if order_n < 0:
        raise ValueError("order_n must be >= 0")
    x = float(x)
    if not math.isfinite(x) or x == 0:
        raise ValueError("argument must be finite and nonzero")
    p = sum((-1) ** k * math.factorial(2 * k) / x ** (2 * k) for k in range(order_n + 1))
    q = sum((-1) ** k * math.factorial(2 * k + 1) / x ** (2 * k + 1) for k in range(order_n + 1))
    return AsymptoticPQ(p_value=p, q_value=q, order_n=order_n, argument=x)


def ci_from_pq(x: float, pq: AsymptoticPQ) -> float:
    """Ci reconstructed as (sin x / x) P - (cos x / x) Q."""
    return (math.sin(x) * pq.p_value - math.cos(x) * pq.q_value) / x


def si_from_pq(x: float, pq: AsymptoticPQ) -> float:
    """Si reconstructed from pi/2 - Si = (cos x / x) P + (sin x / x) Q."""
    return PI / 2 - (math.cos(x) * pq.p_value + math.sin(x) * pq.q_value) / x


def auxiliary_pq(x: float) -> tuple[float, float]:
    """Exact auxiliary functions P(x), Q(x) from the continued fraction.

    With ``h = exp(ix) E1(ix)`` one has ``P = -x Im h`` and ``Q = x Re h``.
    """
    x = float(x)
    if not x > 0:
        raise ValueError("argument must be positive")
    h = _e1_cf(np.array([x]))[0]
    return -x * h.imag, x * h.real


def ci_si_auxiliary(x: float) -> tuple[float, float]:
    """Ci and Si through the auxiliary-function representation."""
    p, q = auxiliary_pq(x)
    s, c = math.sin(x), math.cos(x)
    return (s * p - c * q) / x, PI / 2 - (c * p + s * q) / x


def ci_si_series_exact(x: float, rel: float = 1e-22) -> tuple[float, float]:
    """Ci and Si from their power series summed in exact rational arithmetic.

    Free of cancellation at any argument, at the cost of speed; used as a
    cross-regime reference.
    """
    xf = Fraction(float(x))
    if xf <= 0:
        raise ValueError("argument must be positive")
    x2 = xf * xf
    cut = Fraction(rel)
    # Si
    term = xf
    s_tot = xf
    k = 0
    while True:
        k += 1
        term = -term * x2 / ((2 * k) * (2 * k + 1))
        inc = term / (2 * k + 1)
        s_tot += inc
        if abs(inc) < cut:
            break
    # Cin
    term = Fraction(1)
    c_tot = Fraction(0)
    k = 0
    while True:
        k += 1
        term = -term * x2 / ((2 * k - 1) * (2 * k))
        inc = -term / (2 * k)
        c_tot += inc
        if abs(inc) < cut:
            break
    ci_val = EULER_GAMMA + math.log(float(x)) - float(c_tot)
    return ci_val, float(s_tot)
