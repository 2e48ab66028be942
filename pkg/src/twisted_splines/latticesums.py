"""Partition-of-unity sums for phi_1 and phi_2.

The integral of sum_{k,l} T_(k,l) phi_2 over the plane reduces to
(1/pi^2) sum_{p,q} I(p,q) with

    I(p,q) = int_Q e^{pi i (u q - v p)} (e^{pi i (u-p)} - 1)(e^{-pi i (v-q)} - 1)
             / ((u-p)(v-q)) du dv.

Each I(p,q) factors as alpha(p,q) conj(alpha(q,p)) with
alpha(p,q) = int_0^1 e^{pi i u q}(e^{pi i (u-p)} - 1)/(u-p) du, which gives
a closed form in Ei(ix). The case table below follows the classical
Ei/Ci/Si expressions; see the decisions ledger for the corrected entries.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import specfun
from .quad import DEFAULT_CONFIG, QuadConfig, gauss_legendre

PI = np.pi
GAMMA = specfun.EULER_GAMMA
QUOTED_PARTIAL_SUM = 0.000160507
DEFAULT_RADIUS = 100


# -- phi_1 ------------------------------------------------------------------------

def pointwise_pou_phi1(x, y):
    """sum_{k,l} T_(k,l) phi_1(x, y) = exp(pi i (floor(y) x - floor(x) y))."""
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    out = np.exp(1j * PI * (np.floor(y) * x - np.floor(x) * y))
    return complex(out) if out.ndim == 0 else out


def pointwise_pou_phi1_direct(x, y, radius: int = 3):
    """The same sum evaluated term by term over |k|, |l| <= radius."""
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    out = np.zeros(np.broadcast(x, y).shape, dtype=complex)
    for k in range(-radius, radius + 1):
        for l in range(-radius, radius + 1):
            inside = (x - k >= 0) & (x - k < 1) & (y - l >= 0) & (y - l < 1)
            out = out + np.where(inside, np.exp(1j * PI * (l * x - k * y)), 0)
    return complex(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class PouTruncation:
    M: int
    A: float
    B_plus_C: float
    total: float


def pou_phi1_truncated(M: int) -> PouTruncation:
    """Closed-form pieces of the truncated phi_1 partition-of-unity integral.

    A = (4/pi^2) L_M^2 with L_M the sum of 1/k over odd k in [-M, M-1];
    B + C = 0 and the total is 1 + A.
    """
    if M < 1:
        raise ValueError("M must be >= 1")
    L = 0.0 if M % 2 == 0 else -1.0 / M
    A = 4.0 / PI ** 2 * L * L
    return PouTruncation(M, A, 0.0, 1.0 + A)


def pou_phi1_truncated_direct(M: int) -> tuple[float, float]:
    """(A, B + C) summed term by term from the unsimplified sums."""
    A = 0j
    for k in range(-M, M):
        for l in range(-M, M):
            if k == 0 or l == 0:
                continue
            A += (np.exp(1j * PI * l) - 1) * (np.exp(-1j * PI * k) - 1) / (k * l)
    A /= PI ** 2
    bc = 0j
    for k in range(-M, M):
        if k:
            bc += -(np.exp(-1j * PI * k) - 1) / (PI * 1j * k)
            bc += (np.exp(1j * PI * k) - 1) / (PI * 1j * k)
    return float(A.real), complex(bc)


# -- I(p, q) ------------------------------------------------------------------------

class CaseTag(enum.Enum):
    SMALL_BLOCK = "small_block"
    AXIS_P0 = "axis_p0"
    AXIS_P_PLUS1 = "axis_p_plus1"
    AXIS_P_MINUS1 = "axis_p_minus1"
    AXIS_0Q = "axis_0q"
    AXIS_1Q = "axis_1q"
    AXIS_MINUS1_Q = "axis_minus1_q"
    MIXED_SIGN = "mixed_sign"
    BOTH_LARGE = "both_large"


def classify(p: int, q: int) -> CaseTag:
    ap, aq = abs(p), abs(q)
    if ap <= 1 and aq <= 1:
        return CaseTag.SMALL_BLOCK
    if ap >= 2 and aq <= 1:
        return {0: CaseTag.AXIS_P0, 1: CaseTag.AXIS_P_PLUS1, -1: CaseTag.AXIS_P_MINUS1}[q]
    if aq >= 2 and ap <= 1:
        return {0: CaseTag.AXIS_0Q, 1: CaseTag.AXIS_1Q, -1: CaseTag.AXIS_MINUS1_Q}[p]
    return CaseTag.MIXED_SIGN if p * q < 0 else CaseTag.BOTH_LARGE


def _E(x):
    """Ei(i pi x)."""
    return specfun.ei_imag(PI * np.asarray(x, float))


def _small_block() -> dict:
    ci, si = specfun.ci(PI), specfun.si(PI)
    lp = math.log(PI)
    e1, e2, e4 = _E(1.0), _E(2.0), _E(4.0)
    i00 = (GAMMA - ci + lp) ** 2 + si ** 2
    i10 = (np.conj(e1) - np.conj(e2) + math.log(2)) * (ci - 1j * si - GAMMA - lp)
    i11 = (np.conj(e1 - e2) + math.log(2)) * (e1 - e2 + math.log(2))
    i1m1 = (np.conj(e1) - 2 * np.conj(e2) + np.conj(e4)) * (ci + 1j * si - GAMMA - lp)
    tab = {
        (0, 0): complex(i00),
        (1, 0): complex(i10),
        (0, 1): complex(np.conj(i10)),
        (1, 1): complex(i11),
        (0, -1): complex(i10),
        (-1, 0): complex(np.conj(i10)),
        (-1, -1): complex(i11),
        (1, -1): complex(i1m1),
        (-1, 1): complex(np.conj(i1m1)),
    }
    return tab


_SMALL = _small_block()


def calI_axis(p, which: int):
    """I(p, 0), I(p, 1), I(p, -1) for p >= 2 (vectorized in p)."""
    p = np.asarray(p, float)
    E = _E
    if which == 0:
        a = E(-(p - 1)) - E(-p) + np.log(p / (p - 1))
        b = -E(-p) + E(-(p + 1)) + np.log(p / (p + 1))
    elif which == 1:
        a = -E(-(p - 1)) + E(-2 * (p - 1)) + E(-p) - E(-2 * p)
        b = E(p) - E(p + 1) + np.log((1 + p) / p)
    elif which == -1:
        a = E(-p) - E(-2 * p) - E(-(p + 1)) + E(-2 * (p + 1))
        b = -E(p - 1) + E(p) + np.log((p - 1) / p)
    else:
        raise ValueError("which must be 0, 1 or -1")
    return a * b


def F1(p, q):
    """Ei(i pi p(q-1)) - Ei(i pi pq) + Ei(i pi (p+1)q) - Ei(i pi (p+1)(q-1))."""
    p = np.asarray(p, float)
    q = np.asarray(q, float)
    return _E(p * (q - 1)) - _E(p * q) + _E((p + 1) * q) - _E((p + 1) * (q - 1))


def calI_generic(p, q):
    """F1(p, q) conj(F1(q, p)), valid for |p|, |q| >= 2 of either sign."""
    return F1(p, q) * np.conj(F1(q, p))


def calI_mixed_display(p: int, q: int) -> complex:
    """The printed p >= 2, q <= -2 product, kept for comparison only."""
    E = _E
    a = E((p - 1) * (q - 1)) - E(p * (q - 1)) - E((p - 1) * q) + E(p * q)
    b = E(-p * q) - E(-(p + 1) * q) - E(-p * (q + 1)) + E(-(p + 1) * (q + 1))
    return complex(a * b)


def calI_array(P, Q) -> np.ndarray:
    """Case-table evaluation of I(p, q) over integer arrays."""
    P, Q = np.broadcast_arrays(np.asarray(P, int), np.asarray(Q, int))
    out = np.zeros(P.shape, dtype=complex)
    aP, aQ = np.abs(P), np.abs(Q)

    small = (aP <= 1) & (aQ <= 1)
    for idx in zip(*np.nonzero(small)):
        out[idx] = _SMALL[(int(P[idx]), int(Q[idx]))]

    for j in (0, 1, -1):
        # (p, j) with p >= 2, and (p, j) with p <= -2 via I(p,q) = conj I(-p,-q)
        m = (P >= 2) & (Q == j)
        if m.any():
            out[m] = calI_axis(P[m], j)
        m = (P <= -2) & (Q == j)
        if m.any():
            out[m] = np.conj(calI_axis(-P[m], -j))
        # (j, q) = conj I(q, j)
        m = (aQ >= 2) & (P == j)
        if m.any():
            qs = Q[m]
            vals = np.where(qs >= 2, calI_axis(np.abs(qs), j), np.conj(calI_axis(np.abs(qs), -j)))
            out[m] = np.conj(vals)

    big = (aP >= 2) & (aQ >= 2)
    if big.any():
        out[big] = calI_generic(P[big], Q[big])
    return out


def calI(p: int, q: int) -> complex:
    """I(p, q) from the closed-form case table."""
    return complex(calI_array(np.array([p]), np.array([q]))[0])


def alpha(p, q):
    """alpha(p,q) = e^{pi i pq}[F(pi(q+1)(1-p)) - F(-pi(q+1)p) - F(pi q(1-p)) + F(-pi q p)].

    F(x) = int_0^x (e^{is} - 1)/s ds; entire, so no case split is needed.
    """
    F = specfun.ein_imag
    p = np.asarray(p, float)
    q = np.asarray(q, float)
    s = F(PI * (q + 1) * (1 - p)) - F(-PI * (q + 1) * p) - F(PI * q * (1 - p)) + F(-PI * q * p)
    return np.exp(1j * PI * p * q) * s


def calI_separable(p, q):
    """I(p, q) = alpha(p, q) conj(alpha(q, p)), without case dispatch."""
    return alpha(p, q) * np.conj(alpha(q, p))


def calI_quadrature(p: int, q: int, m: int = 64) -> complex:
    """Tensor Gauss-Legendre evaluation of the defining double integral."""
    t, w = gauss_legendre(m)

    def kern(u, shift):
        d = u - shift
        with np.errstate(invalid="ignore", divide="ignore"):
            h = np.where(np.abs(d) < 1e-14, 1j * PI, np.expm1(1j * PI * d) / d)
        return h

    a = np.sum(w * np.exp(1j * PI * t * q) * kern(t, p))
    b = np.sum(w * np.exp(-1j * PI * t * p) * np.conj(kern(t, q)))
    return complex(a * b)


# -- real parts and envelopes --------------------------------------------------------

def re_calI_display(p: int, which: int) -> float:
    """The printed Ci/Si expansions of Re I(p, 0), Re I(p, 1), Re I(p, -1)."""
    Ci = lambda x: specfun.ci(x)  # noqa: E731
    Si = lambda x: specfun.si(x)  # noqa: E731
    lg = math.log
    if which == 0:
        return ((Ci(PI * (p - 1)) - Ci(PI * p) + lg(p / (p - 1)))
                * (Ci(PI * (p + 1)) - Ci(PI * p) + lg(p / (p + 1)))
                - (Si(PI * p) - Si(PI * (p - 1))) * (Si(PI * p) - Si(PI * (p + 1))))
    if which == 1:
        return ((Ci(PI * p) - Ci(PI * (p - 1)) + Ci(2 * PI * (p - 1)) - Ci(2 * PI * p))
                * (Ci(PI * p) - Ci(PI * (p + 1)) + lg((p + 1) / p))
                - (Si(PI * p) - Si(PI * (p - 1)) + Si(2 * PI * (p - 1)) - Si(2 * PI * p))
                * (Si(PI * p) - Si(PI * (p + 1))))
    if which == -1:
        return ((Ci(PI * p) - Ci(2 * PI * p) + Ci(2 * PI * (p + 1)) - Ci(PI * (p + 1)))
                * (Ci(PI * p) - Ci(PI * (p - 1)) + lg((p - 1) / p))
                - (Si(PI * p) - Si(2 * PI * p) + Si(2 * PI * (p + 1)) - Si(PI * (p + 1)))
                * (Si(PI * p) - Si(PI * (p - 1))))
    raise ValueError("which must be 0, 1 or -1")


def log_lemma(p: int) -> tuple[bool, bool, bool]:
    """The three logarithm estimates for p >= 2."""
    if p < 2:
        raise ValueError("p must be >= 2")
    a = math.log(p / (p - 1))
    b = abs(math.log(p / (p + 1)))
    return (a <= 1 / (p - 1) <= 2 / p, b <= 1 / (p - 1), a * b <= 1 / (p - 1) ** 2)


_WHICH = {"axis0": 0, "axis_plus1": 1, "axis_minus1": -1}


@dataclass(frozen=True)
class Envelope:
    """c / ((p-1)^2 (|q|-1)^2)-type bound with its fitted constant.

    ``lsq_constant`` is the limit c_inf of a least-squares fit
    m(n) = c_inf - a/n to the per-shell maxima of the scaled terms over the
    upper half of the shells. ``constant`` is the larger of c_inf and the
    observed maximum, with a margin. ``validated`` records that the model
    fits (relative rms below 2%).
    """
    constant: float
    lsq_constant: float
    validated: bool
    samples: int


def _fit(shell: np.ndarray, ratios: np.ndarray, margin: float = 0.05) -> Envelope:
    shell = np.asarray(shell, int)
    ratios = np.asarray(ratios, float)
    ns = np.unique(shell)
    peak = np.array([ratios[shell == n].max() for n in ns])
    upper = ns >= ns[len(ns) // 2]
    A = np.column_stack([np.ones(upper.sum()), -1.0 / ns[upper]])
    coef, *_ = np.linalg.lstsq(A, peak[upper], rcond=None)
    resid = A @ coef - peak[upper]
    rel = float(np.sqrt(np.mean(resid ** 2)) / max(abs(coef[0]), 1e-300))
    c_inf = float(coef[0])
    return Envelope(max(c_inf, float(peak.max())) * (1 + margin), c_inf, rel < 0.02, len(ratios))


def axis_envelope(which: int, p_max: int = 60) -> Envelope:
    p = np.arange(2, p_max + 1)
    vals = np.abs(calI_axis(p, which).real) * (p - 1.0) ** 2
    return _fit(p, vals)


def quadrant_envelope(sign: int = 1, n_max: int = 20) -> Envelope:
    """Fit over 2 <= p, |q| <= n_max with q of the given sign; shells are max(p, |q|)."""
    g = np.arange(2, n_max + 1)
    P, Q = np.meshgrid(g, g, indexing="ij")
    vals = np.abs(calI_generic(P, sign * Q).real) * (P - 1.0) ** 2 * (Q - 1.0) ** 2
    return _fit(np.maximum(P, Q).ravel(), vals.ravel())


def re_calI_bound(p: int, which) -> tuple[float, float]:
    """Re I(p, q) and its envelope value.

    ``which`` is one of "axis0", "axis_plus1", "axis_minus1", or an integer
    q with |q| >= 2 for the generic case.
    """
    if p < 2:
        raise ValueError("p must be >= 2")
    if isinstance(which, str):
        j = _WHICH[which]
        env = axis_envelope(j, max(60, p))
        return float(calI_axis(p, j).real), env.constant / (p - 1) ** 2
    q = int(which)
    if abs(q) < 2:
        raise ValueError("generic case needs |q| >= 2")
    env = quadrant_envelope(1 if q > 0 else -1, max(20, p, abs(q)))
    return float(calI_generic(p, q).real), env.constant / ((p - 1) ** 2 * (abs(q) - 1) ** 2)


# -- C_phi2 ---------------------------------------------------------------------------

@dataclass
class SumReport:
    """Square partial sum of I(p, q) over |p|, |q| <= radius with a tail envelope."""
    truncation_radius: int
    partial_sum: complex
    tail_bound: float
    constant_c_fit: float
    envelope_validated: bool
    components: dict = field(default_factory=dict)

    @property
    def constant(self) -> float:
        """C_phi2 = partial_sum / pi^2."""
        return float(self.partial_sum.real) / PI ** 2

    def to_text(self) -> str:
        lines = [
            f"truncation_radius = {self.truncation_radius}",
            f"partial_sum_re = {self.partial_sum.real:.12g}",
            f"partial_sum_im = {self.partial_sum.imag:.12g}",
            f"constant = {self.constant:.12g}",
            f"tail_bound = {self.tail_bound:.12g}",
            f"constant_c_fit = {self.constant_c_fit:.12g}",
            f"envelope_validated = {self.envelope_validated}",
        ]
        for k, v in self.components.items():
            lines.append(f"{k} = {v:.12g}")
        return "\n".join(lines) + "\n"


def c_phi2(radius: int = DEFAULT_RADIUS, cfg: QuadConfig = DEFAULT_CONFIG) -> SumReport:
    """Sum I(p, q) over |p|, |q| <= radius grouped as in the symmetry reduction.

    small block + 4 sum_{p>=2} Re I(p, j) for j in {0, 1, -1}
    + 2 sum_{p>=2, q<=-2} Re I(p, q) + 2 sum_{p,q>=2} Re I(p, q).

    The tail over the omitted terms is bounded with the fitted envelopes,
    using sum_{p>r} (p-1)^{-2} <= 1/(r-1) and sum_{p>=2} (p-1)^{-2} = pi^2/6.
    """
    if radius < 2:
        raise ValueError("radius must be >= 2")
    r = int(radius)
    small = sum(_SMALL.values())
    p = np.arange(2, r + 1)
    axes = {j: 4.0 * float(np.sum(calI_axis(p, j).real)) for j in (0, 1, -1)}
    P, Q = np.meshgrid(p, p, indexing="ij")
    quad_pos = 2.0 * float(np.sum(calI_generic(P, Q).real))
    quad_neg = 2.0 * float(np.sum(calI_generic(P, -Q).real))
    total = small + axes[0] + axes[1] + axes[-1] + quad_neg + quad_pos

    env_axes = [axis_envelope(j, max(60, r)) for j in (0, 1, -1)]
    n_fit = min(max(20, r), 40)
    env_quads = [quadrant_envelope(s, n_fit) for s in (1, -1)]
    z2 = PI ** 2 / 6
    tail = sum(4.0 * e.constant / (r - 1) for e in env_axes)
    tail += sum(2.0 * e.constant * 2.0 * z2 / (r - 1) for e in env_quads)
    fit = max(e.constant for e in env_axes + env_quads)
    ok = all(e.validated for e in env_axes + env_quads)
    comps = {
        "small_block": float(small.real),
        "axis_p0": axes[0], "axis_p_plus1": axes[1], "axis_p_minus1": axes[-1],
        "quadrant_mixed": quad_neg, "quadrant_same": quad_pos,
    }
    return SumReport(r, complex(total), float(tail), float(fit), ok, comps)


def square_partial_sum(radius: int) -> complex:
    """Plain sum of the case table over the square |p|, |q| <= radius."""
    g = np.arange(-radius, radius + 1)
    P, Q = np.meshgrid(g, g, indexing="ij")
    return complex(np.sum(calI_array(P, Q)))


# -- L-recursion of the translated sums ---------------------------------------------------

def pou_l1(u, v, radius: int):
    """Truncated L_1(u, v) = (1/pi^2) sum_{|p|,|q|<=radius} ... , evaluated as a product of two sums."""
    u = np.asarray(u, float)[..., None]
    v = np.asarray(v, float)[..., None]
    k = np.arange(-radius, radius + 1, dtype=float)

    def h(d):
        with np.errstate(invalid="ignore", divide="ignore"):
            return np.where(np.abs(d) < 1e-14, 1j * PI, np.expm1(1j * PI * d) / d)

    a = np.sum(np.exp(-1j * PI * v * k) * h(u - k), axis=-1)
    b = np.sum(np.exp(1j * PI * u * k) * np.conj(h(v - k)), axis=-1)
    return a * b / PI ** 2


def _panel_rule(radius: int, m: int, span: float = 1.0):
    """Composite Gauss-Legendre on [0, span] with enough panels for frequency pi*radius."""
    panels = int(math.ceil(span * (radius / 4 + 1)))
    t, w = gauss_legendre(m)
    h = span / panels
    x = (np.arange(panels)[:, None] + t[None, :]).ravel() * h
    wt = np.tile(w, panels) * h
    return x, wt


def _pou_l(n: int, u: np.ndarray, v: np.ndarray, radius: int, m: int) -> np.ndarray:
    if n == 1:
        return pou_l1(u, v, radius)
    s, w = _panel_rule(radius, m)
    S, T = np.meshgrid(s, s, indexing="ij")
    W = np.outer(w, w)
    out = np.empty(u.shape, dtype=complex)
    step = max(1, 400000 // S.size)
    for i in range(0, u.size, step):
        uu = u[i:i + step, None, None]
        vv = v[i:i + step, None, None]
        inner_vals = _pou_l(n - 1, (uu + S).ravel(), (vv + T).ravel(), radius, m).reshape(-1, *S.shape)
        out[i:i + step] = np.einsum("ij,nij->n", W, inner_vals * np.exp(1j * PI * (uu * T - vv * S)))
    return out


def pou_l_function(n: int, u, v, radius: int = 10, cfg: QuadConfig = DEFAULT_CONFIG):
    """L_n(u, v) via L_{n+1}(u,v) = int_Q e^{pi i (u t - v s)} L_n(u+s, v+t) ds dt."""
    if n < 1:
        raise ValueError("n must be >= 1")
    ua, va = np.broadcast_arrays(np.asarray(u, float), np.asarray(v, float))
    out = _pou_l(n, ua.ravel(), va.ravel(), radius, cfg.node_count).reshape(ua.shape)
    return complex(out) if out.ndim == 0 else out


def moment_pou_recursion(n: int, radius: int = 10, cfg: QuadConfig = DEFAULT_CONFIG) -> complex:
    """Integral of L_n over Q for the lattice sum truncated at |p|, |q| <= radius.

    For n = 1 this is the truncated C_phi2, i.e. the square partial sum of
    I(p, q) divided by pi^2. Cost grows like (radius * node_count)^(2n).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    m = cfg.node_count
    x, w = _panel_rule(radius, m)
    U, V = np.meshgrid(x, x, indexing="ij")
    vals = _pou_l(n, U.ravel(), V.ravel(), radius, m).reshape(U.shape)
    return complex(np.einsum("i,j,ij->", w, w, vals))
