"""Twisted multiresolution analysis built from phi_1.

Two constructions live here:

* the Haar-type builder c_{k,l} = <D_{1/2} phi, T_(k,l) phi> and
  psi = sum (-1)^{k+l} conj(c_{k,l}) D_2 T_(-k+1,l) phi, with its hypothesis
  D_{1/2} phi in V_0 exposed as a checkable residual;
* the nonstationary family V_j spanned by
  D_{2^-j} (T_(2^-j k, 2^-j l))^{2^{2j}} Phi_j = 2^j e^{pi i (l x - k y)} chi_{[k, k+2^-j) x [l, l+2^-j)},
  Phi_j = N_{2j}, N_j = 2^j phi_1(2^j ., 2^j .).

Every object of the second kind is a sum of terms c e^{pi i (a x + b y)} chi_R,
so inner products are products of 1D exponential integrals.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .gram import CoefficientSeq, symplectic_sign
from .quad import DEFAULT_CONFIG, QuadConfig, Rectangle
from .splines import phi1, spline_function
from .twistops import (PlanarFunction, dilate, inner, lambda_twisted_translate,
                       linear_combination, twisted_translate)

PI = np.pi
MAX_LEVEL = 8
RIESZ_LOWER = 1.0 - 2.0 / PI
RIESZ_UPPER = 1.0 + 2.0 / PI


def _check_level(j: int) -> int:
    j = int(j)
    if abs(j) > MAX_LEVEL:
        raise ValueError(f"|j| must be <= {MAX_LEVEL}")
    return j


# -- exact integrals of exponential pieces ----------------------------------------------

def exp_integral_1d(a: float, lo: float, hi: float) -> complex:
    """int_lo^hi e^{pi i a t} dt."""
    if hi <= lo:
        return 0j
    if a == 0:
        return complex(hi - lo)
    return (np.exp(1j * PI * a * hi) - np.exp(1j * PI * a * lo)) / (1j * PI * a)


@dataclass(frozen=True)
class ExpPiece:
    """c e^{pi i (a x + b y)} on the half-open rectangle ``rect``."""
    c: complex
    a: float
    b: float
    rect: Rectangle

    def __call__(self, x, y):
        r = self.rect
        x = np.asarray(x, float)
        y = np.asarray(y, float)
        inside = (x >= r.x_lo) & (x < r.x_hi) & (y >= r.y_lo) & (y < r.y_hi)
        return np.where(inside, self.c * np.exp(1j * PI * (self.a * x + self.b * y)), 0)


def piece_inner(f: ExpPiece, g: ExpPiece) -> complex:
    """<f, g> = int f conj(g)."""
    r = f.rect.intersect(g.rect)
    if r.empty:
        return 0j
    return (f.c * np.conj(g.c) * exp_integral_1d(f.a - g.a, r.x_lo, r.x_hi)
            * exp_integral_1d(f.b - g.b, r.y_lo, r.y_hi))


def pieces_inner(fs: Iterable[ExpPiece], gs: Iterable[ExpPiece]) -> complex:
    gs = list(gs)
    return complex(sum(piece_inner(f, g) for f in fs for g in gs))


# -- nonstationary family -------------------------------------------------------------------

@dataclass(frozen=True)
class MRALevel:
    """Level j: Phi_j = N_{2j}, dilation 2^-j, lambda = 2^{2j}, shift scale 2^-j."""
    j: int

    def __post_init__(self):
        _check_level(self.j)

    @property
    def side(self) -> float:
        return 2.0 ** (-self.j)

    @property
    def dilation(self) -> float:
        return 2.0 ** (-self.j)

    @property
    def lam(self) -> float:
        return 4.0 ** self.j

    def scaling_function(self) -> PlanarFunction:
        """Phi_j = N_{2j} = dilate(phi_1, 2^{2j})."""
        return dilate(spline_function(1), 4.0 ** self.j)


def n_j(j: int) -> PlanarFunction:
    """N_j = 2^j phi_1(2^j x, 2^j y)."""
    return dilate(spline_function(1), 2.0 ** j)


def basis_piece(j: int, k: int, l: int) -> ExpPiece:
    s = 2.0 ** (-_check_level(j))
    return ExpPiece(2.0 ** j, float(l), float(-k), Rectangle(k, k + s, l, l + s))


def basis_fn(j: int, k: int, l: int) -> PlanarFunction:
    """2^j e^{pi i (l x - k y)} chi_{[k, k+2^-j) x [l, l+2^-j)} (closed form)."""
    piece = basis_piece(j, k, l)
    r = piece.rect
    return PlanarFunction(piece, r, (r.x_lo, r.x_hi), (r.y_lo, r.y_hi), name=f"N[{j},{k},{l}]")


def basis_fn_compositional(j: int, k: int, l: int) -> PlanarFunction:
    """D_{2^-j} (T_(2^-j k, 2^-j l))^{2^{2j}} Phi_j built from the operators."""
    lev = MRALevel(_check_level(j))
    s = lev.side
    shifted = lambda_twisted_translate(lev.scaling_function(), lev.lam, (s * k, s * l))
    return dilate(shifted, lev.dilation)


def inner_Nj(r: int, s: int, j: int) -> float:
    """<T_(r,s) N_j, N_j> in closed form.

    1 at the origin; 0 when r s = 0 otherwise, or when |r| or |s| >= 2^-j;
    else 2^{2j+1}(1 - cos(pi r s))/(pi^2 |r s|), which vanishes for r s even.
    """
    j = _check_level(j)
    r, s = int(r), int(s)
    if r == 0 and s == 0:
        return 1.0
    L = 2.0 ** (-j)
    if r * s == 0 or abs(r) >= L or abs(s) >= L:
        return 0.0
    return 2.0 ** (2 * j + 1) * (1.0 - math.cos(PI * r * s)) / (PI ** 2 * abs(r * s))


def inner_Nj_integral(r: int, s: int, j: int) -> complex:
    """The same inner product from the shifted-window integral, exactly in 1D pieces."""
    j = _check_level(j)
    L = 2.0 ** (-j)
    amp = 2.0 ** (2 * j)
    # int over [-r, L-r] x [-s, L-s] intersect [0, L)^2 of e^{pi i (s x - r y)}
    return complex(amp * exp_integral_1d(s, max(0.0, -r), min(L, L - r))
                   * exp_integral_1d(-r, max(0.0, -s), min(L, L - s)))


def index_set_A(j: int) -> list[tuple[int, int]]:
    L = int(round(2.0 ** (-_check_level(j))))
    rng = range(-L + 1, L)
    return [(r, s) for r in rng for s in rng if (r, s) != (0, 0)]


def index_set_A1(j: int) -> list[tuple[int, int]]:
    L = int(round(2.0 ** (-_check_level(j))))
    out = [(0, s) for s in range(1, L)]
    out += [(r, s) for r in range(1, L) for s in range(-L + 1, L)]
    return out


def index_set_B1(j: int) -> list[tuple[int, int]]:
    return [(r, s) for r, s in index_set_A1(j) if inner_Nj(r, s, j) != 0.0]


def card_A(j: int) -> int:
    return 2 ** (-j + 2) * (2 ** (-j) - 1)


def card_B1(j: int) -> int:
    return 2 ** (-2 * j - 1)


def gram_matrix_S(points, j: int) -> np.ndarray:
    """<T_p N_j, T_q N_j> = (-1)^{q.k p.l - q.l p.k} <T_{p-q} N_j, N_j>."""
    pts = [tuple(map(int, p)) for p in points]
    n = len(pts)
    G = np.zeros((n, n))
    for a in range(n):
        for b in range(n):
            p, q = pts[a], pts[b]
            v = inner_Nj(p[0] - q[0], p[1] - q[1], j)
            if v:
                G[a, b] = symplectic_sign(p, q) * v
    return G


def quadratic_form_S(alpha, j: int) -> float:
    """S = ||sum alpha_{k,l} T_(k,l) N_j||^2 = ||alpha||^2 + R, assembled from inner_Nj."""
    c = alpha if isinstance(alpha, CoefficientSeq) else CoefficientSeq.from_mapping(alpha)
    if not c.coeffs:
        return 0.0
    pts = list(c.coeffs)
    v = np.array([c.coeffs[p] for p in pts])
    G = gram_matrix_S(pts, j)
    return float(np.real(v @ G @ np.conj(v)))


@dataclass
class RieszCheck:
    j: int
    trials: int
    seed: int
    observed_min: float
    observed_max: float
    eig_min: float
    eig_max: float
    card_A: int
    card_B1: int

    @property
    def passed(self) -> bool:
        tol = 1e-12
        return (self.observed_min >= RIESZ_LOWER - tol and self.observed_max <= RIESZ_UPPER + tol
                and self.eig_min >= RIESZ_LOWER - tol and self.eig_max <= RIESZ_UPPER + tol)

    def to_text(self) -> str:
        lines = [
            f"j = {self.j}",
            f"riesz_lower = {RIESZ_LOWER:.12g}",
            f"riesz_upper = {RIESZ_UPPER:.12g}",
            f"observed_min = {self.observed_min:.12g}",
            f"observed_max = {self.observed_max:.12g}",
            f"gram_eig_min = {self.eig_min:.12g}",
            f"gram_eig_max = {self.eig_max:.12g}",
            f"card_A = {self.card_A}",
            f"card_B1 = {self.card_B1}",
            f"trials = {self.trials}",
            f"seed = {self.seed}",
            f"status = {'PASS' if self.passed else 'FAIL'}",
        ]
        return "\n".join(lines) + "\n"


def riesz_check(j: int, trials: int = 500, seed: int = 0, box: int | None = None) -> RieszCheck:
    """Random unit-norm alpha on a box of lattice points, plus Gram-matrix eigenvalues."""
    j = _check_level(j)
    L = max(1, int(round(2.0 ** (-j))))
    n = box if box is not None else 2 * L + 1
    pts = [(k, l) for k in range(n) for l in range(n)]
    G = gram_matrix_S(pts, j)
    eig = np.linalg.eigvalsh(G)
    rng = np.random.default_rng(seed)
    V = rng.standard_normal((trials, len(pts))) + 1j * rng.standard_normal((trials, len(pts)))
    V /= np.linalg.norm(V, axis=1, keepdims=True)
    S = np.real(np.einsum("ti,ij,tj->t", V, G, np.conj(V)))
    a = len(index_set_A(j)) if j < 0 else 0
    b = len(index_set_B1(j)) if j < 0 else 0
    return RieszCheck(j, trials, seed, float(S.min()), float(S.max()),
                      float(eig.min()), float(eig.max()), a, b)


# -- projections and the V_0 / V_1 remark ------------------------------------------------------

def v1_piece(k: int, l: int) -> ExpPiece:
    """D_2 T_(k,l) phi_1 = 2 e^{2 pi i (l x - k y)} chi_{[k/2, (k+1)/2) x [l/2, (l+1)/2)}."""
    return ExpPiece(2.0, 2.0 * l, -2.0 * k, Rectangle(k / 2, (k + 1) / 2, l / 2, (l + 1) / 2))


def v0_not_in_v1_residual(truncation: int = 4) -> float:
    """||g||^2 - sum_{|k|,|l| <= truncation} |<g, D_2 T_(k,l) phi_1>|^2 for g = T_(1,0) phi_1.

    The V_1 system is orthonormal, so this is the squared distance of
    g = e^{-pi i y} chi_{[1,2) x [0,1)} from the truncated V_1.
    """
    if truncation < 2:
        raise ValueError("truncation must be >= 2")
    g = ExpPiece(1.0, 0.0, -1.0, Rectangle(1, 2, 0, 1))
    proj = 0.0
    for k in range(-truncation, truncation + 1):
        for l in range(-truncation, truncation + 1):
            proj += abs(piece_inner(g, v1_piece(k, l))) ** 2
    return float(piece_inner(g, g).real - proj)


def phi1_v1_residual(truncation: int = 4) -> float:
    """Distance^2 of phi_1 itself from the truncated V_1 (diagnostic)."""
    g = ExpPiece(1.0, 0.0, 0.0, Rectangle(0, 1, 0, 1))
    proj = sum(abs(piece_inner(g, v1_piece(k, l))) ** 2
               for k in range(-truncation, truncation + 1) for l in range(-truncation, truncation + 1))
    return float(1.0 - proj)


def nesting_residual(j: int, k: int, l: int) -> float:
    """Squared distance of basis_fn(j, k, l) from span{basis_fn(j+1, k', l')}.

    Uses the V_{j+1} elements whose squares meet the support, with their Gram
    matrix. Exact when the V_{j+1} system is orthonormal (j >= -1).
    """
    j = _check_level(j)
    _check_level(j + 1)
    f = basis_piece(j, k, l)
    s1 = 2.0 ** (-(j + 1))
    r = f.rect
    lo_k = int(math.floor(r.x_lo - s1)) - 1
    hi_k = int(math.ceil(r.x_hi)) + 1
    lo_l = int(math.floor(r.y_lo - s1)) - 1
    hi_l = int(math.ceil(r.y_hi)) + 1
    cands = [basis_piece(j + 1, a, b) for a in range(lo_k, hi_k + 1) for b in range(lo_l, hi_l + 1)]
    cands = [e for e in cands if not e.rect.intersect(r).empty]
    if not cands:
        return float(piece_inner(f, f).real)
    bvec = np.array([piece_inner(f, e) for e in cands])
    G = np.array([[piece_inner(e2, e1) for e2 in cands] for e1 in cands])
    coef = np.linalg.lstsq(G, bvec, rcond=None)[0]
    return float(piece_inner(f, f).real - np.real(np.vdot(coef, bvec)))


# -- Haar-type wavelet builder ------------------------------------------------------------

@dataclass
class WaveletCandidate:
    """psi built from the coefficient table, with the hypothesis residual.

    ``hypothesis_residual`` is ||D_{1/2} phi||^2 - sum |c_{k,l}|^2, the squared
    distance of D_{1/2} phi from V_0 when the translates of phi are orthonormal;
    the construction assumes it is zero.
    """
    coeffs: dict
    psi: PlanarFunction
    hypothesis_residual: float
    source: str = ""

    @property
    def hypothesis_holds(self) -> bool:
        return abs(self.hypothesis_residual) < 1e-9


def haar_coefficients(phi: PlanarFunction | None = None, cfg: QuadConfig = DEFAULT_CONFIG) -> dict:
    """c_{k,l} = <D_{1/2} phi, T_(k,l) phi> for k, l in {0, 1}.

    For supp phi in [0,1]^2 these are the only translates meeting
    supp D_{1/2} phi = [0,2]^2 on a set of positive measure.
    """
    phi = phi or spline_function(1)
    s = phi.support
    if s.x_lo < 0 or s.y_lo < 0 or s.x_hi > 1 or s.y_hi > 1:
        raise ValueError("supp phi must lie in [0,1]^2")
    half = dilate(phi, 0.5)
    return {(k, l): inner(half, twisted_translate(phi, (k, l)), cfg) for k in (0, 1) for l in (0, 1)}


def haar_coefficient(phi: PlanarFunction, k: int, l: int, cfg: QuadConfig = DEFAULT_CONFIG) -> complex:
    """Single c_{k,l} by quadrature, for any (k, l)."""
    return inner(dilate(phi, 0.5), twisted_translate(phi, (k, l)), cfg)


def cancellation_sum(c: dict) -> complex:
    """sum (-1)^{k+l} c_{k,l} c_{-k+1,l} over the table."""
    return complex(sum((-1) ** (k + l) * v * c.get((1 - k, l), 0) for (k, l), v in c.items()))


def build_psi(c: dict, phi: PlanarFunction | None = None, cfg: QuadConfig = DEFAULT_CONFIG) -> WaveletCandidate:
    """psi = sum (-1)^{k+l} conj(c_{k,l}) D_2 T_(-k+1,l) phi."""
    phi = phi or spline_function(1)
    terms = [((-1) ** (k + l) * np.conj(v), dilate(twisted_translate(phi, (1 - k, l)), 2.0))
             for (k, l), v in sorted(c.items())]
    psi = linear_combination(terms)
    s = phi.support
    if s.x_lo >= 0 and s.y_lo >= 0 and s.x_hi <= 1 and s.y_hi <= 1:
        # supp psi lies in [0,1]^2; shrink the declared box accordingly
        sup = psi.support.intersect(Rectangle(0, 1, 0, 1))
        psi = PlanarFunction(psi.evaluator, sup, psi.breaks_x, psi.breaks_y, name="psi")
    norm_half = inner(dilate(phi, 0.5), dilate(phi, 0.5), cfg).real
    resid = float(norm_half - sum(abs(v) ** 2 for v in c.values()))
    return WaveletCandidate(dict(c), psi, resid, phi.name)


def haar_phi1_exact() -> dict:
    """Closed-form coefficients for phi_1: 1/2, i/pi, -i/pi, 2/pi^2."""
    return {(0, 0): 0.5 + 0j, (1, 0): 1j / PI, (0, 1): -1j / PI, (1, 1): 2 / PI ** 2 + 0j}


# -- figure export --------------------------------------------------------------------------

def basis_fn_grid(j: int, k: int, l: int, x_range, y_range, samples: int = 65) -> np.ndarray:
    """Rows (x, y, modulus, real, imag) of basis_fn on a uniform grid."""
    if samples < 2:
        raise ValueError("samples must be >= 2")
    xs = np.linspace(x_range[0], x_range[1], samples)
    ys = np.linspace(y_range[0], y_range[1], samples)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    V = basis_fn(j, k, l)(X, Y)
    return np.column_stack([X.ravel(), Y.ravel(), np.abs(V).ravel(), V.real.ravel(), V.imag.ravel()])


__all__ = [
    "MRALevel", "ExpPiece", "WaveletCandidate", "RieszCheck", "RIESZ_LOWER", "RIESZ_UPPER",
    "basis_fn", "basis_fn_compositional", "basis_piece", "inner_Nj", "inner_Nj_integral",
    "index_set_A", "index_set_A1", "index_set_B1", "card_A", "card_B1", "gram_matrix_S",
    "quadratic_form_S", "riesz_check", "v0_not_in_v1_residual", "phi1_v1_residual",
    "nesting_residual", "haar_coefficients", "haar_coefficient", "cancellation_sum", "build_psi",
    "haar_phi1_exact", "basis_fn_grid", "n_j", "phi1",
]
