"""Command-line front end.

    twisted-splines eval N X Y
    twisted-splines grid {phi_n N | tensor_bspline N | basis_fn J K L} [--samples S] [--xrange A B] [--yrange A B]
    twisted-splines report {gramian | riesz | cphi2 | pou | mra J | moments N}

Exit codes: 0 success, 2 usage error, 3 numerical certification failure.
"""
from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import gram, latticesums, mra, splines
from .quad import QuadConfig, QuadratureError

OUTDIR_ENV = "TWISTED_SPLINES_OUTDIR"
EXIT_OK, EXIT_USAGE, EXIT_CERT = 0, 2, 3


class CertificationFailure(RuntimeError):
    pass


@dataclass(frozen=True)
class GridSpec:
    x_range: tuple
    y_range: tuple
    samples_per_axis: int

    def __post_init__(self):
        if self.samples_per_axis < 2:
            raise ValueError("samples per axis must be >= 2")
        if not (self.x_range[0] < self.x_range[1] and self.y_range[0] < self.y_range[1]):
            raise ValueError("ranges must be nonempty")

    def mesh(self):
        xs = np.linspace(*self.x_range, self.samples_per_axis)
        ys = np.linspace(*self.y_range, self.samples_per_axis)
        return np.meshgrid(xs, ys, indexing="ij")


@dataclass(frozen=True)
class RunConfig:
    tolerance: float
    nodes: int
    radius: int
    seed: int
    out: str | None

    @property
    def quad(self) -> QuadConfig:
        return QuadConfig(node_count=self.nodes, tolerance=self.tolerance)

    def header(self, command: str) -> str:
        return (f"# command: {command}\n# tolerance: {self.tolerance:g}\n# nodes: {self.nodes}\n"
                f"# radius: {self.radius}\n# seed: {self.seed}\n")


def _fmt_fixed(v: float) -> str:
    v = round(float(v), 12)
    return repr(v + 0.0)


def _fmt(v: float) -> str:
    return f"{v:.11e}"


def _output_path(cfg: RunConfig, default_name: str) -> str:
    if cfg.out:
        return cfg.out
    return os.path.join(os.environ.get(OUTDIR_ENV, "."), default_name)


def _flag(ok: bool) -> str:
    return "PASS" if ok else "FAIL"


# -- commands --------------------------------------------------------------------------

def cmd_eval(n: int, x: float, y: float, cfg: RunConfig) -> str:
    if n < 1:
        raise ValueError("order must be >= 1")
    v = complex(splines.phi_n(n, x, y, cfg.quad))
    return f"{_fmt_fixed(v.real)} {_fmt_fixed(v.imag)}"


def cmd_grid(target: list[str], spec: GridSpec, cfg: RunConfig) -> str:
    kind = target[0]
    X, Y = spec.mesh()
    if kind == "phi_n":
        n = int(target[1])
        V = np.asarray(splines.phi_n(n, X, Y, cfg.quad), dtype=complex)
        cols, rows = "x,y,re,im", [X.ravel(), Y.ravel(), V.real.ravel(), V.imag.ravel()]
        name = f"phi_{n}.csv"
    elif kind == "tensor_bspline":
        n = int(target[1])
        V = np.asarray(splines.tensor_bspline(n, X, Y), dtype=complex)
        cols, rows = "x,y,re,im", [X.ravel(), Y.ravel(), V.real.ravel(), V.imag.ravel()]
        name = f"tensor_bspline_{n}.csv"
    elif kind == "basis_fn":
        j, k, l = (int(t) for t in target[1:4])
        V = mra.basis_fn(j, k, l)(X, Y)
        cols = "x,y,modulus,re,im"
        rows = [X.ravel(), Y.ravel(), np.abs(V).ravel(), V.real.ravel(), V.imag.ravel()]
        name = f"basis_fn_{j}_{k}_{l}.csv"
    else:
        raise ValueError(f"unknown grid target {kind!r}")
    path = _output_path(cfg, name)
    body = "\n".join(",".join(_fmt(c) for c in row) for row in zip(*rows))
    header = cfg.header("grid " + " ".join(target))
    header += f"# x_range: {spec.x_range[0]:g} {spec.x_range[1]:g}\n# y_range: {spec.y_range[0]:g} {spec.y_range[1]:g}\n"
    header += f"# samples_per_axis: {spec.samples_per_axis}\n"
    with open(path, "w") as fh:
        fh.write(header + cols + "\n" + body + "\n")
    return path


def _report_gramian(cfg: RunConfig) -> str:
    rep = gram.gramian_phi2_integrals(cfg.quad, seed=cfg.seed)
    text = rep.to_text()
    t = gram.QUOTED_TARGETS
    lines = []
    for key in ("i1", "i3", "i7"):
        ok = abs(complex(getattr(rep, key)).real - t[key].real) <= 1e-3 and \
            abs(complex(getattr(rep, key)).imag - t[key].imag) <= 1e-3
        lines.append(f"quoted_{key} = {t[key].real:.6g} {t[key].imag:+.6g}i {_flag(ok)}")
    lines.append(f"quoted_i9 = {t['i9']:.6g} {_flag(abs(rep.i9.real - t['i9']) <= 1e-3)}")
    lines.append(f"quoted_lower_times_pi4 = {t['lower']:.6g} "
                 f"{_flag(abs(rep.lower_bound * np.pi ** 4 - t['lower']) <= 1e-3)}")
    lines.append(f"quoted_upper_times_pi4 = {t['upper']:.6g} "
                 f"{_flag(abs(rep.upper_bound * np.pi ** 4 - t['upper']) <= 1e-3)}")
    lines.append(f"riesz_certified = {_flag(rep.certified)}")
    if not rep.certified:
        raise CertificationFailure(text + "\n".join(lines) + "\n")
    return text + "\n".join(lines) + "\n"


def _report_riesz(cfg: RunConfig, trials: int = 100) -> str:
    rep = gram.gramian_phi2_integrals(cfg.quad, seed=cfg.seed)
    table = gram.GramTable(splines.spline_function(2), cfg.quad)
    rng = np.random.default_rng(cfg.seed)
    vals = []
    for _ in range(trials):
        c = gram.CoefficientSeq.random(rng, radius=2)
        vals.append(gram.quadratic_form(table.f, c, cfg.quad, table) / c.norm2())
    lo, hi = min(vals), max(vals)
    ok = lo >= rep.lower_bound - 1e-12 and hi <= rep.upper_bound + 1e-12
    text = (f"lower = {rep.lower_bound:.12g}\nupper = {rep.upper_bound:.12g}\n"
            f"observed_min = {lo:.12g}\nobserved_max = {hi:.12g}\ntrials = {trials}\n"
            f"seed = {cfg.seed}\nstatus = {_flag(ok)}\n")
    if not ok:
        raise CertificationFailure(text)
    return text


def _report_cphi2(cfg: RunConfig) -> str:
    rep = latticesums.c_phi2(cfg.radius, cfg.quad)
    ok = abs(rep.partial_sum.real - latticesums.QUOTED_PARTIAL_SUM) <= 5e-7
    text = rep.to_text() + (f"quoted_partial_sum = {latticesums.QUOTED_PARTIAL_SUM:.9g} {_flag(ok)}\n")
    if not rep.envelope_validated:
        raise CertificationFailure(text)
    return text


def _report_pou(cfg: RunConfig) -> str:
    M = max(1, cfg.radius)
    tr = latticesums.pou_phi1_truncated(M)
    rng = np.random.default_rng(cfg.seed)
    x = rng.uniform(-3, 3, 100)
    y = rng.uniform(-3, 3, 100)
    err = float(np.max(np.abs(latticesums.pointwise_pou_phi1(x, y)
                              - latticesums.pointwise_pou_phi1_direct(x, y, 4))))
    ok = err <= 1e-12
    text = (f"M = {M}\nA = {tr.A:.12g}\nB_plus_C = {tr.B_plus_C:.12g}\ntotal = {tr.total:.12g}\n"
            f"pointwise_max_error = {err:.3e}\npointwise_status = {_flag(ok)}\nseed = {cfg.seed}\n")
    if not ok:
        raise CertificationFailure(text)
    return text


def _report_mra(j: int, cfg: RunConfig) -> str:
    chk = mra.riesz_check(j, trials=500, seed=cfg.seed)
    text = chk.to_text()
    if j < 0:
        text += (f"card_A_expected = {mra.card_A(j)} {_flag(chk.card_A == mra.card_A(j))}\n"
                 f"card_B1_expected = {mra.card_B1(j)} {_flag(chk.card_B1 == mra.card_B1(j))}\n")
    if not chk.passed:
        raise CertificationFailure(text)
    return text


def _report_moments(n: int, cfg: RunConfig) -> str:
    mf = splines.moment_functional(n, cfg.quad)
    text = (f"n = {n}\nmoment_re = {mf.value.real:.12g}\nmoment_im = {mf.value.imag:.12g}\n"
            f"error_estimate = {mf.error_estimate:.3e}\n")
    if n == 2:
        text += f"closed_form = {splines.moment_closed_phi2().real:.12g}\n"
    return text


def cmd_report(which: list[str], cfg: RunConfig) -> str:
    kind = which[0]
    if kind == "gramian":
        return _report_gramian(cfg)
    if kind == "riesz":
        return _report_riesz(cfg)
    if kind == "cphi2":
        return _report_cphi2(cfg)
    if kind == "pou":
        return _report_pou(cfg)
    if kind == "mra":
        if len(which) < 2:
            raise ValueError("report mra needs a level j")
        return _report_mra(int(which[1]), cfg)
    if kind == "moments":
        if len(which) < 2:
            raise ValueError("report moments needs an order n")
        return _report_moments(int(which[1]), cfg)
    raise ValueError(f"unknown report {kind!r}")


# -- entry point -----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-10, help="quadrature tolerance")
    common.add_argument("--nodes", type=int, default=16, help="Gauss-Legendre nodes per cell")
    common.add_argument("--radius", type=int, default=latticesums.DEFAULT_RADIUS,
                        help="truncation radius for lattice sums")
    common.add_argument("--seed", type=int, default=0, help="random seed")
    common.add_argument("--out", default=None,
                        help=f"output file (default directory from ${OUTDIR_ENV})")

    p = argparse.ArgumentParser(prog="twisted-splines", description="Twisted B-splines on the plane.")
    sub = p.add_subparsers(dest="command", required=True)
    pe = sub.add_parser("eval", parents=[common], help="evaluate phi_n at a point")
    pe.add_argument("n", type=int)
    pe.add_argument("x", type=float)
    pe.add_argument("y", type=float)
    pg = sub.add_parser("grid", parents=[common], help="write a CSV grid")
    pg.add_argument("target", nargs="+", help="phi_n N | tensor_bspline N | basis_fn J K L")
    pg.add_argument("--samples", type=int, default=65)
    pg.add_argument("--xrange", type=float, nargs=2, default=None)
    pg.add_argument("--yrange", type=float, nargs=2, default=None)
    pr = sub.add_parser("report", parents=[common], help="print a key-value report")
    pr.add_argument("which", nargs="+", help="gramian | riesz | cphi2 | pou | mra J | moments N")
    return p


def _default_range(target: list[str]) -> tuple:
    kind = target[0]
    if kind in ("phi_n", "tensor_bspline") and len(target) > 1:
        n = int(target[1])
        return (0.0, float(n)), (0.0, float(n))
    if kind == "basis_fn" and len(target) > 3:
        j, k, l = (int(t) for t in target[1:4])
        s = 2.0 ** (-j)
        return (k - s / 2, k + 1.5 * s), (l - s / 2, l + 1.5 * s)
    return (0.0, 2.0), (0.0, 2.0)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code is not None else EXIT_USAGE
    try:
        cfg = RunConfig(args.tol, args.nodes, args.radius, args.seed, args.out)
        cfg.quad  # validates
        if args.command == "eval":
            print(cmd_eval(args.n, args.x, args.y, cfg))
        elif args.command == "grid":
            xr, yr = _default_range(args.target)
            spec = GridSpec(tuple(args.xrange or xr), tuple(args.yrange or yr), args.samples)
            print(cmd_grid(args.target, spec, cfg))
        else:
            text = cfg.header("report " + " ".join(args.which)) + cmd_report(args.which, cfg)
            sys.stdout.write(text)
            if args.out:
                with open(args.out, "w") as fh:
                    fh.write(text)
    except CertificationFailure as e:
        sys.stdout.write(str(e))
        return EXIT_CERT
    except QuadratureError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CERT
    except (ValueError, IndexError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
