"""Twisted B-splines on the plane.

phi_1 is the indicator of [0,1)^2 and phi_{n+1} is the twisted convolution
of phi_n with phi_1. The package evaluates these splines, their twisted
translates and Weyl kernels, certifies Riesz bounds, sums the
partition-of-unity series and builds the associated twisted MRA.
"""
from .quad import QuadConfig, QuadratureError, Rectangle, integrate_1d, integrate_2d
from .specfun import ci, ei_imag, si, trig_integrals
from .splines import TwistedSpline, moment, phi1, phi2_closed, phi_n, spline_function
from .twistops import (LatticePoint, PlanarFunction, dilate, lambda_twisted_translate,
                       twisted_convolve, twisted_translate)
from .gram import CoefficientSeq, GramianReport, gramian_phi2_integrals, quadratic_form, twisted_inner
from .weyl import hs_norm, kernel_compose, kernel_phi_n, pi_action
from .latticesums import SumReport, c_phi2, calI, pou_phi1_truncated
from .mra import basis_fn, build_psi, haar_coefficients, inner_Nj, quadratic_form_S, v0_not_in_v1_residual

__version__ = "0.1.0"
