"""Exact algebra for sigma functions of telescopic curves."""
from .curve import CurveModel, build_curve, h_matrix, jacobian_G, kappa_support, phi_basis
from .degenerate import (
    DegenerateSigma,
    FormalPoint,
    abel_degenerate,
    degenerate_sigma,
    prime_degenerate,
    sigma_derivative_eval,
    verify_addition,
    verify_restriction,
    verify_th51,
    verify_th52,
    verify_th61,
)
from .expansion import LocalExpansion, assemble_qhat, omega_expansion, solve_x_series
from .polynomial import GradedPolynomial, PolyRing
from .schur import LambdaConstants, lambda_constants, schur_t, schur_z
from .semigroup import FIXTURES, Partition, SemigroupData, frobenius, is_telescopic, semigroup
from .series import BiSeries, PrecisionError, TruncatedSeries, bi_expand_inverse_diff_square, series_root

__version__ = "0.1.0"
