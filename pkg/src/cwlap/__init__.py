"""Dirichlet eigenvalues of constant-width perturbations of the unit disk."""

from .bessel import (
    bessel_j,
    bessel_j_prime,
    bessel_prime_zero,
    bessel_zero,
    log_derivative,
    log_derivative_at_zero,
    ratio_closed_form,
)
from .certify import appendix_c_suite, certify_c_sign, classify, lemma6_suite, m3_branch_coefficients
from .disk_spectrum import Mode, enumerate_spectrum, indices_of_mode, mode_of_index
from .oracle_solver import SolverConfig, convergence_study, solve_index, solve_window
from .perturbation import c_coeff, gamma_and_upsilon, omega2_simple, predict
from .width_body import ConstantWidthBody, DeformationCoeffs, epsilon_max, parse_coeffs

__version__ = "0.1.0"

__all__ = [
    "ConstantWidthBody",
    "DeformationCoeffs",
    "Mode",
    "SolverConfig",
    "appendix_c_suite",
    "bessel_j",
    "bessel_j_prime",
    "bessel_prime_zero",
    "bessel_zero",
    "c_coeff",
    "certify_c_sign",
    "classify",
    "convergence_study",
    "enumerate_spectrum",
    "epsilon_max",
    "gamma_and_upsilon",
    "indices_of_mode",
    "lemma6_suite",
    "log_derivative",
    "log_derivative_at_zero",
    "m3_branch_coefficients",
    "mode_of_index",
    "omega2_simple",
    "parse_coeffs",
    "predict",
    "ratio_closed_form",
    "solve_index",
    "solve_window",
]
