import cmath
import math

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cwlap import bessel
from cwlap.errors import DomainError, InvalidBodyError, MatchError
from cwlap.perturbation import (
    c_coeff,
    gamma_and_upsilon,
    omega2_simple,
    predict,
    ratio_at_zero,
    simple_weight,
    upsilon,
)
from cwlap.width_body import DeformationCoeffs, parse_coeffs

mpmath.mp.dps = 30


def F(n, m, p):
    """x J_n'(x) / J_n(x) at the exact zero j_{m,p}, in 30 digits."""
    x = mpmath.besseljzero(m, p)
    n = abs(n)
    return float(x * mpmath.besselj(n, x, derivative=1) / mpmath.besselj(n, x))


def upsilon_oracle(m, p, a):
    full = dict(a)
    full.update({-n: v.conjugate() for n, v in a.items()})
    total = 0j
    top = max(a, default=0) + m
    for l in range(-top, top + 1):
        if abs(l) == m:
            continue
        prod = full.get(m + l, 0) * full.get(m - l, 0)
        if prod:
            total += (0.5 - 0.5 * (m * m - l * l) + F(l, m, p)) * prod
    return total


odd = st.sampled_from([1, 3, 5, 7, 9])
coeff_dicts = st.dictionaries(odd, st.complex_numbers(max_magnitude=1.0, allow_nan=False, allow_infinity=False), min_size=1, max_size=4)


def test_c31_closed_form():
    j = bessel.bessel_zero(1, 1)
    assert c_coeff(3, 1, j) == pytest.approx(96 / (24 - j * j), abs=1e-10)
    assert c_coeff(3, 1, j) == pytest.approx(10.30, abs=5e-3)
    j2 = bessel.bessel_zero(1, 2)
    assert c_coeff(3, 1, j2) == pytest.approx(-3.81, abs=5e-3)


@pytest.mark.parametrize("k,m,p", [(3, 1, 1), (5, 2, 1), (7, 3, 2), (3, 6, 2), (11, 4, 3), (5, 9, 1), (3, 0, 2)])
def test_c_coeff_against_mpmath(k, m, p):
    j = bessel.bessel_zero(m, p)
    ref = 1 + k * k + F(k + m, m, p) + F(k - m, m, p)
    assert c_coeff(k, m, j) == pytest.approx(ref, abs=1e-9)
    assert c_coeff(k, m, j, closed_forms=False) == pytest.approx(ref, abs=1e-9)


def test_c1_identity():
    for m in range(1, 21):
        for p in range(1, 11):
            j = bessel.bessel_zero(m, p)
            assert abs(c_coeff(1, m, j)) <= 1e-8
            assert abs(c_coeff(1, m, j, closed_forms=False)) <= 1e-8


def test_c_coeff_domain():
    j = bessel.bessel_zero(1, 1)
    with pytest.raises(DomainError):
        c_coeff(2, 1, j)
    with pytest.raises(DomainError):
        c_coeff(3, -1, j)


def test_ratio_folds_negative_orders():
    j = bessel.bessel_zero(4, 2)
    assert ratio_at_zero(-7, 4, j) == ratio_at_zero(7, 4, j)


def test_simple_weight_against_mpmath():
    j = bessel.bessel_zero(0, 2)
    assert simple_weight(3, j) == pytest.approx(0.5 + 4.5 + F(3, 0, 2), abs=1e-10)
    # at a zero of J_0 the recurrence gives F_3 = -5 + 16 / (8 - j^2)
    assert simple_weight(3, j) == pytest.approx(16 / (8 - j * j), abs=1e-9)


def test_omega2_for_a3():
    j = bessel.bessel_zero(0, 1)
    w = omega2_simple(1, DeformationCoeffs({3: 0.1}))
    assert w == pytest.approx(2 * j * 0.01 * (5 + F(3, 0, 1)), abs=1e-12)
    assert w == pytest.approx(2 * j * 0.01 * 16 / (8 - j * j), abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(coeff_dicts, st.integers(1, 4), st.integers(1, 3))
def test_upsilon_against_brute_force(a, m, p):
    coeffs = DeformationCoeffs(a)
    j = bessel.bessel_zero(m, p)
    got = upsilon(m, j, coeffs)
    ref = upsilon_oracle(m, p, coeffs.a)
    assert abs(got - ref) <= 1e-9 * max(1.0, abs(ref))


def test_single_harmonic_upsilon_vanishes_off_diagonal():
    for k in (1, 5, 7):
        _, ups = gamma_and_upsilon(3, 1, DeformationCoeffs({k: 0.3 + 0.1j}))
        assert ups == 0.0
    _, ups = gamma_and_upsilon(3, 2, DeformationCoeffs({3: 1.0}))
    assert ups == pytest.approx(abs(0.5 - 4.5 + F(0, 3, 2)), abs=1e-10)


@settings(max_examples=40, deadline=None)
@given(coeff_dicts, coeff_dicts, st.integers(1, 30))
def test_b_coefficients_do_not_enter(a, b, kappa):
    eps = 1e-3
    with_b = predict(kappa, DeformationCoeffs(a, b), eps) if _valid(a, b, eps) else None
    without = predict(kappa, DeformationCoeffs(a), eps) if _valid(a, {}, eps) else None
    if with_b is not None and without is not None:
        assert with_b.omega2 == without.omega2


def _valid(a, b, eps):
    from cwlap.width_body import epsilon_max

    return eps < epsilon_max(DeformationCoeffs(a, b))


@settings(max_examples=40, deadline=None)
@given(coeff_dicts, st.floats(0, 2 * math.pi), st.integers(1, 30))
def test_rotation_invariance(a, psi, kappa):
    c = DeformationCoeffs(a)
    r = c.rotated(psi)
    p1 = predict(kappa, c, 0.0)
    p2 = predict(kappa, r, 0.0)
    assert p1.gamma == pytest.approx(p2.gamma, rel=1e-10, abs=1e-12)
    assert p1.upsilon_mag == pytest.approx(p2.upsilon_mag, rel=1e-10, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(coeff_dicts, st.integers(1, 4), st.integers(1, 4))
def test_closed_forms_agree_with_generic(a, m, p):
    c = DeformationCoeffs(a)
    g1, u1 = gamma_and_upsilon(m, p, c)
    g2, u2 = gamma_and_upsilon(m, p, c, closed_forms=False)
    assert g1 == pytest.approx(g2, abs=1e-8 * max(1, abs(g1)))
    assert u1 == pytest.approx(u2, abs=1e-8 * max(1, u1))


@settings(max_examples=40, deadline=None)
@given(coeff_dicts, st.integers(2, 40))
def test_branch_ordering(a, kappa):
    pred = predict(kappa, DeformationCoeffs(a), 0.0)
    lam = pred.branch_lambdas(0.01)
    assert list(lam) == sorted(lam)
    if pred.branch == "lower":
        assert pred.lambda_at(0.01) == min(lam)
    if pred.branch == "upper":
        assert pred.lambda_at(0.01) == max(lam)


def test_zero_coefficients_give_disk():
    pred = predict(6, DeformationCoeffs(), 0.3)
    assert pred.lambda_pred == bessel.bessel_zero(0, 2) ** 2


def test_frozen_predictions_for_a3():
    # matched by the particular-solution oracle to O(eps^4)
    c = DeformationCoeffs({3: 0.1})
    assert predict(1, c, 0.04).lambda_pred == pytest.approx(5.785857356364, abs=1e-10)
    assert predict(2, c, 0.04).lambda_pred == pytest.approx(14.686811044754, abs=1e-10)
    assert predict(6, c, 0.04).lambda_pred == pytest.approx(30.469873789154, abs=1e-10)
    assert predict(6, c, 0.04).lambda_pred < bessel.bessel_zero(0, 2) ** 2


def test_kappa6_coefficient():
    j = bessel.bessel_zero(0, 2)
    pred = predict(6, DeformationCoeffs({3: 1.0}), 0.0)
    assert pred.gamma == pytest.approx(32 / (8 - j * j), abs=1e-10)
    assert pred.gamma < 0


def test_double_mode_branches():
    c = parse_coeffs("a3=0.1,a5=0.05-0.03i,a7=0.02")
    lo = predict(2, c, 0.02)
    hi = predict(3, c, 0.02)
    assert lo.branch == "lower" and hi.branch == "upper"
    assert lo.omega2_branches == hi.omega2_branches
    j = bessel.bessel_zero(1, 1)
    assert hi.lambda_pred - lo.lambda_pred == pytest.approx(4 * 0.02**2 * j * j * lo.upsilon_mag, rel=1e-12)


def test_predict_errors():
    c = DeformationCoeffs({3: 0.1})
    with pytest.raises(InvalidBodyError):
        predict(1, c, 0.7)
    with pytest.raises(InvalidBodyError):
        predict(1, c, -0.1)
    with pytest.raises(MatchError):
        predict(2, c, 0.01, branch="upper")
    assert predict(2, c, 0.01, branch="lower").branch == "lower"


def test_to_dict_keys():
    d = predict(4, DeformationCoeffs({3: 0.1}), 0.01).to_dict()
    assert set(d) == {"kappa", "m", "p", "j", "branch", "gamma", "upsilon_mag", "omega2", "lambda_pred", "eps"}
    assert (d["m"], d["p"]) == (2, 1)


def test_vanishing_weights_at_m1():
    # F_0 = 0 and F_2 = -2 at zeros of J_1, so a1 and a3 cannot split lambda_2
    j = bessel.bessel_zero(1, 1)
    assert abs(upsilon(1, j, parse_coeffs("a1=0.2,a3=0.1"))) < 1e-12


def test_phase_only_changes_upsilon_phase():
    # weights with |l| = m +- 1 vanish, so the first live pair at m = 2 is (a7, a3)
    m, j = 2, bessel.bessel_zero(2, 1)
    c = parse_coeffs("a3=0.2,a7=0.1")
    u = upsilon(m, j, c)
    assert abs(u) > 1e-3
    u2 = upsilon(m, j, c.rotated(0.3))
    assert abs(u2) == pytest.approx(abs(u), rel=1e-12)
    assert cmath.phase(u2 / u) == pytest.approx(-4 * 0.3, abs=1e-12)
