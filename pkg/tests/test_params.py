import mpmath as mp
import pytest
from hypothesis import given, settings, strategies as st

from cotkahler.errors import SingularParameterError
from cotkahler.params import (LambdaFamily, check_admissibility, coefficient_rates, coefficients,
                              fd_lambda_prime_check)


mp.mp.dps = 40


def mp_coefficients(lam, dlam, A, c, t, mu=None):
    """Independent high-precision evaluation written directly from the definitions."""
    lam, dlam, A, c, t = map(mp.mpf, (lam, dlam, A, c, t))
    mu = dlam if mu is None else mp.mpf(mu)
    b1 = (-c * lam**3 - A**2 * dlam) / (A * lam * (lam + 2 * t * dlam))
    d1 = (mu * (A**2 - 2 * c * t * lam**2) - c * lam**3 - A**2 * dlam) / (A * (lam + 2 * t * dlam))
    d2 = (lam * (c * lam**3 + A**2 * dlam) + mu * A**2 * (lam + 2 * t * dlam)) / (A * (A**2 - 2 * c * t * lam**2))
    return b1, d1, d2


def test_flat_trivial():
    k = coefficients(LambdaFamily.constant(1.0), 0.0, 0.7)
    assert (k.a1, k.a2, k.b1, k.b2, k.c1, k.c2, k.d1, k.d2) == (1, 1, 0, 0, 1, 1, 0, 0)


def test_inverse_sqrt_at_one():
    k = coefficients(LambdaFamily.inverse_sqrt(1.0, 1.0), 1.0, 1.0)
    mp.mp.dps = 40
    lam = 1 / mp.sqrt(3)
    b1, d1, d2 = mp_coefficients(lam, -lam**3, 1, 1, 1)
    assert abs(k.b1) < 1e-14 and abs(b1) < 1e-35
    assert abs(d1 + mp.mpf(1) / 3) < 1e-35 and abs(d2 + mp.mpf(1) / 9) < 1e-35
    assert k.d1 == pytest.approx(-1 / 3, abs=1e-15)
    assert k.d2 == pytest.approx(-1 / 9, abs=1e-15)
    assert float(d1) == pytest.approx(k.d1, abs=1e-15)
    assert float(d2) == pytest.approx(k.d2, abs=1e-15)


def test_linear_family_b1():
    k = coefficients(LambdaFamily.power(1, 1.0), -1.0, 1.0)
    b1, _, _ = mp_coefficients(2, 1, 1, -1, 1)
    assert k.b1 == pytest.approx(7 / 8, abs=1e-15)
    assert float(b1) == pytest.approx(7 / 8, abs=1e-30)


families = st.sampled_from([
    (LambdaFamily.constant(1.3, A=1.7), 0.0),
    (LambdaFamily.power(2, 1.0, A=2.0), -1.0),
    (LambdaFamily.power(3, 0.5, A=1.0), -0.5),
    (LambdaFamily.inverse_sqrt(1.0, 1.0, A=1.0), 1.0),
    (LambdaFamily.inverse_sqrt(2.0, 0.7, A=1.4), 2.0),
])


@settings(max_examples=1000, deadline=None)
@given(families, st.floats(0.0, 5.0))
def test_coefficient_identities(fc, t):
    family, c = fc
    k = coefficients(family, c, t)
    assert k.almost_complex_residual() < 1e-12
    lam, dlam = family.eval(t)
    b1, d1, d2 = mp_coefficients(lam, dlam, family.A, c, t)
    scale = max(1.0, abs(k.b1), abs(k.d1), abs(k.d2))
    assert abs(k.b1 - float(b1)) < 1e-12 * scale
    assert abs(k.d1 - float(d1)) < 1e-12 * scale
    assert abs(k.d2 - float(d2)) < 1e-12 * scale
    # Kahler case: d1 = -c lambda^2 / A
    assert k.d1 == pytest.approx(-c * lam**2 / family.A, abs=1e-12 * scale)


def test_rates_match_finite_differences():
    family, c, t, h = LambdaFamily.power(2, 1.0, A=2.0), -1.0, 0.8, 1e-5
    r = coefficient_rates(family, c, t)
    up, down = coefficients(family, c, t + h), coefficients(family, c, t - h)
    assert r.dd1 == pytest.approx((up.d1 - down.d1) / (2 * h), rel=1e-8)
    assert r.dd2 == pytest.approx((up.d2 - down.d2) / (2 * h), rel=1e-8)
    assert r.dc2 == pytest.approx((up.c2 - down.c2) / (2 * h), rel=1e-8)


def test_admissibility_examples():
    assert check_admissibility(LambdaFamily.power(2, 1.0), -1.0, 10.0).passed
    assert check_admissibility(LambdaFamily.inverse_sqrt(1.0, 1.0), 1.0, 10.0).passed
    rep = check_admissibility(LambdaFamily.constant(1.0), 1.0, 1.0)
    assert not rep.passed
    fail = rep.first_failure()
    assert fail.name == "A^2 - 2ct lambda^2 > 0"
    assert fail.first_failure_t == 0.5


def test_admissibility_report_dict():
    d = check_admissibility(LambdaFamily.constant(1.0), 0.0, 2.0, samples=5).to_dict()
    assert d["pass"] is True
    assert [r["condition"] for r in d["conditions"]] == [
        "lambda > 0", "A^2 - 2ct lambda^2 > 0", "lambda + 2t lambda' > 0"]


def test_admissibility_bad_arguments():
    with pytest.raises(ValueError):
        check_admissibility(LambdaFamily.constant(1.0), 0.0, 1.0, samples=1)


def test_lambda_prime_check():
    assert fd_lambda_prime_check(LambdaFamily.constant(1.0), 3.0) == 0.0
    assert fd_lambda_prime_check(LambdaFamily.power(1, 1.0), 0.0) < 1e-10
    assert fd_lambda_prime_check(LambdaFamily.inverse_sqrt(1.0, 1.0), 2.0) < 1e-8
    broken = LambdaFamily.custom(lambda t: 1 + t, lambda t: 2.0)
    assert fd_lambda_prime_check(broken, 1.0) == pytest.approx(1.0)


def test_singular_denominator():
    # lambda + 2t lambda' = 1.5 - 3t vanishes at t = 1/2
    fam = LambdaFamily.custom(lambda t: 1.5 - t, lambda t: -1.0)
    with pytest.raises(SingularParameterError) as info:
        coefficients(fam, 0.0, 0.5)
    assert info.value.t == 0.5


def test_family_validation():
    with pytest.raises(ValueError):
        LambdaFamily.constant(1.0, A=-1.0)
    with pytest.raises(ValueError):
        coefficients(LambdaFamily.constant(1.0), 0.0, -0.1)


def test_second_derivative():
    fam = LambdaFamily.inverse_sqrt(1.0, 1.0)
    # lambda = (2t+1)^(-1/2): lambda'' = 3 (2t+1)^(-5/2)
    assert fam.second_derivative(1.0) == pytest.approx(3 * 3**-2.5, rel=1e-14)
    custom = LambdaFamily.custom(lambda t: 1 + t**2, lambda t: 2 * t)
    assert custom.second_derivative(0.7) == pytest.approx(2.0, rel=1e-8)
