import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypcount.constants import A_HALF_WINDOW, G_WINDOW, RE_G_ZERO
from hypcount.errors import BranchGapError, ConvergenceError, PoleError
from hypcount.specfun import (
    Kind,
    SpectralParameter,
    a_half,
    big_g,
    coeff_gamma1,
    coeff_gamma2,
    d_coeff,
    f_s_eval,
    f_s_expansion,
    f_s_series,
    f_su,
    gauss_2f1,
    hyp_3f2,
    log_gamma,
    luke_asymptotic_2f1,
    sin2_identity,
)

mpc, mpf = mpmath.mpc, mpmath.mpf


def rel(a, b):
    return abs(a - b) / max(abs(b), mpf(10) ** -300)


# -- parameters ----------------------------------------------------------------

def test_spectral_parameter_kinds():
    assert SpectralParameter.from_s(mpc(0.5, 3)).kind is Kind.PRINCIPAL
    assert SpectralParameter.from_s(0.5).kind is Kind.BOTTOM
    p = SpectralParameter.from_s(0.8)
    assert p.kind is Kind.EXCEPTIONAL and p.eigenvalue == pytest.approx(0.16)
    assert SpectralParameter.principal(2).eigenvalue == pytest.approx(4.25)


@pytest.mark.parametrize("bad", [lambda: SpectralParameter.principal(0),
                                 lambda: SpectralParameter.exceptional(0.4),
                                 lambda: SpectralParameter.exceptional(1.2),
                                 lambda: SpectralParameter.from_s(mpc(0.3, 1))])
def test_spectral_parameter_rejects(bad):
    with pytest.raises(ValueError):
        bad()


# -- Gamma ---------------------------------------------------------------------

def test_log_gamma_matches_reference(ctx):
    with mpmath.workprec(ctx.bits):
        for z in (mpf(0.5), mpf(7.25), mpc(3, 40), mpc(-2.5, 0.1), mpc(0.25, -100)):
            assert rel(mpmath.exp(log_gamma(z, ctx)), mpmath.gamma(z)) < 1e-30


def test_log_gamma_poles(ctx):
    for z in (0, -1, -7):
        with pytest.raises(PoleError):
            log_gamma(z, ctx)


@settings(max_examples=40, deadline=None)
@given(st.floats(-6, 6), st.floats(-6, 6))
def test_reflection(x, y):
    from hypcount.numerics import DEFAULT_CONTEXT as ctx
    z = mpc(x, y)
    if abs(y) < 1e-3 and abs(x - round(x)) < 1e-3:
        return
    with mpmath.workprec(ctx.bits):
        v = mpmath.exp(log_gamma(z, ctx) + log_gamma(1 - z, ctx)) * mpmath.sin(mpmath.pi * z) / mpmath.pi
        assert abs(v - 1) < 1e-20


# -- hypergeometric -------------------------------------------------------------

CASES_2F1 = [
    (0.3, 0.7, 1.5, -0.7),
    (mpc(1, 2), mpc(-0.5, 2), mpc(1, 1), -2.5),
    (0.25, 0.75, 1.2, -40),
    (mpc(0.75, 3), mpc(-0.25, -3), 0.5, -1000),
    (0.5, 1.5, 2, -10),  # a - b integer
    (0.2, 0.3, 0.9, mpc(0.3, 0.6)),
]


@pytest.mark.parametrize("a,b,c,z", CASES_2F1)
def test_gauss_2f1_matches_reference(ctx, a, b, c, z):
    with mpmath.workprec(ctx.bits + 16):
        assert rel(gauss_2f1(a, b, c, z, ctx), mpmath.hyp2f1(a, b, c, z)) < 1e-30


def test_gauss_2f1_edges(ctx):
    assert gauss_2f1(2, 3, 4, 0, ctx) == 1
    with pytest.raises(PoleError):
        gauss_2f1(1, 1, -2, 0.3, ctx)
    with pytest.raises(ConvergenceError):
        gauss_2f1(1, 1, 2, 2, ctx)


def test_hyp_3f2(ctx):
    with mpmath.workprec(ctx.bits + 16):
        ref = mpmath.hyp3f2(1, 0.3, 0.4, 1.5, 0.5, -0.9)
    assert rel(hyp_3f2(1, 0.3, 0.4, 1.5, 0.5, -0.9, ctx), ref) < 1e-30
    with pytest.raises(ConvergenceError):
        hyp_3f2(1, 1, 1, 2, 2, -1.5, ctx)
    with pytest.raises(PoleError):
        hyp_3f2(1, 1, 1, 0, 2, 0.5, ctx)


def test_luke_error_is_order_one_over_r(ctx):
    errs = []
    with mpmath.workprec(ctx.bits):
        for r in (25, 50, 100):
            r = mpf(r)
            exact = mpmath.hyp2f1(r, r + 0.3, 2 * r + 0.8, -3)
            errs.append(abs(luke_asymptotic_2f1(r, 0.8, 0.3, -3, ctx) / exact - 1))
    # halving each time r doubles
    for a, b in zip(errs, errs[1:]):
        assert 1.8 < a / b < 2.2
    with pytest.raises(ValueError):
        luke_asymptotic_2f1(10, 1, 1, 0.5, ctx)


# -- F_s and friends ---------------------------------------------------------------

@pytest.mark.parametrize("s", [mpc(0.5, 3), mpf("0.7"), mpc(0.5, 12)])
@pytest.mark.parametrize("y", [1.3, 1.8])
def test_fs_routes_overlap(ctx, s, y):
    # the series and the expansion at infinity share the window 1 < y < 2
    a, b = f_s_series(s, y, ctx), f_s_expansion(s, y, ctx)
    assert abs(a - b) <= ctx.tol_quad * max(1, abs(a))


def test_fs_eval_is_real_on_critical_line(ctx):
    for y in (1.2, 4, 50):
        v = f_s_eval(mpc(0.5, 4), y, ctx)
        assert isinstance(v, mpmath.mpf)
    assert f_s_eval(mpc(0.5, 4), 1, ctx) == 0
    with pytest.raises(ValueError):
        f_s_eval(mpc(0.5, 4), 0.5, ctx)


def test_fs_expansion_singular_points(ctx):
    for s in (0, 0.5, 1):
        with pytest.raises(BranchGapError):
            f_s_expansion(s, 5, ctx)


def test_coefficients(ctx):
    with mpmath.workprec(ctx.bits):
        assert rel(coeff_gamma1(mpf(0.5), ctx), mpf(1) / mpf(2.25)) < 1e-30
        assert rel(d_coeff(1, ctx), 2 / mpmath.pi) < 1e-30
    for bad in (2, -1):
        with pytest.raises(PoleError):
            coeff_gamma1(bad, ctx)
    with pytest.raises(PoleError):
        coeff_gamma2(1, ctx)
    with pytest.raises(PoleError):
        d_coeff(0.5, ctx)
    with pytest.raises(ValueError):
        d_coeff(mpc(0.7, 1), ctx)


def test_f_su_rejects_nonpositive_u(ctx):
    with pytest.raises(ValueError):
        f_su(0.7, 0, ctx)


# -- G(s) ----------------------------------------------------------------------------

def test_g_poles(ctx):
    for s in (0, 1):
        with pytest.raises(PoleError):
            big_g(s, ctx)


def test_g_magnitude_window(ctx):
    vals = [float(mpmath.sqrt(t) * abs(big_g(mpc(0.5, t), ctx))) for t in (5, 20, 80, 500)]
    assert all(G_WINDOW[0] <= v <= G_WINDOW[1] for v in vals)
    # limit sqrt(pi/8)
    far = float(mpmath.sqrt(10 ** 6) * abs(big_g(mpc(0.5, 10 ** 6), ctx)))
    assert far == pytest.approx(float(mpmath.sqrt(mpmath.pi / 8)), rel=1e-5)


def test_re_g_sign_change(ctx):
    below = mpmath.re(big_g(mpc(0.5, RE_G_ZERO - 1e-6), ctx))
    above = mpmath.re(big_g(mpc(0.5, RE_G_ZERO + 1e-6), ctx))
    assert below < 0 < above


def test_sin2_identity(ctx):
    for t in (0.5, 7, 30):
        lhs, rhs = sin2_identity(t, ctx)
        assert abs(lhs - rhs) / abs(rhs) < 1e-20


# -- a_1/2 ---------------------------------------------------------------------------

@pytest.mark.parametrize("X", [0.5, 0.89, 0.91, 2, 10])
def test_a_half_matches_direct_3f2(ctx, X):
    with mpmath.workprec(ctx.bits + 16):
        ref = 4 / mpmath.pi * X * mpmath.hyp3f2(1, 0.25, 0.25, 1.5, 0.5, -mpf(X) ** 2)
    assert rel(a_half(X, 1, ctx), ref) < 1e-17


def test_a_half_scaling_and_window(ctx):
    assert a_half(50, 0, ctx) == 0
    assert rel(a_half(50, 3, ctx), 3 * a_half(50, 1, ctx)) < ctx.tol_quad
    rho = float(a_half(1e4, 1, ctx) / (100 * mpmath.log(1e4)))
    assert A_HALF_WINDOW[0] <= rho <= A_HALF_WINDOW[1]
    with pytest.raises(ValueError):
        a_half(10, -1, ctx)
    with pytest.raises(ValueError):
        a_half(0, 1, ctx)
