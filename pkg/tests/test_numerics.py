import random

import gmpy2
import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypcount.errors import DegenerateError, NotHyperbolic, PrecisionOverflow
from hypcount.numerics import (
    Mat2,
    PrecisionContext,
    b_invariant,
    conjugate,
    diagonalize_primitive_hyperbolic,
    geodesic_axis_distance,
    mat_mul,
)


def close(x, y, tol):
    return abs(float(x) - float(y)) <= tol


def test_context_tolerances_are_ordered():
    for bits in (53, 128, 256):
        c = PrecisionContext(bits)
        assert c.tol_eq < c.tol_quad < 1
        assert c.tol_eq == 2.0 ** (-bits / 2)


def test_context_rejects_bad_bits():
    with pytest.raises(ValueError):
        PrecisionContext(8)


def test_identity_products(ctx):
    I = Mat2.identity(ctx)
    assert mat_mul(I, I, ctx) == I
    D = Mat2.diag(3, ctx)
    D2 = mat_mul(D, D, ctx)
    assert D2.max_abs_diff(Mat2.diag(9, ctx)) <= ctx.tol_eq


def test_minus_identity_is_identity_in_psl(ctx):
    J = Mat2.of(0, 1, -1, 0, ctx)
    assert mat_mul(J, J, ctx).max_abs_diff(Mat2.identity(ctx)) <= ctx.tol_eq


def test_sign_normalization(ctx):
    g = Mat2.of(-2, -1, -1, -1, ctx)
    assert g.a > 0 and g.entries == Mat2.of(2, 1, 1, 1, ctx).entries
    # first nonzero entry decides when a vanishes
    h = Mat2.of(0, -1, 1, 0, ctx)
    assert h.b > 0


def test_non_unimodular_rejected(ctx):
    with pytest.raises(DegenerateError):
        Mat2.of(2, 0, 0, 1, ctx)


def test_overflow_signal():
    small = PrecisionContext(24)
    g = Mat2.diag(2 ** 7, small)
    with pytest.raises(PrecisionOverflow):
        mat_mul(g, g, small)


def test_b_invariant_examples(ctx):
    assert b_invariant(Mat2.identity(ctx)) == 1
    assert close(b_invariant(Mat2.diag(5, ctx)), 1, ctx.tol_eq)
    assert b_invariant(Mat2.of(0, 1, -1, 0, ctx)) == -1


def _random_sl2(rng, ctx):
    with ctx.work():
        a, b, c = (ctx.real(rng.uniform(-3, 3)) for _ in range(3))
        if abs(a) < 0.1:
            a = ctx.real(0.5)
        d = (1 + b * c) / a
        return Mat2.of(a, b, c, d, ctx)


def test_b_invariant_of_inverse(ctx):
    rng = random.Random(3)
    for _ in range(50):
        g = _random_sl2(rng, ctx)
        assert close(b_invariant(g.inverse(ctx)), b_invariant(g), 1e-30)


def test_associativity(ctx):
    rng = random.Random(5)
    for _ in range(30):
        x, y, z = (_random_sl2(rng, ctx) for _ in range(3))
        lhs = mat_mul(mat_mul(x, y, ctx), z, ctx)
        rhs = mat_mul(x, mat_mul(y, z, ctx), ctx)
        assert lhs.max_abs_diff(rhs) <= 8 * ctx.tol_eq


def _boost(a, ctx):
    with ctx.work():
        a = mpmath.mpf(a)
        return Mat2.of(mpmath.cosh(a), mpmath.sinh(a), mpmath.sinh(a), mpmath.cosh(a), ctx)


def test_axis_distance_examples(ctx):
    with ctx.work():
        th = mpmath.pi / 6
        rot = Mat2.of(mpmath.cos(th), -mpmath.sin(th), mpmath.sin(th), mpmath.cos(th), ctx)
    assert geodesic_axis_distance(rot, ctx) == 1
    boost = _boost(0.5, ctx)
    for method in ("endpoints", "minimize"):
        d = geodesic_axis_distance(boost, ctx, method)
        assert close(d, mpmath.cosh(1), ctx.tol_quad)
    assert geodesic_axis_distance(Mat2.diag(3, ctx), ctx) == 1


@settings(max_examples=60, deadline=None)
@given(st.floats(-4, 4), st.floats(-4, 4), st.floats(0.2, 4), st.booleans())
def test_axis_distance_matches_b(b, c, a, flip):
    ctx = PrecisionContext(128)
    with ctx.work():
        A = ctx.real(-a if flip else a)
        g = Mat2.of(A, b, c, (1 + ctx.real(b) * ctx.real(c)) / A, ctx)
        B = b_invariant(g)
        expect = max(abs(B), 1)
        got = geodesic_axis_distance(g, ctx)
        assert abs(got - expect) <= ctx.tol_quad * expect


def test_diagonalize_examples(ctx):
    P, m = diagonalize_primitive_hyperbolic(Mat2.diag(2, ctx), ctx)
    assert close(m, 2, ctx.tol_eq)
    g = Mat2.of(2, 1, 1, 1, ctx)
    P, m = diagonalize_primitive_hyperbolic(g, ctx)
    with ctx.work():
        assert abs(m - (3 + gmpy2.sqrt(5)) / 2) <= ctx.tol_eq
    assert conjugate(P, g, ctx).max_abs_diff(Mat2.diag(m, ctx)) <= ctx.tol_eq
    boost = _boost(1, ctx)
    P, m = diagonalize_primitive_hyperbolic(boost, ctx)
    assert close(m, mpmath.e, 1e-30)
    assert conjugate(P, boost, ctx).max_abs_diff(Mat2.diag(m, ctx)) <= ctx.tol_eq


def test_diagonalize_rejects_elliptic(ctx):
    with pytest.raises(NotHyperbolic):
        diagonalize_primitive_hyperbolic(Mat2.of(1, 1, -1, 0, ctx), ctx)


def test_diagonalize_reconstruct_random(ctx):
    rng = random.Random(11)
    done = 0
    while done < 20:
        g = _random_sl2(rng, ctx)
        if abs(g.trace()) <= 2.01:
            continue
        P, m = diagonalize_primitive_hyperbolic(g, ctx)
        assert conjugate(P, g, ctx).max_abs_diff(Mat2.diag(m, ctx)) <= ctx.tol_eq
        done += 1
