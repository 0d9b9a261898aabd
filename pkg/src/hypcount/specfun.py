"""Special functions: log-Gamma, 2F1/3F2, F_s, F(s, u), G(s), D(s), a_1/2(X).

Every function takes an optional :class:`PrecisionContext` and works at
``ctx.bits`` plus a few guard bits.  Complex results are ``mpmath.mpc``;
quantities that are real by construction come back as ``mpmath.mpf``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import mpmath
from mpmath import mpc, mpf

from .errors import BranchGapError, ConvergenceError, PoleError
from .numerics import DEFAULT_CONTEXT, PrecisionContext

log = logging.getLogger(__name__)

GUARD_BITS = 16


class Kind(str, Enum):
    PRINCIPAL = "principal"
    EXCEPTIONAL = "exceptional"
    BOTTOM = "bottom"


@dataclass(frozen=True)
class SpectralParameter:
    """s = 1/2 + it on the critical line, or real s in (1/2, 1]."""

    kind: Kind
    t: float = 0.0
    sigma: float = 0.5

    def __post_init__(self):
        if self.kind is Kind.PRINCIPAL and not self.t > 0:
            raise ValueError("principal parameters need t > 0")
        if self.kind is Kind.BOTTOM and (self.t != 0 or self.sigma != 0.5):
            raise ValueError("the bottom parameter is s = 1/2")
        if self.kind is Kind.EXCEPTIONAL and not (0.5 < self.sigma <= 1 and self.t == 0):
            raise ValueError("exceptional parameters need real s in (1/2, 1]")

    @classmethod
    def principal(cls, t) -> "SpectralParameter":
        return cls(Kind.PRINCIPAL, t=t)

    @classmethod
    def bottom(cls) -> "SpectralParameter":
        return cls(Kind.BOTTOM)

    @classmethod
    def exceptional(cls, s) -> "SpectralParameter":
        return cls(Kind.EXCEPTIONAL, sigma=s)

    @classmethod
    def from_s(cls, s) -> "SpectralParameter":
        s = mpmath.mpmathify(s)
        if mpmath.im(s) != 0:
            if mpmath.re(s) != 0.5:
                raise ValueError("complex s must lie on Re s = 1/2")
            return cls.principal(abs(mpmath.im(s)))
        if s == 0.5:
            return cls.bottom()
        return cls.exceptional(s)

    @property
    def s(self):
        if self.kind is Kind.EXCEPTIONAL:
            return mpf(self.sigma)
        return mpc(0.5, self.t)

    @property
    def eigenvalue(self):
        s = self.s
        return mpmath.re(s * (1 - s))


# -- Gamma --------------------------------------------------------------------

def _near_nonpositive_integer(z, tol) -> bool:
    z = mpmath.mpmathify(z)
    if abs(mpmath.im(z)) > tol:
        return False
    x = mpmath.re(z)
    return x < 0.5 and abs(x - mpmath.nint(x)) <= tol


def log_gamma(z, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """log Gamma(z), continued analytically off the positive axis.

    This is the standard log-Gamma (cut along the negative real axis), which
    can differ from ``log(gamma(z))`` by a multiple of 2 pi i.  Reflection for
    Re z < 1/2 and Stirling with shifts are handled by mpmath.
    """
    with mpmath.workprec(ctx.bits + GUARD_BITS):
        z = mpmath.mpmathify(z)
        if _near_nonpositive_integer(z, ctx.tol_eq):
            raise PoleError(f"Gamma has a pole at {mpmath.nstr(z, 8)}")
        return +mpmath.loggamma(z)


def _gamma_ratio(num: Sequence, den: Sequence, ctx: PrecisionContext):
    """prod Gamma(num) / prod Gamma(den) through log-Gamma sums.

    A pole in the denominator makes the ratio zero; a pole in the numerator
    is an error.
    """
    tol = ctx.tol_eq
    for x in den:
        if _near_nonpositive_integer(x, tol):
            return mpf(0)
    acc = mpc(0)
    for x in num:
        acc += log_gamma(x, ctx)
    for x in den:
        acc -= log_gamma(x, ctx)
    return mpmath.exp(acc)


# -- hypergeometric series ------------------------------------------------------

def _pfq_series(num, den, z, ctx: PrecisionContext, max_terms: int = 200000):
    """Plain power series of pFq.  Stops once the geometric tail bound
    |term| r / (1 - r) falls below 2^-bits relative to the partial sum."""
    eps = mpf(2) ** (-ctx.bits - 4)
    term = mpf(1)
    total = mpf(1)
    for n in range(max_terms):
        r = z / (n + 1)
        for a in num:
            r *= a + n
        for b in den:
            r /= b + n
        term *= r
        total += term
        if term == 0:
            return total
        ar = abs(r)
        if ar < 1 and abs(term) * ar / (1 - ar) <= eps * abs(total):
            return total
    raise ConvergenceError(f"{len(num)}F{len(den)} series did not converge in {max_terms} terms "
                           f"(|z| = {mpmath.nstr(abs(z), 5)})")


def _cancellation_guard(params, w) -> int:
    # Series with large parameters grow like exp(2 sqrt(|a b w|)) before decaying.
    size = 1
    for p in params:
        size *= max(abs(p), 1)
    return int(4 * mpmath.sqrt(size * abs(w))) + GUARD_BITS


def _is_negative_real(z) -> bool:
    return mpmath.im(z) == 0 and mpmath.re(z) < 0


def gauss_2f1(a, b, c, z, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """Gauss hypergeometric function 2F1(a, b; c; z).

    Power series for |z| <= 1/2 and for other points of the unit disc.  On the
    negative real axis the Pfaff transformation to z/(z-1) covers -3 <= z < -1/2
    and the connection formula in 1/z covers z < -3.  That formula needs
    a - b outside the integers; in the logarithmic case the value is taken from
    ``mpmath.hyp2f1``.
    """
    with mpmath.workprec(ctx.bits + GUARD_BITS):
        a, b, c, z = (mpmath.mpmathify(x) for x in (a, b, c, z))
        if _near_nonpositive_integer(c, ctx.tol_eq):
            raise PoleError("2F1 lower parameter is a non-positive integer")
        if z == 0:
            return mpf(1)
        if abs(z) <= 0.5:
            return _series_2f1(a, b, c, z, ctx)
        if _is_negative_real(z):
            if z >= -3:
                w = z / (z - 1)
                extra = _cancellation_guard((a, c - b), w)
                with mpmath.workprec(ctx.bits + extra):
                    val = (1 - z) ** (-a) * _pfq_series((a, c - b), (c,), w, ctx)
                return +val
            return _connection_inverse_z(a, b, c, z, ctx)
        if abs(z) < 1:
            return _series_2f1(a, b, c, z, ctx)
        raise ConvergenceError("2F1: z outside the unit disc and off the negative real axis")


def _series_2f1(a, b, c, z, ctx):
    extra = _cancellation_guard((a, b), z)
    with mpmath.workprec(ctx.bits + extra):
        return +_pfq_series((a, b), (c,), z, ctx)


def _connection_inverse_z(a, b, c, z, ctx):
    d = a - b
    if abs(mpmath.im(d)) <= ctx.tol_eq and abs(mpmath.re(d) - mpmath.nint(mpmath.re(d))) <= ctx.tol_eq:
        log.debug("2F1 logarithmic case a - b = %s, using mpmath.hyp2f1", mpmath.nstr(d, 5))
        return mpmath.hyp2f1(a, b, c, z)
    w = 1 / z
    mz = -z
    total = mpc(0)
    for p, q in ((a, b), (b, a)):
        coeff = _gamma_ratio((c, q - p), (q, c - p), ctx)
        if coeff == 0:
            continue
        extra = _cancellation_guard((p, p - c + 1), w)
        with mpmath.workprec(ctx.bits + extra):
            total += coeff * mz ** (-p) * _pfq_series((p, p - c + 1), (p - q + 1,), w, ctx)
    return +total


def hyp_3f2(a1, a2, a3, b1, b2, z, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """3F2 by its power series; only |z| < 1 is accepted."""
    with mpmath.workprec(ctx.bits + GUARD_BITS):
        a1, a2, a3, b1, b2, z = (mpmath.mpmathify(x) for x in (a1, a2, a3, b1, b2, z))
        for b in (b1, b2):
            if _near_nonpositive_integer(b, ctx.tol_eq):
                raise PoleError("3F2 lower parameter is a non-positive integer")
        if abs(z) >= 1:
            raise ConvergenceError("3F2 series needs |z| < 1")
        extra = _cancellation_guard((a1, a2, a3), z)
        with mpmath.workprec(ctx.bits + extra):
            return +_pfq_series((a1, a2, a3), (b1, b2), z, ctx)


# -- coefficients of the large-argument expansion ----------------------------

def coeff_gamma1(s, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """-1 / ((s - 2)(s + 1))."""
    with mpmath.workprec(ctx.bits + GUARD_BITS):
        s = mpmath.mpmathify(s)
        den = (s - 2) * (s + 1)
        if abs(den) <= ctx.tol_eq:
            raise PoleError("coeff_gamma1 has poles at s = 2 and s = -1")
        return -1 / den


def coeff_gamma2(s, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """pi Gamma(1 - s/2) Gamma(1/2 - s) / ((1 - s) Gamma((1 - s)/2)^3)."""
    with mpmath.workprec(ctx.bits + GUARD_BITS):
        s = mpmath.mpmathify(s)
        if abs(1 - s) <= ctx.tol_eq:
            raise PoleError("coeff_gamma2 has a pole at s = 1")
        for x in (1 - s / 2, mpf(0.5) - s):
            if _near_nonpositive_integer(x, ctx.tol_eq):
                raise PoleError(f"coeff_gamma2 has a pole at s = {mpmath.nstr(s, 8)}")
        h = (1 - s) / 2
        return mpmath.pi * _gamma_ratio((1 - s / 2, mpf(0.5) - s), (h, h, h), ctx) / (1 - s)


def f_su(s, u, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """F(s, u) = u^(1/2 - s) 2F1((s+1)/2, (s-1)/2; s+1/2; -u^-2), u > 0."""
    with mpmath.workprec(ctx.bits + GUARD_BITS):
        s, u = mpmath.mpmathify(s), mpmath.mpmathify(u)
        if not u > 0:
            raise ValueError("u must be positive")
        hyp = gauss_2f1((s + 1) / 2, (s - 1) / 2, s + mpf(0.5), -1 / (u * u), ctx)
        return u ** (mpf(0.5) - s) * hyp


def _real_if_real_line(s, value, ctx):
    """Drop the imaginary part for s on Re s = 1/2 or real s, after checking it."""
    s = mpmath.mpmathify(s)
    if mpmath.re(s) == 0.5 or mpmath.im(s) == 0:
        im = mpmath.im(value)
        if abs(im) > ctx.tol_quad * max(1, abs(value)):
            raise ConvergenceError(f"expected a real value, imaginary part {mpmath.nstr(im, 5)}")
        return mpmath.re(value)
    return value


def f_s_series(s, y, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """sqrt(y-1) 3F2(1, s/2, (1-s)/2; 3/2, 1/2; 1-y), valid for y < 2."""
    with mpmath.workprec(ctx.bits + GUARD_BITS):
        s, y = mpmath.mpmathify(s), mpmath.mpmathify(y)
        return mpmath.sqrt(y - 1) * hyp_3f2(1, s / 2, (1 - s) / 2, mpf(1.5), mpf(0.5), 1 - y, ctx)


def _tail_3f2(s, A, ctx):
    # 3F2(1, 3/2, 1/2; 2 - s/2, (3+s)/2; -A^-2)
    z = -1 / (A * A)
    b1, b2 = 2 - s / 2, (3 + s) / 2
    if abs(z) <= 0.75:
        return hyp_3f2(1, mpf(1.5), mpf(0.5), b1, b2, z, ctx)
    # Euler integral over the a3 = 1/2 pair, t = v^2:
    # 2 Gamma(b2) / (Gamma(1/2) Gamma(b2 - 1/2)) int_0^1 (1-v^2)^(s/2) 2F1(1, 3/2; b1; z v^2) dv
    pref = 2 * _gamma_ratio((b2,), (mpf(0.5), b2 - mpf(0.5)), ctx)
    with mpmath.workprec(ctx.bits // 2 + GUARD_BITS):
        inner = mpmath.quad(lambda v: (1 - v * v) ** (s / 2) * gauss_2f1(1, mpf(1.5), b1, z * v * v, ctx),
                            [0, mpf(0.5), 1])
    return pref * inner


def f_s_expansion(s, y, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """F_s(A^2 + 1) through the expansion around infinity.

    F_s = (1/A) / ((s-2)(s+1)) 3F2(1, 3/2, 1/2; 2-s/2, (3+s)/2; -A^-2)
          + g2(s) A^(1/2) F(s, A) + g2(1-s) A^(1/2) F(1-s, A)
    with g2 = :func:`coeff_gamma2`.  The first term is -coeff_gamma1(s)/A.
    """
    with mpmath.workprec(ctx.bits + GUARD_BITS):
        s, y = mpmath.mpmathify(s), mpmath.mpmathify(y)
        for bad in (0, 0.5, 1):
            if abs(s - bad) <= ctx.tol_eq:
                raise BranchGapError(f"expansion is singular at s = {bad}; use a_half for s = 1/2")
        A = mpmath.sqrt(y - 1)
        rA = mpmath.sqrt(A)
        head = -coeff_gamma1(s, ctx) / A * _tail_3f2(s, A, ctx)
        return (head + coeff_gamma2(s, ctx) * rA * f_su(s, A, ctx)
                + coeff_gamma2(1 - s, ctx) * rA * f_su(1 - s, A, ctx))


def f_s_eval(s, y, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """F_s(y) = sqrt(y-1) 3F2(1, s/2, (1-s)/2; 3/2, 1/2; 1-y) for y >= 1.

    Series for |1-y| < 1/2, expansion at infinity beyond.  Real s and s on the
    critical line give a real result.
    """
    y = mpmath.mpmathify(y)
    if y < 1:
        raise ValueError("F_s needs y >= 1")
    if y == 1:
        return mpf(0)
    if abs(1 - y) < 0.5:
        val = f_s_series(s, y, ctx)
    else:
        val = f_s_expansion(s, y, ctx)
    return _real_if_real_line(s, val, ctx)


# -- G(s) and the large-t asymptotics -----------------------------------------

def big_g(s, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """G(s) = (2pi)^(3/2) s^(-1/2) Gamma(1-s/2) Gamma(1/2-s) Gamma(s+1/2)
              / (2 (1-s) Gamma((1-s)/2)^3 Gamma(s/2-1/2) Gamma(s/2+1)).

    For s = 1/2 + it this is the phase-carrying amplitude of
    A^(-1/2) F_s(A^2+1) ~ G(s) B^(-it) + conj, B = A + sqrt(A^2+1).
    """
    with mpmath.workprec(ctx.bits + GUARD_BITS):
        s = mpmath.mpmathify(s)
        if abs(s) <= ctx.tol_eq or abs(1 - s) <= ctx.tol_eq:
            raise PoleError("G(s) is singular at s = 0 and s = 1")
        h = (1 - s) / 2
        num = (1 - s / 2, mpf(0.5) - s, s + mpf(0.5))
        den = (h, h, h, s / 2 - mpf(0.5), s / 2 + 1)
        for x in num:
            if _near_nonpositive_integer(x, ctx.tol_eq):
                raise PoleError(f"G(s) has a pole at s = {mpmath.nstr(s, 8)}")
        lg = -mpmath.log(s) / 2 + mpf(1.5) * mpmath.log(2 * mpmath.pi) - mpmath.log(2 * (1 - s))
        return mpmath.exp(lg) * _gamma_ratio(num, den, ctx)


def sin2_identity(t, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """Both sides of 2 sin^2(pi (1-s)/2) = 1 - i sinh(pi t) at s = 1/2 + it."""
    with mpmath.workprec(ctx.bits + GUARD_BITS):
        t = mpmath.mpmathify(t)
        s = mpc(0.5, t)
        lhs = 2 * mpmath.sin(mpmath.pi * (1 - s) / 2) ** 2
        rhs = mpc(1, -mpmath.sinh(mpmath.pi * t))
        return lhs, rhs


def luke_asymptotic_2f1(r, b, c, z, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """Main term of 2F1(r, r+c; 2r+b; z) for large |r| and real z <= 0:

        sqrt(pi) r^(-1/2) Gamma(2r+b) / (Gamma(r+c) Gamma(r+b-c))
          * sqrt(1-z)^(b-c-1/2) / (1 + sqrt(1-z))^(2r+b-1)

    The relative error is O(1/|r|).
    """
    with mpmath.workprec(ctx.bits + GUARD_BITS):
        r, b, c, z = (mpmath.mpmathify(x) for x in (r, b, c, z))
        if mpmath.im(z) != 0 or z > 0:
            raise ValueError("z must be real and <= 0")
        q = mpmath.sqrt(1 - z)
        ratio = _gamma_ratio((2 * r + b,), (r + c, r + b - c), ctx)
        log_tail = (b - c - mpf(0.5)) * mpmath.log(q) - (2 * r + b - 1) * mpmath.log(1 + q)
        return mpmath.sqrt(mpmath.pi) * r ** mpf(-0.5) * ratio * mpmath.exp(log_tail)


# -- main-term and s = 1/2 contributions --------------------------------------

def d_coeff(s, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """D(s) = Gamma(s - 1/2) Gamma((s+1)/2) / (Gamma(s/2)^2 Gamma((s+2)/2))."""
    with mpmath.workprec(ctx.bits + GUARD_BITS):
        s = mpmath.mpmathify(s)
        if mpmath.im(s) != 0:
            raise ValueError("D(s) is used for real s only")
        if abs(s - 0.5) <= ctx.tol_eq:
            raise PoleError("D(s) has a pole at s = 1/2")
        if not 0.5 < s <= 1:
            raise ValueError("D(s) needs s in (1/2, 1]")
        val = _gamma_ratio((s - mpf(0.5), (s + 1) / 2), (s / 2, s / 2, (s + 2) / 2), ctx)
        return mpmath.re(val)


def _huber_kernel_half(x, ctx):
    return gauss_2f1(mpf(0.25), mpf(0.25), mpf(0.5), -x * x, ctx)


def a_half(X, period_sum, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """(4/pi) period_sum X 3F2(1, 1/4, 1/4; 3/2, 1/2; -X^2).

    For X >= 0.9 the 3F2 is never summed: X 3F2(...; -X^2) equals
    int_0^X x K(x) / sqrt(X^2 - x^2) dx with K(x) = 2F1(1/4, 1/4; 1/2; -x^2),
    which after x = X sin(theta) becomes X int_0^(pi/2) sin(theta) K(X sin theta).
    The integral is split geometrically below theta ~ 1/X where K turns over.
    """
    with mpmath.workprec(ctx.bits + GUARD_BITS):
        X, w = mpmath.mpmathify(X), mpmath.mpmathify(period_sum)
        if w < 0:
            raise ValueError("period_sum must be >= 0")
        if not X > 0:
            raise ValueError("X must be positive")
        if w == 0:
            return mpf(0)
        if X < 0.9:
            val = X * hyp_3f2(1, mpf(0.25), mpf(0.25), mpf(1.5), mpf(0.5), -X * X, ctx)
        else:
            half_pi = mpmath.pi / 2
            pts = [mpf(0)]
            th = 1 / X
            while th < half_pi / 4:
                pts.append(th)
                th *= 4
            pts.append(half_pi)
            with mpmath.workprec(ctx.bits // 2 + GUARD_BITS):
                integral, err = mpmath.quad(lambda q: mpmath.sin(q) * _huber_kernel_half(X * mpmath.sin(q), ctx),
                                            pts, error=True)
            if err > ctx.tol_quad * abs(integral):
                raise ConvergenceError(f"a_half quadrature error {mpmath.nstr(err, 3)}")
            val = X * integral
        out = 4 / mpmath.pi * w * mpmath.re(val)
        if not out > 0:
            raise ConvergenceError("a_half must be positive")
        return out


__all__ = [
    "Kind", "SpectralParameter", "log_gamma", "gauss_2f1", "hyp_3f2", "coeff_gamma1",
    "coeff_gamma2", "f_su", "f_s_eval", "f_s_series", "f_s_expansion", "big_g",
    "sin2_identity", "luke_asymptotic_2f1", "d_coeff", "a_half",
]
