"""Mollifier, the Weyl transform pair, and the Huber transform d_t(f).

The mollifier is psi = (phi * phi) / Z^2 with the standard bump
phi(x) = exp(-1 / (1 - 4x^2)) on (-1/2, 1/2) and Z = int phi, so psi lives on
[-1, 1], integrates to 1 and has psi_hat = (phi_hat / Z)^2 >= 0.  psi is stored
as a piecewise Chebyshev table (``data/psi_cheb.json``, rebuilt on demand for
precisions above the shipped one).

Weyl pair convention used throughout::

    g(y) = int_y^oo f(t) / (sqrt(t - y) sqrt(t - 1)) dt            (y >= 1)
    f(u) = -(sqrt(u - 1) / pi) int_u^oo g'(y) / sqrt(y - u) dy

These are exact inverses.  The relative trace formula is usually written with
half of this g, ``int_{sqrt(u-1)}^oo f(x^2+1) / sqrt(x^2 - (u-1)) dx``;
:func:`weyl_g_from_f` returns that form with ``convention="trace"``.
"""

from __future__ import annotations

import bisect
import json
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from pathlib import Path
from typing import Callable, List, Optional, Tuple

import gmpy2
import mpmath
from mpmath import mpc, mpf

from .errors import ConvergenceError, RouteDisagreement
from .numerics import DEFAULT_CONTEXT, PrecisionContext
from mpmath.calculus.quadrature import GaussLegendre

from .specfun import big_g, coeff_gamma1, coeff_gamma2, f_su, gauss_2f1, _tail_3f2

log = logging.getLogger(__name__)

PSI_TABLE = Path(__file__).parent / "data" / "psi_cheb.json"

# Quadratures run at half the working precision: their target is tol_quad.
def _qprec(ctx: PrecisionContext) -> int:
    return ctx.bits // 4 + 32


# -- base bump and its self-convolution ---------------------------------------

def bump(x):
    """phi(x) = exp(-1/(1 - 4x^2)) on (-1/2, 1/2), zero outside."""
    d = 1 - 4 * x * x
    return mpmath.exp(-1 / d) if d > 0 else mpf(0)


def _conv(x):
    lo, hi = x - mpf(0.5), mpf(0.5)
    if lo >= hi:
        return mpf(0)
    return mpmath.quad(lambda y: bump(y) * bump(x - y), [lo, (lo + hi) / 2, hi])


def _cheb_fit(func, a, b, degree):
    """Chebyshev coefficients of the degree-``degree`` interpolant on [a, b]."""
    n = degree + 1
    nodes = [mpmath.cos(mpmath.pi * (k + mpf(0.5)) / n) for k in range(n)]
    vals = [func((a + b) / 2 + (b - a) / 2 * x) for x in nodes]
    c = [2 * mpmath.fsum(vals[k] * mpmath.cos(mpmath.pi * j * (k + mpf(0.5)) / n) for k in range(n)) / n
         for j in range(n)]
    c[0] /= 2
    return c


def _to_mpfr(x):
    sign, man, exp, _ = x._mpf_
    if not man:
        return gmpy2.mpfr(0)
    v = gmpy2.mul_2exp(gmpy2.mpfr(man), exp)
    return -v if sign else v


def _to_mpf(x):
    if not x:
        return mpf(0)
    man, exp = x.as_mantissa_exp()
    return mpf(mpmath.libmp.from_man_exp(int(man), int(exp)))


class ChebPieces:
    """Piecewise Chebyshev interpolant, evaluated with gmpy2; zero outside."""

    def __init__(self, breaks, coeffs, prec: int):
        self.prec = prec
        with gmpy2.context(gmpy2.get_context(), precision=prec):
            self.breaks = [gmpy2.mpfr(str(b)) if isinstance(b, str) else _to_mpfr(mpmath.mpmathify(b))
                           for b in breaks]
            self.coeffs = [tuple(gmpy2.mpfr(c) if isinstance(c, str) else _to_mpfr(c) for c in piece)
                           for piece in coeffs]

    @classmethod
    def fit(cls, func, breaks, degree: int, prec: int) -> "ChebPieces":
        coeffs = [_cheb_fit(func, a, b, degree) for a, b in zip(breaks[:-1], breaks[1:])]
        return cls(breaks, coeffs, prec)

    def __call__(self, x):
        with gmpy2.context(gmpy2.get_context(), precision=self.prec):
            return _to_mpf(self.eval_mpfr(_to_mpfr(mpmath.mpmathify(x))))

    def eval_mpfr(self, x):
        """Evaluate at an mpfr; the caller sets the gmpy2 precision."""
        br = self.breaks
        if x < br[0] or x > br[-1]:
            return gmpy2.mpfr(0)
        i = min(max(bisect.bisect_right(br, x) - 1, 0), len(br) - 2)
        a, b = br[i], br[i + 1]
        u = (2 * x - a - b) / (b - a)
        c = self.coeffs[i]
        u2 = 2 * u
        b1 = b2 = gmpy2.mpfr(0)
        for cj in reversed(c[1:]):
            b1, b2 = u2 * b1 - b2 + cj, b1
        return u * b1 - b2 + c[0]


def build_psi_table(bits: int, pieces: int = 16, degree: int = 24) -> dict:
    """Chebyshev coefficients of psi on the pieces [i/P, (i+1)/P] of [0, 1]."""
    with mpmath.workprec(bits + 16):
        Z = 2 * mpmath.quad(bump, [0, mpf(0.25), mpf(0.5)])
        digits = int(bits * 0.302) + 4
        coeffs = []
        for i in range(pieces):
            c = _cheb_fit(lambda x: _conv(x) / (Z * Z), mpf(i) / pieces, mpf(i + 1) / pieces, degree)
            coeffs.append([mpmath.nstr(v, digits) for v in c])
        return {"bits": bits, "pieces": pieces, "degree": degree,
                "Z": mpmath.nstr(Z, digits), "coefficients": coeffs}


@dataclass(frozen=True)
class _PsiTable:
    pieces: ChebPieces
    Z: mpf

    def __call__(self, x):
        return self.pieces(abs(x))

    def eval_mpfr(self, x):
        return self.pieces.eval_mpfr(abs(x))


@lru_cache(maxsize=8)
def psi_table(bits: int) -> _PsiTable:
    raw = None
    if PSI_TABLE.exists():
        raw = json.loads(PSI_TABLE.read_text())
        if raw["bits"] < bits:
            raw = None
    if raw is None:
        log.warning("building the mollifier table at %d bits (slow)", bits)
        raw = build_psi_table(bits)
    n = int(raw["pieces"])
    breaks = [mpf(i) / n for i in range(n + 1)]
    with mpmath.workprec(bits + 16):
        return _PsiTable(ChebPieces(breaks, raw["coefficients"], bits + 16), mpf(raw["Z"]))


@lru_cache(maxsize=100000)
def _phi_hat_cached(t: mpf, prec: int) -> mpf:
    with mpmath.workprec(prec):
        # integrand oscillates about t/(4 pi) times on [0, 1/2]
        n = max(2, int(abs(t) / 6) + 1)
        pts = [mpf(k) / (2 * n) for k in range(n + 1)]
        return 2 * mpmath.quad(lambda x: bump(x) * mpmath.cos(t * x), pts)


def psi_hat(t, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """psi_hat(t) = (phi_hat(t) / Z)^2 for the unscaled mollifier."""
    prec = _qprec(ctx)
    with mpmath.workprec(prec):
        t = abs(mpmath.mpmathify(t))
        Z = psi_table(ctx.bits).Z
        return (_phi_hat_cached(+t, prec) / Z) ** 2


@lru_cache(maxsize=8)
def _tau(bits: int) -> mpf:
    ctx = PrecisionContext(bits)
    with mpmath.workprec(_qprec(ctx)):
        return mpmath.findroot(lambda t: psi_hat(t, ctx) - mpf(0.5), mpf(4))


def tau_half(ctx: PrecisionContext = DEFAULT_CONTEXT) -> mpf:
    """The point tau with psi_hat(tau) = 1/2; psi_hat > 1/2 on (-tau, tau)."""
    return _tau(ctx.bits)


# -- scaled mollifier -----------------------------------------------------------

@dataclass(frozen=True)
class MollifierConfig:
    """psi_eps(x) = psi(x/eps) / eps."""

    epsilon: float
    fourier_k: int = 2
    ctx: PrecisionContext = DEFAULT_CONTEXT

    def __post_init__(self):
        if not 0 < self.epsilon < 1:
            raise ValueError("epsilon must lie in (0, 1)")
        if self.fourier_k < 1:
            raise ValueError("fourier_k must be >= 1")

    @property
    def eps(self) -> mpf:
        return mpmath.mpmathify(self.epsilon)

    def psi(self, x):
        e = self.eps
        return psi_table(self.ctx.bits)(x / e) / e

    def psi_hat(self, t):
        return psi_hat(self.eps * t, self.ctx)


def mollifier_eval(cfg: MollifierConfig, x):
    return cfg.psi(mpmath.mpmathify(x))


def mollifier_hat(cfg: MollifierConfig, t):
    return cfg.psi_hat(mpmath.mpmathify(t))


# -- test functions ---------------------------------------------------------------

class TestKind(str, Enum):
    SMOOTHED_COUNT = "smoothed_count"
    GENERIC = "generic"


@dataclass(frozen=True)
class TestFunction:
    """A test function f on [1, oo).

    ``smoothed_count(R, cfg)`` is the f whose Weyl transform is
    g(cosh^2 x) = int_x^oo psi_eps(R - Y) / sqrt(sinh Y) dY.
    ``generic(func, decay_rate)`` wraps a callable with declared exponential
    decay rate > 0.
    """

    __test__ = False  # not a pytest class

    kind: TestKind
    R: float = 0.0
    config: Optional[MollifierConfig] = None
    func: Optional[Callable] = field(default=None, compare=False)
    decay_rate: float = 0.0

    @classmethod
    def smoothed_count(cls, R: float, config: MollifierConfig) -> "TestFunction":
        if not R > config.epsilon:
            raise ValueError("R must exceed epsilon")
        return cls(TestKind.SMOOTHED_COUNT, R=R, config=config)

    @classmethod
    def generic(cls, func: Callable, decay_rate: float) -> "TestFunction":
        if not decay_rate > 0:
            raise ValueError("test functions need a positive exponential decay rate")
        return cls(TestKind.GENERIC, func=func, decay_rate=decay_rate)

    @property
    def ctx(self) -> PrecisionContext:
        return self.config.ctx if self.config else DEFAULT_CONTEXT

    @property
    def support_end(self):
        """sup of the support in u, or None for unbounded support."""
        if self.kind is TestKind.SMOOTHED_COUNT:
            return mpmath.cosh(self.R + self.config.eps) ** 2
        return None

    def g(self, y):
        """Smoothed-count g(y); constant on [0, 1]."""
        self._need_smoothed()
        x = mpmath.acosh(mpmath.sqrt(y)) if y > 1 else mpf(0)
        return smoothed_g(self.R, self.config, x)

    def g_prime(self, y):
        self._need_smoothed()
        return smoothed_g_prime(self.R, self.config, y)

    def __call__(self, u):
        u = mpmath.mpmathify(u)
        if self.kind is TestKind.GENERIC:
            return self.func(u)
        if u <= 1:
            return mpf(0)
        return self.f_of_w(mpmath.acosh(mpmath.sqrt(u)))

    def f_of_w(self, w):
        """f(cosh^2 w); smoothed count only."""
        self._need_smoothed()
        return smoothed_f_table(self.R, self.config)(w)

    def _need_smoothed(self):
        if self.kind is not TestKind.SMOOTHED_COUNT:
            raise TypeError("only the smoothed-count test function has a built-in g")


def smoothed_g(R, cfg: MollifierConfig, x):
    """int_x^oo psi_eps(R - Y) / sqrt(sinh Y) dY."""
    with mpmath.workprec(_qprec(cfg.ctx)):
        R, e = mpmath.mpmathify(R), cfg.eps
        lo, hi = max(mpmath.mpmathify(x), R - e), R + e
        if lo >= hi:
            return mpf(0)
        return mpmath.quad(lambda Y: cfg.psi(R - Y) / mpmath.sqrt(mpmath.sinh(Y)),
                           mpmath.linspace(lo, hi, 5))


def smoothed_g_prime(R, cfg: MollifierConfig, y):
    """g'(y) from sinh(2x) g'(cosh^2 x) = -psi_eps(R - x) / sqrt(sinh x)."""
    y = mpmath.mpmathify(y)
    if y <= 1:
        return mpf(0)
    x = mpmath.acosh(mpmath.sqrt(y))
    return -cfg.psi(R - x) / (mpmath.sqrt(mpmath.sinh(x)) * mpmath.sinh(2 * x))


def smoothed_f_direct(R, cfg: MollifierConfig, u):
    """f(u) for the smoothed count, by Weyl inversion with the analytic g'."""
    tf = TestFunction.smoothed_count(R, cfg)
    return weyl_f_from_g(tf.g, u, g_prime=tf.g_prime, support=_g_prime_support(R, cfg), ctx=cfg.ctx)


@lru_cache(maxsize=8)
def _gl_rule(pieces: int, degree: int, prec: int):
    """Composite Gauss-Legendre rule on [0, 1] as mpfr (node, weight) pairs."""
    with mpmath.workprec(prec):
        base = GaussLegendre(mpmath.mp).calc_nodes(degree, prec)
        with gmpy2.context(gmpy2.get_context(), precision=prec):
            out = []
            for j in range(pieces):
                for x, w in base:
                    node = (mpf(j) + (x + 1) / 2) / pieces
                    out.append((_to_mpfr(node), _to_mpfr(w / (2 * pieces))))
            return tuple(out)


def smoothed_f_quad(R, cfg: MollifierConfig, w, pieces: int = 12, degree: int = 4):
    """f(cosh^2 w) for the smoothed count by a fixed rule (fast path).

    With v = R - eps*xi the inversion formula becomes
    f(cosh^2 w) = (sinh w / pi) int psi(xi) / sqrt(sinh v sinh(v-w) sinh(v+w)) dxi
    over -1 <= xi <= min(1, (R-w)/eps).  The substitution
    xi = top - (top+1) s^2 removes the inverse square root at v = w.
    """
    prec = _qprec(cfg.ctx) + 8
    table = psi_table(cfg.ctx.bits)
    rule = _gl_rule(pieces, degree, prec)
    with gmpy2.context(gmpy2.get_context(), precision=prec):
        R, e, w = (_to_mpfr(mpmath.mpmathify(x)) for x in (R, cfg.eps, w))
        xi_w = (R - w) / e
        top = min(gmpy2.mpfr(1), xi_w)
        if top <= -1 or w <= 0:
            return mpf(0)
        span = top + 1
        gap = e * (xi_w - top)
        total = gmpy2.mpfr(0)
        for s, wt in rule:
            s2 = s * s
            xi = top - span * s2
            v = R - e * xi
            d = gap + e * span * s2
            total += wt * table.eval_mpfr(xi) * s / gmpy2.sqrt(gmpy2.sinh(v) * gmpy2.sinh(d) * gmpy2.sinh(v + w))
        return _to_mpf(2 * span * total * gmpy2.sinh(w) / gmpy2.const_pi())


F_TABLE_DEGREE = 24


@lru_cache(maxsize=32)
def smoothed_f_table(R, cfg: MollifierConfig) -> ChebPieces:
    """Interpolant of w -> f(cosh^2 w) on [0, R + eps].

    Unit pieces far below the mollifier window, geometric refinement toward
    its edge R - eps, then 16 pieces across the window.
    """
    prec = _qprec(cfg.ctx)
    with mpmath.workprec(prec):
        R, e = mpmath.mpmathify(R), cfg.eps
        edge = R - e
        graded = []
        h = e / 4
        while edge - 2 * h > 0 and h < 1:
            graded.append(edge - h)
            h *= 2
        start = edge - h if edge - h > 0 else mpf(0)
        n_out = int(mpmath.ceil(start)) if start > 0 else 0
        breaks = (_split(mpf(0), start, n_out) if n_out else [mpf(0)]) + sorted(graded) + [edge]
        breaks += _split(edge, R + e, 16)[1:]
        breaks = sorted(set(breaks))
        return ChebPieces.fit(lambda w: smoothed_f_quad(R, cfg, w), breaks, F_TABLE_DEGREE, prec + 8)


def _g_prime_support(R, cfg):
    e = cfg.eps
    return (mpmath.cosh(R - e) ** 2, mpmath.cosh(R + e) ** 2)


# -- Weyl pair --------------------------------------------------------------------

def weyl_g_from_f(f, u, convention: str = "inversion", ctx: Optional[PrecisionContext] = None):
    """g(u) from f.

    ``"inversion"`` (default): int_u^oo f(t) / (sqrt(t-u) sqrt(t-1)) dt, the
    exact inverse of :func:`weyl_f_from_g`.  ``"trace"``: half of it,
    int_{sqrt(max(0, u-1))}^oo f(x^2+1) / sqrt(x^2 - (u-1)) dx.
    For u > 1 the substitution x^2 - (u-1) = w^2 gives the smooth integrand
    f(w^2 + u) / sqrt(w^2 + u - 1).
    """
    if convention not in ("inversion", "trace"):
        raise ValueError(f"unknown convention {convention!r}")
    if isinstance(f, TestFunction):
        ctx = ctx or f.ctx
        end = f.support_end
    else:
        end = None
    ctx = ctx or DEFAULT_CONTEXT
    with mpmath.workprec(_qprec(ctx)):
        u = mpmath.mpmathify(u)
        if u < 0:
            raise ValueError("u must be >= 0")
        if u > 1:
            def integrand(w):
                return f(w * w + u) / mpmath.sqrt(w * w + u - 1)
            top = mpmath.sqrt(end - u) if end is not None else None
        else:
            gap = 1 - u  # kept apart so x^2 + gap does not cancel to 0 at u = 1

            def integrand(x):
                return f(x * x + 1) / mpmath.sqrt(x * x + gap)
            top = mpmath.sqrt(end - 1) if end is not None else None
        if end is not None and u >= end:
            return mpf(0)
        if top is not None:
            pts = _split(mpf(0), top, 8)
        else:
            pts = [mpf(0), mpf(1), mpf(4), mpmath.inf]
        val, err = mpmath.quad(integrand, pts, error=True)
        _check(err, val, ctx, "weyl_g_from_f")
        return val if convention == "trace" else 2 * val


def weyl_f_from_g(g: Callable, u, g_prime: Optional[Callable] = None,
                  support: Optional[Tuple] = None, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """f(u) = -(sqrt(u-1)/pi) int_u^oo g'(y) / sqrt(y - u) dy, with y - u = w^2.

    ``support`` bounds the support of g'.  Without ``g_prime`` the derivative
    is taken numerically (Richardson-extrapolated differences) and a warning
    is logged.
    """
    with mpmath.workprec(_qprec(ctx)):
        u = mpmath.mpmathify(u)
        if u < 1:
            raise ValueError("u must be >= 1")
        if u == 1:
            return mpf(0)
        if g_prime is None:
            log.warning("weyl_f_from_g: no analytic derivative, differentiating numerically")

            def g_prime(y):
                return mpmath.diff(g, y)
        if support is not None:
            lo, hi = (mpmath.mpmathify(v) for v in support)
            if hi <= u:
                return mpf(0)
            w_lo = mpmath.sqrt(lo - u) if lo > u else mpf(0)
            w_hi = mpmath.sqrt(hi - u)
            pts = _split(w_lo, w_hi, 6)
        else:
            pts = [mpf(0), mpf(1), mpf(4), mpmath.inf]
        val, err = mpmath.quad(lambda w: 2 * g_prime(u + w * w), pts, error=True)
        _check(err, val, ctx, "weyl_f_from_g")
        return -mpmath.sqrt(u - 1) / mpmath.pi * val


def _split(a, b, n):
    return [a + (b - a) * k / n for k in range(n + 1)]


def _check(err, val, ctx, what):
    if err > ctx.tol_quad * max(1, abs(val)):
        raise ConvergenceError(f"{what}: quadrature error estimate {mpmath.nstr(err, 3)}")


# -- Huber transform -------------------------------------------------------------

def huber_kernel(t, x, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """2F1(s/2, (1-s)/2; 1/2; -x^2) at s = 1/2 + it (real)."""
    s = mpc(0.5, t)
    return mpmath.re(gauss_2f1(s / 2, (1 - s) / 2, mpf(0.5), -x * x, ctx))


@lru_cache(maxsize=8)
def _kernel_ctx(bits: int) -> PrecisionContext:
    # the kernel feeds a quadrature whose target is tol_quad
    return PrecisionContext(max(24, bits // 4 + 32))


def huber_dt(f: TestFunction, t, route: str = "definition", ctx: Optional[PrecisionContext] = None):
    """d_t(f) = int_0^oo f(x^2+1) 2F1(s/2, (1-s)/2; 1/2; -x^2) dx, s = 1/2 + it.

    ``route="fs"`` (smoothed count only) evaluates
    (1/pi) int_{R-eps}^{R+eps} sinh(x)^(-1/2) F_s(cosh^2 x) psi_eps(R-x) dx;
    ``route="both"`` computes the two and raises :class:`RouteDisagreement`
    if they differ by more than 10 tol_quad.
    """
    ctx = ctx or f.ctx
    t = mpmath.mpmathify(t)
    if t < 0:
        raise ValueError("t must be >= 0")
    if route == "definition":
        return _huber_definition(f, t, ctx)
    if route == "fs":
        return _huber_fs(f, t, ctx)
    if route == "both":
        a = _huber_definition(f, t, ctx)
        b = _huber_fs(f, t, ctx)
        if abs(a - b) > 10 * ctx.tol_quad:
            raise RouteDisagreement(f"d_t routes differ by {mpmath.nstr(abs(a - b), 3)} at t = {t}")
        return a
    raise ValueError(f"unknown route {route!r}")


def _oscillation_points(a, b, t, per_period: int = 1):
    # about one subinterval per half period of cos(t x), at least 4
    n = max(4, int((b - a) * max(t, 1) / mpmath.pi * per_period) + 1)
    return _split(a, b, n)


def _huber_definition(f: TestFunction, t, ctx):
    kctx = _kernel_ctx(ctx.bits)
    with mpmath.workprec(_qprec(ctx)):
        if f.kind is TestKind.SMOOTHED_COUNT:
            # x = sinh w; f(x^2 + 1) = f(cosh^2 w) has support w <= R + eps
            R, e = mpmath.mpmathify(f.R), f.config.eps
            pts = sorted(set(_oscillation_points(mpf(0), R - e, t) + _oscillation_points(R - e, R + e, t)))

            def integrand(w):
                return f.f_of_w(w) * huber_kernel(t, mpmath.sinh(w), kctx) * mpmath.cosh(w)
        else:
            # f decays like exp(-rate (x^2 + 1)); the tail beyond x_max is negligible
            x_max = mpmath.sqrt(ctx.bits * math.log(2) / f.decay_rate) + 1
            pts = _oscillation_points(mpf(0), x_max, t)

            def integrand(x):
                return f(x * x + 1) * huber_kernel(t, x, kctx)
        val, err = mpmath.quad(integrand, pts, error=True)
        _check(err, val, ctx, "huber_dt")
        return val


def fs_on_critical_line(t, A, ctx: PrecisionContext = DEFAULT_CONTEXT, cache: Optional[dict] = None):
    """F_s(A^2 + 1) at s = 1/2 + it for A >= 1 by the expansion at infinity.

    ``cache`` keeps the s-dependent coefficients between calls.
    """
    s = mpc(0.5, t)
    if cache is None or "g2" not in cache:
        g2 = coeff_gamma2(s, ctx)
        c1 = coeff_gamma1(s, ctx)
        if cache is not None:
            cache.update(g2=g2, c1=c1)
    else:
        g2, c1 = cache["g2"], cache["c1"]
    rA = mpmath.sqrt(A)
    # the two outer terms are complex conjugates for real t
    val = -c1 / A * _tail_3f2(s, A, ctx) + 2 * mpmath.re(g2 * rA * f_su(s, A, ctx))
    return mpmath.re(val)


def _huber_fs(f: TestFunction, t, ctx):
    if f.kind is not TestKind.SMOOTHED_COUNT:
        raise TypeError("the F_s route exists only for the smoothed-count test function")
    if t == 0:
        raise ValueError("the F_s route needs t > 0")
    with mpmath.workprec(_qprec(ctx)):
        R, e, cfg = mpmath.mpmathify(f.R), f.config.eps, f.config
        cache: dict = {}

        def integrand(x):
            A = mpmath.sinh(x)
            return fs_on_critical_line(t, A, ctx, cache) * cfg.psi(R - x) / mpmath.sqrt(A)
        val, err = mpmath.quad(integrand, _oscillation_points(R - e, R + e, t), error=True)
        _check(err, val, ctx, "huber_dt(fs)")
        return val / mpmath.pi


def huber_dt_approx(R, cfg: MollifierConfig, t):
    """(2/pi) Re(G(s) e^{-iRt}) psi_eps_hat(t), s = 1/2 + it."""
    ctx = cfg.ctx
    with mpmath.workprec(_qprec(ctx)):
        t, R = mpmath.mpmathify(t), mpmath.mpmathify(R)
        if t < 1:
            raise ValueError("the approximation is meant for t >= 1")
        G = big_g(mpc(0.5, t), ctx)
        return 2 / mpmath.pi * mpmath.re(G * mpmath.expj(-R * t)) * cfg.psi_hat(t)


__all__ = [
    "bump", "build_psi_table", "psi_table", "psi_hat", "tau_half", "MollifierConfig",
    "mollifier_eval", "mollifier_hat", "TestKind", "TestFunction", "smoothed_g",
    "smoothed_g_prime", "smoothed_f_direct", "smoothed_f_quad", "smoothed_f_table", "ChebPieces", "weyl_g_from_f", "weyl_f_from_g", "huber_kernel", "huber_dt",
    "fs_on_critical_line", "huber_dt_approx",
]
