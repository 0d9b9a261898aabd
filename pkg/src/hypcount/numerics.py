"""Configurable-precision 2x2 matrix algebra and hyperbolic-geometry oracles.

Matrix entries are ``gmpy2.mpfr`` values at the working precision of a
:class:`PrecisionContext`.  Matrices are projective (PSL(2,R)) objects: every
:class:`Mat2` is stored sign-normalized so that the first entry that is not
negligible is positive.
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass
from typing import Iterator, Union

import gmpy2
import mpmath
from gmpy2 import mpfr

from .errors import DegenerateError, NotHyperbolic, PrecisionOverflow

Real = Union[int, float, str, mpfr, "mpmath.mpf"]


@dataclass(frozen=True)
class PrecisionContext:
    """Working precision and the tolerances derived from it."""

    bits: int = 128

    def __post_init__(self):
        if not isinstance(self.bits, int) or not 24 <= self.bits <= 2000:
            raise ValueError(f"bits must be an integer in [24, 2000], got {self.bits!r}")

    @property
    def tol_eq(self) -> float:
        return 2.0 ** (-self.bits / 2)

    @property
    def tol_quad(self) -> float:
        return 2.0 ** (-self.bits / 4)

    @property
    def overflow_limit(self) -> float:
        return 2.0 ** (self.bits / 2)

    @contextmanager
    def work(self) -> Iterator["PrecisionContext"]:
        """Run a block with both gmpy2 and mpmath at this precision."""
        with gmpy2.context(gmpy2.get_context(), precision=self.bits), mpmath.workprec(self.bits):
            yield self

    def real(self, x: Real) -> mpfr:
        """Parse ``x`` (decimal strings included) at this precision."""
        with gmpy2.context(gmpy2.get_context(), precision=self.bits):
            if isinstance(x, mpmath.mpf):
                return mpfr(mpmath.nstr(x, int(self.bits * 0.302) + 5))
            return mpfr(x)


DEFAULT_CONTEXT = PrecisionContext()


def to_mpf(x: mpfr) -> mpmath.mpf:
    """Exact conversion of an mpfr to an mpmath number."""
    if not gmpy2.is_finite(x):
        raise ValueError(f"non-finite value {x}")
    if x == 0:
        return mpmath.mpf(0)
    man, exp = x.as_mantissa_exp()
    return mpmath.mpf(mpmath.libmp.from_man_exp(int(man), int(exp)))


def _sign_normalize(entries, tol):
    for x in entries:
        if abs(x) > tol:
            if x < 0:
                return tuple(-y for y in entries)
            return tuple(entries)
    return tuple(entries)


@dataclass(frozen=True)
class Mat2:
    """A unimodular 2x2 real matrix taken up to sign."""

    a: mpfr
    b: mpfr
    c: mpfr
    d: mpfr

    @classmethod
    def of(cls, a: Real, b: Real, c: Real, d: Real, ctx: PrecisionContext = DEFAULT_CONTEXT,
           check: bool = True) -> "Mat2":
        entries = tuple(ctx.real(x) for x in (a, b, c, d))
        with ctx.work():
            if check:
                det = entries[0] * entries[3] - entries[1] * entries[2]
                if abs(det - 1) > ctx.tol_eq:
                    raise DegenerateError(f"matrix is not unimodular: det - 1 = {float(det - 1):.3e}")
            return cls(*_sign_normalize(entries, ctx.tol_eq))

    @classmethod
    def identity(cls, ctx: PrecisionContext = DEFAULT_CONTEXT) -> "Mat2":
        return cls.of(1, 0, 0, 1, ctx)

    @classmethod
    def diag(cls, m: Real, ctx: PrecisionContext = DEFAULT_CONTEXT) -> "Mat2":
        with ctx.work():
            mm = ctx.real(m)
            return cls.of(mm, 0, 0, 1 / mm, ctx)

    @property
    def entries(self):
        return (self.a, self.b, self.c, self.d)

    @property
    def precision(self) -> int:
        return max(x.precision for x in self.entries)

    def _local(self):
        return gmpy2.context(gmpy2.get_context(), precision=self.precision)

    def det(self) -> mpfr:
        with self._local():
            return self.a * self.d - self.b * self.c

    def trace(self) -> mpfr:
        with self._local():
            return self.a + self.d

    def inverse(self, ctx: PrecisionContext = DEFAULT_CONTEXT) -> "Mat2":
        with ctx.work():
            return Mat2(*_sign_normalize((self.d, -self.b, -self.c, self.a), ctx.tol_eq))

    def norm_sq(self) -> mpfr:
        """Squared Frobenius norm, equal to 2 cosh d(g i, i)."""
        with self._local():
            return self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d

    def max_abs_diff(self, other: "Mat2") -> mpfr:
        with self._local():
            return max(abs(x - y) for x, y in zip(self.entries, other.entries))

    def __matmul__(self, other: "Mat2") -> "Mat2":
        return mat_mul(self, other)

    def as_strings(self, digits: int = 40):
        return [f"{x:.{digits}g}" for x in self.entries]


def raw_mul(x, y):
    """Entry tuple product; no normalization, caller owns the precision context."""
    a1, b1, c1, d1 = x
    a2, b2, c2, d2 = y
    return (a1 * a2 + b1 * c2, a1 * b2 + b1 * d2, c1 * a2 + d1 * c2, c1 * b2 + d1 * d2)


def mat_mul(x: Mat2, y: Mat2, ctx: PrecisionContext = DEFAULT_CONTEXT) -> Mat2:
    with ctx.work():
        prod = raw_mul(x.entries, y.entries)
        limit = ctx.overflow_limit
        if any(abs(v) > limit for v in prod):
            raise PrecisionOverflow(f"matrix entry exceeds 2^{ctx.bits / 2:g}")
        return Mat2(*_sign_normalize(prod, ctx.tol_eq))


def b_invariant(g: Mat2) -> mpfr:
    """B(g) = ad + bc, constant on double cosets of the diagonal subgroup."""
    with g._local():
        return g.a * g.d + g.b * g.c


def _boundary_image(p_num, p_den, tol):
    """Point p_num/p_den of the boundary; None stands for infinity."""
    if abs(p_den) <= tol:
        return None
    return p_num / p_den


def geodesic_axis_distance(g: Mat2, ctx: PrecisionContext = DEFAULT_CONTEXT,
                           method: str = "endpoints") -> mpfr:
    """cosh of the hyperbolic distance between the geodesics g(I) and I.

    I is the positive imaginary axis.  The image geodesic is located through
    its endpoints g(0) and g(oo) on the boundary; the distance then comes
    either from the center/radius of the image semicircle (``"endpoints"``) or
    from a direct numerical minimization of cosh d(z, I) = |z| / Im z over
    points z of the image (``"minimize"``).  Intersecting or asymptotic
    geodesics give 1.
    """
    with ctx.work():
        tol = ctx.tol_eq
        p = _boundary_image(g.b, g.d, tol)  # g(0)
        q = _boundary_image(g.a, g.c, tol)  # g(oo)
        if p is None or q is None:
            return mpfr(1)
        if abs(p) <= tol or abs(q) <= tol or p * q < 0:
            return mpfr(1)
        if abs(p - q) <= tol:
            raise DegenerateError("image geodesic collapsed to a point")
        if method == "endpoints":
            center = (p + q) / 2
            radius = abs(q - p) / 2
            return abs(center) / radius
        if method == "minimize":
            return _minimize_axis_distance(g, ctx)
        raise ValueError(f"unknown method {method!r}")


def _minimize_axis_distance(g: Mat2, ctx: PrecisionContext) -> mpfr:
    # z(s) = g(i e^s) traces the image geodesic; cosh d(z, I) = |z| / Im z.
    a, b, c, d = (to_mpf(x) for x in g.entries)

    def cosh_dist(s):
        w = mpmath.mpc(0, mpmath.exp(s))
        z = (a * w + b) / (c * w + d)
        return abs(z) / z.imag

    lo, hi = mpmath.mpf(-60), mpmath.mpf(60)
    # coarse scan to bracket the unique minimum, then golden section
    grid = [lo + (hi - lo) * k / 240 for k in range(241)]
    vals = [cosh_dist(s) for s in grid]
    k = min(range(len(vals)), key=vals.__getitem__)
    left, right = grid[max(k - 1, 0)], grid[min(k + 1, len(grid) - 1)]
    invphi = (mpmath.sqrt(5) - 1) / 2
    x1 = right - invphi * (right - left)
    x2 = left + invphi * (right - left)
    f1, f2 = cosh_dist(x1), cosh_dist(x2)
    for _ in range(int(ctx.bits * 0.75) + 20):
        if f1 < f2:
            right, x2, f2 = x2, x1, f1
            x1 = right - invphi * (right - left)
            f1 = cosh_dist(x1)
        else:
            left, x1, f1 = x1, x2, f2
            x2 = left + invphi * (right - left)
            f2 = cosh_dist(x2)
    best = min(f1, f2)
    return ctx.real(best)


def diagonalize_primitive_hyperbolic(g: Mat2, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """Conjugate a hyperbolic element to diag(m, 1/m).

    Returns ``(P, m)`` with ``P g P^-1 = diag(m, 1/m)`` and ``m > 1``.
    """
    with ctx.work():
        tr = g.trace()
        if abs(tr) <= 2 + ctx.tol_eq:
            raise NotHyperbolic(f"|trace| = {float(abs(tr))} <= 2")
        a, b, c, d = g.entries
        if tr < 0:
            a, b, c, d, tr = -a, -b, -c, -d, -tr
        root = gmpy2.sqrt(tr * tr - 4)
        lam = (tr + root) / 2
        mu = 1 / lam

        def eigvec(ev):
            # (g - ev) v = 0; use the better-conditioned row
            if abs(b) >= abs(c):
                if abs(b) > ctx.tol_eq:
                    return (b, ev - a)
            elif abs(c) > ctx.tol_eq:
                return (ev - d, c)
            # g already diagonal
            return (mpfr(1), mpfr(0)) if abs(a - ev) <= abs(d - ev) else (mpfr(0), mpfr(1))

        v1, v2 = eigvec(lam), eigvec(mu)
        det = v1[0] * v2[1] - v2[0] * v1[1]
        if det < 0:
            v2 = (-v2[0], -v2[1])
            det = -det
        scale = 1 / gmpy2.sqrt(det)
        # V = [v1 v2] (columns), P = V^-1 so that P g P^-1 = diag(lam, 1/lam)
        va, vb, vc, vd = v1[0] * scale, v2[0] * scale, v1[1] * scale, v2[1] * scale
        P = Mat2(*_sign_normalize((vd, -vb, -vc, va), ctx.tol_eq))
        return P, lam


def conjugate(P: Mat2, g: Mat2, ctx: PrecisionContext = DEFAULT_CONTEXT) -> Mat2:
    """P g P^-1."""
    return mat_mul(mat_mul(P, g, ctx), P.inverse(ctx), ctx)


__all__ = [
    "PrecisionContext", "DEFAULT_CONTEXT", "Mat2", "mat_mul", "raw_mul", "b_invariant",
    "geodesic_axis_distance", "diagonalize_primitive_hyperbolic", "conjugate", "to_mpf",
]
